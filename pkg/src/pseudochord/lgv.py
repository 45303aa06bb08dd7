"""Arrangement counts of square windows of the sheared grid pattern.

Inside a window of the pattern "unit grid plus lines of slope -1 through the
grid points", the grid itself has a unique arrangement and the ``2s-1``
diagonal curves correspond to non-crossing lattice paths.  Their number is a
determinant of path counts (Lindström-Gessel-Viennot).
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

from .matching import Matching


def lgv_entry(s: int, i: int, j: int) -> int:
    """Path count between source ``i`` and sink ``j`` (1-based) for window size ``s``."""
    n = 2 * s - abs(s - i) - abs(s - j)
    top = n + 3 * abs(i - j)
    assert top % 2 == 0
    t = top // 2
    if t < 0 or t > n:
        return 0
    return comb(n, t)


def lgv_matrix(s: int) -> list[list[int]]:
    if s < 1:
        raise ValueError("window size must be >= 1")
    d = 2 * s - 1
    return [[lgv_entry(s, i, j) for j in range(1, d + 1)] for i in range(1, d + 1)]


def bareiss_det(matrix: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination.

    Zero entries below the pivot are skipped, which keeps the banded LGV
    matrices cheap.
    """
    a = [row[:] for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            lead = row_i[k]
            if lead == 0:
                if pivot != prev:
                    for j in range(k + 1, n):
                        if row_i[j]:
                            row_i[j] = row_i[j] * pivot // prev
            else:
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def _flint_det(matrix: list[list[int]]) -> int:
    import flint

    return int(flint.fmpz_mat(matrix).det())


def lgv_count(s: int, method: str = "auto") -> int:
    """Exact determinant of :func:`lgv_matrix`.

    ``method`` is ``"bareiss"``, ``"flint"`` (python-flint, optional) or
    ``"auto"``, which uses flint for ``s > 60`` when it is importable.
    """
    m = lgv_matrix(s)
    if method == "auto":
        method = "bareiss"
        if s > 60:
            try:
                import flint  # noqa: F401

                method = "flint"
            except ImportError:
                pass
    if method == "flint":
        return _flint_det(m)
    if method == "bareiss":
        return bareiss_det(m)
    raise ValueError(f"unknown determinant method {method!r}")


def log2_lower(n: int) -> int:
    """Largest integer ``t`` with ``2**t <= n``."""
    if n < 1:
        raise ValueError("log2_lower needs n >= 1")
    return n.bit_length() - 1


def grid_window_matching(s: int) -> Matching:
    """Matching of an ``s x s`` window of the grid-plus-diagonals pattern.

    The window is ``[-1/8, s-5/8]^2``: it holds the ``s^2`` lattice points
    ``0..s-1`` in each coordinate, so it is crossed by ``s`` horizontal,
    ``s`` vertical and ``2s-1`` diagonal lines, each diagonal passing
    through lattice points (triple points) inside.
    """
    from .construction import Window, extract_window_matching, matousek_pattern

    if s < 1:
        raise ValueError("window size must be >= 1")
    center = Fraction(s - 1, 2) + Fraction(1, 8)
    side = s - Fraction(1, 2)
    return extract_window_matching(matousek_pattern(s + 2), Window((center, center), side))
