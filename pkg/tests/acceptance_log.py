"""Collects one PASS/FAIL line per acceptance criterion for the run summary."""

RESULTS: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> None:
    RESULTS.append(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
