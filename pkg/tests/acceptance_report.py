"""Collector for the acceptance pass/fail lines shown in the run summary."""

lines = []


def record(tag: str, ok: bool, detail: str):
    verdict = "PASS" if ok else "FAIL"
    lines.append(f"[{tag}] {verdict}  {detail}")
    return ok
