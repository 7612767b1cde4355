"""One line per acceptance criterion, collected while the tests run."""

import time
from contextlib import contextmanager

LINES = []


@contextmanager
def criterion(number, title):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  ({time.perf_counter() - start:.1f}s)"
        LINES.append(line)
        print(line)
