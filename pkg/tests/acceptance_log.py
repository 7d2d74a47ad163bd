import contextlib
import time

RESULTS = {}


@contextlib.contextmanager
def criterion(num, title, budget_s):
    """Time the block, assert the runtime budget, record one pass/fail line."""
    t0 = time.perf_counter()
    RESULTS[num] = f"criterion {num} FAIL  {title}"
    try:
        yield
    except BaseException as exc:
        RESULTS[num] = f"criterion {num} FAIL  {title}  ({type(exc).__name__}: {str(exc)[:120]})"
        print(RESULTS[num])
        raise
    dt = time.perf_counter() - t0
    ok = dt < budget_s
    RESULTS[num] = f"criterion {num} {'PASS' if ok else 'FAIL'}  {title}  [{dt:.2f} s / {budget_s} s]"
    print(RESULTS[num])
    assert ok, RESULTS[num]
