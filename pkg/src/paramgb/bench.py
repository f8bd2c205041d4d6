"""Benchmark harness over a directory of system files."""

from __future__ import annotations

import signal
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from .cgbkit import is_cgb
from .disptree import dispgb
from .idealkit import groebner
from .sysfile import SystemFile, load_system

__all__ = ["BenchRow", "bench_system", "bench_dir", "format_rows"]


@dataclass
class BenchRow:
    id: str
    final_vertices: int | None
    principal: bool | None
    is_cgb: bool | None
    failures: int | None
    elapsed: float
    status: str = "ok"


class _Timeout(Exception):
    pass


@contextmanager
def _time_limit(seconds):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def handler(signum, frame):
        raise _Timeout()

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def bench_system(sysf: SystemFile, name: str | None = None, timeout: float | None = None) -> BenchRow:
    name = name or sysf.name
    t0 = time.perf_counter()
    try:
        with _time_limit(timeout):
            ctx = sysf.context()
            B = sysf.polynomials(ctx)
            system = dispgb(B, ctx)
            rep = is_cgb(groebner(B, ctx.S), system)
    except _Timeout:
        return BenchRow(name, None, None, None, None, time.perf_counter() - t0, "timeout")
    return BenchRow(name, len(system.cases), len(system.discriminant) <= 1, rep.is_cgb,
                    len(rep.failures), time.perf_counter() - t0)


def bench_dir(path, only=None, timeout: float | None = None) -> list[BenchRow]:
    files = sorted(Path(path).glob("*.sys"))
    rows = []
    for f in files:
        if only and f.stem not in only:
            continue
        rows.append(bench_system(load_system(f), f.stem, timeout))
    return rows


def _yn(v):
    return "-" if v is None else ("Y" if v else "N")


def format_rows(rows) -> str:
    head = f"{'id':<22} {'final':>5} {'principal':>9} {'CGB (failures)':>15} {'seconds':>8}"
    lines = [head, "-" * len(head)]
    for r in rows:
        if r.status != "ok":
            lines.append(f"{r.id:<22} {'-':>5} {'-':>9} {r.status:>15} {r.elapsed:>8.2f}")
            continue
        cg = f"{_yn(r.is_cgb)} ({r.failures})"
        lines.append(f"{r.id:<22} {r.final_vertices:>5} {_yn(r.principal):>9} {cg:>15} {r.elapsed:>8.2f}")
    return "\n".join(lines) + "\n"
