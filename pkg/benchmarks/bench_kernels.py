"""Compare the compiled and pure-Python scan kernels on desk-scale workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each workload is a full scan that finds no violation, so both backends do
the same amount of work. Verdicts are cross-checked before timing.
"""

import argparse
import sys
import time

from jumpgreedy.delta_matroid import enumerate_families, verify_symmetric_exchange
from jumpgreedy.jump_systems import box_system, materialize, random_graph, verify_jexc
from jumpgreedy.kernels import BACKEND, BACKENDS


def jexc_workloads(quick: bool):
    yield "box [0,4]^4 (625 pts)", box_system([0] * 4, [4] * 4)
    yield "graph n=5 m=10", materialize(random_graph(5, 10, [7, 1]))
    if not quick:
        yield "box [0,3]^5 (1024 pts)", box_system([0] * 5, [3] * 5)


def time_call(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args(argv)

    if "cython" not in BACKENDS:
        print("compiled kernels are not built; only the Python backend is available", file=sys.stderr)
    names = sorted(BACKENDS, reverse=True)
    print(f"import-time backend: {BACKEND}")
    print(f"{'workload':34s}" + "".join(f"{n:>12s}" for n in names) + f"{'speedup':>10s}")

    rows = []
    for label, J in jexc_workloads(args.quick):
        verdicts = {verify_jexc(J, backend=BACKENDS[n]) for n in names}
        assert len(verdicts) == 1, f"backends disagree on {label}"
        rows.append((f"J-EXC {label}", {n: time_call(lambda n=n: verify_jexc(J, backend=BACKENDS[n]), args.repeat) for n in names}))

    families = list(enumerate_families(3 if args.quick else 4))
    step = 1 if args.quick else 8

    def exchange_all(backend):
        for D in families[::step]:
            verify_symmetric_exchange(D, backend)

    for D in families[::step * 37]:
        assert len({verify_symmetric_exchange(D, BACKENDS[n]) for n in names}) == 1
    label = f"exchange, {len(families[::step])} families n={families[0].ground_size}"
    rows.append((label, {n: time_call(lambda n=n: exchange_all(BACKENDS[n]), args.repeat) for n in names}))

    for label, times in rows:
        speed = ""
        if "cython" in times and "python" in times:
            speed = f"{times['python'] / times['cython']:9.1f}x"
        print(f"{label:34s}" + "".join(f"{times[n]:11.4f}s" for n in names) + f"{speed:>10s}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
