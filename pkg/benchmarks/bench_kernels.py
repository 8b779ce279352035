"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Times the batched envelope solve (all harmonic levels with at most four
quanta, N = 2..30), the per-level scan of ``solve`` and one Numerov
oracle run, and prints a table with the speed-up of the compiled core.
"""

import argparse
import time

from cyclet import _backend, make_power_kinetics, make_power_potential
from cyclet.et_solver import ground_state_Q, solve, solve_many
from cyclet.oracle import numerov_ground_state, reduce_two_body
from cyclet.oscillator import q_values_up_to_quanta

KIN = make_power_kinetics(0.5, 2)
POT = make_power_potential(0.5, 2)
LINEAR = reduce_two_body(KIN, make_power_potential(1.0, 1.0))
LEVELS = {N: q_values_up_to_quanta(N, 3, 4) for N in range(2, 31)}


def batch(core):
    for N, Qs in LEVELS.items():
        solve_many(KIN, POT, N, Qs, core=core)


def scalar(core):
    for N in range(2, 200):
        solve(KIN, POT, N, ground_state_Q(N, 3), core=core)


def numerov(core):
    numerov_ground_state(LINEAR, core=core)


def best_of(fn, core, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(core)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    names = [n for n in ("compiled", "python") if n in _backend.BACKENDS]
    n_levels = sum(len(q) for q in LEVELS.values())
    cases = [
        (f"solve_many ({n_levels} levels)", batch),
        ("solve (198 ground states)", scalar),
        ("numerov_ground_state (linear)", numerov),
    ]
    print(f"{'kernel':34s}" + "".join(f"{n:>12s}" for n in names) + ("     speed-up" if len(names) == 2 else ""))
    for label, fn in cases:
        t = [best_of(fn, _backend.BACKENDS[n], args.repeat) for n in names]
        row = f"{label:34s}" + "".join(f"{x:11.4f}s" for x in t)
        if len(t) == 2:
            row += f"{t[1] / t[0]:12.1f}x"
        print(row)


if __name__ == "__main__":
    main()
