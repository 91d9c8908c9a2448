"""Time the ball evaluation kernel: compiled extension vs numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_ball.py [--repeats N]

Each workload evaluates every reduced word in a radius ball and reports
the best wall time per backend.  The two backends walk the identical
enumeration, so the word counts match by construction.
"""

import argparse
import time

import numpy as np

from anosovcert import _ballcore_py
from anosovcert.constructions import BlockSpec, diagonal_copies_rep
from anosovcert.families import sanov_rep, schottky_triple_rep, sym2_schottky_rep

try:
    from anosovcert import _ballcore
except ImportError:
    _ballcore = None


def workloads():
    yield "sanov dim 2", sanov_rep(), 9
    yield "schottky(100) dim 2", schottky_triple_rep(100), 6
    rho = diagonal_copies_rep(sym2_schottky_rep(100), BlockSpec(2, 0, 3))
    yield "copies rep dim 6", rho, 5


def best_time(impl, letter_mats, radius, repeats):
    best = float("inf")
    words = 0
    for _ in range(repeats):
        t0 = time.perf_counter()
        lengths = impl.ball_evaluate(letter_mats, radius, 1e150)[0]
        best = min(best, time.perf_counter() - t0)
        words = len(lengths)
    return best, words


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3,
                    help="timing repetitions per cell (best is kept)")
    args = ap.parse_args()

    print(f"{'workload':<22}{'radius':>7}{'words':>9}"
          f"{'python':>12}{'compiled':>12}{'speedup':>9}")
    for name, rep, radius in workloads():
        mats = np.asarray(rep.letter_matrices(), dtype=np.complex128)
        py_t, words = best_time(_ballcore_py, mats, radius, args.repeats)
        row = f"{name:<22}{radius:>7}{words:>9}{py_t:>11.4f}s"
        if _ballcore is None:
            row += f"{'n/a':>12}{'n/a':>9}"
        else:
            c_t, c_words = best_time(_ballcore, mats, radius, args.repeats)
            assert c_words == words
            row += f"{c_t:>11.4f}s{py_t / c_t:>8.1f}x"
        print(row)
    if _ballcore is None:
        print("compiled extension not built; showing the fallback only")


if __name__ == "__main__":
    main()
