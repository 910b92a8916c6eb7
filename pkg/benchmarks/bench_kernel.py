"""Compare the compiled reduction kernel with the pure-Python machine.

    python3 benchmarks/bench_kernel.py [--repeat N]

Each workload is run on both backends; the results must agree, and the
best-of-N wall time is reported with the speed-up.
"""

import argparse
import time

from rwb.pca import IFZ, SUCC, App, Num, Var, abstract, candidate_pool, fix, lam, reduce, set_backend
from rwb.pca.reduction import _compiled_run
from rwb.universe import Forcing, generate_fragment, mk_refl_realizer


def _adder():
    # f r n = ifz n 0 (λj. succ (succ (r j))) computes 2n by unfolding n times
    body = abstract("j", App(SUCC, App(SUCC, App(Var("r"), Var("j")))), strict=False)
    return fix(lam("r", "n", App(App(App(IFZ, Var("n")), Num(0)), body)))


def unfold():
    u = _adder()
    return [reduce(App(u, Num(k)), 10**6) for k in (50, 200, 400)]


def pool_sweep():
    pool = candidate_pool(5)
    return [reduce(App(App(t, Num(1)), Num(2)), 2000) for t in pool]


def refl_fragment():
    frag = generate_fragment("v", 2, 2)
    chk = Forcing(frag, budget=10**5)
    R = mk_refl_realizer()
    trees = list(frag)
    return [chk.equal(R, w, w2) for w in trees for w2 in trees]


WORKLOADS = {"fix-unfold": unfold, "pool-sweep": pool_sweep, "refl-pairs": refl_fragment}


def best_of(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = ["python"] + (["compiled"] if _compiled_run is not None else [])
    if len(backends) == 1:
        print("compiled kernel not built; timing the Python machine only")
    print(f"{'workload':<14}" + "".join(f"{b:>12}" for b in backends) + ("     speed-up" if len(backends) == 2 else ""))
    for name, fn in WORKLOADS.items():
        times, results = [], []
        for b in backends:
            set_backend(b)
            t, r = best_of(fn, args.repeat)
            times.append(t)
            results.append(r)
        if len(results) == 2 and results[0] != results[1]:
            raise SystemExit(f"{name}: backends disagree")
        row = f"{name:<14}" + "".join(f"{t:>11.3f}s" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>12.1f}x"
        print(row)


if __name__ == "__main__":
    main()
