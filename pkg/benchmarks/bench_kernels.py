"""Compare the compiled and pure-Python selection kernels.

    python3 benchmarks/bench_kernels.py --n 1000 --repeat 200

Each kernel runs on the same random inputs with both backends; the table
shows the best per-call time and the speed-up of the compiled one.
"""
import argparse
import math
import timeit

import numpy as np

from expknap.generators import GeneratorSpec, generate_instance
from expknap.kernels import available_backends, get_backend
from expknap.knapsack_online import _reference_ids


def cases(n: int, seed: int):
    rng = np.random.default_rng(seed)
    values = rng.random(n)
    t = int(n / math.e)
    out = np.empty(n, dtype=np.intp)
    inst = generate_instance(GeneratorSpec("uniform", n), seed)
    perm = rng.permutation(n)
    ref = _reference_ids(inst, perm[:t], 2.0)
    aug_args = (inst.bpb[perm], inst.weights[perm], perm.astype(np.int64), t,
                inst.bpb[ref], inst.weights[ref], ref.astype(np.int64), out)
    return {
        "threshold": lambda k: k.threshold_select(values, t, out),
        "classical": lambda k: k.classical_select(values, t, out),
        "ksec(k=10)": lambda k: k.ksec_select(values, 10, t, out),
        "aug_on": lambda k: k.aug_on_select(*aug_args),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    names = sorted(available_backends())
    backends = {name: get_backend(name) for name in names}
    print(f"n={args.n} repeat={args.repeat} backends={','.join(names)}")
    print(f"{'kernel':<12}" + "".join(f"{name + ' (us)':>16}" for name in names) + f"{'speed-up':>10}")
    for label, fn in cases(args.n, args.seed).items():
        times = {}
        for name, mod in backends.items():
            timer = timeit.Timer(lambda: fn(mod))
            times[name] = min(timer.repeat(repeat=5, number=args.repeat)) / args.repeat * 1e6
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:<12}" + "".join(f"{times[name]:>16.2f}" for name in names) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
