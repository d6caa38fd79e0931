"""Compare the numba and numpy kernels on batched exact products and a full closure.

Run: python benchmarks/bench_kernels.py --batch 2000 --repeats 5
"""
import argparse
import time

import numpy as np

from qutritbraid import _kernels
from qutritbraid.groups import GeneratorCatalog, closure


def _batch(cat, size, rng):
    names = ["G1t", "G2t", "FUMt", "N", "G1", "G2"]
    mats = [cat[names[i]] for i in rng.integers(0, len(names), size)]
    num = np.stack([m.num for m in mats])
    den = np.array([m.den for m in mats], dtype=np.int64)
    return num, den


def time_products(backend, a, ad, b, bd, modulus, repeats):
    _kernels.set_backend(backend)
    _kernels.matmul_batch(a[:2], ad[:2], b[:2], bd[:2], modulus)  # warm up / compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = _kernels.matmul_batch(a, ad, b, bd, modulus)
        best = min(best, time.perf_counter() - t0)
    return best, out


def time_closure(backend, cat, repeats):
    _kernels.set_backend(backend)
    gens = [cat["G1t"], cat["G2t"], cat["FUMt"]]
    closure(gens)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        g = closure(gens)
        best = min(best, time.perf_counter() - t0)
    return best, g.order


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--batch", type=int, default=2000)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    cat = GeneratorCatalog()
    rng = np.random.default_rng(args.seed)
    a, ad = _batch(cat, args.batch, rng)
    b, bd = _batch(cat, args.batch, rng)
    modulus = np.asarray(cat.field.modulus, dtype=np.int64)

    t_np, out_np = time_products("numpy", a, ad, b, bd, modulus, args.repeats)
    t_nb, out_nb = time_products("numba", a, ad, b, bd, modulus, args.repeats)
    same = np.array_equal(out_np[0], out_nb[0]) and np.array_equal(out_np[1], out_nb[1])
    print(f"batched 3x3 products over Q(zeta_72), batch {args.batch}")
    print(f"  numpy: {t_np * 1e3:9.2f} ms")
    print(f"  numba: {t_nb * 1e3:9.2f} ms")
    print(f"  speedup {t_np / max(t_nb, 1e-12):.1f}x, identical results: {same}")

    c_np, n_np = time_closure("numpy", cat, args.repeats)
    c_nb, n_nb = time_closure("numba", cat, args.repeats)
    print(f"closure <G1t, G2t, FUMt> (order {n_nb})")
    print(f"  numpy: {c_np * 1e3:9.2f} ms")
    print(f"  numba: {c_nb * 1e3:9.2f} ms")
    print(f"  speedup {c_np / max(c_nb, 1e-12):.1f}x, orders agree: {n_np == n_nb}")


if __name__ == "__main__":
    main()
