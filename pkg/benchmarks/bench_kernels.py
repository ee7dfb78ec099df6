"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--number 3]

Each row runs the same kernel on the same inputs under both backends and
checks the results agree before reporting the speedup.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from artifact import _kernels
from artifact.conic import ConicFrame, enumerate_conic_structures
from artifact.coproduct import square
from artifact.lattice_core import PointPoset, boolean_frame, chain_frame, frame_from_poset
from artifact.relations import diagonal, to_open_cone
from artifact.sublocales import closure_rules


def kernel_cases():
    b6 = boolean_frame(6)
    c40 = chain_frame(40)
    grid = frame_from_poset(PointPoset.chain(4).product(PointPoset.chain(4)))
    cases = []
    for name, f in (("boolean 64", b6), ("chain 40", c40), ("grid 5x5 downsets", grid)):
        ident = np.arange(f.n, dtype=np.int64)
        cases.append((f"distributivity  {name}",
                      lambda f=f: _kernels.distributivity_violation(f.meet, f.join)))
        cases.append((f"parallel        {name}",
                      lambda f=f, t=ident: _kernels.parallel_violation(t, t, f.meet, f.leq_u8)))
        cases.append((f"join-preserving {name}",
                      lambda f=f, t=ident: _kernels.preserve_violation(t, f.join, f.join)))
        cases.append((f"left adjoint    {name}",
                      lambda f=f, t=ident: _kernels.left_adjoint(t, f.leq_u8, f.meet, f.top)))
        cases.append((f"frobenius       {name}",
                      lambda f=f, t=ident: _kernels.frobenius_violation(t, t, f.meet, f.meet)))
    sq = square(boolean_frame(3))
    basis = [sq.frame.enc[p] for p in range(sq.frame.n)][:40]
    pairs = [(sq.rect_bits(1, 2), sq.rect_bits(2, 1)), (sq.rect_bits(3, 5), sq.rect_bits(5, 3))]
    rules = closure_rules(pairs, basis)
    src = [s for s, _ in rules]
    dst = [d for _, d in rules]
    starts = list(sq.frame.enc)
    cases.append(("saturation      B8⊗B8",
                  lambda: _kernels.saturate_bits(starts, src, dst, sq.width)))
    return cases


def pipeline_cases():
    b8 = boolean_frame(3)
    return [
        ("induce R_id,id   B8", lambda: ConicFrame(b8, np.arange(b8.n), np.arange(b8.n)).induced),
        ("cones of Δ       B8", lambda: to_open_cone(_fresh_diagonal(b8))),
        ("conic structures 3-chain", lambda: enumerate_conic_structures(chain_frame(3))),
    ]


def _fresh_diagonal(frame):
    frame._cache.pop("diagonal", None)
    return diagonal(frame)


def _result_key(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (list, tuple)):
        return [_result_key(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def bench(cases, backends, repeat, number, compare=True):
    print(f"{'case':34}" + "".join(f"{b:>14}" for b in backends) + "   speedup")
    for name, fn in cases:
        times, results = [], []
        for b in backends:
            with _kernels.use_backend(b):
                results.append(fn())
                best = min(timeit.repeat(fn, repeat=repeat, number=number)) / number
            times.append(best)
        if compare and len(results) == 2 and _result_key(results[0]) != _result_key(results[1]):
            raise SystemExit(f"backends disagree on {name}")
        speed = f"{times[0] / times[-1]:8.1f}x" if len(times) == 2 else ""
        print(f"{name:34}" + "".join(f"{t * 1e3:12.3f}ms" for t in times) + "  " + speed)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=3)
    opts = ap.parse_args(argv)
    backends = [b for b in ("python", "compiled") if b in _kernels.available()]
    if len(backends) == 1:
        print("compiled kernels are not built; timing the Python fallback only")
    print("-- kernels")
    bench(kernel_cases(), backends, opts.repeat, opts.number)
    print("-- end to end")
    bench(pipeline_cases(), backends, opts.repeat, opts.number, compare=False)


if __name__ == "__main__":
    main()
