"""Timing of operator construction and three-leg residual evaluation."""

from __future__ import annotations

import time

import numpy as np

from . import families as fam
from . import verify as V
from .graded import make_space
from .operators import three_leg_embeddings

BENCH_NS = (2, 4, 8, 16, 32)
DEFAULT_MEMORY_BUDGET_MB = 4096.0
_BYTES_PER_NNZ = 32  # complex128 value + int64 index + CSR slack

__all__ = ["BENCH_NS", "DEFAULT_MEMORY_BUDGET_MB", "MemoryGuardError", "estimate_bytes", "bench_one",
           "dense_sparse_agreement", "run_bench"]


class MemoryGuardError(MemoryError):
    pass


def estimate_bytes(nnz2: int, N: int) -> float:
    """Upper estimate of the peak bytes held by one three-leg product.

    A two-leg operator with ``nnz2`` entries has ``2N nnz2`` entries per leg
    embedding; a product of two such operators has at most the row length
    times that many.
    """
    d = 2 * N
    nnz3 = nnz2 * d
    row = max(1.0, nnz2 / d ** 2)
    return _BYTES_PER_NNZ * nnz3 * (4 + row)


def bench_one(N: int, point: dict, memory_budget_mb: float = DEFAULT_MEMORY_BUDGET_MB) -> dict:
    space = make_space(N)
    t0 = time.perf_counter()
    R = fam.r_trig(space, point["hbar"], point["u"], point["v"])
    t_build = time.perf_counter() - t0
    est = estimate_bytes(R.nnz, N)
    out = {"N": N, "dim_two_leg": (2 * N) ** 2, "dim_three_leg": (2 * N) ** 3, "nnz_r_trig": R.nnz,
           "construct_seconds": t_build, "estimated_peak_bytes": est}
    if est > memory_budget_mb * 2 ** 20:
        raise MemoryGuardError(f"N={N}: estimated {est / 2**20:.0f} MiB exceeds budget {memory_budget_mb:.0f} MiB")
    emb = three_leg_embeddings(R)
    t0 = time.perf_counter()
    chk = V.aybe_residual("trig", point["x"], point["y"], point["u"], point["v"], point["w"], N)
    t_aybe = time.perf_counter() - t0
    t0 = time.perf_counter()
    prod = emb["12"].mat @ emb["23"].mat
    t_mul = time.perf_counter() - t0
    out.update({
        "nnz_three_leg": emb["12"].nnz,
        "aybe_seconds": t_aybe,
        "aybe_residual_rel": chk.residual_rel,
        "multiply_seconds": t_mul,
        "multiply_nnz_out": int(prod.nnz),
        "multiply_nnz_per_second": prod.nnz / t_mul if t_mul > 0 else None,
    })
    return out


def dense_sparse_agreement(N: int, point: dict) -> float:
    """Max entrywise gap between sparse products and dense matmuls of the AYBE terms."""
    R = fam.spectral_family("trig", make_space(N))
    x, y, u1, u2, u3 = (point[k] for k in ("x", "y", "u", "v", "w"))
    pairs = [(R(x, u1, u2), "12", R(y, u2, u3), "23"),
             (R(y, u1, u3), "13", R(x - y, u1, u2), "12"),
             (R(y - x, u2, u3), "23", R(x, u1, u3), "13")]
    gap = 0.0
    for A, la, B, lb in pairs:
        a, b = three_leg_embeddings(A)[la], three_leg_embeddings(B)[lb]
        sparse = (a.mat @ b.mat).toarray()
        dense = a.toarray() @ b.toarray()
        gap = max(gap, float(np.abs(sparse - dense).max()))
    return gap


def run_bench(Ns=BENCH_NS, seed: int = 0, memory_budget_mb: float = DEFAULT_MEMORY_BUDGET_MB) -> dict:
    rng = np.random.default_rng([seed, 0xBE4C])
    while True:
        point = {k: complex(*rng.uniform(-1, 1, 2)) for k in ("hbar", "x", "y", "u", "v", "w")}
        try:
            fam.r_trig(make_space(1), point["hbar"], point["u"], point["v"])
            V.aybe_residual("trig", point["x"], point["y"], point["u"], point["v"], point["w"], 1)
        except fam.PoleError:
            continue
        break
    results = []
    for N in Ns:
        try:
            results.append(bench_one(N, point, memory_budget_mb))
        except MemoryGuardError as exc:
            results.append({"N": N, "aborted": str(exc)})
    nnz = [(r["N"], r["nnz_r_trig"]) for r in results if "nnz_r_trig" in r]
    fit = None
    if len(nnz) >= 2:
        ns, cs = np.log([n for n, _ in nnz]), np.log([c for _, c in nnz])
        fit = float(np.polyfit(ns, cs, 1)[0])
    return {
        "point": point,
        "results": results,
        "nnz_growth_exponent": fit,
        "dense_sparse_max_gap_N2": dense_sparse_agreement(2, point),
    }
