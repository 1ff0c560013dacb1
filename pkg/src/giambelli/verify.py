"""Verification suites: each check compares two independently computed
quantities and records residuals, tolerances and tail bounds."""

from __future__ import annotations

import functools
import inspect
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

import numpy as np
from scipy import stats

from . import kernels, oracle, ope
from .partition import from_parts, partitions_up_to
from .symfunc import E_at, H_at, schur_at_omega
from .zmeasure import (
    MixedZParams,
    ZParams,
    expect_fs,
    giambelli_expectation_check,
    sample_many,
    size_pmf,
    weight_n,
)

HALF_POINTS = [Fraction(k, 2) for k in (-5, -3, -1, 1, 3, 5)]
RATIONAL_PARAMS = [("1/2", "1/2", "1/4"), ("1/3", "2/3", "1/10")]
PRINCIPAL = ("1/2+1i", "1/2-1i")


@dataclass
class Check:
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0
    gating: bool = True

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": bool(self.passed),
            "gating": self.gating,
            "seconds": round(self.seconds, 3),
            **{k: _jsonable(v) for k, v in self.metrics.items()},
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tag = "" if self.gating else " (exploratory)"
        brief = ", ".join(f"{k}={_short(v)}" for k, v in self.metrics.items() if not isinstance(v, (list, dict)))
        return f"[{status}] {self.name}{tag}: {brief} ({self.seconds:.1f}s)"


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def _short(v) -> str:
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def _timed(fn: Callable[..., Check]) -> Callable[..., Check]:
    @functools.wraps(fn)
    def run(*args, **kwargs) -> Check:
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        out.seconds = time.perf_counter() - t0
        return out

    return run


# --- z-measure identities ----------------------------------------------------------


@_timed
def check_giambelli_average(max_size: int = 8) -> Check:
    """<Fs_λ> = det[<Fs_{(p_i|q_j)}>]: exact zero for rational parameters, 1e-12 in floats."""
    worst_exact = Fraction(0)
    count = 0
    for z, zp, xi in RATIONAL_PARAMS:
        mp = MixedZParams.of(z, zp, xi)
        for lam in partitions_up_to(max_size):
            worst_exact = max(worst_exact, giambelli_expectation_check(lam, mp))
            count += 1
    mp = MixedZParams.of(*PRINCIPAL, "1/4")
    worst_float = 0.0
    for lam in partitions_up_to(max_size):
        worst_float = max(worst_float, float(giambelli_expectation_check(lam, mp)))
    passed = worst_exact == 0 and worst_float < 1e-12
    return Check(
        "averaged Giambelli identity",
        passed,
        {"max_residual_exact": worst_exact, "max_residual_float": worst_float, "partitions": count},
    )


@_timed
def check_fs_vs_brute(max_size: int = 4, tol: float = 1e-10) -> Check:
    """Closed-form <Fs_μ> against the truncated sum over partitions."""
    mp = MixedZParams.of("1/2", "1/2", "1/4")
    rows = []
    ok = True
    for mu in partitions_up_to(max_size):
        rep = oracle.brute_expect(oracle.FrobeniusSchurEvaluator(mu), mp, tol)
        diff = abs(float(rep.value) - float(expect_fs(mu, mp)))
        good = rep.converged and diff <= rep.tail_bound
        ok &= good
        rows.append({"mu": str(mu), "diff": diff, "tail_bound": rep.tail_bound, "N_max": rep.N_max})
    return Check(
        "closed-form Frobenius-Schur averages vs brute force",
        ok,
        {
            "max_diff": max(r["diff"] for r in rows),
            "max_tail_bound": max(r["tail_bound"] for r in rows),
            "max_N": max(r["N_max"] for r in rows),
            "rows": rows,
        },
    )


TWO_POINT_CASES = [
    (2.3, 3.1),
    (2.3 + 1j, 3.1),
    (-1.5, 4.2),
    (0.7, -0.9 + 0.5j),
    (4j, -3j + 1),
    (5.5 + 2j, 2.2 - 1j),
    (-2.2 - 2j, 0.2),
    (1.1, 1.3),
    (3.3 - 0.4j, -4.4),
    (-0.3 + 6j, 6.7),
]


@_timed
def check_two_point(tol: float = 1e-8) -> Check:
    """Closed-form <H(u)E(v)> against brute force at ten points, two parameter sets."""
    worst = 0.0
    worst_tail = 0.0
    for z, zp, xi in [("1/2", "1/2", "1/4"), (*PRINCIPAL, "1/4")]:
        mp = MixedZParams.of(z, zp, xi)
        for u, v in TWO_POINT_CASES:
            rep = oracle.brute_expect(oracle.HEProduct([u], [v]), mp, tol=1e-10)
            val = complex(kernels.two_point_avg_discrete(u, v, mp))
            worst = max(worst, abs(complex(rep.value) - val))
            worst_tail = max(worst_tail, rep.tail_bound)
    return Check("two-point average vs brute force", worst < tol, {"max_diff": worst, "max_tail_bound": worst_tail, "tol": tol})


@_timed
def check_determinantal(seed: int = 3, tol: float = 1e-7) -> Check:
    """<det[H(u_i)E(v_j)/(u_i+v_j)]> = det[<H(u_i)E(v_j)>/(u_i+v_j)] for d = 2, 3."""
    rng = np.random.default_rng(seed)
    mp = MixedZParams.of("1/2", "1/2", "1/4")
    rows = []
    for d in (2, 3, 3):
        # points on a circle away from the positive half-lattice
        us = [complex(3.5 * np.exp(1j * t)) for t in rng.uniform(0.6, 2 * np.pi - 0.6, d)]
        vs = [complex(3.5 * np.exp(1j * t)) for t in rng.uniform(0.6, 2 * np.pi - 0.6, d)]
        chk = oracle.determinantal_identity_check(us, vs, mp, tol=1e-9)
        rows.append({"d": d, "residual": chk.residual, "tail_bound": chk.tail_bound, "N_max": chk.lhs.N_max})
    worst = max(r["residual"] for r in rows)
    bound = max(tol, max(r["tail_bound"] for r in rows))
    return Check("determinantal identity d=2,3", worst < bound, {"max_residual": worst, "tol": tol, "rows": rows})


# --- kernels ------------------------------------------------------------------------


@_timed
def check_kernel_vs_oracle(tol: float = 1e-8) -> Check:
    """det[K] on all subsets of {±1/2, ±3/2, ±5/2} with m <= 3 vs brute-force ρ_m,
    for the hypergeometric kernel and for the residue-form kernel."""
    worst_h = worst_r = 0.0
    tail = 0.0
    for z, zp, xi in [("1/2", "1/2", "1/4"), (*PRINCIPAL, "1/3")]:
        mp = MixedZParams.of(z, zp, xi)
        brute, rep = oracle.brute_rho_all(HALF_POINTS, mp, 3, tol=1e-11)
        tail = max(tail, rep.tail_bound)
        for pts, val in brute.items():
            worst_h = max(worst_h, abs(kernels.rho_m_det(list(pts), mp) - val))
            worst_r = max(worst_r, abs(kernels.rho_m_det(list(pts), mp, kernel=kernels.kernel_via_residues) - val))
    return Check(
        "kernel determinants vs brute-force correlations",
        worst_h < tol and worst_r < tol,
        {"max_diff_hypergeometric": worst_h, "max_diff_residue_form": worst_r, "tail_bound": tail, "tol": tol},
    )


@_timed
def check_jump_and_factorization(seed: int = 5) -> Check:
    """Residue of m equals m w at |x| <= 7/2; <E(-v)H(u)> = m11(v)m22(u) - m21(v)m12(u)."""
    worst_jump = 0.0
    worst_fact = 0.0
    rng = np.random.default_rng(seed)
    for z, zp, xi in [("1/2", "1/2", "1/4"), ("1/3", "2/3", "1/10"), (*PRINCIPAL, "1/4")]:
        mp = MixedZParams.of(z, zp, xi)
        for k in range(-7, 8, 2):
            worst_jump = max(worst_jump, kernels.jump_check(Fraction(k, 2), mp))
        for _ in range(20):
            u = complex(*rng.uniform(-6, 6, 2))
            v = complex(*rng.uniform(-6, 6, 2))
            lhs = complex(kernels.two_point_avg_discrete(u, -v, mp))
            rhs = complex(kernels.he_factorized(v, u, mp))
            worst_fact = max(worst_fact, abs(lhs - rhs))
    return Check(
        "jump condition and factorization",
        worst_jump < 1e-9 and worst_fact < 1e-10,
        {"max_jump_residual": worst_jump, "max_factorization_residual": worst_fact},
    )


# --- sampler --------------------------------------------------------------------------


@_timed
def check_sampler(samples: int = 100_000, seed: int = 7, workers: int = 1, params=("1/2", "1/2", "1/2")) -> Check:
    """χ² test of |λ| against the negative binomial law; empirical ρ_1 vs K(x, x)."""
    mp = MixedZParams.of(*params)
    draws = sample_many(mp, samples, seed, workers)
    sizes = np.array([lam.size for lam in draws])
    # bins 0..B-1 with expected count >= 5 and a pooled tail
    probs = []
    n = 0
    while samples * size_pmf(n, mp) >= 5:
        probs.append(size_pmf(n, mp))
        n += 1
    B = len(probs)
    probs.append(max(0.0, 1.0 - sum(probs)))
    observed = np.bincount(np.minimum(sizes, B), minlength=B + 1)
    expected = np.array(probs) * samples
    chi2, p_value = stats.chisquare(observed, expected)
    rho_rows = []
    rho_ok = True
    configs = [set(lam.lattice_config().points) for lam in draws]
    for x in (Fraction(-3, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2)):
        hits = sum(x in c for c in configs)
        p_hat = hits / samples
        se = math.sqrt(max(p_hat * (1 - p_hat), 1e-300) / samples)
        target = kernels.kernel_discrete(x, x, mp)
        z = abs(p_hat - target) / se
        rho_ok &= z < 4
        rho_rows.append({"x": str(x), "empirical": p_hat, "kernel": target, "z": z})
    return Check(
        "sampler size law and one-point function",
        p_value > 0.01 and rho_ok,
        {
            "chi2": float(chi2),
            "dof": B,
            "p_value": float(p_value),
            "max_rho_z": max(r["z"] for r in rho_rows),
            "samples": samples,
            "seed": seed,
            "rho": rho_rows,
        },
    )


# --- orthogonal polynomial ensembles ----------------------------------------------------


def ope_test_measures() -> list[ope.DiscreteMeasure]:
    F = Fraction
    return [
        ope.DiscreteMeasure.uniform([1, 2, 3, 4, 5, 6, 7]),
        ope.DiscreteMeasure([F(1, 2), 1, 2, 3, -1, -2], [1, F(1, 2), F(1, 4), F(1, 8), F(1, 16), F(1, 32)]),
        ope.DiscreteMeasure([-3, F(1, 3), 1, F(5, 2), 4, 7], [2, 1, 3, F(1, 5), 1, F(7, 3)]),
    ]


@_timed
def check_ope(max_size: int = 8) -> Check:
    """Exact OPE identities: normalisation, Giambelli, moment determinants,
    correlation functions from both kernels."""
    counts = {"normalization": 0, "giambelli": 0, "schur_average": 0, "correlations": 0}
    failures = []
    lams = partitions_up_to(max_size)
    for alpha in ope_test_measures():
        for N in range(1, 5):
            spec = ope.EnsembleSpec(alpha, N)
            total = sum(p for _, p in spec.configurations)
            counts["normalization"] += 1
            if total != 1 or spec.partition_function != spec.hankel_det():
                failures.append(("normalization", N))
            for lam in lams:
                counts["giambelli"] += 1
                if ope.giambelli_check_ope(lam, spec) != 0:
                    failures.append(("giambelli", str(lam), N))
                if lam.size <= 6:
                    counts["schur_average"] += 1
                    if ope.avg_schur(lam, spec) != ope.avg_schur_enum(lam, spec):
                        failures.append(("schur_average", str(lam), N))
            for m in (1, 2, 3):
                for pts in combinations(alpha.atoms, m):
                    counts["correlations"] += 1
                    b = ope.brute_rho(pts, spec)
                    if ope.rho_det(pts, spec, ope.cd_kernel) != b or ope.rho_det(pts, spec, ope.residue_kernel) != b:
                        failures.append(("correlations", [str(p) for p in pts], N))
    return Check("orthogonal polynomial ensemble identities", not failures, {**counts, "failures": len(failures), "failed": failures[:10]})


# --- continuous regime -------------------------------------------------------------


@_timed
def check_whittaker(n: int = 400, samples: int = 20_000, seed: int = 11, workers: int = 1) -> Check:
    """F3 expression vs hook-sum series; W closed form; Monte Carlo for both
    two-point averages; positivity of the continuous one-point function."""
    from .specfun import whittaker_w

    zp = ZParams(*PRINCIPAL)
    m = {}
    # hook-sum series
    f3_val = complex(kernels.two_point_avg_omega(5, 5, zp))
    series = oracle.hook_series_omega(5, 5, zp, order=120)
    m["hook_series_diff"] = abs(f3_val - series)
    # W_{μ+1/2, μ}(x) = x^{μ+1/2} e^{-x/2}
    wdiff = 0.0
    for mu in (0.25, 0.5 + 1j, 1.3, 0.5j):
        for x in (0.3, 1.0, 2.5, 7.0):
            ref = complex(x ** (mu + 0.5) * math.exp(-x / 2))
            wdiff = max(wdiff, abs(complex(whittaker_w(mu + 0.5, mu, x)) - ref) / abs(ref))
    m["whittaker_closed_form_rel"] = wdiff
    # Monte Carlo over images of M^(n)
    simplex = oracle.sample_omega(zp, n, samples, seed, workers=workers)
    cone = oracle.sample_omega(zp, n, samples, seed + 1, tilde=True, workers=workers)
    zs = []
    for u, v in [(5, 5), (-4 + 3j, 6 + 2j)]:
        est = oracle.mc_expect_omega(lambda w: H_at(u, w) * E_at(v, w), zp, points=simplex)
        zs.append(est.zscore(kernels.two_point_avg_omega(u, v, zp)))
    s2 = oracle.mc_expect_omega(lambda w: schur_at_omega(from_parts([2]), w), zp, points=simplex)
    zs.append(s2.zscore(float(weight_n(from_parts([2]), zp))))
    for u, v in [(-5, -5), (2 + 3j, -1 + 2j), (-4 + 3j, -3 - 4j)]:
        est = oracle.mc_expect_omega(lambda w: H_at(u, w) * E_at(v, w), zp, points=cone)
        zs.append(est.zscore(kernels.two_point_avg_tilde(u, v, zp)))
    m["mc_max_z"] = max(zs)
    m["mc_z"] = zs
    grid = [s * k / 10 for s in (-1, 1) for k in range(1, 51)]
    rho = [kernels.rho1_whittaker(x, zp) for x in grid]
    m["min_rho1"] = min(rho)
    passed = m["hook_series_diff"] < 1e-8 and wdiff < 1e-10 and m["mc_max_z"] < 3 and m["min_rho1"] >= 0
    return Check("Whittaker regime", passed, m)


@_timed
def check_scaling_limit(xi: str = "99/100") -> Check:
    """Exploratory: (1-ξ)^{-1} ρ_1^disc(X) against ρ_1^cont((1-ξ)X)."""
    zp = ZParams(*PRINCIPAL)
    mp = MixedZParams(zp, xi)
    e = 1 - float(mp.xi)
    rows = []
    for X in (Fraction(-101, 2), Fraction(-51, 2), Fraction(51, 2), Fraction(101, 2)):
        disc = kernels.kernel_discrete(X, X, mp) / e
        cont = kernels.rho1_whittaker(float(X) * e, zp)
        rows.append({"X": str(X), "x": float(X) * e, "discrete_scaled": disc, "continuous": cont, "rel": abs(disc / cont - 1)})
    worst = max(r["rel"] for r in rows)
    return Check("scaling limit to the Whittaker kernel", worst < 0.05, {"max_rel": worst, "rows": rows}, gating=False)


SUITES: dict[str, list[Callable[..., Check]]] = {
    "giambelli": [check_giambelli_average, check_fs_vs_brute],
    "kernel-vs-oracle": [check_two_point, check_determinantal, check_kernel_vs_oracle, check_jump_and_factorization],
    "ope": [check_ope],
    "whittaker": [check_whittaker, check_scaling_limit],
    "sampler": [check_sampler],
}


def run_suite(name: str, **options) -> list[Check]:
    """Run a named suite; options are passed to the checks that accept them."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    out = []
    for fn in SUITES[name]:
        params = inspect.signature(fn).parameters
        out.append(fn(**{k: v for k, v in options.items() if k in params and v is not None}))
    return out


__all__ = [
    "Check",
    "SUITES",
    "run_suite",
    "check_giambelli_average",
    "check_fs_vs_brute",
    "check_two_point",
    "check_determinantal",
    "check_kernel_vs_oracle",
    "check_jump_and_factorization",
    "check_sampler",
    "check_ope",
    "check_whittaker",
    "check_scaling_limit",
    "ope_test_measures",
]
