"""Distributions on a p-valued group: Diracs, basis monomials, convolution,
and the three norm families.

A distribution carries truncated moment data mu_beta = lambda(Z^beta) as the
primary representation; the coefficients d_alpha in the (g_i - 1)-monomial
basis are derived by an exact triangular solve.  Convolution consumes the
moment side through the expanded group-law monomials F^gamma; the basis side
feeds every norm.  Norms computed from truncated data are certified lower
bounds and are only ever placed on the small side of asserted inequalities.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .groups import PValuedGroup, Point
from .mahler import _stirling_product, multi_factorial
from .padic import (
    LogMag,
    MultiIndex,
    format_fraction,
    grlex_key,
    leq_with_integer_factor,
    multi_binom_value,
    multi_factorial_valuation,
    valuation,
)
from .report import FAIL, LOWER_BOUND_PASS, PASS, REGIME_UNMET, CheckRecord
from .series import NormValue


class InsufficientCap(ValueError):
    pass


def _indices_up_to(d: int, cap: int):
    """All multi-indices of dimension d with total degree <= cap, grlex order."""

    def gen(rest: int, budget: int):
        if rest == 0:
            yield ()
            return
        for k in range(budget + 1):
            for tail in gen(rest - 1, budget - k):
                yield (k,) + tail

    return sorted(gen(d, cap), key=grlex_key)


def basis_moment(beta: MultiIndex, alpha: MultiIndex) -> int:
    """Moment of the basis monomial b^alpha at Z^beta: prod s(beta_i, alpha_i) * alpha!."""
    if len(beta) != len(alpha):
        raise ValueError("length mismatch")
    if not all(a <= b for a, b in zip(alpha, beta)):
        return 0
    return _stirling_product(beta, alpha) * multi_factorial(alpha)


class Distribution:
    """Truncated moment family with optional basis coefficients.

    ``exact`` means the stored data determines the whole distribution: either
    ``point`` is set (a Dirac, moments are monomial evaluations) or ``dcoeffs``
    is the complete finite basis expansion.  Exact distributions can produce
    moments of any degree on demand.
    """

    def __init__(
        self,
        group: PValuedGroup,
        cap: int,
        moments: Dict[MultiIndex, Fraction],
        dcoeffs: Optional[Dict[MultiIndex, Fraction]] = None,
        exact: bool = False,
        point: Optional[Point] = None,
    ):
        self.group = group
        self.cap = cap
        self.moments = {tuple(k): Fraction(v) for k, v in moments.items()}
        self.dcoeffs = None if dcoeffs is None else {tuple(k): Fraction(v) for k, v in dcoeffs.items()}
        self.exact = bool(exact)
        self.point = None if point is None else tuple(Fraction(c) for c in point)
        if self.exact and self.point is None and self.dcoeffs is None:
            raise ValueError("an exact distribution needs a point or a full basis expansion")

    # -- construction ------------------------------------------------------

    @classmethod
    def dirac(cls, G: PValuedGroup, x: Sequence, cap: int) -> "Distribution":
        x = G.check_point(x)
        moments = {}
        dcoeffs = {}
        for beta in _indices_up_to(G.d, cap):
            mu = Fraction(1)
            for c, b in zip(x, beta):
                if b:
                    mu *= c**b
            if mu != 0:
                moments[beta] = mu
            dv = multi_binom_value(x, beta)
            if dv != 0:
                dcoeffs[beta] = dv
        return cls(G, cap, moments, dcoeffs, exact=True, point=x)

    @classmethod
    def b_monomial(cls, G: PValuedGroup, alpha: Sequence[int], cap: int) -> "Distribution":
        alpha = tuple(int(a) for a in alpha)
        if sum(alpha) > cap:
            raise ValueError(f"|alpha|={sum(alpha)} exceeds cap {cap}")
        return cls.from_dcoeffs(G, {alpha: Fraction(1)}, cap)

    @classmethod
    def from_dcoeffs(cls, G: PValuedGroup, dcoeffs: Dict[MultiIndex, Fraction], cap: int) -> "Distribution":
        """A finite basis combination; exact by construction."""
        dcoeffs = {tuple(k): Fraction(v) for k, v in dcoeffs.items() if v != 0}
        moments: Dict[MultiIndex, Fraction] = {}
        for beta in _indices_up_to(G.d, cap):
            mu = sum((dv * basis_moment(beta, a) for a, dv in dcoeffs.items()), Fraction(0))
            if mu != 0:
                moments[beta] = mu
        return cls(G, cap, moments, dcoeffs, exact=True)

    # -- moments and basis coefficients ------------------------------------

    def moment(self, beta: MultiIndex) -> Fraction:
        beta = tuple(beta)
        if sum(beta) <= self.cap:
            return self.moments.get(beta, Fraction(0))
        if self.point is not None:
            mu = Fraction(1)
            for c, b in zip(self.point, beta):
                if b:
                    mu *= c**b
            return mu
        if self.exact and self.dcoeffs is not None:
            return sum(
                (dv * basis_moment(beta, a) for a, dv in self.dcoeffs.items()), Fraction(0)
            )
        raise InsufficientCap(f"moment {beta} beyond cap {self.cap} of a truncated distribution")

    def ensure_dcoeffs(self) -> Dict[MultiIndex, Fraction]:
        """Derive d_alpha from moments by the exact triangular solve."""
        if self.dcoeffs is None:
            solved: Dict[MultiIndex, Fraction] = {}
            for beta in _indices_up_to(self.group.d, self.cap):
                acc = self.moments.get(beta, Fraction(0))
                for alpha, dv in solved.items():
                    if all(a <= b for a, b in zip(alpha, beta)) and alpha != beta:
                        acc -= dv * basis_moment(beta, alpha)
                dv = acc / multi_factorial(beta)
                if dv != 0:
                    solved[beta] = dv
            self.dcoeffs = solved
        return self.dcoeffs

    def total_mass(self) -> Fraction:
        return self.moment((0,) * self.group.d)

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        cap = min(self.cap, other.cap)
        for beta in _indices_up_to(self.group.d, cap):
            if self.moment(beta) != other.moment(beta):
                return False
        return True

    def __repr__(self):
        tag = "exact" if self.exact else "truncated"
        return f"Distribution(cap={self.cap}, {tag}, mass={self.total_mass()})"


def convolve(
    G: PValuedGroup,
    lam: Distribution,
    mu: Distribution,
    cap_out: Optional[int] = None,
    opposite: bool = False,
) -> Distribution:
    """Convolution through the group law: nu_gamma = (lam x mu)(F^gamma).

    The primary convention pairs Diracs as delta_x * delta_y = delta_{xy};
    ``opposite=True`` selects the reversed convention delta_x * delta_y =
    delta_{yx} by swapping the factors.
    """
    if opposite:
        return convolve(G, mu, lam, cap_out=cap_out, opposite=False)
    if lam.group is not G or mu.group is not G:
        raise ValueError("distributions must live on the given group")
    degmax = G.degmax()
    if cap_out is None:
        if lam.exact and mu.exact:
            cap_out = min(lam.cap, mu.cap)
        else:
            cap_out = min(lam.cap, mu.cap) // degmax
    needed = degmax * cap_out
    for side in (lam, mu):
        if not side.exact and side.cap < needed:
            raise InsufficientCap(
                f"truncated input of cap {side.cap} cannot support output cap {cap_out} "
                f"(needs moments up to degree {needed})"
            )
    d = G.d
    moments: Dict[MultiIndex, Fraction] = {}
    for gamma in _indices_up_to(d, cap_out):
        fg = G.f_monomial(gamma, cap=max(degmax * sum(gamma), 1))
        acc = Fraction(0)
        for idx, c in fg.terms.items():
            beta, beta2 = idx[:d], idx[d:]
            m1 = lam.moment(beta)
            if m1 == 0:
                continue
            m2 = mu.moment(beta2)
            if m2 == 0:
                continue
            acc += c * m1 * m2
        if acc != 0:
            moments[gamma] = acc
    point = None
    exact = False
    if lam.point is not None and mu.point is not None:
        point = G.multiply(lam.point, mu.point)
        exact = True
    return Distribution(G, cap_out, moments, exact=exact, point=point)


# -- norm families ---------------------------------------------------------


def _sup_norm(entries, truncated_flag: bool) -> NormValue:
    best = None
    for e in entries:
        if best is None or e > best:
            best = e
    mag = LogMag.bottom() if best is None else LogMag(best)
    return NormValue(mag, truncated_flag)


def tau_weight(G: PValuedGroup, alpha: MultiIndex) -> Fraction:
    """tau(alpha) = sum omega_i alpha_i."""
    return sum((w * a for w, a in zip(G.omega, alpha)), Fraction(0))


def st_norm(lam: Distribution, sigma: Fraction) -> NormValue:
    """sup |d_alpha| s^(tau alpha) with s = p^-sigma."""
    sigma = Fraction(sigma)
    G = lam.group
    dcoeffs = lam.ensure_dcoeffs()
    return _sup_norm(
        (-valuation(dv, G.p) - sigma * tau_weight(G, a) for a, dv in dcoeffs.items()),
        lam.exact,
    )


def st_norm_prime(lam: Distribution, sigma: Fraction) -> NormValue:
    """sup |d_alpha| s^|alpha|."""
    sigma = Fraction(sigma)
    G = lam.group
    dcoeffs = lam.ensure_dcoeffs()
    return _sup_norm(
        (-valuation(dv, G.p) - sigma * sum(a) for a, dv in dcoeffs.items()),
        lam.exact,
    )


def dagger_seminorm(lam: Distribution, sigma: Fraction) -> NormValue:
    """sup |alpha! d_alpha| s^|alpha|."""
    sigma = Fraction(sigma)
    G = lam.group
    dcoeffs = lam.ensure_dcoeffs()
    return _sup_norm(
        (
            -valuation(dv, G.p) - multi_factorial_valuation(a, G.p) - sigma * sum(a)
            for a, dv in dcoeffs.items()
        ),
        lam.exact,
    )


def dagger_norm(lam: Distribution, N: int) -> NormValue:
    """Dual Banach norm at level N: sup |alpha! d_alpha| p^(-sum tau_{N,i} alpha_i)."""
    G = lam.group
    tau = G.neighborhood_params(N).tau
    dcoeffs = lam.ensure_dcoeffs()
    return _sup_norm(
        (
            -valuation(dv, G.p)
            - multi_factorial_valuation(a, G.p)
            - sum(t * ai for t, ai in zip(tau, a))
            for a, dv in dcoeffs.items()
        ),
        lam.exact,
    )


# -- randomized families for property checks -------------------------------


def random_dcoeff_distribution(
    G: PValuedGroup, rng: random.Random, cap: int, support_degree: int = 3, nterms: int = 4
) -> Distribution:
    """Seeded finitely-supported basis combination with p-power-scaled coefficients."""
    indices = [a for a in _indices_up_to(G.d, support_degree) if sum(a) > 0]
    dcoeffs: Dict[MultiIndex, Fraction] = {}
    for _ in range(nterms):
        alpha = indices[rng.randrange(len(indices))]
        num = rng.randrange(-(G.p**3), G.p**3) or 1
        shift = rng.randrange(-1, 2)
        dcoeffs[alpha] = dcoeffs.get(alpha, Fraction(0)) + Fraction(num) * Fraction(G.p) ** shift
    dcoeffs = {a: v for a, v in dcoeffs.items() if v != 0}
    if not dcoeffs:
        dcoeffs = {(0,) * G.d: Fraction(1)}
    return Distribution.from_dcoeffs(G, dcoeffs, cap)


# -- inequality checkers ---------------------------------------------------


def check_submultiplicative(
    G: PValuedGroup,
    sigma: Fraction,
    trials: int = 100,
    seed: int = 0,
    cap: int = 4,
) -> List[CheckRecord]:
    """Truncated ||lam * mu||_s <= ||lam||_s ||mu||_s on random exact pairs.

    Requires 0 < sigma <= 1 (that is s in [1/p, 1)); the left side is a
    certified lower bound so a pass is sound.
    """
    sigma = Fraction(sigma)
    if not 0 < sigma <= 1:
        return [
            CheckRecord(
                check_id="norms/st-submultiplicative",
                anchor="submultiplicativity is only claimed for s in [1/p, 1)",
                verdict=REGIME_UNMET,
                params={"group": G.name, "sigma": sigma},
                details={"reason": "sigma outside (0, 1]"},
            )
        ]
    rng = random.Random(f"{seed}:submult:{G.name}:{sigma}")
    bad = []
    for _ in range(trials):
        lam = random_dcoeff_distribution(G, rng, cap=G.degmax() * cap)
        mu = random_dcoeff_distribution(G, rng, cap=G.degmax() * cap)
        conv = convolve(G, lam, mu, cap_out=cap)
        lhs = st_norm(conv, sigma)
        rhs = st_norm(lam, sigma).mag * st_norm(mu, sigma).mag
        if not lhs.mag <= rhs:
            bad.append(
                {
                    "lam": {str(a): format_fraction(v) for a, v in lam.dcoeffs.items()},
                    "mu": {str(a): format_fraction(v) for a, v in mu.dcoeffs.items()},
                    "lhs": lhs.mag,
                    "rhs": rhs,
                }
            )
    return [
        CheckRecord(
            check_id="norms/st-submultiplicative",
            anchor="||lam * mu||_s <= ||lam||_s ||mu||_s (truncated left side)",
            verdict=FAIL if bad else LOWER_BOUND_PASS,
            params={"group": G.name, "sigma": sigma, "trials": trials, "seed": seed, "cap": cap},
            witness={"violations": bad[:3]} if bad else None,
        )
    ]


def check_banach_submult_N(
    G: PValuedGroup, N: int, trials: int = 100, seed: int = 0, cap: int = 4
) -> List[CheckRecord]:
    """Truncated ||lam * mu||_N <= ||lam||_N ||mu||_N on random exact pairs."""
    rng = random.Random(f"{seed}:banach:{G.name}:{N}")
    bad = []
    bound = G.p**6
    for t in range(trials):
        if t % 2 == 0:
            lam = Distribution.dirac(G, [Fraction(rng.randrange(bound)) for _ in range(G.d)], G.degmax() * cap)
            mu = Distribution.dirac(G, [Fraction(rng.randrange(bound)) for _ in range(G.d)], G.degmax() * cap)
        else:
            lam = random_dcoeff_distribution(G, rng, cap=G.degmax() * cap)
            mu = random_dcoeff_distribution(G, rng, cap=G.degmax() * cap)
        conv = convolve(G, lam, mu, cap_out=cap)
        lhs = dagger_norm(conv, N)
        rhs = dagger_norm(lam, N).mag * dagger_norm(mu, N).mag
        if not lhs.mag <= rhs:
            bad.append({"trial": t, "lhs": lhs.mag, "rhs": rhs})
    return [
        CheckRecord(
            check_id="norms/banach-submultiplicative",
            anchor="level-N dual Banach norm is submultiplicative (c = 1, truncated left side)",
            verdict=FAIL if bad else LOWER_BOUND_PASS,
            params={"group": G.name, "N": N, "trials": trials, "seed": seed, "cap": cap},
            witness={"violations": bad[:3]} if bad else None,
        )
    ]


def check_norm_tower(lams: Sequence[Distribution], max_N: int = 8) -> List[CheckRecord]:
    """||lam||_N <= ||lam||_{N+1} for every stored distribution."""
    bad = []
    group_name = lams[0].group.name if lams else "-"
    for k, lam in enumerate(lams):
        for N in range(1, max_N + 1):
            lo = dagger_norm(lam, N).mag
            hi = dagger_norm(lam, N + 1).mag
            if not lo <= hi:
                bad.append({"sample": k, "N": N, "lower": lo, "upper": hi})
    return [
        CheckRecord(
            check_id="norms/tower-monotone",
            anchor="dual Banach norms increase with the level N",
            verdict=PASS if not bad else FAIL,
            params={"group": group_name, "max_N": max_N, "samples": len(lams)},
            witness={"violations": bad[:3]} if bad else None,
        )
    ]


def check_sandwich(lam: Distribution, sigma: Fraction) -> List[CheckRecord]:
    """||.||'_{s^min omega} <= ||.||_s <= ||.||'_{s^max omega}."""
    sigma = Fraction(sigma)
    G = lam.group
    lo = st_norm_prime(lam, sigma * min(G.omega))
    mid = st_norm(lam, sigma)
    hi = st_norm_prime(lam, sigma * max(G.omega))
    ok = lo.mag <= mid.mag <= hi.mag
    return [
        CheckRecord(
            check_id="norms/sandwich",
            anchor="the weighted basis norm sits between the two unweighted scalings",
            verdict=PASS if ok else FAIL,
            params={"group": G.name, "sigma": sigma},
            witness=None if ok else {"lower": lo.mag, "mid": mid.mag, "upper": hi.mag},
        )
    ]


def check_contact_embedding(lam: Distribution, sigma: Fraction) -> List[CheckRecord]:
    """Per-coefficient inequality behind the inclusion into the Banach completion.

    Regime: sigma * min(omega) > 1/(p-1).  Checked per alpha on the support:
    |d_alpha| s^(tau alpha) <= |alpha! d_alpha| (s^{min omega} theta^-1)^|alpha|.
    """
    sigma = Fraction(sigma)
    G = lam.group
    eps = Fraction(1, G.p - 1)
    min_omega = min(G.omega)
    damping = -sigma * min_omega + eps  # exponent of s^{min omega} theta^-1
    params = {"group": G.name, "sigma": sigma, "damping_exponent": damping}
    if not damping < 0:
        return [
            CheckRecord(
                check_id="embeddings/contact",
                anchor="inclusion regime sigma * min(omega) > 1/(p-1)",
                verdict=REGIME_UNMET,
                params=params,
            )
        ]
    bad = []
    for alpha, dv in lam.ensure_dcoeffs().items():
        lhs = -valuation(dv, G.p) - sigma * tau_weight(G, alpha)
        rhs = -valuation(dv, G.p) - multi_factorial_valuation(alpha, G.p) + damping * sum(alpha)
        if not lhs <= rhs:
            bad.append({"alpha": list(alpha), "lhs": LogMag(lhs), "rhs": LogMag(rhs)})
    return [
        CheckRecord(
            check_id="embeddings/contact",
            anchor="per-coefficient damping bound for the inclusion into the completion",
            verdict=PASS if not bad else FAIL,
            params=params,
            witness={"violations": bad[:3]} if bad else None,
        )
    ]


def check_comparison_maps(
    G: PValuedGroup, N: int, sigma: Fraction, lam: Distribution
) -> List[CheckRecord]:
    """Coefficient-level comparison between the level-N dual and the completion.

    Direction (1), a contraction when tau_{N,j} - sigma*min(omega) + 1/(p-1) < 0
    for all j:  |d_alpha| s^(tau alpha) <= |alpha! d_alpha| p^(-sum tau_j alpha_j).

    Direction (2), continuous when sigma*max(omega) - tau_{N,j} - 1/(p-1) < 0
    for all j, up to the polynomial factor (p * alpha_1) ... (p * alpha_d)
    absorbing the digit sums in v(alpha!); the exponent C = 1 of that factor
    is recorded in the report.
    """
    sigma = Fraction(sigma)
    eps = Fraction(1, G.p - 1)
    tau = G.neighborhood_params(N).tau
    min_omega, max_omega = min(G.omega), max(G.omega)
    dcoeffs = lam.ensure_dcoeffs()
    records = []

    regime1 = [t - sigma * min_omega + eps for t in tau]
    params1 = {"group": G.name, "N": N, "sigma": sigma, "regime_exponents": list(regime1)}
    if not all(r < 0 for r in regime1):
        records.append(
            CheckRecord(
                check_id="embeddings/comparison-contraction",
                anchor="contraction regime: each polydisc radius beats the damping",
                verdict=REGIME_UNMET,
                params=params1,
            )
        )
    else:
        bad = []
        for alpha, dv in dcoeffs.items():
            lhs = -valuation(dv, G.p) - sigma * tau_weight(G, alpha)
            rhs = (
                -valuation(dv, G.p)
                - multi_factorial_valuation(alpha, G.p)
                - sum(t * a for t, a in zip(tau, alpha))
            )
            if not lhs <= rhs:
                bad.append({"alpha": list(alpha), "lhs": LogMag(lhs), "rhs": LogMag(rhs)})
        records.append(
            CheckRecord(
                check_id="embeddings/comparison-contraction",
                anchor="per-coefficient contraction from the level-N dual into the completion",
                verdict=PASS if not bad else FAIL,
                params=params1,
                witness={"violations": bad[:3]} if bad else None,
            )
        )

    regime2 = [sigma * max_omega - t - eps for t in tau]
    params2 = {
        "group": G.name,
        "N": N,
        "sigma": sigma,
        "regime_exponents": list(regime2),
        "poly_factor_exponent": 1,
    }
    if not all(r < 0 for r in regime2):
        records.append(
            CheckRecord(
                check_id="embeddings/comparison-continuity",
                anchor="continuity regime: the completion radius beats each polydisc radius",
                verdict=REGIME_UNMET,
                params=params2,
            )
        )
    else:
        bad = []
        for alpha, dv in dcoeffs.items():
            lhs = LogMag(
                -valuation(dv, G.p)
                - multi_factorial_valuation(alpha, G.p)
                - sum(t * a for t, a in zip(tau, alpha))
            )
            rhs = LogMag(
                -valuation(dv, G.p) - sigma * tau_weight(G, alpha) + sum(r * a for r, a in zip(regime2, alpha))
            )
            factor = 1
            for a in alpha:
                if a:
                    factor *= G.p * a
            if not leq_with_integer_factor(lhs, rhs, factor, G.p):
                bad.append({"alpha": list(alpha), "lhs": lhs, "rhs": rhs, "factor": factor})
        records.append(
            CheckRecord(
                check_id="embeddings/comparison-continuity",
                anchor="per-coefficient continuity with the explicit polynomial factor",
                verdict=PASS if not bad else FAIL,
                params=params2,
                witness={"violations": bad[:3]} if bad else None,
            )
        )
    return records
