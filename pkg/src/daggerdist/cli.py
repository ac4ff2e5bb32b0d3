"""Command-line verification driver.

Single entry point with three subcommands:

* ``verify``         -- run named suites on a group and emit a report;
* ``describe-group`` -- print the resolved group data (law, weights, radii);
* ``convert``        -- polynomial <-> binomial-basis conversion on a JSON file.

Reports are byte-deterministic for a fixed (config, seed); the process exits
nonzero iff some check has verdict ``fail``.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import distributions as dist
from .distributions import Distribution, convolve, random_dcoeff_distribution
from .groups import (
    PValuedGroup,
    builtin_abelian,
    builtin_heisenberg,
    check_coefficient_bound,
    check_formal_group_axioms,
    check_model_consistency,
    check_polydisc_bound,
    check_pvaluation,
    check_saturation,
    group_to_config,
    load_group,
)
from .mahler import mahler_to_taylor, taylor_to_mahler, verify_norm_identity
from .padic import format_fraction, parse_fraction
from .report import FAIL, PASS, CheckRecord, Report, emit_json, emit_text
from .series import TruncatedSeries, series_from_records, series_to_records

ALL_SUITES = [
    "group-axioms",
    "pvaluation",
    "saturation",
    "coeff-bound",
    "polydisc",
    "mahler",
    "convolution",
    "norms",
    "embeddings",
]

DEFAULT_SIGMAS = "1/4,1/2,3/4,1"


def resolve_group(tag: str) -> PValuedGroup:
    """A builtin tag like heisenberg(3) / abelian(3,2), or a JSON config path."""
    tag = tag.strip()
    if tag.startswith("heisenberg(") and tag.endswith(")"):
        return builtin_heisenberg(int(tag[len("heisenberg(") : -1]))
    if tag.startswith("abelian(") and tag.endswith(")"):
        p, d = (int(t) for t in tag[len("abelian(") : -1].split(","))
        return builtin_abelian(p, d)
    with open(tag) as fh:
        return load_group(json.load(fh))


def _random_poly(rng: random.Random, dim: int, deg: int, p: int, cap: int) -> TruncatedSeries:
    terms = {}
    for _ in range(rng.randrange(1, 6)):
        idx = tuple(rng.randrange(deg + 1) for _ in range(dim))
        while sum(idx) > deg:
            idx = tuple(rng.randrange(deg + 1) for _ in range(dim))
        num = rng.randrange(-(p**3), p**3 + 1) or 1
        terms[idx] = terms.get(idx, Fraction(0)) + Fraction(num, p ** rng.randrange(3))
    terms = {i: c for i, c in terms.items() if c != 0}
    if not terms:
        terms = {(0,) * dim: Fraction(1)}
    return TruncatedSeries(dim, cap, terms, exact=True)


def suite_mahler(G: PValuedGroup, trials: int, seed: int) -> List[CheckRecord]:
    """Gauss-vs-binomial norm identity and conversion round trips at G's prime."""
    rng = random.Random(f"{seed}:mahler:{G.name}")
    radii = [Fraction(1, 4), Fraction(1, 2), Fraction(1)]
    bad_norm, bad_round = [], []
    for t in range(trials):
        dim, deg = (1, 12) if t % 2 == 0 else (2, 6)
        f = _random_poly(rng, dim, deg, G.p, cap=deg)
        rho = [rng.choice(radii)] * dim
        equal, gmag, mmag = verify_norm_identity(f, rho, G.p)
        if not equal:
            bad_norm.append({"trial": t, "gauss": gmag, "mahler": mmag})
        if mahler_to_taylor(taylor_to_mahler(f)) != f:
            bad_round.append({"trial": t})
    return [
        CheckRecord(
            check_id="mahler/norm-identity",
            anchor="the Gauss norm equals the binomial-basis norm with the factorial weight",
            verdict=FAIL if bad_norm else PASS,
            params={"p": G.p, "trials": trials, "seed": seed},
            witness={"violations": bad_norm[:3]} if bad_norm else None,
        ),
        CheckRecord(
            check_id="mahler/roundtrip",
            anchor="binomial-basis conversion is invertible on exact polynomials",
            verdict=FAIL if bad_round else PASS,
            params={"p": G.p, "trials": trials, "seed": seed},
            witness={"violations": bad_round[:3]} if bad_round else None,
        ),
    ]


def suite_convolution(G: PValuedGroup, trials: int, seed: int, cap: int) -> List[CheckRecord]:
    """Dirac homomorphism, associativity, unit, and the opposite product."""
    rng = random.Random(f"{seed}:convolution:{G.name}")
    bound = G.p**6
    records = []

    def rand_point():
        return [Fraction(rng.randrange(bound)) for _ in range(G.d)]

    bad = []
    pair_trials = trials
    for t in range(pair_trials):
        x, y = rand_point(), rand_point()
        conv = convolve(G, Distribution.dirac(G, x, cap), Distribution.dirac(G, y, cap), cap_out=cap)
        expect = Distribution.dirac(G, G.multiply(x, y), cap)
        if conv.moments != expect.moments:
            bad.append({"trial": t, "x": x, "y": y})
    records.append(
        CheckRecord(
            check_id="convolution/dirac-homomorphism",
            anchor="the convolution of point masses is the point mass of the product",
            verdict=FAIL if bad else PASS,
            params={"group": G.name, "trials": pair_trials, "seed": seed, "cap": cap},
            witness={"violations": bad[:3]} if bad else None,
        )
    )

    bad = []
    for t in range(max(trials // 2, 1)):
        x, y, z = rand_point(), rand_point(), rand_point()
        dx, dy, dz = (Distribution.dirac(G, v, cap) for v in (x, y, z))
        left = convolve(G, convolve(G, dx, dy, cap_out=cap), dz, cap_out=cap)
        right = convolve(G, dx, convolve(G, dy, dz, cap_out=cap), cap_out=cap)
        if left.moments != right.moments:
            bad.append({"trial": t, "x": x, "y": y, "z": z})
    records.append(
        CheckRecord(
            check_id="convolution/associativity",
            anchor="convolution is associative on sampled point masses",
            verdict=FAIL if bad else PASS,
            params={"group": G.name, "trials": max(trials // 2, 1), "seed": seed, "cap": cap},
            witness={"violations": bad[:3]} if bad else None,
        )
    )

    unit = Distribution.dirac(G, G.identity, cap)
    lam = random_dcoeff_distribution(G, rng, cap=G.degmax() * cap)
    left_ok = convolve(G, unit, lam, cap_out=cap).moments == {
        b: v for b, v in ((b, lam.moment(b)) for b in lam.moments) if sum(b) <= cap and v != 0
    }
    right_ok = convolve(G, lam, unit, cap_out=cap).moments == {
        b: v for b, v in ((b, lam.moment(b)) for b in lam.moments) if sum(b) <= cap and v != 0
    }
    records.append(
        CheckRecord(
            check_id="convolution/unit",
            anchor="the point mass at the identity is a two-sided unit",
            verdict=PASS if left_ok and right_ok else FAIL,
            params={"group": G.name, "seed": seed, "cap": cap},
            witness=None if left_ok and right_ok else {"left_ok": left_ok, "right_ok": right_ok},
        )
    )

    bad = []
    for t in range(max(trials // 4, 1)):
        x, y = rand_point(), rand_point()
        conv = convolve(
            G, Distribution.dirac(G, x, cap), Distribution.dirac(G, y, cap), cap_out=cap, opposite=True
        )
        expect = Distribution.dirac(G, G.multiply(y, x), cap)
        if conv.moments != expect.moments:
            bad.append({"trial": t, "x": x, "y": y})
    records.append(
        CheckRecord(
            check_id="convolution/opposite",
            anchor="the order-flagged product reverses the factors on point masses",
            verdict=FAIL if bad else PASS,
            params={"group": G.name, "trials": max(trials // 4, 1), "seed": seed, "cap": cap},
            witness={"violations": bad[:3]} if bad else None,
        )
    )
    return records


def _sample_distributions(G: PValuedGroup, rng: random.Random, count: int, cap: int):
    out = []
    for k in range(count):
        if k % 3 == 0:
            pt = [Fraction(rng.randrange(G.p**6)) for _ in range(G.d)]
            out.append(Distribution.dirac(G, pt, cap))
        else:
            out.append(random_dcoeff_distribution(G, rng, cap=cap))
    return out


def suite_norms(
    G: PValuedGroup, sigmas: Sequence[Fraction], n_range: Sequence[int], trials: int, seed: int, cap: int
) -> List[CheckRecord]:
    records = []
    for sigma in sigmas:
        records.extend(dist.check_submultiplicative(G, sigma, trials=trials, seed=seed, cap=cap))
    banach_levels = sorted({n for n in (1, 2, 4, 8) if n_range[0] <= n <= n_range[-1]}) or [n_range[0]]
    for N in banach_levels:
        records.extend(dist.check_banach_submult_N(G, N, trials=trials, seed=seed, cap=cap))
    rng = random.Random(f"{seed}:norms:{G.name}")
    samples = _sample_distributions(G, rng, 10, cap=G.degmax() * cap)
    records.extend(dist.check_norm_tower(samples, max_N=max(n_range)))
    for sigma in sigmas:
        records.extend(dist.check_sandwich(samples[0], sigma))
    return records


def suite_embeddings(
    G: PValuedGroup, sigmas: Sequence[Fraction], n_range: Sequence[int], seed: int, cap: int
) -> List[CheckRecord]:
    rng = random.Random(f"{seed}:embeddings:{G.name}")
    samples = _sample_distributions(G, rng, 6, cap=G.degmax() * cap)
    records = []
    for sigma in sigmas:
        for lam in samples[:1]:
            records.extend(dist.check_contact_embedding(lam, sigma))
        for N in n_range:
            by_direction = {}
            for lam in samples:
                for rec in dist.check_comparison_maps(G, N, sigma, lam):
                    by_direction.setdefault(rec.check_id, []).append(rec)
            for recs in by_direction.values():
                if recs[0].verdict == "regime-unmet":
                    # the regime depends only on (N, sigma); one record suffices
                    records.append(recs[0])
                else:
                    records.extend(recs)
    return records


def run_suites(
    G: PValuedGroup,
    suites: Sequence[str],
    n_range: Sequence[int],
    sigmas: Sequence[Fraction],
    cap: int,
    trials: int,
    seed: int,
) -> Report:
    report = Report(group=G.name, seed=seed)
    for suite in suites:
        if suite == "group-axioms":
            report.extend(check_formal_group_axioms(G))
            if G.model is not None:
                report.extend(check_model_consistency(G, samples=trials, seed=seed))
        elif suite == "pvaluation":
            report.extend(check_pvaluation(G, samples=trials, seed=seed))
        elif suite == "saturation":
            report.extend(check_saturation(G, samples=min(10, max(trials // 10, 3)), seed=seed))
        elif suite == "coeff-bound":
            report.extend(check_coefficient_bound(G))
        elif suite == "polydisc":
            for N in n_range:
                report.extend(check_polydisc_bound(G, N))
        elif suite == "mahler":
            report.extend(suite_mahler(G, trials=trials, seed=seed))
        elif suite == "convolution":
            report.extend(suite_convolution(G, trials=min(trials, 50), seed=seed, cap=min(cap, 4)))
        elif suite == "norms":
            report.extend(
                suite_norms(G, sigmas, n_range, trials=min(trials, 100), seed=seed, cap=min(cap, 4))
            )
        elif suite == "embeddings":
            report.extend(suite_embeddings(G, sigmas, n_range, seed=seed, cap=min(cap, 4)))
        else:
            raise SystemExit(f"unknown suite: {suite} (choose from {', '.join(ALL_SUITES)})")
    return report


def _parse_suites(text: str) -> List[str]:
    if text.strip() == "all":
        return list(ALL_SUITES)
    if text.strip() == "":
        return []
    suites = [s.strip() for s in text.split(",") if s.strip()]
    for s in suites:
        if s not in ALL_SUITES:
            raise SystemExit(f"unknown suite: {s} (choose from {', '.join(ALL_SUITES)})")
    return suites


def _parse_range(text: str) -> List[int]:
    if ".." in text:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise SystemExit(f"bad N range: {text}")
    return list(range(lo, hi + 1))


def _write_out(data: bytes, out: Optional[str]):
    if out in (None, "-"):
        sys.stdout.write(data.decode())
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="daggerdist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    v = sub.add_parser("verify", help="run verification suites and emit a report")
    v.add_argument("--group", default="heisenberg(3)", help="builtin tag or JSON config path")
    v.add_argument("--suites", default="all", help=f"comma list from: {', '.join(ALL_SUITES)}")
    v.add_argument("--N", dest="n_range", default="1..8", help="level range, e.g. 1..8")
    v.add_argument("--sigma", default=DEFAULT_SIGMAS, help="comma list of rationals a/b")
    v.add_argument("--cap", type=int, default=8, help="truncation degree D")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--out", default=None, help="output path (default stdout)")

    d = sub.add_parser("describe-group", help="print the resolved group data")
    d.add_argument("--group", required=True)

    c = sub.add_parser("convert", help="convert a polynomial JSON between bases")
    c.add_argument("--direction", choices=("taylor-to-mahler", "mahler-to-taylor"), required=True)
    c.add_argument("--in", dest="infile", required=True, help="JSON: {dim, cap, terms: [{index, coeff}]}")
    c.add_argument("--out", default=None)
    return parser


def cmd_verify(args) -> int:
    G = resolve_group(args.group)
    suites = _parse_suites(args.suites)
    n_range = _parse_range(args.n_range)
    sigmas = [parse_fraction(s) for s in args.sigma.split(",") if s.strip()]
    report = run_suites(G, suites, n_range, sigmas, cap=args.cap, trials=args.trials, seed=args.seed)
    data = emit_json(report) if args.format == "json" else emit_text(report)
    _write_out(data, args.out)
    return 1 if report.failed else 0


def cmd_describe_group(args) -> int:
    G = resolve_group(args.group)
    config = group_to_config(G)
    config["neighborhoods"] = {
        str(N): {"tau": [format_fraction(t) for t in G.neighborhood_params(N).tau]}
        for N in range(1, 5)
    }
    sys.stdout.write(json.dumps(config, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_convert(args) -> int:
    from .mahler import MahlerFamily

    with open(args.infile) as fh:
        payload = json.load(fh)
    dim, cap = int(payload["dim"]), int(payload["cap"])
    if args.direction == "taylor-to-mahler":
        f = series_from_records(payload["terms"], dim, cap)
        m = taylor_to_mahler(f)
        terms = [
            {"index": list(a), "coeff": format_fraction(c)} for a, c in m.sorted_coeffs()
        ]
    else:
        m = MahlerFamily(dim, cap, {tuple(r["index"]): Fraction(r["coeff"]) for r in payload["terms"]})
        terms = series_to_records(mahler_to_taylor(m))
    out = json.dumps({"dim": dim, "cap": cap, "terms": terms}, indent=2) + "\n"
    _write_out(out.encode(), args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 0
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "describe-group":
        return cmd_describe_group(args)
    return cmd_convert(args)


if __name__ == "__main__":
    sys.exit(main())
