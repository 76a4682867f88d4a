"""Command-line interface.

Subcommands map one-to-one onto the library: hurwitz and classnum dump
batch tables, sieve runs the local-conditions sieve on the class-number
q-expansion, levels and sturm expose the bound arithmetic, search and
density run the discriminant machinery, frey enumerates certified rank-0
twist discriminants, and paper-examples reproduces the two worked
examples end to end as a single JSON document.

Exit codes: 0 success, 2 for invalid input or flags, 1 for an internal
invariant breach (which no valid input should be able to trigger).
Output is deterministic and independent of --threads.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import classnumbers, conditions, elliptic, levels, qseries

DEFAULT_CEILING = 10**6


def _csv_out(lines, stream):
    for line in lines:
        stream.write(line + "\n")


def _fraction_json(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_prime_set(text: str | None) -> frozenset[int]:
    if not text:
        return frozenset()
    return frozenset(int(tok) for tok in text.split(",") if tok.strip())


def _conditions_from(args) -> conditions.LocalConditions:
    return conditions.LocalConditions(
        ell=args.ell,
        ramified=_parse_prime_set(getattr(args, "ramified", None)),
        split=_parse_prime_set(getattr(args, "split", None)),
        inert=_parse_prime_set(getattr(args, "inert", None)),
    )


def _add_sigma_flags(parser, ell_required=True):
    parser.add_argument("--ell", type=int, required=ell_required)
    parser.add_argument("--split", help="comma-separated primes required to split")
    parser.add_argument("--inert", help="comma-separated primes required to stay inert")
    parser.add_argument("--ramified", help="comma-separated primes required to ramify")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadclass",
        description="Exact class-number tables, local-condition sieves and twist searches",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("hurwitz", help="table of 12*H(n)")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)

    p = sub.add_parser("classnum", help="class numbers of fundamental discriminants")
    p.add_argument("--max", type=int)
    p.add_argument("--d", type=int, help="a single negative fundamental discriminant")
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)

    p = sub.add_parser("sieve", help="sieved class-number q-expansion")
    _add_sigma_flags(p)
    p.add_argument("--truncation", type=int, required=True)
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)

    p = sub.add_parser("levels", help="level and bound constants for conditions")
    _add_sigma_flags(p)
    p.add_argument("--out", choices=("json",), default="json")

    p = sub.add_parser("search", help="discriminants meeting conditions, ell-indivisible")
    _add_sigma_flags(p)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)

    p = sub.add_parser("density", help="ell-indivisibility proportion vs prediction")
    _add_sigma_flags(p)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--no-conditions", action="store_true",
                   help="count without any splitting conditions")
    p.add_argument("--out", choices=("json",), default="json")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)

    p = sub.add_parser("frey", help="rank-0 twist discriminants with certificates")
    p.add_argument("--a-invariants", required=True,
                   help="a1,a2,a3,a4,a6 of the curve")
    p.add_argument("--conductor", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--assert-torsion-hypothesis", action="store_true")
    p.add_argument("--ignore-hypothesis-failures", action="store_true",
                   help="enumerate even when the criterion hypotheses fail")
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)

    p = sub.add_parser("sturm", help="generic Sturm bound (k/12) * index")
    p.add_argument("--weight-times-two", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--out", choices=("json",), default="json")

    p = sub.add_parser("paper-examples", help="reproduce the worked examples")
    p.add_argument("--max", type=int, default=10**4,
                   help="twist search bound for the curve example")
    p.add_argument("--out", choices=("json",), default="json")
    p.add_argument("--threads", type=int, default=1)

    return parser


def _cmd_hurwitz(args, stream) -> int:
    table = classnumbers.hurwitz_table(args.max, threads=args.threads,
                                       ceiling=args.ceiling)
    if args.out == "csv":
        _csv_out(table.csv_lines(), stream)
    else:
        doc = {"max_n": table.max_n,
               "twelve_H": [int(v) for v in table.values]}
        stream.write(json.dumps(doc) + "\n")
    return 0


def _cmd_classnum(args, stream) -> int:
    if (args.max is None) == (args.d is None):
        raise ValueError("classnum needs exactly one of --max or --d")
    rows = []
    if args.d is not None:
        rows.append((args.d, classnumbers.class_number(args.d)))
    else:
        table = classnumbers.class_number_table(args.max, threads=args.threads,
                                                ceiling=args.ceiling)
        for n in range(3, args.max + 1):
            if table.fundamental[n]:
                rows.append((-n, int(table.h[n])))
    if args.out == "csv":
        _csv_out(["D,h"] + [f"{d},{h}" for d, h in rows], stream)
    else:
        stream.write(json.dumps([{"D": d, "h": h} for d, h in rows]) + "\n")
    return 0


def _cmd_sieve(args, stream) -> int:
    if args.truncation > args.ceiling:
        raise ValueError(f"truncation {args.truncation} exceeds ceiling {args.ceiling}")
    lc = _conditions_from(args)
    series = qseries.build_h_sigma(lc, args.truncation, threads=args.threads)
    if args.out == "csv":
        _csv_out(series.csv_lines(), stream)
    else:
        doc = {"truncation": series.truncation, "level": series.level,
               "coefficients": [{"n": n,
                                 "numerator": series.holo[n].numerator,
                                 "denominator": series.holo[n].denominator}
                                for n in series.support()]}
        stream.write(json.dumps(doc) + "\n")
    return 0


def _cmd_levels(args, stream) -> int:
    lc = _conditions_from(args)
    report = levels.bound_report(lc)
    doc = {
        "q_sigma": report.q_sigma,
        "n_sigma": report.n_sigma,
        "index": report.index,
        "m_sigma": _fraction_json(report.m_sigma),
        "r_sigma": report.r_sigma,
    }
    if report.note:
        doc["note"] = report.note
    stream.write(json.dumps(doc) + "\n")
    return 0


def _cmd_search(args, stream) -> int:
    lc = _conditions_from(args)
    found = conditions.search_discriminants(lc, args.max, threads=args.threads,
                                            ceiling=args.ceiling)
    if args.out == "csv":
        lines = ["D,h,ell_divides"]
        for d in found:
            lines.append(f"{d},{classnumbers.class_number(d)},0")
        _csv_out(lines, stream)
    else:
        stream.write(json.dumps(found) + "\n")
    return 0


def _cmd_density(args, stream) -> int:
    lc = None if args.no_conditions else _conditions_from(args)
    report = conditions.density_report(lc, args.ell, args.max,
                                       threads=args.threads, ceiling=args.ceiling)
    constant = None
    if report.lower_bound_constant is not None:
        num, den, m_sig = report.lower_bound_constant
        constant = {"numerator": num, "denominator": den,
                    "m_sigma": _fraction_json(m_sig)}
    doc = {
        "x": report.x,
        "ell": report.ell,
        "total_fundamental": report.total_fundamental,
        "indivisible_count": report.indivisible_count,
        "in_T_sigma_count": report.in_T_sigma_count,
        "cl_prediction": float(f"{report.cl_prediction:.12g}"),
        "lower_bound_constant": constant,
        "constant_note": report.constant_note,
    }
    stream.write(json.dumps(doc) + "\n")
    return 0


def _cmd_frey(args, stream) -> int:
    try:
        ainvs = tuple(int(t) for t in args.a_invariants.split(","))
    except ValueError as exc:
        raise ValueError("--a-invariants must be five comma-separated integers") from exc
    if len(ainvs) != 5:
        raise ValueError("--a-invariants must have exactly five entries")
    curve = elliptic.derive_invariants(
        ainvs, conductor=args.conductor, ell=args.ell,
        torsion_hypothesis_asserted=args.assert_torsion_hypothesis)
    certs = elliptic.rank_zero_twists(
        curve, args.max, threads=args.threads,
        enforce_hypotheses=not args.ignore_hypothesis_failures)
    rows = []
    for cert in certs:
        payload = json.dumps({
            "d_evaluated": cert.d_evaluated,
            "symbols": {str(p): s for p, s in cert.symbols},
            "even_discriminant": cert.even_discriminant,
            "torsion_hypothesis_asserted": curve.torsion_hypothesis_asserted,
        }, separators=(",", ":"))
        rows.append((cert.discriminant, cert.h, payload))
    if args.out == "csv":
        lines = ["D,h,certificate_json"]
        for d, h, payload in rows:
            quoted = '"' + payload.replace('"', '""') + '"'
            lines.append(f"{d},{h},{quoted}")
        _csv_out(lines, stream)
    else:
        stream.write(json.dumps([{"D": d, "h": h, "certificate": json.loads(p)}
                                 for d, h, p in rows]) + "\n")
    return 0


def _cmd_sturm(args, stream) -> int:
    bound = levels.sturm_bound(args.weight_times_two, args.level)
    doc = {
        "weight_times_two": args.weight_times_two,
        "level": args.level,
        "bound_numerator": bound.numerator,
        "bound_denominator": bound.denominator,
    }
    stream.write(json.dumps(doc) + "\n")
    return 0


def _cmd_paper_examples(args, stream) -> int:
    example_one = conditions.paper_example_one_check()
    example_one.pop("per_prime")  # keep the document compact

    curve = elliptic.derive_invariants(
        (0, -1, 1, 20, -8), conductor=203, ell=5,
        torsion_hypothesis_asserted=True)
    obstructed, t_plus, t_minus = elliptic.frey_sets(curve)
    failures = elliptic.verify_twist_hypotheses(curve)
    certs = elliptic.rank_zero_twists(curve, args.max, threads=args.threads,
                                      enforce_hypotheses=False)
    example_two = {
        "curve": "203.a1",
        "a_invariants": list(curve.a_invariants()),
        "conductor": curve.conductor,
        "conductor_factors": [7, 29],
        "torsion_group_asserted": "Z/5Z",
        "delta": curve.delta,
        "j_numerator": curve.j_num,
        "j_denominator": curve.j_den,
        "hypotheses": {
            "odd_conductor": curve.conductor % 2 == 1,
            "obstructed_primes": sorted(obstructed),
            "obstructed_primes_empty": not obstructed,
            "ord_5_j_nonnegative": elliptic.reduction_at(curve, 5).ord_j >= 0,
            "t_plus": sorted(t_plus),
            "t_minus": sorted(t_minus),
            "t_plus_t_minus_free_of_1_mod_5":
                all(p % 5 != 1 for p in t_plus | t_minus),
            "failures": failures,
        },
        "hypotheses_note": (
            "the enumeration below ignores hypothesis failures so the "
            "pipeline output is still reported; certificates are "
            "conditional on the listed failures" if failures else None),
        "twist_search_bound": args.max,
        "twist_count": len(certs),
        "first_twists": [cert.discriminant for cert in certs[:10]],
    }
    doc = {"example_one": example_one, "example_two": example_two}
    stream.write(json.dumps(doc) + "\n")
    return 0


_COMMANDS = {
    "hurwitz": _cmd_hurwitz,
    "classnum": _cmd_classnum,
    "sieve": _cmd_sieve,
    "levels": _cmd_levels,
    "search": _cmd_search,
    "density": _cmd_density,
    "frey": _cmd_frey,
    "sturm": _cmd_sturm,
    "paper-examples": _cmd_paper_examples,
}


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args, stdout)
    except ValueError as exc:  # includes TwistHypothesisError
        stderr.write(f"error: {exc}\n")
        return 2
    except qseries.ResidualShadowError as exc:
        stderr.write(f"internal invariant breach: {exc}\n")
        return 1
    except AssertionError as exc:
        stderr.write(f"internal invariant breach: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
