"""frey-sunit command line.

Exit codes: 0 success, 2 invalid input, 1 computation failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Optional, Sequence

from . import __version__, errors
from .criteria import (
    contradiction_trace,
    corollary_q24,
    corollary_quadratic,
    corollary_ramified,
    corollary_splits3,
    expected_S,
    theoremA_check,
    theoremB_check,
    z2_layer_check,
    _listed_case,
)
from .density import membership_sample, prime_set_readings, residue_fractions, with_membership
from .frey import (
    conductor_support,
    invariants,
    paper_ordj_comparison,
    remark_valuations,
    slot_profiles,
    validate_triple,
)
from .legendre import frey_lambda, j_of_lambda
from .ntheory import is_squarefree, primes_up_to
from .qfield import (
    SplittingType,
    abstract_field,
    class_data,
    field_from_d,
    primes_above,
    roots_of_unity,
    splitting_type,
)
from .report import RunConfig, cached_run, dumps, encode, envelope, parse_element
from .sunit import (
    congruence_filters,
    orbit_partition,
    slots_above,
    solve_sunit,
    sunit_group,
)


# ---------------------------------------------------------------------------
# payload builders (pure; the cache stores their output)


def field_payload(d: int, cfg: RunConfig):
    K = field_from_d(d)
    notices = []
    out = {"kind": "field", "field": K.to_dict()}
    if K.is_rational:
        out["splitting"] = {str(p): "split" for p in primes_up_to(50)}
        out["class_data"] = {"h": 1, "h_plus": 1, "unit_norm": None, "fundamental_unit": None}
        out["roots_of_unity"] = 2
        return out, notices
    out["splitting"] = {str(p): splitting_type(K, p).value for p in primes_up_to(50)}
    cd = class_data(K, cfg.discriminant_bound)
    out["class_data"] = cd.to_dict()
    out["roots_of_unity"] = roots_of_unity(K)[1]
    out["slots_above_2"] = [s.to_dict() for s in primes_above(K, 2)]
    case = _listed_case(K)
    if case and cd.h_plus % 2 == 0:
        notices.append(f"{case}: listed with odd narrow class number, computed h+ = {cd.h_plus}")
    return out, notices


def sunit_payload(d: int, primes: Sequence[int], bound: int, workers: int, cfg: RunConfig):
    K = field_from_d(d)
    S = slots_above(K, sorted(set(primes)))
    group = sunit_group(K, S, cfg.discriminant_bound)
    sols = solve_sunit(group, bound, ceiling=cfg.enumeration_ceiling, workers=workers)
    orbits = orbit_partition(sols)
    designated = S[0] if S else None
    entries = []
    for s in sols:
        e = s.to_dict()
        e["filters"] = congruence_filters(s, K).to_dict()
        if designated is not None and designated.rational_prime == 2:
            e["trace"] = contradiction_trace(s, designated).to_dict()
        entries.append(e)
    out = {
        "kind": "sunit",
        "field": K.to_dict(),
        "group": group.to_dict(),
        "bound": bound,
        "solutions": entries,
        "counts": {
            "solutions": len(sols),
            "relevant": sum(1 for s in sols if s.relevance.value == "relevant"),
            "orbits": len(orbits),
        },
        "orbits": [
            {"representative": encode(g[0].lambda_), "members": [encode(s.lambda_) for s in g]}
            for g in orbits
        ],
    }
    return out, []


def frey_payload(a: str, b: str, c: str, n: int, p: int, d: int, cfg: RunConfig):
    K = field_from_d(d)
    t = validate_triple(parse_element(a, K), parse_element(b, K), parse_element(c, K), n, p, K)
    inv = invariants(t)
    notices = list(inv.notices)
    out = {"kind": "frey", "triple": t.to_dict(), "invariants": inv.to_dict()}
    if not t.C.is_zero():
        lam = frey_lambda(t)
        out["lambda"] = encode(lam)
        out["lambda_j_matches"] = j_of_lambda(lam) == inv.j
    profiles = slot_profiles(t, inv) if not t.c.is_zero() else []
    out["profiles"] = [pr.to_dict() for pr in profiles]
    if profiles:
        out["conductor"] = conductor_support(t, profiles).to_dict()
    audits = []
    for s in primes_above(K, 2):
        try:
            nt = remark_valuations(t, s)
            cmp = paper_ordj_comparison(t, s)
        except errors.PreconditionFailed as exc:
            audits.append({"slot": s.label(), "applicable": False, "reason": str(exc)})
            continue
        audits.append({
            "slot": s.label(), "applicable": True, "normalization": nt.to_dict(),
            "closed_form_ord_j": cmp.paper_value, "direct_ord_j": cmp.direct_value,
            "discrepancy": cmp.discrepancy,
        })
        if cmp.discrepancy:
            notices.append(
                f"ord(j) at {s.label()}: closed form 8 ord(2) - 4pk - 2 ord(n) = {cmp.paper_value}, "
                f"direct value from the invariants = {cmp.direct_value}"
            )
        if nt.normalized and not nt.min_exceeds_ord2:
            notices.append(
                f"at {s.label()}: min(ord(a^2+b^2), ord(a^2-b^2)) = {min(nt.ord_plus, nt.ord_minus)} "
                f"equals ord(2) = {nt.ord2}; it does not exceed it"
            )
    out["ord_j_audit"] = audits
    return out, notices


def _table(text: Optional[str]) -> dict:
    table = {}
    for item in (text or "").split(","):
        item = item.strip()
        if not item:
            continue
        try:
            p, kind = item.split("=")
            table[int(p)] = SplittingType(kind.strip())
        except ValueError as exc:
            raise errors.InvalidInput(f"bad table entry {item!r} (expected p=split|inert|ramified)") from exc
    return table


def check_payload(tag: str, args, cfg: RunConfig):
    bound = args.bound
    if tag == "theoremA":
        K = field_from_d(args.d)
        S = expected_S(K, args.n)
        bound = cfg.exponent_bound if bound is None else bound
        sols = solve_sunit(sunit_group(K, S, cfg.discriminant_bound), bound, ceiling=cfg.enumeration_ceiling)
        above = primes_above(K, 2)
        if not 1 <= args.slot <= len(above):
            raise errors.InvalidInput(f"--slot must be between 1 and {len(above)}")
        v = theoremA_check(K, args.n, above[args.slot - 1], sols, bound)
    elif tag == "theoremB":
        v = theoremB_check(field_from_d(args.d), args.alpha, discriminant_bound=cfg.discriminant_bound)
    elif tag == "corollary-quadratic":
        v = corollary_quadratic(args.d, args.l, args.alpha, bound, cfg.enumeration_ceiling)
    elif tag == "q24":
        v = corollary_q24(args.q, args.alpha, bound, cfg.enumeration_ceiling)
    elif tag == "ramified":
        desc = abstract_field(args.degree, _table(args.table))
        v = corollary_ramified(desc, args.p, args.alpha)
    elif tag == "splits3":
        if args.degree == 1:
            v = corollary_splits3(field_from_d(0), args.alpha, bound, cfg.enumeration_ceiling)
        else:
            v = corollary_splits3(abstract_field(args.degree, _table(args.table)), args.alpha)
    elif tag == "z2":
        v = z2_layer_check(args.r, args.alpha)
    else:  # argparse restricts the choices
        raise errors.InvalidInput(f"unknown statement {tag}")
    payload = {"kind": "verdict", **v.to_dict()}
    notices = [c for c in v.caveats if "differs" in c or "listed" in c]
    return payload, notices


def density_payload(cutoff: int, sample_max: Optional[int], sample_bound: int, workers: int, cfg: RunConfig):
    rep = residue_fractions(cutoff)
    notices = []
    out_extra = {}
    if sample_max:
        ds = [d for d in range(2, sample_max + 1) if is_squarefree(d)]
        rep = with_membership(rep, membership_sample(ds, sample_bound, cfg.enumeration_ceiling, workers))
        out_extra["prime_readings"] = [r.to_dict() for r in prime_set_readings(ds, sample_bound,
                                                                                ceiling=cfg.enumeration_ceiling,
                                                                                workers=workers)]
        notices.append("the primed set is reported under both readings (d in C and d in C')")
    payload = {"kind": "density", **rep.to_dict(), **out_extra,
               "table": rep.rows()}
    return payload, notices


# ---------------------------------------------------------------------------
# plumbing


_GLOBAL_DEFAULTS = {
    "config": None, "cache_path": None, "no_cache": False, "output_format": None,
    "output": None, "enumeration_ceiling": None, "discriminant_bound": None,
}


def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with RunConfig keys")
    common.add_argument("--cache", dest="cache_path", help="cache file (or set FREY_SUNIT_CACHE)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--format", dest="output_format", choices=RunConfig.FORMATS)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--ceiling", dest="enumeration_ceiling", type=int)
    common.add_argument("--discriminant-bound", dest="discriminant_bound", type=int)
    ap = argparse.ArgumentParser(prog="frey-sunit", description=__doc__.splitlines()[0], parents=[common])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("field", parents=[common], help="field descriptor, splitting, unit and class data")
    f.add_argument("-d", type=int, required=True, help="squarefree d (0 selects Q)")

    s = sub.add_parser("sunit", parents=[common], help="solve lambda + mu = 1 in an exponent box")
    s.add_argument("-d", type=int, required=True)
    s.add_argument("--primes", type=int, nargs="+", default=[2])
    s.add_argument("--bound", type=int)
    s.add_argument("--workers", type=int, default=1)

    fr = sub.add_parser("frey", parents=[common], help="Frey curve of a solution of x^4 - y^4 = n z^p")
    for name in ("a", "b", "c"):
        fr.add_argument(name, help="rational or x:y integral-basis coordinates")
    fr.add_argument("n", type=int)
    fr.add_argument("p", type=int)
    fr.add_argument("-d", type=int, default=0)

    c = sub.add_parser("check", parents=[common], help="evaluate one criterion")
    c.add_argument("tag", choices=["theoremA", "theoremB", "corollary-quadratic", "ramified",
                                   "splits3", "q24", "z2"])
    c.add_argument("-d", type=int, default=0)
    c.add_argument("-n", type=int, default=2)
    c.add_argument("-l", type=int, help="auxiliary prime ell")
    c.add_argument("-q", type=int)
    c.add_argument("-r", type=int)
    c.add_argument("-p", type=int)
    c.add_argument("--alpha", type=int)
    c.add_argument("--degree", type=int, default=1)
    c.add_argument("--table", help="splitting data, e.g. 2=ramified,5=ramified,3=split")
    c.add_argument("--slot", type=int, default=1, help="index of the distinguished slot above 2")
    c.add_argument("--bound", type=int, help="attach solver evidence at this bound")

    den = sub.add_parser("density", parents=[common], help="squarefree residue classes mod 8")
    den.add_argument("--cutoff", type=int)
    den.add_argument("--sample-max", type=int, help="sample membership for 2 <= d <= N")
    den.add_argument("--sample-bound", type=int, default=6)
    den.add_argument("--workers", type=int, default=1)
    return ap


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise errors.InvalidInput(f"missing option(s): {', '.join('-' + m for m in missing)}")


def run(args, cfg: RunConfig):
    """(command label, params, compute) for parsed args."""
    cmd = args.command
    if cmd == "field":
        params = {"d": args.d}
        return cmd, params, lambda: field_payload(args.d, cfg)
    if cmd == "sunit":
        bound = cfg.exponent_bound if args.bound is None else args.bound
        params = {"d": args.d, "primes": sorted(set(args.primes)), "bound": bound}
        return cmd, params, lambda: sunit_payload(args.d, args.primes, bound, args.workers, cfg)
    if cmd == "frey":
        params = {"a": args.a, "b": args.b, "c": args.c, "n": args.n, "p": args.p, "d": args.d}
        return cmd, params, lambda: frey_payload(args.a, args.b, args.c, args.n, args.p, args.d, cfg)
    if cmd == "check":
        need = {"corollary-quadratic": ("l", "alpha"), "q24": ("q",), "z2": ("r",), "ramified": ("p",)}
        _require(args, *need.get(args.tag, ()))
        keys = ("d", "n", "l", "q", "r", "p", "alpha", "degree", "table", "slot", "bound")
        params = {"tag": args.tag, **{k: getattr(args, k) for k in keys}}
        return f"check {args.tag}", params, lambda: check_payload(args.tag, args, cfg)
    if cmd == "density":
        cutoff = cfg.sieve_cutoff if args.cutoff is None else args.cutoff
        params = {"cutoff": cutoff, "sample_max": args.sample_max, "sample_bound": args.sample_bound}
        return cmd, params, lambda: density_payload(cutoff, args.sample_max, args.sample_bound,
                                                    args.workers, cfg)
    raise errors.InvalidInput(f"unknown command {cmd}")


def render(env: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(env) + "\n"
    payload = env["payload"]
    if fmt == "csv":
        if "table" not in payload:
            raise errors.InvalidInput("csv output is available for density reports only")
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(payload["table"][0]), lineterminator="\n")
        w.writeheader()
        w.writerows(payload["table"])
        return buf.getvalue()
    lines = [f"# {env['command']}"]

    def walk(obj, prefix):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(obj[k], f"{prefix}.{k}" if prefix else k)
        elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
            for i, v in enumerate(obj):
                walk(v, f"{prefix}[{i}]")
        else:
            lines.append(f"{prefix}: {obj}")

    walk(payload, "")
    for n in env["paper_discrepancy_notices"]:
        lines.append(f"notice: {n}")
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k in _GLOBAL_DEFAULTS:
        if not hasattr(args, k):
            setattr(args, k, _GLOBAL_DEFAULTS[k])
    try:
        cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
        cfg = cfg.replace(
            cache_path=args.cache_path,
            output_format=args.output_format,
            enumeration_ceiling=args.enumeration_ceiling,
            discriminant_bound=args.discriminant_bound,
        )
        label, params, compute = run(args, cfg)
        payload, notices, _ = cached_run(label, params, cfg, compute, use_cache=not args.no_cache)
        text = render(envelope(label, cfg, payload, notices), cfg.output_format)
    except errors.InvalidInput as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except errors.FreySunitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
