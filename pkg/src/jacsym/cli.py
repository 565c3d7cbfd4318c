"""Command line entry point: ``jacsym <subcommand> ...``.

Exit codes: 0 success, 1 a checked property failed, 2 usage or
precondition error (including the JACSYM_MAX_TERMS cap).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import dependence as dep
from . import reductions as red
from .exactnum import as_scalar, scalar_root
from .harness import THEOREMS, verify_theorem
from .jsonfmt import (
    dumps,
    load,
    map_from_json,
    map_to_json,
    poly_from_json,
    scalar_from_json,
    scalar_matrix_from_json,
    scalar_matrix_to_json,
)
from .multipoly import TermLimitError
from .polymap import PolyMap, formal_inverse
from .sympattern import (
    CATALOG_NAMES,
    InstanceSpec,
    REGIMES,
    pattern_from_json,
    pattern_space,
    generate_instance,
)

REDUCTIONS = (
    "meng", "sjc-rsjc", "rsjc-dsjc", "stabilize", "djc-pair", "djc-split",
    "center-decompose", "realify", "power-linear", "meng-dp",
)


class UsageError(Exception):
    pass


def _degrees(text: str) -> frozenset:
    try:
        degs = frozenset(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree list {text!r}") from None
    if not degs or min(degs) < 0:
        raise argparse.ArgumentTypeError("degrees must be a non-empty list of integers >= 0")
    return degs


def _pattern(text: str):
    """A catalog name, or a path to a raw pattern JSON file."""
    if text in CATALOG_NAMES:
        return text
    if os.path.exists(text):
        return pattern_from_json(load(text))
    raise UsageError(f"unknown pattern {text!r}; catalog: {', '.join(CATALOG_NAMES)}")


def _emit(obj) -> None:
    print(dumps(obj))


# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    F = map_from_json(load(args.map))
    if args.as_h:
        F = PolyMap.identity(F.n_in) + F
    _emit(red.map_profile(F))
    return 0


def _power_linear_ab(A, d: int, a, b):
    """Given (a, b), or the first small integer pair whose root is rational."""
    if a is not None and b is not None:
        return scalar_from_json(a), scalar_from_json(b)
    for s in range(1, 21):
        for a_ in range(-10, 11):
            b_ = s - abs(a_)
            for bb in {b_, -b_}:
                if abs(bb) > 10:
                    continue
                value = a_ * bb**d - a_**d * bb
                if value and scalar_root(value, d - 1) is not None:
                    return as_scalar(a_), as_scalar(bb)
    raise UsageError("no (a, b) with |a|, |b| <= 10 gives a rational root")


def cmd_transform(args) -> int:
    obj = load(args.map)
    R = args.reduction
    if R == "power-linear":
        A = scalar_matrix_from_json(obj["A"] if isinstance(obj, dict) else obj)
        d = args.d
        if d is None:
            d = int(obj.get("d", 2)) if isinstance(obj, dict) else 2
        a, b = _power_linear_ab(A, d, args.a, args.b)
        res = red.power_linear_even(A, d, a, b)
        out = {
            "B": scalar_matrix_to_json(res.B),
            "T": scalar_matrix_to_json(res.T) if res.T is not None else None,
            "a": a.to_text(), "b": b.to_text(), "d": d,
            "root": res.root.to_text() if res.root is not None else None,
            "B_squared_zero": res.B.power(2).is_zero(),
        }
        if res.T is not None:
            out["identity_holds"] = red.power_linear_identity_holds(A, d, res)
        _emit(out)
        return 0 if out["B_squared_zero"] and out.get("identity_holds", True) else 1
    if R == "djc-pair":
        if not isinstance(obj, dict) or "pair" not in obj:
            raise UsageError('djc-pair input must be {"pair": map, "tilde": map, "odd": bool}')
        Ff, Ft = map_from_json(obj["pair"]), map_from_json(obj["tilde"])
        odd = bool(obj.get("odd", Ff.n_in == Ft.n_in + 1))
        G = red.djc_pair(Ff, Ft, odd)
        _emit({"map": map_to_json(G), "report": red.reduction_report([Ff, Ft], [G]).to_json()})
        return 0
    F = map_from_json(obj)
    if R == "meng":
        outs = [red.meng_extend(F)]
    elif R == "sjc-rsjc":
        outs = [red.sjc_rsjc_conj(F, inverse=args.inverse)]
    elif R == "rsjc-dsjc":
        outs = [red.rsjc_dsjc_conj(F, args.direction or "to_dsjc")]
    elif R == "stabilize":
        outs = [red.dsjc_stabilize(F, args.direction or "embed")]
    elif R == "djc-split":
        outs = list(red.djc_split(F))
    elif R == "center-decompose":
        outs = list(red.center_decompose(F))
    elif R == "realify":
        outs = [red.realify(F)]
    elif R == "meng-dp":
        outs = [red.meng_extend_dp(F, args.d if args.d is not None else 2)]
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown reduction {R}")
    as_h = R == "meng-dp"
    report = red.reduction_report([F], outs, as_h=as_h).to_json()
    if len(outs) == 1:
        _emit({"map": map_to_json(outs[0]), "report": report})
    else:
        names = ("pair", "tilde") if R == "djc-split" else ("plus", "minus")
        _emit({names[0]: map_to_json(outs[0]), names[1]: map_to_json(outs[1]), "report": report})
    return 0


def cmd_invert(args) -> int:
    F = map_from_json(load(args.map))
    res = formal_inverse(F, args.max_degree)
    _emit({"inverse": map_to_json(res.inverse), "max_degree": res.max_degree, "exact": res.exact})
    return 0 if res.exact else 1


def cmd_depsolve(args) -> int:
    H = map_from_json(load(args.map))
    ws = dep.solve_dependence(H)
    _emit({"dependent": bool(ws), "witnesses": [w.to_json() for w in ws]})
    return 0


def cmd_hessian_decompose(args) -> int:
    obj = load(args.poly)
    h = poly_from_json(obj, 2)
    form = dep.planar_hessian_decompose(h)
    _emit(form.to_json())
    return 0


def cmd_space_dim(args) -> int:
    spec = InstanceSpec(args.nvars, args.degrees, _pattern(args.pattern), "none")
    dim, basis = pattern_space(spec)
    out = {"dimension": dim}
    if args.basis:
        out["basis"] = [map_to_json(b) for b in basis]
    _emit(out)
    return 0


def cmd_generate(args) -> int:
    spec = InstanceSpec(args.nvars, args.degrees, _pattern(args.pattern), args.regime)
    H = generate_instance(spec, args.seed)
    _emit(map_to_json(H))
    return 0


def cmd_verify(args) -> int:
    if args.theorem not in THEOREMS:
        raise UsageError(f"unknown theorem id {args.theorem!r}; known: {', '.join(THEOREMS)}")
    rep = verify_theorem(args.theorem, args.trials, args.seed, jobs=args.jobs)
    _emit(rep.to_json(with_elapsed=args.timing))
    return 1 if rep.failures else 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jacsym", description="Symmetric Jacobian toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="patterns and Keller/nilpotency flags of x + H")
    s.add_argument("map")
    s.add_argument("--as-h", action="store_true", help="input is H rather than F = x + H")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("transform", help="apply a reduction")
    s.add_argument("--reduction", required=True, choices=REDUCTIONS)
    s.add_argument("map")
    s.add_argument("--inverse", action="store_true", help="sjc-rsjc: conjugate with T^-1")
    s.add_argument("--direction", help="rsjc-dsjc: to_dsjc|to_rsjc; stabilize: embed|project")
    s.add_argument("-d", type=int, help="degree for power-linear and meng-dp")
    s.add_argument("--a", help="power-linear parameter a")
    s.add_argument("--b", help="power-linear parameter b")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("invert", help="truncated formal inverse with exactness certificate")
    s.add_argument("map")
    s.add_argument("--max-degree", type=int)
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("depsolve", help="all lambda with lambda^t JH = 0")
    s.add_argument("map")
    s.set_defaults(func=cmd_depsolve)

    s = sub.add_parser("hessian-decompose", help="h = g(a x1 - b x2) + (c x1 - d x2)")
    s.add_argument("poly")
    s.set_defaults(func=cmd_hessian_decompose)

    for name, func, helptext in (("space-dim", cmd_space_dim, "dimension of a pattern-constrained space"),
                                 ("generate", cmd_generate, "seeded random instance H")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--pattern", required=True, help="catalog name or raw pattern JSON file")
        s.add_argument("--nvars", type=int, required=True)
        s.add_argument("--degrees", type=_degrees, required=True)
        if name == "space-dim":
            s.add_argument("--basis", action="store_true", help="also print a basis")
        else:
            s.add_argument("--seed", type=int, default=0)
            s.add_argument("--regime", choices=REGIMES, default="none")
        s.set_defaults(func=func)

    s = sub.add_parser("verify", help="run a theorem's property suite")
    s.add_argument("--theorem", required=True)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="include elapsed time (breaks byte-determinism)")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except TermLimitError as exc:
        print(f"error: term limit exceeded: {exc}", file=sys.stderr)
    except (UsageError, ValueError, KeyError, IndexError, ZeroDivisionError,
            json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
