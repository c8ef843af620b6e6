"""Command-line front end.

Every subcommand prints one JSON document (keys sorted, no timestamps) so
outputs can be compared byte for byte.  Exit codes: 0 success, 2 invalid
input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .delta import artin_schreier_kernel, delta_p, frobenius_lift, psi, tangent_fixed_points, verify_delta_axioms
from .descriptors import parse_group, parse_ring
from .errors import DeltaRingError, ResourceLimitError, ValidationError
from .group_rings import GroupRingElement, augmentation, idempotent_decomposition, regular_rep_det
from .groups import FgAbelianGroup
from .rings import ZZ
from .units import (
    BassUnitSpec,
    bass_cyclic_unit,
    enumerate_rank_one_reduced,
    higman_torsion_check,
    integral_delta_unit_classify,
)

SUBCOMMANDS = (
    "ring-info",
    "delta-eval",
    "rank1-enumerate",
    "artin-schreier",
    "tangent-fixed",
    "bass-unit",
    "higman-check",
    "classify-integral",
    "idempotents",
    "verify-axioms",
)


class _ArgumentError(ValidationError):
    kind = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def _ring(args):
    if not args.ring:
        raise _ArgumentError("--ring is required")
    return parse_ring(args.ring)


def _group(args, default_trivial: bool = True) -> FgAbelianGroup:
    if args.group:
        return parse_group(args.group)
    if default_trivial:
        return FgAbelianGroup()
    raise _ArgumentError("--group is required")


def _element(args, ring, group) -> GroupRingElement:
    if args.element is None:
        raise _ArgumentError("--element is required")
    try:
        obj = json.loads(args.element)
    except json.JSONDecodeError as exc:
        raise _ArgumentError(f"--element is not JSON: {exc}") from exc
    if isinstance(obj, dict):
        ring = parse_ring(obj["ring"]) if "ring" in obj else ring
        group = parse_group(obj["group"]) if "group" in obj else group
        return GroupRingElement.from_json(obj, ring=ring, group=group)
    if isinstance(obj, list) and group.rank:
        if not group.is_finite or len(obj) != group.order:
            raise _ArgumentError(f"a coefficient list needs {group.order} entries")
        return GroupRingElement(ring, group, {group.element_at(i): ring.from_json(c) for i, c in enumerate(obj)})
    return GroupRingElement.scalar(ring, group, ring.from_json(obj))


# subcommands -------------------------------------------------------------

def cmd_ring_info(args) -> dict:
    ring = _ring(args)
    group = _group(args)
    out = {
        "ring": ring.descriptor,
        "group": group.descriptor,
        "prime": ring.p,
        "precision": list(ring.precision) if isinstance(ring.precision, tuple) else ring.precision,
        "dim": ring.dim,
    }
    if ring is not ZZ and group.is_finite:
        out["size"] = ring.size ** group.order
        out["components"] = idempotent_decomposition(ring).components
    return out


def cmd_delta_eval(args) -> dict:
    ring = _ring(args)
    group = _group(args)
    x = _element(args, ring, group)
    p = args.prime
    d = delta_p(x, p)
    return {
        "input": x.render(),
        "delta": d.render(),
        "delta_json": d.to_json(),
        "frobenius": frobenius_lift(x, p).render(),
        "psi": psi(x, p).render(),
        "ring_out": d.ring.descriptor,
    }


def cmd_rank1_enumerate(args) -> dict:
    ring = _ring(args)
    group = _group(args)
    if args.precision is not None:
        ring = ring.with_precision(args.precision)
    units = enumerate_rank_one_reduced(ring, group, args.depth, jobs=args.jobs)
    out = units.to_json()
    out["p_power_torsion"] = units.p_power_torsion
    return out


def cmd_artin_schreier(args) -> dict:
    return artin_schreier_kernel(_ring(args), args.precision).to_json()


def cmd_tangent_fixed(args) -> dict:
    return tangent_fixed_points(_ring(args), _group(args, default_trivial=False)).to_json()


def cmd_bass_unit(args) -> dict:
    if args.order is None or args.k is None:
        raise _ArgumentError("--order and --k are required")
    spec = BassUnitSpec(args.order, args.k)
    u = bass_cyclic_unit(spec)
    return {
        "order": spec.n,
        "k": spec.k,
        "m": spec.m,
        "unit": u.render(),
        "coefficients": [int(u.coefficient([i])) for i in range(spec.n)],
        "augmentation": int(augmentation(u)),
        "det": regular_rep_det(u),
    }


def cmd_higman_check(args) -> dict:
    group = _group(args, default_trivial=False)
    bound = 2 if args.bound is None else args.bound
    return higman_torsion_check(group, bound, args.order_bound).to_json()


def cmd_classify_integral(args) -> dict:
    group = _group(args)
    u = _element(args, ZZ, group)
    verdict = integral_delta_unit_classify(u, 13 if args.prime_bound is None else args.prime_bound)
    out = verdict.to_json()
    out["unit"] = u.render()
    return out


def cmd_idempotents(args) -> dict:
    ring = _ring(args)
    group = _group(args) if args.group else None
    dec = idempotent_decomposition(ring, group)
    render = (lambda e: e.render()) if group is not None else ring.render
    return {
        "ring": ring.descriptor,
        "group": None if group is None else group.descriptor,
        "components": dec.components,
        "idempotents": [render(e) for e in dec],
    }


def cmd_verify_axioms(args) -> dict:
    ring = _ring(args)
    group = _group(args)
    if ring is ZZ and args.prime is None:
        raise _ArgumentError("--prime is required over the integers")
    exhaustive = ring is not ZZ and group.is_finite and (ring.size ** group.order) ** 2 <= 1 << 20
    if exhaustive and args.seed is None:
        report = verify_delta_axioms(ring, group=group, p=args.prime)
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(0 if args.seed is None else args.seed)
        n = group.order * ring.dim
        count = args.samples
        if ring is ZZ:
            bound = 20 if args.bound is None else args.bound
            X = rng.integers(-bound, bound + 1, (count, n)).astype(object)
            Y = rng.integers(-bound, bound + 1, (count, n)).astype(object)
        else:
            top = max(ring.p ** int(e) for e in ring.exps)
            X = rng.integers(0, top, (count, n))
            Y = rng.integers(0, top, (count, n))
        report = verify_delta_axioms(ring, (X, Y), group=group, p=args.prime)
        mode = "random"
    out = report.to_json()
    out.update({"ring": ring.descriptor, "group": group.descriptor, "mode": mode, "seed": args.seed})
    return out


COMMANDS = {
    "ring-info": cmd_ring_info,
    "delta-eval": cmd_delta_eval,
    "rank1-enumerate": cmd_rank1_enumerate,
    "artin-schreier": cmd_artin_schreier,
    "tangent-fixed": cmd_tangent_fixed,
    "bass-unit": cmd_bass_unit,
    "higman-check": cmd_higman_check,
    "classify-integral": cmd_classify_integral,
    "idempotents": cmd_idempotents,
    "verify-axioms": cmd_verify_axioms,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deltaring", description="delta-ring computations on group rings")
    parser.add_argument("command", choices=SUBCOMMANDS)
    parser.add_argument("--ring", help='ring descriptor, e.g. "Zp(2,3)" or "W(2,2,3)xW(2,2,3)"')
    parser.add_argument("--group", help='group descriptor, e.g. "C4+Z^1"')
    parser.add_argument("--prime", type=int)
    parser.add_argument("--precision", type=int)
    parser.add_argument("--depth", type=int, default=0)
    parser.add_argument("--bound", type=int)
    parser.add_argument("--order-bound", type=int)
    parser.add_argument("--prime-bound", type=int)
    parser.add_argument("--element", help="element as JSON")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--order", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--output", choices=("json", "table"), default="json")
    return parser


def _format(payload: dict, style: str) -> str:
    if style == "json":
        return json.dumps(payload, sort_keys=True, indent=2)
    width = max((len(k) for k in payload), default=0)
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, (list, dict)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key:<{width}}  {value}")
    return "\n".join(lines)


def run_command(argv=None, stdout=None) -> int:
    """Run one subcommand; returns the exit code."""
    stdout = stdout or sys.stdout
    style = "json"
    try:
        args = build_parser().parse_args(argv)
        style = args.output
        payload = COMMANDS[args.command](args)
        code = 0
    except ResourceLimitError as exc:
        payload, code = {"error": {"kind": exc.kind, "detail": str(exc)}}, 3
    except DeltaRingError as exc:
        payload, code = {"error": {"kind": exc.kind, "detail": str(exc)}}, 2
    except (ValueError, KeyError, TypeError) as exc:
        payload, code = {"error": {"kind": "validation", "detail": str(exc)}}, 2
    print(_format(payload, style), file=stdout)
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
