"""Command-line driver.

Biset expressions are sums of ``c*[R, hom]`` terms, for example
``1*[1,id]-2*[C2,id]``. ``R`` is ``1``, the source group's name, or
generator words in angle brackets such as ``<(12)>`` or ``<r^2 s>``. ``hom``
is ``id``, ``triv`` or explicit generator images ``{w->v; w2->v2}``.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from . import checks
from .bisets import BisetError, VirtualBiset, canonical_key, compose
from .groups import CatalogError, FiniteGroup, GroupError, closure, make_catalog_group, parse_element
from .locality import abelian_p_groups, local_exponent, obstruction_witness
from .loops import LoopObject, loop_morphism, loop_object, twist_object
from .matrices import BisetMatrix, augmentation_matrix
from .pi0 import pi0_map
from .serialize import (
    FormatError,
    biset_to_json,
    dumps,
    group_to_json,
    group_to_text,
    int_matrix_to_json,
    matrix_to_json,
)
from .twist import twist_morphism, untwist_morphism

USAGE_ERROR = 2
DOMAIN_ERROR = 3


class ExpressionError(ValueError):
    """Raised for a malformed biset expression."""


# -- biset expressions -----------------------------------------------------------------


def _split_top(text: str, seps: str) -> list[tuple[str, str]]:
    """Split at separators outside brackets; returns ``(separator, chunk)`` pairs."""
    out = []
    depth = 0
    cur = ""
    sep = ""
    for ch in text:
        if ch in "[<{(":
            depth += 1
        elif ch in "]>})":
            depth -= 1
        if depth == 0 and ch in seps and cur.strip():
            out.append((sep, cur))
            sep, cur = ch, ""
        elif depth == 0 and ch in seps:
            sep = ch if ch != "," else sep
            if ch == ",":
                out.append((sep, cur))
                cur = ""
        else:
            cur += ch
    out.append((sep, cur))
    return out


def _words(G: FiniteGroup, text: str) -> list[int]:
    return [parse_element(G, w) for w in text.replace(",", " ").split()]


def _parse_subgroup(G: FiniteGroup, spec: str) -> np.ndarray:
    spec = spec.strip()
    if spec == "1":
        return np.array([0])
    if spec in (G.label, "G"):
        return np.arange(G.order)
    if spec.startswith("<") and spec.endswith(">"):
        return closure(G, _words(G, spec[1:-1]))
    return closure(G, [parse_element(G, spec)])


def _parse_hom(G: FiniteGroup, H: FiniteGroup, R: np.ndarray, spec: str) -> np.ndarray:
    spec = spec.strip()
    if spec in ("triv", "trivial"):
        return np.zeros(R.size, dtype=np.int64)
    if spec in ("id", "incl"):
        if R.size == 1:
            return np.zeros(1, dtype=np.int64)
        if G != H:
            raise ExpressionError("'id' needs equal source and target groups")
        return R.copy()
    if not (spec.startswith("{") and spec.endswith("}")):
        raise ExpressionError(f"cannot parse hom {spec!r}")
    images = {}
    for item in spec[1:-1].split(";"):
        if not item.strip():
            continue
        if "->" not in item:
            raise ExpressionError(f"expected 'w->v' in {item!r}")
        w, v = item.split("->")
        images[parse_element(G, w)] = parse_element(H, v)
    return _extend_hom(G, H, R, images)


def _extend_hom(G: FiniteGroup, H: FiniteGroup, R: np.ndarray, images: dict[int, int]) -> np.ndarray:
    table = {0: 0}
    frontier = [0]
    gens = list(images.items())
    while frontier:
        x = frontier.pop()
        for g, hg in gens:
            y, hy = G.mul(x, g), H.mul(table[x], hg)
            if y in table:
                if table[y] != hy:
                    raise BisetError("generator images do not define a homomorphism")
            else:
                table[y] = hy
                frontier.append(y)
    if sorted(table) != sorted(R.tolist()):
        raise BisetError("generator images do not cover the subgroup")
    out = np.array([table[int(x)] for x in R], dtype=np.int64)
    pos = {int(x): i for i, x in enumerate(R)}
    for x in R:
        for y in R:
            if out[pos[G.mul(int(x), int(y))]] != H.mul(int(out[pos[int(x)]]), int(out[pos[int(y)]])):
                raise BisetError("generator images do not define a homomorphism")
    return out


def parse_biset_expression(text: str, G: FiniteGroup, H: FiniteGroup) -> VirtualBiset:
    text = text.replace(" ", "")
    if text in ("", "0"):
        return VirtualBiset.zero(G, H)
    out = VirtualBiset.zero(G, H)
    for sign, chunk in _split_top(text, "+-"):
        if not chunk:
            raise ExpressionError(f"empty term in {text!r}")
        if "[" not in chunk or not chunk.endswith("]"):
            raise ExpressionError(f"expected c*[R,hom] in {chunk!r}")
        coef_text, body = chunk[: chunk.index("[")], chunk[chunk.index("[") + 1 : -1]
        coef_text = coef_text.rstrip("*")
        try:
            coef = int(coef_text) if coef_text else 1
        except ValueError as exc:
            raise ExpressionError(f"bad coefficient {coef_text!r}") from exc
        if sign == "-":
            coef = -coef
        parts = [c for _, c in _split_top(body, ",")]
        if len(parts) != 2:
            raise ExpressionError(f"expected [R,hom] in {chunk!r}")
        try:
            R = _parse_subgroup(G, parts[0])
            images = _parse_hom(G, H, R, parts[1])
        except GroupError as exc:
            if isinstance(exc, BisetError):
                raise
            raise ExpressionError(str(exc)) from exc
        out = out + coef * VirtualBiset.basis(canonical_key(G, H, R, images, check=True))
    return out


# -- rendering ----------------------------------------------------------------------------


def _int_matrix_text(A) -> str:
    A = np.asarray(A, dtype=object)
    if A.size == 0:
        return "  (empty)"
    width = max(len(str(v)) for v in A.ravel())
    return "\n".join("  " + " ".join(str(v).rjust(width) for v in row) for row in A)


def render_matrix(M: BisetMatrix, title: str) -> str:
    lines = [f"{title}: {M.shape[0]} x {M.shape[1]}"]
    lines.append("rows: " + " ".join(str(x) for x in M.domain.labels))
    lines.append("cols: " + " ".join(str(x) for x in M.codomain.labels))
    for i, row in enumerate(M.entries):
        for j, e in enumerate(row):
            if e:
                lines.append(f"[{M.domain.labels[i]} -> {M.codomain.labels[j]}] {e!r}")
    lines.append("augmentation:")
    lines.append(_int_matrix_text(augmentation_matrix(M)))
    return "\n".join(lines)


def _matrix_payload(M: BisetMatrix, **extra) -> dict:
    d = matrix_to_json(M)
    d["augmentation"] = int_matrix_to_json(augmentation_matrix(M))
    d.update(extra)
    return d


def _render_objects(obj: LoopObject, fmt: str) -> str:
    rows = [(i, str(lbl), G.order) for i, (lbl, G) in enumerate(zip(obj.union.labels, obj.union.components))]
    if fmt == "json":
        return dumps({"n": obj.n, "components": [{"index": i, "label": l, "order": o} for i, l, o in rows]})
    lines = [f"{len(rows)} components"]
    lines += [f"{i} {l} order {o}" for i, l, o in rows]
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------------------


def _groups(args) -> tuple[FiniteGroup, FiniteGroup]:
    src = args.source or args.group
    tgt = args.target or args.group
    if not src or not tgt:
        raise ExpressionError("give --group, or --source and --target")
    return make_catalog_group(src), make_catalog_group(tgt)


def _modulus(args, G, H) -> tuple[int, object]:
    if args.p is not None:
        pred = abelian_p_groups(args.p)
        e = args.e if args.e is not None else local_exponent([G, H], args.p)
        return args.p**e, pred
    return (args.ell or math.lcm(G.exponent(), H.exponent())), None


def cmd_group(args) -> str:
    G = make_catalog_group(args.group)
    if args.format == "json":
        d = group_to_json(G)
        d["exponent"] = G.exponent()
        return dumps(d)
    return group_to_text(G) + f"exponent {G.exponent()}"


def cmd_loop(args) -> str:
    if args.objects_only:
        G = make_catalog_group(args.group or args.source)
        return _render_objects(loop_object(G, args.n), args.format)
    G, H = _groups(args)
    X = parse_biset_expression(args.biset, G, H)
    M = loop_morphism(X, args.n, args.method)
    if args.format == "json":
        return dumps(_matrix_payload(M, n=args.n))
    return render_matrix(M, f"L^{args.n}")


def _cmd_twisted(args, untwisted: bool) -> str:
    G, H = _groups(args)
    ell, pred = _modulus(args, G, H)
    if args.objects_only:
        return _render_objects(twist_object(G, args.n, ell, pred), args.format)
    X = parse_biset_expression(args.biset, G, H)
    fn = untwist_morphism if untwisted else twist_morphism
    M = fn(X, args.n, ell, pred)
    name = "untwisted" if untwisted else "twisted"
    if args.format == "json":
        return dumps(_matrix_payload(M, n=args.n, ell=ell, functor=name))
    return render_matrix(M, f"{name} L_{args.n}, ell={ell}")


def cmd_twist(args) -> str:
    return _cmd_twisted(args, False)


def cmd_untwist(args) -> str:
    return _cmd_twisted(args, True)


def cmd_compose(args) -> str:
    G, H, K = (make_catalog_group(x) for x in (args.source, args.middle, args.target))
    X = parse_biset_expression(args.left, G, H)
    Y = parse_biset_expression(args.right, H, K)
    Z = compose(X, Y)
    if args.format == "json":
        return dumps({"terms": biset_to_json(Z), "augmentation": Z.augmentation()})
    return f"{Z!r}\naugmentation {Z.augmentation()}"


def cmd_pi0(args) -> str:
    G, H = _groups(args)
    X = parse_biset_expression(args.biset, G, H)
    P = pi0_map(X, args.n)
    rows = loop_object(G, args.n).union.labels
    cols = loop_object(H, args.n).union.labels
    if args.format == "json":
        return dumps({"rows": list(rows), "cols": list(cols), "matrix": int_matrix_to_json(P)})
    return "rows: " + " ".join(rows) + "\ncols: " + " ".join(cols) + "\n" + _int_matrix_text(P)


def cmd_obstruction(args) -> str:
    G = make_catalog_group(args.group)
    expr = args.biset or f"1*[1,id]-2*[{G.label},id]"
    X = parse_biset_expression(expr, G, G)
    rep = obstruction_witness(X, args.n, args.ell, args.p, args.jmax, args.mmax)
    labels = list(rep.matrix.domain.labels)
    if args.format == "json":
        return dumps(
            {
                "group": rep.group,
                "n": rep.n,
                "ell": rep.ell,
                "input_augmentation": rep.augmentation,
                "epsilon": int_matrix_to_json(rep.epsilon),
                "powers": [int_matrix_to_json(P) for P in rep.powers],
                "diagonal_witnesses": [{"component": labels[i], "value": v} for i, v in rep.diagonal_witnesses],
                "obstructed": rep.obstructed,
                "nilpotent": rep.nilpotent,
                "padic": None if rep.padic is None else {str(j): m for j, m in rep.padic.first_power.items()},
                "padic_converges": None if rep.padic is None else rep.padic.converges,
                "symbolic": rep.symbolic,
                "warnings": rep.warnings,
            }
        )
    lines = [render_matrix(rep.matrix, f"twisted L_{rep.n}, ell={rep.ell}")]
    for m, P in enumerate(rep.powers, start=1):
        if m <= 4 or m == len(rep.powers):
            lines.append(f"epsilon^{m}:")
            lines.append(_int_matrix_text(P))
    lines.append("symbolic augmentation (s_i: unknown orbit counts):")
    lines += ["  [" + ", ".join(r) + "]" for r in rep.symbolic]
    lines.append("verdict:")
    lines.append(f"  input augmentation: {rep.augmentation}")
    for w in rep.warnings:
        lines.append(f"  warning: {w}")
    if rep.obstructed:
        wit = ", ".join(f"{labels[i]}={v}" for i, v in rep.diagonal_witnesses)
        lines.append(f"  augmentation-ideal obstruction: yes (diagonal entries {wit})")
    else:
        lines.append("  augmentation-ideal obstruction: no")
    lines.append(f"  nilpotent: {'yes' if rep.nilpotent else 'no'}")
    if rep.padic is not None:
        firsts = " ".join(f"j={j}:{'none' if m is None else m}" for j, m in rep.padic.first_power.items())
        lines.append(f"  {rep.padic.p}-adic first power with A^m = 0 mod p^j: {firsts}")
        lines.append(f"  {rep.padic.p}-adic convergence up to j={rep.padic.j_max}: {'yes' if rep.padic.converges else 'no'}")
    return "\n".join(lines)


def cmd_verify(args) -> tuple[str, bool]:
    suites = checks.suites(args.count)
    names = list(suites) if args.suite == "all" else [args.suite]
    lines = []
    ok = True
    for name in names:
        for label, run in suites[name]:
            passed, total = run(args.seed)
            ok = ok and passed == total
            lines.append(f"{'PASS' if passed == total else 'FAIL'} {name}/{label}: {passed}/{total}")
    return "\n".join(lines), ok


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bisetloops", description="Burnside-category loop functors")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, biset=True):
        p.add_argument("--group")
        p.add_argument("--source")
        p.add_argument("--target")
        if biset:
            p.add_argument("--biset", default=None)
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("group", help="print a catalog group")
    p.add_argument("--group", required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("loop", help="free loop functor")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--objects-only", action="store_true")
    p.add_argument("--method", choices=["fixed", "orbit"], default="fixed")

    for name in ("twist", "untwist"):
        p = sub.add_parser(name, help=f"{name}ed loop functor")
        common(p)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--ell", type=int)
        p.add_argument("--p", type=int, help="restrict to classes generating abelian p-groups")
        p.add_argument("--e", type=int, help="use ell = p^e")
        p.add_argument("--objects-only", action="store_true")

    p = sub.add_parser("compose", help="compose two virtual bisets")
    for flag in ("--source", "--middle", "--target", "--left", "--right"):
        p.add_argument(flag, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("pi0", help="action on components")
    common(p)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("obstruction", help="augmentation and p-adic analysis")
    p.add_argument("--group", required=True)
    p.add_argument("--biset")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--ell", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--jmax", type=int, default=6)
    p.add_argument("--mmax", type=int, default=10)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("--suite", choices=list(checks.SUITE_NAMES) + ["all"], default="all")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    return parser


COMMANDS = {
    "group": cmd_group,
    "loop": cmd_loop,
    "twist": cmd_twist,
    "untwist": cmd_untwist,
    "compose": cmd_compose,
    "pi0": cmd_pi0,
    "obstruction": cmd_obstruction,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            text, ok = cmd_verify(args)
            print(text)
            return 0 if ok else 1
        needs_biset = args.command in ("twist", "untwist", "loop", "pi0") and not getattr(args, "objects_only", False)
        if needs_biset and not args.biset:
            parser.error(f"{args.command} needs --biset")
        print(COMMANDS[args.command](args))
        return 0
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ExpressionError, FormatError, CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (GroupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
