"""Text and JSON forms of groups, virtual bisets, matrices and reports.

Text forms::

    group <label> <order>
    <order lines of the multiplication table>
    names <name_0> ... <name_{order-1}>       (optional)

    <coef> [ <R members> ; <phi images> ]      (one line per term, "0" if empty)

    matrix <rows> <cols>
    <one line per entry, row-major, terms joined by " + ">

Biset and matrix text carries no group data; the parser is given the groups.
"""

from __future__ import annotations

import json
import re

import numpy as np

from .bisets import VirtualBiset, canonical_key
from .groups import FiniteGroup
from .matrices import BisetMatrix, FormalUnion


class FormatError(ValueError):
    """Raised for malformed serialized input."""


# -- groups ---------------------------------------------------------------------------


def group_to_text(G: FiniteGroup) -> str:
    lines = [f"group {G.label} {G.order}"]
    lines += [" ".join(str(int(v)) for v in row) for row in G.table]
    if G.names is not None:
        lines.append("names " + " ".join(G.names))
    return "\n".join(lines) + "\n"


def group_from_text(text: str) -> FiniteGroup:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty group text")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "group":
        raise FormatError("expected 'group <label> <order>'")
    try:
        order = int(head[2])
        rows = [[int(v) for v in ln.split()] for ln in lines[1 : 1 + order]]
    except ValueError as exc:
        raise FormatError("non-integer table entry") from exc
    if len(rows) != order or any(len(r) != order for r in rows):
        raise FormatError("table does not match the declared order")
    names = None
    rest = lines[1 + order :]
    if rest:
        parts = rest[0].split()
        if parts[0] != "names" or len(parts) != order + 1:
            raise FormatError("malformed names line")
        names = parts[1:]
    return FiniteGroup(rows, label=head[1], names=names)


# -- bisets ---------------------------------------------------------------------------


def _term_text(key, c: int) -> str:
    return f"{c} [ {' '.join(map(str, key.members))} ; {' '.join(map(str, key.images))} ]"


def biset_to_text(X: VirtualBiset) -> str:
    if not X:
        return "0\n"
    return "\n".join(_term_text(k, c) for k, c in X.items()) + "\n"


_TERM = re.compile(r"^\s*(-?\d+)\s*\[\s*([\d\s]*);([\d\s]*)\]\s*$")


def _parse_term(chunk: str, G: FiniteGroup, H: FiniteGroup):
    m = _TERM.match(chunk)
    if not m:
        raise FormatError(f"malformed term {chunk!r}")
    members = [int(v) for v in m.group(2).split()]
    images = [int(v) for v in m.group(3).split()]
    if len(members) != len(images):
        raise FormatError("member and image lists differ in length")
    try:
        key = canonical_key(G, H, members, images, check=True)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    return key, int(m.group(1))


def biset_from_text(text: str, G: FiniteGroup, H: FiniteGroup) -> VirtualBiset:
    out = VirtualBiset.zero(G, H)
    for ln in text.strip().splitlines():
        ln = ln.strip()
        if not ln or ln == "0":
            continue
        key, c = _parse_term(ln, G, H)
        out = out + c * VirtualBiset.basis(key)
    return out


_ENTRY_TERM = re.compile(r"-?\d+\s*\[[^\]]*\]")


def matrix_to_text(M: BisetMatrix) -> str:
    lines = [f"matrix {M.shape[0]} {M.shape[1]}"]
    for row in M.entries:
        for e in row:
            lines.append(" + ".join(_term_text(k, c) for k, c in e.items()) if e else "0")
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str, domain: FormalUnion, codomain: FormalUnion) -> BisetMatrix:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    head = lines[0].split() if lines else []
    if len(head) != 3 or head[0] != "matrix":
        raise FormatError("expected 'matrix <rows> <cols>'")
    r, c = int(head[1]), int(head[2])
    if (r, c) != (len(domain), len(codomain)):
        raise FormatError("matrix shape does not match the formal unions")
    body = lines[1:]
    if len(body) != r * c:
        raise FormatError(f"expected {r * c} entries, found {len(body)}")
    entries = []
    for i in range(r):
        row = []
        for j in range(c):
            text_ij = body[i * c + j]
            e = VirtualBiset.zero(domain[i], codomain[j])
            if text_ij != "0":
                chunks = _ENTRY_TERM.findall(text_ij)
                if _ENTRY_TERM.sub("", text_ij).replace("+", "").strip() or not chunks:
                    raise FormatError(f"malformed entry {text_ij!r}")
                for chunk in chunks:
                    key, coef = _parse_term(chunk, domain[i], codomain[j])
                    e = e + coef * VirtualBiset.basis(key)
            row.append(e)
        entries.append(row)
    return BisetMatrix(domain, codomain, entries)


# -- JSON -----------------------------------------------------------------------------


def group_to_json(G: FiniteGroup) -> dict:
    return {"label": G.label, "order": G.order, "mul": G.table.tolist(), "names": G.names}


def group_from_json(d: dict) -> FiniteGroup:
    return FiniteGroup(d["mul"], label=d["label"], names=d.get("names"))


def biset_to_json(X: VirtualBiset) -> list:
    return [{"coef": c, "subgroup": list(k.members), "images": list(k.images)} for k, c in X.items()]


def biset_from_json(terms: list, G: FiniteGroup, H: FiniteGroup) -> VirtualBiset:
    out = VirtualBiset.zero(G, H)
    for t in terms:
        out = out + t["coef"] * VirtualBiset.basis(canonical_key(G, H, t["subgroup"], t["images"], check=True))
    return out


def matrix_to_json(M: BisetMatrix) -> dict:
    return {
        "rows": M.shape[0],
        "cols": M.shape[1],
        "row_labels": [str(x) for x in M.domain.labels],
        "col_labels": [str(x) for x in M.codomain.labels],
        "entries": [[biset_to_json(e) for e in row] for row in M.entries],
    }


def matrix_from_json(d: dict, domain: FormalUnion, codomain: FormalUnion) -> BisetMatrix:
    if (d["rows"], d["cols"]) != (len(domain), len(codomain)):
        raise FormatError("matrix shape does not match the formal unions")
    entries = [
        [biset_from_json(d["entries"][i][j], domain[i], codomain[j]) for j in range(d["cols"])]
        for i in range(d["rows"])
    ]
    return BisetMatrix(domain, codomain, entries)


def int_matrix_to_json(A) -> list:
    return [[int(v) for v in row] for row in np.asarray(A, dtype=object)]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
