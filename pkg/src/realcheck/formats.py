"""Structure files: JSON with the field layout fixed per structure kind.

Opca files carry elements, leq pairs (reflexive-transitive closure is
computed on load), an application triple list, designated k and s, and
optional filter / U / sup fields.  BCO files carry named function graphs;
aks files carry the full tables.  Errors name the file, the line when the
JSON itself is broken, and the offending field otherwise.
"""

from __future__ import annotations

import json

from .aks import Aks
from .bco import FiniteBco
from .errors import StructureError
from .opca import FiniteOpca

__all__ = [
    "load_opca", "load_bco", "load_aks", "load_map",
    "opca_to_dict", "aks_to_dict", "save_aks", "load_json",
]


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise StructureError("file not found", source=str(path))
    except json.JSONDecodeError as e:
        raise StructureError(f"line {e.lineno}: {e.msg}", source=str(path))


def _field(data, name, path, required=True, default=None):
    if name not in data:
        if required:
            raise StructureError("missing field", source=str(path), field=name)
        return default
    return data[name]


def _pairs(raw, path, field):
    try:
        return [(a, b) for (a, b) in raw]
    except (TypeError, ValueError):
        raise StructureError("expected a list of pairs", source=str(path), field=field)


def _check_members(values, elements, path, field):
    for v in values:
        if v not in elements:
            raise StructureError(f"unknown element {v!r}", source=str(path), field=field)


def load_opca(path):
    data = load_json(path)
    elements = tuple(_field(data, "elements", path))
    element_set = set(elements)
    leq = _pairs(_field(data, "leq", path, required=False, default=[]), path, "leq")
    for (a, b) in leq:
        _check_members((a, b), element_set, path, "leq")
    table = {}
    for entry in _field(data, "app", path):
        try:
            a, b, c = entry
        except (TypeError, ValueError):
            raise StructureError("expected triples", source=str(path), field="app")
        _check_members((a, b, c), element_set, path, "app")
        table[(a, b)] = c
    k = _field(data, "k", path)
    s = _field(data, "s", path)
    _check_members((k, s), element_set, path, "k/s")
    filt = _field(data, "filter", path, required=False)
    U = _field(data, "U", path, required=False)
    for fname, sub in (("filter", filt), ("U", U)):
        if sub is not None:
            _check_members(sub, element_set, path, fname)
    opca = FiniteOpca(
        elements=elements, leq_pairs=frozenset(leq), table=table, k=k, s=s,
        filter=None if filt is None else frozenset(filt),
        U=None if U is None else frozenset(U), name=str(path))
    sup_raw = _field(data, "sup", path, required=False)
    sup = None
    if sup_raw is not None:
        sup = {}
        for entry in sup_raw:
            try:
                downset, value = entry
            except (TypeError, ValueError):
                raise StructureError("expected [downset, element] pairs",
                                     source=str(path), field="sup")
            _check_members(list(downset) + [value], element_set, path, "sup")
            sup[frozenset(downset)] = value
    return opca, sup


def load_bco(path):
    data = load_json(path)
    elements = tuple(_field(data, "elements", path))
    element_set = set(elements)
    leq = _pairs(_field(data, "leq", path, required=False, default=[]), path, "leq")
    for (a, b) in leq:
        _check_members((a, b), element_set, path, "leq")
    functions = {}
    raw_fns = _field(data, "functions", path)
    if not isinstance(raw_fns, dict):
        raise StructureError("expected name -> pair-list mapping",
                             source=str(path), field="functions")
    for fname, graph in raw_fns.items():
        table = {}
        for (a, b) in _pairs(graph, path, f"functions.{fname}"):
            _check_members((a, b), element_set, path, f"functions.{fname}")
            table[a] = b
        functions[fname] = table
    return FiniteBco(elements=elements, leq_pairs=frozenset(leq),
                     functions=functions, name=str(path))


def load_aks(path):
    data = load_json(path)
    terms = tuple(_field(data, "terms", path))
    stacks = tuple(_field(data, "stacks", path))
    term_set, stack_set = set(terms), set(stacks)

    def triple_table(field):
        out = {}
        for entry in _field(data, field, path):
            try:
                a, b, c = entry
            except (TypeError, ValueError):
                raise StructureError("expected triples", source=str(path), field=field)
            out[(a, b)] = c
        return out

    dot = triple_table("dot")
    push = triple_table("push")
    kof = {}
    for entry in _field(data, "kOf", path):
        try:
            pi, t = entry
        except (TypeError, ValueError):
            raise StructureError("expected pairs", source=str(path), field="kOf")
        kof[pi] = t
    pole = set()
    for entry in _field(data, "pole", path):
        try:
            t, pi = entry
        except (TypeError, ValueError):
            raise StructureError("expected pairs", source=str(path), field="pole")
        if t not in term_set or pi not in stack_set:
            raise StructureError(f"unknown pole entry {entry!r}",
                                 source=str(path), field="pole")
        pole.add((t, pi))
    qp = _field(data, "QP", path)
    _check_members(qp, term_set, path, "QP")
    try:
        return Aks(terms=terms, stacks=stacks, dot=dot, push=push, kof=kof,
                   K=_field(data, "K", path), S=_field(data, "S", path),
                   cc=_field(data, "cc", path), qp=frozenset(qp),
                   pole=frozenset(pole), name=str(path))
    except StructureError:
        raise
    except Exception as e:  # totality violations raise StructureError already
        raise StructureError(str(e), source=str(path))


def load_map(path):
    data = load_json(path)
    raw = _field(data, "map", path)
    if isinstance(raw, dict):
        return dict(raw)
    return {a: b for (a, b) in _pairs(raw, path, "map")}


def opca_to_dict(opca):
    return {
        "elements": list(opca.elements),
        "leq": sorted([a, b] for (a, b) in opca.leq_pairs if a != b),
        "app": sorted([a, b, c] for (a, b), c in opca.table.items()),
        "k": opca.k,
        "s": opca.s,
        "filter": None if opca.filter is None else sorted(opca.filter),
        "U": None if opca.U is None else sorted(opca.U),
    }


def aks_to_dict(aks):
    return {
        "terms": list(aks.terms),
        "stacks": list(aks.stacks),
        "dot": sorted([t, s, r] for (t, s), r in aks.dot.items()),
        "push": sorted([t, pi, rho] for (t, pi), rho in aks.push.items()),
        "kOf": sorted([pi, t] for pi, t in aks.kof.items()),
        "K": aks.K, "S": aks.S, "cc": aks.cc,
        "QP": sorted(aks.qp),
        "pole": sorted([t, pi] for (t, pi) in aks.pole),
    }


def save_aks(path, aks):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(aks_to_dict(aks), fh, indent=1, sort_keys=True)
        fh.write("\n")
