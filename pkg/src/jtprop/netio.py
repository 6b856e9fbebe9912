"""Line-oriented text formats for networks, evidence, and junction trees.

The grammar is deliberately small so fixtures stay self-contained:

    net NAME
    var NAME STATE1 STATE2 ...
    cpd CHILD | PARENT1 PARENT2 ... : v1 v2 ...

Values are listed in the canonical factor layout over the sorted domain
``{child} | parents`` (last variable varying fastest).  Evidence files
hold one ``NAME=STATE`` per line.  Junction-tree files use ``clique ID
VAR...``, ``edge ID ID`` and ``assign CPDVAR -> cliqueID`` records.
``#`` starts a comment anywhere on a line.  Serialization renders floats
with round-trip-safe formatting, so parse(serialize(x)) is exact.
"""

from __future__ import annotations

import re

from .model import (
    BayesianNetwork,
    CpdValidationError,
    Evidence,
    Factor,
    StructuralError,
    Variable,
    validate_cpd,
)
from .compilation import JunctionTree

_RESERVED = {"|", ":", "->", "net", "var", "cpd", "clique", "edge", "assign"}
_NAME_RE = re.compile(r"[A-Za-z0-9_.\-]+\Z")


class ParseError(ValueError):
    """A positioned diagnostic; parsing never raises anything else."""

    def __init__(self, line: int, col: int, msg: str):
        self.line = line
        self.col = col
        self.msg = msg
        super().__init__(f"line {line}, col {col}: {msg}")


def _tokenize(text: str):
    """Yield (lineno, [(col, token), ...]) for non-blank, de-commented lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]
        if toks:
            yield lineno, toks


def _check_name(lineno: int, col: int, tok: str) -> str:
    if tok in _RESERVED or "=" in tok or not _NAME_RE.match(tok):
        raise ParseError(lineno, col, f"invalid name {tok!r}")
    return tok


def _parse_float(lineno: int, col: int, tok: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(lineno, col, f"expected a number, got {tok!r}") from None


# -- networks -------------------------------------------------------------------


def parse_network(text: str) -> BayesianNetwork:
    """Parse a network document; raises ParseError on any defect."""
    name: str | None = None
    net_line = 1
    variables: list[Variable] = []
    ids: dict[str, int] = {}
    parents: dict[int, tuple[int, ...]] = {}
    cpds: dict[int, Factor] = {}
    cpd_lines: dict[int, int] = {}

    for lineno, toks in _tokenize(text):
        col0, kw = toks[0]
        if kw == "net":
            if name is not None:
                raise ParseError(lineno, col0, "duplicate net declaration")
            if len(toks) != 2:
                raise ParseError(lineno, col0, "expected: net NAME")
            name = _check_name(lineno, toks[1][0], toks[1][1])
            net_line = lineno
        elif kw == "var":
            if len(toks) < 3:
                raise ParseError(lineno, col0, "expected: var NAME STATE...")
            vcol, vname = toks[1]
            _check_name(lineno, vcol, vname)
            if vname in ids:
                raise ParseError(lineno, vcol, f"variable {vname!r} declared twice")
            states = []
            for c, s in toks[2:]:
                states.append(_check_name(lineno, c, s))
            if len(set(states)) != len(states):
                raise ParseError(lineno, toks[2][0], f"duplicate state label in {vname!r}")
            vid = len(variables)
            ids[vname] = vid
            variables.append(Variable(vid, vname, len(states), tuple(states)))
        elif kw == "cpd":
            _parse_cpd_line(lineno, toks, ids, variables, parents, cpds, cpd_lines)
        else:
            raise ParseError(lineno, col0, f"unknown directive {kw!r}")

    if name is None:
        raise ParseError(1, 1, "missing net declaration")
    if not variables:
        raise ParseError(net_line, 1, "network declares no variables")
    for v in range(len(variables)):
        if v not in cpds:
            raise ParseError(net_line, 1, f"no cpd for variable {variables[v].name!r}")

    try:
        return BayesianNetwork(
            tuple(variables),
            tuple(parents[v] for v in range(len(variables))),
            tuple(cpds[v] for v in range(len(variables))),
            name,
        )
    except (StructuralError, CpdValidationError) as exc:
        raise ParseError(net_line, 1, str(exc)) from exc


def _parse_cpd_line(lineno, toks, ids, variables, parents, cpds, cpd_lines):
    col0 = toks[0][0]
    if len(toks) < 4:
        raise ParseError(lineno, col0, "expected: cpd CHILD | PARENTS... : VALUES...")
    ccol, child = toks[1]
    if child not in ids:
        raise ParseError(lineno, ccol, f"undeclared variable {child!r}")
    cid = ids[child]
    if cid in cpds:
        raise ParseError(lineno, ccol, f"duplicate cpd for {child!r}")
    rest = toks[2:]
    if rest[0][1] != "|":
        raise ParseError(lineno, rest[0][0], "expected '|' after the child variable")
    try:
        sep = next(i for i, (_, t) in enumerate(rest) if t == ":")
    except StopIteration:
        raise ParseError(lineno, rest[-1][0], "expected ':' before the values") from None
    pa: list[int] = []
    for c, t in rest[1:sep]:
        if t not in ids:
            raise ParseError(lineno, c, f"undeclared parent {t!r}")
        pid = ids[t]
        if pid == cid or pid in pa:
            raise ParseError(lineno, c, f"repeated variable {t!r} in cpd domain")
        pa.append(pid)
    vals = [_parse_float(lineno, c, t) for c, t in rest[sep + 1 :]]
    if any(v < 0 for v in vals):
        raise ParseError(lineno, rest[sep + 1][0], "negative probability value")
    domain = tuple(sorted({cid, *pa}))
    cards = {v: variables[v].cardinality for v in domain}
    expected = 1
    for v in domain:
        expected *= cards[v]
    if len(vals) != expected:
        raise ParseError(lineno, col0, f"cpd for {child!r} needs {expected} values, got {len(vals)}")
    factor = Factor.from_values(domain, cards, vals, head={cid}, cpd_pure=True)
    try:
        validate_cpd(factor)
    except CpdValidationError as exc:
        raise ParseError(lineno, col0, f"cpd for {child!r}: {exc}") from exc
    parents[cid] = tuple(pa)
    cpds[cid] = factor
    cpd_lines[cid] = lineno


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize_network(bn: BayesianNetwork) -> str:
    """Deterministic text rendering; parses back to an identical network."""
    lines = [f"net {bn.name}"]
    for v in bn.variables:
        lines.append(f"var {v.name} " + " ".join(v.states))
    for v in bn.variables:
        pa = " ".join(bn.variables[p].name for p in bn.parents[v.id])
        vals = " ".join(_fmt(x) for x in bn.cpds[v.id].values)
        lines.append(f"cpd {v.name} |{' ' + pa if pa else ''} : {vals}")
    return "\n".join(lines) + "\n"


# -- evidence -------------------------------------------------------------------


def parse_evidence(text: str, bn: BayesianNetwork) -> Evidence:
    """Resolve NAME=STATE lines against a network."""
    seen: dict[int, int] = {}
    for lineno, toks in _tokenize(text):
        joined = " ".join(t for _, t in toks)
        if "=" not in joined:
            raise ParseError(lineno, toks[0][0], "expected NAME=STATE")
        vname, _, sname = joined.partition("=")
        vname, sname = vname.strip(), sname.strip()
        try:
            var = bn.by_name(vname)
        except KeyError:
            raise ParseError(lineno, toks[0][0], f"unknown variable {vname!r}") from None
        if sname not in var.states:
            raise ParseError(lineno, toks[0][0], f"unknown state {sname!r} for {vname!r}")
        if var.id in seen:
            raise ParseError(lineno, toks[0][0], f"duplicate evidence for {vname!r}")
        seen[var.id] = var.states.index(sname)
    return Evidence(seen)


def serialize_evidence(e: Evidence, bn: BayesianNetwork) -> str:
    lines = [f"{bn.variables[v].name}={bn.variables[v].states[s]}" for v, s in e.items()]
    return "\n".join(lines) + ("\n" if lines else "")


# -- junction trees -------------------------------------------------------------


def parse_junction_tree(text: str, bn: BayesianNetwork) -> JunctionTree:
    """Load a pinned tree: cliques, edges, and the CPD assignment."""
    cliques: dict[int, tuple[int, ...]] = {}
    edges: list[tuple[int, int]] = []
    assignment: dict[int, int] = {}
    for lineno, toks in _tokenize(text):
        col0, kw = toks[0]
        if kw == "clique":
            if len(toks) < 3:
                raise ParseError(lineno, col0, "expected: clique ID VAR...")
            cid = _parse_int(lineno, toks[1])
            if cid in cliques:
                raise ParseError(lineno, toks[1][0], f"duplicate clique id {cid}")
            members = []
            for c, t in toks[2:]:
                try:
                    members.append(bn.by_name(t).id)
                except KeyError:
                    raise ParseError(lineno, c, f"unknown variable {t!r}") from None
            if len(set(members)) != len(members):
                raise ParseError(lineno, col0, f"repeated variable in clique {cid}")
            cliques[cid] = tuple(sorted(members))
        elif kw == "edge":
            if len(toks) != 3:
                raise ParseError(lineno, col0, "expected: edge ID ID")
            edges.append((_parse_int(lineno, toks[1]), _parse_int(lineno, toks[2])))
        elif kw == "assign":
            if len(toks) != 4 or toks[2][1] != "->":
                raise ParseError(lineno, col0, "expected: assign VAR -> CLIQUEID")
            try:
                vid = bn.by_name(toks[1][1]).id
            except KeyError:
                raise ParseError(lineno, toks[1][0], f"unknown variable {toks[1][1]!r}") from None
            if vid in assignment:
                raise ParseError(lineno, toks[1][0], f"duplicate assignment for {toks[1][1]!r}")
            assignment[vid] = _parse_int(lineno, toks[3])
        else:
            raise ParseError(lineno, col0, f"unknown directive {kw!r}")

    k = len(cliques)
    if sorted(cliques) != list(range(k)):
        raise ParseError(1, 1, "clique ids must be dense from 0")
    clique_list = [cliques[i] for i in range(k)]
    for a, b in edges:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            raise ParseError(1, 1, f"edge ({a}, {b}) references invalid cliques")
        if not set(clique_list[a]) & set(clique_list[b]):
            raise ParseError(1, 1, f"edge ({a}, {b}) has an empty separator")
    for vid, cid in assignment.items():
        if not 0 <= cid < k:
            raise ParseError(1, 1, f"assignment of {bn.variables[vid].name!r} to missing clique {cid}")
        dom = set(bn.cpds[vid].domain)
        if not dom <= set(clique_list[cid]):
            raise ParseError(
                1, 1, f"cpd of {bn.variables[vid].name!r} does not fit clique {cid}"
            )
    for vid in range(bn.n):
        if vid not in assignment:
            raise ParseError(1, 1, f"no clique assignment for {bn.variables[vid].name!r}")
    try:
        return JunctionTree(clique_list, edges, assignment)
    except StructuralError as exc:
        raise ParseError(1, 1, str(exc)) from exc


def _parse_int(lineno: int, tok_pair) -> int:
    col, tok = tok_pair
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, col, f"expected an integer, got {tok!r}") from None


def serialize_junction_tree(jt: JunctionTree, bn: BayesianNetwork) -> str:
    lines = []
    for i, clq in enumerate(jt.cliques):
        lines.append(f"clique {i} " + " ".join(bn.variables[v].name for v in clq))
    for a, b in jt.edges:
        lines.append(f"edge {a} {b}")
    if jt.assignment is not None:
        for v in sorted(jt.assignment):
            lines.append(f"assign {bn.variables[v].name} -> {jt.assignment[v]}")
    return "\n".join(lines) + "\n"
