"""Text formats: system files, table files, hom files, move scripts, the
topology and Horn-theory generators, and report rendering.

System file, line oriented:

    monoid free letters = a b      (or: naturals | powerset base = ... |
    rules                           table elements = e x ; identity = e
    ab -> _                         with x*y=z lines before "rules")
    ba -> _

Element literals: free words as juxtaposed letters with `_` for the empty
word; naturals as decimals; subsets as `{a,b}` / `{}`; table elements by
name; free-product elements as `.`-separated syllables with `v^n` letter
powers.  Scripts carry one move per line (`add l -> r`, `remove l -> r`,
`adjoin v -> a`, `collapse { l -> r ; ... }`), `#` comments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from mrw.backends import (
    FreeBackend,
    NaturalsBackend,
    PowersetBackend,
    TableBackend,
    UsageError,
)
from mrw.engine import (
    Bounds,
    CheckVerdict,
    DEFAULT_BOUNDS,
    EngineError,
    Mrs,
    Rule,
    mrs,
)
from mrw.gett import (
    GettScript,
    Type1Add,
    Type2Remove,
    Type3Adjoin,
    Type4Collapse,
    apply_type1,
    apply_type2,
    apply_type3,
    apply_type4,
    MoveRefused,
    replay_move,
)
from mrw.tables import FiniteMonoid, TableError


class FormatError(ValueError):
    def __init__(self, message, line=None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


def _meaningful_lines(text):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


# ---------------------------------------------------------------------------
# tables

def parse_table(text) -> FiniteMonoid:
    lines = list(_meaningful_lines(text))
    if not lines:
        raise FormatError("empty table file")
    i, header = lines[0]
    names, identity = _parse_table_header(header, i)
    table = {}
    for i, line in lines[1:]:
        if line == "rules":
            raise FormatError("table files do not take a rules block", i)
        _parse_table_entry(line, names, table, i)
    try:
        return FiniteMonoid(names, identity, table)
    except TableError as e:
        raise FormatError(str(e)) from e


def _parse_table_header(line, lineno):
    if not line.startswith("monoid table"):
        raise FormatError("expected 'monoid table elements = ... ; identity = ...'",
                          lineno)
    body = line[len("monoid table"):]
    parts = [p.strip() for p in body.split(";")]
    names = identity = None
    for p in parts:
        key, _, val = p.partition("=")
        key, val = key.strip(), val.strip()
        if key == "elements":
            names = tuple(val.split())
        elif key == "identity":
            identity = val
        elif key:
            raise FormatError(f"unknown table header field {key!r}", lineno)
    if not names or identity is None:
        raise FormatError("table header needs both elements and identity", lineno)
    return names, identity


def _parse_table_entry(line, names, table, lineno):
    lhs, eq, rhs = line.partition("=")
    if not eq:
        raise FormatError(f"expected 'a*b=c', got {line!r}", lineno)
    a, star, b = lhs.partition("*")
    if not star:
        raise FormatError(f"expected 'a*b=c', got {line!r}", lineno)
    a, b, c = a.strip(), b.strip(), rhs.strip()
    for n in (a, b, c):
        if n not in names:
            raise FormatError(f"{n!r} is not a declared element", lineno)
    table[(a, b)] = c


def emit_table(m: FiniteMonoid) -> str:
    out = [f"monoid table elements = {' '.join(m.names)} ; identity = {m.identity}"]
    for a in m.names:
        for b in m.names:
            out.append(f"{a}*{b}={m.op(a, b)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# systems

def parse_mrs(text) -> Mrs:
    lines = list(_meaningful_lines(text))
    if not lines:
        raise FormatError("empty system file")
    i, header = lines[0]
    rest = lines[1:]
    if header.startswith("monoid table"):
        names, identity = _parse_table_header(header, i)
        table = {}
        k = 0
        while k < len(rest) and rest[k][1] != "rules":
            _parse_table_entry(rest[k][1], names, table, rest[k][0])
            k += 1
        try:
            backend = TableBackend(FiniteMonoid(names, identity, table))
        except TableError as e:
            raise FormatError(str(e)) from e
        rest = rest[k:]
    elif header.startswith("monoid free"):
        _, _, val = header.partition("letters")
        val = val.partition("=")[2].strip()
        if not val:
            raise FormatError("free header needs 'letters = ...'", i)
        try:
            backend = FreeBackend(tuple(val.split()))
        except UsageError as e:
            raise FormatError(str(e), i) from e
    elif header.startswith("monoid naturals"):
        backend = NaturalsBackend()
    elif header.startswith("monoid powerset"):
        _, _, val = header.partition("base")
        val = val.partition("=")[2].strip()
        try:
            backend = PowersetBackend(tuple(val.split()))
        except UsageError as e:
            raise FormatError(str(e), i) from e
    else:
        raise FormatError(f"unknown monoid header {header!r}", i)

    pairs = []
    if rest:
        i0, first = rest[0]
        if first != "rules":
            raise FormatError("expected a 'rules' line", i0)
        for i, line in rest[1:]:
            pairs.append(_parse_rule_line(backend, line, i))
    try:
        return mrs(backend, pairs)
    except UsageError as e:
        raise FormatError(str(e)) from e


def _parse_rule_line(backend, line, lineno):
    lhs, arrow, rhs = line.partition("->")
    if not arrow or not lhs.strip() or not rhs.strip():
        raise FormatError(f"expected 'lhs -> rhs', got {line!r}", lineno)
    try:
        return (backend.parse_element(lhs.strip()), backend.parse_element(rhs.strip()))
    except UsageError as e:
        raise FormatError(str(e), lineno) from e


def emit_mrs(system: Mrs) -> str:
    backend = system.backend
    if isinstance(backend, FreeBackend):
        header = f"monoid free letters = {' '.join(backend.letters)}"
        body = []
    elif isinstance(backend, NaturalsBackend):
        header = "monoid naturals"
        body = []
    elif isinstance(backend, PowersetBackend):
        header = f"monoid powerset base = {' '.join(backend.base)}"
        body = []
    elif isinstance(backend, TableBackend):
        m = backend.monoid
        header = (f"monoid table elements = {' '.join(m.names)} ; "
                  f"identity = {m.identity}")
        body = [f"{a}*{b}={m.op(a, b)}" for a in m.names for b in m.names]
    else:
        raise FormatError(f"cannot serialize backend {backend!r}")
    out = [header] + body + ["rules"]
    for rule in system.rules:
        out.append(f"{backend.format_element(rule.lhs)} -> "
                   f"{backend.format_element(rule.rhs)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# hom files

def parse_hom(text, source: Mrs, target: Mrs):
    """`map x -> y` lines; keys are letters for free sources, the generator 1
    for the naturals, and carrier elements otherwise."""
    from mrw.irreducibles import MrsHom

    entries = []
    for i, line in _meaningful_lines(text):
        if not line.startswith("map "):
            raise FormatError(f"expected 'map x -> y', got {line!r}", i)
        lhs, arrow, rhs = line[4:].partition("->")
        if not arrow:
            raise FormatError(f"expected 'map x -> y', got {line!r}", i)
        entries.append((i, lhs.strip(), rhs.strip()))
    tgt_parse = target.backend.parse_element
    if isinstance(source.backend, FreeBackend):
        images = {}
        for i, k, v in entries:
            if k not in source.backend.letters:
                raise FormatError(f"{k!r} is not a source letter", i)
            images[k] = tgt_parse(v)
        return MrsHom.from_letters(source, target, images)
    if isinstance(source.backend, NaturalsBackend):
        if len(entries) != 1 or entries[0][1] != "1":
            raise FormatError("naturals sources take exactly one 'map 1 -> y' line")
        return MrsHom.from_generator(source, target, tgt_parse(entries[0][2]))
    mapping = {}
    for i, k, v in entries:
        mapping[source.backend.parse_element(k)] = tgt_parse(v)
    return MrsHom.from_table(source, target, mapping)


# ---------------------------------------------------------------------------
# move scripts

@dataclass
class MoveRequest:
    kind: str            # add | remove | adjoin | collapse
    lhs: str = ""
    rhs: str = ""
    j_lines: tuple = ()  # for collapse
    line: int = 0


def parse_script(text) -> list:
    requests = []
    for i, line in _meaningful_lines(text):
        if line.startswith("add ") or line.startswith("remove "):
            kind, _, body = line.partition(" ")
            lhs, arrow, rhs = body.partition("->")
            if not arrow:
                raise FormatError(f"expected '{kind} lhs -> rhs'", i)
            requests.append(MoveRequest(kind, lhs.strip(), rhs.strip(), line=i))
        elif line.startswith("adjoin "):
            body = line[len("adjoin "):]
            letter, arrow, target = body.partition("->")
            if not arrow:
                raise FormatError("expected 'adjoin letter -> target'", i)
            requests.append(
                MoveRequest("adjoin", letter.strip(), target.strip(), line=i)
            )
        elif line.startswith("collapse"):
            body = line[len("collapse"):].strip()
            if not (body.startswith("{") and body.endswith("}")):
                raise FormatError("expected 'collapse { l -> r ; ... }'", i)
            inner = body[1:-1]
            j_lines = tuple(p.strip() for p in inner.split(";") if p.strip())
            requests.append(MoveRequest("collapse", j_lines=j_lines, line=i))
        else:
            raise FormatError(f"unknown move {line!r}", i)
    return requests


@dataclass
class ScriptRun:
    final: Mrs | None
    ok: bool
    failed_index: int | None = None
    message: str = ""
    definitive: bool = True
    moves: list = field(default_factory=list)

    @property
    def status_code(self):
        if self.ok:
            return 0
        return 1 if self.definitive else 2


def run_requests(initial: Mrs, requests, bounds: Bounds = DEFAULT_BOUNDS) -> ScriptRun:
    """Apply parsed move requests in order, constructing and checking the
    certificate for each; literals are read against the evolving carrier."""
    current = initial
    moves = []
    for idx, req in enumerate(requests):
        backend = current.backend
        try:
            if req.kind == "add":
                a = backend.parse_element(req.lhs)
                b = backend.parse_element(req.rhs)
                current, move = apply_type1(current, a, b, bounds)
            elif req.kind == "remove":
                a = backend.parse_element(req.lhs)
                b = backend.parse_element(req.rhs)
                current, move = apply_type2(current, Rule(a, b), bounds)
            elif req.kind == "adjoin":
                target = backend.parse_element(req.rhs)
                current, move = apply_type3(current, req.lhs, target, bounds)
            elif req.kind == "collapse":
                j_rules = []
                for part in req.j_lines:
                    lhs, arrow, rhs = part.partition("->")
                    if not arrow:
                        raise FormatError("expected 'l -> r' inside collapse",
                                          req.line)
                    j_rules.append(Rule(backend.parse_element(lhs.strip()),
                                        backend.parse_element(rhs.strip())))
                current, move, _ = apply_type4(current, j_rules, bounds)
            else:
                raise FormatError(f"unknown move kind {req.kind!r}", req.line)
        except MoveRefused as e:
            return ScriptRun(None, False, idx, str(e), definitive=e.definitive,
                             moves=moves)
        except (UsageError, FormatError, EngineError) as e:
            return ScriptRun(None, False, idx, str(e), moves=moves)
        moves.append(move)
    return ScriptRun(current, True, moves=moves)


def emit_script(initial: Mrs, script: GettScript, bounds: Bounds = DEFAULT_BOUNDS) -> str:
    """Render an in-memory script to the textual move format (certificates
    are reconstructed on replay)."""
    out = []
    current = initial
    for move in script:
        backend = current.backend
        fmt = backend.format_element
        if isinstance(move, Type1Add):
            out.append(f"add {fmt(move.rule.lhs)} -> {fmt(move.rule.rhs)}")
        elif isinstance(move, Type2Remove):
            out.append(f"remove {fmt(move.rule.lhs)} -> {fmt(move.rule.rhs)}")
        elif isinstance(move, Type3Adjoin):
            out.append(f"adjoin {move.letter} -> {fmt(move.target)}")
        elif isinstance(move, Type4Collapse):
            inner = " ; ".join(
                f"{fmt(r.lhs)} -> {fmt(r.rhs)}" for r in move.j_rules
            )
            out.append("collapse { " + inner + " }")
        else:
            raise FormatError(f"unknown move {move!r}")
        current = replay_move(current, move, bounds)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# topology and Horn-theory rule generators

@dataclass
class TopologySpec:
    base: tuple
    opens: list  # of frozensets

    def validate(self):
        x = frozenset(self.base)
        opens = set(self.opens)
        if frozenset() not in opens:
            raise FormatError("topology must contain the empty set")
        if x not in opens:
            raise FormatError("topology must contain the whole base set")
        for u in opens:
            for v in opens:
                if u | v not in opens:
                    raise FormatError(
                        f"opens not closed under union: {set(u)} | {set(v)}"
                    )
                if u & v not in opens:
                    raise FormatError(
                        f"opens not closed under intersection: {set(u)} & {set(v)}"
                    )

    def closure(self, u):
        closed = [frozenset(self.base) - o for o in self.opens]
        return frozenset.intersection(*[c for c in closed if u <= c])


def parse_topology(text) -> TopologySpec:
    base = None
    opens = []
    for i, line in _meaningful_lines(text):
        key, eq, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key == "base":
            base = tuple(val.split())
        elif key == "open":
            if base is None:
                raise FormatError("declare the base before the opens", i)
            pb = PowersetBackend(base)
            opens.append(pb.parse_element(val))
        else:
            raise FormatError(f"unknown line {line!r}", i)
    if base is None:
        raise FormatError("missing base declaration")
    spec = TopologySpec(base, opens)
    spec.validate()
    return spec


def gen_closure_rules(spec: TopologySpec) -> Mrs:
    """One rule per subset, sending it to its closure (smallest closed
    superset); rules for already-closed sets are degenerate and inert."""
    spec.validate()
    backend = PowersetBackend(spec.base)
    pairs = [(u, spec.closure(u)) for u in backend.elements()]
    return mrs(backend, pairs)


@dataclass
class HornTheorySpec:
    atoms: tuple
    sequents: list  # of (frozenset, frozenset)


def parse_horn(text) -> HornTheorySpec:
    atoms = None
    sequents = []
    for i, line in _meaningful_lines(text):
        if line.startswith("atoms"):
            atoms = tuple(line.partition("=")[2].split())
        elif line.startswith("sequent "):
            if atoms is None:
                raise FormatError("declare atoms before sequents", i)
            body = line[len("sequent "):]
            lhs, arrow, rhs = body.partition("->")
            if not arrow:
                raise FormatError("expected 'sequent p q -> r'", i)
            gamma_phi = frozenset(lhs.split())
            gamma_psi = frozenset(rhs.split())
            for atom in gamma_phi | gamma_psi:
                if atom not in atoms:
                    raise FormatError(f"undeclared atom {atom!r}", i)
            sequents.append((gamma_phi, gamma_psi))
        else:
            raise FormatError(f"unknown line {line!r}", i)
    if atoms is None:
        raise FormatError("missing atoms declaration")
    return HornTheorySpec(atoms, sequents)


def gen_horn_rules(spec: HornTheorySpec) -> Mrs:
    """Forward-chaining rules: each sequent premise-set rewrites to itself
    plus the conclusion atoms.  Normal forms are the Horn closures."""
    backend = PowersetBackend(spec.atoms)
    pairs = []
    seen = set()
    for gamma_phi, gamma_psi in spec.sequents:
        rule = (gamma_phi, gamma_phi | gamma_psi)
        if rule not in seen:
            seen.add(rule)
            pairs.append(rule)
    return mrs(backend, pairs)


# ---------------------------------------------------------------------------
# reports

def verdict_json(v: CheckVerdict):
    out = {"status": v.status.value, "exact": v.exact}
    if v.bound is not None:
        out["bound"] = v.bound
    if v.reason:
        out["reason"] = v.reason
    if v.witness is not None:
        out["witness"] = describe_witness(v.witness)
    return out


def describe_witness(witness):
    from mrw.engine import DerivationTrace, PeakWitness

    if isinstance(witness, DerivationTrace):
        return {
            "kind": "derivation",
            "elements": [str(witness.start)]
            + [str(s.after) for s in witness.steps],
        }
    if isinstance(witness, PeakWitness):
        return {
            "kind": "peak",
            "source": str(witness.source),
            "left": str(witness.left),
            "right": str(witness.right),
        }
    return {"kind": "other", "text": str(witness)}


def render_verdict(name, v: CheckVerdict, backend=None) -> str:
    text = f"{name}: {v.describe()}"
    if v.witness is not None and backend is not None:
        from mrw.engine import DerivationTrace, PeakWitness

        if isinstance(v.witness, DerivationTrace):
            chain = " -> ".join(
                [backend.format_element(v.witness.start)]
                + [backend.format_element(s.after) for s in v.witness.steps]
            )
            text += f"\n  witness: {chain}"
        elif isinstance(v.witness, PeakWitness):
            text += (
                f"\n  witness peak: {backend.format_element(v.witness.left)}"
                f" <- {backend.format_element(v.witness.source)} ->"
                f" {backend.format_element(v.witness.right)}"
            )
    return text


def emit_report(entries, as_json=False) -> str:
    """entries: list of (name, value) where value is a CheckVerdict, bool,
    or string; stable text, or a machine form with --json."""
    if as_json:
        payload = {}
        for name, value in entries:
            if isinstance(value, CheckVerdict):
                payload[name] = verdict_json(value)
            else:
                payload[name] = value
        return json.dumps(payload, indent=2, sort_keys=True)
    lines = []
    for name, value in entries:
        if isinstance(value, CheckVerdict):
            lines.append(render_verdict(name, value))
        else:
            lines.append(f"{name}: {value}")
    return "\n".join(lines)
