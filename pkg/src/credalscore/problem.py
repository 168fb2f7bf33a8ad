"""JSON problem files.

A file describes one problem: a knowledge set, a belief function, or an
information system.  Example::

    {
      "frame": {"atoms": ["a", "b", "c"]},
      "knowledge": [
        {"type": "prob_bound", "event": ["a"], "op": ">=", "value": 0.2},
        {"type": "expectation", "variable": [0, 1, 2], "op": "==", "value": 1.5}
      ],
      "score": "log"
    }

Belief problems carry ``"belief": {"mass": [{"focal": ["a", "b"], "value": 0.3}, ...]}``;
information systems carry ``"infosys": {"binary": {"q": 0.9, "r": 0.4, "n": 2}}`` or
``"infosys": {"joint": {"frame_e": [...], "frame_i": [...], "constraints": [...]}}``
where joint constraints name product atoms as ``"e|i"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .belief import MassFunction
from .credal import CredalSet, LinearConstraint, from_constraints
from .errors import CredalError, ValidationError
from .frame import Frame, RandVar
from .infosys import BinaryChannel, InfoSystem, ProductFrame
from .scoring import PayoffMatrix

SCORE_NAMES = {"log": "log", "quad": "quadratic", "quadratic": "quadratic",
               "decisional": "decisional"}


class ProblemError(ValidationError):
    """Invalid problem file; the message names the offending field or line."""


@dataclass
class ProblemSpec:
    kind: str  # "knowledge" | "belief" | "infosys"
    frame: Optional[Frame] = None
    constraints: list = field(default_factory=list)
    score: Optional[str] = None
    payoff: Optional[PayoffMatrix] = None
    belief: Optional[MassFunction] = None
    channel: Optional[BinaryChannel] = None
    system: Optional[InfoSystem] = None

    def credal_set(self) -> CredalSet:
        if self.kind == "belief":
            from .belief import belief_to_credal
            return belief_to_credal(self.belief)
        if self.kind != "knowledge":
            raise ProblemError("problem has no knowledge set")
        return from_constraints(self.frame, self.constraints)


def _fail(path: str, msg: str):
    raise ProblemError(f"{path}: {msg}")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    return float(value)


def _names(value: Any, path: str) -> list[str]:
    if isinstance(value, str):
        return [value]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        _fail(path, "expected an atom name or a list of atom names")
    return value


def _resolve(frame: Frame, names: list[str], path: str):
    try:
        return frame.event(names)
    except ValidationError:
        bad = next(n for n in names if n not in frame.atoms)
        _fail(path, f"unknown atom {bad!r}")


def _vector(frame: Frame, value: Any, path: str) -> list[float]:
    if isinstance(value, dict):
        vec = [0.0] * frame.n
        for name, v in value.items():
            if name not in frame.atoms:
                _fail(path, f"unknown atom {name!r}")
            vec[frame.index(name)] = _number(v, f"{path}.{name}")
        return vec
    if not isinstance(value, list) or len(value) != frame.n:
        _fail(path, f"expected {frame.n} numbers or an atom->number mapping")
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _frame(value: Any, path: str) -> Frame:
    if isinstance(value, dict):
        if "atoms" not in value:
            _fail(path, "missing 'atoms'")
        value = value["atoms"]
    names = _names(value, path)
    try:
        return Frame(tuple(names))
    except ValidationError as exc:
        _fail(path, str(exc))


def parse_constraint(frame: Frame, item: Any, path: str) -> LinearConstraint:
    if not isinstance(item, dict):
        _fail(path, "constraint must be an object")
    ctype = item.get("type", "prob_bound")
    op = item.get("op")
    if op not in ("<=", "==", ">="):
        _fail(f"{path}.op", f"expected '<=', '==' or '>=', got {op!r}")
    if "value" not in item:
        _fail(path, "missing 'value'")
    value = _number(item["value"], f"{path}.value")
    if ctype == "prob_bound":
        if "event" not in item:
            _fail(path, "missing 'event'")
        e = _resolve(frame, _names(item["event"], f"{path}.event"), f"{path}.event")
        if not 0.0 <= value <= 1.0:
            _fail(f"{path}.value", f"probability bound {value} outside [0, 1]")
        return LinearConstraint.prob_bound(e, op, value)
    if ctype == "expectation":
        if "variable" not in item:
            _fail(path, "missing 'variable'")
        x = _vector(frame, item["variable"], f"{path}.variable")
        return LinearConstraint.expectation(RandVar(frame, x), op, value)
    if ctype == "linear":
        if "coeffs" not in item:
            _fail(path, "missing 'coeffs'")
        return LinearConstraint(frame, _vector(frame, item["coeffs"], f"{path}.coeffs"), op, value)
    _fail(f"{path}.type", f"unknown constraint type {ctype!r}")


def _constraints(frame: Frame, items: Any, path: str) -> list[LinearConstraint]:
    if not isinstance(items, list):
        _fail(path, "expected a list of constraints")
    return [parse_constraint(frame, c, f"{path}[{i}]") for i, c in enumerate(items)]


def _payoff(frame: Optional[Frame], value: Any, path: str) -> PayoffMatrix:
    if not isinstance(value, dict) or "u" not in value:
        _fail(path, "expected {'actions': [...], 'u': [[...], ...]}")
    u = value["u"]
    if not isinstance(u, list) or not u or not all(isinstance(row, list) for row in u):
        _fail(f"{path}.u", "expected a non-empty list of rows")
    rows = [[_number(x, f"{path}.u[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(u)]
    if frame is not None and any(len(row) != frame.n for row in rows):
        _fail(f"{path}.u", f"each row needs {frame.n} payoffs")
    actions = value.get("actions", [f"a{i + 1}" for i in range(len(rows))])
    try:
        return PayoffMatrix(tuple(_names(actions, f"{path}.actions")), rows)
    except ValidationError as exc:
        _fail(path, str(exc))


def _belief(frame: Frame, value: Any, path: str) -> MassFunction:
    if not isinstance(value, dict) or not isinstance(value.get("mass"), list):
        _fail(path, "expected {'mass': [{'focal': [...], 'value': x}, ...]}")
    focal = {}
    for i, item in enumerate(value["mass"]):
        p = f"{path}.mass[{i}]"
        if not isinstance(item, dict) or "focal" not in item or "value" not in item:
            _fail(p, "expected {'focal': [...], 'value': x}")
        e = _resolve(frame, _names(item["focal"], f"{p}.focal"), f"{p}.focal")
        if not e:
            _fail(f"{p}.focal", "focal set must be non-empty")
        focal[e] = focal.get(e, 0.0) + _number(item["value"], f"{p}.value")
    try:
        return MassFunction(frame, focal)
    except ValidationError as exc:
        _fail(path, str(exc))


def _infosys(value: Any, path: str) -> tuple[Optional[BinaryChannel], Optional[InfoSystem]]:
    if not isinstance(value, dict) or len(value) != 1 or not ({"binary", "joint"} & value.keys()):
        _fail(path, "expected exactly one of 'binary' or 'joint'")
    if "binary" in value:
        b = value["binary"]
        p = f"{path}.binary"
        if not isinstance(b, dict) or "q" not in b or "r" not in b:
            _fail(p, "expected {'q': x, 'r': y, 'n': N}")
        q, r = _number(b["q"], f"{p}.q"), _number(b["r"], f"{p}.r")
        n = b.get("n", 1)
        if isinstance(n, bool) or not isinstance(n, int):
            _fail(f"{p}.n", "expected an integer")
        try:
            return BinaryChannel(q, r, n), None
        except ValidationError as exc:
            _fail(p, str(exc))
    j = value["joint"]
    p = f"{path}.joint"
    if not isinstance(j, dict):
        _fail(p, "expected an object")
    for key in ("frame_e", "frame_i"):
        if key not in j:
            _fail(p, f"missing {key!r}")
    fe, fi = _frame(j["frame_e"], f"{p}.frame_e"), _frame(j["frame_i"], f"{p}.frame_i")
    try:
        frame = ProductFrame(fe, fi)
    except ValidationError as exc:
        _fail(p, str(exc))
    cons = _constraints(frame, j.get("constraints", []), f"{p}.constraints")
    try:
        return None, InfoSystem(fe, fi, from_constraints(frame, cons))
    except CredalError as exc:
        raise ProblemError(f"{p}: {exc}") from exc


def parse_problem(text: str) -> ProblemSpec:
    """Parse and validate a problem document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        _fail("<root>", "expected a JSON object")
    unknown = set(doc) - {"frame", "knowledge", "score", "payoff", "belief", "infosys"}
    if unknown:
        _fail("<root>", f"unknown keys {sorted(unknown)}")
    kinds = [k for k in ("belief", "infosys") if k in doc]
    if len(kinds) > 1:
        _fail("<root>", "a file holds exactly one problem kind")
    score = doc.get("score")
    if score is not None and score not in SCORE_NAMES:
        _fail("score", f"unknown score {score!r}")
    score = SCORE_NAMES.get(score) if score else None

    if kinds == ["infosys"]:
        if "knowledge" in doc:
            _fail("knowledge", "information systems put constraints under infosys.joint")
        channel, system = _infosys(doc["infosys"], "infosys")
        return ProblemSpec("infosys", score=score, channel=channel, system=system)

    if "frame" not in doc:
        _fail("<root>", "missing 'frame'")
    frame = _frame(doc["frame"], "frame")
    spec = ProblemSpec(kinds[0] if kinds else "knowledge", frame=frame, score=score)
    if spec.kind == "belief":
        if "knowledge" in doc:
            _fail("knowledge", "belief problems take no extra constraints")
        spec.belief = _belief(frame, doc["belief"], "belief")
    else:
        spec.constraints = _constraints(frame, doc.get("knowledge", []), "knowledge")
    if "payoff" in doc:
        spec.payoff = _payoff(frame, doc["payoff"], "payoff")
    return spec


def load_problem(path: str) -> ProblemSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemError(f"{path}: {exc.strerror}") from None
    try:
        return parse_problem(text)
    except ProblemError as exc:
        raise ProblemError(f"{path}: {exc}") from None
