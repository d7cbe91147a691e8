"""The canonical model file format.

One JSON document per model, with a closed schema: unknown keys are
rejected so that a typo in a hand-authored file cannot silently drop
data. Parsing reports every problem it can find at once, each with a
1-based line and column into the input; structural validation runs as
part of parsing, so a file that parses always yields a structurally
sound model. Serialization is canonical (fixed key order, 2-space
indent, LF endings, trailing newline) and byte-deterministic, and
``parse_model(serialize_model(m))`` reproduces ``m`` exactly.

Frequencies are written as two-integer arrays to keep band boundaries
exact; several of them have no finite binary-float form.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass

from .model import (
    CONTROL_METHOD_CLASSES,
    Cause,
    Component,
    ControlPlan,
    DesignModel,
    Effect,
    ELEMENT_ID_RE,
    FailureMode,
    Flow,
    FLOW_KINDS,
    Frequency,
    Function,
    MappingEdge,
    Meta,
    Requirement,
)
from .validation import STRUCTURAL, Path, render_path, validate_model


@dataclass(frozen=True, slots=True)
class ParseError:
    """One problem in a model document, located by line and column."""

    line: int
    column: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message} [{self.code}]"


class ParseFailure(Exception):
    """Raised by parse_model; carries every ParseError found."""

    def __init__(self, errors: list[ParseError]) -> None:
        self.errors = tuple(sorted(errors, key=lambda e: (e.line, e.column, e.code, e.message)))
        summary = "; ".join(str(e) for e in self.errors[:3])
        if len(self.errors) > 3:
            summary += f"; and {len(self.errors) - 3} more"
        super().__init__(f"{len(self.errors)} parse error(s): {summary}")


# ---------------------------------------------------------------------------
# Position-tracking JSON reader. The stdlib decoder does not expose node
# positions, and positioned diagnostics are the whole point of this format.


class _Node:
    __slots__ = ("value", "line", "col", "key_positions")

    def __init__(self, value, line, col, key_positions=None):
        self.value = value
        self.line = line
        self.col = col
        self.key_positions = key_positions


class _SyntaxFailure(Exception):
    def __init__(self, error: ParseError) -> None:
        self.error = error
        super().__init__(str(error))


_ESCAPES = {'"': '"', "\\": "\\", "/": "/", "b": "\b", "f": "\f", "n": "\n", "r": "\r", "t": "\t"}


class _Reader:
    def __init__(self, text: str, errors: list[ParseError]) -> None:
        self.text = text
        self.pos = 0
        self.errors = errors
        starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                starts.append(i + 1)
        self.line_starts = starts

    def location(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = bisect_right(self.line_starts, pos)
        return line, pos - self.line_starts[line - 1] + 1

    def fail(self, message: str, pos: int | None = None) -> None:
        line, col = self.location(pos)
        raise _SyntaxFailure(ParseError(line, col, "Syntax", message))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t\n\r":
            self.pos += 1

    def parse_document(self) -> _Node:
        self.skip_ws()
        node = self.parse_value()
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail("unexpected content after the end of the document")
        return node

    def parse_value(self) -> _Node:
        if self.pos >= len(self.text):
            self.fail("unexpected end of input")
        ch = self.text[self.pos]
        if ch == "{":
            return self.parse_object()
        if ch == "[":
            return self.parse_array()
        if ch == '"':
            return self.parse_string()
        if ch == "-" or ch.isdigit():
            return self.parse_number()
        for literal, value in (("true", True), ("false", False), ("null", None)):
            if self.text.startswith(literal, self.pos):
                line, col = self.location()
                self.pos += len(literal)
                return _Node(value, line, col)
        self.fail(f"unexpected character {ch!r}")

    def parse_object(self) -> _Node:
        line, col = self.location()
        self.pos += 1
        items: dict[str, _Node] = {}
        key_positions: dict[str, tuple[int, int]] = {}
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "}":
            self.pos += 1
            return _Node(items, line, col, key_positions)
        while True:
            self.skip_ws()
            if self.pos >= len(self.text) or self.text[self.pos] != '"':
                self.fail("expected an object key string")
            key_node = self.parse_string()
            key = key_node.value
            self.skip_ws()
            if self.pos >= len(self.text) or self.text[self.pos] != ":":
                self.fail("expected ':' after object key")
            self.pos += 1
            self.skip_ws()
            value = self.parse_value()
            if key in items:
                # Recoverable: keep the first binding, report the repeat.
                self.errors.append(
                    ParseError(key_node.line, key_node.col, "DuplicateKey", f"duplicate key {key!r}")
                )
            else:
                items[key] = value
                key_positions[key] = (key_node.line, key_node.col)
            self.skip_ws()
            if self.pos >= len(self.text):
                self.fail("unterminated object")
            ch = self.text[self.pos]
            if ch == ",":
                self.pos += 1
                continue
            if ch == "}":
                self.pos += 1
                return _Node(items, line, col, key_positions)
            self.fail("expected ',' or '}' in object")

    def parse_array(self) -> _Node:
        line, col = self.location()
        self.pos += 1
        items: list[_Node] = []
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "]":
            self.pos += 1
            return _Node(items, line, col)
        while True:
            self.skip_ws()
            items.append(self.parse_value())
            self.skip_ws()
            if self.pos >= len(self.text):
                self.fail("unterminated array")
            ch = self.text[self.pos]
            if ch == ",":
                self.pos += 1
                continue
            if ch == "]":
                self.pos += 1
                return _Node(items, line, col)
            self.fail("expected ',' or ']' in array")

    def parse_string(self) -> _Node:
        line, col = self.location()
        start = self.pos
        self.pos += 1
        pieces: list[str] = []
        while True:
            if self.pos >= len(self.text):
                self.fail("unterminated string", start)
            ch = self.text[self.pos]
            if ch == '"':
                self.pos += 1
                return _Node("".join(pieces), line, col)
            if ch == "\\":
                pieces.append(self._parse_escape())
                continue
            if ord(ch) < 0x20:
                self.fail("unescaped control character in string")
            pieces.append(ch)
            self.pos += 1

    def _parse_escape(self) -> str:
        self.pos += 1
        if self.pos >= len(self.text):
            self.fail("unterminated escape sequence")
        ch = self.text[self.pos]
        if ch in _ESCAPES:
            self.pos += 1
            return _ESCAPES[ch]
        if ch == "u":
            code = self._parse_hex4()
            if 0xD800 <= code <= 0xDBFF and self.text.startswith("\\u", self.pos):
                save = self.pos
                self.pos += 1
                low = self._parse_hex4()
                if 0xDC00 <= low <= 0xDFFF:
                    return chr(0x10000 + ((code - 0xD800) << 10) + (low - 0xDC00))
                self.pos = save
            return chr(code)
        self.fail(f"invalid escape sequence '\\{ch}'")

    def _parse_hex4(self) -> int:
        self.pos += 1
        digits = self.text[self.pos : self.pos + 4]
        if len(digits) != 4 or any(c not in "0123456789abcdefABCDEF" for c in digits):
            self.fail("invalid unicode escape")
        self.pos += 4
        return int(digits, 16)

    def parse_number(self) -> _Node:
        line, col = self.location()
        start = self.pos
        text = self.text
        if self.pos < len(text) and text[self.pos] == "-":
            self.pos += 1
        if self.pos >= len(text) or not text[self.pos].isdigit():
            self.fail("invalid number", start)
        if text[self.pos] == "0":
            self.pos += 1
        else:
            while self.pos < len(text) and text[self.pos].isdigit():
                self.pos += 1
        is_float = False
        if self.pos < len(text) and text[self.pos] == ".":
            is_float = True
            self.pos += 1
            if self.pos >= len(text) or not text[self.pos].isdigit():
                self.fail("invalid number", start)
            while self.pos < len(text) and text[self.pos].isdigit():
                self.pos += 1
        if self.pos < len(text) and text[self.pos] in "eE":
            is_float = True
            self.pos += 1
            if self.pos < len(text) and text[self.pos] in "+-":
                self.pos += 1
            if self.pos >= len(text) or not text[self.pos].isdigit():
                self.fail("invalid number", start)
            while self.pos < len(text) and text[self.pos].isdigit():
                self.pos += 1
        raw = text[start : self.pos]
        return _Node(float(raw) if is_float else int(raw), line, col)


# ---------------------------------------------------------------------------
# Schema walk: closed schema, every problem collected, every node position
# remembered so validation findings can be mapped back onto the bytes.


class _Walker:
    def __init__(self) -> None:
        self.errors: list[ParseError] = []
        self.positions: dict[str, tuple[int, int]] = {}

    def record(self, path: Path, node: _Node) -> None:
        self.positions[render_path(path)] = (node.line, node.col)

    def fail(self, node: _Node, code: str, message: str, pos: tuple[int, int] | None = None) -> None:
        line, col = pos if pos is not None else (node.line, node.col)
        self.errors.append(ParseError(line, col, code, message))

    def obj(
        self,
        node: _Node,
        path: Path,
        required: tuple[str, ...],
        optional: tuple[str, ...] = (),
    ) -> dict[str, _Node] | None:
        self.record(path, node)
        if not isinstance(node.value, dict):
            self.fail(node, "Type", f"{render_path(path)}: expected an object")
            return None
        allowed = set(required) | set(optional)
        for key in node.value:
            if key not in allowed:
                self.fail(
                    node,
                    "UnknownKey",
                    f"{render_path(path)}: unknown key {key!r}",
                    node.key_positions.get(key),
                )
        ok = True
        for key in required:
            if key not in node.value:
                self.fail(node, "MissingKey", f"{render_path(path)}: missing required key {key!r}")
                ok = False
        if not ok:
            return None
        for key, child in node.value.items():
            if key in allowed:
                self.record(path + (key,), child)
        return node.value

    def array(self, node: _Node, path: Path) -> list[_Node] | None:
        self.record(path, node)
        if not isinstance(node.value, list):
            self.fail(node, "Type", f"{render_path(path)}: expected an array")
            return None
        for index, child in enumerate(node.value):
            self.record(path + (index,), child)
        return node.value

    def string(self, node: _Node, path: Path, nonempty: bool = False) -> str | None:
        self.record(path, node)
        if not isinstance(node.value, str):
            self.fail(node, "Type", f"{render_path(path)}: expected a string")
            return None
        if nonempty and not node.value.strip():
            self.fail(node, "EmptyText", f"{render_path(path)}: must not be empty")
            return None
        return node.value

    def token(self, node: _Node, path: Path) -> str | None:
        value = self.string(node, path)
        if value is None:
            return None
        if not ELEMENT_ID_RE.match(value):
            self.fail(
                node,
                "InvalidId",
                f"{render_path(path)}: ids use letters, digits, '_' and '-' only, got {value!r}",
            )
            return None
        return value

    def integer(self, node: _Node, path: Path) -> int | None:
        self.record(path, node)
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            self.fail(node, "Type", f"{render_path(path)}: expected an integer")
            return None
        return node.value


_TOP_KEYS = ("meta", "requirements", "functions", "components", "rf", "fc", "failure_modes")


def parse_model(text: str) -> DesignModel:
    """Parse a model document; raise ParseFailure listing every problem.

    Structural validation runs on the parsed model and its errors are
    reported as parse errors at the position of the offending value, so a
    successful parse guarantees a structurally valid model.
    """
    errors: list[ParseError] = []
    try:
        root = _Reader(text, errors).parse_document()
    except _SyntaxFailure as exc:
        raise ParseFailure(errors + [exc.error]) from None

    walker = _Walker()
    walker.errors = errors
    model = _walk_model(walker, root)
    if errors or model is None:
        raise ParseFailure(errors)

    report = validate_model(model, STRUCTURAL)
    if report.has_errors:
        raise ParseFailure(
            [
                ParseError(*_position_for(walker.positions, finding.path), finding.code, finding.message)
                for finding in report.errors
            ]
        )
    return model


def _position_for(positions: dict[str, tuple[int, int]], path: Path) -> tuple[int, int]:
    prefix = list(path)
    while prefix:
        hit = positions.get(render_path(tuple(prefix)))
        if hit is not None:
            return hit
        prefix.pop()
    return (1, 1)


def _walk_model(w: _Walker, root: _Node) -> DesignModel | None:
    top = w.obj(root, (), _TOP_KEYS)
    if top is None:
        return None

    meta = _walk_meta(w, top["meta"])
    requirements = _walk_list(w, top["requirements"], ("requirements",), _walk_requirement)
    functions = _walk_list(w, top["functions"], ("functions",), _walk_function)
    components = _walk_list(w, top["components"], ("components",), _walk_component)
    rf = _walk_edges(w, top["rf"], ("rf",))
    fc = _walk_edges(w, top["fc"], ("fc",))
    failure_modes = _walk_list(w, top["failure_modes"], ("failure_modes",), _walk_failure_mode)

    if w.errors or meta is None:
        return None
    return DesignModel(
        meta=meta,
        requirements=tuple(requirements),
        functions=tuple(functions),
        components=tuple(components),
        rf=tuple(rf),
        fc=tuple(fc),
        failure_modes=tuple(failure_modes),
    )


def _walk_list(w: _Walker, node: _Node, path: Path, walk_item) -> list:
    children = w.array(node, path)
    if children is None:
        return []
    items = []
    for index, child in enumerate(children):
        item = walk_item(w, child, path + (index,))
        if item is not None:
            items.append(item)
    return items


def _walk_meta(w: _Walker, node: _Node) -> Meta | None:
    fields = w.obj(node, ("meta",), ("product", "version"))
    if fields is None:
        return None
    product = w.string(fields["product"], ("meta", "product"))
    version = w.string(fields["version"], ("meta", "version"))
    if product is None or version is None:
        return None
    return Meta(product=product, version=version)


def _walk_requirement(w: _Walker, node: _Node, path: Path) -> Requirement | None:
    fields = w.obj(node, path, ("id", "text"))
    if fields is None:
        return None
    rid = w.token(fields["id"], path + ("id",))
    text = w.string(fields["text"], path + ("text",), nonempty=True)
    if rid is None or text is None:
        return None
    return Requirement(id=rid, text=text)


def _walk_flow(w: _Walker, node: _Node, path: Path) -> Flow | None:
    fields = w.obj(node, path, ("description", "kind"))
    if fields is None:
        return None
    description = w.string(fields["description"], path + ("description",))
    kind = w.string(fields["kind"], path + ("kind",))
    if kind is not None and kind not in FLOW_KINDS:
        w.fail(
            fields["kind"],
            "InvalidValue",
            f"{render_path(path + ('kind',))}: flow kind must be one of {', '.join(FLOW_KINDS)}",
        )
        kind = None
    if description is None or kind is None:
        return None
    return Flow(description=description, kind=kind)


def _walk_function(w: _Walker, node: _Node, path: Path) -> Function | None:
    fields = w.obj(node, path, ("id", "verb", "noun"), ("inputs", "outputs"))
    if fields is None:
        return None
    fid = w.token(fields["id"], path + ("id",))
    verb = w.string(fields["verb"], path + ("verb",), nonempty=True)
    noun = w.string(fields["noun"], path + ("noun",), nonempty=True)
    inputs = _walk_list(w, fields["inputs"], path + ("inputs",), _walk_flow) if "inputs" in fields else []
    outputs = _walk_list(w, fields["outputs"], path + ("outputs",), _walk_flow) if "outputs" in fields else []
    if fid is None or verb is None or noun is None:
        return None
    return Function(id=fid, verb=verb, noun=noun, inputs=tuple(inputs), outputs=tuple(outputs))


def _walk_component(w: _Walker, node: _Node, path: Path) -> Component | None:
    fields = w.obj(node, path, ("id", "name"), ("concept",))
    if fields is None:
        return None
    cid = w.token(fields["id"], path + ("id",))
    name = w.string(fields["name"], path + ("name",), nonempty=True)
    concept = w.string(fields["concept"], path + ("concept",)) if "concept" in fields else None
    if cid is None or name is None:
        return None
    return Component(id=cid, name=name, concept=concept)


def _walk_edges(w: _Walker, node: _Node, path: Path) -> list[MappingEdge]:
    children = w.array(node, path)
    if children is None:
        return []
    edges: list[MappingEdge] = []
    for index, child in enumerate(children):
        pair = w.array(child, path + (index,))
        if pair is None:
            continue
        if len(pair) != 2:
            w.fail(
                child,
                "InvalidValue",
                f"{render_path(path + (index,))}: an edge is a [source_id, target_id] pair",
            )
            continue
        source = w.token(pair[0], path + (index, 0))
        target = w.token(pair[1], path + (index, 1))
        if source is None or target is None:
            continue
        edges.append(MappingEdge(source=source, target=target))
    return edges


def _walk_effect(w: _Walker, node: _Node, path: Path) -> Effect | None:
    fields = w.obj(node, path, ("text",), ("severity_class", "severity_rank"))
    if fields is None:
        return None
    text = w.string(fields["text"], path + ("text",), nonempty=True)
    severity_class = (
        w.string(fields["severity_class"], path + ("severity_class",))
        if "severity_class" in fields
        else None
    )
    severity_rank = (
        w.integer(fields["severity_rank"], path + ("severity_rank",))
        if "severity_rank" in fields
        else None
    )
    if text is None:
        return None
    return Effect(text=text, severity_class=severity_class, severity_rank=severity_rank)


def _walk_cause(w: _Walker, node: _Node, path: Path) -> Cause | None:
    fields = w.obj(node, path, ("text",), ("occurrence_rank", "frequency"))
    if fields is None:
        return None
    text = w.string(fields["text"], path + ("text",), nonempty=True)
    occurrence_rank = (
        w.integer(fields["occurrence_rank"], path + ("occurrence_rank",))
        if "occurrence_rank" in fields
        else None
    )
    frequency = None
    if "frequency" in fields:
        frequency = _walk_frequency(w, fields["frequency"], path + ("frequency",))
    if text is None:
        return None
    return Cause(text=text, occurrence_rank=occurrence_rank, frequency=frequency)


def _walk_frequency(w: _Walker, node: _Node, path: Path) -> Frequency | None:
    pair = w.array(node, path)
    if pair is None:
        return None
    if len(pair) != 2:
        w.fail(node, "InvalidValue", f"{render_path(path)}: a frequency is a [failures, opportunities] pair")
        return None
    numerator = w.integer(pair[0], path + (0,))
    denominator = w.integer(pair[1], path + (1,))
    if numerator is None or denominator is None:
        return None
    if numerator < 1 or denominator < 1:
        w.fail(node, "InvalidValue", f"{render_path(path)}: frequency integers must be positive")
        return None
    return Frequency(numerator=numerator, denominator=denominator)


def _walk_control(w: _Walker, node: _Node, path: Path) -> ControlPlan | None:
    fields = w.obj(node, path, ("method_class",), ("method_text", "detection_rank"))
    if fields is None:
        return None
    method_class = w.string(fields["method_class"], path + ("method_class",))
    if method_class is not None and method_class not in CONTROL_METHOD_CLASSES:
        w.fail(
            fields["method_class"],
            "InvalidValue",
            f"{render_path(path + ('method_class',))}: control method class must be one of"
            f" {', '.join(CONTROL_METHOD_CLASSES)}",
        )
        method_class = None
    method_text = (
        w.string(fields["method_text"], path + ("method_text",)) if "method_text" in fields else None
    )
    detection_rank = (
        w.integer(fields["detection_rank"], path + ("detection_rank",))
        if "detection_rank" in fields
        else None
    )
    if method_class is None:
        return None
    return ControlPlan(method_class=method_class, method_text=method_text, detection_rank=detection_rank)


def _walk_failure_mode(w: _Walker, node: _Node, path: Path) -> FailureMode | None:
    fields = w.obj(
        node,
        path,
        ("id", "element", "category", "description"),
        ("effects", "causes", "control"),
    )
    if fields is None:
        return None
    fm_id = w.token(fields["id"], path + ("id",))
    element = w.token(fields["element"], path + ("element",))
    category = w.string(fields["category"], path + ("category",), nonempty=True)
    description = w.string(fields["description"], path + ("description",), nonempty=True)
    effects = _walk_list(w, fields["effects"], path + ("effects",), _walk_effect) if "effects" in fields else []
    causes = _walk_list(w, fields["causes"], path + ("causes",), _walk_cause) if "causes" in fields else []
    control = _walk_control(w, fields["control"], path + ("control",)) if "control" in fields else None
    if fm_id is None or element is None or category is None or description is None:
        return None
    return FailureMode(
        id=fm_id,
        element=element,
        category=category,
        description=description,
        causes=tuple(causes),
        effects=tuple(effects),
        control=control,
    )


# ---------------------------------------------------------------------------
# Canonical serialization.


def model_to_data(model: DesignModel) -> dict:
    """The model as a plain JSON-ready dict in canonical key order.

    Optional fields at their defaults are omitted, so serializing a
    just-parsed model reproduces a minimal document.
    """
    data: dict = {
        "meta": {"product": model.meta.product, "version": model.meta.version},
        "requirements": [{"id": r.id, "text": r.text} for r in model.requirements],
        "functions": [_function_data(f) for f in model.functions],
        "components": [_component_data(c) for c in model.components],
        "rf": [[e.source, e.target] for e in model.rf],
        "fc": [[e.source, e.target] for e in model.fc],
        "failure_modes": [_failure_mode_data(fm) for fm in model.failure_modes],
    }
    return data


def _function_data(function: Function) -> dict:
    data: dict = {"id": function.id, "verb": function.verb, "noun": function.noun}
    if function.inputs:
        data["inputs"] = [{"description": f.description, "kind": f.kind} for f in function.inputs]
    if function.outputs:
        data["outputs"] = [{"description": f.description, "kind": f.kind} for f in function.outputs]
    return data


def _component_data(component: Component) -> dict:
    data: dict = {"id": component.id, "name": component.name}
    if component.concept is not None:
        data["concept"] = component.concept
    return data


def _failure_mode_data(fm: FailureMode) -> dict:
    data: dict = {
        "id": fm.id,
        "element": fm.element,
        "category": fm.category,
        "description": fm.description,
    }
    if fm.effects:
        data["effects"] = [_effect_data(e) for e in fm.effects]
    if fm.causes:
        data["causes"] = [_cause_data(c) for c in fm.causes]
    if fm.control is not None:
        control: dict = {"method_class": fm.control.method_class}
        if fm.control.method_text is not None:
            control["method_text"] = fm.control.method_text
        if fm.control.detection_rank is not None:
            control["detection_rank"] = fm.control.detection_rank
        data["control"] = control
    return data


def _effect_data(effect: Effect) -> dict:
    data: dict = {"text": effect.text}
    if effect.severity_class is not None:
        data["severity_class"] = effect.severity_class
    if effect.severity_rank is not None:
        data["severity_rank"] = effect.severity_rank
    return data


def _cause_data(cause: Cause) -> dict:
    data: dict = {"text": cause.text}
    if cause.occurrence_rank is not None:
        data["occurrence_rank"] = cause.occurrence_rank
    if cause.frequency is not None:
        data["frequency"] = [cause.frequency.numerator, cause.frequency.denominator]
    return data


def serialize_model(model: DesignModel) -> str:
    """Render a model in canonical form; identical models give identical bytes."""
    return json.dumps(model_to_data(model), indent=2, ensure_ascii=False) + "\n"
