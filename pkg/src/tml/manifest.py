"""Manifest files describing fields, towers, modules, subgroups, points
and base polynomials, plus the expression grammar used inside them.

Expression grammar (no unary minus; subtract from 0 instead):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' uint)?
    atom   := name | uint | '(' expr ')'

The INI-like format has sections [field], [tower], [module NAME],
[subgroup NAME], [point NAME], [poly NAME] with key = value lines and
'#' comments.  A document whose first non-space character is '{' is read
as the JSON equivalent instead; both share the same value syntax.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ParseError
from .fields import FiniteField, FieldTower, Poly
from .linalg import Mat
from .subgroups import KernelSubgroup
from .tmodule import TModule

_OPS = set("+-*/^")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text, line=None, col_offset=0):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        col = col_offset + i + 1
        if ch.isspace():
            i += 1
        elif ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], col))
            i = j
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", text[i:j], col))
            i = j
        elif ch in _OPS:
            toks.append(_Tok("op", ch, col))
            i += 1
        elif ch == "(":
            toks.append(_Tok("lparen", ch, col))
            i += 1
        elif ch == ")":
            toks.append(_Tok("rparen", ch, col))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("end", "", col_offset + n + 1))
    return toks


def eval_expr(text, env, const, line=None, col_offset=0):
    """Evaluate an expression against named values; const maps an
    unsigned integer literal to a value."""
    toks = _tokenize(text, line, col_offset)
    pos = 0

    def peek():
        return toks[pos]

    def take():
        nonlocal pos
        t = toks[pos]
        pos += 1
        return t

    def parse_atom():
        t = take()
        if t.kind == "name":
            if t.text not in env:
                raise ParseError(f"unknown name {t.text!r}", line, t.col)
            return env[t.text]
        if t.kind == "int":
            return const(int(t.text))
        if t.kind == "lparen":
            v = parse_expr()
            closing = take()
            if closing.kind != "rparen":
                raise ParseError("expected ')'", line, closing.col)
            return v
        raise ParseError(f"expected a value, found {t.text or 'end'!r}",
                         line, t.col)

    def parse_factor():
        v = parse_atom()
        t = peek()
        if t.kind == "op" and t.text == "^":
            caret = take()
            e = peek()
            if e.kind != "int":
                raise ParseError("'^' requires an unsigned integer exponent",
                                 line, caret.col)
            take()
            v = v ** int(e.text)
        return v

    def parse_term():
        v = parse_factor()
        while peek().kind == "op" and peek().text in ("*", "/"):
            op = take()
            w = parse_factor()
            v = v * w if op.text == "*" else v / w
        return v

    def parse_expr():
        v = parse_term()
        while peek().kind == "op" and peek().text in ("+", "-"):
            op = take()
            w = parse_term()
            v = v + w if op.text == "+" else v - w
        return v

    value = parse_expr()
    t = peek()
    if t.kind != "end":
        raise ParseError(f"unexpected trailing {t.text!r}", line, t.col)
    return value


@dataclass(frozen=True)
class _Val:
    """A raw value with its source position (positions absent for JSON)."""
    text: str
    line: object = None
    col: int = 0


@dataclass
class Manifest:
    field: FiniteField
    tower: FieldTower
    modules: dict
    subgroups: dict
    points: dict
    point_modules: dict
    polys: dict


_SECTION_KINDS = ("field", "tower", "module", "subgroup", "point", "poly")


def _ini_sections(text):
    """section list [(kind, name, {key: [values]}, line)] in file order."""
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", lineno,
                                 len(line))
            inner = stripped[1:-1].strip()
            parts = inner.split(None, 1)
            kind = parts[0] if parts else ""
            if kind not in _SECTION_KINDS:
                raise ParseError(f"unknown section kind {kind!r}", lineno,
                                 line.index("[") + 2)
            name = parts[1].strip() if len(parts) > 1 else None
            if kind in ("field", "tower"):
                if name is not None:
                    raise ParseError(f"[{kind}] takes no name", lineno, 1)
            elif name is None:
                raise ParseError(f"[{kind}] needs a name", lineno, 1)
            current = (kind, name, {}, lineno)
            sections.append(current)
            continue
        if current is None:
            raise ParseError("content before any section header", lineno, 1)
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, 1)
        key, _, value = line.partition("=")
        col = len(key) + 2
        key = key.strip()
        if not key:
            raise ParseError("empty key", lineno, 1)
        current[2].setdefault(key, []).append(_Val(value.strip(), lineno,
                                                   col + _lead(value)))
    return sections


def _lead(s):
    return len(s) - len(s.lstrip())


def _split_commas(val: _Val):
    """Split a value on top-level commas, keeping positions."""
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(val.text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ']'", val.line, val.col + i)
        elif ch == "," and depth == 0:
            parts.append((val.text[start:i], start))
            start = i + 1
    if depth != 0:
        raise ParseError("unbalanced '['", val.line, val.col + len(val.text))
    parts.append((val.text[start:], start))
    return [_Val(p.strip(), val.line, val.col + off + _lead(p))
            for p, off in parts]


def _split_brackets(val: _Val):
    """Split 'row' values: bracket groups separated by commas."""
    groups = []
    i = 0
    text = val.text
    n = len(text)
    while i < n:
        while i < n and text[i] in " \t":
            i += 1
        if i >= n:
            break
        if text[i] != "[":
            raise ParseError("expected '['", val.line, val.col + i)
        j = text.find("]", i)
        if j < 0:
            raise ParseError("unbalanced '['", val.line, val.col + i)
        inner = text[i + 1:j]
        inner_val = _Val(inner.strip(), val.line,
                         val.col + i + 1 + _lead(inner))
        if inner_val.text:
            groups.append(_split_commas(inner_val))
        else:
            groups.append([])
        i = j + 1
        while i < n and text[i] in " \t":
            i += 1
        if i < n:
            if text[i] != ",":
                raise ParseError("expected ',' between groups", val.line,
                                 val.col + i)
            i += 1
    return groups


def _as_int(val: _Val, what):
    try:
        return int(val.text)
    except ValueError:
        raise ParseError(f"{what} must be an integer", val.line,
                         val.col) from None


def _json_sections(data):
    """Normalize the JSON document shape onto the INI section list."""
    if not isinstance(data, dict):
        raise ParseError("top-level JSON value must be an object")
    sections = []

    def val(x, what):
        if isinstance(x, (int, float)):
            x = repr(x)
        if not isinstance(x, str):
            raise ParseError(f"{what} must be a string")
        return _Val(x)

    field = data.get("field")
    if field is not None:
        body = {k: [val(v, f"field.{k}")] for k, v in field.items()}
        sections.append(("field", None, body, None))
    for name, coeffs in data.get("tower", []):
        sections.append(("tower", None, {str(name): [val(coeffs, "tower")]},
                         None))
    for name, entry in data.get("modules", {}).items():
        body = {k: [val(v, f"module {name}.{k}")] for k, v in entry.items()}
        sections.append(("module", name, body, None))
    for name, entry in data.get("subgroups", {}).items():
        body = {}
        for k, v in entry.items():
            if k == "rows":
                body["row"] = [val(r, f"subgroup {name} row") for r in v]
            else:
                body[k] = [val(v, f"subgroup {name}.{k}")]
        sections.append(("subgroup", name, body, None))
    for name, entry in data.get("points", {}).items():
        body = {k: [val(v, f"point {name}.{k}")] for k, v in entry.items()}
        sections.append(("point", name, body, None))
    for name, expr in data.get("polys", {}).items():
        sections.append(("poly", name, {"expr": [val(expr, "poly")]}, None))
    known = {"field", "tower", "modules", "subgroups", "points", "polys"}
    for k in data:
        if k not in known:
            raise ParseError(f"unknown top-level JSON key {k!r}")
    return sections


def _single(body, key, kind, line, required=True, default=None):
    vals = body.get(key)
    if not vals:
        if required:
            raise ParseError(f"[{kind}] is missing {key!r}", line, 1)
        return default
    if len(vals) > 1:
        raise ParseError(f"duplicate key {key!r}", vals[1].line, vals[1].col)
    return vals[0]


def _check_keys(body, allowed, kind, line):
    for k in body:
        if k not in allowed:
            raise ParseError(f"unknown key {k!r} in [{kind}]",
                             body[k][0].line, 1)


def build_manifest(sections) -> Manifest:
    field = None
    for kind, _name, body, line in sections:
        if kind == "field":
            if field is not None:
                raise ParseError("duplicate [field] section", line, 1)
            _check_keys(body, {"p", "e", "modulus", "gen"}, "field", line)
            p = _as_int(_single(body, "p", "field", line), "p")
            e_val = _single(body, "e", "field", line, required=False)
            e = _as_int(e_val, "e") if e_val else 1
            modulus = None
            mod_val = _single(body, "modulus", "field", line, required=False)
            if mod_val:
                modulus = tuple(_as_int(v, "modulus coefficient")
                                for v in _split_commas(mod_val))
            gen_val = _single(body, "gen", "field", line, required=False)
            try:
                field = FiniteField(p, e, modulus=modulus,
                                    gen_name=gen_val.text if gen_val else None)
            except Exception as exc:
                raise ParseError(str(exc), line, 1) from None
    if field is None:
        raise ParseError("no [field] section")

    tower = FieldTower(field)

    def env_and_const(tw):
        env = {"T": tw.T()}
        for anc in tw.ancestors():
            if anc.parent is not None:
                env[anc.name] = tw.embed(anc.gen())
        if field.e > 1:
            env[field.gen_name] = tw.const(field.p)
        return env, (lambda n: tw.const(field.elem(n)))

    for kind, _name, body, line in sections:
        if kind == "tower":
            for name, vals in body.items():
                for val in vals:
                    env, const = env_and_const(tower)
                    coeffs = [eval_expr(v.text, env, const, v.line, v.col - 1)
                              for v in _split_commas(val)]
                    try:
                        tower = tower.extend(name, coeffs)
                    except Exception as exc:
                        raise ParseError(str(exc), val.line, val.col) from None

    env, const = env_and_const(tower)

    def eval_list(val):
        return [eval_expr(v.text, env, const, v.line, v.col - 1)
                for v in _split_commas(val)]

    modules = {}
    for kind, name, body, line in sections:
        if kind != "module":
            continue
        if name in modules:
            raise ParseError(f"duplicate module {name!r}", line, 1)
        m = _as_int(_single(body, "m", "module", line), "m")
        mats = {}
        for key, vals in body.items():
            if key == "m":
                continue
            if not (key.startswith("a") and key[1:].isdigit()):
                raise ParseError(f"unknown key {key!r} in [module]",
                                 vals[0].line, 1)
            idx = int(key[1:])
            val = _single(body, key, "module", line)
            entries = eval_list(val)
            if len(entries) != m * m:
                raise ParseError(f"{key} needs {m * m} entries, got "
                                 f"{len(entries)}", val.line, val.col)
            mats[idx] = Mat(tuple(tuple(entries[r * m + c] for c in range(m))
                                  for r in range(m)))
        if 0 not in mats:
            raise ParseError(f"[module {name}] is missing a0", line, 1)
        top = max(mats)
        zero = Mat.zeros(tower, m, m)
        seq = [mats.get(i, zero) for i in range(top + 1)]
        try:
            modules[name] = TModule(tower, seq)
        except Exception as exc:
            raise ParseError(str(exc), line, 1) from None

    subgroups = {}
    for kind, name, body, line in sections:
        if kind != "subgroup":
            continue
        if name in subgroups:
            raise ParseError(f"duplicate subgroup {name!r}", line, 1)
        _check_keys(body, {"module", "row"}, "subgroup", line)
        mod_val = _single(body, "module", "subgroup", line)
        if mod_val.text not in modules:
            raise ParseError(f"unknown module {mod_val.text!r}",
                             mod_val.line, mod_val.col)
        module = modules[mod_val.text]
        entries = []
        for val in body.get("row", []):
            groups = _split_brackets(val)
            if len(groups) != module.dimension:
                raise ParseError(f"row needs {module.dimension} bracket "
                                 f"groups, got {len(groups)}",
                                 val.line, val.col)
            entries.append([[eval_expr(v.text, env, const, v.line, v.col - 1)
                             for v in group] for group in groups])
        try:
            subgroups[name] = KernelSubgroup.from_entries(module, entries)
        except Exception as exc:
            raise ParseError(str(exc), line, 1) from None

    points = {}
    point_modules = {}
    for kind, name, body, line in sections:
        if kind != "point":
            continue
        if name in points:
            raise ParseError(f"duplicate point {name!r}", line, 1)
        _check_keys(body, {"module", "coords"}, "point", line)
        coords = eval_list(_single(body, "coords", "point", line))
        mod_val = _single(body, "module", "point", line, required=False)
        mod_name = None
        if mod_val:
            if mod_val.text not in modules:
                raise ParseError(f"unknown module {mod_val.text!r}",
                                 mod_val.line, mod_val.col)
            mod_name = mod_val.text
            if len(coords) != modules[mod_name].dimension:
                raise ParseError("point has wrong number of coordinates",
                                 line, 1)
        points[name] = tuple(coords)
        point_modules[name] = mod_name

    base = tower.base()
    polys = {}
    base_env = {"T": base.T()}
    if field.e > 1:
        base_env[field.gen_name] = base.const(field.p)
    base_const = lambda n: base.const(field.elem(n))
    for kind, name, body, line in sections:
        if kind != "poly":
            continue
        if name in polys:
            raise ParseError(f"duplicate poly {name!r}", line, 1)
        _check_keys(body, {"expr"}, "poly", line)
        val = _single(body, "expr", "poly", line)
        elem = eval_expr(val.text, base_env, base_const, val.line, val.col - 1)
        rf = elem.data
        if rf.den.degree != 0 or not rf.den.is_monic():
            raise ParseError("base polynomial may not have a denominator",
                             val.line, val.col)
        polys[name] = rf.num
    return Manifest(field, tower, modules, subgroups, points, point_modules,
                    polys)


def _module_name(manifest: Manifest, module: TModule) -> str:
    for name, mod in manifest.modules.items():
        if mod is module:
            return name
    raise ValueError("module does not belong to this manifest")


def manifest_to_text(manifest: Manifest) -> str:
    """Normalized section rendering; parsing it back reproduces the
    manifest, and rendering is a fixed point on already-normal text."""
    f = manifest.field
    out = ["[field]", f"p = {f.p}"]
    if f.e > 1:
        out.append(f"e = {f.e}")
        out.append("modulus = " + ", ".join(str(c) for c in f.modulus))
        out.append(f"gen = {f.gen_name}")
    steps = [t for t in manifest.tower.ancestors() if t.parent is not None]
    if steps:
        out.append("")
        out.append("[tower]")
        for t in steps:
            out.append(f"{t.name} = "
                       + ", ".join(c.to_expr() for c in t.modulus))
    for name, mod in manifest.modules.items():
        out.append("")
        out.append(f"[module {name}]")
        out.append(f"m = {mod.dimension}")
        m = mod.dimension
        for i, mat in enumerate(mod.matrices):
            if i > 0 and mat.is_zero():
                continue
            entries = [mat[r, c].to_expr() for r in range(m)
                       for c in range(m)]
            out.append(f"a{i} = " + ", ".join(entries))
    for name, sub in manifest.subgroups.items():
        out.append("")
        out.append(f"[subgroup {name}]")
        out.append(f"module = {_module_name(manifest, sub.module)}")
        p = sub.presentation
        for r in range(p.rows):
            groups = []
            for c in range(p.cols):
                coeffs = [p.coeff(i)[r, c] for i in range(p.degree + 1)]
                while len(coeffs) > 1 and coeffs[-1].is_zero():
                    coeffs.pop()
                groups.append("[" + ", ".join(x.to_expr() for x in coeffs)
                              + "]")
            out.append("row = " + ", ".join(groups))
    for name, coords in manifest.points.items():
        out.append("")
        out.append(f"[point {name}]")
        mod_name = manifest.point_modules.get(name)
        if mod_name:
            out.append(f"module = {mod_name}")
        out.append("coords = " + ", ".join(x.to_expr() for x in coords))
    for name, poly in manifest.polys.items():
        out.append("")
        out.append(f"[poly {name}]")
        out.append(f"expr = {poly.to_expr()}")
    return "\n".join(out) + "\n"


def poly_from_text(field: FiniteField, text: str) -> Poly:
    """Parse a base polynomial expression with the same grammar the
    [poly] sections use; denominators are rejected."""
    base = FieldTower(field)
    env = {"T": base.T()}
    if field.e > 1:
        env[field.gen_name] = base.const(field.p)
    elem = eval_expr(text, env, lambda n: base.const(field.elem(n)))
    rf = elem.data
    if rf.den.degree != 0 or not rf.den.is_monic():
        raise ParseError("base polynomial may not have a denominator",
                         None, 1)
    return rf.num


def parse_manifest(text: str) -> Manifest:
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON: {exc.msg}", exc.lineno,
                             exc.colno) from None
        return build_manifest(_json_sections(data))
    return build_manifest(_ini_sections(text))


def load_manifest(path) -> Manifest:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_manifest(fh.read())
