"""Scenario files: a ring, named derivations, a kernel generator and commands.

Line-oriented format; ``#`` starts a comment::

    name = makar-limanov
    ring { vars = [x, y, z, t]; relation = "x^2*y + x + z^2 + t^3"; ufd = true; units_trivial = true }
    derivation D1 = "2*z*d/dy - x^2*d/dz"
    derivation D2 = "3*t^2*d/dy - x^2*d/dt"
    kernel = "x"
    preslices = ["z", "t"]          # optional, otherwise searched
    seed_bound = 4                  # optional
    cap = 64                        # optional
    run fibers
    run certify-dependence alpha=0 bound=2
    run coordinatize queries="y" expect=NonConstantQ

The ``ring { ... }`` block may span several lines.  ``run`` lines are split
with shell quoting rules into a command name and ``key=value`` pairs.
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field
from importlib import resources

from ..derivation import DEFAULT_CAP, DerivationSystem
from ..errors import ParseError
from ..ring import PresentationError, RingPresentation
from ..slices import DEFAULT_SEED_BOUND
from .parser import parse_derivation, parse_element, parse_poly

COMMANDS = (
    "validate", "exp", "log", "preslice", "minimize-q", "fibers", "certify-dependence",
    "crosscheck", "improve-basis", "coordinatize", "fiber-chart", "probe-question",
)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass
class Command:
    name: str
    params: dict
    line: int | None = None


@dataclass
class Scenario:
    name: str
    ring: RingPresentation
    derivations: list  # (name, Derivation) in declaration order
    kernel: object = None
    preslices: list | None = None
    commands: list = field(default_factory=list)
    seed_bound: int = DEFAULT_SEED_BOUND
    cap: int = DEFAULT_CAP
    experimental: bool = False

    def derivation(self, key):
        """Look up by declared name or by 1-based position."""
        for name, D in self.derivations:
            if name == key:
                return D
        if str(key).isdigit() and 1 <= int(key) <= len(self.derivations):
            return self.derivations[int(key) - 1][1]
        raise KeyError(key)


def _split_fields(body, lineno):
    """Split ``a = 1; b = "x;y"`` on semicolons outside quotes and brackets."""
    parts, cur, quote, depth = [], [], False, 0
    for ch in body:
        if ch == '"':
            quote = not quote
        elif not quote and ch == "[":
            depth += 1
        elif not quote and ch == "]":
            depth -= 1
        if ch == ";" and not quote and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if quote:
        raise ParseError(f"line {lineno}: unterminated string")
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _unquote(value, lineno):
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] == '"':
        return value[1:-1]
    raise ParseError(f"line {lineno}: expected a quoted string, got {value!r}")


def _list(value, lineno):
    value = value.strip()
    if not (value.startswith("[") and value.endswith("]")):
        raise ParseError(f"line {lineno}: expected a [list], got {value!r}")
    inner = value[1:-1].strip()
    if not inner:
        return []
    return [v.strip() for v in re.findall(r'"[^"]*"|[^,]+', inner) if v.strip()]


def _bool(value, lineno):
    v = value.strip().lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    raise ParseError(f"line {lineno}: expected true or false, got {value!r}")


def _int(value, lineno):
    try:
        return int(value.strip())
    except ValueError:
        raise ParseError(f"line {lineno}: expected an integer, got {value!r}") from None


def _strip_comment(line):
    out, quote = [], False
    for ch in line:
        if ch == '"':
            quote = not quote
        if ch == "#" and not quote:
            break
        out.append(ch)
    return "".join(out).strip()


def _parse_ring(body, lineno):
    variables = None
    relations = []
    ufd, units = True, True
    for item in _split_fields(body, lineno):
        if "=" not in item:
            raise ParseError(f"line {lineno}: expected key = value in ring block, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        if key == "vars":
            variables = _list(value, lineno)
        elif key == "relation":
            relations.append(_unquote(value, lineno))
        elif key == "relations":
            relations.extend(_unquote(v, lineno) for v in _list(value, lineno))
        elif key == "ufd":
            ufd = _bool(value, lineno)
        elif key == "units_trivial":
            units = _bool(value, lineno)
        else:
            raise ParseError(f"line {lineno}: unknown ring field {key!r}")
    if variables is None:
        raise ParseError(f"line {lineno}: ring block needs vars = [...]")
    for v in variables:
        if not _NAME.match(v):
            raise ParseError(f"line {lineno}: bad variable name {v!r}")
    if len(set(variables)) != len(variables):
        raise ParseError(f"line {lineno}: variable names must be unique")
    if len(relations) > 1:
        raise ParseError(f"line {lineno}: at most one relation is supported, got {len(relations)}")
    rel = parse_poly(relations[0], variables) if relations else None
    try:
        return RingPresentation(variables, rel, ufd=ufd, units_trivial=units)
    except PresentationError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None


def parse_command(text, lineno=None):
    try:
        words = shlex.split(text)
    except ValueError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None
    if not words:
        raise ParseError(f"line {lineno}: empty run line")
    name, params = words[0], {}
    if name not in COMMANDS:
        raise ParseError(f"line {lineno}: unknown command {name!r}")
    for w in words[1:]:
        if "=" not in w:
            raise ParseError(f"line {lineno}: expected key=value, got {w!r}")
        k, v = w.split("=", 1)
        params[k] = v
    return Command(name, params, lineno)


def load_scenario(text, name=None):
    """Parse scenario text.  Derivations are checked for well-definedness here."""
    lines = text.splitlines()
    ring = None
    decls = []
    kernel_src = None
    preslice_src = None
    commands = []
    settings = {}
    i = 0
    while i < len(lines):
        lineno = i + 1
        line = _strip_comment(lines[i])
        i += 1
        if not line:
            continue
        if line.startswith("ring"):
            if ring is not None:
                raise ParseError(f"line {lineno}: duplicate ring block")
            block = line
            while "}" not in block:
                if i >= len(lines):
                    raise ParseError(f"line {lineno}: unterminated ring block")
                block += " " + _strip_comment(lines[i])
                i += 1
            m = re.fullmatch(r"ring\s*\{(.*)\}", block.strip(), re.S)
            if not m:
                raise ParseError(f"line {lineno}: malformed ring block")
            ring = _parse_ring(m.group(1), lineno)
            continue
        if line.startswith("run ") or line == "run":
            commands.append(parse_command(line[3:], lineno))
            continue
        m = re.fullmatch(r"derivation\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)", line)
        if m:
            decls.append((m.group(1), _unquote(m.group(2), lineno), lineno))
            continue
        m = re.fullmatch(r"([a-z_]+)\s*=\s*(.+)", line)
        if not m:
            raise ParseError(f"line {lineno}: cannot parse {line!r}")
        key, value = m.groups()
        if key in settings or (key == "kernel" and kernel_src) or (key == "preslices" and preslice_src):
            raise ParseError(f"line {lineno}: duplicate setting {key!r}")
        if key == "name":
            settings["name"] = value.strip().strip('"')
        elif key == "kernel":
            kernel_src = (_unquote(value, lineno), lineno)
        elif key == "preslices":
            preslice_src = ([_unquote(v, lineno) for v in _list(value, lineno)], lineno)
        elif key in ("seed_bound", "cap"):
            settings[key] = _int(value, lineno)
        elif key == "experimental":
            settings[key] = _bool(value, lineno)
        else:
            raise ParseError(f"line {lineno}: unknown setting {key!r}")
    if ring is None:
        raise ParseError("scenario has no ring block")
    seen = set()
    derivations = []
    for dname, src, lineno in decls:
        if dname in seen:
            raise ParseError(f"line {lineno}: duplicate derivation name {dname!r}")
        seen.add(dname)
        derivations.append((dname, _parse_at(parse_derivation, src, ring, lineno)))
    kernel = _parse_at(parse_element, kernel_src[0], ring, kernel_src[1]) if kernel_src else None
    preslices = None
    if preslice_src:
        preslices = [_parse_at(parse_element, s, ring, preslice_src[1]) for s in preslice_src[0]]
    ring.name = settings.get("name", name)
    return Scenario(
        name=ring.name or "scenario",
        ring=ring,
        derivations=derivations,
        kernel=kernel,
        preslices=preslices,
        commands=commands,
        seed_bound=settings.get("seed_bound", DEFAULT_SEED_BOUND),
        cap=settings.get("cap", DEFAULT_CAP),
        experimental=settings.get("experimental", False),
    )


def _parse_at(fn, src, ring, lineno):
    try:
        return fn(src, ring)
    except ParseError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None


def bundled_names():
    root = resources.files("lndkit") / "scenarios"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".scn"))


def bundled_text(name):
    path = resources.files("lndkit") / "scenarios" / f"{name}.scn"
    if not path.is_file():
        raise FileNotFoundError(f"no bundled scenario named {name!r}")
    return path.read_text()


def load_bundled(name):
    return load_scenario(bundled_text(name), name)


def load_path_or_bundled(ref):
    """A filesystem path, or the name of a bundled scenario."""
    from pathlib import Path

    p = Path(ref)
    if p.is_file():
        return load_scenario(p.read_text(), p.stem)
    if ref in bundled_names():
        return load_bundled(ref)
    raise FileNotFoundError(f"{ref!r} is neither a file nor a bundled scenario ({', '.join(bundled_names())})")


def build_system(sc, cap=None):
    """The validated system of a scenario (raises on rejection)."""
    from ..errors import ValidationError

    if not sc.derivations:
        raise ValidationError("scenario declares no derivations")
    if sc.kernel is None:
        raise ValidationError("scenario declares no kernel generator (kernel = \"...\")")
    return DerivationSystem.build([D for _, D in sc.derivations], sc.kernel, cap=cap or sc.cap)
