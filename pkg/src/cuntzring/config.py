"""Workbench configuration: a sectioned key = value text format.

    [rings]        name = ring expression (zmod(6), upper(2,zmod(2)), ...)
    [poms]         name = PoM expression (nat, chain(3) x maxchain(2), pom{...})
    [systems]      name = endo(POM, [f(0), f(1), ...])
    [bounds]       matrix_size, oracle_size, budget, samples, block_samples
    [run]          suites = id, id, ...   seed = N   threads = N
    [output]       json = PATH   dot = DIR   timings = yes|no

Lines starting with '#' or ';' are comments.  Names must be unique across
rings, poms and systems.  Earlier rings may be referred to by name.
"""
from __future__ import annotations

import configparser
import hashlib
import json
import re
from dataclasses import dataclass, field

from .errors import ParseError, SpecParseError, UnknownConstructor, UnknownSuite, WorkbenchError

SUITES = ("ideal-classes", "thm-retract", "lemma-lift", "block-lift", "ring-classes", "chain-ops",
          "qp-chains", "s-closure", "dense-interp", "intervals", "cu-limits", "sq-pairs")

DEFAULT_BOUNDS = {"matrix_size": 2, "oracle_size": 2, "budget": 10**8, "samples": 32, "block_samples": 30}
SECTIONS = ("rings", "poms", "systems", "bounds", "run", "output")
_ENDO = re.compile(r"^endo\(\s*([A-Za-z_]\w*)\s*,\s*\[([\d\s,]*)\]\s*\)$")


@dataclass
class WorkbenchConfig:
    rings: dict = field(default_factory=dict)        # name -> expression
    poms: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)      # name -> (pom name, map list)
    bounds: dict = field(default_factory=lambda: dict(DEFAULT_BOUNDS))
    suites: list = field(default_factory=list)
    seed: int = 0
    threads: int = 1
    output: dict = field(default_factory=dict)
    built_rings: dict = field(default_factory=dict, repr=False)
    built_poms: dict = field(default_factory=dict, repr=False)

    def canonical(self) -> dict:
        return {"rings": self.rings, "poms": self.poms,
                "systems": {k: [p, list(f)] for k, (p, f) in self.systems.items()},
                "bounds": self.bounds, "suites": self.suites, "seed": self.seed}

    def digest(self) -> str:
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _positions(text: str) -> dict:
    """(section, key) -> (line, column of the value), both 1-based."""
    out, section = {}, None
    for no, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip()
        elif "=" in line and s and s[0] not in "#;":
            key, _, val = line.partition("=")
            col = len(key) + 2 + (len(val) - len(val.lstrip()))
            out[(section, key.strip())] = (no, col)
    return out


def _int(value: str, where, minimum: int = 1) -> int:
    try:
        v = int(value.replace("_", ""))
    except ValueError:
        raise ParseError(f"expected an integer, got {value!r}", *where) from None
    if v < minimum:
        raise ParseError(f"value must be at least {minimum}", *where)
    return v


def parse_config(text: str, build: bool = True) -> WorkbenchConfig:
    """Parse and validate; with build=True every ring and PoM is constructed."""
    cp = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#", ";"),
                                   inline_comment_prefixes=None, interpolation=None, strict=True)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.DuplicateOptionError as e:
        raise ParseError(f"duplicate name {e.option!r} in [{e.section}]", e.lineno or 0, 1) from None
    except configparser.DuplicateSectionError as e:
        raise ParseError(f"duplicate section [{e.section}]", e.lineno or 0, 1) from None
    except configparser.MissingSectionHeaderError as e:
        raise ParseError("text before the first [section]", e.lineno, 1) from None
    except configparser.ParsingError as e:
        line = e.errors[0][0] if e.errors else 0
        raise ParseError("expected 'name = value'", line, 1) from None
    pos = _positions(text)
    where = lambda sec, key: pos.get((sec, key), (0, 0))
    for sec in cp.sections():
        if sec not in SECTIONS:
            line = next((n for n, l in enumerate(text.splitlines(), 1) if l.strip() == f"[{sec}]"), 0)
            raise ParseError(f"unknown section [{sec}]", line, 2)
    cfg = WorkbenchConfig()
    seen = {}
    for sec in ("rings", "poms", "systems"):
        if not cp.has_section(sec):
            continue
        for key, val in cp.items(sec):
            if not re.fullmatch(r"[A-Za-z_][\w.+-]*", key):
                raise ParseError(f"bad name {key!r}", where(sec, key)[0], 1)
            if key in seen:
                raise ParseError(f"name {key!r} already used in [{seen[key]}]", where(sec, key)[0], 1)
            seen[key] = sec
            val = " ".join(val.split())
            if sec == "systems":
                m = _ENDO.match(val)
                if not m:
                    raise ParseError("expected endo(POM, [map])", *where(sec, key))
                f = [int(v) for v in m.group(2).replace(",", " ").split()]
                cfg.systems[key] = (m.group(1), f)
            else:
                getattr(cfg, sec)[key] = val
    if cp.has_section("bounds"):
        for key, val in cp.items("bounds"):
            if key not in DEFAULT_BOUNDS:
                raise ParseError(f"unknown bound {key!r}", where("bounds", key)[0], 1)
            cfg.bounds[key] = _int(val, where("bounds", key))
    if cp.has_section("run"):
        for key, val in cp.items("run"):
            if key == "suites":
                ids = [s.strip() for s in val.replace("\n", ",").split(",") if s.strip()]
                for s in ids:
                    if s not in SUITES:
                        raise UnknownSuite(f"unknown suite {s!r}; known: {', '.join(SUITES)}")
                cfg.suites = ids
            elif key == "seed":
                cfg.seed = _int(val, where("run", key), 0)
            elif key == "threads":
                cfg.threads = _int(val, where("run", key))
            else:
                raise ParseError(f"unknown key {key!r} in [run]", where("run", key)[0], 1)
    if cp.has_section("output"):
        for key, val in cp.items("output"):
            if key not in ("json", "dot", "timings"):
                raise ParseError(f"unknown key {key!r} in [output]", where("output", key)[0], 1)
            cfg.output[key] = val.strip()
    if not cfg.suites:
        cfg.suites = list(SUITES)
    if build:
        build_objects(cfg, pos)
    return cfg


def build_objects(cfg: WorkbenchConfig, pos: dict | None = None):
    """Construct rings and PoMs; expression errors carry line and column."""
    from .cu import FinitePoM, NAT, parse_pom
    from .ringspec import build_ring
    pos = pos or {}
    for name, expr in cfg.rings.items():
        line, col = pos.get(("rings", name), (0, 0))
        try:
            cfg.built_rings[name] = build_ring(expr, env=dict(cfg.built_rings) or None)
        except UnknownConstructor:
            raise
        except SpecParseError as e:
            m = re.search(r"at offset (\d+)", str(e))
            raise ParseError(str(e), line, col + (int(m.group(1)) if m else 0)) from None
        except WorkbenchError as e:
            raise ParseError(f"ring {name!r}: {e}", line, col) from None
    for name, expr in cfg.poms.items():
        line, col = pos.get(("poms", name), (0, 0))
        try:
            cfg.built_poms[name] = parse_pom(expr, dict(cfg.built_poms))
        except WorkbenchError as e:
            raise ParseError(f"pom {name!r}: {e}", line, col) from None
    for name, (pom, f) in cfg.systems.items():
        line, col = pos.get(("systems", name), (0, 0))
        M = cfg.built_poms.get(pom)
        if M is None or len(M.factors) != 1 or M.factors[0] is NAT or not isinstance(M.factors[0], FinitePoM):
            raise ParseError(f"system {name!r} needs a single finite PoM, got {pom!r}", line, col)
        if len(f) != M.factors[0].size or not all(0 <= v < M.factors[0].size for v in f):
            raise ParseError(f"system {name!r}: map must list one image per element", line, col)


def load_config(path: str, build: bool = True) -> WorkbenchConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), build)
