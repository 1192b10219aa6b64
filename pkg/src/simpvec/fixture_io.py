"""Text fixture format: JSON documents describing simplicial vector spaces.

A document is either a generator form::

    {"format": "simpvec-fixture", "version": 1,
     "generator": {"kind": "pair", "d": 1}}

or an explicit truncation::

    {"format": "simpvec-fixture", "version": 1, "name": "X",
     "truncation": 1, "extension": "coskeletal", "dims": [1, 2],
     "faces": {"1": [[["1", "0"]], [["0", "1"]]]},
     "degeneracies": {"0": [[["1"], ["1"]]]}}

Matrix entries are rationals written as ``"p/q"`` strings (integers may be
plain). ``faces[l]`` lists ``d_0..d_l`` out of level ``l``; ``degeneracies[l]``
lists ``s_0..s_l`` out of level ``l``. Built-in short forms such as
``"pair 1"``, ``"bnr 2"``, ``"id 3"``, ``"zero"``, ``"B1"`` or
``"tensor(B1, pair 1)"`` are accepted wherever a fixture is expected.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .chains import ChainCx
from .doldkan import DK, bnr
from .linalg import ContractError, Mat
from .maps import tensor_svs
from .simplicial import SVS, Constant, Pair, Truncated, Zero, opposite, validate_identities

FORMAT = "simpvec-fixture"
VERSION = 1


class FixtureError(ValueError):
    """A fixture could not be parsed or does not define a simplicial vector space."""


@dataclass(frozen=True)
class Fixture:
    """Parsed fixture: a normalized generator tree or explicit truncation data."""

    generator: Any = None
    truncation: Any = None
    name: str | None = None
    meta: tuple = field(default=(), compare=False)

    def build(self) -> SVS:
        if self.generator is not None:
            V = _build_generator(self.generator)
        else:
            V = _build_truncated(self.truncation, self.name or "fixture")
        if self.name:
            V.name = self.name
        return V

    def to_document(self) -> dict:
        doc: dict[str, Any] = {"format": FORMAT, "version": VERSION}
        if self.name:
            doc["name"] = self.name
        if self.generator is not None:
            doc["generator"] = _thaw(self.generator)
        else:
            doc.update(_thaw(self.truncation))
        return doc


# ---------------------------------------------------------------------------
# rationals and matrices

_RAT = re.compile(r"^\s*-?\d+\s*(/\s*\d+\s*)?$")


def parse_rational(x, where: str) -> Fraction:
    if isinstance(x, bool):
        raise FixtureError(f"{where}: malformed rational {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str) and _RAT.match(x):
        try:
            return Fraction(x.replace(" ", ""))
        except ZeroDivisionError:
            raise FixtureError(f"{where}: zero denominator in {x!r}") from None
    raise FixtureError(f"{where}: malformed rational {x!r}")


def _matrix(obj, rows: int, cols: int, where: str) -> tuple:
    if not isinstance(obj, list) or len(obj) != rows:
        raise FixtureError(f"{where}: dimension mismatch, expected {rows}x{cols}")
    out = []
    for r, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise FixtureError(f"{where}: dimension mismatch, expected {rows}x{cols}")
        out.append(tuple(str(parse_rational(x, f"{where} entry ({r},{c})")) for c, x in enumerate(row)))
    return tuple(out)


def _mat(t: tuple, rows: int, cols: int) -> Mat:
    return Mat(rows, cols, [[Fraction(x) for x in r] for r in t])


def matrix_strings(M: Mat) -> list[list[str]]:
    return M.to_strings()


# ---------------------------------------------------------------------------
# generators

def _freeze(obj):
    if isinstance(obj, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in obj.items()))
    if isinstance(obj, list):
        return ("__list__",) + tuple(_freeze(v) for v in obj)
    return obj


def _thaw(obj):
    if isinstance(obj, tuple):
        if obj and obj[0] == "__list__":
            return [_thaw(v) for v in obj[1:]]
        return {k: _thaw(v) for k, v in obj}
    return obj


def _int_field(g: dict, key: str, where: str, lo: int = 0) -> int:
    v = g.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < lo:
        raise FixtureError(f"{where}: field {key!r} must be an integer >= {lo}")
    return v


def _normalize_generator(g, where: str = "generator") -> dict:
    if isinstance(g, str):
        return parse_builtin(g)
    if not isinstance(g, dict) or "kind" not in g:
        raise FixtureError(f"{where}: expected an object with a 'kind'")
    kind = g["kind"]
    if kind == "zero":
        return {"kind": "zero"}
    if kind in ("pair", "id"):
        return {"kind": kind, "d": _int_field(g, "d", where)}
    if kind == "bnr":
        return {"kind": "bnr", "n": _int_field(g, "n", where)}
    if kind == "tensor":
        fs = g.get("factors")
        if not isinstance(fs, list) or len(fs) < 2:
            raise FixtureError(f"{where}: tensor needs a list of at least two factors")
        return {"kind": "tensor", "factors": [_normalize_generator(f, f"{where}.factors[{i}]")
                                              for i, f in enumerate(fs)]}
    if kind == "opposite":
        return {"kind": "opposite", "of": _normalize_generator(g.get("of"), f"{where}.of")}
    if kind == "dk":
        return {"kind": "dk", "complex": _normalize_complex(g.get("complex"), f"{where}.complex")}
    if kind == "file":
        return {"kind": "file", "path": str(g.get("path"))}
    raise FixtureError(f"{where}: unknown generator kind {kind!r}")


def _normalize_complex(c, where: str) -> dict:
    if not isinstance(c, dict) or not isinstance(c.get("dims"), list):
        raise FixtureError(f"{where}: expected {{'dims': [...], 'differentials': {{...}}}}")
    lo = c.get("lo", 0)
    if lo != 0:
        raise FixtureError(f"{where}: complexes must start in degree 0")
    dims = [_int_field({"d": x}, "d", f"{where}.dims") for x in c["dims"]]
    diffs = {}
    for k, M in sorted((c.get("differentials") or {}).items(), key=lambda kv: int(kv[0])):
        kk = int(k)
        if not 1 <= kk < len(dims):
            raise FixtureError(f"{where}: differential out of degree {kk} is out of range")
        diffs[str(kk)] = [list(r) for r in _matrix(M, dims[kk - 1], dims[kk], f"{where} differential {kk}")]
    return {"lo": 0, "dims": dims, "differentials": diffs}


def _build_complex(c: dict) -> ChainCx:
    dims = c["dims"]
    diffs = {int(k): _mat(tuple(tuple(r) for r in M), dims[int(k) - 1], dims[int(k)])
             for k, M in c["differentials"].items()}
    C = ChainCx(0, dims, diffs, "A")
    for k in range(2, len(dims)):
        if not (C.d(k - 1) @ C.d(k)).is_zero():
            raise FixtureError(f"complex: d_{k - 1} d_{k} != 0")
    return C


def parse_complex(doc) -> ChainCx:
    """A non-negative complex from ``{"dims": [...], "differentials": {"k": matrix}}``."""
    return _build_complex(_normalize_complex(doc, "complex"))


def _build_generator(g) -> SVS:
    g = _thaw(g) if isinstance(g, tuple) else g
    kind = g["kind"]
    if kind == "zero":
        return Zero()
    if kind == "pair":
        return Pair(g["d"])
    if kind == "id":
        return Constant(g["d"])
    if kind == "bnr":
        return bnr(g["n"])
    if kind == "tensor":
        parts = [_build_generator(f) for f in g["factors"]]
        V = parts[0]
        for W in parts[1:]:
            V = tensor_svs(V, W)
        return V
    if kind == "opposite":
        return opposite(_build_generator(g["of"]))
    if kind == "dk":
        return DK(_build_complex(g["complex"]))
    if kind == "file":
        return load_fixture(g["path"]).build()
    raise FixtureError(f"unknown generator kind {kind!r}")


_BUILTIN = re.compile(r"^\s*(pair|id|bnr|B|Pair|Id)\s*[: (]?\s*(\d+)\s*\)?\s*$")


def parse_builtin(text: str) -> dict:
    """``"pair 1"``, ``"Pair(1)"``, ``"bnr 2"``, ``"B2"``, ``"id 3"``, ``"zero"``,
    ``"tensor(A, B)"`` and ``"op(A)"``."""
    s = text.strip()
    if s.lower() == "zero":
        return {"kind": "zero"}
    for head, kind in (("tensor", "tensor"), ("op", "opposite")):
        if s.lower().startswith(head + "(") and s.endswith(")"):
            args = _split_args(s[len(head) + 1:-1])
            if kind == "opposite":
                if len(args) != 1:
                    raise FixtureError(f"op expects one argument: {text!r}")
                return {"kind": "opposite", "of": parse_builtin(args[0])}
            if len(args) < 2:
                raise FixtureError(f"tensor expects at least two arguments: {text!r}")
            return {"kind": "tensor", "factors": [parse_builtin(a) for a in args]}
    m = _BUILTIN.match(s)
    if m:
        head, num = m.group(1).lower(), int(m.group(2))
        if head in ("b", "bnr"):
            return {"kind": "bnr", "n": num}
        return {"kind": head, "d": num}
    raise FixtureError(f"unknown built-in fixture {text!r}")


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    out.append(cur)
    return [a.strip() for a in out if a.strip()]


# ---------------------------------------------------------------------------
# explicit truncations

def _normalize_truncation(doc: dict) -> dict:
    dims = doc.get("dims")
    if not isinstance(dims, list) or not dims:
        raise FixtureError("explicit fixture needs a non-empty 'dims' list")
    dims = [_int_field({"d": x}, "d", "dims") for x in dims]
    L = doc.get("truncation", len(dims) - 1)
    if L != len(dims) - 1:
        raise FixtureError(f"truncation level {L} disagrees with {len(dims)} listed dims")
    ext = doc.get("extension", "coskeletal")
    if ext not in ("coskeletal", "groupoid"):
        raise FixtureError(f"unknown extension {ext!r}")
    faces = doc.get("faces") or {}
    degens = doc.get("degeneracies") or {}
    nf, nd = {}, {}
    for l in range(1, L + 1):
        fs = faces.get(str(l))
        if not isinstance(fs, list) or len(fs) != l + 1:
            raise FixtureError(f"level {l}: expected {l + 1} face matrices")
        nf[str(l)] = [[list(r) for r in _matrix(M, dims[l - 1], dims[l], f"level {l} face d_{i}")]
                      for i, M in enumerate(fs)]
    for l in range(L):
        ss = degens.get(str(l))
        if not isinstance(ss, list) or len(ss) != l + 1:
            raise FixtureError(f"level {l}: expected {l + 1} degeneracy matrices")
        nd[str(l)] = [[list(r) for r in _matrix(M, dims[l + 1], dims[l], f"level {l} degeneracy s_{j}")]
                      for j, M in enumerate(ss)]
    extra = set(faces) - set(nf) | set(degens) - set(nd)
    if extra:
        raise FixtureError(f"maps listed for levels outside the truncation: {sorted(extra)}")
    return {"truncation": L, "extension": ext, "dims": dims, "faces": nf, "degeneracies": nd}


def _build_truncated(t, name: str) -> Truncated:
    t = _thaw(t) if isinstance(t, tuple) else t
    dims = t["dims"]
    faces = {int(l): [_mat(tuple(tuple(r) for r in M), dims[int(l) - 1], dims[int(l)]) for M in fs]
             for l, fs in t["faces"].items()}
    degens = {int(l): [_mat(tuple(tuple(r) for r in M), dims[int(l) + 1], dims[int(l)]) for M in ss]
              for l, ss in t["degeneracies"].items()}
    T = Truncated(dims, faces, degens, extension=t["extension"], name=name, check=False)
    bad = validate_identities(T, T.L)
    if bad:
        raise FixtureError("simplicial identity violated: " + "; ".join(bad))
    return T


# ---------------------------------------------------------------------------
# documents

def parse_document(doc) -> Fixture:
    if isinstance(doc, str):
        return Fixture(generator=_freeze(parse_builtin(doc)))
    if not isinstance(doc, dict):
        raise FixtureError("fixture document must be a JSON object")
    if doc.get("format", FORMAT) != FORMAT:
        raise FixtureError(f"unknown format {doc.get('format')!r}")
    if doc.get("version", VERSION) != VERSION:
        raise FixtureError(f"unsupported format version {doc.get('version')!r}")
    name = doc.get("name")
    if "generator" in doc:
        return Fixture(generator=_freeze(_normalize_generator(doc["generator"])), name=name)
    return Fixture(truncation=_freeze(_normalize_truncation(doc)), name=name)


def parse_fixture(text: str) -> Fixture:
    """Parse fixture text: a JSON document or a built-in short form."""
    s = text.strip()
    if s.startswith("{") or s.startswith('"'):
        try:
            doc = json.loads(s)
        except json.JSONDecodeError as e:
            raise FixtureError(f"invalid JSON: {e}") from None
        return parse_document(doc)
    return parse_document(s)


_FLAT_ROW = re.compile(r'\[\s*((?:"[^"]*"|-?\d+)(?:,\s*(?:"[^"]*"|-?\d+))*)\s*\]')


def emit_fixture(fx: Fixture) -> str:
    text = json.dumps(fx.to_document(), indent=2, sort_keys=True)
    # keep matrix rows and dim lists on one line
    text = _FLAT_ROW.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]", text)
    return text + "\n"


def load_fixture(spec: str | Path) -> Fixture:
    """A path to a fixture file, or a built-in short form."""
    p = Path(spec)
    if p.suffix == ".json" or p.is_file():
        try:
            return parse_fixture(p.read_text())
        except OSError as e:
            raise FixtureError(f"cannot read {spec}: {e}") from None
    return parse_fixture(str(spec))


def fixture_from_svs(V: SVS, L: int, extension: str = "coskeletal", name: str | None = None) -> Fixture:
    """Explicit fixture holding levels ``0..L`` of ``V``."""
    doc = {
        "truncation": L, "extension": extension, "dims": [V.dim(m) for m in range(L + 1)],
        "faces": {str(l): [V.d(l, i).to_strings() for i in range(l + 1)] for l in range(1, L + 1)},
        "degeneracies": {str(l): [V.s(l, j).to_strings() for j in range(l + 1)] for l in range(L)},
    }
    return Fixture(truncation=_freeze(_normalize_truncation(doc)), name=name or V.name)


def build(spec: str | Path) -> SVS:
    try:
        return load_fixture(spec).build()
    except ContractError as e:
        raise FixtureError(str(e)) from None
