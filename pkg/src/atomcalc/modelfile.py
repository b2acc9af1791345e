"""JSON model files: a field, an algebra, named modules and an optional base ring.

Layout::

    {
      "field": "F_2" | "F_p" | "Q",
      "algebra": {"dim": d, "unit": [...], "constants": [[i, j, k, v], ...],
                  "names": [...]},
      "modules": {"name": {"dim": n, "action": [n x n matrix per basis element]}},
      "base_ring": {"factors": [{"dim": .., "unit": .., "constants": ..}, ...],
                    "modules": {...}},
      "central_map": [row of length d per base ring basis element]
    }

``constants`` lists the nonzero structure constants: e_i e_j has
coefficient v at e_k.  Rational entries may be written as "a/b" strings.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path

from .core.algebra import Algebra, AlgebraError, validate
from .core.modules import RightModule, module_diagnostic
from .linalg import Field, Matrix


class ModelError(ValueError):
    """Malformed or invalid model file."""


@dataclass(eq=False)
class Model:
    field: Field
    algebra: Algebra
    modules: dict[str, RightModule]
    sha256: str
    path: str
    base_factors: list[Algebra] = field(default_factory=list)
    base_modules: dict[str, RightModule] = field(default_factory=dict)
    central_map: Matrix | None = None

    @cached_property
    def base_ring(self) -> Algebra | None:
        if not self.base_factors:
            return None
        if len(self.base_factors) == 1:
            return self.base_factors[0]
        from .core.algebra import direct_product

        return direct_product(self.base_factors)


def parse_field(spec) -> Field:
    if isinstance(spec, int):
        return Field(spec)
    if not isinstance(spec, str):
        raise ModelError(f"field: expected a string such as 'F_2' or 'Q', got {spec!r}")
    s = spec.strip()
    if s in ("Q", "QQ", "rationals"):
        return Field(None)
    m = re.fullmatch(r"(?:F_?|GF\()(\d+)\)?", s)
    if not m:
        raise ModelError(f"field: cannot parse {spec!r}")
    try:
        return Field(int(m.group(1)))
    except ValueError as e:
        raise ModelError(f"field: {e}") from None


def _scalar(f: Field, v, where: str):
    try:
        if f.p is None:
            return Fraction(v) if not isinstance(v, float) else Fraction(v).limit_denominator()
        if isinstance(v, str):
            v = Fraction(v)
        if isinstance(v, Fraction):
            return f(v.numerator) * f.inv(f(v.denominator))
        if isinstance(v, bool) or not isinstance(v, int):
            raise TypeError
        return f(v)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ModelError(f"{where}: bad scalar {v!r}") from None


def _algebra(f: Field, spec: dict, where: str, seed: int) -> Algebra:
    try:
        dim = spec["dim"]
        unit = spec["unit"]
        entries = spec.get("constants", [])
    except (KeyError, TypeError):
        raise ModelError(f"{where}: needs 'dim', 'unit' and 'constants'") from None
    if not isinstance(dim, int) or dim < 1:
        raise ModelError(f"{where}.dim: positive integer expected")
    if not isinstance(unit, list) or len(unit) != dim:
        raise ModelError(f"{where}.unit: list of length {dim} expected")
    quads = []
    for n, q in enumerate(entries):
        if not isinstance(q, list) or len(q) != 4:
            raise ModelError(f"{where}.constants[{n}]: expected [i, j, k, value]")
        i, j, k, v = q
        for idx in (i, j, k):
            if not isinstance(idx, int) or not 0 <= idx < dim:
                raise ModelError(f"{where}.constants[{n}]: index {idx!r} out of range")
        quads.append((i, j, k, _scalar(f, v, f"{where}.constants[{n}]")))
    u = [_scalar(f, x, f"{where}.unit") for x in unit]
    try:
        a = Algebra.from_sparse(f, dim, quads, u, names=spec.get("names"), seed=seed)
    except AlgebraError as e:
        raise ModelError(f"{where}: {e}") from None
    diag = validate(a)
    if diag is not None:
        raise ModelError(f"{where}: {diag.law} fails at basis indices {diag.indices}")
    return a


def _modules(a: Algebra, spec: dict, where: str) -> dict[str, RightModule]:
    f = a.field
    out = {}
    if not isinstance(spec, dict):
        raise ModelError(f"{where}: expected an object of named modules")
    for name, m in spec.items():
        w = f"{where}.{name}"
        try:
            dim = m["dim"]
            action = m["action"]
        except (KeyError, TypeError):
            raise ModelError(f"{w}: needs 'dim' and 'action'") from None
        if not isinstance(action, list) or len(action) != a.dim:
            raise ModelError(f"{w}.action: one matrix per algebra basis element ({a.dim}) expected")
        mats = []
        for b, mat in enumerate(action):
            if dim == 0:
                mats.append(Matrix.zeros(f, 0, 0))
                continue
            if (not isinstance(mat, list) or len(mat) != dim
                    or any(not isinstance(r, list) or len(r) != dim for r in mat)):
                raise ModelError(f"{w}.action[{b}]: {dim}x{dim} matrix expected")
            mats.append(Matrix(f, [[_scalar(f, x, f"{w}.action[{b}]") for x in r] for r in mat]))
        mod = RightModule(a, tuple(mats), name)
        diag = module_diagnostic(mod)
        if diag is not None:
            raise ModelError(f"module {name!r}: {diag}")
        out[name] = mod
    return out


def loads(text: str, path: str = "<string>", seed: int = 0) -> Model:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ModelError(f"{path}: top level must be an object")
    if "field" not in doc or "algebra" not in doc:
        raise ModelError(f"{path}: 'field' and 'algebra' are required")
    f = parse_field(doc["field"])
    a = _algebra(f, doc["algebra"], "algebra", seed)
    mods = _modules(a, doc.get("modules", {}), "modules")
    sha = hashlib.sha256(text.encode("utf-8")).hexdigest()
    model = Model(f, a, mods, sha, path)
    if "base_ring" in doc:
        br = doc["base_ring"]
        facs = br.get("factors") if isinstance(br, dict) else None
        if not isinstance(facs, list) or not facs:
            raise ModelError("base_ring.factors: nonempty list expected")
        model.base_factors = [_algebra(f, x, f"base_ring.factors[{i}]", seed) for i, x in enumerate(facs)]
        ring = model.base_ring
        model.base_modules = _modules(ring, br.get("modules", {}), "base_ring.modules")
        cm = doc.get("central_map")
        if cm is None:
            raise ModelError("central_map is required with a base ring")
        if not isinstance(cm, list) or len(cm) != ring.dim or any(
                not isinstance(r, list) or len(r) != a.dim for r in cm):
            raise ModelError(f"central_map: {ring.dim} rows of length {a.dim} expected")
        model.central_map = Matrix(f, [[_scalar(f, x, "central_map") for x in r] for r in cm])
    return model


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("atomcalc") / "fixtures" / name))


def load(path: str | Path, seed: int = 0) -> Model:
    """Load a model file; bare names fall back to the bundled fixtures."""
    p = Path(path)
    if not p.exists() and not p.is_absolute():
        alt = fixture_path(p.name if p.suffix else p.name + ".json")
        if alt.exists():
            p = alt
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelError(f"{path}: {e.strerror}") from None
    except UnicodeDecodeError:
        raise ModelError(f"{path}: not UTF-8") from None
    return loads(text, str(path), seed)


# -- writing ---------------------------------------------------------------


def scalar_json(f: Field, x):
    if f.p is None:
        x = Fraction(x)
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return int(x)


def algebra_json(a: Algebra) -> dict:
    f = a.field
    c = a.constants()
    quads = [[i, j, k, scalar_json(f, c[i, j, k])] for i in range(a.dim) for j in range(a.dim)
             for k in range(a.dim) if c[i, j, k]]
    d = {"dim": a.dim, "unit": [scalar_json(f, x) for x in a.unit.a[0]], "constants": quads}
    if a.names:
        d["names"] = list(a.names)
    return d


def modules_json(mods: dict[str, RightModule]) -> dict:
    out = {}
    for name, m in mods.items():
        f = m.field
        out[name] = {"dim": m.dim, "action": [[[scalar_json(f, x) for x in r] for r in mat.a] for mat in m.action]}
    return out


def field_name(f: Field) -> str:
    return "Q" if f.p is None else f"F_{f.p}"


def dumps(algebra: Algebra, modules: dict[str, RightModule], base_factors=None, base_modules=None,
          central_map: Matrix | None = None) -> str:
    doc = {"field": field_name(algebra.field), "algebra": algebra_json(algebra), "modules": modules_json(modules)}
    if base_factors:
        doc["base_ring"] = {"factors": [algebra_json(x) for x in base_factors],
                            "modules": modules_json(base_modules or {})}
        doc["central_map"] = [[scalar_json(algebra.field, x) for x in r] for r in central_map.a]
    text = json.dumps(doc, indent=1)
    # keep vectors and matrix rows on one line
    flat = re.compile(r"\[\s*([^\[\]{}]*?)\s*\]", re.S)
    text = flat.sub(lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text)
    rows = re.compile(r"\[\s*((?:\[[^\[\]{}]*\],?\s*)+)\]", re.S)
    text = rows.sub(lambda m: "[" + re.sub(r"\],\s+", "], ", m.group(1).strip()) + "]", text)
    return text + "\n"
