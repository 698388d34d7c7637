"""Sample files, run configuration and CSV emission.

Sample files are comma-separated with header ``x,delta,l,u``.  Angles are
written with ``repr`` (shortest round-trip decimal) and a censored direction
is the token ``NA``.  On input, ``-pi`` with ``delta = 0`` is also accepted as
a censoring sentinel.
"""

from __future__ import annotations

import ast
import configparser
import csv
import io
import math
from pathlib import Path
from typing import Dict, Iterable, Sequence

import numpy as np

from .exceptions import CircCensorError, ConfigError, DataError
from .geometry import TWO_PI, in_window
from .sampling import (
    REFERENCE_MODELS,
    CensoredSample,
    Deterministic,
    IndependentPair,
    Mixture,
    PointMass,
    UniformAnchorFixedArc,
    UniformCircle,
    VonMises,
)

__all__ = [
    "SAMPLE_HEADER",
    "FORMAT_VERSION",
    "write_sample",
    "read_sample",
    "format_float",
    "write_csv",
    "parse_distribution",
    "parse_censoring",
    "parse_number",
    "load_config",
    "COMMAND_KEYS",
]

SAMPLE_HEADER = ("x", "delta", "l", "u")
FORMAT_VERSION = "1"
SENTINEL = -math.pi
SENTINEL_TOL = 1e-9


def format_float(v) -> str:
    return repr(float(v))


def write_sample(sample: CensoredSample, path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SAMPLE_HEADER)
    for x, d, l, u in zip(sample.x, sample.delta, sample.l, sample.u):
        w.writerow([format_float(x) if d else "NA", int(d), format_float(l), format_float(u)])
    Path(path).write_text(buf.getvalue())


def _angle(text, line, name):
    try:
        v = float(text)
    except ValueError:
        raise DataError(f"{name}: not a number: {text!r}", line) from None
    if not (0.0 <= v < TWO_PI):
        raise DataError(f"{name}: angle {v!r} outside [0, 2pi)", line)
    return v


def read_sample(path) -> CensoredSample:
    """Read a sample file, checking every row."""
    text = Path(path).read_text()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(c.strip() for c in rows[0]) != SAMPLE_HEADER:
        raise DataError(f"header must be {','.join(SAMPLE_HEADER)}", 1)
    xs, ds, ls, us = [], [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise DataError(f"expected 4 fields, got {len(row)}", lineno)
        xt, dt, lt, ut = (c.strip() for c in row)
        if dt not in ("0", "1"):
            raise DataError(f"delta must be 0 or 1, got {dt!r}", lineno)
        d = dt == "1"
        l = _angle(lt, lineno, "l")
        u = _angle(ut, lineno, "u")
        if l == u:
            raise DataError("window endpoints coincide", lineno)
        if d:
            x = _angle(xt, lineno, "x")
            if not in_window(l, u, x):
                raise DataError(f"x = {x!r} lies outside its window but delta = 1", lineno)
        elif xt == "NA":
            x = math.nan
        else:
            try:
                v = float(xt)
            except ValueError:
                raise DataError(f"x: not a number: {xt!r}", lineno) from None
            if abs(v - SENTINEL) > SENTINEL_TOL:
                raise DataError("censored row must have x = NA (or -pi)", lineno)
            x = math.nan
        xs.append(x)
        ds.append(d)
        ls.append(l)
        us.append(u)
    if not xs:
        raise DataError("sample file has no observations")
    try:
        return CensoredSample(np.array(xs), np.array(ds, dtype=bool), np.array(ls), np.array(us))
    except CircCensorError as exc:
        raise DataError(str(exc)) from None


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    Path(path).write_text(buf.getvalue())


# ---------------------------------------------------------------------------
# distribution / censoring expressions
#
#   vonmises(mu, kappa) | uniform() | point(at) | mixture(w1, law1, w2, law2, ...)
#   independent(law_l, law_u) | deterministic(l, u) | fixed_arc(alpha)
#
# numbers may use pi and + - * / (e.g. 2*pi/3).

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def _number(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _number(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_number(node.left), _number(node.right))
    raise ValueError(f"not a number: {ast.unparse(node)}")


def _call(node):
    if isinstance(node, ast.Name):
        return node.id, []
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        return node.func.id, node.args
    raise ValueError(f"expected a law such as vonmises(pi, 1), got {ast.unparse(node)}")


def _law(node):
    name, args = _call(node)
    if name == "vonmises" and len(args) == 2:
        return VonMises(_number(args[0]), _number(args[1]))
    if name == "uniform" and not args:
        return UniformCircle()
    if name == "point" and len(args) == 1:
        return PointMass(_number(args[0]))
    if name == "mixture" and args and len(args) % 2 == 0:
        return Mixture(tuple((_number(w), _law(d)) for w, d in zip(args[::2], args[1::2])))
    raise ValueError(f"unknown law or wrong arity: {ast.unparse(node)}")


def _censoring(node):
    name, args = _call(node)
    if name == "independent" and len(args) == 2:
        return IndependentPair(_law(args[0]), _law(args[1]))
    if name == "deterministic" and len(args) == 2:
        return Deterministic(_number(args[0]), _number(args[1]))
    if name == "fixed_arc" and len(args) == 1:
        return UniformAnchorFixedArc(_number(args[0]))
    raise ValueError(f"unknown censoring model or wrong arity: {ast.unparse(node)}")


def _parse(text, builder, key):
    try:
        node = ast.parse(text.strip(), mode="eval").body
        return builder(node)
    except (SyntaxError, ValueError, ZeroDivisionError, CircCensorError) as exc:
        raise ConfigError(f"{key}: {exc}", key) from None


def parse_distribution(text: str, key: str = "distribution"):
    return _parse(text, _law, key)


def parse_censoring(text: str, key: str = "censoring"):
    return _parse(text, _censoring, key)


def parse_number(text: str, key: str) -> float:
    return _parse(text, _number, key)


# ---------------------------------------------------------------------------
# run configuration

_COMMON = {"seed", "grid", "kappa", "variant", "m_max", "out"}

COMMAND_KEYS: Dict[str, set] = {
    "simulate": {"model", "distribution", "censoring", "n", "seed", "out"},
    "estimate": _COMMON | {"sample", "distribution", "model"},
    "benchmark": _COMMON | {"models", "sizes", "replications"},
    "compare": _COMMON | {"concentrations", "alphas", "replications", "n", "mu"},
}


def _int(value, key, lo=None, hi=None):
    try:
        v = int(str(value).strip())
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {value!r}", key) from None
    if (lo is not None and v < lo) or (hi is not None and v > hi):
        raise ConfigError(f"{key}: {v} outside [{lo}, {hi}]", key)
    return v


def _int_list(value, key, lo=None):
    return [_int(p, key, lo) for p in str(value).split(",") if p.strip()]


def _float_list(value, key):
    return [parse_number(p, key) for p in str(value).split(",") if p.strip()]


def _kappa(value, key="kappa"):
    text = str(value).strip()
    if text == "auto":
        return "auto"
    v = parse_number(text, key)
    if not v > 0:
        raise ConfigError(f"{key}: must be 'auto' or a positive number", key)
    return v


def _model_index(value, key="model"):
    text = str(value).strip().lower().removeprefix("model")
    v = _int(text, key)
    if v not in REFERENCE_MODELS:
        raise ConfigError(f"{key}: unknown model {value!r}; choose 1-4", key)
    return v


def load_config(path, command: str, overrides: Dict[str, object] = None) -> Dict[str, object]:
    """Read the ``[command]`` section of an INI-style file and validate it.

    ``overrides`` (typically from command-line flags) take precedence.
    Unknown keys raise :class:`ConfigError` naming the key.
    """
    raw: Dict[str, object] = {}
    if path is not None:
        cp = configparser.ConfigParser(interpolation=None)
        try:
            with open(path) as fh:
                cp.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}", "config") from None
        except configparser.Error as exc:
            raise ConfigError(f"malformed config: {exc}", "config") from None
        for section in cp.sections():
            if section not in COMMAND_KEYS:
                raise ConfigError(f"unknown section [{section}]", section)
        if cp.has_section(command):
            raw.update(cp.items(command))
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    allowed = COMMAND_KEYS[command]
    for key in raw:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} for [{command}]", key)
    return _validate(command, raw)


def _validate(command, raw):
    cfg: Dict[str, object] = {"seed": _int(raw.get("seed", 0), "seed", 0, 2**64 - 1)}
    cfg["out"] = str(raw.get("out", "."))
    if command == "simulate":
        model = _model_index(raw["model"]) if "model" in raw else None
        if model is None and not ("distribution" in raw and "censoring" in raw):
            model = 1
        ref = REFERENCE_MODELS.get(model)
        cfg["model"] = ref.name if ref else "custom"
        cfg["distribution"] = (
            parse_distribution(raw["distribution"]) if "distribution" in raw else ref.distribution
        )
        cfg["censoring"] = parse_censoring(raw["censoring"]) if "censoring" in raw else ref.censoring
        cfg["n"] = _int(raw.get("n", 500), "n", 1)
        return cfg

    cfg["grid"] = _int(raw.get("grid", 1024), "grid", 16)
    cfg["kappa"] = _kappa(raw.get("kappa", "auto"))
    variant = str(raw.get("variant", "threshold")).strip()
    if variant not in ("threshold", "window"):
        raise ConfigError("variant: expected 'threshold' or 'window'", "variant")
    cfg["variant"] = variant
    cfg["m_max"] = _int(raw["m_max"], "m_max", 1) if "m_max" in raw else None

    if command == "estimate":
        if "sample" not in raw:
            raise ConfigError("sample: a sample file is required", "sample")
        cfg["sample"] = str(raw["sample"])
        if "distribution" in raw:
            cfg["distribution"] = parse_distribution(raw["distribution"])
        elif "model" in raw:
            cfg["distribution"] = REFERENCE_MODELS[_model_index(raw["model"])].distribution
        else:
            cfg["distribution"] = None
    elif command == "benchmark":
        models = _int_list(raw.get("models", "1,2,3,4"), "models")
        for m in models:
            _model_index(m, "models")
        cfg["models"] = models
        cfg["sizes"] = _int_list(raw.get("sizes", "50,200,500,1000"), "sizes", 4)
        cfg["replications"] = _int(raw.get("replications", 100), "replications", 2)
    elif command == "compare":
        cfg["concentrations"] = _float_list(raw.get("concentrations", "1,3"), "concentrations")
        cfg["alphas"] = _float_list(raw.get("alphas", "1,3"), "alphas")
        for a in cfg["alphas"]:
            if not 0 < a < TWO_PI:
                raise ConfigError("alphas: each value must lie in (0, 2pi)", "alphas")
        cfg["replications"] = _int(raw.get("replications", 200), "replications", 2)
        cfg["n"] = _int(raw.get("n", 100), "n", 4)
        cfg["mu"] = parse_number(str(raw.get("mu", "2")), "mu")
    return cfg
