"""Parsing of spec/potential files (YAML) and of the CLI's short descriptors.

Spec file fields: ``alphabet``, ``dimension``, ``forbidden`` (a list of
patterns, each a list of ``[point, symbol]`` pairs), ``matrices`` (one 0/1
grid per axis), ``background`` (a symbol, or a list of symbols repeated along
Z) and an optional ``name``.

Potential file: exactly one of ``ising: {J, h}``, ``site: {symbol: value}``,
``pair: [[g(a, b)]]`` (1D, window {0, 1}),
``local: {window, values: [{pattern, value}], default}`` or
``interaction: {terms: [{shape, values, default}]}``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Any

import yaml

from .lattice import Box, centered_box
from .potentials import InteractionPotential, LocalPotential, a_phi, ising
from .shiftspace import (
    Alphabet,
    FramedConfiguration,
    Pattern,
    PeriodicBackground,
    SubshiftSpec,
)


class ConfigError(ValueError):
    """Malformed config file or descriptor."""


def _load(source: str) -> Any:
    try:
        with open(source) as fh:
            return yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {source}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {source}: {exc}".replace("\n", " ")) from None


def _point(raw, d: int) -> tuple[int, ...]:
    if isinstance(raw, int):
        raw = [raw]
    if not isinstance(raw, (list, tuple)) or len(raw) != d:
        raise ConfigError(f"point {raw!r} must have {d} coordinates")
    try:
        return tuple(int(c) for c in raw)
    except (TypeError, ValueError):
        raise ConfigError(f"point {raw!r} has non-integer coordinates") from None


def _symbol(alphabet: Alphabet, raw) -> int:
    try:
        return alphabet.index(raw)
    except ValueError:
        raise ConfigError(f"symbol {raw!r} not in alphabet {list(alphabet.symbols)}") from None


def spec_from_dict(data: dict) -> SubshiftSpec:
    if not isinstance(data, dict):
        raise ConfigError("spec must be a mapping")
    unknown = set(data) - {"alphabet", "dimension", "forbidden", "matrices", "background", "name"}
    if unknown:
        raise ConfigError(f"unknown spec fields {sorted(unknown)}")
    if "alphabet" not in data:
        raise ConfigError("spec needs an alphabet")
    alphabet = Alphabet.of(data["alphabet"])
    d = int(data.get("dimension", 1))
    forbidden = []
    for entry in data.get("forbidden") or []:
        mapping = {}
        for pair in entry:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ConfigError("forbidden entries are lists of [point, symbol] pairs")
            mapping[_point(pair[0], d)] = _symbol(alphabet, pair[1])
        forbidden.append(Pattern.from_dict(mapping, dim=d))
    matrices = data.get("matrices")
    bg = None
    if "background" in data:
        bg = background_from(data["background"], alphabet, d)
    try:
        if matrices is not None:
            mats = tuple(tuple(tuple(int(v) for v in row) for row in m) for m in matrices)
            if len(mats) != d:
                raise ConfigError("need one transition matrix per axis")
            return SubshiftSpec(alphabet, d, matrices=mats, background=bg, name=str(data.get("name", "")))
        return SubshiftSpec(alphabet, d, tuple(forbidden), background=bg, name=str(data.get("name", "")))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def background_from(raw, alphabet: Alphabet, d: int) -> PeriodicBackground:
    if isinstance(raw, (list, tuple)):
        if d != 1:
            raise ConfigError("tile backgrounds are one-dimensional")
        return PeriodicBackground.word([_symbol(alphabet, s) for s in raw])
    return PeriodicBackground.constant(_symbol(alphabet, raw), d)


def builtin_spec(name: str) -> SubshiftSpec | None:
    """golden_mean, full:<s1>,<s2>,...[:d], ising[:d], even:<n>."""
    head, _, rest = name.partition(":")
    if head == "golden_mean" and not rest:
        return SubshiftSpec.golden_mean()
    if head == "ising":
        d = int(rest) if rest else 1
        return SubshiftSpec.full_shift(["-1", "+1"], d, name="ising")
    if head == "full" and rest:
        syms, _, dim = rest.partition(":")
        return SubshiftSpec.full_shift(syms.split(","), int(dim) if dim else 1)
    if head == "even" and rest:
        return SubshiftSpec.even_shift_truncated(int(rest))
    return None


def load_spec(source: str) -> SubshiftSpec:
    if not os.path.exists(source):
        try:
            spec = builtin_spec(source)
        except ValueError:
            spec = None
        if spec is None:
            raise ConfigError(f"no spec file or builtin named {source!r}")
        return spec
    return spec_from_dict(_load(source))


@dataclass(frozen=True)
class PotentialSource:
    """A loaded potential: always a local function, plus the interaction when given as one."""

    local: LocalPotential
    interaction: InteractionPotential | None = None
    pair: tuple[tuple[float, ...], ...] | None = None


def _table(alphabet: Alphabet, size: int, rows, default, order=None) -> dict:
    """Table over A^size from value rows; ``order[t]`` is the listed position of sorted point t."""
    table = {k: float(default) for k in itertools.product(range(len(alphabet)), repeat=size)}
    for row in rows or []:
        pat = row.get("pattern") if isinstance(row, dict) else None
        if pat is None or "value" not in row:
            raise ConfigError("value rows need 'pattern' and 'value'")
        if isinstance(pat, str) and all(len(s) == 1 for s in alphabet.symbols):
            pat = list(pat)
        if len(pat) != size:
            raise ConfigError(f"pattern {pat!r} does not fit a window of size {size}")
        if order is not None:
            pat = [pat[t] for t in order]
        table[tuple(_symbol(alphabet, s) for s in pat)] = float(row["value"])
    return table


def potential_from_dict(data: dict, spec: SubshiftSpec) -> PotentialSource:
    if not isinstance(data, dict) or len(data) != 1:
        raise ConfigError("potential must have exactly one of ising, site, pair, local, interaction")
    (kind, body), = data.items()
    alphabet, d = spec.alphabet, spec.dimension
    if kind == "ising":
        if alphabet.symbols != ("-1", "+1"):
            raise ConfigError("the Ising potential needs the alphabet [-1, +1]")
        Phi, f = ising(float(body.get("J", 0.0)), float(body.get("h", 0.0)), d)
        return PotentialSource(f, Phi)
    if kind == "site":
        for s in body:
            _symbol(alphabet, s)
        return PotentialSource(LocalPotential.site(alphabet, {str(k): float(v) for k, v in body.items()}, d))
    if kind == "pair":
        if d != 1:
            raise ConfigError("pair potentials are one-dimensional")
        k = len(alphabet)
        if len(body) != k or any(len(r) != k for r in body):
            raise ConfigError("pair table must be |A| x |A|")
        window = Box.interval(0, 1)
        table = {(a, b): float(body[a][b]) for a in range(k) for b in range(k)}
        return PotentialSource(LocalPotential(alphabet, window, table), pair=tuple(tuple(float(v) for v in r) for r in body))
    if kind == "local":
        raw_pts = [_point(p, d) for p in body["window"]]
        window = Box.of(raw_pts, dim=d)
        if len(window) != len(raw_pts):
            raise ConfigError("window points must be distinct")
        # pattern rows follow the listed window order
        order = [raw_pts.index(p) for p in window.points]
        table = _table(alphabet, len(window), body.get("values"), body.get("default", 0.0), order)
        return PotentialSource(LocalPotential(alphabet, window, table))
    if kind == "interaction":
        terms = []
        for term in body.get("terms") or []:
            pts = [_point(p, d) for p in term["shape"]]
            shape = Box.of(pts, dim=d)
            if list(shape.points) != pts:
                raise ConfigError("interaction shapes must list points in sorted order")
            terms.append((shape, _table(alphabet, len(shape), term.get("values"), term.get("default", 0.0))))
        Phi = InteractionPotential.of(alphabet, terms)
        return PotentialSource(a_phi(Phi, d), Phi)
    raise ConfigError(f"unknown potential kind {kind!r}")


def builtin_potential(name: str, spec: SubshiftSpec) -> PotentialSource | None:
    """zero, ising:J,h, site:<sym>=<value>,..."""
    head, _, rest = name.partition(":")
    if head == "zero" and not rest:
        return PotentialSource(LocalPotential.constant(spec.alphabet, 0.0, spec.dimension))
    if head == "ising":
        J, _, h = rest.partition(",")
        return potential_from_dict({"ising": {"J": float(J or 0), "h": float(h or 0)}}, spec)
    if head == "site" and rest:
        weights = {}
        for item in rest.split(","):
            s, _, v = item.rpartition("=")
            weights[s] = float(v)
        return potential_from_dict({"site": weights}, spec)
    return None


def load_potential(source: str | None, spec: SubshiftSpec) -> PotentialSource:
    if source is None:
        source = "zero"
    if not os.path.exists(source):
        try:
            pot = builtin_potential(source, spec)
        except (ValueError, KeyError):
            pot = None
        if pot is None:
            raise ConfigError(f"no potential file or builtin named {source!r}")
        return pot
    return potential_from_dict(_load(source), spec)


def parse_volume(text: str, d: int) -> Box:
    """``box:N`` (centered Lambda_N), ``a..b`` (interval, or cube for d >= 2)
    or explicit points ``p;q;...`` with comma-separated coordinates."""
    text = text.strip()
    try:
        if text.startswith("box:"):
            return centered_box(int(text[4:]), d)
        if ".." in text:
            a, b = (int(s) for s in text.split(".."))
            return Box.interval(a, b) if d == 1 else Box.cube(a, b, d)
        pts = [tuple(int(c) for c in item.split(",")) for item in text.split(";") if item]
        return Box.of(pts, dim=d)
    except ValueError as exc:
        raise ConfigError(f"bad volume {text!r}: {exc}") from None


def parse_boundary(text: str | None, spec: SubshiftSpec) -> FramedConfiguration:
    """``TILE[;POINT=SYM]...``: TILE is a symbol or '/'-separated 1D period,
    ``default`` for the spec's default background; POINT has comma-separated coordinates."""
    if text is None:
        return FramedConfiguration.of(spec)
    head, *overrides = text.split(";")
    d = spec.dimension
    if head in ("", "default"):
        bg = spec.default_background
    else:
        syms = head.split("/")
        bg = background_from(syms if len(syms) > 1 else syms[0], spec.alphabet, d)
        try:
            spec.check_background(bg)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    mapping = {}
    for item in overrides:
        if not item:
            continue
        pt, _, sym = item.rpartition("=")
        try:
            p = tuple(int(c) for c in pt.split(","))
        except ValueError:
            raise ConfigError(f"bad boundary point {pt!r}") from None
        if len(p) != d:
            raise ConfigError(f"boundary point {pt!r} must have {d} coordinates")
        mapping[p] = _symbol(spec.alphabet, sym)
    pattern = Pattern.from_dict(mapping, dim=d) if mapping else Pattern.empty(d)
    return FramedConfiguration(pattern, bg)
