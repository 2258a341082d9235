"""Command-line front end.

Every subcommand prints a deterministic report: tables as tab-separated rows
under a ``#`` header, records as ``key=value`` lines, or JSON lines with
``--format=json``. Floats carry 15 significant digits. Failures print one line
``error: kind=<kind> message=<text>`` to stderr and exit with

    2 parse error, 3 cap exceeded, 4 empty subshift, 5 incompatible arguments.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Sequence

import numpy as np

from . import entropy as ent
from . import equilibrium1d as eq
from . import gibbs
from . import homoclinic as hc
from .config import ConfigError, PotentialSource, load_potential, load_spec, parse_boundary, parse_volume
from .errors import CapExceeded, EmptySubshift, IncompatibleArguments, ReducibleMatrix
from .lattice import Box, centered_box
from .potentials import variation_profile
from .shiftspace import FramedConfiguration, SubshiftSpec, default_cap, enumerate_patterns

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_EMPTY = 4
EXIT_INCOMPATIBLE = 5


def fmt(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.15g" % v
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(fmt(u) for u in v) + "]"
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return float("%.15g" % v) if math.isfinite(v) else str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(u) for u in v]
    return v


class Emitter:
    def __init__(self, out, fmt_name: str):
        self.out = out
        self.json = fmt_name == "json"

    def table(self, name: str, columns: Sequence[str], rows) -> None:
        if self.json:
            for row in rows:
                rec = {"table": name}
                rec.update({c: _jsonable(v) for c, v in zip(columns, row)})
                self.out.write(json.dumps(rec, sort_keys=False) + "\n")
            return
        self.out.write("# " + "\t".join(columns) + "\n")
        for row in rows:
            self.out.write("\t".join(fmt(v) for v in row) + "\n")

    def record(self, name: str, **fields) -> None:
        if self.json:
            rec = {"record": name}
            rec.update({k: _jsonable(v) for k, v in fields.items()})
            self.out.write(json.dumps(rec) + "\n")
            return
        self.out.write(name + " " + " ".join(f"{k}={fmt(v)}" for k, v in fields.items()) + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# -- shared loading -------------------------------------------------------


def _spec(args) -> SubshiftSpec:
    if not args.spec:
        raise ConfigError("--spec is required")
    return load_spec(args.spec)


def _potential(args, spec) -> PotentialSource:
    return load_potential(args.potential, spec)


def _volume(text: str | None, spec: SubshiftSpec, flag: str = "--volume") -> Box:
    if not text:
        raise ConfigError(f"{flag} is required")
    return parse_volume(text, spec.dimension)


def _pstr(spec: SubshiftSpec, values) -> str:
    return spec.alphabet.render(values)


def _measure(args, spec, pot: PotentialSource, outer: Box, x: FramedConfiguration):
    kind, _, rest = (args.measure or "equilibrium").partition(":")
    if kind == "equilibrium":
        return eq.equilibrium_markov(eq.transfer_matrix(spec, _pair(spec, pot)))
    if kind == "bernoulli":
        weights = [float(v) for v in rest.split(",")]
        return gibbs.Bernoulli(spec.alphabet, weights, spec.dimension)
    if kind == "gibbs":
        box = parse_volume(rest, spec.dimension) if rest else outer
        if pot.interaction is not None:
            return gibbs.FiniteVolumeGibbs.from_interaction(pot.interaction, spec, box, x)
        return gibbs.FiniteVolumeGibbs.from_potential(pot.local, spec, box, x)
    raise ConfigError(f"unknown measure {args.measure!r}")


def _pair(spec, pot: PotentialSource) -> np.ndarray:
    if pot.pair is not None:
        return np.array(pot.pair)
    return eq.pair_potential(pot.local, spec)


# -- subcommands ----------------------------------------------------------


def cmd_patterns(args, out: Emitter) -> None:
    spec = _spec(args)
    box = _volume(args.volume, spec)
    pats = enumerate_patterns(spec, box, args.cap)
    out.table("patterns", ["pattern"], [(_pstr(spec, p.values),) for p in pats])


def cmd_variation(args, out: Emitter) -> None:
    spec = _spec(args)
    f = _potential(args, spec).local
    prof = variation_profile(f, spec, args.cap)
    n_max = max(args.n_max or 0, len(prof.deltas) + 1)
    out.table("variation", ["n", "delta"], [(n, prof.delta(n)) for n in range(1, n_max + 1)])
    out.record("norms", sup_norm=prof.sup_norm, svd_norm=prof.svd_norm)


def cmd_cocycle(args, out: Emitter) -> None:
    spec = _spec(args)
    f = _potential(args, spec).local
    x = parse_boundary(args.boundary, spec)
    y = parse_boundary(args.other, spec)
    ctx = gibbs.CocycleContext(f, spec)
    value = gibbs.cocycle(ctx, x, y)
    m = max(gibbs.homoclinic_radius(x, y), 1)
    bound = gibbs.cocycle_tail_bound(variation_profile(f, spec, args.cap), m)
    out.record("cocycle", value=value, m=m, tail_bound=bound)


def cmd_kernel(args, out: Emitter) -> None:
    spec = _spec(args)
    pot = _potential(args, spec)
    lam = _volume(args.volume, spec)
    x = parse_boundary(args.boundary, spec)
    if args.boltzmann:
        if pot.interaction is None:
            raise IncompatibleArguments("--boltzmann needs an interaction potential")
        table = gibbs.kernel_from_interaction(pot.interaction, spec, lam, x, args.cap)
    else:
        table = gibbs.kernel(pot.local, spec, lam, x, args.cap)
    out.table("kernel", ["pattern", "log_weight", "probability"], table.rows(spec.alphabet))
    out.record("partition", log_z=table.log_partition, size=len(table))
    if args.limit_check:
        n = args.limit_check
        err = gibbs.limit_check(pot.local, spec, lam, x, n, args.cap)
        out.record("limit_check", n=n, max_error=err, ok=err <= args.tol)


def cmd_consistency(args, out: Emitter) -> None:
    spec = _spec(args)
    f = _potential(args, spec).local
    lam = _volume(args.volume, spec)
    delta = _volume(args.outer, spec, "--outer")
    x = parse_boundary(args.boundary, spec)
    r = gibbs.consistency_residual(f, spec, lam, delta, x, args.cap)
    out.record("consistency", residual=r, ok=r <= args.tol)


def cmd_dlr(args, out: Emitter) -> None:
    spec = _spec(args)
    pot = _potential(args, spec)
    lam = _volume(args.volume, spec)
    delta = _volume(args.outer, spec, "--outer")
    x = parse_boundary(args.boundary, spec)
    mu = _measure(args, spec, pot, delta, x)
    rep = gibbs.dlr_residual(mu, pot.local, spec, lam, delta, x.background, args.cap)
    w, z = rep.argmax if rep.argmax else (None, None)
    out.record(
        "dlr",
        max_residual=rep.max_residual,
        argmax_interior=_pstr(spec, w.values) if w is not None else "-",
        argmax_boundary=_pstr(spec, z.values) if z is not None else "-",
        skipped=rep.skipped,
        checked=rep.checked,
        ok=rep.max_residual <= args.tol,
    )


def _read_space(path: str):
    """Whitespace-separated rows: outcome weight label_1 ... label_k."""
    outcomes, weights, labels = [], [], []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) < 3:
                    raise ConfigError("space rows need outcome, weight and at least one label")
                outcomes.append(parts[0])
                weights.append(float(parts[1]))
                labels.append(parts[2:])
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise ConfigError(f"bad space row: {exc}") from None
    k = {len(l) for l in labels}
    if len(k) != 1:
        raise ConfigError("every space row needs the same number of labels")
    space = ent.WeightedSpace(tuple(outcomes), np.array(weights))
    parts = [ent.Partition(tuple(l[j] for l in labels)) for j in range(k.pop())]
    return space, parts


def cmd_entropy(args, out: Emitter) -> None:
    scale = 1.0 / math.log(2) if args.bits else 1.0
    unit = "bits" if args.bits else "nats"
    if args.space:
        space, parts = _read_space(args.space)
        rows = [(j, ent.entropy(space, p) * scale) for j, p in enumerate(parts)]
        out.table("entropy", ["partition", f"H_{unit}"], rows)
        if len(parts) >= 2:
            a, b = parts[0], parts[1]
            out.record(
                "pair",
                conditional=ent.conditional_entropy(space, a, b) * scale,
                joint=ent.entropy(space, ent.refine(a, b)) * scale,
                chain_rule_residual=ent.chain_rule_residual(space, a, b) * scale,
                finer=ent.is_finer(space, b, a),
            )
        return
    spec = _spec(args)
    pot = _potential(args, spec)
    n_max = args.n_max or 4
    outer = centered_box(n_max, spec.dimension)
    mu = _measure(args, spec, pot, outer, parse_boundary(args.boundary, spec))
    rates = ent.block_entropy_rates(mu, spec, n_max, args.cap)
    out.table("block_entropy", ["n", f"rate_{unit}"], [(n, r * scale) for n, r in enumerate(rates, 1)])


def cmd_pressure(args, out: Emitter) -> None:
    spec = _spec(args)
    M = eq.transfer_matrix(spec, _pair(spec, _potential(args, spec)))
    data = eq.perron(M)
    out.record("pressure", lam=data.lam, log_lam=data.log_lam, iterations=data.iterations)


def cmd_equilibrium(args, out: Emitter) -> None:
    spec = _spec(args)
    g = _pair(spec, _potential(args, spec))
    M = eq.transfer_matrix(spec, g)
    data = eq.perron(M)
    m = eq.equilibrium_markov(M, data)
    gap = eq.variational_gap(m, g, data.log_lam)
    out.record("pressure", lam=data.lam, log_lam=data.log_lam, iterations=data.iterations)
    out.record("stationary", pi=[float(v) for v in m.pi])
    out.table(
        "transition",
        ["from"] + list(spec.alphabet.symbols),
        [(s,) + tuple(float(v) for v in row) for s, row in zip(spec.alphabet.symbols, m.P)],
    )
    out.record("variational", entropy=eq.markov_entropy(m), gap=gap)


def _parse_permutation(text: str, domain: Sequence[str] | None):
    """Cycle notation ``(a b c)(d e)`` or an image list ``2,0,1``."""
    text = text.strip()
    if text.startswith("("):
        cycles = []
        for chunk in text.split(")"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if not chunk.startswith("("):
                raise ConfigError(f"bad cycle notation near {chunk!r}")
            cycles.append(tuple(chunk[1:].replace(",", " ").split()))
        if domain is None:
            elems = sorted({e for c in cycles for e in c}, key=_natural)
            domain = elems
        try:
            return hc.FinitePermutation.from_cycles(domain, cycles)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    try:
        images = [int(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad permutation {text!r}") from None
    n = len(images)
    if sorted(images) != list(range(n)):
        raise ConfigError("image list must be a rearrangement of 0..n-1")
    if domain is None:
        return hc.FinitePermutation(tuple(range(n)), tuple(images))
    if len(domain) != n:
        raise ConfigError("image list length must match the number of patterns")
    return hc.FinitePermutation.from_mapping({domain[t]: domain[images[t]] for t in range(n)})


def _natural(s: str):
    try:
        return (0, int(s), s)
    except ValueError:
        return (1, 0, s)


def cmd_decompose(args, out: Emitter) -> None:
    if not args.perm:
        raise ConfigError("--perm is required")
    if not args.spec:
        pi = _parse_permutation(args.perm, None)
        seq = hc.orbit_decompose(pi)
        out.table("transpositions", ["a", "b"], seq)
        ok = hc.compose_transpositions(pi.domain, seq) == pi
        out.record("decomposition", count=len(seq), roundtrip=ok)
        return
    spec = _spec(args)
    classing = hc.classify(spec, args.radius, cap=args.cap)
    names = [_pstr(spec, v) for v in classing.patterns]
    by_name = dict(zip(names, classing.patterns))
    pi_names = _parse_permutation(args.perm, names)
    pi = hc.FinitePermutation.from_mapping({by_name[a]: by_name[pi_names(a)] for a in names})
    seq = hc.decompose_block_automorphism(pi, classing)
    out.table("involutions", ["a", "b"], [(_pstr(spec, xi.a), _pstr(spec, xi.b)) for xi in seq])
    ok = hc.compose_involutions_on_patterns(seq, classing.patterns) == pi
    out.record("decomposition", count=len(seq), roundtrip=ok)


def cmd_compat(args, out: Emitter) -> None:
    spec = _spec(args)
    classing = hc.classify(spec, args.radius, cap=args.cap)
    rows = [(t, _pstr(spec, v)) for t, cls in enumerate(classing.classes) for v in cls]
    out.table("classes", ["class", "pattern"], rows)
    out.record("classing", classes=len(classing.classes), patterns=len(classing.patterns), approximate=classing.approximate)


COMMANDS = {
    "patterns": cmd_patterns,
    "variation": cmd_variation,
    "cocycle": cmd_cocycle,
    "kernel": cmd_kernel,
    "consistency": cmd_consistency,
    "dlr-check": cmd_dlr,
    "entropy": cmd_entropy,
    "pressure": cmd_pressure,
    "equilibrium": cmd_equilibrium,
    "decompose": cmd_decompose,
    "compat": cmd_compat,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--spec", help="spec YAML file or builtin (golden_mean, ising[:d], full:a,b[:d], even:n)")
    common.add_argument("--potential", help="potential YAML file or builtin (zero, ising:J,h, site:s=v,...)")
    common.add_argument("--volume", help="box:N, a..b, or points p;q;... (coords comma-separated)")
    common.add_argument("--outer", help="outer volume, same syntax as --volume")
    common.add_argument("--boundary", help="TILE[;POINT=SYM]..., TILE a symbol or a/b/... period")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--cap", type=int, default=None, help="pattern enumeration cap (default $GIBBSWORKS_CAP)")
    common.add_argument("--format", choices=["text", "json"], default="text")

    parser = _Parser(prog="gibbsworks", description="Finite-volume Gibbs computations on subshifts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "variation":
            p.add_argument("--n-max", type=int, default=None)
        if name == "cocycle":
            p.add_argument("--other", required=True, help="second configuration, boundary syntax")
        if name == "kernel":
            p.add_argument("--boltzmann", action="store_true", help="use exp(-H) of the interaction")
            p.add_argument("--limit-check", type=int, default=None, metavar="N")
        if name in ("dlr-check", "entropy"):
            p.add_argument("--measure", help="equilibrium | bernoulli:p1,p2,... | gibbs[:volume]")
        if name == "entropy":
            p.add_argument("--space", help="weighted-space file: outcome weight label...")
            p.add_argument("--n-max", type=int, default=None)
            p.add_argument("--bits", action="store_true")
        if name in ("decompose", "compat"):
            p.add_argument("--radius", type=int, default=1, help="N of the box B_N")
        if name == "decompose":
            p.add_argument("--perm", help="cycles (a b)(c d) or image list 1,0,2")
    return parser


def _fail(kind: str, message: str, code: int, err) -> int:
    err.write(f"error: kind={kind} message={' '.join(str(message).split())}\n")
    return code


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        if args.cap is not None and args.cap <= 0:
            raise ConfigError("--cap must be positive")
        if args.cap is None:
            args.cap = default_cap()
        COMMANDS[args.command](args, Emitter(stdout, args.format))
    except CapExceeded as exc:
        return _fail("cap_exceeded", exc, EXIT_CAP, stderr)
    except EmptySubshift as exc:
        return _fail("empty_subshift", exc, EXIT_EMPTY, stderr)
    except (IncompatibleArguments, ReducibleMatrix) as exc:
        return _fail("incompatible_arguments", exc, EXIT_INCOMPATIBLE, stderr)
    except (ConfigError, ValueError, KeyError) as exc:
        return _fail("parse_error", exc, EXIT_PARSE, stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
