"""``quadlie`` command line: probe, sweep, decompose, validate.

Settings come from built-in defaults, then an optional flat ``key = value``
config file, then command-line flags. ``--dump-config`` writes the
resolved settings in the config-file format.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from typing import Sequence

import numpy as np

from . import disentangle as dis
from . import smallmat
from .errors import CapacityError, DegeneracyError, ModelError, SingularityError
from .models import (
    Model, ModelSpec, frequency_converter, parametric_amplifier, raman, reduce, su3_model,
)
from .transition import transition
from .validation import ValidationConfig, criterion_names, run_all

EXIT_OK, EXIT_VALIDATION, EXIT_INPUT, EXIT_IO, EXIT_SINGULAR = 0, 1, 2, 3, 4

SUBCOMMANDS = ("probe", "sweep", "decompose", "validate")

DEFAULT_STATES = {
    Model.FC: ((1, 0), (0, 1)),
    Model.PA: ((0, 0), (1, 1)),
    Model.RAMAN: ((0, 0, 0), (1, 1, 0)),
    Model.SU3: ((1, 0, 0), (0, 1, 0)),
}


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str = "probe"
    model: str = "fc"
    k: float = 1.0
    delta: float = 0.0
    gs: float = 0.6
    ga: float = 0.4
    ks: float = 0.3
    ka: float = 0.1
    g1: float = 1.0
    g2: float = 0.5
    g3: float = 0.3
    initial: tuple[int, ...] | None = None
    final: tuple[int, ...] | None = None
    t: float = 1.0
    t0: float = 0.0
    t1: float = 5.0
    steps: int = 20
    nmax: int | None = None
    dt: float | None = None
    out: str | None = None

    def spec(self) -> ModelSpec:
        m = Model(self.model)
        if m is Model.FC:
            return frequency_converter(self.k, self.delta)
        if m is Model.PA:
            return parametric_amplifier(self.k, self.delta)
        if m is Model.RAMAN:
            return raman(self.gs, self.ga, self.ks, self.ka)
        return su3_model(self.g1, self.g2, self.g3)

    def states(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        ini, fin = DEFAULT_STATES[Model(self.model)]
        return self.initial or ini, self.final or fin

    def validate(self) -> "RunConfig":
        if self.subcommand not in SUBCOMMANDS:
            raise InputError(f"unknown subcommand {self.subcommand!r}")
        try:
            m = Model(self.model)
        except ValueError:
            raise InputError(f"unknown model {self.model!r}") from None
        arity = 2 if m in (Model.FC, Model.PA) else 3
        for name in ("initial", "final"):
            st = getattr(self, name)
            if st is not None and (len(st) != arity or min(st) < 0):
                raise InputError(f"--{name} needs {arity} non-negative occupations for {m.value}")
        if not self.t1 > self.t0:
            raise InputError("t1 must exceed t0")
        if self.steps < 1:
            raise InputError("steps must be at least 1")
        if self.nmax is not None and self.nmax < 1:
            raise InputError("nmax must be at least 1")
        if self.dt is not None and self.dt <= 0:
            raise InputError("dt must be positive")
        values = [getattr(self, f.name) for f in fields(self)
                  if f.name not in ("subcommand", "model", "initial", "final", "out")]
        if any(isinstance(v, float) and not math.isfinite(v) for v in values):
            raise InputError("parameters must be finite")
        return self


_FIELDS = {f.name: f for f in fields(RunConfig)}
_FLOATS = {"k", "delta", "gs", "ga", "ks", "ka", "g1", "g2", "g3", "t", "t0", "t1", "dt"}
_INTS = {"steps", "nmax"}


def parse_state(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"occupations must be comma-separated integers, got {text!r}") from None


def _coerce(key: str, value: str):
    value = value.strip()
    if key not in _FIELDS:
        raise InputError(f"unknown config key {key!r}")
    if value == "" or value == "none":
        if _FIELDS[key].default is None:
            return None
        raise InputError(f"config key {key!r} needs a value")
    try:
        if key in _FLOATS:
            return float(value)
        if key in _INTS:
            return int(value)
    except ValueError:
        raise InputError(f"bad value for {key}: {value!r}") from None
    if key in ("initial", "final"):
        return parse_state(value)
    return value


def parse_config_text(text: str) -> dict:
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"config line {n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = _coerce(key, value)
    return out


def _fmt_value(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def dump_config(cfg: RunConfig) -> str:
    return "".join(f"{k} = {_fmt_value(v)}\n" for k, v in asdict(cfg).items())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadlie", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", nargs="?", choices=SUBCOMMANDS)
    p.add_argument("--model", choices=[m.value for m in Model])
    for name in ("k", "delta", "gs", "ga", "ks", "ka", "g1", "g2", "g3", "t", "t0", "t1", "dt"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("--initial", help="occupations, e.g. 1,0 or 0,0,0")
    p.add_argument("--final")
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--config", help="flat key = value settings file")
    p.add_argument("--dump-config", action="store_true", help="print resolved settings and exit")
    p.add_argument("--list", action="store_true", help="validate: list criteria without running")
    return p


def resolve(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise OSError(f"cannot read config: {exc}") from exc
    for key in _FIELDS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = parse_state(v) if key in ("initial", "final") else v
    return replace(RunConfig(), **values).validate()


# output ----------------------------------------------------------------------

def fmt(x) -> str:
    if x is None:
        return "nan"
    x = float(x)
    if x == 0:
        x = 0.0  # no negative zero in output
    return format(x, ".17g")


def _csv(rows: Sequence[Sequence[str]]) -> str:
    return "".join(",".join(r) + "\n" for r in rows)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _row(cfg: RunConfig, spec: ModelSpec, t: float):
    ini, fin = cfg.states()
    r = transition(spec, ini, fin, t, n_max=cfg.nmax, dt=cfg.dt)
    return r


def probe(cfg: RunConfig) -> str:
    r = _row(cfg, cfg.spec(), cfg.t)
    header = ["t", "prob_closed", "prob_oracle", "abs_err", "prob_closed_printed", "note"]
    row = [fmt(r.t), fmt(r.prob_closed), fmt(r.prob_oracle), fmt(r.discrepancy),
           fmt(r.prob_closed_printed), r.note.replace(",", ";")]
    return _csv([header, row])


def sweep(cfg: RunConfig) -> str:
    spec = cfg.spec()
    grid = np.linspace(cfg.t0, cfg.t1, cfg.steps + 1)
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda t: _row(cfg, spec, float(t)), grid))
    rows = [["t", "prob_closed", "prob_oracle", "abs_err"]]
    rows += [[fmt(r.t), fmt(r.prob_closed), fmt(r.prob_oracle), fmt(r.discrepancy)] for r in results]
    return _csv(rows)


def decompose(cfg: RunConfig) -> str:
    form = reduce(cfg.spec())
    factored = dis.sweep(form, [cfg.t])[0]
    residual = dis.verify_factorization(factored, smallmat.expm(form.exponent(cfg.t), method="series"))
    rows = [["generator", "re", "im"]]
    rows += [[name, fmt(c.real), fmt(c.imag)] for name, c in factored.factors]
    rows.append(["residual", fmt(residual), "0"])
    return _csv(rows)


def validate(cfg: RunConfig, list_only: bool = False) -> tuple[str, int]:
    if list_only:
        return "".join(n + "\n" for n in criterion_names()), EXIT_OK
    results = run_all(ValidationConfig(n_max=cfg.nmax))
    text = "".join(r.line() + "\n" for r in results)
    passed = sum(r.passed for r in results)
    text += f"{passed}/{len(results)} criteria passed\n"
    return text, EXIT_OK if passed == len(results) else EXIT_VALIDATION


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        if args.subcommand:
            cfg = replace(cfg, subcommand=args.subcommand)
    except InputError as exc:
        print(f"quadlie: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"quadlie: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if args.dump_config:
            text, code = dump_config(cfg), EXIT_OK
        elif cfg.subcommand == "probe":
            text, code = probe(cfg), EXIT_OK
        elif cfg.subcommand == "sweep":
            text, code = sweep(cfg), EXIT_OK
        elif cfg.subcommand == "decompose":
            text, code = decompose(cfg), EXIT_OK
        else:
            text, code = validate(cfg, args.list)
    except (SingularityError, DegeneracyError) as exc:
        print(f"quadlie: numerical singularity: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (ModelError, CapacityError, IndexError, ValueError) as exc:
        print(f"quadlie: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        _emit(text, cfg.out)
    except OSError as exc:
        print(f"quadlie: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
