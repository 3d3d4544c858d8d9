"""Command line front end: ``steady``, ``sample`` and ``characteristic``.

Configs are flat ``key = value`` files; ``--set key=value`` overrides a
single entry and ``--seed``, ``--out``, ``--strict``, ``--threads``
override theirs. Every CSV starts with a ``#`` block echoing the resolved
config so the file says how it was made.
"""
import argparse
import configparser
import io
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import lindblad, thermo
from .baths import Bath, DomainError, WeakCouplingViolation
from .models import Design, FridgeSpec, InvalidSpec, solve_fridge
from .numerics import NumericsError
from .optimize import SAMPLING, performance_characteristic, survey

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    pass


def _floats(text):
    return tuple(float(v) for v in text.replace(",", " ").split())


def _ints(text):
    return tuple(int(v) for v in text.replace(",", " ").split())


def _bool(text):
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass
class RunConfig:
    design: str = "three_level"
    t_w: float = 170.0
    t_h: float = 80.0
    t_c: float = 30.0
    omega_h: float = 50.0
    omega_c: float = 6.0
    g: float = 0.0
    d_w: int = 3
    d_h: int = 3
    d_c: int = 3
    gamma0: float = 1e-3
    squeezing: float = 0.0
    r_list: tuple = (0.0, 0.5, 1.0, 1.5, 2.0)
    dims: tuple = (1, 2, 3)
    samples: int = 1000
    seed: int = 0
    grid: int = 64
    n_points: int = 400
    out: str = "-"
    strict: bool = False
    threads: int = 1

    def echo(self):
        """Header lines; where the file goes and how many workers made it are left out."""
        lines = []
        for f in fields(self):
            if f.name in ("out", "threads"):
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(_fmt(x) if isinstance(x, float) else str(x) for x in v)
            elif isinstance(v, float):
                v = _fmt(v)
            lines.append(f"# {f.name}={v}")
        return lines


_PARSERS = {float: float, int: int, bool: _bool, str: str}
_TUPLES = {"r_list": _floats, "dims": _ints}


def _convert(name, text):
    if name in _TUPLES:
        return _TUPLES[name](text)
    kind = type(getattr(RunConfig(), name))
    return _PARSERS[kind](text.strip())


def load_config(path=None, overrides=()):
    """RunConfig from an optional ``key = value`` file and ``key=value`` overrides."""
    raw = {}
    if path is not None:
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_string("[run]\n" + fh.read(), source=str(path))
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        raw.update(parser["run"])
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"override {item!r} is not key=value")
        raw[key.strip()] = value
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for key, text in raw.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            values[key] = _convert(key, text)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}") from exc
    cfg = RunConfig(**values)
    try:
        Design(cfg.design)
    except ValueError as exc:
        raise ConfigError(f"unknown design {cfg.design!r}") from exc
    if cfg.samples < 1 or cfg.grid < 3 or cfg.n_points < 3 or cfg.threads < 1:
        raise ConfigError("samples, threads must be >= 1 and grid, n_points >= 3")
    return cfg


def _fmt(x):
    return format(float(x), ".12g")


def _baths(cfg, r=None):
    r = cfg.squeezing if r is None else r
    return {
        "work": Bath("work", cfg.t_w, cfg.d_w, cfg.gamma0, r, cfg.strict),
        "hot": Bath("hot", cfg.t_h, cfg.d_h, cfg.gamma0, 0.0, cfg.strict),
        "cold": Bath("cold", cfg.t_c, cfg.d_c, cfg.gamma0, 0.0, cfg.strict),
    }


def _temps(cfg):
    return {"work": cfg.t_w, "hot": cfg.t_h, "cold": cfg.t_c}


def cmd_steady(cfg):
    spec = FridgeSpec(cfg.design, cfg.omega_c, cfg.omega_h, cfg.g)
    sol = solve_fridge(spec, _baths(cfg))
    liouv = sol.liouvillian
    rep = thermo.report(
        sol.currents,
        _temps(cfg),
        cfg.squeezing,
        spec.omega_w,
        scale=lindblad.current_scale(liouv),
        strict=cfg.strict,
    )
    rows = [("mode", rep.mode)]
    rows += [(f"q_{k}", _fmt(v)) for k, v in rep.currents.items()]
    rows += [
        ("efficiency", _fmt(rep.efficiency)),
        ("entropy_production", _fmt(rep.entropy_production)),
        ("first_law_residual", _fmt(rep.first_law_residual)),
        ("steady_residual", _fmt(lindblad.steady_residual(liouv, sol.rho))),
        ("t_work", _fmt(rep.t_work)),
    ]
    n = liouv.dim
    for i in range(n):
        for j in range(n):
            z = sol.rho[i, j]
            # signed zeros would make equal runs print differently
            rows.append((f"rho_{i}_{j}", f"{_fmt(z.real + 0.0)} {_fmt(z.imag + 0.0)}"))
    body = ["quantity,value"] + [f"{k},{v}" for k, v in rows]
    return cfg.echo() + body


SAMPLE_COLUMNS = (
    "index,design,d_c,t_w,t_h,t_c,omega_h,g,omega_c_star,omega_w_star,q_c_star,eps_star,eps_carnot,ratio,no_cooling"
)


def cmd_sample(cfg):
    lines = cfg.echo() + [f"# sampling.{k}={v}" for k, v in SAMPLING.items()] + [SAMPLE_COLUMNS]
    footer = []
    for d in cfg.dims:
        s = survey(cfg.design, d, cfg.samples, cfg.seed, grid=cfg.grid, threads=cfg.threads, strict=cfg.strict)
        p, o = s.params, s.optimum
        for i in range(cfg.samples):
            cool = bool(o.cooling[i])
            star = (o.omega_c[i], o.omega_w[i], o.cooling_power[i], o.efficiency[i], o.eps_carnot[i], o.ratio[i])
            star = [_fmt(v) if cool else "nan" for v in star]
            star[4] = _fmt(o.eps_carnot[i])
            cols = [str(i), s.design.value, str(d)]
            cols += [_fmt(p[k][i]) for k in ("t_w", "t_h", "t_c", "omega_h", "g")]
            lines.append(",".join(cols + star + [str(int(not cool))]))
        n_cool = int(np.sum(o.cooling))
        footer.append(
            f"# summary d_c={d} max_ratio={_fmt(s.max_ratio())} bound={_fmt(d / (d + 1))} "
            f"cooling={n_cool} no_cooling={cfg.samples - n_cool}"
        )
    return lines + footer


def cmd_characteristic(cfg):
    curves = performance_characteristic(cfg.design, _baths(cfg, 0.0), cfg.omega_h, cfg.r_list, cfg.n_points, cfg.g)
    lines = cfg.echo() + ["r,omega_c,efficiency,q_c"]
    footer = []
    for c in curves:
        lines.append(f"# block r={_fmt(c.squeezing)}")
        for wc, e, q in zip(c.omega_c, c.efficiency, c.cooling_power):
            lines.append(f"{_fmt(c.squeezing)},{_fmt(wc)},{_fmt(e)},{_fmt(q)}")
        e_peak, q_peak = c.peak
        footer.append(
            f"# summary r={_fmt(c.squeezing)} max_q_c={_fmt(q_peak)} eps_star={_fmt(e_peak)} "
            f"max_eps={_fmt(np.max(c.efficiency))}"
        )
    return lines + footer


COMMANDS = {"steady": cmd_steady, "sample": cmd_sample, "characteristic": cmd_characteristic}


def build_parser():
    ap = argparse.ArgumentParser(prog="qfridge", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="key=value config file")
    ap.add_argument("--seed", type=int, help="master seed (sample)")
    ap.add_argument("--out", help="output path, '-' for stdout")
    ap.add_argument("--strict", action="store_true", default=None, help="enforce weak coupling and both laws")
    ap.add_argument("--threads", type=int, help="worker processes for sample")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one config entry")
    return ap


def _write(lines, out):
    text = "\n".join(lines) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with io.open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    overrides = list(args.set)
    for name in ("seed", "out", "threads"):
        if getattr(args, name) is not None:
            overrides.append(f"{name}={getattr(args, name)}")
    if args.strict:
        overrides.append("strict=true")
    try:
        cfg = load_config(args.config, overrides)
        lines = COMMANDS[args.command](cfg)
    except (ConfigError, InvalidSpec, DomainError, WeakCouplingViolation) as exc:
        print(f"qfridge: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (lindblad.SolverError, NumericsError, thermo.LawViolation, np.linalg.LinAlgError) as exc:
        print(f"qfridge: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        _write(lines, cfg.out)
    except OSError as exc:
        print(f"qfridge: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
