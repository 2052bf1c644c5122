"""Command-line front end: ``adiabat {simulate,diagnose,bound,sweep} --config PATH``.

The config is a JSON object::

    {
      "hbar": 1.0,
      "hamiltonian": {"family": "rotating", "omega0": 1.0, "omega": 0.01},
      "schedule": {"kind": "unscaled", "t_final": 50.0, "steps": 50000},
      "initial_state": "eigenstate:1",
      "gap_min": 1e-8,
      "output": "out.csv"
    }

Complex numbers are ``[re, im]`` pairs (plain reals are accepted too) and
matrices are row-major nested lists of them. Other families are
``{"family": "linear_interp", "h0": M, "h1": M}`` and
``{"family": "tabulated", "s_grid": [...], "h_samples": [M, ...]}``. A scaled
schedule is ``{"kind": "scaled", "T": 100.0, "steps": 20000}``. ``steps`` may
be omitted in either schedule.

Exit codes: 0 success, 2 bad config or arguments, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import qaa, scaling
from .errors import AdiabatError, SpecError
from .evolve import build_aeo, coefficients, default_steps, error_norm, propagate_deo
from .model import HamiltonianSpec, LinearInterp, Rotating, TabulatedScaled, TimeGrid, hamiltonian_at
from .spectral import GAP_MIN, build_frame, eig2

log = logging.getLogger("adiabat")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
STATE_RENORM_TOL = 1e-6


class ConfigError(SpecError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True, eq=False)
class RunConfig:
    spec: HamiltonianSpec
    grid: TimeGrid
    initial: str | np.ndarray  # eigenstate token or explicit unit vector
    gap_min: float
    output: Path
    steps_per_unit: float | None = None
    s_points: int = scaling.DEFAULT_S_POINTS

    @property
    def initial_state(self) -> np.ndarray:
        if isinstance(self.initial, str):
            # resolved lazily so a degenerate H(0) surfaces as a numerical failure
            _, _, v1, v2 = eig2(hamiltonian_at(self.spec, 0.0), self.gap_min)
            return v1 if self.initial.endswith("1") else v2
        return self.initial


def _number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(field, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(field, "must be finite")
    return float(value)


def _positive(value, field: str) -> float:
    v = _number(value, field)
    if v <= 0:
        raise ConfigError(field, f"must be positive, got {v!r}")
    return v


def _complex(value, field: str) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(field, f"complex numbers are [re, im] pairs, got {value!r}")
        return complex(_number(value[0], field), _number(value[1], field))
    return complex(_number(value, field))


def _matrix(value, field: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in value):
        raise ConfigError(field, "expected a 2x2 row-major nested list")
    return np.array([[_complex(value[i][j], f"{field}[{i}][{j}]") for j in range(2)] for i in range(2)])


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise ConfigError(where, "expected an object")
    if key not in obj:
        raise ConfigError(f"{where}.{key}" if where else key, "missing")
    return obj[key]


def _family(raw, field: str = "hamiltonian"):
    kind = _require(raw, "family", field)
    try:
        if kind == "rotating":
            return Rotating(
                _positive(_require(raw, "omega0", field), f"{field}.omega0"),
                _positive(_require(raw, "omega", field), f"{field}.omega"),
            )
        if kind == "linear_interp":
            return LinearInterp(
                _matrix(_require(raw, "h0", field), f"{field}.h0"),
                _matrix(_require(raw, "h1", field), f"{field}.h1"),
            )
        if kind == "tabulated":
            s_grid = [_number(x, f"{field}.s_grid[{i}]") for i, x in enumerate(_require(raw, "s_grid", field))]
            samples = [_matrix(m, f"{field}.h_samples[{i}]") for i, m in enumerate(_require(raw, "h_samples", field))]
            return TabulatedScaled(np.array(s_grid), np.array(samples))
    except ConfigError:
        raise
    except SpecError as exc:
        raise ConfigError(field, str(exc)) from exc
    raise ConfigError(f"{field}.family", f"unknown family {kind!r}")


def _initial_state(raw) -> str | np.ndarray:
    if isinstance(raw, str):
        if raw not in ("eigenstate:1", "eigenstate:2"):
            raise ConfigError("initial_state", f"unknown token {raw!r}")
        return raw
    if not isinstance(raw, list) or len(raw) != 2:
        raise ConfigError("initial_state", "expected a pair of complex numbers or an eigenstate token")
    psi = np.array([_complex(raw[i], f"initial_state[{i}]") for i in range(2)])
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > STATE_RENORM_TOL:
        raise ConfigError("initial_state", f"norm {norm:.17g} is not 1")
    return psi / norm


def parse_config(data: dict, base: Path | None = None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be an object")
    hbar = _positive(data.get("hbar", 1.0), "hbar")
    gap_min = _positive(data.get("gap_min", GAP_MIN), "gap_min")
    family = _family(_require(data, "hamiltonian", ""))
    fd_step = _positive(data["hamiltonian"].get("fd_step", 1e-5), "hamiltonian.fd_step")

    sched = _require(data, "schedule", "")
    kind = _require(sched, "kind", "schedule")
    if kind == "unscaled":
        T, t_final = None, _positive(_require(sched, "t_final", "schedule"), "schedule.t_final")
    elif kind == "scaled":
        T = t_final = _positive(_require(sched, "T", "schedule"), "schedule.T")
    else:
        raise ConfigError("schedule.kind", f"expected 'unscaled' or 'scaled', got {kind!r}")
    try:
        spec = HamiltonianSpec(family, hbar=hbar, T=T, fd_step=fd_step)
    except SpecError as exc:
        raise ConfigError("hamiltonian", str(exc)) from exc

    steps = sched.get("steps")
    if steps is None:
        steps = default_steps(spec, t_final)
    elif isinstance(steps, bool) or not isinstance(steps, int) or steps < 2 or steps % 2:
        raise ConfigError("schedule.steps", f"must be an even integer >= 2, got {steps!r}")
    spu = sched.get("steps_per_unit")
    if spu is not None:
        spu = _positive(spu, "schedule.steps_per_unit")
    s_points = data.get("s_points", scaling.DEFAULT_S_POINTS)
    if isinstance(s_points, bool) or not isinstance(s_points, int) or s_points < 3 or s_points % 2 == 0:
        raise ConfigError("s_points", f"must be an odd integer >= 3, got {s_points!r}")

    out = _require(data, "output", "")
    if not isinstance(out, str) or not out:
        raise ConfigError("output", "expected a file path")
    out = Path(out)
    if base is not None and not out.is_absolute():
        out = base / out
    return RunConfig(
        spec=spec,
        grid=TimeGrid(t_final, steps),
        initial=_initial_state(data.get("initial_state", "eigenstate:1")),
        gap_min=gap_min,
        output=out,
        steps_per_unit=spu,
        s_points=s_points,
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from exc
    return parse_config(data, base=path.parent)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path: Path, header: Sequence[str], columns: Sequence[np.ndarray]) -> None:
    rows = zip(*columns)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def cmd_simulate(cfg: RunConfig) -> None:
    frame = build_frame(cfg.spec, cfg.grid, cfg.gap_min)
    ud = propagate_deo(cfg.spec, cfg.grid)
    ua = build_aeo(frame)
    err = error_norm(ud, ua, cfg.initial_state).direct
    c = coefficients(ud, frame, cfg.initial_state).c
    pop = np.abs(c) ** 2
    write_csv(
        cfg.output,
        ["t", "err_norm", "c1_re", "c1_im", "c2_re", "c2_im", "pop1", "pop2"],
        [cfg.grid.points, err, c[:, 0].real, c[:, 0].imag, c[:, 1].real, c[:, 1].imag, pop[:, 0], pop[:, 1]],
    )


def cmd_diagnose(cfg: RunConfig) -> None:
    frame = build_frame(cfg.spec, cfg.grid, cfg.gap_min)
    rep = qaa.diagnose(propagate_deo(cfg.spec, cfg.grid), build_aeo(frame))
    ovl = rep.first_kind_overlap[:, 0]
    write_csv(
        cfg.output,
        ["t", "ovl1_re", "ovl1_im", "mag1", "mag2", "barA", "barB", "barC", "barSum", "xx_mag", "simplified_ratio"],
        [
            rep.times,
            ovl.real,
            ovl.imag,
            rep.second_kind_mag[:, 0],
            rep.second_kind_mag[:, 1],
            rep.bar_a,
            rep.bar_b,
            rep.bar_c,
            rep.bar_sum,
            np.abs(rep.xx_integral),
            rep.simplified_ratio,
        ],
    )


def cmd_bound(cfg: RunConfig, delta: float) -> str:
    if not cfg.spec.scaled:
        raise ConfigError("schedule.kind", "bound needs a scaled schedule")
    rep = scaling.theorem2_min_time(cfg.spec, delta, cfg.s_points, cfg.gap_min)
    prof = rep.profile
    write_csv(cfg.output, ["s", "gap", "f_abs", "bracket"], [prof.s, prof.gap, np.abs(prof.f), prof.bracket])
    lines = [
        f"delta = {_fmt(rep.delta)}",
        f"tMin = {_fmt(rep.t_min)}",
        f"errorCoeff = {_fmt(rep.error_coeff)}",
        f"boundCoeff = {_fmt(rep.bound_coeff)}",
        f"gapMin = {_fmt(rep.gap_min)}",
        f"maxDH = {_fmt(rep.max_dh)}",
        f"maxD2H = {_fmt(rep.max_d2h)}",
    ]
    return "\n".join(lines) + "\n"


def parse_T_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError("--T", f"not a comma-separated list of numbers: {text!r}") from exc
    if not values or any(not (math.isfinite(v) and v > 0) for v in values):
        raise ConfigError("--T", f"every T must be positive, got {text!r}")
    return values


def cmd_sweep(cfg: RunConfig, T_list: Sequence[float]) -> None:
    if not cfg.spec.scaled:
        raise ConfigError("schedule.kind", "sweep needs a scaled schedule")
    spu = cfg.steps_per_unit or scaling.DEFAULT_SWEEP_STEPS_PER_UNIT
    rows = scaling.sweep_error_vs_T(
        cfg.spec, T_list, cfg.initial_state, steps_per_unit=spu, s_points=cfg.s_points, gap_min=cfg.gap_min
    )
    write_csv(
        cfg.output,
        ["T", "max_err", "bound_over_T"],
        [[r.T for r in rows], [r.max_error for r in rows], [r.bound for r in rows]],
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adiabat", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("simulate", "propagate and write coefficient traces"),
        ("diagnose", "write first/second-kind conditions and bounds"),
        ("bound", "minimal running time for a target error"),
        ("sweep", "simulated error versus running time"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="JSON run configuration")
        if name == "bound":
            p.add_argument("--delta", type=float, required=True, help="target error")
        if name == "sweep":
            p.add_argument("--T", dest="T_list", required=True, help="comma-separated running times")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_config(args.config)
        if args.command == "bound" and not (math.isfinite(args.delta) and args.delta > 0):
            raise ConfigError("--delta", f"must be positive, got {args.delta!r}")
        T_list = parse_T_list(args.T_list) if args.command == "sweep" else None
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except AdiabatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "simulate":
            cmd_simulate(cfg)
        elif args.command == "diagnose":
            cmd_diagnose(cfg)
        elif args.command == "bound":
            sys.stdout.write(cmd_bound(cfg, args.delta))
        else:
            cmd_sweep(cfg, T_list)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    except AdiabatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    log.info("wrote %s", cfg.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
