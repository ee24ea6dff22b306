"""Command-line interface: scenario files, unit conversion, sweeps, searches.

Scenario files are INI text with sections [material.left], [material.right],
[geometry], [temperatures], [quadrature].  Lengths and inverse lengths are in
nm / nm^-1; temperatures are in kelvin and converted once at the boundary.
All computation happens in natural units (hbar = c = k_B = 1).

Subcommands: force, heat, sweep, find-min, find-zero, limits.
Exit codes: 0 success, 2 config error, 3 quadrature non-convergence,
4 no crossing / no interior minimum.
"""

import argparse
import concurrent.futures
import configparser
import json
import math
import sys
from dataclasses import dataclass, replace
from importlib.metadata import PackageNotFoundError, version

from .contributions import (
    Geometry,
    Scenario,
    Temperatures,
    casimir_force,
    heat_flux,
)
from .limits import (
    halfspace_bath_pressure,
    landauer_heat_halfspace,
    lifshitz_noneq_force,
    stefan_flux,
)
from .material import Material
from .quadrature import QuadratureConfig, QuadratureError

# hbar*c/k_B in nm*K: the single authority for kelvin <-> nm^-1 conversion
HBAR_C_OVER_KB_NM_K = 2.2898e6

try:
    _VERSION = version("artifact")
except PackageNotFoundError:  # pragma: no cover
    _VERSION = "unknown"


class ConfigError(ValueError):
    pass


class NoMinimumError(RuntimeError):
    pass


class NoCrossingError(RuntimeError):
    pass


def kelvin_to_natural(T):
    """Convert a temperature in kelvin to nm^-1 (natural units)."""
    if T < 0:
        raise ValueError("temperature must be >= 0 K")
    return T / HBAR_C_OVER_KB_NM_K


@dataclass(frozen=True)
class SweepSpec:
    parameter: str  # thickness_d | gap_a | T_phi_L | T_phi_R | T_B_L | T_B_R | omega_pl
    min: float
    max: float      # may be math.inf for thickness_d ("inf" token)
    points: int
    spacing: str    # linear | log

    PARAMETERS = (
        "thickness_d", "gap_a", "T_phi_L", "T_phi_R", "T_B_L", "T_B_R", "omega_pl",
    )

    def __post_init__(self):
        if self.parameter not in self.PARAMETERS:
            raise ConfigError(f"unknown sweep parameter {self.parameter!r}")
        if not self.min < self.max:
            raise ConfigError("sweep requires min < max")
        if self.points < 2:
            raise ConfigError("sweep requires points >= 2")
        if self.spacing not in ("linear", "log"):
            raise ConfigError("spacing must be linear or log")
        if self.spacing == "log" and self.min <= 0:
            raise ConfigError("log spacing requires min > 0")
        if math.isinf(self.max) and self.parameter != "thickness_d":
            raise ConfigError('"inf" upper bound only supported for thickness_d')

    def values(self):
        """Sweep grid in user units; an infinite upper bound contributes a
        final +inf entry routed to the half-space limits."""
        n = self.points
        hi = self.max
        tail = []
        if math.isinf(hi):
            # finite part spans six decades above min; the last row is the limit
            tail = [math.inf]
            n -= 1
            hi = self.min * 1e6
        if n == 1:
            vals = [self.min]
        elif self.spacing == "log":
            r = (hi / self.min) ** (1.0 / (n - 1))
            vals = [self.min * r**i for i in range(n)]
        else:
            step = (hi - self.min) / (n - 1)
            vals = [self.min + step * i for i in range(n)]
        return vals + tail


@dataclass(frozen=True)
class SweepRow:
    swept_value: float
    force_total: float
    force_ic: float
    force_bath: float
    q_total: float
    q_ic: float
    q_b: float
    q_normalized: float
    q_norm_denominator: float
    quad_error: float
    converged: bool


def _getfloat(cfg, section, key, default=None):
    try:
        if default is not None and key not in cfg[section]:
            return default
        raw = cfg[section][key].strip()
        return math.inf if raw.lower() == "inf" else float(raw)
    except KeyError as exc:
        raise ConfigError(f"missing [{section}] {key}") from exc
    except ValueError as exc:
        raise ConfigError(f"bad value for [{section}] {key}") from exc


def _material(cfg, section):
    try:
        return Material(
            omega_pl=_getfloat(cfg, section, "omega_pl"),
            omega_0=_getfloat(cfg, section, "omega_0"),
            gamma=_getfloat(cfg, section, "gamma"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_scenario(path):
    """Parse a scenario file; returns (Scenario, QuadratureConfig)."""
    cfg = configparser.ConfigParser()
    read = cfg.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    for section in ("material.left", "material.right", "geometry", "temperatures"):
        if section not in cfg:
            raise ConfigError(f"missing section [{section}]")
    try:
        geom = Geometry(
            a=_getfloat(cfg, "geometry", "a"),
            d_L=_getfloat(cfg, "geometry", "d_left"),
            d_R=_getfloat(cfg, "geometry", "d_right"),
        )
        temps = Temperatures(
            T_phi_L=kelvin_to_natural(_getfloat(cfg, "temperatures", "t_phi_left")),
            T_phi_R=kelvin_to_natural(_getfloat(cfg, "temperatures", "t_phi_right")),
            T_B_L=kelvin_to_natural(_getfloat(cfg, "temperatures", "t_b_left")),
            T_B_R=kelvin_to_natural(_getfloat(cfg, "temperatures", "t_b_right")),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    sc = Scenario(geom, _material(cfg, "material.left"), _material(cfg, "material.right"), temps)
    quad = QuadratureConfig()
    if "quadrature" in cfg:
        try:
            quad = QuadratureConfig(
                rel_tol=_getfloat(cfg, "quadrature", "rel_tol", quad.rel_tol),
                abs_tol=_getfloat(cfg, "quadrature", "abs_tol", quad.abs_tol),
                max_subdivisions=int(
                    _getfloat(cfg, "quadrature", "max_subdivisions", quad.max_subdivisions)
                ),
                cutoff_factor=_getfloat(cfg, "quadrature", "cutoff_factor", quad.cutoff_factor),
                resonance_splitting=cfg.getboolean(
                    "quadrature", "resonance_splitting", fallback=True
                ),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return sc, quad


def serialize_scenario(sc, quad):
    """INI text that load_scenario parses back to an identical scenario."""
    k = HBAR_C_OVER_KB_NM_K
    lines = []
    for name, mat in (("left", sc.mat_L), ("right", sc.mat_R)):
        lines += [
            f"[material.{name}]",
            f"omega_pl = {mat.omega_pl!r}",
            f"omega_0 = {mat.omega_0!r}",
            f"gamma = {mat.gamma!r}",
            "",
        ]
    lines += [
        "[geometry]",
        f"a = {sc.geom.a!r}",
        f"d_left = {sc.geom.d_L!r}",
        f"d_right = {sc.geom.d_R!r}",
        "",
        "[temperatures]",
        f"t_phi_left = {sc.temps.T_phi_L * k!r}",
        f"t_phi_right = {sc.temps.T_phi_R * k!r}",
        f"t_b_left = {sc.temps.T_B_L * k!r}",
        f"t_b_right = {sc.temps.T_B_R * k!r}",
        "",
        "[quadrature]",
        f"rel_tol = {quad.rel_tol!r}",
        f"abs_tol = {quad.abs_tol!r}",
        f"max_subdivisions = {quad.max_subdivisions}",
        f"cutoff_factor = {quad.cutoff_factor!r}",
        f"resonance_splitting = {quad.resonance_splitting}",
    ]
    return "\n".join(lines) + "\n"


def _apply_parameter(sc, parameter, value):
    """Scenario with one swept parameter replaced (value in user units)."""
    g, t = sc.geom, sc.temps
    if parameter == "thickness_d":
        return replace(sc, geom=Geometry(g.a, value, value))
    if parameter == "gap_a":
        return replace(sc, geom=Geometry(value, g.d_L, g.d_R))
    if parameter == "omega_pl":
        return replace(
            sc,
            mat_L=replace(sc.mat_L, omega_pl=value),
            mat_R=replace(sc.mat_R, omega_pl=value),
        )
    tn = kelvin_to_natural(value)
    return replace(sc, temps=replace(t, **{parameter: tn}))


def _sweep_point(args):
    sc, quad, parameter, value, observables, q_denom = args
    if math.isinf(value):
        t = sc.temps
        f_tot = lifshitz_noneq_force(
            sc.geom.a, sc.mat_L, sc.mat_R, t.T_phi_L, t.T_phi_R, quad
        ) if "force" in observables else math.nan
        q_tot = landauer_heat_halfspace(
            sc.geom.a, sc.mat_L, sc.mat_R, t.T_B_L, t.T_B_R, quad
        ) if "heat" in observables else math.nan
        q_norm = q_tot / q_denom if q_denom else math.nan
        return SweepRow(value, f_tot, math.nan, math.nan, q_tot, math.nan,
                        math.nan, q_norm, q_denom, 0.0, True)
    pt = _apply_parameter(sc, parameter, value)
    f_tot = f_ic = f_b = q_tot = q_ic = q_b = math.nan
    err = 0.0
    ok = True
    if "force" in observables:
        try:
            fr = casimir_force(pt, quad)
        except QuadratureError as exc:
            fr, ok = None, False
            f_tot, err = exc.value, err + exc.error
        if fr is not None:
            f_tot, f_ic, f_b = fr.total, fr.ic_term, fr.bath_term
            err += fr.quad_error
    if "heat" in observables:
        try:
            hr = heat_flux(pt, quad)
        except QuadratureError as exc:
            hr, ok = None, False
            q_tot, err = exc.value, err + exc.error
        if hr is not None:
            q_tot, q_ic, q_b = hr.total, hr.q_ic, hr.q_b
            err += hr.quad_error
    denom = stefan_flux(pt.temps.T_phi_L, pt.temps.T_phi_R) if q_denom is None else q_denom
    q_norm = q_tot / denom if denom else math.nan
    return SweepRow(value, f_tot, f_ic, f_b, q_tot, q_ic, q_b, q_norm, denom, err, ok)


_CSV_COLUMNS = (
    "swept_value,force_total,force_ic,force_bath,q_total,q_ic,q_b,"
    "q_normalized,q_norm_denominator,quad_error,converged"
)


def run_sweep(scenario_file, sweep, observables=("force", "heat"),
              out_format="csv", out=None, workers=1, quad=None):
    """Evaluate the observables over the sweep grid; returns the rows.

    Rows are independent; with workers > 1 they are computed in a process
    pool but always emitted in grid order.  Heat is normalized against the
    d = 0 blackbody value (Stefan flux of the mode temperatures).
    """
    sc, cfg_quad = load_scenario(scenario_file)
    quad = quad or cfg_quad
    # fixed normalization denominator, shared by every row of a d-sweep
    q_denom = None
    if sweep.parameter in ("thickness_d", "gap_a", "omega_pl"):
        q_denom = stefan_flux(sc.temps.T_phi_L, sc.temps.T_phi_R)
    jobs = [(sc, quad, sweep.parameter, v, tuple(observables), q_denom)
            for v in sweep.values()]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(j) for j in jobs]
    if out is not None:
        write_rows(rows, sc, quad, sweep, out, out_format)
    return rows


def _fmt(x):
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.12e}" if isinstance(x, float) else str(x)


def write_rows(rows, sc, quad, sweep, path, out_format="csv"):
    """Write sweep rows as CSV (with '#' metadata preamble) or JSON records."""
    with open(path, "w") as fh:
        if out_format == "csv":
            fh.write(f"# artifact {_VERSION}\n")
            for line in serialize_scenario(sc, quad).splitlines():
                fh.write(f"# {line}\n")
            fh.write(
                f"# sweep: parameter={sweep.parameter} min={sweep.min!r} "
                f"max={sweep.max!r} points={sweep.points} spacing={sweep.spacing}\n"
            )
            fh.write("# units: lengths nm, pressures/fluxes nm^-2\n")
            fh.write(_CSV_COLUMNS + "\n")
            for r in rows:
                fh.write(",".join(_fmt(getattr(r, c)) for c in _CSV_COLUMNS.split(",")) + "\n")
        elif out_format == "records":
            for r in rows:
                fh.write(json.dumps(r.__dict__, sort_keys=True) + "\n")
        else:
            raise ConfigError(f"unknown output format {out_format!r}")


def _golden_min(f, lo, hi, rel_tol=1e-4):
    """Golden-section minimum of f on [lo, hi] (log-scale in d)."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c, d = b - phi * (b - a), a + phi * (b - a)
    fc, fd = f(math.exp(c)), f(math.exp(d))
    while (b - a) > rel_tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = f(math.exp(d))
    x = math.exp(0.5 * (a + b))
    return x, f(x)


def find_heat_minimum(sc, d_range, quad=None, grid_points=25):
    """Locate the interior minimum of Q(d) with d_L = d_R = d.

    Coarse log grid, then golden-section refinement around the grid minimum.
    Returns (d_min, Q_min, attenuation_vs_d0, attenuation_vs_dinf) where the
    attenuations are 1 - Q_min/Q_ref against the d = 0 (blackbody) and
    d -> infinity (half-space Landauer) references.
    Raises NoMinimumError when Q(d) is monotone or identically zero.
    """
    quad = quad or QuadratureConfig()
    t = sc.temps
    q0 = stefan_flux(t.T_phi_L, t.T_phi_R)
    q_inf = landauer_heat_halfspace(sc.geom.a, sc.mat_L, sc.mat_R, t.T_B_L, t.T_B_R, quad)
    if q0 == 0.0 and q_inf == 0.0 and len({*t.as_tuple()}) == 1:
        raise NoMinimumError("equilibrium scenario: Q(d) is identically zero")

    def q_of(d):
        return heat_flux(_apply_parameter(sc, "thickness_d", d), quad).total

    lo, hi = d_range
    ds = [lo * (hi / lo) ** (i / (grid_points - 1)) for i in range(grid_points)]
    qs = [q_of(d) for d in ds]
    i = min(range(len(qs)), key=lambda j: qs[j])
    if i == 0 or i == len(qs) - 1:
        raise NoMinimumError("Q(d) is monotone on the search range")
    d_min, q_min = _golden_min(q_of, ds[i - 1], ds[i + 1])
    att0 = 1.0 - q_min / q0 if q0 else math.nan
    att_inf = 1.0 - q_min / q_inf if q_inf else math.nan
    return d_min, q_min, att0, att_inf


def find_heat_zero(sc, d_range, quad=None, rel_width=1e-4, max_iter=200):
    """Thickness d* where Q(d) crosses zero (thermal shielding point).

    Log-space bisection, continued past the width target until |Q(d*)| falls
    below 1e-6 of the blackbody scale of the hottest/coldest temperatures.
    Raises NoCrossingError when the endpoints do not bracket a sign change.
    """
    quad = quad or QuadratureConfig()
    t = sc.temps
    if len({*t.as_tuple()}) == 1:
        raise NoCrossingError("equilibrium scenario: Q(d) is identically zero")
    scale = abs(stefan_flux(max(t.as_tuple()), min(t.as_tuple())))

    def q_of(d):
        return heat_flux(_apply_parameter(sc, "thickness_d", d), quad).total

    lo, hi = d_range
    q_lo, q_hi = q_of(lo), q_of(hi)
    if q_lo == 0.0:
        return lo
    if q_hi == 0.0:
        return hi
    if math.copysign(1.0, q_lo) == math.copysign(1.0, q_hi):
        raise NoCrossingError(
            f"no sign change on [{lo:g}, {hi:g}] nm: Q={q_lo:.3e} and {q_hi:.3e}"
        )
    a, b = math.log(lo), math.log(hi)
    q_mid, mid = q_lo, lo
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        mid = math.exp(m)
        q_mid = q_of(mid)
        if q_mid == 0.0:
            return mid
        if math.copysign(1.0, q_mid) == math.copysign(1.0, q_lo):
            a, q_lo = m, q_mid
        else:
            b = m
        if (b - a) <= rel_width and abs(q_mid) < 1e-6 * scale:
            return mid
    return mid


def _add_common(p):
    p.add_argument("--config", required=True, help="scenario file (INI)")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "records"), default="csv")
    p.add_argument("--rel-tol", type=float, default=None,
                   help="override quadrature relative tolerance")
    p.add_argument("--workers", type=int, default=1)


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="neqplates",
        description="Casimir force and radiative heat flux between two "
        "finite-thickness dissipative plates (1+1D, natural units).",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("force", "heat", "limits"):
        _add_common(sub.add_parser(name))
    sp = sub.add_parser("sweep")
    _add_common(sp)
    sp.add_argument("--param", required=True, choices=SweepSpec.PARAMETERS)
    sp.add_argument("--min", required=True, type=float)
    sp.add_argument("--max", required=True,
                    type=lambda s: math.inf if s == "inf" else float(s))
    sp.add_argument("--points", required=True, type=int)
    sp.add_argument("--spacing", choices=("linear", "log"), default="log")
    sp.add_argument("--observables", default="force,heat")
    for name in ("find-min", "find-zero"):
        p = sub.add_parser(name)
        _add_common(p)
        p.add_argument("--d-min", type=float, default=1.0)
        p.add_argument("--d-max", type=float, default=1e8)
    return ap


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        sc, quad = load_scenario(args.config)
        if args.rel_tol is not None:
            quad = replace(quad, rel_tol=args.rel_tol)
        t = sc.temps
        if args.command == "force":
            r = casimir_force(sc, quad)
            _emit(
                f"force_total = {r.total:.12e}\nfree_term = {r.free_term:.12e}\n"
                f"ic_term = {r.ic_term:.12e}\nbath_term = {r.bath_term:.12e}\n"
                f"quad_error = {r.quad_error:.3e}\n",
                args.out,
            )
        elif args.command == "heat":
            r = heat_flux(sc, quad)
            _emit(
                f"q_total = {r.total:.12e}\nq_ic = {r.q_ic:.12e}\n"
                f"q_b = {r.q_b:.12e}\nquad_error = {r.quad_error:.3e}\n",
                args.out,
            )
        elif args.command == "limits":
            lines = [
                f"stefan_flux = {stefan_flux(t.T_phi_L, t.T_phi_R):.12e}",
                f"lifshitz_noneq_force = "
                f"{lifshitz_noneq_force(sc.geom.a, sc.mat_L, sc.mat_R, t.T_phi_L, t.T_phi_R, quad):.12e}",
                f"halfspace_bath_pressure = "
                f"{halfspace_bath_pressure(sc.geom.a, sc.mat_L, sc.mat_R, t.T_B_L, t.T_B_R, quad):.12e}",
                f"landauer_heat_halfspace = "
                f"{landauer_heat_halfspace(sc.geom.a, sc.mat_L, sc.mat_R, t.T_B_L, t.T_B_R, quad):.12e}",
            ]
            _emit("\n".join(lines) + "\n", args.out)
        elif args.command == "sweep":
            sweep = SweepSpec(args.param, args.min, args.max, args.points, args.spacing)
            observables = tuple(s.strip() for s in args.observables.split(","))
            rows = run_sweep(args.config, sweep, observables, args.format,
                             out=None, workers=args.workers, quad=quad)
            if args.out:
                write_rows(rows, sc, quad, sweep, args.out, args.format)
            else:
                for r in rows:
                    sys.stdout.write(json.dumps(r.__dict__, sort_keys=True) + "\n")
        elif args.command == "find-min":
            d_min, q_min, att0, att_inf = find_heat_minimum(
                sc, (args.d_min, args.d_max), quad
            )
            _emit(
                f"d_min = {d_min:.6e}\nq_min = {q_min:.12e}\n"
                f"attenuation_vs_d0 = {att0:.6e}\n"
                f"attenuation_vs_dinf = {att_inf:.6e}\n",
                args.out,
            )
        elif args.command == "find-zero":
            d_star = find_heat_zero(sc, (args.d_min, args.d_max), quad)
            _emit(f"d_star = {d_star:.6e}\n", args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"quadrature error: {exc}", file=sys.stderr)
        return 3
    except (NoMinimumError, NoCrossingError) as exc:
        print(f"search failed: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
