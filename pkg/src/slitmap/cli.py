"""Command-line surface over the library.

Four subcommands: prime (point values and identity residuals), map
(boundary-image CSV and slit-geometry JSON), squeeze (closed forms,
conjecture comparison sweeps, product bounds), loewner (the slit
evolutions, trajectory CSV).

Exit codes: 0 success, 2 usage or domain error, 3 I/O error,
4 numerical failure (singularity, non-convergence, blow-up).
"""

import argparse
import contextlib
import json
import math
import sys
import warnings
from dataclasses import dataclass

from .conformal import boundary_image, slit_geometry
from .errors import DomainError, SlitmapError
from .geometry import AnnulusGeometry, TruncationControl, default_truncation
from .loewner import (DrivingFunction, LoewnerState, MultiSlitSchedule,
                      MultiSlitState, Trajectory, evolve_inner_slit,
                      evolve_outer_slit, evolve_three_slit,
                      solve_balancing_schedule)
from .prime import eval_prime, prime_identity_period, prime_identity_reflect
from .squeezing import (ProductQuery, SqueezeQuery, annulus_times_disk_bound,
                        conjectured_dgz, product_lower_bound, squeeze_annulus)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: subcommand, parameters, output settings."""

    subcommand: str
    params: dict
    out: str = None
    fmt: str = "csv"
    trunc: TruncationControl = None
    step: float = None


def _complex_arg(s):
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {s!r}")


def _fmt_float(x):
    if math.isnan(x):
        return "nan"
    return f"{x:.17e}"


def _fmt_complex(v):
    return f"{v.real:.17e}{v.imag:+.17e}j"


@contextlib.contextmanager
def _open_out(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as f:
            yield f


def _parse_driving(spec, total_time):
    """Driving spec: 'const:ANGLE' or 'pl:t0:v0,t1:v1,...' ending at T."""
    kind, _, rest = spec.partition(":")
    if kind == "const":
        try:
            angle = float(rest)
        except ValueError:
            raise DomainError(f"bad driving angle in {spec!r}")
        if total_time == 0.0:
            return None, angle
        return DrivingFunction.constant(angle, total_time), angle
    if kind == "pl":
        try:
            pairs = [tuple(float(x) for x in item.split(":"))
                     for item in rest.split(",")]
            ts, vs = zip(*pairs)
        except ValueError:
            raise DomainError(f"bad piecewise driving spec {spec!r}")
        if total_time == 0.0:
            return None, vs[0]
        if abs(ts[-1] - total_time) > 1e-12:
            raise DomainError("last driving knot must sit at t = T")
        return DrivingFunction(ts, vs), vs[0]
    raise DomainError(f"unknown driving kind {kind!r} (use const: or pl:)")


# ---------------------------------------------------------------------------
# subcommands


def cmd_prime(cfg: RunConfig):
    p = cfg.params
    geom = AnnulusGeometry(p["r"])
    if p["check"] is None:
        v = eval_prime(p["z"], p["y"], geom, cfg.trunc)
        print(_fmt_complex(v))
        return 0
    fn = prime_identity_reflect if p["check"] == "reflect" else prime_identity_period
    lhs, rhs = fn(p["z"], p["y"], geom, cfg.trunc)
    resid = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    print(_fmt_float(resid))
    return 0


def cmd_map(cfg: RunConfig):
    p = cfg.params
    geom = AnnulusGeometry(p["r"])
    y = p["y"]
    if cfg.fmt == "json":
        dom = slit_geometry(y, geom, cfg.trunc, n_samples=p["samples"])
        trunc = cfg.trunc
        payload = {
            "r": geom.r,
            "y_re": y.real,
            "y_im": y.imag,
            "slit_radius": dom.slit_radius,
            "arc_start": dom.arc_start,
            "arc_end": dom.arc_end,
            "preimage_start": dom.preimage_start,
            "preimage_end": dom.preimage_end,
            "preimage_sum": dom.preimage_start + dom.preimage_end,
            "n_samples": p["samples"],
            "trunc_tol": trunc.tol,
            "max_terms": trunc.max_terms,
        }
        with _open_out(cfg.out) as f:
            json.dump(payload, f, indent=2)
            f.write("\n")
        return 0
    with _open_out(cfg.out) as f:
        f.write("theta,re,im,modulus\n")
        for circle in ("outer", "inner"):
            mb = boundary_image(y, geom, cfg.trunc, n_samples=p["samples"],
                                circle=circle)
            for theta, v in mb.samples:
                f.write(",".join(_fmt_float(x) for x in
                                 (theta, v.real, v.imag, abs(v))) + "\n")
    return 0


def cmd_squeeze(cfg: RunConfig):
    p = cfg.params
    if p["product"] is not None:
        try:
            vals = tuple(float(x) for x in p["product"].split(","))
        except ValueError:
            raise DomainError(f"bad product list {p['product']!r}")
        print(repr(product_lower_bound(ProductQuery(vals))))
        return 0
    r = p["r"]
    if r is None:
        raise DomainError("--r is required unless --product is given")
    if p["sweep"] is not None:
        n = p["sweep"]
        if n < 2:
            raise DomainError("--sweep needs at least 2 points")
        below = 0
        rows = []
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            for i in range(n):
                zm = r + (1.0 - r) * (i + 1) / (n + 1)
                q = SqueezeQuery(r, zm)
                thm = squeeze_annulus(q)
                conj = conjectured_dgz(q)
                rows.append((zm, thm, conj, thm - conj))
            below = len(caught)
        if below:
            print(f"note: {below} sample(s) below sqrt(r), outside the "
                  f"conjecture's stated range", file=sys.stderr)
        with _open_out(cfg.out) as f:
            f.write("zmod,theorem,conjecture,diff\n")
            for row in rows:
                f.write(",".join(_fmt_float(x) for x in row) + "\n")
        return 0
    if p["zmod"] is None:
        raise DomainError("need --zmod, --sweep, or --product")
    q = SqueezeQuery(r, p["zmod"])
    if p["compare_conjecture"]:
        thm, conj = squeeze_annulus(q), conjectured_dgz(q)
        print(repr(thm), repr(conj), repr(thm - conj))
    elif p["disk_factor"]:
        print(repr(annulus_times_disk_bound(r, p["zmod"])))
    else:
        print(repr(squeeze_annulus(q)))
    return 0


def _parse_points(spec):
    if spec is None:
        return []
    try:
        return [complex(x) for x in spec.split(",") if x]
    except ValueError:
        raise DomainError(f"bad tracked-point list {spec!r}")


def _identity_trajectory(mode, p, angle0):
    r = p["r"]
    if mode == "three-slit":
        st = MultiSlitState(0.0, r, p["y0"], angle0 % TWO_PI,
                            p["xi_plus"], p["xi_minus"],
                            p["xi_plus"], p["xi_minus"], 0.5)
        return Trajectory("three_slit", (st,))
    y0 = p["y0"] if mode == "inner" else None
    pts = tuple((f"p{i}", w) for i, w in enumerate(_parse_points(p["points"])))
    rot = complex(1.0) if mode == "inner" else None
    st = LoewnerState(0.0, r, y0, angle0 % TWO_PI, pts, rot)
    return Trajectory(mode, (st,))


def cmd_loewner(cfg: RunConfig):
    p = cfg.params
    mode = p["mode"]
    total_time = p["T"]
    if total_time < 0.0:
        raise DomainError(f"need T >= 0, got {total_time}")
    driving, angle0 = _parse_driving(p["beta"], total_time)
    geom = AnnulusGeometry(p["r"])

    if mode in ("inner", "three-slit") and p["y0"] is None:
        raise DomainError(f"{mode} mode needs --y0")
    if mode == "three-slit" and (p["xi_plus"] is None or p["xi_minus"] is None):
        raise DomainError("three-slit mode needs --xi-plus and --xi-minus")

    if total_time == 0.0:
        traj = _identity_trajectory(mode, p, angle0)
    else:
        ds = cfg.step if cfg.step is not None else 1e-3 * total_time
        points = _parse_points(p["points"])
        if mode == "outer":
            if not points:
                raise DomainError("outer mode needs --points")
            traj = evolve_outer_slit(driving, points, geom, ds, cfg.trunc)
        elif mode == "inner":
            traj = evolve_inner_slit(driving, p["y0"], points, geom, ds, cfg.trunc)
        else:
            xp0, xm0 = p["xi_plus"], p["xi_minus"]
            if p["balanced"]:
                schedule = solve_balancing_schedule(
                    xp0, xm0, driving, p["y0"], geom, total_time, ds, cfg.trunc)
            else:
                schedule = MultiSlitSchedule.constant(p["lam"], total_time)
            traj = evolve_three_slit(schedule, (driving, xp0, xm0), p["y0"],
                                     geom, ds, cfg.trunc)

    if cfg.out is not None:
        with _open_out(cfg.out) as f:
            traj.write_csv(f)
    final = traj.final
    if mode == "outer":
        print(f"r_T={final.r_t!r} points={len(final.tracked_points)}")
        for lab, w in final.tracked_points:
            print(f"{lab},{_fmt_complex(w)}")
    elif mode == "inner":
        print(f"y_T={final.y_t!r}")
    else:
        defect = max(abs((TWO_PI - st.xi_plus) - st.xi_minus)
                     for st in traj.states)
        print(f"y_T={final.y_tau!r} max_defect={defect:.3e}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="slitmap",
        description="Annulus prime function, slit-disk maps, slit evolutions, "
                    "and squeezing bounds.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trunc-tol", type=float, default=None,
                        help="series tail tolerance (default: env "
                             "SLITMAP_TRUNC_TOL or 1e-12)")
    common.add_argument("--out", default=None, help="output file path")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    pp = sub.add_parser("prime", parents=[common],
                        help="prime-function values and identity residuals")
    pp.add_argument("--r", type=float, required=True)
    pp.add_argument("--z", type=_complex_arg, required=True)
    pp.add_argument("--y", type=_complex_arg, required=True)
    pp.add_argument("--check", choices=("reflect", "period"), default=None,
                    help="print the relative residual of an identity instead "
                         "of the value")

    pm = sub.add_parser("map", parents=[common],
                        help="boundary-image CSV / slit-geometry JSON")
    pm.add_argument("--r", type=float, required=True)
    pm.add_argument("--y", type=_complex_arg, required=True)
    pm.add_argument("--samples", type=int, default=512,
                    help="samples per boundary circle (default 512)")
    pm.add_argument("--geometry", action="store_true",
                    help="emit slit-geometry JSON instead of the CSV")

    ps = sub.add_parser("squeeze", parents=[common],
                        help="squeezing values, sweeps, product bounds")
    ps.add_argument("--r", type=float, default=None)
    ps.add_argument("--zmod", type=float, default=None)
    ps.add_argument("--sweep", type=int, default=None,
                    help="emit an N-point CSV sweep over |z| in (r, 1)")
    ps.add_argument("--compare-conjecture", action="store_true",
                    help="include the refuted conjectural formula")
    ps.add_argument("--product", default=None,
                    help="comma-separated factor values for the product bound")
    ps.add_argument("--disk-factor", action="store_true",
                    help="annulus-times-disk bound at (--r, --zmod)")

    pl = sub.add_parser("loewner", parents=[common],
                        help="slit evolutions; trajectory CSV export")
    pl.add_argument("--mode", choices=("inner", "outer", "three-slit"),
                    required=True)
    pl.add_argument("--r", type=float, required=True)
    pl.add_argument("--T", type=float, required=True)
    pl.add_argument("--beta", default="const:3.141592653589793",
                    help="driving spec: const:ANGLE or pl:t0:v0,t1:v1,...")
    pl.add_argument("--y0", type=float, default=None)
    pl.add_argument("--points", default=None,
                    help="tracked points, comma-separated complex literals")
    pl.add_argument("--ds", type=float, default=None,
                    help="step size (default 1e-3 * T)")
    pl.add_argument("--xi-plus", type=float, default=None)
    pl.add_argument("--xi-minus", type=float, default=None)
    pl.add_argument("--balanced", action="store_true",
                    help="solve the balancing schedule (three-slit mode)")
    pl.add_argument("--lam", type=float, default=0.5,
                    help="constant schedule slope when not --balanced")
    return parser


_HANDLERS = {"prime": cmd_prime, "map": cmd_map,
             "squeeze": cmd_squeeze, "loewner": cmd_loewner}


def _config_from(args):
    if args.trunc_tol is not None:
        trunc = TruncationControl(tol=args.trunc_tol)
    else:
        trunc = default_truncation()
    params = {k: v for k, v in vars(args).items()
              if k not in ("subcommand", "trunc_tol", "out")}
    fmt = "json" if params.get("geometry") else "csv"
    return RunConfig(subcommand=args.subcommand, params=params,
                     out=args.out, fmt=fmt, trunc=trunc,
                     step=params.get("ds"))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from(args)
        return _HANDLERS[args.subcommand](cfg)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SlitmapError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 4
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
