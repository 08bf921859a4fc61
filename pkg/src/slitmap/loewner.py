"""Slit-growth evolutions on an annulus.

Three integrators live here, all classical fixed-step RK4:

* outer-circle slit: each tracked point w obeys
      dw/dt = w * K_{r_t}(w / alpha(t)),    alpha(t) = e^{i beta(t)},
  with the annulus inner radius updated exactly as r_t = r0 * e^t.

* inner-circle slit: the real marked point y obeys
      d log y / dt = P(r_t, y, beta(t)),
  and tracked points follow the companion field
      dw/dt = w * (1 - K_{r_t}(r_t e^{i beta}/w) + i J(r_t, y, beta)).
  The imaginary normalization J is accumulated separately as a running
  unit-modulus rotation factor.

* three-slit system at constant total modulus: one slit grows from the
  inner circle while two previously grown slits are erased, with erasure
  rates split (1 - lambda, lambda) by a schedule a(s), lambda = da/ds.
  The marked point and the two erased-tip angles evolve by the weighted
  kernel sums; the growing tip angle is the driving input.  The erased
  tips' own singular self-term carries zero finite part here (the local
  model of an arc-preimage slit is symmetric about its tip), so each tip
  moves under the two kernels anchored at the other slits only.

The balancing solver picks lambda step by step so the two erased tips
stay mirror images across the real axis; it brackets the one-step
symmetry defect in lambda and bisects.  Diagnostic angles u, v trail the
erased tips at a fixed lag of 5 steps' worth of arc.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EvolutionError
from .geometry import AnnulusGeometry, TruncationControl
from .kernels import _core_villat, _core_villat_batch

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

CSV_COLUMNS = ("s", "r_t", "y_t", "xi_1", "xi_plus", "xi_minus", "lambda")


def _fmt(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return f"{x:.17e}"


@dataclass(frozen=True)
class DrivingFunction:
    """Piecewise-linear angle-valued control t -> angle on [0, T].

    Knot values are stored as given and reduced to [0, 2 pi) only at
    evaluation, so a caller may supply a continuous lift.
    """

    knot_times: tuple
    knot_values: tuple

    def __post_init__(self):
        ts = tuple(float(t) for t in self.knot_times)
        vs = tuple(float(v) for v in self.knot_values)
        if len(ts) != len(vs) or len(ts) < 2:
            raise DomainError("need matching knot arrays with at least two knots")
        if ts[0] != 0.0:
            raise DomainError("driving must start at t = 0")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("knot times must be strictly increasing")
        if ts[-1] <= 0.0:
            raise DomainError("total time must be positive")
        object.__setattr__(self, "knot_times", ts)
        object.__setattr__(self, "knot_values", vs)

    @classmethod
    def constant(cls, angle, total_time):
        return cls((0.0, float(total_time)), (float(angle), float(angle)))

    @property
    def total_time(self):
        return self.knot_times[-1]

    def __call__(self, t):
        return float(np.interp(t, self.knot_times, self.knot_values)) % TWO_PI


@dataclass(frozen=True)
class LoewnerState:
    """Snapshot of a single-slit run at time t."""

    t: float
    r_t: float
    y_t: float  # None for outer-circle runs
    beta: float
    tracked_points: tuple
    rotation_accumulator: complex  # None for outer-circle runs

    def __post_init__(self):
        if not (0.0 < self.r_t < 1.0):
            raise DomainError(f"r_t must lie in (0,1), got {self.r_t}")
        if self.y_t is not None and not (self.r_t < self.y_t < 1.0):
            raise DomainError(f"marked point {self.y_t} outside ({self.r_t}, 1)")


@dataclass(frozen=True)
class MultiSlitState:
    """Snapshot of the three-slit constant-modulus system at time s."""

    s: float
    r_T: float
    y_tau: float
    xi_1: float
    xi_plus: float
    xi_minus: float
    u_angle: float
    v_angle: float
    lam: float


@dataclass(frozen=True)
class MultiSlitSchedule:
    """Erasure schedule a(s) on [0, T], piecewise linear with slope in [0, 1].

    The two erased-slit clocks are t_plus(s) = (T - a(T)) - (s - a(s)) and
    t_minus(s) = a(T) - a(s); both reach 0 at s = T and the total
    s + t_plus + t_minus is identically T.
    """

    T: float
    s_grid: tuple
    a_values: tuple

    def __post_init__(self):
        ss = tuple(float(s) for s in self.s_grid)
        av = tuple(float(a) for a in self.a_values)
        if len(ss) != len(av) or len(ss) < 2:
            raise DomainError("schedule needs matching grids with >= 2 samples")
        if ss[0] != 0.0 or abs(ss[-1] - self.T) > 1e-12 or self.T <= 0.0:
            raise DomainError("schedule grid must run from 0 to T > 0")
        if any(b <= a for a, b in zip(ss, ss[1:])):
            raise DomainError("schedule grid must be strictly increasing")
        slopes = np.diff(av) / np.diff(ss)
        if slopes.size and (slopes.min() < -1e-12 or slopes.max() > 1.0 + 1e-12):
            raise DomainError("schedule slope da/ds must stay within [0, 1]")
        object.__setattr__(self, "s_grid", ss)
        object.__setattr__(self, "a_values", av)
        # derived-clock sanity at the grid
        for s in ss:
            tp, tm = self.t_plus(s), self.t_minus(s)
            if tp < -1e-12 or tm < -1e-12:
                raise DomainError("derived slit clocks must stay nonnegative")
            if abs(s + tp + tm - self.T) > 1e-12:
                raise DomainError("s + t_plus + t_minus must equal T")

    @classmethod
    def constant(cls, lam, total_time):
        if not (0.0 <= lam <= 1.0):
            raise DomainError(f"lambda must lie in [0,1], got {lam}")
        return cls(float(total_time), (0.0, float(total_time)),
                   (0.0, lam * float(total_time)))

    def a(self, s):
        return float(np.interp(s, self.s_grid, self.a_values))

    def da_ds(self, s):
        ss = self.s_grid
        i = int(np.searchsorted(ss, s, side="right")) - 1
        i = min(max(i, 0), len(ss) - 2)
        return (self.a_values[i + 1] - self.a_values[i]) / (ss[i + 1] - ss[i])

    def t_plus(self, s):
        return (self.T - self.a(self.T)) - (s - self.a(s))

    def t_minus(self, s):
        return self.a(self.T) - self.a(s)


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered states of one evolution run, plus absorption events."""

    kind: str  # "outer", "inner", or "three_slit"
    states: tuple
    absorbed: tuple = ()
    meta: dict = field(default_factory=dict)

    @property
    def final(self):
        return self.states[-1]

    def rows(self):
        """States flattened to the export schema (nan for absent columns)."""
        nan = float("nan")
        out = []
        for st in self.states:
            if isinstance(st, MultiSlitState):
                out.append((st.s, st.r_T, st.y_tau, st.xi_1,
                            st.xi_plus, st.xi_minus, st.lam))
            else:
                y = nan if st.y_t is None else st.y_t
                out.append((st.t, st.r_t, y, st.beta, nan, nan, nan))
        return out

    def write_csv(self, fileobj):
        fileobj.write(",".join(CSV_COLUMNS) + "\n")
        for row in self.rows():
            fileobj.write(",".join(_fmt(x) for x in row) + "\n")


def _as_labeled(initial_points):
    pts = []
    for i, item in enumerate(initial_points):
        if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], str):
            pts.append((item[0], complex(item[1])))
        else:
            pts.append((f"p{i}", complex(item)))
    labels = [lab for lab, _ in pts]
    if len(set(labels)) != len(labels):
        raise DomainError("tracked-point labels must be unique")
    return pts


def _steps(total_time, dt):
    if dt <= 0.0:
        raise DomainError(f"step size must be positive, got {dt}")
    n = max(1, round(total_time / dt))
    return n, total_time / n


def evolve_outer_slit(driving: DrivingFunction, initial_points, geom: AnnulusGeometry,
                      dt, trunc: TruncationControl = None):
    """Grow a slit from the unit circle; push tracked points forward."""
    if trunc is None:
        trunc = TruncationControl()
    n, h = _steps(driving.total_time, dt)
    points = dict(_as_labeled(initial_points))
    for lab, w in points.items():
        if not (geom.r * (1 - 1e-12) <= abs(w) <= 1 + 1e-12):
            raise DomainError(f"point {lab} = {w} starts outside the closed annulus")

    def rhs(t, w):
        alpha = complex(math.cos(driving(t)), math.sin(driving(t)))
        return w * _core_villat(w / alpha, geom.radius_at(t), trunc)

    states = [LoewnerState(0.0, geom.r, None, driving(0.0),
                           tuple(points.items()), None)]
    absorbed = []
    for k in range(n):
        t0 = k * h
        b0 = driving(t0)
        tip = complex(math.cos(b0), math.sin(b0))
        for lab in [la for la, w in points.items() if abs(w - tip) < 10.0 * h]:
            log.warning("point %s absorbed by the slit tip at t=%.6g", lab, t0)
            absorbed.append((lab, t0))
            del points[lab]
        for lab, w in points.items():
            k1 = rhs(t0, w)
            k2 = rhs(t0 + h / 2, w + (h / 2) * k1)
            k3 = rhs(t0 + h / 2, w + (h / 2) * k2)
            k4 = rhs(t0 + h, w + h * k3)
            points[lab] = w + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t1 = (k + 1) * h
        states.append(LoewnerState(t1, geom.radius_at(t1), None, driving(t1),
                                   tuple(points.items()), None))
    return Trajectory("outer", tuple(states), tuple(absorbed),
                      {"dt": h, "r0": geom.r})


def evolve_inner_slit(driving: DrivingFunction, y0, initial_points,
                      geom: AnnulusGeometry, dt, trunc: TruncationControl = None):
    """Grow a slit from the inner circle; co-integrate the marked point.

    The marked point stays a real float throughout; the imaginary part
    of its logarithmic velocity is identically zero and its would-be
    rotation is tracked separately in rotation_accumulator.
    """
    if trunc is None:
        trunc = TruncationControl()
    y0 = float(y0)
    if not (geom.r < y0 < 1.0):
        raise DomainError(f"marked point must satisfy r < y0 < 1, got {y0}")
    n, h = _steps(driving.total_time, dt)
    points = dict(_as_labeled(initial_points))
    rot = complex(1.0)

    def tip_kernel(t, y):
        # returns (P, J); raises on blow-up
        r_t = geom.radius_at(t)
        if not (r_t < y < 1.0):
            raise EvolutionError(
                f"marked point left ({r_t:.6g}, 1) at t={t:.6g} (y={y:.6g})")
        b = driving(t)
        ktip = _core_villat(r_t * complex(math.cos(b), math.sin(b)) / y,
                            r_t, trunc)
        return 1.0 - ktip.real, ktip.imag

    def point_rhs(t, y, w, j_val):
        r_t = geom.radius_at(t)
        b = driving(t)
        kw = _core_villat(r_t * complex(math.cos(b), math.sin(b)) / w, r_t, trunc)
        return w * (1.0 - kw + 1j * j_val)

    y = y0
    states = [LoewnerState(0.0, geom.r, y, driving(0.0), tuple(points.items()), rot)]
    absorbed = []
    for k in range(n):
        t0 = k * h
        b0 = driving(t0)
        r0 = geom.radius_at(t0)
        tip = r0 * complex(math.cos(b0), math.sin(b0))
        for lab in [la for la, w in points.items() if abs(w - tip) < 10.0 * h]:
            log.warning("point %s absorbed by the slit tip at t=%.6g", lab, t0)
            absorbed.append((lab, t0))
            del points[lab]

        stage_t = (t0, t0 + h / 2, t0 + h / 2, t0 + h)
        p1, j1 = tip_kernel(stage_t[0], y)
        ky1 = y * p1
        p2, j2 = tip_kernel(stage_t[1], y + (h / 2) * ky1)
        ky2 = (y + (h / 2) * ky1) * p2
        p3, j3 = tip_kernel(stage_t[2], y + (h / 2) * ky2)
        ky3 = (y + (h / 2) * ky2) * p3
        p4, j4 = tip_kernel(stage_t[3], y + h * ky3)
        ky4 = (y + h * ky3) * p4

        y_stages = (y, y + (h / 2) * ky1, y + (h / 2) * ky2, y + h * ky3)
        j_stages = (j1, j2, j3, j4)
        for lab, w in points.items():
            kw1 = point_rhs(stage_t[0], y_stages[0], w, j_stages[0])
            kw2 = point_rhs(stage_t[1], y_stages[1], w + (h / 2) * kw1, j_stages[1])
            kw3 = point_rhs(stage_t[2], y_stages[2], w + (h / 2) * kw2, j_stages[2])
            kw4 = point_rhs(stage_t[3], y_stages[3], w + h * kw3, j_stages[3])
            points[lab] = w + (h / 6) * (kw1 + 2 * kw2 + 2 * kw3 + kw4)

        y = y + (h / 6) * (ky1 + 2 * ky2 + 2 * ky3 + ky4)
        rot *= complex(math.cos(h / 6 * (j1 + 2 * j2 + 2 * j3 + j4)),
                       math.sin(h / 6 * (j1 + 2 * j2 + 2 * j3 + j4)))
        t1 = (k + 1) * h
        r1 = geom.radius_at(t1)
        if not (r1 < y < 1.0):
            raise EvolutionError(
                f"marked point left ({r1:.6g}, 1) at t={t1:.6g} (y={y:.6g})")
        states.append(LoewnerState(t1, r1, y, driving(t1),
                                   tuple(points.items()), rot))
    return Trajectory("inner", tuple(states), tuple(absorbed),
                      {"dt": h, "r0": geom.r})


# ---------------------------------------------------------------------------
# three-slit system

_TIP_GAP = 1e-9


def _three_slit_block(s, y, xp, xm, driving, r, trunc):
    """Kernel values of one integrator stage, before the schedule weights.

    Returns (p_b, p_p, p_m, i_b_wp, i_m_wp, i_b_wm, i_p_wm): the P values
    at the growing tip and at the two erased tips, and the four
    angle-flow kernels of each erased tip anchored at the other slits.
    The weighted combination is affine in lambda, so one block serves
    every lambda the balancing solver tries at this stage.
    """
    b = driving(s)
    xpr, xmr = xp % TWO_PI, xm % TWO_PI
    gaps = (abs(xpr - xmr), abs(xpr - b), abs(xmr - b))
    if min(min(g, TWO_PI - g) for g in gaps) < _TIP_GAP:
        raise EvolutionError(f"slit tips collided at s={s:.6g}")
    if not (r < y < 1.0):
        raise EvolutionError(f"marked point left ({r:.6g}, 1) at s={s:.6g} (y={y:.6g})")
    eb = complex(math.cos(b), math.sin(b))
    ep = complex(math.cos(xpr), math.sin(xpr))
    em = complex(math.cos(xmr), math.sin(xmr))
    ks = _core_villat_batch(
        np.array([r * eb / y, r * ep / y, r * em / y,
                  eb / ep, em / ep, eb / em, ep / em]), r, trunc)
    # plain floats: numpy scalars must not leak into states or reprs
    p_b, j_b = 1.0 - float(ks[0].real), float(ks[0].imag)
    p_p, j_p = 1.0 - float(ks[1].real), float(ks[1].imag)
    p_m, j_m = 1.0 - float(ks[2].real), float(ks[2].imag)
    return (p_b, p_p, p_m,
            -float(ks[3].imag) + j_b, -float(ks[4].imag) + j_m,
            -float(ks[5].imag) + j_b, -float(ks[6].imag) + j_p)


def _combine(block, y, lam):
    p_b, p_p, p_m, i_b_wp, i_m_wp, i_b_wm, i_p_wm = block
    dy = y * (p_b - (1.0 - lam) * p_p - lam * p_m)
    dxp = i_b_wp - lam * i_m_wp
    dxm = i_b_wm - (1.0 - lam) * i_p_wm
    return dy, dxp, dxm


def _three_slit_step(s, h, y, xp, xm, lam, driving, r, trunc, block1=None):
    if block1 is None:
        block1 = _three_slit_block(s, y, xp, xm, driving, r, trunc)
    a1 = _combine(block1, y, lam)
    y2, xp2, xm2 = y + h / 2 * a1[0], xp + h / 2 * a1[1], xm + h / 2 * a1[2]
    a2 = _combine(_three_slit_block(s + h / 2, y2, xp2, xm2, driving, r, trunc),
                  y2, lam)
    y3, xp3, xm3 = y + h / 2 * a2[0], xp + h / 2 * a2[1], xm + h / 2 * a2[2]
    a3 = _combine(_three_slit_block(s + h / 2, y3, xp3, xm3, driving, r, trunc),
                  y3, lam)
    y4, xp4, xm4 = y + h * a3[0], xp + h * a3[1], xm + h * a3[2]
    a4 = _combine(_three_slit_block(s + h, y4, xp4, xm4, driving, r, trunc),
                  y4, lam)
    y1 = y + h / 6 * (a1[0] + 2 * a2[0] + 2 * a3[0] + a4[0])
    xp1 = xp + h / 6 * (a1[1] + 2 * a2[1] + 2 * a3[1] + a4[1])
    xm1 = xm + h / 6 * (a1[2] + 2 * a2[2] + 2 * a3[2] + a4[2])
    return y1, xp1, xm1


def evolve_three_slit(schedule: MultiSlitSchedule, drivings, y0,
                      geom: AnnulusGeometry, ds, trunc: TruncationControl = None):
    """Run the constant-modulus three-slit system under a given schedule.

    drivings is (growing-tip DrivingFunction, xi_plus(0), xi_minus(0)).
    The annulus radius is pinned at its final value r_T for the whole
    run: growing one slit while erasing the other two at complementary
    rates keeps the total modulus constant.
    """
    if trunc is None:
        trunc = TruncationControl()
    driving, xp0, xm0 = drivings
    T = schedule.T
    if abs(driving.total_time - T) > 1e-12:
        raise DomainError("driving and schedule must cover the same time span")
    r = geom.radius_at(T)
    y0 = float(y0)
    if not (r < y0 < 1.0):
        raise DomainError(f"marked point must satisfy r_T < y0 < 1, got {y0}")
    n, h = _steps(T, ds)
    lag = 5.0 * h

    y, xp, xm = y0, float(xp0), float(xm0)
    lam0 = schedule.da_ds(0.0)
    states = [MultiSlitState(0.0, r, y, driving(0.0), xp, xm,
                             xp - lag, xm + lag, lam0)]
    for k in range(n):
        s0 = k * h
        lam = schedule.da_ds(s0 + h / 2)
        y, xp, xm = _three_slit_step(s0, h, y, xp, xm, lam, driving, r, trunc)
        s1 = (k + 1) * h
        states.append(MultiSlitState(s1, r, y, driving(s1), xp, xm,
                                     xp - lag, xm + lag, lam))
    return Trajectory("three_slit", tuple(states),
                      meta={"ds": h, "r_T": r, "schedule": schedule})


def solve_balancing_schedule(xi_plus0, xi_minus0, driving: DrivingFunction, y0,
                             geom: AnnulusGeometry, T, ds,
                             trunc: TruncationControl = None):
    """Choose the erasure split so the two erased tips stay mirror images.

    At each step, the signed one-step symmetry defect
        D(lam) = (2 pi - xi_plus') - xi_minus'
    is bracketed over lam in [0, 1] and bisected 40 times; the chosen
    slopes accumulate into the schedule a(s).  No sign change means no
    admissible split exists at this step and the run aborts.
    """
    if trunc is None:
        trunc = TruncationControl()
    xp0, xm0 = float(xi_plus0), float(xi_minus0)
    if abs((TWO_PI - xp0) - xm0) > 1e-9:
        raise DomainError("initial tips must be mirror images: 2 pi - xi_plus = xi_minus")
    if abs(driving.total_time - T) > 1e-12:
        raise DomainError("driving must cover [0, T]")
    r = geom.radius_at(T)
    y0 = float(y0)
    if not (r < y0 < 1.0):
        raise DomainError(f"marked point must satisfy r_T < y0 < 1, got {y0}")
    n, h = _steps(T, ds)

    y, xp, xm = y0, xp0, xm0
    s_grid = [0.0]
    a_values = [0.0]
    a = 0.0
    for k in range(n):
        s0 = k * h
        block1 = _three_slit_block(s0, y, xp, xm, driving, r, trunc)

        def defect(lam):
            _, xp1, xm1 = _three_slit_step(s0, h, y, xp, xm, lam, driving, r,
                                           trunc, block1)
            return (TWO_PI - xp1) - xm1

        d_lo, d_hi = defect(0.0), defect(1.0)
        if d_lo == 0.0:
            lam = 0.0
        elif d_hi == 0.0:
            lam = 1.0
        elif d_lo * d_hi > 0.0:
            raise EvolutionError(
                f"balancing infeasible at s={s0:.6g}: one-step symmetry defect "
                f"has the same sign at lambda=0 ({d_lo:.3e}) and lambda=1 ({d_hi:.3e})")
        else:
            lo, hi = 0.0, 1.0
            for _ in range(40):
                mid = 0.5 * (lo + hi)
                if defect(mid) * d_lo < 0.0:
                    hi = mid
                else:
                    lo = mid
            lam = 0.5 * (lo + hi)
        y, xp, xm = _three_slit_step(s0, h, y, xp, xm, lam, driving, r, trunc,
                                     block1)
        a += lam * h
        s_grid.append((k + 1) * h)
        a_values.append(a)
    return MultiSlitSchedule(T=float(T), s_grid=tuple(s_grid),
                             a_values=tuple(a_values))


def key_monotonicity_experiment(driving: DrivingFunction, xi_plus0, xi_minus0,
                                y0, geom: AnnulusGeometry, T, ds,
                                trunc: TruncationControl = None):
    """Balanced three-slit run certifying stepwise growth of the marked point.

    Solves for the balancing schedule, re-runs the evolution under it,
    and checks at every step that (a) the growing tip stays at least as
    close to angle pi as both erased tips, and (b) log y does not
    decrease (up to 1e-12 roundoff slack).  Returns (y_T, trajectory).
    """
    y0 = float(y0)
    if T == 0.0:
        r = geom.r
        if not (r < y0 < 1.0):
            raise DomainError(f"marked point must satisfy r < y0 < 1, got {y0}")
        st = MultiSlitState(0.0, r, y0, driving(0.0), float(xi_plus0),
                            float(xi_minus0), float(xi_plus0), float(xi_minus0), 0.5)
        return y0, Trajectory("three_slit", (st,), meta={"ds": 0.0, "r_T": r})

    schedule = solve_balancing_schedule(xi_plus0, xi_minus0, driving, y0,
                                        geom, T, ds, trunc)
    traj = evolve_three_slit(schedule, (driving, xi_plus0, xi_minus0), y0,
                             geom, ds, trunc)
    for i, (prev, cur) in enumerate(zip(traj.states, traj.states[1:])):
        b = prev.xi_1
        margin = min(abs(math.pi - prev.xi_plus % TWO_PI),
                     abs(math.pi - prev.xi_minus % TWO_PI))
        if abs(math.pi - b) > margin + 1e-9:
            raise EvolutionError(
                f"angle hypothesis |pi - beta| <= min(|pi - xi_plus|, |pi - xi_minus|) "
                f"failed at step {i}")
        if math.log(cur.y_tau / prev.y_tau) < -1e-12:
            raise EvolutionError(
                f"marked point decreased at step {i}: "
                f"{prev.y_tau!r} -> {cur.y_tau!r}")
    return traj.final.y_tau, traj
