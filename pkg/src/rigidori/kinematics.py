"""General degree-4 vertex kinematics: opposite/adjacent half-angle-tangent
relations, state solving, folding ranges, configuration-curve tracing, and
the duality verification machinery.

The two governing relations, in the package crease convention and with
t_i = tan(rho_i / 2):

opposite creases (i and i+2):

    t_i^2 = [-(1 + t^2) cos(a_{i-1} + a_i) + t^2 cos(a_{i+1} - a_{i+2})
             + cos(a_{i+1} + a_{i+2})]
          / [ (1 + t^2) cos(a_{i-1} - a_i) - t^2 cos(a_{i+1} - a_{i+2})
             - cos(a_{i+1} + a_{i+2})],        t = t_{i+2}

adjacent creases (i and i+1):

    cos(a_{i+2}) (1 + t_i^2)(1 + t_{i+1}^2)
        = cos(a_{i+1} - a_i - a_{i-1}) t_{i+1}^2
        + cos(a_{i+1} + a_i - a_{i-1}) t_i^2          <- corrected slot
        + cos(a_{i+1} - a_i + a_{i-1}) t_i^2 t_{i+1}^2
        + cos(a_{i+1} + a_i + a_{i-1})
        + 4 sin(a_{i+1}) sin(a_{i-1}) t_i t_{i+1}.

The "corrected slot" term is quadratic in t_i; written with t_{i+1}^2
there instead, the relation contradicts both the closed-form flat-foldable
modes and the closure oracle (see adjacent_origin_slopes and the tests).
The uncorrected variant stays available behind ``corrected=False`` for
comparison. Every solved state is certified against the closure oracle;
the analytic relations alone admit spurious sign combinations.

Both relations are invariant under a_i -> pi - a_i up to sign flips of one
opposite crease pair, which is the elliptic-hyperbolic duality; see
verify_duality and dual_state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .closure import LoopEvaluator, oracle_solve
from .errors import (
    BranchNotRealizableError,
    DegenerateConfigurationError,
    InfeasibleDriverError,
    InputError,
    NoRealFoldError,
    TraceAbortError,
)
from .numerics import DEFAULT_TOL, Tolerances
from .vertex import Curvature, FoldState, Vertex4, classify, dual

_RATIO_ZERO_CLAMP = 1e-11
_COEF_EPS = 1e-13
_SIGN_EPS = 1e-8  # fold tangents below this count as degenerate for labeling


@dataclass(frozen=True)
class BranchLabel:
    """Sign structure of a configuration-space branch.

    opposite_sign_1 is the relative sign within the (t1, t3) crease pair
    (+1 when the pair folds with equal-signed tangents, -1 when opposite),
    opposite_sign_2 the same for (t2, t4). The four combinations enumerate
    all candidate branches; only those passing closure are realizable.
    """

    opposite_sign_1: int
    opposite_sign_2: int

    def __post_init__(self):
        if self.opposite_sign_1 not in (-1, 1) or self.opposite_sign_2 not in (-1, 1):
            raise InputError("branch signs must be +1 or -1")

    def matches(self, state: FoldState, eps: float = _SIGN_EPS) -> bool:
        """Degenerate (near-zero or flat) tangents act as wildcards."""
        t = state.half_tangents()
        p1 = _pair_sign(t[0], t[2], eps)
        p2 = _pair_sign(t[1], t[3], eps)
        return (p1 == 0 or p1 == self.opposite_sign_1) and (
            p2 == 0 or p2 == self.opposite_sign_2
        )


BRANCH_PP = BranchLabel(+1, +1)
BRANCH_PM = BranchLabel(+1, -1)
BRANCH_MP = BranchLabel(-1, +1)
BRANCH_MM = BranchLabel(-1, -1)
ALL_BRANCHES = (BRANCH_PP, BRANCH_PM, BRANCH_MP, BRANCH_MM)

#: Branch labels of the two flat-foldable modes (regression-locked).
MODE1_BRANCH = BRANCH_PM
MODE2_BRANCH = BRANCH_MP


def _pair_sign(ta: float, tb: float, eps: float = _SIGN_EPS) -> int:
    if abs(ta) <= eps or abs(tb) <= eps:
        return 0
    if math.isinf(ta) or math.isinf(tb):
        sa = math.copysign(1.0, ta)
        sb = math.copysign(1.0, tb)
        return int(sa * sb)
    return 1 if ta * tb > 0 else -1


def branch_of(state: FoldState) -> BranchLabel | None:
    """Branch label of a state, or None when a pair is degenerate."""
    t = state.half_tangents()
    p1 = _pair_sign(t[0], t[2])
    p2 = _pair_sign(t[1], t[3])
    if p1 == 0 or p2 == 0:
        return None
    return BranchLabel(p1, p2)


# ---------------------------------------------------------------------------
# the two analytic relations


def opposite_t_squared(
    v: Vertex4, i: int, t_opp: float, tol: Tolerances = DEFAULT_TOL
) -> float:
    """t_i^2 from the opposite-crease relation, given t_{i+2} = t_opp.

    Infinite t_opp (a flat-folded opposite crease) is handled by the
    coefficient-ratio limit, never by evaluating tan at pi/2. Raises
    NoRealFoldError when the ratio is negative (no real fold at this
    driver) and DegenerateConfigurationError on 0/0.
    """
    a = v.alpha
    c_sum_in = math.cos(a(i - 1) + a(i))
    c_dif_in = math.cos(a(i - 1) - a(i))
    c_dif_op = math.cos(a(i + 1) - a(i + 2))
    c_sum_op = math.cos(a(i + 1) + a(i + 2))
    if math.isinf(t_opp):
        num = -c_sum_in + c_dif_op
        den = c_dif_in - c_dif_op
    else:
        s2 = t_opp * t_opp
        num = -(1.0 + s2) * c_sum_in + s2 * c_dif_op + c_sum_op
        den = (1.0 + s2) * c_dif_in - s2 * c_dif_op - c_sum_op
    if abs(den) < _COEF_EPS:
        if abs(num) < _COEF_EPS:
            raise DegenerateConfigurationError(
                f"opposite relation indeterminate (0/0) at crease {i}"
            )
        if num > 0:
            return math.inf
        raise NoRealFoldError(f"no real solution for t_{i}^2 at this driver")
    ratio = num / den
    if abs(ratio) < 1e-13:  # kill fp noise at exact zeros of the numerator
        return 0.0
    if ratio < 0.0:
        if ratio > -_RATIO_ZERO_CLAMP:
            return 0.0
        raise NoRealFoldError(
            f"no real solution for t_{i}^2 at this driver (ratio {ratio:.3e})"
        )
    return ratio


def _adjacent_coefs(v: Vertex4, i: int) -> tuple[float, float, float, float, float, float]:
    a = v.alpha
    return (
        math.cos(a(i + 2)),
        math.cos(a(i + 1) - a(i) - a(i - 1)),
        math.cos(a(i + 1) + a(i) - a(i - 1)),
        math.cos(a(i + 1) - a(i) + a(i - 1)),
        math.cos(a(i + 1) + a(i) + a(i - 1)),
        4.0 * math.sin(a(i + 1)) * math.sin(a(i - 1)),
    )


def adjacent_residual(
    v: Vertex4,
    i: int,
    t_i: float,
    t_next: float,
    corrected: bool = True,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """LHS - RHS of the adjacent-crease relation for the pair (i, i+1).

    Zero (to scale) iff the pair is kinematically consistent. With
    ``corrected=False`` evaluates the uncorrected variant whose second
    quadratic term sits on t_{i+1}^2; kept only for comparison.
    """
    if not (math.isfinite(t_i) and math.isfinite(t_next)):
        raise InputError("adjacent_residual requires finite tangents")
    cA, c1, c2, c3, c4, c5 = _adjacent_coefs(v, i)
    second = t_i * t_i if corrected else t_next * t_next
    lhs = cA * (1.0 + t_i * t_i) * (1.0 + t_next * t_next)
    rhs = (
        c1 * t_next * t_next
        + c2 * second
        + c3 * t_i * t_i * t_next * t_next
        + c4
        + c5 * t_i * t_next
    )
    return lhs - rhs


def adjacent_origin_slopes(
    v: Vertex4, i: int = 1, corrected: bool = True
) -> tuple[float, float]:
    """Slopes t_{i+1}/t_i of the adjacent relation's zero set through the
    unfolded state (meaningful for Euclidean vertices).

    For a Euclidean flat-foldable vertex the corrected relation yields
    exactly the two mode lines {-k1, 1/k2}.
    """
    cA, c1, c2, c3, c4, c5 = _adjacent_coefs(v, i)
    if corrected:
        qa, qb, qc = cA - c1, -c5, cA - c2
    else:
        qa, qb, qc = cA - c1 - c2, -c5, cA
    if abs(qa) < _COEF_EPS:
        if abs(qb) < _COEF_EPS:
            raise DegenerateConfigurationError("origin slope equation is degenerate")
        return (-qc / qb, math.inf)
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        raise NoRealFoldError("no real through-origin fold directions")
    r = math.sqrt(disc)
    m1 = (-qb - r) / (2.0 * qa)
    m2 = (-qb + r) / (2.0 * qa)
    return tuple(sorted((m1, m2)))


def _solve_quadratic_candidates(qa: float, qb: float, qc: float) -> list[float] | None:
    """Roots of qa x^2 + qb x + qc = 0 as fold-tangent candidates.

    A vanishing leading coefficient means the projective root escaped to
    infinity (the coupled crease flat-folds), so +-inf are returned as
    candidates alongside any finite root. Returns None when the equation
    is identically satisfied (unconstrained pair on a degenerate vertex).
    """
    scale = max(abs(qa), abs(qb), abs(qc), 1e-3)
    if abs(qa) < _COEF_EPS * scale:
        if abs(qb) < _COEF_EPS * scale:
            if abs(qc) < _COEF_EPS * scale:
                return None
            return [math.inf, -math.inf]
        return [-qc / qb, math.inf, -math.inf]
    disc = qb * qb - 4.0 * qa * qc
    if abs(disc) < 1e-12 * scale * scale:  # double root, +- fp noise
        disc = 0.0
    if disc < 0.0:
        if disc > -1e-10 * scale * scale:
            disc = 0.0
        else:
            return []
    r = math.sqrt(disc)
    q = -0.5 * (qb + r) if qb >= 0 else -0.5 * (qb - r)
    roots = [q / qa]
    roots.append(qc / q if abs(q) > 0 else roots[0])
    out: list[float] = []
    for x in roots:
        if not any(abs(x - y) <= 1e-12 * max(1.0, abs(x)) for y in out):
            out.append(x)
    return out


def _adjacent_roots_for_next(v: Vertex4, i: int, t_i: float) -> list[float] | None:
    """Candidate values of t_{i+1} from the corrected adjacent relation
    given t_i (infinite t_i via the leading-coefficient limit)."""
    cA, c1, c2, c3, c4, c5 = _adjacent_coefs(v, i)
    if math.isinf(t_i):
        qa, qb, qc = cA - c3, 0.0, cA - c2
    else:
        s2 = t_i * t_i
        qa = cA * (1.0 + s2) - c1 - c3 * s2
        qb = -c5 * t_i
        qc = cA * (1.0 + s2) - c2 * s2 - c4
    return _solve_quadratic_candidates(qa, qb, qc)


def _adjacent_roots_for_prev(v: Vertex4, i: int, t_next: float) -> list[float] | None:
    """Candidate values of t_i from the corrected adjacent relation given
    t_{i+1} = t_next."""
    cA, c1, c2, c3, c4, c5 = _adjacent_coefs(v, i)
    if math.isinf(t_next):
        qa, qb, qc = cA - c3, 0.0, cA - c1
    else:
        u2 = t_next * t_next
        qa = cA * (1.0 + u2) - c2 - c3 * u2
        qb = -c5 * t_next
        qc = cA * (1.0 + u2) - c1 * u2 - c4
    return _solve_quadratic_candidates(qa, qb, qc)


# ---------------------------------------------------------------------------
# state assembly and certification


def _dedupe_states(states: list[FoldState]) -> list[FoldState]:
    ordered = sorted(states, key=lambda s: s.rhos)
    out: list[FoldState] = []
    for s in ordered:
        if not any(
            max(abs(a - b) for a, b in zip(s.rhos, kept.rhos)) < 1e-9 for kept in out
        ):
            out.append(s)
    return out


def _t_to_rho(t: float) -> float:
    return 2.0 * math.atan(t)  # atan(+-inf) = +-pi/2, so +-pi comes out exact


def _rho_to_t(rho: float) -> float:
    if abs(abs(rho) - math.pi) < 1e-15:
        return math.copysign(math.inf, rho)
    return math.tan(0.5 * rho)


class VertexKinematics:
    """Per-vertex solver context: caches the loop evaluator and provides
    candidate enumeration, branch-resolved solving, range detection, and
    curve tracing. Stateless between calls; safe to share read-only."""

    def __init__(self, v: Vertex4, tol: Tolerances = DEFAULT_TOL):
        self.vertex = v
        self.tol = tol
        self.loop = LoopEvaluator(v)

    # -- candidate enumeration ------------------------------------------

    def certified_candidates(self, driver_index: int, driver: float) -> list[FoldState]:
        """All closure-certified states with the given driver angle.

        Magnitudes come from the opposite relation, adjacent-pair values
        from the corrected adjacent relation, remaining signs are
        enumerated, the adjacent residuals act as a fast pre-filter, and
        the closure oracle issues the final certificate.
        """
        v, tol = self.vertex, self.tol
        d = (driver_index - 1) % 4
        t_d = _rho_to_t(driver)

        sq_opp = opposite_t_squared(v, d + 3, t_d, tol)  # crease opposite the driver
        mag_opp = math.inf if math.isinf(sq_opp) else math.sqrt(sq_opp)
        opp_options = [mag_opp] if mag_opp == 0.0 else [mag_opp, -mag_opp]

        next_roots = _adjacent_roots_for_next(v, d + 1, t_d)
        candidates: list[FoldState] = []
        for t_opp in opp_options:
            roots = next_roots
            if roots is None:
                # pair (driver, next) unconstrained (degenerate vertex):
                # fall back to the (next, opposite) adjacent relation
                roots = _adjacent_roots_for_prev(v, d + 2, t_opp)
                if roots is None:
                    roots = []
            for t_next in roots:
                try:
                    sq_far = opposite_t_squared(v, d + 4, t_next, tol)
                except NoRealFoldError:
                    continue
                except DegenerateConfigurationError:
                    continue
                mag_far = math.inf if math.isinf(sq_far) else math.sqrt(sq_far)
                far_options = [mag_far] if mag_far == 0.0 else [mag_far, -mag_far]
                for t_far in far_options:
                    t = [0.0] * 4
                    t[d] = t_d
                    t[(d + 1) % 4] = t_next
                    t[(d + 2) % 4] = t_opp
                    t[(d + 3) % 4] = t_far
                    t = [0.0 if abs(x) < 1e-12 else x for x in t]
                    if not self._adjacent_prefilter(t):
                        continue
                    state = FoldState(tuple(_t_to_rho(x) for x in t))
                    if self.loop.residual(state.rhos) < tol.residual_tol:
                        candidates.append(state)
        return _dedupe_states(candidates)

    def _adjacent_prefilter(self, t: list[float]) -> bool:
        """Cheap scaled screen on all four adjacent relations; tolerant,
        since the closure oracle is the real gate."""
        for i in range(4):
            ti, tj = t[i], t[(i + 1) % 4]
            if math.isinf(ti) or math.isinf(tj):
                continue
            res = adjacent_residual(self.vertex, i + 1, ti, tj, tol=self.tol)
            scale = (1.0 + ti * ti) * (1.0 + tj * tj)
            if abs(res) > 1e-6 * scale:
                return False
        return True

    # -- solving ----------------------------------------------------------

    def solve_state(self, driver_index: int, driver: float, branch: BranchLabel) -> FoldState:
        if not -math.pi <= driver <= math.pi:
            raise InputError("driver must lie in [-pi, pi]")
        try:
            candidates = self.certified_candidates(driver_index, driver)
        except NoRealFoldError as exc:
            raise InfeasibleDriverError(str(exc)) from exc
        if not candidates:
            raise BranchNotRealizableError(
                f"no sign assignment passes closure at driver {driver:.6g}"
            )
        matching = [s for s in candidates if branch.matches(s)]
        if not matching:
            raise BranchNotRealizableError(
                f"branch {branch} not realizable at driver {driver:.6g}"
            )
        return min(matching, key=lambda s: s.rhos)

    # -- folding range ----------------------------------------------------

    def find_seeds(
        self, driver_index: int, branch: BranchLabel, grid: int = 33
    ) -> list[tuple[float, FoldState]]:
        """Feasible (driver, state) seed points on the branch.

        Euclidean vertices are seeded at the unfolded state first; the
        rest of the grid covers (-pi, pi). Seeds whose branch label is
        definite (no degenerate crease pair) are preferred; wildcard
        seeds are used only when no definite seed exists anywhere.
        """
        definite: list[tuple[float, FoldState]] = []
        wildcard: list[tuple[float, FoldState]] = []
        drivers = [0.0] if classify(self.vertex, self.tol).curvature is Curvature.EUCLIDEAN else []
        drivers += [(-1.0 + 2.0 * k / (grid - 1)) * (math.pi - 1e-9) for k in range(grid)]
        for drv in drivers:
            try:
                cands = self.certified_candidates(driver_index, drv)
            except (NoRealFoldError, DegenerateConfigurationError):
                continue
            for s in cands:
                if branch_of(s) == branch:
                    definite.append((drv, s))
                    break
                if branch.matches(s):
                    wildcard.append((drv, s))
                    break
        return definite if definite else wildcard

    def folding_range(
        self, driver_index: int, branch: BranchLabel, grid: int = 33
    ) -> "FoldingRange":
        seeds = self.find_seeds(driver_index, branch, grid)
        if not seeds:
            return FoldingRange(
                intervals=(),
                endpoint_causes=(),
                diagnostic="no feasible seed found on this branch",
            )
        intervals: list[tuple[float, float]] = []
        causes: list[tuple[str, str]] = []
        for drv, state in seeds:
            if any(lo - 1e-9 <= drv <= hi + 1e-9 for lo, hi in intervals):
                continue
            lo, cause_lo = self._expand(driver_index, branch, drv, state, -1.0)
            hi, cause_hi = self._expand(driver_index, branch, drv, state, +1.0)
            if hi - lo < 1e-6:  # isolated degenerate point, not a branch arc
                continue
            intervals.append((lo, hi))
            causes.append((cause_lo, cause_hi))
        if not intervals:
            return FoldingRange(
                intervals=(),
                endpoint_causes=(),
                diagnostic="only isolated degenerate states found on this branch",
            )
        # merge overlapping expansions from distinct seeds
        order = sorted(range(len(intervals)), key=lambda k: intervals[k])
        merged: list[tuple[float, float]] = []
        merged_causes: list[tuple[str, str]] = []
        for k in order:
            lo, hi = intervals[k]
            if merged and lo <= merged[-1][1] + 1e-9:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
                    merged_causes[-1] = (merged_causes[-1][0], causes[k][1])
            else:
                merged.append((lo, hi))
                merged_causes.append(causes[k])
        return FoldingRange(
            intervals=tuple(merged),
            endpoint_causes=tuple(merged_causes),
            diagnostic="",
        )

    #: per-step continuation jump cap (rad, max componentwise); a curve
    #: hitting a flat-folded corner of [-pi, pi]^4 only "continues" by a
    #: coordinate teleport of ~2*pi, which this rejects
    _JUMP_CAP = 1.5

    def _solve_near(
        self,
        driver_index: int,
        driver: float,
        prev: FoldState,
        branch: BranchLabel | None = None,
    ) -> FoldState | None:
        """Continuation step: certified candidate nearest to prev, with a
        tie-break preferring the previous sign vector. Candidates that
        leave the branch or jump discontinuously are rejected."""
        try:
            cands = self.certified_candidates(driver_index, driver)
        except (NoRealFoldError, DegenerateConfigurationError):
            return None
        if branch is not None:
            cands = [s for s in cands if branch.matches(s)]
        cands = [
            s
            for s in cands
            if max(abs(a - b) for a, b in zip(s.rhos, prev.rhos)) <= self._JUMP_CAP
        ]
        if not cands:
            return None

        def key(s: FoldState):
            dist = sum((a - b) ** 2 for a, b in zip(s.rhos, prev.rhos))
            sign_mismatch = sum(
                1
                for a, b in zip(s.rhos, prev.rhos)
                if abs(a) > 1e-9 and abs(b) > 1e-9 and (a > 0) != (b > 0)
            )
            return (dist, sign_mismatch, s.rhos)

        return min(cands, key=key)

    _EXPAND_STEP = 0.05  # internal probing stride; curve samples obey trace_step_max

    def _expand(
        self,
        driver_index: int,
        branch: BranchLabel,
        start: float,
        start_state: FoldState,
        direction: float,
    ) -> tuple[float, str]:
        """March the driver from a seed until infeasibility.

        On failure the stride shrinks geometrically, which both recovers
        from spurious failures of a too-large continuation step and
        locates a genuine endpoint to solver_tol.
        """
        tol = self.tol
        step = self._EXPAND_STEP
        drv, state = start, start_state
        limit = math.pi if direction > 0 else -math.pi
        while step > tol.solver_tol:
            advanced = False
            while (limit - drv) * direction > 1e-15:
                nxt = drv + direction * step
                if (nxt - limit) * direction > 0:
                    nxt = limit
                cand = self._solve_near(driver_index, nxt, state, branch)
                if cand is None:
                    break
                drv, state = nxt, cand
                advanced = True
            if (limit - drv) * direction <= 1e-15:
                return drv, self._endpoint_cause(driver_index, drv, state)
            step *= 0.25
            if not advanced and step <= tol.solver_tol:
                break
        return drv, self._endpoint_cause(driver_index, drv, state)

    def _endpoint_cause(self, driver_index: int, drv: float, state: FoldState) -> str:
        # sqrt-type corner approaches reach |rho| = pi - O(sqrt(solver_tol))
        if any(abs(abs(r) - math.pi) < 1e-4 for r in state.rhos):
            return "flat_folded_crease"
        eps = max(10.0 * self.tol.solver_tol, 1e-10)
        probe = drv + math.copysign(eps, drv if drv != 0 else 1.0)
        try:
            t_probe = _rho_to_t(max(-math.pi, min(math.pi, probe)))
            opposite_t_squared(self.vertex, ((driver_index - 1) % 4) + 3, t_probe, self.tol)
        except NoRealFoldError:
            return "opposite_relation_negative"
        except DegenerateConfigurationError:
            return "degenerate_configuration"
        return "closure_infeasible"

    # -- tracing ----------------------------------------------------------

    def trace_curve(
        self, driver_index: int, branch: BranchLabel, n_samples: int
    ) -> "ConfigCurve":
        if n_samples < 2:
            raise InputError("n_samples must be at least 2")
        rng = self.folding_range(driver_index, branch)
        if not rng.intervals:
            raise InfeasibleDriverError(
                f"empty folding range for branch {branch}: {rng.diagnostic}"
            )
        lo, hi = max(rng.intervals, key=lambda iv: iv[1] - iv[0])
        span = hi - lo
        n = max(n_samples, int(math.ceil(span / self.tol.trace_step_max)) + 1)
        drivers = [lo + span * k / (n - 1) for k in range(n)]

        # start from the interval interior: the endpoints are typically
        # flat-folded corner states whose coordinate representative is
        # ambiguous cold but unambiguous when approached with continuity
        start_idx = n // 2
        states: list[FoldState | None] = [None] * n
        states[start_idx] = self.solve_state(driver_index, drivers[start_idx], branch)

        def march(indices):
            state = states[start_idx]
            prev_drv = drivers[start_idx]
            for idx in indices:
                drv = drivers[idx]
                nxt = self._solve_near(driver_index, drv, state, branch)
                if nxt is None:
                    nxt = self._refine_step(driver_index, branch, prev_drv, state, drv)
                if nxt is None:
                    raise TraceAbortError(
                        f"continuation failed at driver {drv:.6g}",
                        partial_curve=self._partial(driver_index, branch, drivers, states),
                    )
                states[idx] = nxt
                state, prev_drv = nxt, drv

        march(range(start_idx + 1, n))
        march(range(start_idx - 1, -1, -1))
        samples = [s for s in states if s is not None]
        residuals = [self.loop.residual(s.rhos) for s in samples]
        return self._make_curve(driver_index, branch, drivers, samples, residuals)

    def _refine_step(self, driver_index, branch, prev_drv, state, drv):
        """Approach a failing sample through geometrically finer sub-steps."""
        for depth in range(1, 7):
            sub = 2**depth
            approached = state
            ok = True
            for j in range(1, sub + 1):
                mid = prev_drv + (drv - prev_drv) * j / sub
                step_state = self._solve_near(driver_index, mid, approached, branch)
                if step_state is None:
                    ok = False
                    break
                approached = step_state
            if ok:
                return approached
        return None

    def _partial(self, driver_index, branch, drivers, states):
        pairs = [(d, s) for d, s in zip(drivers, states) if s is not None]
        if not pairs:
            return None
        drv = [p[0] for p in pairs]
        smp = [p[1] for p in pairs]
        res = [self.loop.residual(s.rhos) for s in smp]
        try:
            return self._make_curve(driver_index, branch, drv, smp, res)
        except InputError:
            return None

    def _make_curve(self, driver_index, branch, drivers, samples, residuals):
        return ConfigCurve(
            vertex=self.vertex,
            branch=branch,
            driver_index=driver_index,
            drivers=tuple(drivers),
            samples=tuple(samples),
            residuals=tuple(residuals),
            tol=self.tol,
        )


@dataclass(frozen=True)
class FoldingRange:
    """Maximal feasible driver interval(s) around the found seeds, with
    endpoint causes in {flat_folded_crease, opposite_relation_negative,
    closure_infeasible, degenerate_configuration}."""

    intervals: tuple[tuple[float, float], ...]
    endpoint_causes: tuple[tuple[str, str], ...]
    diagnostic: str = ""

    def __bool__(self):
        return bool(self.intervals)


@dataclass(frozen=True)
class ConfigCurve:
    """An ordered, closure-certified trace of one configuration branch."""

    vertex: Vertex4
    branch: BranchLabel
    driver_index: int
    drivers: tuple[float, ...]
    samples: tuple[FoldState, ...]
    residuals: tuple[float, ...]
    tol: Tolerances = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self):
        if len(self.samples) != len(self.drivers) or len(self.residuals) != len(self.drivers):
            raise InputError("curve arrays must have equal length")
        for r in self.residuals:
            if not r < self.tol.residual_tol:
                raise InputError("curve contains a non-certified sample")
        diffs = [b - a for a, b in zip(self.drivers, self.drivers[1:])]
        if diffs:
            if not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
                raise InputError("driver must be strictly monotone along the curve")
            if max(abs(d) for d in diffs) > self.tol.trace_step_max + 1e-12:
                raise InputError("driver step exceeds trace_step_max")


# ---------------------------------------------------------------------------
# module-level convenience wrappers (one-shot calls)


def solve_state(
    v: Vertex4,
    driver_index: int,
    driver: float,
    branch: BranchLabel,
    tol: Tolerances = DEFAULT_TOL,
) -> FoldState:
    """The unique closure-certified state on `branch` with the given
    driver angle at crease `driver_index`."""
    return VertexKinematics(v, tol).solve_state(driver_index, driver, branch)


def folding_range(
    v: Vertex4,
    driver_index: int,
    branch: BranchLabel,
    tol: Tolerances = DEFAULT_TOL,
    grid: int = 33,
) -> FoldingRange:
    return VertexKinematics(v, tol).folding_range(driver_index, branch, grid)


def trace_curve(
    v: Vertex4,
    driver_index: int,
    branch: BranchLabel,
    n_samples: int,
    tol: Tolerances = DEFAULT_TOL,
) -> ConfigCurve:
    """Monotone driver sweep across the folding range with adaptive steps
    capped at trace_step_max; every sample closure-certified. n_samples is
    a lower bound on the sample count."""
    return VertexKinematics(v, tol).trace_curve(driver_index, branch, n_samples)


# ---------------------------------------------------------------------------
# duality


def dual_state(s: FoldState) -> FoldState:
    """The matched state of the dual vertex: the (1,3) crease pair is
    preserved, the (2,4) pair flips sign."""
    r = s.rhos
    return FoldState((r[0], -r[1], r[2], -r[3]))


@dataclass(frozen=True)
class DualityBranchReport:
    branch: BranchLabel
    driver_index: int
    n_samples: int
    max_abs_rho_mismatch: float
    sign_pattern_ok: bool


@dataclass(frozen=True)
class DualityReport:
    vertex: Vertex4
    branches: tuple[DualityBranchReport, ...]

    @property
    def max_abs_rho_mismatch(self) -> float:
        return max((b.max_abs_rho_mismatch for b in self.branches), default=0.0)

    @property
    def sign_pattern_ok(self) -> bool:
        return all(b.sign_pattern_ok for b in self.branches)

    @property
    def n_branches(self) -> int:
        return len(self.branches)


def _sign_pattern_is_dual(s: FoldState, sd: FoldState, eps: float = 1e-7) -> bool:
    """True when exactly one opposite crease pair keeps its signs and the
    other flips, comparing s on C with sd on C* (up to a global flip)."""
    flips, keeps = set(), set()
    for i in range(4):
        a, b = s.rhos[i], sd.rhos[i]
        if abs(a) < eps or abs(b) < eps:
            continue
        (flips if (a > 0) != (b > 0) else keeps).add(i % 2)
    direct = not (flips & keeps)
    # global flip of sd is the same geometric matching
    flips2, keeps2 = keeps, flips
    mirrored = not (flips2 & keeps2)
    return direct or mirrored


def verify_duality(
    v: Vertex4,
    driver_index: int = 1,
    n_samples: int = 25,
    tol: Tolerances = DEFAULT_TOL,
    branches: tuple[BranchLabel, ...] = ALL_BRANCHES,
) -> DualityReport:
    """Trace every realizable branch of C and check that the dual vertex
    reproduces it with matched |rho| and the one-pair-flipped sign
    pattern. Dual states are re-solved on C* through the closure oracle,
    seeded from the sign-mapped states, so the check is end to end."""
    vd = dual(v)
    kin = VertexKinematics(v, tol)
    dual_loop = LoopEvaluator(vd)
    reports = []
    for branch in branches:
        try:
            curve = kin.trace_curve(driver_index, branch, n_samples)
        except (InfeasibleDriverError, TraceAbortError):
            continue
        worst = 0.0
        signs_ok = True
        for s in curve.samples:
            seed = dual_state(s)
            drv = seed.rhos[(driver_index - 1) % 4]
            rep = oracle_solve(vd, driver_index, drv, seed, tol)
            if not rep.converged:
                worst = math.inf
                continue
            sd = rep.state
            if dual_loop.residual(sd.rhos) >= tol.residual_tol:
                worst = math.inf
                continue
            worst = max(
                worst,
                max(abs(abs(a) - abs(b)) for a, b in zip(s.rhos, sd.rhos)),
            )
            if not _sign_pattern_is_dual(s, sd):
                signs_ok = False
        reports.append(
            DualityBranchReport(
                branch=branch,
                driver_index=driver_index,
                n_samples=len(curve.samples),
                max_abs_rho_mismatch=worst,
                sign_pattern_ok=signs_ok,
            )
        )
    return DualityReport(vertex=v, branches=tuple(reports))
