"""Optimal cloning efficiencies: closed-form corner points and numeric search.

The closed-form route evaluates the slice maximum of gamma2 at the corner
of the (q, s) region realised by extremal real flags, in exact rational
arithmetic, and certifies the result with a feasibility matrix whose
determinant is exactly zero. The numeric route is an independent check:
a coarse grid over (gamma1, gamma2, gamma3, Re P12, Re P13) filtered by
the PSD test, refined by coordinate-wise pattern search with shrinking
steps. Both are reported side by side; only the slice value is proven
optimal, the unrestricted search supplies evidence.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import feasibility as fz
from .feasibility import (EfficiencyVector, FeasibilityPoint, FlagOverlaps,
                          build_matrix, case_params, gamma2_on_slice, is_psd,
                          intersection_x0, reduce, s_cap, _golden_max)
from .funcspace import family
from .phasestate import GramMatrix, gram, phase_state

OBJECTIVES = ("gamma23", "gamma1")

#: flags realising the slice-optimal corner of the (q, s) region
CORNER_FLAGS = {
    "3bit": {"p12": -1, "p13": 1},
    "2bit": {"p12": -1, "p13": -1},
}

_GRAMS: dict[str, GramMatrix] = {}


def case_gram(case: str) -> GramMatrix:
    """Exact Gram matrix of the case's three candidate phase states."""
    if case not in _GRAMS:
        _GRAMS[case] = gram([phase_state(f) for f in family(case).s_f0])
    return _GRAMS[case]


@dataclass(frozen=True)
class OptimumReport:
    case: str
    objective: str
    mode: str                       # "analytic" | "numeric"
    value: float
    gammas: tuple[float, float, float]
    flags: FlagOverlaps
    certificate: FeasibilityPoint
    value_exact: str | None = None
    gammas_exact: tuple[str, str, str] | None = None
    seed: int | None = None
    evaluations: int = 0
    meta: dict = field(default_factory=dict)

    def to_json(self, tol: float = fz.DEFAULT_TOL) -> dict:
        out = {
            "case": self.case,
            "objective": self.objective,
            "mode": self.mode,
            "value": self.value,
            "value_exact": self.value_exact,
            "gammas": list(self.gammas),
            "gammas_exact": list(self.gammas_exact) if self.gammas_exact else None,
            "P12": [float(self.flags.p12[0]), float(self.flags.p12[1])],
            "P13": [float(self.flags.p13[0]), float(self.flags.p13[1])],
            "certificate": self.certificate.to_json(tol),
        }
        if self.mode == "numeric":
            out["seed"] = self.seed
            out["evaluations"] = self.evaluations
        if self.meta:
            out["meta"] = dict(self.meta)
        return out


def _exact_str(x) -> str:
    return str(x) if isinstance(x, Fraction) else repr(float(x))


def analytic_optimum(case: str, objective: str = "gamma23") -> OptimumReport:
    """Exact slice optimum at the corner (q, s) with its realizing flags.

    For the gamma2+gamma3 objective the corner yields the published exact
    efficiencies; the gamma1 objective is the mirrored problem (swap the
    roles of state 1 and the equal pair) and shares the same corner.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    flags = FlagOverlaps(**CORNER_FLAGS[case])
    q, s = reduce(flags, case)
    g_small, g_big = gamma2_on_slice(q, s, case)
    if objective == "gamma23":
        gammas = (g_small, g_big, g_big)
        value = g_big + g_big
    else:
        gammas = (g_big, g_small, g_small)
        value = g_big
    eff = EfficiencyVector(gammas)
    cert = build_matrix(case_gram(case), eff, flags)
    if not is_psd(cert):
        raise AssertionError("analytic optimum failed its own feasibility certificate")
    return OptimumReport(
        case=case, objective=objective, mode="analytic",
        value=float(value), value_exact=_exact_str(value),
        gammas=tuple(float(g) for g in gammas),
        gammas_exact=tuple(_exact_str(g) for g in gammas),
        flags=flags, certificate=cert,
        meta={"q": _exact_str(q), "s": _exact_str(s)},
    )


# ---------------------------------------------------------------------------
# numeric search
# ---------------------------------------------------------------------------

def _objective_fn(objective: str):
    if objective == "gamma23":
        return lambda p: p[1] + p[2]
    if objective == "gamma1":
        return lambda p: p[0]
    raise ValueError(f"objective must be one of {OBJECTIVES}")


def _clamp(x, lo, hi):
    return lo if x < lo else hi if x > hi else x


def _min_eig_fast(gf, point, complex_flags: bool) -> float | None:
    """Smallest eigenvalue of M for a float search point, or None if the
    flag moduli are out of range. Inlined for the search hot loop; agrees
    with FeasibilityPoint.min_eigenvalue (cross-checked in tests)."""
    if complex_flags:
        g1, g2, g3, a, b, c, d = point
        if a * a + b * b > 1.0 or c * c + d * d > 1.0:
            return None
    else:
        g1, g2, g3, a, c = point
        b = d = 0.0
    x12 = math.sqrt(g1 * g2)
    x13 = math.sqrt(g1 * g3)
    m = [[0j] * 3 for _ in range(3)]
    m[0][0] = complex(gf[0][0] - g1)
    m[1][1] = complex(gf[1][1] - g2)
    m[2][2] = complex(gf[2][2] - g3)
    m[0][1] = gf[0][1] - x12 * gf[0][1] ** 2 * complex(a, b)
    m[1][0] = m[0][1].conjugate()
    m[0][2] = gf[0][2] - x13 * gf[0][2] ** 2 * complex(c, d)
    m[2][0] = m[0][2].conjugate()
    # P23's coefficient is the structural zero at (2, 3) in both case grams
    m[1][2] = complex(gf[1][2])
    m[2][1] = m[1][2].conjugate()
    return fz.hermitian3_eigvals(m)[0]


def numeric_search(case: str, objective: str = "gamma23", resolution: int = 9,
                   iterations: int = 40, seed: int = 0, tol: float = fz.DEFAULT_TOL,
                   complex_flags: bool = False, threads: int = 1) -> OptimumReport:
    """Grid-plus-pattern-search maximisation over (Gamma, P).

    Deterministic for fixed arguments: ties are broken by lexicographic
    argmax and the reduction over grid chunks is order-independent. The
    imaginary flag components are pinned to zero unless ``complex_flags``
    is set; coarse grids never see them improve the objective.

    The objective is flat in every coordinate except gamma2/gamma3 (or
    gamma1), so the pattern search ranks moves by (objective, PSD slack)
    lexicographically: flat coordinates walk towards larger smallest
    eigenvalue, which opens room for the next objective step. Refinement
    starts from the best grid point at each gamma1 level.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    obj = _objective_fn(objective)
    g = case_gram(case)
    gf = tuple(tuple(complex(g.entry(i, j)) for j in range(3)) for i in range(3))

    gamma_axis = [i / (resolution - 1) for i in range(resolution)]
    flag_axis = [-1.0 + 2.0 * i / (resolution - 1) for i in range(resolution)]
    n_flag_axes = 4 if complex_flags else 2
    axes = [gamma_axis] * 3 + [flag_axis] * n_flag_axes

    evaluations = 0

    def scan_chunk(g1):
        # best feasible point in this gamma1 slab, by (objective, point)
        best = None
        stack = [(g1,)]
        count = 0
        while stack:
            prefix = stack.pop()
            depth = len(prefix)
            if depth == len(axes):
                count += 1
                eig = _min_eig_fast(gf, prefix, complex_flags)
                if eig is not None and eig >= -tol:
                    key = (obj(prefix), prefix)
                    if best is None or key > best:
                        best = key
                continue
            for v in axes[depth]:
                stack.append(prefix + (v,))
        return best, count

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan_chunk, gamma_axis))
    else:
        results = [scan_chunk(g1) for g1 in gamma_axis]

    slab_best = []
    for best, n_evals in results:
        evaluations += n_evals
        if best is not None:
            slab_best.append(best)
    if not slab_best:
        raise AssertionError("grid found no feasible point (gamma = 0 is always feasible)")

    lo = [0.0] * 3 + [-1.0] * n_flag_axes
    hi = [1.0] * 3 + [1.0] * n_flag_axes
    cell = [1.0 / (resolution - 1)] * 3 + [2.0 / (resolution - 1)] * n_flag_axes

    best_val, best_point = max(slab_best)
    for _, start in sorted(slab_best, reverse=True):
        val, point, n_ev = _compass_refine(start, obj, gf, tol, complex_flags,
                                           lo, hi, cell, iterations)
        evaluations += n_ev
        if val > best_val or (val == best_val and point > best_point):
            best_val, best_point = val, point

    if complex_flags:
        flags = FlagOverlaps(p12=(best_point[3], best_point[4]),
                             p13=(best_point[5], best_point[6]))
    else:
        flags = FlagOverlaps(p12=best_point[3], p13=best_point[4])
    eff = EfficiencyVector(best_point[:3])
    cert = build_matrix(g, eff, flags)
    return OptimumReport(
        case=case, objective=objective, mode="numeric",
        value=float(best_val), gammas=tuple(float(x) for x in best_point[:3]),
        flags=flags, certificate=cert, seed=seed, evaluations=evaluations,
        meta={"resolution": resolution, "iterations": iterations,
              "complex_flags": complex_flags},
    )


def _compass_refine(start, obj, gf, tol, complex_flags, lo, hi, cell, iterations):
    """Coordinate-wise pattern search, step halving on stall.

    A move is accepted when it improves the objective, or keeps it equal
    while strictly improving the PSD slack (flat coordinates would be
    frozen otherwise). Both orders strictly increase, so no cycling.
    """
    point = tuple(start)
    value = obj(point)
    slack = _min_eig_fast(gf, point, complex_flags)
    steps = list(cell)
    moves = [((d, sgn),) for d in range(len(point)) for sgn in (1.0, -1.0)]
    # paired gamma2/gamma3 moves walk the symmetric ridge directly
    moves += [((1, s2), (2, s3)) for s2 in (1.0, -1.0) for s3 in (1.0, -1.0)]
    shrinks = 0
    evals = 0
    sweeps = 0
    while shrinks < iterations and sweeps < 20000:
        sweeps += 1
        best_move = None   # (value, slack, cand)
        for move in moves:
            cand = list(point)
            for d, sgn in move:
                cand[d] = _clamp(cand[d] + sgn * steps[d], lo[d], hi[d])
            cand = tuple(cand)
            if cand == point:
                continue
            evals += 1
            eig = _min_eig_fast(gf, cand, complex_flags)
            if eig is None or eig < -tol:
                continue
            key = (obj(cand), eig, cand)
            if best_move is None or key > best_move:
                best_move = key
        accepted = False
        if best_move is not None:
            v, e, cand = best_move
            if v > value or (v == value and e > slack + 1e-15):
                point, value, slack = cand, v, e
                accepted = True
        if not accepted:
            steps = [s_ / 2.0 for s_ in steps]
            shrinks += 1
    return value, point, evals


# ---------------------------------------------------------------------------
# equal efficiencies
# ---------------------------------------------------------------------------

def equal_gamma_optimum(case: str) -> OptimumReport:
    """Maximum common gamma with gamma1 = gamma2 = gamma3 over all flags.

    Equal efficiencies sit on the y = 2x line, so the common gamma equals
    the parabola-line intersection x0(q, s); x0 grows with s and shrinks
    with q, which pushes the optimum onto the s = s_cap(q) curve. The
    one-dimensional profile is maximised numerically; for the 2-bit case
    the result is the algebraic corner value (6 - 2*sqrt(2))/7.
    """
    cp = case_params(case)
    qb = float(cp.q_bound)

    def profile(qv):
        return float(intersection_x0(qv, s_cap(qv, case), case))

    qm, _ = _golden_max(profile, -qb, qb, tol=1e-14)
    candidates = [(-qb, profile(-qb)), (qb, profile(qb)), (qm, profile(qm))]
    q_best, g_best = max(candidates, key=lambda t: t[1])

    meta = {"q": q_best, "s": float(s_cap(q_best, case))}
    value_exact = None
    if case == "2bit":
        # corner lands exactly at q = -1/2, s = 7/8
        g_best = (6.0 - 2.0 * math.sqrt(2.0)) / 7.0
        q_best = -0.5
        value_exact = "(6-2*sqrt(2))/7"
        meta = {"q": -0.5, "s": 0.875}

    flags = FlagOverlaps(**CORNER_FLAGS[case]) if abs(q_best - float(fz.Q_CORNER[case])) < 1e-9 \
        else _flags_for_q(q_best, case)
    eff = EfficiencyVector((g_best, g_best, g_best))
    cert = build_matrix(case_gram(case), eff, flags)
    if not is_psd(cert):
        raise AssertionError("equal-efficiency optimum failed its feasibility certificate")
    return OptimumReport(
        case=case, objective="equal", mode="analytic" if value_exact else "numeric",
        value=g_best, value_exact=value_exact,
        gammas=(g_best, g_best, g_best), flags=flags, certificate=cert,
        meta=meta,
    )


def _flags_for_q(qv: float, case: str) -> FlagOverlaps:
    """Real balanced flags realising (q, s_cap(q))."""
    cp = case_params(case)
    half = qv * cp.q_den / 2.0
    if cp.q_sign < 0:
        return FlagOverlaps(p12=half, p13=-half)
    return FlagOverlaps(p12=half, p13=half)
