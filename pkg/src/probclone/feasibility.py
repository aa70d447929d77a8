"""Probabilistic-cloning feasibility: the PSD criterion and its reduced form.

An efficiency vector Gamma = (gamma1, gamma2, gamma3) is achievable for
cloning three linearly independent candidate states iff, for some flag
overlaps P (inner products of the heralding-flag failure states,
|P_ij| <= 1), the matrix

    M_ij = G_ij - sqrt(gamma_i gamma_j) * G_ij^2 * P_ij      (P_ii = 1)

is positive semidefinite, where G is the candidates' Gram matrix. This
module builds M, tests positive semidefiniteness (exact rational minors
whenever the inputs allow it, closed-form eigenvalues otherwise), and
implements the reduced coordinates that collapse the criterion on the
gamma2 = gamma3 slice to

    c0 - q*x + s*x^2  >=  y  >=  2*x  >=  0

with x = sqrt(gamma1*gamma2), y = gamma1 + gamma2, and (q, s) quadratic
in the flag components. Closed-form boundary curves of the (q, s) and
(v, w) regions are provided as data.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._exact import (as_fraction, exact_sqrt, is_rational, qc, qc_abs2, qc_conj,
                     qc_mul, qc_to_complex)
from .phasestate import GramMatrix

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class _CaseParams:
    c0: Fraction          # constant term of the slice parabola
    q_bound: Fraction     # |q| <= q_bound
    s_floor: Fraction     # minimum s
    q_den: int            # q = (a + q_sign*c) / q_den
    q_sign: int
    s_den: int            # s = 1 - (a^2+b^2+c^2+d^2) / s_den
    cap_coeff: Fraction   # s <= 1 - cap_coeff * q^2


_CASES = {
    "3bit": _CaseParams(c0=Fraction(7, 8), q_bound=Fraction(1, 16),
                        s_floor=Fraction(127, 128), q_den=32,
                        q_sign=-1, s_den=256, cap_coeff=Fraction(2)),
    "2bit": _CaseParams(c0=Fraction(1, 2), q_bound=Fraction(1, 2),
                        s_floor=Fraction(7, 8), q_den=4,
                        q_sign=+1, s_den=16, cap_coeff=Fraction(1, 2)),
}


def case_params(case: str) -> _CaseParams:
    try:
        return _CASES[case]
    except KeyError:
        raise ValueError(f"case must be one of {tuple(_CASES)}, got {case!r}") from None


def s_cap(q, case: str):
    """Maximum attainable s for a given q (flags real, balanced)."""
    return 1 - case_params(case).cap_coeff * q * q


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

def _coerce_component(x):
    """Keep ints/Fractions exact, everything else becomes float."""
    if is_rational(x):
        return as_fraction(x)
    return float(x)


def _coerce_pair(p):
    """Accept real, complex, or (re, im) and return a (re, im) pair."""
    if isinstance(p, complex):
        return (float(p.real), float(p.imag))
    if isinstance(p, (tuple, list)):
        if len(p) != 2:
            raise ValueError(f"expected (re, im) pair, got {p!r}")
        return (_coerce_component(p[0]), _coerce_component(p[1]))
    return (_coerce_component(p), _coerce_component(0))


@dataclass(frozen=True)
class EfficiencyVector:
    """Cloning success probabilities (gamma1, gamma2, gamma3), each in [0, 1]."""

    gammas: tuple

    def __init__(self, gammas):
        gs = tuple(_coerce_component(g) for g in gammas)
        if len(gs) != 3:
            raise ValueError("need exactly three efficiencies")
        for g in gs:
            if not 0 <= g <= 1:
                raise ValueError(f"efficiency {g} outside [0, 1]")
        object.__setattr__(self, "gammas", gs)

    def __iter__(self):
        return iter(self.gammas)

    def __getitem__(self, i):
        return self.gammas[i]

    @property
    def is_exact(self) -> bool:
        return all(isinstance(g, Fraction) for g in self.gammas)

    def as_floats(self) -> tuple[float, float, float]:
        return tuple(float(g) for g in self.gammas)


@dataclass(frozen=True)
class FlagOverlaps:
    """Pairwise inner products of the heralding-flag failure states.

    P12 = a + b*i and P13 = c + d*i drive the analysis; P23 is carried
    for completeness but its coefficient vanishes for both cases (the
    candidates' Gram matrix has a structural zero at (2, 3)).
    """

    p12: tuple
    p13: tuple
    p23: tuple

    def __init__(self, p12=0, p13=0, p23=0):
        for name, val in (("p12", p12), ("p13", p13), ("p23", p23)):
            pair = _coerce_pair(val)
            mod2 = pair[0] * pair[0] + pair[1] * pair[1]
            if mod2 > 1 and not math.isclose(float(mod2), 1.0, abs_tol=1e-12):
                raise ValueError(f"|{name}| exceeds 1: |{name}|^2 = {float(mod2)}")
            object.__setattr__(self, name, pair)

    @property
    def a(self):
        return self.p12[0]

    @property
    def b(self):
        return self.p12[1]

    @property
    def c(self):
        return self.p13[0]

    @property
    def d(self):
        return self.p13[1]

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, Fraction)
                   for p in (self.p12, self.p13, self.p23) for x in p)


@dataclass(frozen=True)
class FeasibilityPoint:
    """A (Gram, Gamma, P) triple with its derived Hermitian matrix M."""

    gram: GramMatrix
    eff: EfficiencyVector
    flags: FlagOverlaps
    matrix: tuple                 # 3x3 of complex (always available)
    exact_matrix: tuple | None    # 3x3 of (re, im) Fraction pairs, or None

    @property
    def is_exact(self) -> bool:
        return self.exact_matrix is not None

    def min_eigenvalue(self) -> float:
        return hermitian3_eigvals(self.matrix)[0]

    def leading_minors(self) -> list:
        """The three leading principal minors (exact when possible)."""
        if self.is_exact:
            m = self.exact_matrix
            m1 = m[0][0][0]
            m2 = m[0][0][0] * m[1][1][0] - qc_abs2(m[0][1])
            return [m1, m2, self.det()]
        m = self.matrix
        m1 = m[0][0].real
        m2 = (m[0][0] * m[1][1]).real - abs(m[0][1]) ** 2
        return [m1, m2, self.det()]

    def principal_minors(self) -> list:
        """All seven principal minors, ordered by size then index set."""
        if self.is_exact:
            m = self.exact_matrix
            diag = [m[i][i][0] for i in range(3)]
            pairs = [diag[i] * diag[j] - qc_abs2(m[i][j])
                     for i, j in ((0, 1), (0, 2), (1, 2))]
            return diag + pairs + [self.det()]
        m = self.matrix
        diag = [m[i][i].real for i in range(3)]
        pairs = [diag[i] * diag[j] - abs(m[i][j]) ** 2
                 for i, j in ((0, 1), (0, 2), (1, 2))]
        return diag + pairs + [self.det()]

    def det(self):
        """Determinant of M (real; exact Fraction in rational mode)."""
        if self.is_exact:
            m = self.exact_matrix
            triple = qc_mul(qc_mul(m[0][1], m[1][2]), qc_conj(m[0][2]))
            return (m[0][0][0] * m[1][1][0] * m[2][2][0]
                    - m[0][0][0] * qc_abs2(m[1][2])
                    - m[1][1][0] * qc_abs2(m[0][2])
                    - m[2][2][0] * qc_abs2(m[0][1])
                    + 2 * triple[0])
        m = self.matrix
        det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
               - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
               + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
        return det.real

    def to_json(self, tol: float = DEFAULT_TOL) -> dict:
        minors = self.leading_minors()
        out = {
            "gram": self.gram.to_lists(),
            "gammas": [float(g) for g in self.eff],
            "P12": [float(self.flags.p12[0]), float(self.flags.p12[1])],
            "P13": [float(self.flags.p13[0]), float(self.flags.p13[1])],
            "P23": [float(self.flags.p23[0]), float(self.flags.p23[1])],
            "psd": is_psd(self, tol),
            "minors": [float(x) for x in minors],
            "min_eigenvalue": self.min_eigenvalue(),
            "M": [[[z.real, z.imag] for z in row] for row in self.matrix],
            "det": float(self.det()),
            "exact": self.is_exact,
        }
        if self.is_exact:
            out["minors_exact"] = [str(Fraction(x)) for x in minors]
            out["det_exact"] = str(Fraction(self.det()))
        return out


# ---------------------------------------------------------------------------
# building and testing M
# ---------------------------------------------------------------------------

def _flag_pair(flags: FlagOverlaps, i: int, j: int):
    key = {(0, 1): "p12", (0, 2): "p13", (1, 2): "p23"}[(min(i, j), max(i, j))]
    pair = getattr(flags, key)
    return pair if i < j else (pair[0], -pair[1])


def build_matrix(gram_in, eff: EfficiencyVector, flags: FlagOverlaps) -> FeasibilityPoint:
    """Assemble M_ij = G_ij - sqrt(gamma_i gamma_j) G_ij^2 P_ij.

    Inputs whose components are all rational produce an exact-matrix
    point whenever every required sqrt(gamma_i*gamma_j) is rational
    (coefficients multiplied by a structural zero are exempt).
    """
    if isinstance(gram_in, GramMatrix):
        g = gram_in
    else:
        g = GramMatrix(tuple(tuple(e for e in row) for row in gram_in))
    if g.dim != 3:
        raise ValueError("gram must be 3x3")
    if not isinstance(eff, EfficiencyVector):
        eff = EfficiencyVector(eff)
    if not isinstance(flags, FlagOverlaps):
        flags = FlagOverlaps(*flags)

    exact_inputs = g.is_exact and eff.is_exact and flags.is_exact

    # exact route first
    exact_m = None
    if exact_inputs:
        ok = True
        rows = []
        for i in range(3):
            row = []
            for j in range(3):
                gij = as_fraction(g.entry(i, j))
                if i == j:
                    row.append(qc(gij - eff[i]))
                    continue
                p = _flag_pair(flags, i, j)
                coeff = qc_mul(qc(gij * gij), (as_fraction(p[0]), as_fraction(p[1])))
                if coeff == (0, 0):
                    row.append(qc(gij))
                    continue
                root = exact_sqrt(as_fraction(eff[i]) * as_fraction(eff[j]))
                if root is None:
                    ok = False
                    break
                row.append((gij - root * coeff[0], -root * coeff[1]))
            if not ok:
                break
            rows.append(tuple(row))
        if ok:
            exact_m = tuple(rows)

    if exact_m is not None:
        matrix = tuple(tuple(qc_to_complex(e) for e in row) for row in exact_m)
    else:
        gf = [[complex(g.entry(i, j)) for j in range(3)] for i in range(3)]
        ge = eff.as_floats()
        matrix_rows = []
        for i in range(3):
            row = []
            for j in range(3):
                if i == j:
                    row.append(gf[i][i] - ge[i])
                    continue
                p = _flag_pair(flags, i, j)
                pij = complex(float(p[0]), float(p[1]))
                root = math.sqrt(ge[i] * ge[j])
                row.append(gf[i][j] - root * gf[i][j] ** 2 * pij)
            matrix_rows.append(tuple(row))
        matrix = tuple(matrix_rows)

    return FeasibilityPoint(g, eff, flags, matrix, exact_m)


def hermitian3_eigvals(m) -> tuple[float, float, float]:
    """Eigenvalues of a 3x3 Hermitian matrix via the characteristic cubic.

    Uses the trigonometric closed form; deterministic and dependency-free,
    accurate to ~1e-14 at this fixed size.
    """
    a11, a22, a33 = m[0][0].real, m[1][1].real, m[2][2].real
    p1 = abs(m[0][1]) ** 2 + abs(m[0][2]) ** 2 + abs(m[1][2]) ** 2
    q = (a11 + a22 + a33) / 3.0
    p2 = (a11 - q) ** 2 + (a22 - q) ** 2 + (a33 - q) ** 2 + 2.0 * p1
    if p2 <= 0.0:
        return (q, q, q)
    p = math.sqrt(p2 / 6.0)
    b = [[(m[i][j] - (q if i == j else 0.0)) / p for j in range(3)] for i in range(3)]
    detb = (b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]))
    r = max(-1.0, min(1.0, detb.real / 2.0))
    phi = math.acos(r) / 3.0
    e_hi = q + 2.0 * p * math.cos(phi)
    e_lo = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    e_mid = 3.0 * q - e_hi - e_lo
    return tuple(sorted((e_lo, e_mid, e_hi)))


def is_psd(point: FeasibilityPoint, tol: float = DEFAULT_TOL) -> bool:
    """Positive semidefiniteness of M.

    Exact points use Sylvester's criterion for PSD (all seven principal
    minors nonnegative, not only the leading three); float points test
    the smallest closed-form eigenvalue against -tol.
    """
    if point.is_exact:
        return all(x >= 0 for x in point.principal_minors())
    return point.min_eigenvalue() >= -tol


def is_psd_minors(point: FeasibilityPoint, tol: float = DEFAULT_TOL) -> bool:
    """Float/principal-minor variant of the PSD test (cross-check route)."""
    return all(float(x) >= -tol for x in point.principal_minors())


# ---------------------------------------------------------------------------
# reduced coordinates
# ---------------------------------------------------------------------------

def reduce(flags: FlagOverlaps, case: str):
    """Flag components to (q, s); exact when the components are rational."""
    cp = case_params(case)
    a, b, c, d = flags.a, flags.b, flags.c, flags.d
    q = (a + cp.q_sign * c) / cp.q_den
    s = 1 - (a * a + b * b + c * c + d * d) / cp.s_den
    return q, s


def _check_qs(q, s, case: str):
    cp = case_params(case)
    # rational inputs are checked exactly; floats get roundoff slack
    slack = 0 if isinstance(q, Fraction) and isinstance(s, Fraction) else 1e-12
    if (abs(q) > cp.q_bound + slack or s < cp.s_floor - slack
            or s > s_cap(q, case) + slack):
        raise ValueError(f"(q, s) = ({float(q)}, {float(s)}) outside the {case} region")


def _sqrt_any(x):
    """Exact sqrt for rational perfect squares, float otherwise."""
    if isinstance(x, Fraction):
        r = exact_sqrt(x)
        if r is not None:
            return r
    if x < 0:
        raise ValueError(f"negative discriminant {float(x)}")
    return math.sqrt(x)


def intersection_x0(q, s, case: str):
    """Smaller root of c0 - q*x + s*x^2 = 2*x (the larger root exceeds 1)."""
    _check_qs(q, s, case)
    cp = case_params(case)
    disc = (2 + q) ** 2 - 4 * cp.c0 * s
    if disc < 0:
        raise ValueError("no intersection: negative discriminant")
    return ((2 + q) - _sqrt_any(disc)) / (2 * s)


def stationary_x1(q, s, case: str):
    """The x where gamma2 is stationary along y = c0 - q*x + s*x^2.

    Singular at q = 0 (the stationary point escapes to x = 0); callers
    fall back to a direct one-dimensional search there.
    """
    if q == 0:
        raise ValueError("stationary-point formula is singular at q = 0")
    _check_qs(q, s, case)
    cp = case_params(case)
    a = 4 * cp.c0 * s + q * q - 4
    disc = a * a - 16 * cp.c0 * s * q * q
    return (a + _sqrt_any(disc)) / (4 * s * q)


def gammas_from_xy(x, y):
    """Invert x = sqrt(g1*g2), y = g1 + g2 into (g1, g2) with g1 <= g2."""
    if x < 0 or y < 2 * x:
        raise ValueError(f"need y >= 2x >= 0, got x={float(x)}, y={float(y)}")
    root = _sqrt_any(y * y - 4 * x * x)
    g1 = (y - root) / 2
    g2 = (y + root) / 2
    return g1, g2


def _golden_max(f, lo: float, hi: float, tol: float = 1e-12, iters: int = 200):
    """Golden-section maximisation on [lo, hi]; returns (argmax, max)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if b - a < tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    xm = (a + b) / 2.0
    return xm, f(xm)


def gamma2_on_slice(q, s, case: str):
    """Slice maximum of gamma2 on gamma2 = gamma3 for fixed (q, s).

    Evaluates y1 = c0 - q*x1 + s*x1^2 at the stationary point and inverts
    to (gamma1, gamma2); exact rationals propagate all the way through
    when the discriminants are perfect squares. For q >= 0 the maximum
    sits on the x = 0 boundary and is located by golden-section search.
    """
    _check_qs(q, s, case)
    cp = case_params(case)
    if q < 0:
        x1 = stationary_x1(q, s, case)
        y1 = cp.c0 - q * x1 + s * x1 * x1
        return gammas_from_xy(x1, y1)

    # q >= 0: compare the interior search against the x = 0 endpoint
    x0 = float(intersection_x0(q, s, case))
    qf, sf, c0f = float(q), float(s), float(cp.c0)

    def g2_at(x):
        y = c0f - qf * x + sf * x * x
        r2 = y * y - 4.0 * x * x
        return (y + math.sqrt(max(r2, 0.0))) / 2.0

    xm, val = _golden_max(g2_at, 0.0, x0)
    if g2_at(0.0) >= val:
        if isinstance(q, Fraction) and isinstance(s, Fraction):
            return Fraction(0), cp.c0
        return 0.0, c0f
    y1 = c0f - qf * xm + sf * xm * xm
    return gammas_from_xy(xm, y1)


@dataclass(frozen=True)
class ReducedCoordinates:
    """The change of variables used on the gamma2 = gamma3 slice.

    (q, s) come from the flag overlaps, x = sqrt(gamma1*gamma2) and
    y = gamma1 + gamma2 from the efficiencies; (v, w) = (x1, y1) is the
    stationary point of the slice parabola, defined for q < 0.
    """

    case: str
    q: object
    s: object
    x: object
    y: object
    v: object | None = None
    w: object | None = None

    @classmethod
    def from_inputs(cls, flags: FlagOverlaps, eff: EfficiencyVector,
                    case: str) -> "ReducedCoordinates":
        q, s = reduce(flags, case)
        prod = eff[0] * eff[1]
        x = _sqrt_any(as_fraction(prod)) if isinstance(prod, Fraction) else math.sqrt(prod)
        y = eff[0] + eff[1]
        v = w = None
        if q < 0:
            cp = case_params(case)
            v = stationary_x1(q, s, case)
            w = cp.c0 - q * v + s * v * v
        return cls(case, q, s, x, y, v, w)

    def to_json(self) -> dict:
        out = {"case": self.case, "q": float(self.q), "s": float(self.s),
               "x": float(self.x), "y": float(self.y)}
        out["v"] = None if self.v is None else float(self.v)
        out["w"] = None if self.w is None else float(self.w)
        return out


# ---------------------------------------------------------------------------
# boundary curves of the (v, w) region
# ---------------------------------------------------------------------------

#: v at the region corner where the min-s and max-s curves meet
V_CORNER = {"3bit": Fraction(28, 127), "2bit": Fraction(2, 7)}
#: q at that corner
Q_CORNER = {"3bit": Fraction(-1, 16), "2bit": Fraction(-1, 2)}

BRANCHES = ("max_s", "min_s")


def vw_boundary(case: str, branch: str, parameter):
    """A point on a boundary curve of the (v, w) = (x1, y1) region.

    ``max_s`` is parametrised by v in [0, v_corner] and follows the
    closed form along s = s_cap(q); ``min_s`` is parametrised by
    q in [q_corner, 0] and evaluates (x1, y1) at s = s_floor.
    """
    cp = case_params(case)
    if branch == "max_s":
        v = parameter
        if not 0 <= v <= V_CORNER[case]:
            raise ValueError(f"v = {float(v)} outside [0, {float(V_CORNER[case])}]")
        if case == "3bit":
            w = Fraction(9, 16) * _sqrt_any(49 + 32 * v * v) - Fraction(49, 16)
        else:
            w = Fraction(-1, 4) + Fraction(3, 4) * _sqrt_any(1 + 8 * v * v)
        return v, w
    if branch == "min_s":
        qv = parameter
        if not Q_CORNER[case] <= qv <= 0:
            raise ValueError(f"q = {float(qv)} outside [{float(Q_CORNER[case])}, 0]")
        if qv == 0:
            return Fraction(0), cp.c0
        v = stationary_x1(qv, cp.s_floor, case)
        w = cp.c0 - qv * v + cp.s_floor * v * v
        return v, w
    raise ValueError(f"branch must be one of {BRANCHES}, got {branch!r}")
