"""Independent numerical checks for the closed-form engine.

Two integrators live here, both deliberately ignorant of the conic
classification and subdivision machinery (they share only the polynomial
type), so an engine bug cannot hide in a shared code path.

oracle_integrate: certified-bound triangle bisection. A cell is kept when
f provably has one sign on it; for a quadratic f the extrema over a
triangle sit at vertices, at interior critical points of the edge
restrictions, or at the (at most one point or one line of) stationary
points of f, all of which are computed exactly. Cells where f >= 0
integrate g in closed form, cells where f < 0 contribute nothing, and
the rest are bisected along their longest edge until the worst-case
contribution of the undecided cells drops under tol or the depth cap is
reached. Whatever is still undecided then contributes zero with an
honest error bound of area times a bound on |g|. On curved boundaries
the bound shrinks like the cell diameter, so very small tolerances are
not reachable within the depth cap; the returned bound stays honest
either way.

scanline_integrate: high-accuracy adaptive quadrature. For fixed x the
region t & {f >= 0} is a union of y-intervals cut out by the triangle
slab and the roots of the (at most quadratic) fiber f(x, .); the exact
y-antiderivative of g turns the inner integral into a closed form, and
the outer integral runs through scipy's adaptive quadrature with the
geometry's breakpoints declared. Slower per digit than the engine but
accurate to ~1e-10, which the bisection oracle cannot reach on curved
boundaries within its depth cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy import integrate as _sciint

from .geometry import Triangle
from .poly import Polynomial2

ORACLE_DEPTH_CAP = 40
SCANLINE_DEFAULT_TOL = 1e-10
_STATIONARY_EPS = 1e-13


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    error_bound: float
    cells_used: int


class _CellIntegrator:
    """Exact integral of a fixed polynomial over batches of triangles.

    Expands each monomial x^i y^j in barycentric coordinates; the integral
    of lam0^a lam1^b lam2^c over a triangle is 2*area*a!b!c!/(a+b+c+2)!,
    so the whole thing is one weighted sum of vertex-coordinate powers.
    """

    def __init__(self, g: Polynomial2):
        terms: list[tuple[int, int, int, int, int, int, float]] = []
        max_pow = 0
        for (i, j), b in g.terms():
            for p in _compositions(i):
                mp = _multinomial(i, p)
                for q in _compositions(j):
                    mq = _multinomial(j, q)
                    w = (
                        b * mp * mq
                        * math.factorial(p[0] + q[0])
                        * math.factorial(p[1] + q[1])
                        * math.factorial(p[2] + q[2])
                        / math.factorial(i + j + 2)
                    )
                    terms.append((*p, *q, w))
                    max_pow = max(max_pow, *p, *q)
        self._terms = terms
        self._max_pow = max_pow

    def integrate(self, xs, ys, area2):
        """xs, ys: 3-tuples of (n,) vertex coordinate arrays; area2 = 2*area."""
        if not self._terms:
            return np.zeros_like(area2)
        n = area2.shape[0]
        # power tables: pw[c][k] = coordinate c raised to k
        pows = []
        for c in (*xs, *ys):
            tab = [np.ones(n), c]
            for _ in range(2, self._max_pow + 1):
                tab.append(tab[-1] * c)
            pows.append(tab)
        acc = np.zeros(n)
        for p0, p1, p2, q0, q1, q2, w in self._terms:
            acc += w * (
                pows[0][p0] * pows[1][p1] * pows[2][p2]
                * pows[3][q0] * pows[4][q1] * pows[5][q2]
            )
        return area2 * acc


def _compositions(n: int) -> list[tuple[int, int, int]]:
    return [(a, b, n - a - b) for a in range(n + 1) for b in range(n - a + 1)]


def _multinomial(n: int, parts: tuple[int, int, int]) -> int:
    out = math.factorial(n)
    for p in parts:
        out //= math.factorial(p)
    return out


def _stationary_candidates(f: Polynomial2):
    """Stationary points of the quadratic f: one point, or one line on
    which f is constant, or nothing. Returns ("point", p, value),
    ("line", p0, direction, value) or None."""
    a20 = f.coeff(2, 0)
    a11 = f.coeff(1, 1)
    a02 = f.coeff(0, 2)
    a10 = f.coeff(1, 0)
    a01 = f.coeff(0, 1)
    H = np.array([[2.0 * a20, a11], [a11, 2.0 * a02]])
    rhs = np.array([-a10, -a01])
    scale = np.abs(H).max()
    if scale == 0.0:
        return None  # f is affine: no interior extrema at all
    det = H[0, 0] * H[1, 1] - H[0, 1] * H[1, 0]
    if abs(det) > _STATIONARY_EPS * scale * scale:
        p = np.linalg.solve(H, rhs)
        return ("point", p, float(f(p[0], p[1])))
    # rank one: stationary set is empty or a line where f is constant
    sol, residual, *_ = np.linalg.lstsq(H, rhs, rcond=None)
    if np.abs(H @ sol - rhs).max() > 1e-9 * max(scale, float(np.abs(rhs).max()), 1e-300):
        return None
    row = H[0] if np.abs(H[0]).max() >= np.abs(H[1]).max() else H[1]
    direction = np.array([-row[1], row[0]])
    direction = direction / np.linalg.norm(direction)
    return ("line", sol, direction, float(f(sol[0], sol[1])))


@njit(cache=True)
def _edge_minmax(px, py, qx, qy, fp, a20, a11, a02, a10, a01, mn, mx):
    """Fold the interior extremum of f along edge (p, q) into (mn, mx)."""
    dx = qx - px
    dy = qy - py
    A = (a20 * dx + a11 * dy) * dx + a02 * dy * dy
    if A == 0.0:
        return mn, mx
    B = (2.0 * a20 * px + a11 * py + a10) * dx + (a11 * px + 2.0 * a02 * py + a01) * dy
    ts = -B / (2.0 * A)
    if 0.0 < ts < 1.0:
        val = fp - B * B / (4.0 * A)
        if val < mn:
            mn = val
        if val > mx:
            mx = val
    return mn, mx


@njit(cache=True)
def _level_pass(
    x0, y0, x1, y1, x2, y2,
    a20, a11, a02, a10, a01, a00,
    stat_kind, stat_px, stat_py, stat_dx, stat_dy, stat_val,
    term_pow, term_w, gb_i, gb_j, gb_c, max_pow,
):
    """Classify every cell, integrate the f >= 0 ones, bound the rest.

    Returns (cls, pos_sum, pending, n_pos, n_neg, n_und) where cls is
    0 = f >= 0 on the cell, 1 = f <= 0, 2 = undecided.
    """
    n = x0.shape[0]
    cls = np.empty(n, np.uint8)
    pow_tab = np.empty((6, max_pow + 1))
    pow_tab[:, 0] = 1.0
    pos_sum = 0.0
    pending = 0.0
    n_pos = 0
    n_neg = 0
    n_und = 0
    for i in range(n):
        ax = x0[i]
        ay = y0[i]
        bx = x1[i]
        by = y1[i]
        cx = x2[i]
        cy = y2[i]
        f0 = (a20 * ax + a11 * ay + a10) * ax + (a02 * ay + a01) * ay + a00
        f1 = (a20 * bx + a11 * by + a10) * bx + (a02 * by + a01) * by + a00
        f2 = (a20 * cx + a11 * cy + a10) * cx + (a02 * cy + a01) * cy + a00
        mn = min(f0, f1, f2)
        mx = max(f0, f1, f2)
        mn, mx = _edge_minmax(ax, ay, bx, by, f0, a20, a11, a02, a10, a01, mn, mx)
        mn, mx = _edge_minmax(bx, by, cx, cy, f1, a20, a11, a02, a10, a01, mn, mx)
        mn, mx = _edge_minmax(cx, cy, ax, ay, f2, a20, a11, a02, a10, a01, mn, mx)
        if stat_kind == 1:
            inside = (
                (bx - ax) * (stat_py - ay) - (by - ay) * (stat_px - ax) >= 0.0
                and (cx - bx) * (stat_py - by) - (cy - by) * (stat_px - bx) >= 0.0
                and (ax - cx) * (stat_py - cy) - (ay - cy) * (stat_px - cx) >= 0.0
            )
            if inside:
                if stat_val < mn:
                    mn = stat_val
                if stat_val > mx:
                    mx = stat_val
        elif stat_kind == 2:
            s0 = stat_dx * (ay - stat_py) - stat_dy * (ax - stat_px)
            s1 = stat_dx * (by - stat_py) - stat_dy * (bx - stat_px)
            s2 = stat_dx * (cy - stat_py) - stat_dy * (cx - stat_px)
            if min(s0, s1, s2) <= 0.0 <= max(s0, s1, s2):
                if stat_val < mn:
                    mn = stat_val
                if stat_val > mx:
                    mx = stat_val
        if mn >= 0.0:
            cls[i] = 0
            n_pos += 1
            area2 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            pow_tab[0, 1] = ax
            pow_tab[1, 1] = bx
            pow_tab[2, 1] = cx
            pow_tab[3, 1] = ay
            pow_tab[4, 1] = by
            pow_tab[5, 1] = cy
            for k in range(2, max_pow + 1):
                for r in range(6):
                    pow_tab[r, k] = pow_tab[r, k - 1] * pow_tab[r, 1]
            acc = 0.0
            for m in range(term_w.shape[0]):
                acc += term_w[m] * (
                    pow_tab[0, term_pow[m, 0]]
                    * pow_tab[1, term_pow[m, 1]]
                    * pow_tab[2, term_pow[m, 2]]
                    * pow_tab[3, term_pow[m, 3]]
                    * pow_tab[4, term_pow[m, 4]]
                    * pow_tab[5, term_pow[m, 5]]
                )
            pos_sum += area2 * acc
        elif mx <= 0.0:
            cls[i] = 1
            n_neg += 1
        else:
            cls[i] = 2
            n_und += 1
            area2 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            area = 0.5 * abs(area2)
            mxa = max(abs(ax), abs(bx), abs(cx))
            mya = max(abs(ay), abs(by), abs(cy))
            gmax = 0.0
            for m in range(gb_c.shape[0]):
                gmax += gb_c[m] * mxa ** gb_i[m] * mya ** gb_j[m]
            pending += area * gmax
    return cls, pos_sum, pending, n_pos, n_neg, n_und


@njit(cache=True)
def _bisect_undecided(x0, y0, x1, y1, x2, y2, cls, n_und):
    """Longest-edge bisection of the cls == 2 cells; children interleaved."""
    ox0 = np.empty(2 * n_und)
    oy0 = np.empty(2 * n_und)
    ox1 = np.empty(2 * n_und)
    oy1 = np.empty(2 * n_und)
    ox2 = np.empty(2 * n_und)
    oy2 = np.empty(2 * n_und)
    w = 0
    for i in range(x0.shape[0]):
        if cls[i] != 2:
            continue
        ax = x0[i]
        ay = y0[i]
        bx = x1[i]
        by = y1[i]
        cx = x2[i]
        cy = y2[i]
        d0 = (bx - ax) ** 2 + (by - ay) ** 2
        d1 = (cx - bx) ** 2 + (cy - by) ** 2
        d2 = (ax - cx) ** 2 + (ay - cy) ** 2
        # rotate so the longest edge is (w0, w1)
        if d0 >= d1 and d0 >= d2:
            w0x, w0y, w1x, w1y, w2x, w2y = ax, ay, bx, by, cx, cy
        elif d1 >= d2:
            w0x, w0y, w1x, w1y, w2x, w2y = bx, by, cx, cy, ax, ay
        else:
            w0x, w0y, w1x, w1y, w2x, w2y = cx, cy, ax, ay, bx, by
        mx = 0.5 * (w0x + w1x)
        my = 0.5 * (w0y + w1y)
        ox0[w] = w0x
        oy0[w] = w0y
        ox1[w] = mx
        oy1[w] = my
        ox2[w] = w2x
        oy2[w] = w2y
        ox0[w + 1] = mx
        oy0[w + 1] = my
        ox1[w + 1] = w1x
        oy1[w + 1] = w1y
        ox2[w + 1] = w2x
        oy2[w + 1] = w2y
        w += 2
    return ox0, oy0, ox1, oy1, ox2, oy2


def oracle_integrate(
    g: Polynomial2,
    f: Polynomial2,
    t: Triangle,
    tol: float = 1e-8,
) -> OracleEstimate:
    """Certified-bound integral of g over t & {f >= 0} by bisection."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    a20 = f.coeff(2, 0)
    a11 = f.coeff(1, 1)
    a02 = f.coeff(0, 2)
    a10 = f.coeff(1, 0)
    a01 = f.coeff(0, 1)
    a00 = f.coeff(0, 0)

    cell_int = _CellIntegrator(g)
    terms = cell_int._terms
    if terms:
        term_pow = np.array([tt[:6] for tt in terms], dtype=np.int64)
        term_w = np.array([tt[6] for tt in terms], dtype=np.float64)
    else:
        term_pow = np.zeros((0, 6), dtype=np.int64)
        term_w = np.zeros(0, dtype=np.float64)
    max_pow = max(1, cell_int._max_pow)
    g_abs = [(k[0], k[1], abs(b)) for k, b in g.terms()]
    gb_i = np.array([a for a, _, _ in g_abs], dtype=np.int64)
    gb_j = np.array([b for _, b, _ in g_abs], dtype=np.int64)
    gb_c = np.array([c for _, _, c in g_abs], dtype=np.float64)

    stationary = _stationary_candidates(f)
    stat_kind, stat_px, stat_py, stat_dx, stat_dy, stat_val = 0, 0.0, 0.0, 0.0, 0.0, 0.0
    if stationary is not None and stationary[0] == "point":
        stat_kind = 1
        stat_px, stat_py = float(stationary[1][0]), float(stationary[1][1])
        stat_val = stationary[2]
    elif stationary is not None:
        stat_kind = 2
        stat_px, stat_py = float(stationary[1][0]), float(stationary[1][1])
        stat_dx, stat_dy = float(stationary[2][0]), float(stationary[2][1])
        stat_val = stationary[3]

    (ax, ay), (bx, by), (cx, cy) = t.vertices
    x0 = np.array([ax])
    y0 = np.array([ay])
    x1 = np.array([bx])
    y1 = np.array([by])
    x2 = np.array([cx])
    y2 = np.array([cy])

    level_sums: list[float] = []
    cells_used = 0
    error_bound = 0.0

    for depth in range(ORACLE_DEPTH_CAP + 1):
        cls, pos_sum, pending, n_pos, n_neg, n_und = _level_pass(
            x0, y0, x1, y1, x2, y2,
            a20, a11, a02, a10, a01, a00,
            stat_kind, stat_px, stat_py, stat_dx, stat_dy, stat_val,
            term_pow, term_w, gb_i, gb_j, gb_c, max_pow,
        )
        if n_pos:
            level_sums.append(pos_sum)
        cells_used += n_pos + n_neg
        if n_und == 0:
            break
        if pending <= tol or depth == ORACLE_DEPTH_CAP:
            error_bound = pending
            cells_used += n_und
            break
        x0, y0, x1, y1, x2, y2 = _bisect_undecided(x0, y0, x1, y1, x2, y2, cls, n_und)

    return OracleEstimate(math.fsum(level_sums), error_bound, cells_used)


def scanline_integrate(
    g: Polynomial2,
    f: Polynomial2,
    t: Triangle,
    tol: float = SCANLINE_DEFAULT_TOL,
) -> float:
    """Integral of g over t & {f >= 0} by exact-in-y adaptive-in-x sweep."""
    G = g.antiderivative_y()
    a20 = f.coeff(2, 0)
    a11 = f.coeff(1, 1)
    a02 = f.coeff(0, 2)
    a10 = f.coeff(1, 0)
    a01 = f.coeff(0, 1)
    a00 = f.coeff(0, 0)
    verts = t.vertices
    xs = sorted(p[0] for p in verts)
    x_lo, x_hi = xs[0], xs[-1]
    if x_hi - x_lo <= 0.0:
        return 0.0

    breaks = {x_lo, x_hi, xs[1]}
    # vertical tangents of the conic: zeros of the y-discriminant
    #   (a11 x + a01)^2 - 4 a02 (a20 x^2 + a10 x + a00)
    qa = a11 * a11 - 4.0 * a02 * a20
    qb = 2.0 * a11 * a01 - 4.0 * a02 * a10
    qc = a01 * a01 - 4.0 * a02 * a00
    for r in _real_roots(qa, qb, qc):
        if x_lo < r < x_hi:
            breaks.add(r)
    # crossings of the conic with each triangle edge
    for p, q in t.sides():
        d = (q[0] - p[0], q[1] - p[1])
        A = (a20 * d[0] + a11 * d[1]) * d[0] + a02 * d[1] ** 2
        B = (2.0 * a20 * p[0] + a11 * p[1] + a10) * d[0] + (
            a11 * p[0] + 2.0 * a02 * p[1] + a01
        ) * d[1]
        C = float(f(p[0], p[1]))
        for s in _real_roots(A, B, C):
            if -1e-12 <= s <= 1.0 + 1e-12:
                r = p[0] + s * d[0]
                if x_lo < r < x_hi:
                    breaks.add(r)

    sides = list(t.sides())

    def fiber(x: float) -> float:
        ys = []
        for p, q in sides:
            dx = q[0] - p[0]
            if dx == 0.0:
                continue
            s = (x - p[0]) / dx
            if 0.0 <= s <= 1.0:
                ys.append(p[1] + s * (q[1] - p[1]))
        if len(ys) < 2:
            return 0.0
        y_lo, y_hi = min(ys), max(ys)
        if y_hi <= y_lo:
            return 0.0
        ca = a02
        cb = a11 * x + a01
        cc = (a20 * x + a10) * x + a00
        cuts = [y_lo, y_hi]
        for r in _real_roots(ca, cb, cc):
            if y_lo < r < y_hi:
                cuts.append(r)
        cuts.sort()
        total = 0.0
        for y0, y1 in zip(cuts, cuts[1:]):
            ym = 0.5 * (y0 + y1)
            if (ca * ym + cb) * ym + cc >= 0.0:
                total += G(x, y1) - G(x, y0)
        return total

    pts = sorted(b for b in breaks if x_lo < b < x_hi)
    value, _ = _sciint.quad(
        fiber,
        x_lo,
        x_hi,
        points=pts or None,
        limit=200 + 50 * len(pts),
        epsabs=tol,
        epsrel=1e-12,
    )
    return float(value)


def _real_roots(A: float, B: float, C: float) -> list[float]:
    """Real roots of A t^2 + B t + C, degenerating gracefully."""
    scale = max(abs(A), abs(B), abs(C))
    if scale == 0.0:
        return []
    if abs(A) <= 1e-15 * scale:
        if abs(B) <= 1e-15 * scale:
            return []
        return [-C / B]
    D = B * B - 4.0 * A * C
    if D < 0.0:
        return []
    sq = math.sqrt(D)
    q = -0.5 * (B + math.copysign(sq, B)) if B != 0.0 else -0.5 * sq
    roots = [q / A]
    roots.append(C / q if q != 0.0 else 0.0)
    return sorted(roots)
