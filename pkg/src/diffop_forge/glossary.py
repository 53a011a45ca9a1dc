"""Named matrices built from a RingContext.

Coordinates of operator vectors follow the block layout of P_i: order 1
(dx, dy, dz), order 2 (xx, xy, xz, yy, yz, zz), order 3 (xxx, ..., zzz),
each block in graded lex.  The large tables eps(3), A(3) and Z are kept as
literal transcriptions and then certified against an independent
derivation (composition with E, and division by x^2 modulo f).
"""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import combinations_with_replacement
from typing import Callable, Dict, List, Optional, Tuple

from .errors import MathCheckError, NotDivisibleModF
from .matrix import PolyMatrix, block, matmul, reduce_mod_f
from .poly import ONE, ZERO, Monomial, Polynomial, X, Y, Z, partial_multi
from .ring import RingContext, divide_by_variable_mod_f, normal_form

V = (X, Y, Z)


def order_basis(k: int) -> List[Monomial]:
    return [(a, b, k - a - b) for a in range(k, -1, -1) for b in range(k - a, -1, -1)]


B1_IDX, B2_IDX, B3_IDX = order_basis(1), order_basis(2), order_basis(3)
PAIRS = ["xx", "xy", "xz", "yy", "yz", "zz"]


def _multisets(size: int) -> List[Monomial]:
    """Variable multisets of a given size as exponent triples, graded lex."""
    return order_basis(size)


def J_matrix(ctx: RingContext, k: int, j: int) -> PolyMatrix:
    """Block J_{k,j}: rows e_g for multisets g of size j, columns the order-k basis.

    Entry (g, a) is d^(a-g)(f) when a >= g componentwise.
    """
    rows = []
    for g in _multisets(j):
        row = []
        for a in order_basis(k):
            diff = (a[0] - g[0], a[1] - g[1], a[2] - g[2])
            row.append(partial_multi(ctx.f, diff) if min(diff) >= 0 else ZERO)
        rows.append(row)
    return PolyMatrix(rows, len(rows), len(order_basis(k)))


def P_matrix(ctx: RingContext, i: int, with_constant: bool = True) -> PolyMatrix:
    grid = []
    for j in range(i):
        grid.append([J_matrix(ctx, k, j) if k > j else PolyMatrix.zeros(len(_multisets(j)), len(order_basis(k))) for k in range(1, i + 1)])
    P = block(grid)
    if with_constant:
        P = block([[P, PolyMatrix.zeros(P.rows, 1)]])
    return P


def euler_shift(v: List[Polynomial], k: int) -> List[Polynomial]:
    """Top-order coordinates of E composed with an operator whose order-k top is v."""
    src = order_basis(k)
    dst = order_basis(k + 1)
    pos = {m: i for i, m in enumerate(dst)}
    out = [ZERO] * len(dst)
    for m, c in zip(src, v):
        if not c:
            continue
        for i in range(3):
            t = list(m)
            t[i] += 1
            out[pos[tuple(t)]] = out[pos[tuple(t)]] + (V[i] * c).scale(m[i] + 1)
    return out


class GlossaryTable:
    """Mapping from ASCII names to PolyMatrix, with attribute access."""

    def __init__(self, ctx: RingContext, mats: Dict[str, PolyMatrix], errata: List[dict]):
        self.ctx = ctx
        self.mats = mats
        self.errata = errata

    def __getitem__(self, name: str) -> PolyMatrix:
        return self.mats[ALIASES.get(name, name)]

    def __setitem__(self, name: str, value: PolyMatrix) -> None:
        self.mats[ALIASES.get(name, name)] = value

    def __contains__(self, name: str) -> bool:
        return ALIASES.get(name, name) in self.mats

    def __getattr__(self, name: str) -> PolyMatrix:
        try:
            return self.__dict__["mats"][ALIASES.get(name, name)]
        except KeyError:
            raise AttributeError(name) from None

    def names(self) -> List[str]:
        return list(self.mats)

    def copy(self) -> GlossaryTable:
        return GlossaryTable(self.ctx, dict(self.mats), list(self.errata))

    def perturbed(self, name: str, i: int, j: int, delta: Polynomial = X) -> GlossaryTable:
        """Copy with one entry shifted by delta (mutation testing)."""
        out = self.copy()
        m = out[name]
        rows = [list(r) for r in m.entries]
        rows[i][j] = rows[i][j] + delta
        out[name] = PolyMatrix(rows, m.rows, m.cols)
        return out


ALIASES = {
    "theta2_2": "theta_even_2",
    "theta3_2": "theta_odd_2",
    "theta2_3": "theta_even_3",
    "theta3_3": "theta_odd_3",
    "adj": "adjDelta",
    "Jac": "J10",
}


def _skew(a: Polynomial, b: Polynomial, c: Polynomial) -> PolyMatrix:
    return PolyMatrix([[ZERO, -c, b], [c, ZERO, -a], [-b, a, ZERO]])


def _sym3(ctx: RingContext, fn: Callable[[int, int], Polynomial]) -> PolyMatrix:
    return PolyMatrix([[fn(i, j) for j in range(3)] for i in range(3)])


def build_eps2(ctx: RingContext) -> PolyMatrix:
    x, y, z = V
    fx, fy, fz = ctx.grad
    cols = [
        [2 * x * x, 2 * x * y, 2 * x * z, 2 * y * y, 2 * y * z, 2 * z * z],
        [ZERO, x * fz, -x * fy, 2 * y * fz, z * fz - y * fy, -2 * z * fy],
        [-2 * x * fz, -y * fz, x * fx - z * fz, ZERO, y * fx, 2 * z * fx],
        [2 * x * fy, y * fy - x * fx, z * fy, -2 * y * fx, -z * fx, ZERO],
    ]
    return PolyMatrix.from_columns(cols)


def build_A2(ctx: RingContext) -> PolyMatrix:
    x, y, z = V
    c = ctx
    cols = [
        [x * c.Dxx, y * c.Dxx, z * c.Dxx, 2 * y * c.Dxy - x * c.Dyy, y * c.Dxz + z * c.Dxy - x * c.Dyz, 2 * z * c.Dxz - x * c.Dzz],
        [2 * x * c.Dxy - y * c.Dxx, x * c.Dyy, z * c.Dxy + x * c.Dyz - y * c.Dxz, y * c.Dyy, z * c.Dyy, 2 * z * c.Dyz - y * c.Dzz],
        [2 * x * c.Dxz - z * c.Dxx, x * c.Dyz + y * c.Dxz - z * c.Dxy, x * c.Dzz, 2 * y * c.Dyz - z * c.Dyy, y * c.Dzz, z * c.Dzz],
    ]
    return PolyMatrix.from_columns(cols)


def printed_eps3(ctx: RingContext) -> PolyMatrix:
    x, y, z = V
    fx, fy, fz = ctx.grad
    cols = [
        [6 * x**3, 6 * x * x * y, 6 * x * x * z, 6 * x * y * y, 6 * x * y * z, 6 * x * z * z, 6 * y**3, 6 * y * y * z, 6 * y * z * z, 6 * z**3],
        [ZERO, 2 * x * x * fz, -2 * x * x * fy, 4 * x * y * fz, -2 * x * y * fy + 2 * x * z * fz, -4 * x * z * fy,
         6 * y * y * fz, -2 * y * y * fy + 4 * y * z * fz, -4 * y * z * fy + 2 * z * z * fz, -6 * z * z * fy],
        [-6 * x * x * fz, -4 * x * y * fz, 2 * x * x * fx - 4 * x * z * fz, -2 * y * y * fz, 2 * x * y * fx - 2 * y * z * fz,
         4 * x * z * fx - 2 * z * z * fz, ZERO, 2 * y * y * fx, 4 * y * z * fx, 6 * z * z * fx],
        [6 * x * x * fy, -2 * x * x * fx + 4 * x * y * fy, 4 * x * z * fy, -4 * x * y * fx + 2 * y * y * fy, -2 * x * z * fx + 2 * y * z * fy,
         2 * z * z * fy, -6 * y * y * fx, -4 * y * z * fx, -2 * z * z * fx, ZERO],
    ]
    return PolyMatrix.from_columns(cols)


def printed_A3(ctx: RingContext) -> PolyMatrix:
    x, y, z = V
    c = ctx
    xx, xy, xz, yy, yz, zz = c.Dxx, c.Dxy, c.Dxz, c.Dyy, c.Dyz, c.Dzz
    cols = [
        [3 * x * x * xx, 3 * x * y * xx, 3 * x * z * xx,
         2 * x * y * xy - x * x * yy + 2 * y * y * xx,
         x * y * xz + x * z * xy - x * x * yz + 2 * y * z * xx,
         2 * x * z * xz - x * x * zz + 2 * z * z * xx,
         6 * y * y * xy - 3 * x * y * yy,
         2 * y * y * xz + 4 * y * z * xy - 2 * x * y * yz - x * z * yy,
         4 * y * z * xz - x * y * zz + 2 * z * z * xy - 2 * x * z * yz,
         6 * z * z * xz - 3 * x * z * zz],
        [6 * x * x * xy - 3 * x * y * xx,
         2 * x * y * xy - y * y * xx + 2 * x * x * yy,
         4 * x * z * xy - y * z * xx + 2 * x * x * yz - 2 * x * y * xz,
         3 * x * y * yy,
         y * z * xy + x * y * yz - y * y * xy + 2 * x * z * yy,
         2 * z * z * xy + 4 * x * z * yz - 2 * y * z * xz - x * y * zz,
         3 * y * y * yy, 3 * y * z * yy,
         2 * y * z * yz - y * y * zz + 2 * z * z * yy,
         6 * z * z * yz - 3 * y * z * zz],
        [6 * x * x * xz - 3 * x * z * xx,
         2 * x * x * yz + 4 * x * y * xz - 2 * x * z * xy - y * z * xx,
         2 * x * z * xz - z * z * xx + 2 * x * x * zz,
         4 * x * y * yz - x * z * yy + 2 * y * y * xz - 2 * y * z * xy,
         x * z * yz + y * z * xz - z * z * yz + 2 * x * y * zz,
         3 * x * z * zz,
         6 * y * y * yz - 3 * y * z * yy,
         2 * y * z * yz - z * z * yy + 2 * y * y * zz,
         3 * y * z * zz, 3 * z * z * zz],
    ]
    return PolyMatrix.from_columns(cols)


def printed_Z(ctx: RingContext) -> PolyMatrix:
    x, y, z = V
    c = ctx
    d = c.d
    k = Q(1, d - 1)
    e = d - 2
    fx, fy, fz = c.grad
    dx, dy, dz = c.delta_grad
    xx, xy, xz, yy, yz, zz = c.Dxx, c.Dxy, c.Dxz, c.Dyy, c.Dyz, c.Dzz
    H = c.ham
    half = Q(1, 2)
    col_x = [
        x * H("yz", xx),
        y * H("yz", xx) - e * fz * xx,
        z * H("yz", xx) + e * fy * xx,
        y * H("zx", xx),
        (y * H("xy", xx) + z * H("zx", xx)).scale(half),
        z * H("xy", xx),
        y * H("zx", xy) + (y * y * dz).scale(k) + e * fz * yy,
        y * H("xy", xy) - (y * z * dz).scale(k) - e * fy * yy,
        z * H("zx", xz) + (y * z * dy).scale(k) + e * fz * zz,
        z * H("xy", xz) - (z * z * dy).scale(k) - e * fy * zz,
    ]
    col_y = [
        x * H("yz", xy) - (x * x * dz).scale(k) - e * fz * xx,
        x * H("yz", yy),
        x * H("xy", xy) + (x * z * dz).scale(k) + e * fx * xx,
        x * H("zx", yy) + e * fz * yy,
        (z * H("yz", yy) + x * H("xy", yy)).scale(half),
        z * H("yz", yz) - (x * z * dx).scale(k) - e * fz * zz,
        y * H("zx", yy),
        z * H("zx", yy) - e * fx * yy,
        z * H("xy", yy),
        z * H("xy", yz) + (z * z * dx).scale(k) + e * fx * zz,
    ]
    col_z = [
        x * H("yz", xz) + (x * x * dy).scale(k) + e * fy * xx,
        x * H("zx", xz) - (x * y * dy).scale(k) - e * fx * xx,
        x * H("yz", zz),
        y * H("yz", yz) + (x * y * dx).scale(k) + e * fy * yy,
        (x * H("zx", zz) + y * H("yz", zz)).scale(half),
        x * H("xy", zz) - e * fy * zz,
        y * H("zx", yz) - (y * y * dx).scale(k) - e * fx * yy,
        y * H("zx", zz),
        y * H("xy", zz) + e * fx * zz,
        z * H("xy", zz),
    ]
    return PolyMatrix.from_columns([col_x, col_y, col_z])


# independent derivations used to certify the printed tables

def hamiltonian_power_top(ctx: RingContext, pair: str, n: int) -> List[Polynomial]:
    """Top-order coordinates of the n-th power of H_bc: n! sum_k (-1)^k f_c^(n-k) f_b^k d_b^(n-k) d_c^k."""
    b, c = "xyz".index(pair[0]), "xyz".index(pair[1])
    fb, fc = ctx.grad[b], ctx.grad[c]
    out = [ZERO] * len(order_basis(n))
    pos = {m: i for i, m in enumerate(order_basis(n))}
    fact = 1
    for t in range(2, n + 1):
        fact *= t
    for k in range(n + 1):
        idx = [0, 0, 0]
        idx[b] += n - k
        idx[c] += k
        coeff = (fc ** (n - k) * fb ** k).scale(fact * (-1) ** k)
        out[pos[tuple(idx)]] = out[pos[tuple(idx)]] + coeff
    return out


def derived_alpha(ctx: RingContext, var: str) -> List[Polynomial]:
    """alpha_var = (1/var)[H^2 + Delta_aa/(d-1)^2 E^2] via division modulo f."""
    pair = {"x": "yz", "y": "zx", "z": "xy"}[var]
    d = ctx.d
    daa = ctx.cofactor(var, var)
    E2 = build_eps2(ctx).col(0)
    H2 = hamiltonian_power_top(ctx, pair, 2)
    num = [h + (daa * e).scale(Q(1, (d - 1) ** 2)) for h, e in zip(H2, E2)]
    return [divide_by_variable_mod_f(p, var, ctx) for p in num]


def derived_zeta(ctx: RingContext, var: str) -> List[Polynomial]:
    """zeta_var = (1/var^2)[H^3 + 3 Daa/(d-1)^2 E^2H - H(Daa)/((d-1)^2(d-2)) E^3]."""
    pair = {"x": "yz", "y": "zx", "z": "xy"}[var]
    d = ctx.d
    daa = ctx.cofactor(var, var)
    hd = ctx.ham(pair, daa)
    eps2 = build_eps2(ctx)
    e2 = eps2.col(0)
    eh = eps2.col(1 + ["yz", "zx", "xy"].index(pair))
    E3 = euler_shift(e2, 2)
    E2H = euler_shift(eh, 2)
    H3 = hamiltonian_power_top(ctx, pair, 3)
    a = Q(3, (d - 1) ** 2)
    b = Q(1, (d - 1) ** 2 * (d - 2))
    num = [h + (daa * u).scale(a) - (hd * w).scale(b) for h, u, w in zip(H3, E2H, E3)]
    once = [divide_by_variable_mod_f(p, var, ctx) for p in num]
    return [divide_by_variable_mod_f(p, var, ctx) for p in once]


def errata_entries(ctx: RingContext) -> Dict[Tuple[str, int, int], Polynomial]:
    """Corrected values for the printed entries that fail certification.

    A3: the xyz entries of E*alpha_y and E*alpha_z carry a wrong cofactor
    (Delta_xy for Delta_xz, and Delta_yz for Delta_xy).
    Z: six entries carry the opposite sign on their delta term.
    """
    x, y, z = V
    c = ctx
    k = Q(1, c.d - 1)
    e = c.d - 2
    fx, fy, fz = c.grad
    dx, dy, dz = c.delta_grad
    H = c.ham
    return {
        ("A3", 4, 1): y * z * c.Dxy + x * y * c.Dyz - y * y * c.Dxz + 2 * x * z * c.Dyy,
        ("A3", 4, 2): x * z * c.Dyz + y * z * c.Dxz - z * z * c.Dxy + 2 * x * y * c.Dzz,
        ("Z", 7, 0): y * H("xy", c.Dxy) + (y * z * dz).scale(k) - e * fy * c.Dyy,
        ("Z", 8, 0): z * H("zx", c.Dxz) - (y * z * dy).scale(k) + e * fz * c.Dzz,
        ("Z", 2, 1): x * H("xy", c.Dxy) - (x * z * dz).scale(k) + e * fx * c.Dxx,
        ("Z", 5, 1): z * H("yz", c.Dyz) + (x * z * dx).scale(k) - e * fz * c.Dzz,
        ("Z", 1, 2): x * H("zx", c.Dxz) + (x * y * dy).scale(k) - e * fx * c.Dxx,
        ("Z", 3, 2): y * H("yz", c.Dyz) - (x * y * dx).scale(k) + e * fy * c.Dyy,
    }


def mismatches(ctx: RingContext, printed: PolyMatrix, derived: PolyMatrix, scale: Q) -> List[Tuple[int, int]]:
    """Entries where scale*printed and derived differ modulo f."""
    out = []
    for i in range(printed.rows):
        for j in range(printed.cols):
            if normal_form(printed[i, j].scale(scale) - derived[i, j], ctx):
                out.append((i, j))
    return out


def _apply_errata(name: str, printed: PolyMatrix, fixes: Dict[Tuple[str, int, int], Polynomial], log: List[dict]) -> PolyMatrix:
    rows = [list(r) for r in printed.entries]
    for (n, i, j), val in fixes.items():
        if n == name:
            log.append({"matrix": n, "row": i, "col": j, "printed": rows[i][j], "corrected": val})
            rows[i][j] = val
    return PolyMatrix(rows, printed.rows, printed.cols)


def derived_tables(ctx: RingContext, A2: PolyMatrix) -> Dict[str, Tuple[PolyMatrix, Q]]:
    """Independent derivations with the scalar relating them to the printed tables."""
    d = ctx.d
    eps2 = build_eps2(ctx)
    return {
        "A2": (PolyMatrix.from_columns([derived_alpha(ctx, v) for v in "xyz"]), Q(2, (d - 1) ** 2)),
        "eps3": (PolyMatrix.from_columns([euler_shift(eps2.col(j), 2) for j in range(4)]), Q(1)),
        "A3": (PolyMatrix.from_columns([euler_shift(A2.col(j), 2) for j in range(3)]), Q(1)),
        "Z": (PolyMatrix.from_columns([derived_zeta(ctx, v) for v in "xyz"]), Q(-6, (d - 1) ** 2 * (d - 2))),
    }


def build_M0_generators(ctx: RingContext, certify: bool = True):
    """((eps2, A2), (eps3, A3, Z), errata log).

    The printed tables are corrected by errata_entries and, when certify is
    set, every entry is then compared against derived_tables.
    """
    fixes = errata_entries(ctx)
    log: List[dict] = []
    eps2 = build_eps2(ctx)
    A2 = build_A2(ctx)
    eps3 = _apply_errata("eps3", printed_eps3(ctx), fixes, log)
    A3 = _apply_errata("A3", printed_A3(ctx), fixes, log)
    Zm = _apply_errata("Z", printed_Z(ctx), fixes, log)
    if certify:
        tables = {"A2": A2, "eps3": eps3, "A3": A3, "Z": Zm}
        for name, (derived, scale) in derived_tables(ctx, A2).items():
            bad = mismatches(ctx, tables[name], derived, scale)
            if bad:
                raise MathCheckError(f"{name} disagrees with its derivation at {bad}")
    return (eps2, A2), (eps3, A3, Zm), log


class _Registry(dict):
    """Matrix store that applies an optional single-entry perturbation on insert.

    Later matrices read their ingredients back from the store, so a
    perturbation of a primitive entry reaches everything built from it.
    """

    def __init__(self, perturb: Optional[Tuple[str, int, int, Polynomial]] = None):
        super().__init__()
        self.perturb = None
        self.applied = False
        if perturb is not None:
            name, i, j, delta = perturb
            self.perturb = (ALIASES.get(name, name), i, j, delta)

    def __setitem__(self, name: str, value: PolyMatrix) -> None:
        if self.perturb and self.perturb[0] == name:
            _, i, j, delta = self.perturb
            if not (0 <= i < value.rows and 0 <= j < value.cols):
                raise IndexError(f"{name} has shape {value.shape}; entry ({i}, {j}) does not exist")
            rows = [list(r) for r in value.entries]
            rows[i][j] = rows[i][j] + delta
            value = PolyMatrix(rows, value.rows, value.cols)
            self.applied = True
        super().__setitem__(name, value)


def build_glossary(ctx: RingContext, self_check: bool = True, perturb: Optional[Tuple[str, int, int, Polynomial]] = None) -> GlossaryTable:
    """All named matrices for f.

    perturb = (name, i, j, delta) adds delta to one entry as the matrix is
    created; it exists for mutation testing.
    """
    d = ctx.d
    x, y, z = V
    fx, fy, fz = ctx.grad
    dx, dy, dz = ctx.delta_grad
    m = _Registry(perturb)

    m["d1"] = PolyMatrix.row([x, y, z])
    m["d2"] = _skew(x, y, z)
    m["d3"] = PolyMatrix.column([x, y, z])
    m["D1"] = PolyMatrix.row([fx, fy, fz])
    m["D2"] = _skew(fx, fy, fz)
    m["D3"] = PolyMatrix.column([fx, fy, fz])
    m["q"] = _sym3(ctx, lambda i, j: V[i] * V[j])
    m["Delta"] = ctx.hessian
    m["adjDelta"] = ctx.adj
    m["alpha0"] = PolyMatrix.identity(1)
    m["alpha1"] = m["Delta"].scale(Q(1, d - 1))
    m["alpha2"] = m["adjDelta"].scale(Q(1, (d - 1) ** 2))
    m["alpha3"] = PolyMatrix([[ctx.delta.scale(Q(1, (d - 1) ** 3))]])
    s = Q(1, (d - 1) ** 3 * (d - 2))
    m["sigma1"] = PolyMatrix.row([dx, dy, dz]).scale(s)
    m["sigma2"] = _skew(dx, dy, dz).scale(s)
    m["sigma3"] = PolyMatrix.column([dx, dy, dz]).scale(s)

    cof = [ctx.cofactor(*ab) for ab in PAIRS]
    m["B1"] = PolyMatrix([[x * c, y * c, z * c] for c in cof]).scale(Q(1, d - 1))
    m["B2"] = build_B2(ctx)

    for k, j in [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]:
        m[f"J{k}{j}"] = J_matrix(ctx, k, j)
    for i in (1, 2, 3):
        m[f"P{i}"] = _assemble_P(m, i)

    Z0 = PolyMatrix.zeros
    a1, a2, a3 = m["alpha1"], m["alpha2"], m["alpha3"]
    s1, s2, s3 = m["sigma1"], m["sigma2"], m["sigma3"]
    d1, d2, d3 = m["d1"], m["d2"], m["d3"]
    D1, D2, D3 = m["D1"], m["D2"], m["D3"]
    qm, Dl = m["q"], m["Delta"]

    m["theta0_2"] = m["J20"]
    m["theta1_2"] = block([[Z0(3, 4), a2]]).scale(d - 1)
    m["theta_even_2"] = block([[Z0(1, 3), Z0(1, 3), -a3], [Z0(3, 3), a1, Z0(3, 1)]]).scale(d - 1)
    m["theta_odd_2"] = block([[Z0(3, 1), Z0(3, 3), a2.scale(-2)], [Z0(1, 1), d1, Z0(1, 3)]]).scale(Q(-(d - 1), 2))

    m["theta0_3"] = block([[m["J30"]], [m["J31"]]])
    m["theta1_3"] = block([
        [Z0(3, 4), a2.scale(Q(-(d * d - 1), 2)), s2.scale(-(d - 1) * (d - 2))],
        [Z0(6, 4), m["B1"], m["B2"].scale(Q(-3, (d - 1) * (d - 2)))],
    ])
    m["theta_even_3"] = block([
        [Z0(1, 3), Z0(1, 3), s1.scale(-(d - 1) * (d - 2)), Z0(1, 1)],
        [Z0(3, 3), Dl.scale(Q(-(d + 1), 2)), Z0(3, 3), s3.scale(-(d - 1) * (d - 2))],
        [Z0(1, 3), Z0(1, 3), s1.scale(-3 * (d - 1)), Z0(1, 1)],
        [Z0(3, 3), Z0(3, 3), Z0(3, 3), s3.scale(-3 * (d - 1))],
        [Z0(3, 3), Z0(3, 3), Dl.scale(Q(9, 2)), Z0(3, 1)],
    ])
    m["theta_odd_3"] = block([
        [Z0(3, 1), Z0(3, 3), a2.scale(Q(-(d * d - 1), 2)), s2.scale(-(d - 1) * (d - 2))],
        [Z0(1, 1), d1.scale(Q(d * d - 1, 4)), Z0(1, 3), Z0(1, 3)],
        [Z0(3, 1), Z0(3, 3), Z0(3, 3), s2.scale(-3 * (d - 1))],
        [Z0(3, 1), Z0(3, 3), Z0(3, 3), a2.scale(Q(9 * (d - 1), 2))],
        [Z0(1, 1), Z0(1, 3), d1.scale(Q(-3 * (d - 1), 2)), Z0(1, 3)],
    ])

    m["M0_1"] = block([[d3, D2]])
    m["M1_1"] = block([[D1, Z0(1, 1)], [-d2, D3]])
    m["M2_1"] = block([[d3, D2], [Z0(1, 1), d1]])

    (eps2, A2), (eps3, A3, Zm), errata = build_M0_generators(ctx)
    m["eps2"], m["A2"] = eps2, A2
    m["eps3"], m["A3"], m["Z"] = eps3, A3, Zm
    eps2, A2, eps3, A3, Zm = m["eps2"], m["A2"], m["eps3"], m["A3"], m["Z"]
    m["M0_2"] = block([[eps2, A2.scale(Q(2, (d - 1) ** 2))]])
    m["M1_2"] = block([[D1, Z0(1, 3), a3.scale(-2)], [-d2, a1.scale(2), Z0(3, 1)], [Z0(3, 3), -d2, D3]])
    m["M2_2"] = block([[d3, D2, a2.scale(2)], [Z0(3, 1), qm.scale(Q(1, 2)), D2], [Z0(1, 1), Z0(1, 3), d1]])
    m["M0_3"] = block([[eps3, A3.scale(Q(2, (d - 1) ** 2)), Zm.scale(Q(-6, (d - 1) ** 2 * (d - 2)))]])
    m["M1_3"] = block([
        [D1, Z0(1, 3), s1.scale(-2), Z0(1, 1)],
        [-d2, a1.scale(2), Z0(3, 3), s3.scale(-2)],
        [Z0(3, 3), -d2, a1.scale(3), Z0(3, 1)],
        [Z0(3, 3), Z0(3, 3), -d2, D3],
    ])
    m["M2_3"] = block([
        [d3, D2, a2.scale(2), s2.scale(-2)],
        [Z0(3, 1), qm.scale(Q(1, 2)), D2, a2.scale(3)],
        [Z0(3, 1), Z0(3, 3), qm.scale(Q(1, 3)), D2],
        [Z0(1, 1), Z0(1, 3), Z0(1, 3), d1],
    ])
    if m.perturb and not m.applied:
        raise KeyError(f"no glossary matrix named {m.perturb[0]}")
    table = GlossaryTable(ctx, dict(m), errata)
    if self_check:
        check_shapes(table)
        bad = [c for c in construction_checks(table) if not c[1]]
        if bad:
            raise MathCheckError("glossary construction checks failed: " + ", ".join(n for n, _ in bad))
    return table


def _assemble_P(m: Dict[str, PolyMatrix], i: int) -> PolyMatrix:
    """P_i from the stored J blocks (same layout as P_matrix)."""
    grid = []
    for j in range(i):
        row = []
        for k in range(1, i + 1):
            row.append(m[f"J{k}{j}"] if k > j else PolyMatrix.zeros(len(_multisets(j)), len(order_basis(k))))
        grid.append(row)
    return block(grid)


def build_B2(ctx: RingContext) -> PolyMatrix:
    x, y, z = V
    k = Q(1, ctx.d - 1)
    dx, dy, dz = ctx.delta_grad
    H = ctx.ham
    c = ctx
    half = Q(1, 2)
    rows = [
        [H("yz", c.Dxx), H("yz", c.Dxy) - (x * dz).scale(k), H("yz", c.Dxz) + (x * dy).scale(k)],
        [H("zx", c.Dxx), H("yz", c.Dyy), (H("yz", c.Dyz) + H("zx", c.Dxz) + (y * dy - x * dx).scale(k)).scale(half)],
        [H("xy", c.Dxx), (H("yz", c.Dyz) + H("xy", c.Dxy) + (x * dx - z * dz).scale(k)).scale(half), H("yz", c.Dzz)],
        [H("zx", c.Dxy) + (y * dz).scale(k), H("zx", c.Dyy), H("zx", c.Dyz) - (y * dx).scale(k)],
        [(H("zx", c.Dxz) + H("xy", c.Dxy) + (z * dz - y * dy).scale(k)).scale(half), H("xy", c.Dyy), H("zx", c.Dzz)],
        [H("xy", c.Dxz) - (z * dy).scale(k), H("xy", c.Dyz) + (z * dx).scale(k), H("xy", c.Dzz)],
    ]
    return PolyMatrix(rows)


SHAPES = {
    "d1": (1, 3), "d2": (3, 3), "d3": (3, 1), "D1": (1, 3), "D2": (3, 3), "D3": (3, 1),
    "q": (3, 3), "Delta": (3, 3), "adjDelta": (3, 3), "alpha0": (1, 1), "alpha1": (3, 3), "alpha2": (3, 3), "alpha3": (1, 1),
    "sigma1": (1, 3), "sigma2": (3, 3), "sigma3": (3, 1), "B1": (6, 3), "B2": (6, 3),
    "J10": (1, 3), "J20": (1, 6), "J21": (3, 6), "J30": (1, 10), "J31": (3, 10), "J32": (6, 10),
    "P1": (1, 3), "P2": (4, 9), "P3": (10, 19),
    "theta0_2": (1, 6), "theta1_2": (3, 7), "theta_even_2": (4, 7), "theta_odd_2": (4, 7),
    "theta0_3": (4, 10), "theta1_3": (9, 10), "theta_even_3": (11, 10), "theta_odd_3": (11, 10),
    "M0_1": (3, 4), "M1_1": (4, 4), "M2_1": (4, 4),
    "M0_2": (6, 7), "M1_2": (7, 7), "M2_2": (7, 7), "M0_3": (10, 10), "M1_3": (10, 10), "M2_3": (10, 10),
    "eps2": (6, 4), "A2": (6, 3), "eps3": (10, 4), "A3": (10, 3), "Z": (10, 3),
}


def check_shapes(table: GlossaryTable) -> None:
    for name, shape in SHAPES.items():
        if table[name].shape != shape:
            raise MathCheckError(f"{name} has shape {table[name].shape}, expected {shape}")


def _zero_mod(ctx: RingContext, A: PolyMatrix) -> bool:
    return reduce_mod_f(A, ctx).is_zero()


def construction_checks(table: GlossaryTable) -> List[Tuple[str, bool]]:
    """Cheap structural checks run on every build."""
    ctx = table.ctx
    out = []
    out.append(("J21*M0_2", _zero_mod(ctx, table["J21"] @ table["M0_2"])))
    out.append(("J32*M0_3", _zero_mod(ctx, table["J32"] @ table["M0_3"])))
    return out


class MFReport:
    def __init__(self, left: PolyMatrix, right: PolyMatrix):
        self.ab_residual = left
        self.ba_residual = right

    @property
    def ab_ok(self) -> bool:
        return self.ab_residual.is_zero()

    @property
    def ba_ok(self) -> bool:
        return self.ba_residual.is_zero()

    @property
    def passed(self) -> bool:
        return self.ab_ok and self.ba_ok

    def __bool__(self) -> bool:
        return self.passed


def verify_matrix_factorization(pair: Tuple[PolyMatrix, PolyMatrix], multiplier: Polynomial) -> MFReport:
    A, B = pair
    if A.rows != A.cols or B.shape != A.shape:
        from .errors import DimensionMismatch

        raise DimensionMismatch("matrix factorization needs square matrices of equal size")
    target = PolyMatrix.identity(A.rows).scale_poly(multiplier)
    return MFReport(matmul(A, B) - target, matmul(B, A) - target)


def entry_degree_table(table: GlossaryTable) -> Dict[str, Tuple[int, int]]:
    return {n: table[n].shape for n in table.names()}
