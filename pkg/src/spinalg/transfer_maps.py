"""Level-changing maps between spin spaces: contraction (drop the last
index), multiplication (inclusion), the dual contraction (append the last
index), the general contraction at an arbitrary isotropic vector, and the
invariant bilinear pairing beta with its Gram matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import clifford_core as cc
from . import grassmann_cone as gc
from . import linalg
from . import spin_rep as sr
from .errors import (
    IndexRangeError,
    LevelMismatchError,
    ResourceBoundError,
    StructureError,
)

DENSE_LEVEL_BOUND = 6


def pi_last(x: sr.SpinVector) -> sr.SpinVector:
    """Contraction to level n-1: kills subsets containing n, keeps the rest."""
    n = x.n
    if n < 1:
        raise IndexRangeError("no level below 0")
    top = 1 << (n - 1)
    return sr.SpinVector(n - 1, {m: c for m, c in x.terms.items() if not m & top})


def tau_last(x: sr.SpinVector) -> sr.SpinVector:
    """Multiplication to level n+1: subsets unchanged, reinterpreted."""
    return sr.SpinVector(x.n + 1, dict(x.terms))


def psi_last(x: sr.SpinVector) -> sr.SpinVector:
    """Dual of contraction to level n+1: append the new top index (sign +1)."""
    top = 1 << x.n
    return sr.SpinVector(x.n + 1, {m | top: c for m, c in x.terms.items()})


def pi_tower(x: sr.SpinVector, target: int) -> sr.SpinVector:
    if target > x.n:
        raise IndexRangeError("tower contraction cannot raise the level")
    out = x
    while out.n > target:
        out = pi_last(out)
    return out


def tau_tower(x: sr.SpinVector, target: int) -> sr.SpinVector:
    if target < x.n:
        raise IndexRangeError("tower multiplication cannot lower the level")
    out = x
    while out.n < target:
        out = tau_last(out)
    return out


@dataclass(frozen=True)
class LevelMap:
    """Metadata + callable for one level-changing map."""

    source_level: int
    target_level: int
    kind: str  # contraction | multiplication | dualContraction
    parity_behavior: str  # preserves | flips

    def apply(self, x: sr.SpinVector) -> sr.SpinVector:
        if x.n != self.source_level:
            raise LevelMismatchError("input level does not match the map")
        if self.kind == "contraction":
            return pi_last(x)
        if self.kind == "multiplication":
            return tau_last(x)
        return psi_last(x)


def contraction_map(n: int) -> LevelMap:
    return LevelMap(n, n - 1, "contraction", "preserves")


def multiplication_map(n: int) -> LevelMap:
    return LevelMap(n - 1, n, "multiplication", "preserves")


def dual_contraction_map(n: int) -> LevelMap:
    return LevelMap(n - 1, n, "dualContraction", "flips")


# -- contraction at a general isotropic vector -------------------------------


@lru_cache(maxsize=64)
def _primed_contraction_solver(n: int, e_coords: tuple):
    """For an isotropic e with nonzero E-part, precompute the expansion of
    the primed ideal basis e'_I f'_1..f'_{n-1} and a solver expressing a
    Clifford element exactly in that basis."""
    e = cc.VectorInV.from_coords(n, list(e_coords))
    basis = gc.hyperbolic_basis_through(e)
    f_block = gc.multiply_vectors(n, basis.new_f[: n - 1])
    elements: list[cc.CliffordElement] = []
    for mask in range(1 << n):
        letters = [basis.new_e[i] for i in range(n) if mask >> i & 1]
        prod = cc.CliffordElement.unit(n)
        for v in letters:
            prod = cc.mul(prod, v.as_clifford())
        elements.append(cc.mul(prod, f_block))
    monos = sorted(set().union(*[set(el.terms) for el in elements]))
    mono_index = {m: i for i, m in enumerate(monos)}
    a = [[el.coefficient(m) for el in elements] for m in monos]
    # invertible row subset via rref pivots of the transpose
    _, pivots = linalg.rref(linalg.transpose(a))
    if len(pivots) != 1 << n:
        raise StructureError("primed ideal basis is not independent")
    square = [a[r] for r in pivots]
    square_inv = linalg.inverse(square)
    pivot_monos = [monos[r] for r in pivots]

    def solve(y: cc.CliffordElement) -> list[Fraction]:
        rhs = [y.coefficient(m) for m in pivot_monos]
        z = linalg.matvec(square_inv, rhs)
        # exact audit: the combination must reproduce y on every monomial
        recon: dict = {}
        for i, c in enumerate(z):
            if not c:
                continue
            for m, v in elements[i].terms.items():
                recon[m] = recon.get(m, Fraction(0)) + c * v
        recon = {m: v for m, v in recon.items() if v}
        if recon != y.terms:
            raise StructureError("contraction image left the primed ideal")
        return z

    return basis, solve


def quotient_model_basis(e: cc.VectorInV) -> gc.HyperbolicBasis:
    """The deterministic hyperbolic basis used by pi_general for this e."""
    basis, _ = _primed_contraction_solver(e.n, tuple(e.coords()))
    return basis


def pi_general(x: sr.SpinVector, e: cc.VectorInV) -> sr.SpinVector:
    """Contraction at an arbitrary isotropic e with nonzero E-part.

    Computed by the defining Clifford formula (ex + (-1)^(n-1) xe halved on
    the even part, sign (-1)^n on the odd part), then re-expressed in the
    deterministic adapted basis and reduced modulo e.
    """
    n = x.n
    if e.n != n:
        raise LevelMismatchError("levels differ")
    basis, solve = _primed_contraction_solver(n, tuple(e.coords()))
    ev, od = x.parity_split()
    ec = e.as_clifford()
    sign_even = Fraction((-1) ** (n - 1), 2)
    sign_odd = Fraction((-1) ** n, 2)
    y = cc.CliffordElement.zero(n)
    for part, sg in ((ev, sign_even), (od, sign_odd)):
        if part.is_zero():
            continue
        xc = sr.to_left_ideal(part)
        y = y + (cc.mul(ec, xc).scale(sg) + cc.mul(xc, ec).scale(Fraction(1, 2)))
    if y.is_zero():
        return sr.SpinVector.zero(n - 1)
    z = solve(y)
    out: dict[int, Fraction] = {}
    top = 1 << (n - 1)
    for mask in range(1 << n):
        if z[mask] and not mask & top:
            out[mask] = z[mask]
    return sr.SpinVector(n - 1, out)


def vector_in_quotient(v: cc.VectorInV, e: cc.VectorInV) -> cc.VectorInV:
    """Express v in e-perp as a level-(n-1) vector of the quotient model."""
    n = v.n
    basis = quotient_model_basis(e)
    rows = linalg.transpose([w.coords() for w in basis.rows()])
    sol = linalg.solve(rows, v.coords())
    if sol is None:
        raise StructureError("basis does not span")
    if sol[2 * n - 1] != 0:
        raise IndexRangeError("vector is not orthogonal to e")
    coords = [sol[i] for i in range(n - 1)] + [sol[n + i] for i in range(n - 1)]
    return cc.VectorInV.from_coords(n - 1, coords)


# -- the invariant pairing ----------------------------------------------------


def beta_direct(x: sr.SpinVector, y: sr.SpinVector) -> Fraction:
    """Pairing via one full Clifford product: the f-coefficient of x* y."""
    if x.n != y.n:
        raise LevelMismatchError("levels differ")
    n = x.n
    prod = cc.mul(cc.star(sr.to_left_ideal(x)), sr.to_left_ideal(y))
    return prod.coefficient((0, (1 << n) - 1))


@lru_cache(maxsize=8)
def _gram_rows(n: int) -> tuple:
    """Row I of the Gram matrix: the pairing of e_I f against every e_J f.

    Each row is computed by genuinely multiplying in the Clifford algebra:
    star(e_I f) acts on the ideal model and the empty-wedge coefficient of
    the image of e_J f is the pairing value.
    """
    rows = []
    for i_mask in range(1 << n):
        x = sr.SpinVector.basis(n, i_mask)
        w = cc.star(sr.to_left_ideal(x))
        row = []
        for j_mask in range(1 << n):
            img = sr.clifford_action_on_spin(w, sr.SpinVector.basis(n, j_mask))
            row.append(img.coefficient(0))
        rows.append(tuple(row))
    return tuple(rows)


def beta(x: sr.SpinVector, y: sr.SpinVector) -> Fraction:
    """Bilinear extension of the monomial pairing (cached Gram rows)."""
    if x.n != y.n:
        raise LevelMismatchError("levels differ")
    if x.n > DENSE_LEVEL_BOUND:
        return beta_direct(x, y)
    rows = _gram_rows(x.n)
    total = Fraction(0)
    for i_mask, a in x.terms.items():
        row = rows[i_mask]
        for j_mask, b in y.terms.items():
            total += a * b * row[j_mask]
    return total


def beta_gram(n: int) -> list[list[Fraction]]:
    """Dense Gram matrix over the 2^n monomial basis (mask order)."""
    if n > DENSE_LEVEL_BOUND:
        raise ResourceBoundError(
            f"dense Gram materialization is limited to n <= {DENSE_LEVEL_BOUND}"
        )
    return [list(r) for r in _gram_rows(n)]


PSIDUAL_SCALAR = Fraction(1, 2)


def psidual_residual(a: sr.SpinVector, x: sr.SpinVector) -> Fraction:
    """beta_(n-1)(pi(x), a) - (1/2) beta_n(x, psi(a)); identically zero.

    In the canonical model (ascending wedge order, f = f_1...f_n) the
    duality diagram commutes with the constant scalar 1/2 at every level:
    the ratio beta_n(x, psi a) / beta_(n-1)(pi x, a) equals 2 on every
    basis pair where both sides are nonzero, with matching zero patterns."""
    n = x.n
    if a.n != n - 1:
        raise LevelMismatchError("first argument must live one level down")
    lhs = beta(pi_last(x), a)
    rhs = beta(x, psi_last(a))
    return lhs - PSIDUAL_SCALAR * rhs
