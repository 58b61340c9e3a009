"""The wedge-of-E model of the spin representation and its group elements.

A spin vector at level n is a sparse map from subsets of {1..n} (bitmask,
bit i-1 for index i) to Fractions; the subset S stands for the wedge of
the e_i with i in S, equivalently the left-ideal element e_S f_1...f_n.

Two-form action on this model:
    e_i^e_j  acts as  (1/2) o(e_i) o(e_j)
    f_i^f_j  acts as  2 iota(f_i) iota(f_j)
    e_i^f_j  acts as  (1/2) (o(e_i) iota(f_j) - iota(f_j) o(e_i))
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterable

from . import clifford_core as cc
from .errors import (
    IndexRangeError,
    InvalidRootVectorError,
    LevelMismatchError,
    NotInLeftIdealError,
    StructureError,
)


def _below(mask: int, bit: int) -> int:
    return bin(mask & ((1 << bit) - 1)).count("1")


class SpinVector:
    """Sparse exact vector in the level-n spin space."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[int, Fraction] | None = None):
        self.n = n
        self.terms: dict[int, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if m < 0 or m >= (1 << n):
                    raise IndexRangeError(f"subset mask {m} out of range at level {n}")
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    self.terms[m] = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def basis(n: int, indices: Iterable[int] | int) -> "SpinVector":
        if isinstance(indices, int):
            mask = indices
        else:
            mask = 0
            for i in indices:
                if not 1 <= i <= n:
                    raise IndexRangeError(f"index {i} out of range 1..{n}")
                mask |= 1 << (i - 1)
        return SpinVector(n, {mask: Fraction(1)})

    @staticmethod
    def zero(n: int) -> "SpinVector":
        return SpinVector(n)

    @staticmethod
    def omega0(n: int) -> "SpinVector":
        """Highest weight vector: the full wedge e_1^...^e_n."""
        return SpinVector(n, {(1 << n) - 1: Fraction(1)})

    @staticmethod
    def omega1(n: int) -> "SpinVector":
        """The other highest weight vector: e_1^...^e_{n-1}."""
        return SpinVector(n, {(1 << (n - 1)) - 1: Fraction(1)})

    # -- vector space ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mask: int) -> Fraction:
        return self.terms.get(mask, Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SpinVector)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "SpinVector") -> "SpinVector":
        if self.n != other.n:
            raise LevelMismatchError(f"levels differ: {self.n} vs {other.n}")
        out = dict(self.terms)
        for m, c in other.terms.items():
            nv = out.get(m, Fraction(0)) + c
            if nv:
                out[m] = nv
            else:
                out.pop(m, None)
        return SpinVector(self.n, out)

    def __sub__(self, other: "SpinVector") -> "SpinVector":
        return self + other.scale(-1)

    def __neg__(self) -> "SpinVector":
        return self.scale(-1)

    def scale(self, c) -> "SpinVector":
        c = c if isinstance(c, Fraction) else Fraction(c)
        if not c:
            return SpinVector.zero(self.n)
        return SpinVector(self.n, {m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    # -- structure ---------------------------------------------------------

    def parity(self) -> str:
        """Parity tag: 'even', 'odd' (all subsets of that size mod 2), else 'mixed'."""
        pars = {bin(m).count("1") % 2 for m in self.terms}
        if len(pars) == 2:
            return "mixed"
        if not pars or pars == {0}:
            return "even"
        return "odd"

    def parity_split(self) -> tuple["SpinVector", "SpinVector"]:
        ev = {m: c for m, c in self.terms.items() if bin(m).count("1") % 2 == 0}
        od = {m: c for m, c in self.terms.items() if bin(m).count("1") % 2 == 1}
        return SpinVector(self.n, ev), SpinVector(self.n, od)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            if m == 0:
                mono = "1"
            else:
                mono = "e" + "".join(
                    str(i + 1) for i in range(self.n) if m >> i & 1
                )
            parts.append(f"{self.terms[m]}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


# -- raw letter operators on subset masks -----------------------------------


def _o(i: int, mask: int) -> tuple[int, int] | None:
    """Wedge with e_i: (new mask, sign) or None."""
    bit = i - 1
    if mask >> bit & 1:
        return None
    return mask | (1 << bit), (-1 if _below(mask, bit) % 2 else 1)


def _iota(j: int, mask: int) -> tuple[int, int] | None:
    """Contract with f_j: (new mask, sign) or None."""
    bit = j - 1
    if not (mask >> bit & 1):
        return None
    return mask & ~(1 << bit), (-1 if _below(mask, bit) % 2 else 1)


def _apply_letterwise(
    fn: Callable[[int], tuple[int, Fraction] | None], x: SpinVector
) -> SpinVector:
    out: dict[int, Fraction] = {}
    for m, c in x.terms.items():
        r = fn(m)
        if r is None:
            continue
        m2, s = r
        nv = out.get(m2, Fraction(0)) + s * c
        if nv:
            out[m2] = nv
        else:
            out.pop(m2, None)
    return SpinVector(x.n, out)


def outer(v: cc.VectorInV, omega: SpinVector) -> SpinVector:
    """Wedge by a vector of E; rejects vectors with an F-component."""
    if any(c != 0 for c in v.f):
        raise IndexRangeError("outer product expects a vector with zero f-part")
    if v.n != omega.n:
        raise LevelMismatchError("levels differ")
    out = SpinVector.zero(omega.n)
    for i, c in enumerate(v.e):
        if c:
            out = out + _apply_letterwise(lambda m, i=i: _o(i + 1, m), omega).scale(c)
    return out


def inner(v: cc.VectorInV, omega: SpinVector) -> SpinVector:
    """Plain contraction iota by a vector of F (callers supply the factor 2)."""
    if any(c != 0 for c in v.e):
        raise IndexRangeError("inner product expects a vector with zero e-part")
    if v.n != omega.n:
        raise LevelMismatchError("levels differ")
    out = SpinVector.zero(omega.n)
    for j, c in enumerate(v.f):
        if c:
            out = out + _apply_letterwise(lambda m, j=j: _iota(j + 1, m), omega).scale(c)
    return out


def vector_action(v: cc.VectorInV, omega: SpinVector) -> SpinVector:
    """Module action of a general vector: o(e-part) + 2 iota(f-part)."""
    if v.n != omega.n:
        raise LevelMismatchError("levels differ")
    out = SpinVector.zero(omega.n)
    for i, c in enumerate(v.e):
        if c:
            out = out + _apply_letterwise(lambda m, i=i: _o(i + 1, m), omega).scale(c)
    for j, c in enumerate(v.f):
        if c:
            out = out + _apply_letterwise(
                lambda m, j=j: _iota(j + 1, m), omega
            ).scale(2 * c)
    return out


# -- two-forms ---------------------------------------------------------------


class SoElement:
    """Sparse two-form: blocks of e_i^e_j (i<j), f_i^f_j (i<j), e_i^f_j."""

    __slots__ = ("n", "ee", "ff", "ef")

    def __init__(self, n: int, ee=None, ff=None, ef=None):
        self.n = n
        self.ee: dict[tuple[int, int], Fraction] = {}
        self.ff: dict[tuple[int, int], Fraction] = {}
        self.ef: dict[tuple[int, int], Fraction] = {}
        for src, dst, ordered in ((ee, self.ee, True), (ff, self.ff, True), (ef, self.ef, False)):
            if not src:
                continue
            for (i, j), c in src.items():
                if not (1 <= i <= n and 1 <= j <= n):
                    raise IndexRangeError(f"index pair ({i},{j}) out of range 1..{n}")
                if ordered and not i < j:
                    raise IndexRangeError(f"pair ({i},{j}) must satisfy i < j")
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    dst[(i, j)] = c

    @staticmethod
    def basis_ee(n: int, i: int, j: int) -> "SoElement":
        return SoElement(n, ee={(i, j): 1})

    @staticmethod
    def basis_ff(n: int, i: int, j: int) -> "SoElement":
        return SoElement(n, ff={(i, j): 1})

    @staticmethod
    def basis_ef(n: int, i: int, j: int) -> "SoElement":
        return SoElement(n, ef={(i, j): 1})

    @staticmethod
    def chevalley_h(n: int, i: int) -> "SoElement":
        """h_i = e_i^f_i - e_{i+1}^f_{i+1} for i < n; h_n = e_{n-1}^f_{n-1} + e_n^f_n."""
        if not 1 <= i <= n:
            raise IndexRangeError(f"h_{i} undefined at level {n}")
        if i < n:
            return SoElement(n, ef={(i, i): 1, (i + 1, i + 1): -1})
        return SoElement(n, ef={(n - 1, n - 1): 1, (n, n): 1})

    def is_zero(self) -> bool:
        return not (self.ee or self.ff or self.ef)

    def __add__(self, other: "SoElement") -> "SoElement":
        if self.n != other.n:
            raise LevelMismatchError("levels differ")

        def merge(a, b):
            out = dict(a)
            for k, c in b.items():
                nv = out.get(k, Fraction(0)) + c
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
            return out

        return SoElement(
            self.n, merge(self.ee, other.ee), merge(self.ff, other.ff), merge(self.ef, other.ef)
        )

    def __sub__(self, other: "SoElement") -> "SoElement":
        return self + other.scale(-1)

    def scale(self, c) -> "SoElement":
        c = Fraction(c)
        return SoElement(
            self.n,
            {k: c * v for k, v in self.ee.items()},
            {k: c * v for k, v in self.ff.items()},
            {k: c * v for k, v in self.ef.items()},
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SoElement)
            and (self.n, self.ee, self.ff, self.ef)
            == (other.n, other.ee, other.ff, other.ef)
        )

    def trace_gl(self) -> Fraction:
        """Trace of the gl(E) block (sum of diagonal e_i^f_i coefficients)."""
        return sum((c for (i, j), c in self.ef.items() if i == j), Fraction(0))

    def matrix(self):
        """Matrix on V (coords e_1..e_n,f_1..f_n): u^v maps w to (v|w)u - (u|w)v."""
        from . import linalg

        n = self.n
        m = linalg.zeros(2 * n, 2 * n)

        def add_pair(u: int, v: int, c: Fraction) -> None:
            # u, v are signed symbols; (v|w) pulls the partner coordinate of w
            for w_col in range(2 * n):
                w_sym = w_col + 1 if w_col < n else -(w_col - n + 1)
                pv = cc.symbol_pairing(v, w_sym)
                pu = cc.symbol_pairing(u, w_sym)
                if pv:
                    row = u - 1 if u > 0 else n + (-u) - 1
                    m[row][w_col] += c * pv
                if pu:
                    row = v - 1 if v > 0 else n + (-v) - 1
                    m[row][w_col] -= c * pu

        for (i, j), c in self.ee.items():
            add_pair(i, j, c)
        for (i, j), c in self.ff.items():
            add_pair(-i, -j, c)
        for (i, j), c in self.ef.items():
            add_pair(i, -j, c)
        return m

    @staticmethod
    def from_matrix(n: int, m) -> "SoElement":
        """Inverse of matrix(); validates the block shape of the split form."""
        ee = {}
        ff = {}
        ef = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                a = m[i - 1][j - 1]
                if a:
                    ef[(i, j)] = a
                if i < j:
                    b = m[i - 1][n + j - 1]
                    if b:
                        ee[(i, j)] = b
                    c = m[n + i - 1][j - 1]
                    if c:
                        ff[(i, j)] = c
        x = SoElement(n, ee=ee, ff=ff, ef=ef)
        if x.matrix() != [list(row) for row in m]:
            raise StructureError("matrix is not skew with respect to the split form")
        return x

    def __str__(self) -> str:
        parts = [f"{c}*e{i}^e{j}" for (i, j), c in sorted(self.ee.items())]
        parts += [f"{c}*f{i}^f{j}" for (i, j), c in sorted(self.ff.items())]
        parts += [f"{c}*e{i}^f{j}" for (i, j), c in sorted(self.ef.items())]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def _act_ee(i: int, j: int, mask: int) -> tuple[int, Fraction] | None:
    r1 = _o(j, mask)
    if r1 is None:
        return None
    m1, s1 = r1
    r2 = _o(i, m1)
    if r2 is None:
        return None
    m2, s2 = r2
    return m2, Fraction(s1 * s2, 2)


def _act_ff(i: int, j: int, mask: int) -> tuple[int, Fraction] | None:
    r1 = _iota(j, mask)
    if r1 is None:
        return None
    m1, s1 = r1
    r2 = _iota(i, m1)
    if r2 is None:
        return None
    m2, s2 = r2
    return m2, Fraction(2 * s1 * s2)


def _act_ef(i: int, j: int, mask: int) -> tuple[int, Fraction] | None:
    out: dict[int, Fraction] = {}
    r1 = _iota(j, mask)
    if r1 is not None:
        m1, s1 = r1
        r2 = _o(i, m1)
        if r2 is not None:
            m2, s2 = r2
            out[m2] = out.get(m2, Fraction(0)) + Fraction(s1 * s2, 2)
    r1 = _o(i, mask)
    if r1 is not None:
        m1, s1 = r1
        r2 = _iota(j, m1)
        if r2 is not None:
            m2, s2 = r2
            out[m2] = out.get(m2, Fraction(0)) - Fraction(s1 * s2, 2)
    out = {m: c for m, c in out.items() if c}
    if len(out) > 1:
        raise StructureError("e^f action produced more than one monomial")
    if not out:
        return None
    ((m, c),) = out.items()
    return m, c


def rho_so(x: SoElement, omega: SpinVector) -> SpinVector:
    """Spin action of a two-form on the wedge model."""
    if x.n != omega.n:
        raise LevelMismatchError("levels differ")
    out = SpinVector.zero(omega.n)
    for (i, j), c in x.ee.items():
        out = out + _apply_letterwise(lambda m, i=i, j=j: _act_ee(i, j, m), omega).scale(c)
    for (i, j), c in x.ff.items():
        out = out + _apply_letterwise(lambda m, i=i, j=j: _act_ff(i, j, m), omega).scale(c)
    for (i, j), c in x.ef.items():
        out = out + _apply_letterwise(lambda m, i=i, j=j: _act_ef(i, j, m), omega).scale(c)
    return out


def rho_standard(a: SoElement, omega: SpinVector) -> SpinVector:
    """Derivation action of gl(E) on the wedge algebra (e_j replaced by e_i).

    Implemented independently of rho_so so the twist identity is a real
    cross-check.  Rejects two-forms with ee or ff blocks.
    """
    if a.ee or a.ff:
        raise InvalidRootVectorError("standard action is defined on gl(E) only")
    if a.n != omega.n:
        raise LevelMismatchError("levels differ")

    def move(i: int, j: int, mask: int) -> tuple[int, Fraction] | None:
        bitj = j - 1
        if not (mask >> bitj & 1):
            return None
        if i == j:
            return mask, Fraction(1)
        m1 = mask & ~(1 << bitj)
        s1 = -1 if _below(mask, bitj) % 2 else 1
        biti = i - 1
        if m1 >> biti & 1:
            return None
        s2 = -1 if _below(m1, biti) % 2 else 1
        return m1 | (1 << biti), Fraction(s1 * s2)

    out = SpinVector.zero(omega.n)
    for (i, j), c in a.ef.items():
        out = out + _apply_letterwise(lambda m, i=i, j=j: move(i, j, m), omega).scale(c)
    return out


# -- the left ideal picture --------------------------------------------------


def to_left_ideal(omega: SpinVector) -> cc.CliffordElement:
    """omega maps to omega * f: subset S becomes the monomial e_S f_1..f_n."""
    full = (1 << omega.n) - 1
    return cc.CliffordElement(omega.n, {(m, full): c for m, c in omega.terms.items()})


def from_left_ideal(x: cc.CliffordElement) -> SpinVector:
    full = (1 << x.n) - 1
    terms: dict[int, Fraction] = {}
    for (em, fm), c in x.terms.items():
        if fm != full:
            raise NotInLeftIdealError(
                f"monomial {cc.monomial_str((em, fm))} misses f-factors"
            )
        terms[em] = c
    return SpinVector(x.n, terms)


def clifford_action_on_spin(a: cc.CliffordElement, x: SpinVector) -> SpinVector:
    """Left action of the Clifford algebra on the ideal model: e_i acts as
    the wedge, f_j as twice the contraction, letters applied right to left."""
    if a.n != x.n:
        raise LevelMismatchError("levels differ")
    out = SpinVector.zero(x.n)
    for mono, c in a.terms.items():
        cur = x
        for sym in reversed(cc.monomial_word(mono)):
            if sym > 0:
                cur = _apply_letterwise(lambda m, i=sym: _o(i, m), cur)
            else:
                cur = _apply_letterwise(lambda m, j=-sym: _iota(j, m), cur).scale(2)
            if cur.is_zero():
                break
        out = out + cur.scale(c)
    return out


def so_from_clifford(z: cc.CliffordElement) -> SoElement:
    """Invert the quarter-commutator embedding; errors if z is not in its image."""
    n = z.n
    ee = {}
    ff = {}
    ef = {}
    for (em, fm), c in z.terms.items():
        ke, kf = bin(em).count("1"), bin(fm).count("1")
        if (ke, kf) == (2, 0):
            i, j = cc._mask_indices(em)
            ee[(i, j)] = 2 * c
        elif (ke, kf) == (0, 2):
            i, j = cc._mask_indices(fm)
            ff[(i, j)] = 2 * c
        elif (ke, kf) == (1, 1):
            (i,) = cc._mask_indices(em)
            (j,) = cc._mask_indices(fm)
            ef[(i, j)] = 2 * c
        elif (ke, kf) == (0, 0):
            pass  # validated by the round trip below
        else:
            raise StructureError(f"monomial {cc.monomial_str((em, fm))} has degree > 2")
    x = SoElement(n, ee=ee, ff=ff, ef=ef)
    if cc.so_to_clifford(x) != z:
        raise StructureError("element is not in the image of the two-form embedding")
    return x


def so_bracket(x: SoElement, y: SoElement) -> SoElement:
    """[x, y] computed inside the Clifford algebra through the embedding."""
    cx = cc.so_to_clifford(x)
    cy = cc.so_to_clifford(y)
    return so_from_clifford(cc.mul(cx, cy) - cc.mul(cy, cx))


# -- linear operators --------------------------------------------------------


class LinearOperator:
    """Column-sparse linear map on the level-n spin space."""

    __slots__ = ("n", "cols")

    def __init__(self, n: int, cols: dict[int, SpinVector] | None = None):
        self.n = n
        self.cols: dict[int, SpinVector] = {}
        if cols:
            for m, v in cols.items():
                if not v.is_zero():
                    self.cols[m] = v

    @staticmethod
    def from_function(n: int, fn: Callable[[SpinVector], SpinVector]) -> "LinearOperator":
        cols = {}
        for m in range(1 << n):
            cols[m] = fn(SpinVector.basis(n, m))
        return LinearOperator(n, cols)

    @staticmethod
    def identity(n: int) -> "LinearOperator":
        return LinearOperator(
            n, {m: SpinVector.basis(n, m) for m in range(1 << n)}
        )

    def apply(self, x: SpinVector) -> SpinVector:
        if x.n != self.n:
            raise LevelMismatchError("levels differ")
        out = SpinVector.zero(self.n)
        for m, c in x.terms.items():
            col = self.cols.get(m)
            if col is not None:
                out = out + col.scale(c)
        return out

    def compose(self, inner_op: "LinearOperator") -> "LinearOperator":
        return LinearOperator(
            self.n, {m: self.apply(v) for m, v in inner_op.cols.items()}
        )

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        keys = set(self.cols) | set(other.cols)
        return LinearOperator(
            self.n,
            {
                m: self.cols.get(m, SpinVector.zero(self.n))
                + other.cols.get(m, SpinVector.zero(self.n))
                for m in keys
            },
        )

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return self + other.scale(-1)

    def scale(self, c) -> "LinearOperator":
        return LinearOperator(self.n, {m: v.scale(c) for m, v in self.cols.items()})

    def is_zero(self) -> bool:
        return not self.cols

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearOperator)
            and self.n == other.n
            and self.cols == other.cols
        )

    def determinant(self) -> Fraction:
        from . import linalg

        size = 1 << self.n
        m = linalg.zeros(size, size)
        for col in range(size):
            v = self.cols.get(col)
            if v is not None:
                for row, c in v.terms.items():
                    m[row][col] = c
        return linalg.det(m)


def rho_operator(x: SoElement) -> LinearOperator:
    return LinearOperator.from_function(x.n, lambda v: rho_so(x, v))


# -- group elements ----------------------------------------------------------

_ROOT_KINDS = ("ee", "ff", "ef")


def _validate_root(kind: str, i: int, j: int, n: int) -> None:
    if kind not in _ROOT_KINDS:
        raise InvalidRootVectorError(f"unknown root kind {kind!r}")
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexRangeError(f"root indices ({i},{j}) out of range 1..{n}")
    if kind in ("ee", "ff") and not i < j:
        raise InvalidRootVectorError(f"{kind} root needs i < j, got ({i},{j})")
    if kind == "ef" and i == j:
        raise InvalidRootVectorError("e_i^f_i is not nilpotent and is not permitted")


def root_so_element(n: int, kind: str, i: int, j: int) -> SoElement:
    _validate_root(kind, i, j, n)
    if kind == "ee":
        return SoElement.basis_ee(n, i, j)
    if kind == "ff":
        return SoElement.basis_ff(n, i, j)
    return SoElement.basis_ef(n, i, j)


def _exp_root_apply(n: int, kind: str, i: int, j: int, t: Fraction, x: SpinVector) -> SpinVector:
    rv = root_so_element(n, kind, i, j)
    out = x
    term = x
    k = 1
    while True:
        term = rho_so(rv, term).scale(Fraction(t, k))
        if term.is_zero():
            return out
        out = out + term
        k += 1
        if k > 2 * n + 2:
            raise StructureError("root vector action failed to nilpotate")


class GroupElement:
    """A word of exponentials exp(t * rho(X)) of nilpotent root vectors.

    The word is read as a product of operators left to right: the last
    entry acts first.  Equality is operator equality.
    """

    __slots__ = ("n", "word", "_op", "_so")

    def __init__(self, n: int, word: Iterable[tuple[str, int, int, Fraction]] = ()):
        self.n = n
        w = []
        for kind, i, j, t in word:
            _validate_root(kind, i, j, n)
            w.append((kind, i, j, Fraction(t)))
        self.word: tuple = tuple(w)
        self._op: LinearOperator | None = None
        self._so = None

    @staticmethod
    def identity(n: int) -> "GroupElement":
        return GroupElement(n, ())

    def apply(self, x: SpinVector) -> SpinVector:
        if x.n != self.n:
            raise LevelMismatchError("levels differ")
        if self._op is not None:
            return self._op.apply(x)
        out = x
        for kind, i, j, t in reversed(self.word):
            out = _exp_root_apply(self.n, kind, i, j, t, out)
        return out

    def operator(self) -> LinearOperator:
        if self._op is None:
            op = LinearOperator.from_function(self.n, lambda v: self.apply(v))
            self._op = op
        return self._op

    def inverse(self) -> "GroupElement":
        return GroupElement(
            self.n, [(k, i, j, -t) for (k, i, j, t) in reversed(self.word)]
        )

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.n != other.n:
            raise LevelMismatchError("levels differ")
        return GroupElement(self.n, self.word + other.word)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupElement)
            and self.n == other.n
            and self.operator() == other.operator()
        )

    def so_matrix(self):
        """Image in the special orthogonal group (product of I + t M_X)."""
        from . import linalg

        if self._so is not None:
            return self._so
        n = self.n
        m = linalg.identity(2 * n)
        for kind, i, j, t in self.word:
            rv = root_so_element(n, kind, i, j).matrix()
            step = [
                [
                    (Fraction(1) if r == c else Fraction(0)) + t * rv[r][c]
                    for c in range(2 * n)
                ]
                for r in range(2 * n)
            ]
            m = linalg.matmul(m, step)
        self._so = m
        return m

    def serialize(self) -> list:
        return [[k, i, j, str(t)] for (k, i, j, t) in self.word]

    def __str__(self) -> str:
        if not self.word:
            return "id"
        pieces = []
        for kind, i, j, t in self.word:
            a, b = ("e", "e") if kind == "ee" else ("f", "f") if kind == "ff" else ("e", "f")
            pieces.append(f"exp({t}*{a}{i}^{b}{j})")
        return "*".join(pieces)

    __repr__ = __str__


def exp_nilpotent(n: int, kind: str, i: int, j: int, t) -> GroupElement:
    """Single one-parameter exponential for a permitted root vector."""
    return GroupElement(n, [(kind, i, j, Fraction(t))])


def all_root_vectors(n: int) -> list[tuple[str, int, int]]:
    roots = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            roots.append(("ee", i, j))
            roots.append(("ff", i, j))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                roots.append(("ef", i, j))
    return roots


_PARAMS = (-2, -1, 1, 2)


def random_group_element(n: int, seed, length: int = 6) -> GroupElement:
    """Seed-deterministic word of `length` generator exponentials."""
    if length < 1:
        raise IndexRangeError("word length must be >= 1")
    rng = random.Random(f"spingroup:{n}:{seed}:{length}")
    roots = all_root_vectors(n)
    word = []
    for _ in range(length):
        kind, i, j = rng.choice(roots)
        t = rng.choice(_PARAMS)
        word.append((kind, i, j, Fraction(t)))
    return GroupElement(n, word)


def gl_twist_residual(a: SoElement) -> LinearOperator:
    """rho(A) - rho~(A) + tr(A)/2 * Id for A in gl(E); zero when the twist holds."""
    if a.ee or a.ff:
        raise InvalidRootVectorError("twist residual is defined on gl(E) only")
    half_tr = a.trace_gl() / 2

    def residual(v: SpinVector) -> SpinVector:
        return rho_so(a, v) - rho_standard(a, v) + v.scale(half_tr)

    return LinearOperator.from_function(a.n, residual)
