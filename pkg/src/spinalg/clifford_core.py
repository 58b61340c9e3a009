"""Exact arithmetic in the Clifford algebra of a split quadratic space.

Level n means a 2n-dimensional space with hyperbolic basis
e_1..e_n, f_1..f_n:  (e_i|e_j) = (f_i|f_j) = 0 and (e_i|f_j) = delta_ij.

Basis-vector symbols are signed integers: +i is e_i, -i is f_i.  Strings
"e3"/"f1" and pairs ("e", 3) are accepted anywhere a symbol is expected.

Monomials are normal-ordered words: all e-factors before all f-factors,
each block ascending.  A monomial is stored as a bitmask pair
(emask, fmask) with bit i-1 encoding index i.  Elements are sparse maps
from monomials to Fractions; zero coefficients are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import IndexRangeError, LevelMismatchError, NotIsotropicError

Symbol = int
Monomial = tuple[int, int]


def parse_symbol(sym) -> Symbol:
    """Normalize a symbol given as signed int, ("e", i) / ("f", i), or "e3"."""
    if isinstance(sym, int):
        if sym == 0:
            raise IndexRangeError("symbol index 0 is not allowed")
        return sym
    if isinstance(sym, str):
        kind, idx = sym[0], int(sym[1:])
    else:
        kind, idx = sym
    if kind == "e":
        return idx
    if kind == "f":
        return -idx
    raise IndexRangeError(f"unknown symbol kind {kind!r}")


def symbol_name(sym: Symbol) -> str:
    return f"e{sym}" if sym > 0 else f"f{-sym}"


def _check_index(sym: Symbol, n: int) -> None:
    if not 1 <= abs(sym) <= n:
        raise IndexRangeError(f"symbol {symbol_name(sym)} out of range 1..{n}")


def symbol_pairing(a: Symbol, b: Symbol) -> Fraction:
    """(a|b) for basis symbols: 1 exactly when {a, b} = {e_i, f_i}."""
    return Fraction(1) if a == -b else Fraction(0)


def _sort_key(sym: Symbol) -> tuple[int, int]:
    return (0, sym) if sym > 0 else (1, -sym)


def _mask_indices(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _popcount_below(mask: int, bit: int) -> int:
    return bin(mask & ((1 << bit) - 1)).count("1")


def monomial_word(mono: Monomial) -> list[Symbol]:
    emask, fmask = mono
    return [i for i in _mask_indices(emask)] + [-j for j in _mask_indices(fmask)]


def monomial_str(mono: Monomial) -> str:
    emask, fmask = mono
    if emask == 0 and fmask == 0:
        return "1"
    return "".join(f"e{i}" for i in _mask_indices(emask)) + "".join(
        f"f{j}" for j in _mask_indices(fmask)
    )


class CliffordElement:
    """Sparse rational linear combination of normal-ordered monomials."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[Monomial, Fraction] | None = None):
        self.n = n
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    self.terms[mono] = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def unit(n: int) -> "CliffordElement":
        return CliffordElement(n, {(0, 0): Fraction(1)})

    @staticmethod
    def zero(n: int) -> "CliffordElement":
        return CliffordElement(n)

    @staticmethod
    def from_symbol(n: int, sym) -> "CliffordElement":
        s = parse_symbol(sym)
        _check_index(s, n)
        if s > 0:
            return CliffordElement(n, {(1 << (s - 1), 0): Fraction(1)})
        return CliffordElement(n, {(0, 1 << (-s - 1)): Fraction(1)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CliffordElement)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        self._check_level(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            nv = out.get(mono, Fraction(0)) + c
            if nv:
                out[mono] = nv
            else:
                out.pop(mono, None)
        return CliffordElement(self.n, out)

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return self + (-other)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(self.n, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "CliffordElement":
        c = c if isinstance(c, Fraction) else Fraction(c)
        if not c:
            return CliffordElement.zero(self.n)
        return CliffordElement(self.n, {m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return mul(self, other)
        return self.scale(other)

    def _check_level(self, other: "CliffordElement") -> None:
        if self.n != other.n:
            raise LevelMismatchError(f"levels differ: {self.n} vs {other.n}")

    def parity_split(self) -> tuple["CliffordElement", "CliffordElement"]:
        """(even, odd) word-length split."""
        ev, od = {}, {}
        for (em, fm), c in self.terms.items():
            k = bin(em).count("1") + bin(fm).count("1")
            (ev if k % 2 == 0 else od)[(em, fm)] = c
        return CliffordElement(self.n, ev), CliffordElement(self.n, od)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms):
            parts.append(f"{self.terms[mono]}*{monomial_str(mono)}")
        return " + ".join(parts)

    __repr__ = __str__


def normal_form(word: Iterable, n: int) -> CliffordElement:
    """Normal-ordered expansion of a word of basis-vector symbols.

    Applies vw = 2(v|w) - wv until every word is strictly ordered (e-block
    ascending, then f-block ascending); repeated symbols die since every
    basis vector is isotropic.
    """
    syms = tuple(parse_symbol(s) for s in word)
    for s in syms:
        _check_index(s, n)
    acc: dict[Monomial, Fraction] = {}
    stack: list[tuple[tuple[Symbol, ...], Fraction]] = [(syms, Fraction(1))]
    while stack:
        w, coef = stack.pop()
        pos = None
        for i in range(len(w) - 1):
            if _sort_key(w[i]) >= _sort_key(w[i + 1]):
                pos = i
                break
        if pos is None:
            emask = fmask = 0
            for s in w:
                if s > 0:
                    emask |= 1 << (s - 1)
                else:
                    fmask |= 1 << (-s - 1)
            key = (emask, fmask)
            nv = acc.get(key, Fraction(0)) + coef
            if nv:
                acc[key] = nv
            else:
                acc.pop(key, None)
            continue
        a, b = w[pos], w[pos + 1]
        if a == b:
            continue  # v*v = q(v) = 0 on isotropic basis vectors
        stack.append((w[:pos] + (b, a) + w[pos + 2 :], -coef))
        p = symbol_pairing(a, b)
        if p:
            stack.append((w[:pos] + w[pos + 2 :], 2 * p * coef))
    return CliffordElement(n, acc)


def mul(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """Clifford product, bilinear over normal-ordered monomial words."""
    a._check_level(b)
    out = CliffordElement.zero(a.n)
    for m1, c1 in a.terms.items():
        w1 = monomial_word(m1)
        for m2, c2 in b.terms.items():
            piece = normal_form(w1 + monomial_word(m2), a.n)
            out = out + piece.scale(c1 * c2)
    return out


def star(a: CliffordElement) -> CliffordElement:
    """The anti-automorphism reversing each monomial word."""
    out = CliffordElement.zero(a.n)
    for mono, c in a.terms.items():
        out = out + normal_form(list(reversed(monomial_word(mono))), a.n).scale(c)
    return out


@dataclass(frozen=True)
class QuadraticSpace:
    """The level-n split space; mostly a carrier for n with the fixed form."""

    n: int

    @property
    def dim(self) -> int:
        return 2 * self.n

    def symbols(self) -> list[Symbol]:
        return [i for i in range(1, self.n + 1)] + [-i for i in range(1, self.n + 1)]


class VectorInV:
    """A vector of the level-n space, split into E- and F-coordinates."""

    __slots__ = ("n", "e", "f")

    def __init__(self, n: int, e: Iterable = (), f: Iterable = ()):
        self.n = n
        ee = [Fraction(x) for x in e]
        ff = [Fraction(x) for x in f]
        ee += [Fraction(0)] * (n - len(ee))
        ff += [Fraction(0)] * (n - len(ff))
        if len(ee) != n or len(ff) != n:
            raise IndexRangeError("coordinate sequence longer than level")
        self.e = tuple(ee)
        self.f = tuple(ff)

    @staticmethod
    def basis(n: int, sym) -> "VectorInV":
        s = parse_symbol(sym)
        _check_index(s, n)
        e = [0] * n
        f = [0] * n
        if s > 0:
            e[s - 1] = 1
        else:
            f[-s - 1] = 1
        return VectorInV(n, e, f)

    @staticmethod
    def from_coords(n: int, coords) -> "VectorInV":
        coords = list(coords)
        if len(coords) != 2 * n:
            raise IndexRangeError("expected 2n coordinates")
        return VectorInV(n, coords[:n], coords[n:])

    def coords(self) -> list[Fraction]:
        return list(self.e) + list(self.f)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.e) and all(x == 0 for x in self.f)

    def __add__(self, other: "VectorInV") -> "VectorInV":
        if self.n != other.n:
            raise LevelMismatchError("vector levels differ")
        return VectorInV(
            self.n,
            [a + b for a, b in zip(self.e, other.e)],
            [a + b for a, b in zip(self.f, other.f)],
        )

    def __sub__(self, other: "VectorInV") -> "VectorInV":
        return self + other.scale(-1)

    def scale(self, c) -> "VectorInV":
        c = Fraction(c)
        return VectorInV(self.n, [c * x for x in self.e], [c * x for x in self.f])

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VectorInV)
            and (self.n, self.e, self.f) == (other.n, other.e, other.f)
        )

    def __hash__(self):
        return hash((self.n, self.e, self.f))

    def as_clifford(self) -> CliffordElement:
        terms: dict[Monomial, Fraction] = {}
        for i, c in enumerate(self.e):
            if c:
                terms[(1 << i, 0)] = c
        for j, c in enumerate(self.f):
            if c:
                key = (0, 1 << j)
                terms[key] = terms.get(key, Fraction(0)) + c
        return CliffordElement(self.n, terms)

    def __str__(self) -> str:
        parts = [f"{c}*e{i+1}" for i, c in enumerate(self.e) if c]
        parts += [f"{c}*f{j+1}" for j, c in enumerate(self.f) if c]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def pairing(v: VectorInV, w: VectorInV) -> Fraction:
    """The bilinear form (v|w) of the split quadratic space."""
    if v.n != w.n:
        raise LevelMismatchError("vector levels differ")
    return sum(
        (a * b for a, b in zip(v.e, w.f)), Fraction(0)
    ) + sum((a * b for a, b in zip(v.f, w.e)), Fraction(0))


def quadratic_value(v: VectorInV) -> Fraction:
    return pairing(v, v)


def require_isotropic(v: VectorInV, what: str = "vector") -> None:
    q = quadratic_value(v)
    if q != 0:
        raise NotIsotropicError(f"{what} has q = {q} != 0")


class ExteriorVector:
    """Sparse element of the exterior algebra on the 2n symbols of level n.

    Mask bit i-1 encodes e_i, bit n+i-1 encodes f_i; wedge letters are
    ordered e_1 < ... < e_n < f_1 < ... < f_n by bit index.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[int, Fraction] | None = None):
        self.n = n
        self.terms: dict[int, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    self.terms[m] = c

    @staticmethod
    def unit(n: int) -> "ExteriorVector":
        return ExteriorVector(n, {0: Fraction(1)})

    @staticmethod
    def zero(n: int) -> "ExteriorVector":
        return ExteriorVector(n)

    def _bit(self, sym: Symbol) -> int:
        _check_index(sym, self.n)
        return sym - 1 if sym > 0 else self.n + (-sym) - 1

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExteriorVector)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __add__(self, other: "ExteriorVector") -> "ExteriorVector":
        if self.n != other.n:
            raise LevelMismatchError("levels differ")
        out = dict(self.terms)
        for m, c in other.terms.items():
            nv = out.get(m, Fraction(0)) + c
            if nv:
                out[m] = nv
            else:
                out.pop(m, None)
        return ExteriorVector(self.n, out)

    def __sub__(self, other: "ExteriorVector") -> "ExteriorVector":
        return self + other.scale(-1)

    def scale(self, c) -> "ExteriorVector":
        c = c if isinstance(c, Fraction) else Fraction(c)
        if not c:
            return ExteriorVector.zero(self.n)
        return ExteriorVector(self.n, {m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def degrees(self) -> set[int]:
        return {bin(m).count("1") for m in self.terms}

    def degree_component(self, d: int) -> "ExteriorVector":
        return ExteriorVector(
            self.n, {m: c for m, c in self.terms.items() if bin(m).count("1") == d}
        )

    def outer_symbol(self, sym: Symbol) -> "ExteriorVector":
        bit = self._bit(sym)
        out: dict[int, Fraction] = {}
        for m, c in self.terms.items():
            if m >> bit & 1:
                continue
            sign = -1 if _popcount_below(m, bit) % 2 else 1
            key = m | (1 << bit)
            nv = out.get(key, Fraction(0)) + sign * c
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
        return ExteriorVector(self.n, out)

    def inner_symbol(self, sym: Symbol) -> "ExteriorVector":
        """Contraction iota(v) for a basis symbol v: pairs with its partner."""
        partner = -sym
        bit = self._bit(partner)
        out: dict[int, Fraction] = {}
        for m, c in self.terms.items():
            if not (m >> bit & 1):
                continue
            sign = -1 if _popcount_below(m, bit) % 2 else 1
            key = m & ~(1 << bit)
            nv = out.get(key, Fraction(0)) + sign * c
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
        return ExteriorVector(self.n, out)

    def outer_vector(self, v: VectorInV) -> "ExteriorVector":
        out = ExteriorVector.zero(self.n)
        for i, c in enumerate(v.e):
            if c:
                out = out + self.outer_symbol(i + 1).scale(c)
        for j, c in enumerate(v.f):
            if c:
                out = out + self.outer_symbol(-(j + 1)).scale(c)
        return out

    def inner_vector(self, v: VectorInV) -> "ExteriorVector":
        out = ExteriorVector.zero(self.n)
        for i, c in enumerate(v.e):
            if c:
                out = out + self.inner_symbol(i + 1).scale(c)
        for j, c in enumerate(v.f):
            if c:
                out = out + self.inner_symbol(-(j + 1)).scale(c)
        return out

    def change_basis(self, new_rows: list[VectorInV]) -> "ExteriorVector":
        """Coordinates of self over the wedge basis of the given 2n vectors."""
        from . import linalg

        n = self.n
        a = [row.coords() for row in new_rows]
        if len(a) != 2 * n:
            raise IndexRangeError("need 2n basis vectors")
        c = linalg.inverse(a)  # old symbol s = sum_j c[s][j] * new_j
        out = ExteriorVector.zero(n)
        for m, coef in self.terms.items():
            piece = ExteriorVector.unit(n).scale(coef)
            # wedge right-to-left so the mask's letter order is preserved
            for bit in reversed(range(2 * n)):
                if m >> bit & 1:
                    piece = _wedge_front(piece, c[bit])
                    if piece.is_zero():
                        break
            out = out + piece
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            names = []
            for bit in range(2 * self.n):
                if m >> bit & 1:
                    names.append(
                        f"e{bit+1}" if bit < self.n else f"f{bit-self.n+1}"
                    )
            mono = "^".join(names) if names else "1"
            parts.append(f"{self.terms[m]}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


def _wedge_front(ext: ExteriorVector, coords: list[Fraction]) -> ExteriorVector:
    """Wedge a coordinate vector (over ext's symbol space) on the left."""
    out = ExteriorVector.zero(ext.n)
    for bit, c in enumerate(coords):
        if not c:
            continue
        for m, v in ext.terms.items():
            if m >> bit & 1:
                continue
            sign = -1 if _popcount_below(m, bit) % 2 else 1
            key = m | (1 << bit)
            nv = out.terms.get(key, Fraction(0)) + sign * c * v
            if nv:
                out.terms[key] = nv
            else:
                out.terms.pop(key, None)
    return out


def wedge_of_vectors(n: int, vectors: list[VectorInV]) -> ExteriorVector:
    """v_1 wedge ... wedge v_k as an ExteriorVector."""
    out = ExteriorVector.unit(n)
    for v in reversed(vectors):
        out = _wedge_front(out, v.coords())
        if out.is_zero():
            break
    return out


def act_symbol(sym: Symbol, omega: ExteriorVector) -> ExteriorVector:
    """Module action of a basis vector: iota(v) + o(v) on the full algebra."""
    return omega.inner_symbol(sym) + omega.outer_symbol(sym)


def act_on_exterior(a: CliffordElement, omega: ExteriorVector) -> ExteriorVector:
    """The Clifford module action on the exterior algebra of the whole space."""
    if a.n != omega.n:
        raise LevelMismatchError("levels differ")
    out = ExteriorVector.zero(a.n)
    for mono, c in a.terms.items():
        cur = omega
        for sym in reversed(monomial_word(mono)):
            cur = act_symbol(sym, cur)
            if cur.is_zero():
                break
        out = out + cur.scale(c)
    return out


def act_vector(v: VectorInV, omega: ExteriorVector) -> ExteriorVector:
    return act_on_exterior(v.as_clifford(), omega)


def so_to_clifford(x) -> CliffordElement:
    """Image of a two-form under the quarter-commutator embedding.

    Accepts any object with fields n, ee, ff, ef (sparse two-form blocks);
    each basis two-form u^v maps to (uv - vu)/4.
    """
    n = x.n
    out = CliffordElement.zero(n)
    quarter = Fraction(1, 4)

    def add(u: Symbol, v: Symbol, c: Fraction) -> None:
        nonlocal out
        piece = normal_form([u, v], n) - normal_form([v, u], n)
        out = out + piece.scale(quarter * c)

    for (i, j), c in x.ee.items():
        add(i, j, c)
    for (i, j), c in x.ff.items():
        add(-i, -j, c)
    for (i, j), c in x.ef.items():
        add(i, -j, c)
    return out
