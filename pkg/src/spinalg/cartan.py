"""The quadratic map from the spin space to the middle exterior power,
exterior contraction/multiplication, the essentially-commuting diagrams
relating the two, sampled injectivity, and the level-lowering factorization
of contracted group actions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import clifford_core as cc
from . import grassmann_cone as gc
from . import linalg
from . import spin_rep as sr
from . import transfer_maps as tm
from .errors import (
    GenericityError,
    IndexRangeError,
    NotIsotropicError,
    SpinalgError,
    StructureError,
)


def _parity_sign(n: int, parity: str) -> int:
    """Rescaling sign of the contraction diagram: (-1)^(n-1) on the even
    part, (-1)^n on the odd part.  Kept as a seam so a corrupted build can
    be simulated in tests."""
    return (-1) ** (n - 1) if parity == "even" else (-1) ** n


@dataclass(frozen=True)
class CartanContext:
    """Sign bookkeeping for the essentially-commuting diagrams at level n."""

    n: int
    sign_even: int
    sign_odd: int

    @staticmethod
    def for_level(n: int) -> "CartanContext":
        return CartanContext(n, _parity_sign(n, "even"), _parity_sign(n, "odd"))


def nu2(x: sr.SpinVector) -> cc.ExteriorVector:
    """Quadratic map: degree-n component of (x a*) acting on 1, where a is
    the wedge part of x.  Homogeneous of degree 2: nu2(t x) = t^2 nu2(x)."""
    n = x.n
    a = cc.CliffordElement(n, {(m, 0): c for m, c in x.terms.items()})
    seed = cc.act_on_exterior(cc.star(a), cc.ExteriorVector.unit(n))
    full = cc.act_on_exterior(sr.to_left_ideal(x), seed)
    return full.degree_component(n)


def _include_exterior(omega: cc.ExteriorVector, target: int) -> cc.ExteriorVector:
    """Reinterpret level-m exterior coordinates inside level target >= m."""
    m = omega.n
    if target < m:
        raise IndexRangeError("cannot include into a lower level")
    out: dict[int, Fraction] = {}
    emask_bits = (1 << m) - 1
    for mask, c in omega.terms.items():
        e_part = mask & emask_bits
        f_part = mask >> m
        out[e_part | (f_part << target)] = c
    return cc.ExteriorVector(target, out)


def _restrict_exterior(omega: cc.ExteriorVector, target: int) -> cc.ExteriorVector:
    """Drop to a lower level; errors if any discarded symbol is present."""
    m = omega.n
    out: dict[int, Fraction] = {}
    for mask, c in omega.terms.items():
        e_part = mask & ((1 << m) - 1)
        f_part = mask >> m
        if e_part >> target or f_part >> target:
            raise StructureError("element does not lie in the lower-level block")
        out[e_part | (f_part << target)] = c
    return cc.ExteriorVector(target, out)


def contract_ce(
    omega: cc.ExteriorVector,
    e: cc.VectorInV,
    h: cc.VectorInV | None = None,
) -> cc.ExteriorVector:
    """Contraction with isotropic e followed by reduction modulo e.

    With a hyperbolic partner h (in the fixed F) the result is expressed in
    the deterministic model basis of the orthogonal complement of (e, h);
    for the coordinate pair e = e_n, h = f_n this is the identity relabeling.
    """
    n = omega.n
    cc.require_isotropic(e)
    std_e = cc.VectorInV.basis(n, n)
    std_h = cc.VectorInV.basis(n, -n)
    contracted = omega.inner_vector(e)
    if e == std_e and (h is None or h == std_h):
        top_e = 1 << (n - 1)
        top_f = 1 << (2 * n - 1)
        out: dict[int, Fraction] = {}
        for mask, c in contracted.terms.items():
            if mask & top_e:
                continue  # killed modulo e
            if mask & top_f:
                raise StructureError("contraction image leaked the partner symbol")
            out[mask] = c
        reduced = cc.ExteriorVector(n, out)
        return _drop_top_symbols(reduced)
    basis = gc.hyperbolic_basis_through(e, h)
    primed = contracted.change_basis(basis.rows())
    top_e = 1 << (n - 1)
    top_f = 1 << (2 * n - 1)
    out = {}
    for mask, c in primed.terms.items():
        if mask & top_e:
            continue
        if mask & top_f:
            raise StructureError("contraction image leaked the partner symbol")
        out[mask] = c
    return _drop_top_symbols(cc.ExteriorVector(n, out))


def _drop_top_symbols(omega: cc.ExteriorVector) -> cc.ExteriorVector:
    """Remask a level-n element not involving e_n, f_n down to level n-1."""
    n = omega.n
    out: dict[int, Fraction] = {}
    for mask, c in omega.terms.items():
        e_part = mask & ((1 << n) - 1)
        f_part = mask >> n
        if e_part >> (n - 1) or f_part >> (n - 1):
            raise StructureError("top symbols present")
        out[e_part | (f_part << (n - 1))] = c
    return cc.ExteriorVector(n - 1, out)


def mult_mh(
    omega: cc.ExteriorVector,
    h: cc.VectorInV,
    e: cc.VectorInV | None = None,
) -> cc.ExteriorVector:
    """Outer multiplication by the hyperbolic partner h.

    The source lives at level n-1 (the model of the quotient by (e, h)); for
    the coordinate pair the inclusion is index-preserving.  A non-coordinate
    h needs its e supplied so the model basis is determined.
    """
    n = omega.n + 1
    cc.require_isotropic(h, "multiplication vector")
    if h.n != n:
        raise IndexRangeError("partner must live at the target level")
    if e is None:
        if h != cc.VectorInV.basis(n, -n):
            raise SpinalgError("non-coordinate partner needs its isotropic e")
        included = _include_exterior(omega, n)
        return _front_outer(included, h)
    if cc.pairing(e, h) != 1:
        raise NotIsotropicError("(e|h) must equal 1")
    basis = gc.hyperbolic_basis_through(e, h)
    out = cc.ExteriorVector.zero(n)
    for mask, c in omega.terms.items():
        letters = []
        for bit in range(2 * (n - 1)):
            if mask >> bit & 1:
                if bit < n - 1:
                    letters.append(basis.new_e[bit])
                else:
                    letters.append(basis.new_f[bit - (n - 1)])
        out = out + cc.wedge_of_vectors(n, [h] + letters).scale(c)
    return out


def _front_outer(omega: cc.ExteriorVector, v: cc.VectorInV) -> cc.ExteriorVector:
    """v wedge omega (wedge on the left)."""
    return cc._wedge_front(omega, v.coords())


def diagram_pi_residual(x: sr.SpinVector) -> cc.ExteriorVector:
    """nu2(pi(x)) - sign * c_e(nu2(x)) at the top coordinate pair; zero for
    parity-pure x, with sign (-1)^(n-1) even and (-1)^n odd."""
    parity = x.parity()
    if parity == "mixed":
        raise SpinalgError("diagram residuals need parity-pure input")
    n = x.n
    sign = _parity_sign(n, parity)
    lhs = nu2(tm.pi_last(x))
    rhs = contract_ce(nu2(x), cc.VectorInV.basis(n, n), cc.VectorInV.basis(n, -n))
    return lhs - rhs.scale(sign)


def diagram_tau_residual(x: sr.SpinVector) -> cc.ExteriorVector:
    """nu2(tau(x)) - sign * f_n ^ nu2(x); zero for parity-pure x.

    The sign is (-1)^(n-1) on the even part and (-1)^n on the odd part with
    n the target level, the same convention as the contraction diagram; the
    odd part differs from the even one by exactly the stated minus sign.
    """
    parity = x.parity()
    if parity == "mixed":
        raise SpinalgError("diagram residuals need parity-pure input")
    n = x.n + 1
    sign = _parity_sign(n, parity)
    lhs = nu2(tm.tau_last(x))
    rhs = mult_mh(nu2(x), cc.VectorInV.basis(n, -n))
    return lhs - rhs.scale(sign)


def wedge_annihilator(omega: cc.ExteriorVector) -> list[list[Fraction]]:
    """Canonical basis of {v in V : v wedge omega = 0}."""
    if omega.is_zero():
        raise SpinalgError("annihilator of zero is everything")
    n = omega.n
    cols = []
    for bit in range(2 * n):
        sym = bit + 1 if bit < n else -(bit - n + 1)
        cols.append(omega.outer_symbol(sym))
    masks = sorted(set().union(*[set(c.terms) for c in cols]) or {0})
    m = [[col.terms.get(mask, Fraction(0)) for col in cols] for mask in masks]
    return linalg.nullspace(m)


def is_decomposable(omega: cc.ExteriorVector) -> bool:
    """True when a homogeneous degree-d element is a pure wedge."""
    degs = omega.degrees()
    if len(degs) != 1:
        return False
    (d,) = degs
    return len(wedge_annihilator(omega)) == d


@dataclass(frozen=True)
class InjectivityVerdict:
    ok: bool
    reason: str


def _proportional(a: dict, b: dict) -> bool:
    if not a or not b:
        return not a and not b
    if set(a) != set(b):
        return False
    k = next(iter(a))
    ratio = a[k] / b[k]
    return all(a[m] == ratio * b[m] for m in a)


def injectivity_witness(x: sr.SpinVector, y: sr.SpinVector) -> InjectivityVerdict:
    """Checks the morphism property (nonzero image) and projective
    injectivity (proportional images force proportional inputs)."""
    if x.is_zero() or y.is_zero():
        raise SpinalgError("injectivity check needs nonzero vectors")
    ix = nu2(x)
    iy = nu2(y)
    if ix.is_zero() or iy.is_zero():
        return InjectivityVerdict(False, "image vanished on a nonzero vector")
    if _proportional(ix.terms, iy.terms) and not _proportional(x.terms, y.terms):
        return InjectivityVerdict(
            False, "non-proportional vectors with proportional images"
        )
    return InjectivityVerdict(True, "")


# -- exterior-side helpers for the factorization audit ------------------------


def apply_so_to_exterior(omega: cc.ExteriorVector, m: list[list[Fraction]]) -> cc.ExteriorVector:
    """Induced action of an orthogonal matrix on the exterior algebra."""
    n = omega.n
    out = cc.ExteriorVector.zero(n)
    for mask, c in omega.terms.items():
        vectors = []
        for bit in range(2 * n):
            if mask >> bit & 1:
                col = [m[r][bit] for r in range(2 * n)]
                vectors.append(cc.VectorInV.from_coords(n, col))
        out = out + cc.wedge_of_vectors(n, vectors).scale(c)
    return out


def contract_top_e_block(omega: cc.ExteriorVector, target: int) -> cc.ExteriorVector:
    """c_{e_{target+1}} o ... o c_{e_n} in coordinates, landing at level target."""
    cur = omega
    while cur.n > target:
        cur = contract_ce(cur, cc.VectorInV.basis(cur.n, cur.n), cc.VectorInV.basis(cur.n, -cur.n))
    return cur


def mult_top_f_block(omega: cc.ExteriorVector, target: int) -> cc.ExteriorVector:
    """m_{f_target} o ... o m_{f_{n+1}} in coordinates, raising the level."""
    cur = omega
    while cur.n < target:
        cur = mult_mh(cur, cc.VectorInV.basis(cur.n + 1, -(cur.n + 1)))
    return cur


# -- the level-lowering factorization -----------------------------------------


@dataclass(frozen=True)
class LowerFactorization:
    """Certified factorization pi o g o tau = scalar * (g'' o pi o g')."""

    q: int
    n: int
    n0: int
    g_prime: sr.GroupElement
    g_second_so: tuple  # 2 n0 x 2 n0 matrix rows
    g_second_even: tuple  # matrix over the even-mask basis of level n0
    scalar: Fraction
    even_masks_n: tuple
    even_masks_n0: tuple
    det_second: Fraction
    exterior_ratio: Fraction | None


def _even_masks(n: int) -> list[int]:
    return [m for m in range(1 << n) if bin(m).count("1") % 2 == 0]


def _pairing_matrix(n: int) -> list[list[Fraction]]:
    m = linalg.zeros(2 * n, 2 * n)
    for i in range(n):
        m[i][n + i] = Fraction(1)
        m[n + i][i] = Fraction(1)
    return m


def lower_factorization(
    q: int,
    n: int,
    n0: int,
    g: sr.GroupElement,
    seed: int = 0,
    exterior_audit: bool = False,
) -> LowerFactorization:
    """Factor the contracted action of g through levels n and n0.

    Follows the constructive proof: E'' is the preimage of the top
    coordinate block, its projected trace in the middle level is moved onto
    the coordinate block by an explicit word g', and the residual factor at
    the bottom level is recovered exactly by solving the operator identity
    on the full even basis.  Genericity failures raise GenericityError with
    a resample hint; they are never silently passed.
    """
    if not q >= n >= n0:
        raise IndexRangeError("need q >= n >= n0")
    if n0 < 4:
        raise IndexRangeError("bottom level below 4 is unsupported")
    if g.n != q:
        raise SpinalgError("group element must live at the top level")

    mg = g.so_matrix()
    mg_inv = g.inverse().so_matrix()
    # E'' = g^{-1} (span of top e-block); rows of E'' in level-q coords
    epp_rows = []
    for i in range(n0, q):
        col = [mg_inv[r][i] for r in range(2 * q)]
        epp_rows.append(col)
    # V_n + F has zero e-coords above n
    vnf_constraints = []
    for i in range(n, q):
        row = [Fraction(0)] * (2 * q)
        row[i] = Fraction(1)
        vnf_constraints.append(row)
    pair_rows = [
        list(w.f) + list(w.e)
        for w in (cc.VectorInV.from_coords(q, r) for r in epp_rows)
    ]
    # W1 = E'' ∩ (V_n ⊕ F): combinations of E''-rows with zero top e-coords
    w1 = []
    if epp_rows:
        if q > n:
            constraint_matrix = [[row[i] for i in range(n, q)] for row in epp_rows]
            kernel = linalg.nullspace(linalg.transpose(constraint_matrix))
        else:
            kernel = linalg.identity(len(epp_rows))
        for comb in kernel:
            vec = [
                sum((comb[a] * epp_rows[a][k] for a in range(len(epp_rows))), Fraction(0))
                for k in range(2 * q)
            ]
            w1.append(vec)
        w1 = linalg.row_space(w1) if w1 else []
    if len(w1) != n - n0:
        raise GenericityError(
            f"dim(E'' ∩ (V_n+F)) = {len(w1)} != n - n0 = {n - n0}",
            suggested_seed=seed + 1,
        )
    # (E'')^perp ∩ F must be zero
    f_rows = []
    for j in range(n, q):
        row = [Fraction(0)] * (2 * q)
        row[q + j] = Fraction(1)
        f_rows.append(row)
    if f_rows and pair_rows:
        perp = linalg.nullspace(pair_rows)
        meet = linalg.intersect_row_spaces(perp, f_rows)
        if meet:
            raise GenericityError(
                "(E'')^perp meets the auxiliary F block", suggested_seed=seed + 1
            )
    # Etilde: project W1 to V_n along the auxiliary F block
    etilde_rows = []
    for row in w1:
        proj = row[:n] + [Fraction(0)] * (q - n) + row[q : q + n] + [Fraction(0)] * (q - n)
        etilde_rows.append(proj)
    etilde_rows = linalg.row_space(etilde_rows) if etilde_rows else []
    if len(etilde_rows) != n - n0:
        raise GenericityError(
            "projected trace lost dimension", suggested_seed=seed + 1
        )
    # restrict to level-n coordinates
    etilde_n = [row[:n] + row[q : q + n] for row in etilde_rows]
    if n > n0:
        etilde_sub = gc.check_isotropic(etilde_n, n)
        g_prime = gc.element_moving_to_coordinate_top(etilde_sub)
    else:
        g_prime = sr.GroupElement.identity(n)

    # spin-side operators on the even basis
    masks_n = _even_masks(n)
    masks_n0 = _even_masks(n0)
    idx_n0 = {m: i for i, m in enumerate(masks_n0)}

    def column_through(gE: sr.GroupElement, top: int, mask: int) -> list[Fraction]:
        v = sr.SpinVector.basis(n, mask)
        v = tm.tau_tower(v, top)
        v = gE.apply(v)
        v = tm.pi_tower(v, n0)
        col = [Fraction(0)] * len(masks_n0)
        for m, c in v.terms.items():
            col[idx_n0[m]] = c
        return col

    a_mat = linalg.transpose([column_through(g, q, m) for m in masks_n])
    b_mat = linalg.transpose([column_through(g_prime, n, m) for m in masks_n])
    ut = linalg.solve_matrix(linalg.transpose(b_mat), linalg.transpose(a_mat))
    if ut is None:
        raise GenericityError(
            "operator identity is inconsistent for this g", suggested_seed=seed + 1
        )
    u = linalg.transpose(ut)
    if linalg.matmul(u, b_mat) != a_mat:
        raise StructureError("solved factor does not reproduce the identity")

    # the proof's bottom factor as an orthogonal matrix
    m_second = _second_factor_matrix(q, n, n0, mg, mg_inv, g_prime, w1, etilde_n)
    jn0 = _pairing_matrix(n0)
    if linalg.matmul(linalg.matmul(linalg.transpose(m_second), jn0), m_second) != jn0:
        raise StructureError("bottom factor does not preserve the form")
    det_second = linalg.det(m_second)
    _verify_intertwining(n0, u, m_second, masks_n0)

    scalar = next(
        (u[r][c] for r in range(len(u)) for c in range(len(u[0])) if u[r][c] != 0),
        Fraction(1),
    )
    g_second_even = [[x / scalar for x in row] for row in u]

    ext_ratio = None
    if exterior_audit:
        ext_ratio = _exterior_audit(q, n, n0, mg, g_prime, m_second, seed)

    return LowerFactorization(
        q=q,
        n=n,
        n0=n0,
        g_prime=g_prime,
        g_second_so=tuple(tuple(r) for r in m_second),
        g_second_even=tuple(tuple(r) for r in g_second_even),
        scalar=scalar,
        even_masks_n=tuple(masks_n),
        even_masks_n0=tuple(masks_n0),
        det_second=det_second,
        exterior_ratio=ext_ratio,
    )


def _second_factor_matrix(q, n, n0, mg, mg_inv, g_prime, w1, etilde_n):
    """Assemble the bottom isometry column by column through the quotients."""
    # D = (V_n ⊕ F) ∩ (E'')^perp inside level q
    epp_rows = []
    for i in range(n0, q):
        col = [mg_inv[r][i] for r in range(2 * q)]
        epp_rows.append(col)
    constraints = []
    for i in range(n, q):
        row = [Fraction(0)] * (2 * q)
        row[i] = Fraction(1)
        constraints.append(row)
    for r in epp_rows:
        w = cc.VectorInV.from_coords(q, r)
        constraints.append(list(w.f) + list(w.e))
    d_rows = linalg.nullspace(constraints) if constraints else linalg.identity(2 * q)
    mgp_inv = g_prime.inverse().so_matrix()
    cols = []
    for bit in range(2 * n0):
        w_n = [Fraction(0)] * (2 * n)
        w_n[bit if bit < n0 else n + (bit - n0)] = Fraction(1)
        x = linalg.matvec(mgp_inv, w_n)
        # solve proj(d) - x in span(Etilde): unknowns lambda (over D), mu (over Etilde)
        nd = len(d_rows)
        ne = len(etilde_n)
        rows = []
        rhs = []
        for k in range(2 * n):
            qk = k if k < n else q + (k - n)  # level-q coordinate of the projection
            row = [d_rows[a][qk] for a in range(nd)]
            row += [-etilde_n[b][k] for b in range(ne)]
            rows.append(row)
            rhs.append(x[k])
        # the projection drops e- and f-coords in (n, q]; those of d are free:
        sol = linalg.solve(rows, rhs)
        if sol is None:
            raise StructureError("quotient transport has no solution")
        d = [
            sum((sol[a] * d_rows[a][k] for a in range(nd)), Fraction(0))
            for k in range(2 * q)
        ]
        y = linalg.matvec(mg, d)
        for i in range(n0, q):
            if y[q + i] != 0:
                raise StructureError("transported vector left the top-block perp")
        cols.append([y[i] for i in range(n0)] + [y[q + i] for i in range(n0)])
    return linalg.transpose(cols)


def _verify_intertwining(n0, u, m_second, masks_n0):
    """u must intertwine the spin action with conjugation by the bottom factor."""
    m_inv = linalg.inverse(m_second)
    idx = {m: i for i, m in enumerate(masks_n0)}

    def even_block(x: sr.SoElement):
        cols = []
        for mask in masks_n0:
            v = sr.rho_so(x, sr.SpinVector.basis(n0, mask))
            col = [Fraction(0)] * len(masks_n0)
            for m, c in v.terms.items():
                col[idx[m]] = c
            cols.append(col)
        return linalg.transpose(cols)

    basis = []
    for i in range(1, n0 + 1):
        for j in range(i + 1, n0 + 1):
            basis.append(sr.SoElement.basis_ee(n0, i, j))
            basis.append(sr.SoElement.basis_ff(n0, i, j))
    for i in range(1, n0 + 1):
        for j in range(1, n0 + 1):
            basis.append(sr.SoElement.basis_ef(n0, i, j))
    for x in basis:
        ad = linalg.matmul(linalg.matmul(m_second, x.matrix()), m_inv)
        y = sr.SoElement.from_matrix(n0, ad)
        lhs = linalg.matmul(u, even_block(x))
        rhs = linalg.matmul(even_block(y), u)
        if lhs != rhs:
            raise StructureError("bottom factor fails the conjugation audit")


def _exterior_audit(q, n, n0, mg, g_prime, m_second, seed=0) -> Fraction:
    """Sampled check of the exterior-power identity; returns the ratio."""
    import random as _random

    mgp = g_prime.so_matrix()
    ratio = None
    rng = _random.Random(f"extaudit:{q}:{n}:{n0}:{seed}")
    samples = [cc.ExteriorVector(n, {((1 << n) - 1): Fraction(1)})]
    for _ in range(3):
        vecs = [
            cc.VectorInV.from_coords(
                n, [Fraction(rng.randint(-2, 2)) for _ in range(2 * n)]
            )
            for _ in range(n)
        ]
        samples.append(cc.wedge_of_vectors(n, vecs))
    for omega in samples:
        lifted = mult_top_f_block(omega, q)
        lhs = contract_top_e_block(apply_so_to_exterior(lifted, mg), n0)
        mid = contract_top_e_block(apply_so_to_exterior(omega, mgp), n0)
        rhs = apply_so_to_exterior(mid, [list(r) for r in m_second])
        if lhs.is_zero() and rhs.is_zero():
            continue
        if lhs.is_zero() or rhs.is_zero():
            raise StructureError("exterior audit: one side vanished")
        if not _proportional(lhs.terms, rhs.terms):
            raise StructureError("exterior audit: sides are not proportional")
        k = next(iter(lhs.terms))
        r = lhs.terms[k] / rhs.terms[k]
        if ratio is None:
            ratio = r
        elif ratio != r:
            raise StructureError("exterior audit: ratio is not constant")
    if ratio is None:
        raise StructureError("exterior audit: all samples vanished")
    return ratio


def sample_lower_factorization(
    q: int, n: int, n0: int, seed: int, length: int = 8, max_tries: int = 20,
    exterior_audit: bool = False,
) -> tuple[LowerFactorization, sr.GroupElement, list[str]]:
    """Draw seeded elements until the genericity conditions hold.

    Returns the factorization, the element used, and the recorded failures.
    """
    failures: list[str] = []
    for t in range(max_tries):
        g = sr.random_group_element(q, f"lower:{seed}:{t}", length)
        try:
            res = lower_factorization(q, n, n0, g, seed=seed, exterior_audit=exterior_audit)
            return res, g, failures
        except GenericityError as exc:
            failures.append(str(exc))
    raise GenericityError(
        f"no generic element found in {max_tries} tries", suggested_seed=seed + 1
    )
