"""The gluing isomorphism between Frobenius twists, and module transport.

For two lifts g1, g2 that agree mod p, the comparison of the twisted tilde
modules sends the class of a basis vector e_k at level i to

    sum_I [ prod (nabla(delta)-shifts) e_k ]_{max(a, i-|I|)}
              (x)  (g1(T)/g2(T) - 1)^I / (I! * p^{min(i-a, |I|)})

summed over shells |I| = 0, 1, ... until every later shell provably
vanishes mod p^n.  The same formula, applied to a pair of composable
unit-monomial maps agreeing mod p, yields the comparison needed to pull a
module back along a ring map; transport composes a module's Frobenius with
the gluing matrix.  All divided coefficients go through the checked
exact-division layer, so the integrality claims are verified at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ffmodule import (
    ElementNotInFilError,
    InvariantViolationError,
    LogFFModule,
    _reduce_entry,
    check_flat,
    check_griffiths,
    divided_connection,
    falling_connection_op,
)
from .logring import (
    DividedCoeffs,
    FrobLift,
    RingElem,
    RingMap,
    SpecMismatchError,
    multi_indices,
    work_precision,
)
from .matrices import Matrix


@dataclass
class GlueMap:
    """Matrix of the comparison Vtilde (x)_{g1} R' -> Vtilde (x)_{g2} R'."""

    source_map: RingMap
    target_map: RingMap
    matrix: Matrix
    shells_used: int
    design_bound: int


def _as_map(g) -> RingMap:
    return g.as_ring_map() if isinstance(g, FrobLift) else g


def _require_valid_for_glue(module: LogFFModule):
    if not check_flat(module).ok:
        raise InvariantViolationError("flatness", "gluing needs an integrable connection")
    if not check_griffiths(module).ok:
        raise InvariantViolationError("griffiths", "gluing needs Griffiths transversality")


def _glue_columns(module: LogFFModule, g1: RingMap, g2: RingMap,
                  vectors: list[tuple[int, list[RingElem]]],
                  mode: str = "ratio"):
    """Shared engine: apply the gluing formula to (level, vector) pairs.

    Each vector must lie in Fil^level; the result is the list of tilde
    coordinate vectors over the target ring at the module's precision, plus
    the coefficient engine used.  The maps may carry extra precision
    (composites must; see work_precision).
    """
    a, b = module.hodge_range
    base_n = module.spec.n
    if g1.source.with_precision(base_n) != module.spec:
        raise SpecMismatchError("maps must start at the module's ring")
    coeffs = DividedCoeffs(g1, g2, width=b - a, mode=mode, base_n=base_n)
    g2_base = g2.with_precision(base_n)
    target = coeffs.base_spec
    levels = module.levels
    columns = []
    for i, vec in vectors:
        out = [RingElem.zero(target) for _ in range(module.rank)]
        for c in range(coeffs.stop):
            p_exp = min(i - a, c)
            lvl = max(a, i - c)
            for index in multi_indices(module.spec.d, c):
                w = falling_connection_op(list(module.connection), vec, index)
                if all(x.is_zero() for x in w):
                    continue
                coeff = coeffs.coeff(index, p_exp)
                if coeff.is_zero():
                    continue
                for m, wm in enumerate(w):
                    if wm.is_zero():
                        continue
                    if levels[m] < lvl:
                        if not _reduce_entry(wm, module.basis[m].torsion).is_zero():
                            raise ElementNotInFilError(
                                f"operator output leaves Fil^{lvl} on row {m}")
                        continue
                    factor = module.spec.p ** (levels[m] - lvl)
                    out[m] = out[m] + g2_base.apply(wm).scale(factor) * coeff
        columns.append(out)
    return columns, coeffs


def glue_map(module: LogFFModule, g1, g2) -> GlueMap:
    """The gluing matrix between the g1- and g2-twists of the tilde module.

    g1 and g2 may be Frobenius lifts or, more generally, unit-monomial ring
    maps out of the module's ring that agree mod p (LiftMismatchError if
    not).  Column k holds the image of etilde_k (x) 1.
    """
    _require_valid_for_glue(module)
    m1, m2 = _as_map(g1), _as_map(g2)
    vectors = [(module.levels[k], module.basis_vector(k)) for k in range(module.rank)]
    columns, coeffs = _glue_columns(module, m1, m2, vectors)
    rows = [[columns[k][m] for k in range(module.rank)] for m in range(module.rank)]
    return GlueMap(m1, m2, Matrix(coeffs.base_spec, rows), coeffs.stop, coeffs.design_bound)


def check_glue_identity(module: LogFFModule, lift) -> bool:
    """alpha computed against a single lift is the identity matrix."""
    g = glue_map(module, lift, lift)
    ident = Matrix.identity(g.matrix.spec, module.rank)
    return g.matrix.eq_mod_rows(ident, module.torsions)


def check_glue_cocycle(module: LogFFModule, l1, l2, l3) -> bool:
    """Transitivity G_{13} = G_{23} G_{12} of the gluing matrices."""
    g12 = glue_map(module, l1, l2).matrix
    g23 = glue_map(module, l2, l3).matrix
    g13 = glue_map(module, l1, l3).matrix
    return g13.eq_mod_rows(g23 * g12, module.torsions)


def check_glue_linearity(module: LogFFModule, l1, l2, r: RingElem,
                         glue: GlueMap | None = None) -> bool:
    """Well-definedness on the tensor relation (r m) (x) 1 = m (x) g1(r).

    The gluing formula applied directly to the filtered element r*e_k must
    equal the matrix column for e_k times g1(r).  A precomputed GlueMap for
    the same pair may be passed to amortize batches over many r.
    """
    _require_valid_for_glue(module)
    m1, m2 = _as_map(l1), _as_map(l2)
    g = glue if glue is not None else glue_map(module, m1, m2)
    r_image = m1.with_precision(module.spec.n).apply(r)
    vectors = []
    for k in range(module.rank):
        vec = module.basis_vector(k)
        vectors.append((module.levels[k], [x * r for x in vec]))
    columns, _ = _glue_columns(module, m1, m2, vectors)
    for k in range(module.rank):
        expected = [g.matrix.entry(m, k) * r_image for m in range(module.rank)]
        for m in range(module.rank):
            tor = module.basis[m].torsion
            if not columns[k][m].eq_mod(expected[m], tor):
                return False
    return True


def check_glue_horizontal(module: LogFFModule, l1: FrobLift, l2: FrobLift) -> bool:
    """Parallelism: delta_j(G) + A'_j(l2) G = G A'_j(l1) for every slot."""
    g = glue_map(module, l1, l2)
    div1 = divided_connection(module, l1)
    div2 = divided_connection(module, l2)
    G = g.matrix
    for j in range(module.spec.d):
        lhs = G.log_derive(j + 1) + div2[j] * G
        rhs = G * div1[j]
        if not lhs.eq_mod_rows(rhs, module.torsions):
            return False
    return True


def _ordinary_connection_op(module: LogFFModule, vec: list[RingElem],
                            index: tuple[int, ...]) -> list[RingElem]:
    # iterated nabla(d/dT_j) = entrywise d/dT_j plus A_j T_j^{-1}
    spec = module.spec
    out = list(vec)
    for j0, ij in enumerate(index):
        tinv = RingElem.variable(spec, j0 + 1, -1)
        B = module.connection[j0].scale(tinv)
        for _ in range(ij):
            applied = B.mul_vec(out)
            out = [x + v.d_dT(j0 + 1) for x, v in zip(applied, out)]
    return out


def check_nonlog_agreement(module: LogFFModule, l1: FrobLift, l2: FrobLift) -> bool:
    """On a chart without divisor (s = 0) the gluing matrix agrees with the
    classical one built from ordinary derivations and (Phi(T) - Psi(T))^I."""
    if module.spec.s != 0:
        raise ValueError("non-log comparison needs all slots Laurent (s = 0)")
    _require_valid_for_glue(module)
    G = glue_map(module, l1, l2).matrix
    m1, m2 = _as_map(l1), _as_map(l2)
    a, b = module.hodge_range
    base_n = module.spec.n
    coeffs = DividedCoeffs(m1, m2, width=b - a, mode="difference", base_n=base_n)
    g2_base = m2.with_precision(base_n)
    levels = module.levels
    target = coeffs.base_spec
    rows = [[RingElem.zero(target) for _ in range(module.rank)] for _ in range(module.rank)]
    for k in range(module.rank):
        i = levels[k]
        vec = module.basis_vector(k)
        for c in range(coeffs.stop):
            p_exp = min(i - a, c)
            lvl = max(a, i - c)
            for index in multi_indices(module.spec.d, c):
                w = _ordinary_connection_op(module, vec, index)
                if all(x.is_zero() for x in w):
                    continue
                coeff = coeffs.coeff(index, p_exp)
                if coeff.is_zero():
                    continue
                for m, wm in enumerate(w):
                    if wm.is_zero():
                        continue
                    if levels[m] < lvl:
                        if not _reduce_entry(wm, module.basis[m].torsion).is_zero():
                            raise ElementNotInFilError(
                                f"operator output leaves Fil^{lvl} on row {m}")
                        continue
                    factor = module.spec.p ** (levels[m] - lvl)
                    rows[m][k] = rows[m][k] + g2_base.apply(wm).scale(factor) * coeff
    other = Matrix(target, rows)
    return G.eq_mod_rows(other, module.torsions)


def transport(module: LogFFModule, new_lift: FrobLift) -> LogFFModule:
    """(V, nabla, Fil, phi) -> (V, nabla, Fil, phi o alpha) over the new lift."""
    g = glue_map(module, new_lift, module.lift)
    return module.with_frobenius(module.frobenius * g.matrix, new_lift)


def pullback_ff(module: LogFFModule, f: RingMap, target_lift: FrobLift) -> LogFFModule:
    """Pullback of a module along a unit-monomial map, with Frobenius comparison.

    The connection is base-changed in the dlog frame (monomial exponents
    rescale the frame, unit parts contribute du/(1+pu) corrections), and the
    new Frobenius is f(F) composed with the gluing matrix between the two
    composite lifts Phi' o f and f o Phi, which agree mod p.

    The composites are formed at the divided-coefficient working precision:
    a base-precision composite would underdetermine the digits the division
    by p^{min(i-a,|I|)} consumes.  f itself may be given at any precision at
    or above the module's; its canonical lift is the map pulled back along.
    """
    base_n = module.spec.n
    if f.source.with_precision(base_n) != module.spec:
        raise SpecMismatchError("map must start at the module's ring")
    if target_lift.spec.with_precision(base_n) != f.target.with_precision(base_n):
        raise SpecMismatchError("target lift over the wrong spec")
    a, b = module.hodge_range
    work_n = work_precision(module.spec.p, base_n, b - a)
    f_work = f.with_precision(work_n)
    g1 = f_work.then(target_lift.with_precision(work_n).as_ring_map())   # Phi' o f
    g2 = module.lift.with_precision(work_n).as_ring_map().then(f_work)  # f o Phi
    comparison = glue_map(module, g1, g2).matrix

    f_base = f.with_precision(base_n)
    target = f_base.target
    p = target.p
    # frame transform: f^*(dlog T_j) = sum_l J[j][l] dlog T'_l
    one = RingElem.one(target)
    J = []
    for c, exps, h in f_base.images:
        inv = (one + h.scale(p)).invert_unit()
        row = []
        for l in range(target.d):
            term = RingElem.const(target, exps[l])
            row.append(term + h.log_derive(l + 1).scale(p) * inv)
        J.append(row)
    new_connection = []
    for l in range(target.d):
        acc = Matrix.zeros(target, module.rank, module.rank)
        for j in range(module.spec.d):
            mapped = module.connection[j].map_entries(f_base.apply)
            acc = acc + mapped.scale(J[j][l])
        new_connection.append(acc)
    new_frobenius = module.frobenius.map_entries(f_base.apply) * comparison
    lift_base = FrobLift(target, [u.with_spec(target) for u in
                                  target_lift.with_precision(base_n).u])
    return LogFFModule(target, module.hodge_range, list(module.basis), new_connection,
                       lift_base, new_frobenius, wide_range=module.wide_range)


def modules_equal(m1: LogFFModule, m2: LogFFModule) -> bool:
    """Entrywise equality of two modules' data modulo the row torsions."""
    if (m1.spec, m1.hodge_range, m1.basis) != (m2.spec, m2.hodge_range, m2.basis):
        return False
    mods = m1.torsions
    for a, b in zip(m1.connection, m2.connection):
        if not a.eq_mod_rows(b, mods):
            return False
    return m1.frobenius.eq_mod_rows(m2.frobenius, mods)


def check_pullback_functorial(module: LogFFModule, f: RingMap, g: RingMap,
                              mid_lift: FrobLift, final_lift: FrobLift) -> bool:
    """Pulling back along f then g agrees with pulling back along g o f.

    Both paths must see the same honest maps, so f and g are lifted to the
    working precision once and the composite is formed there.
    """
    a, b = module.hodge_range
    work_n = work_precision(module.spec.p, module.spec.n, b - a)
    f_w = f.with_precision(work_n)
    g_w = g.with_precision(work_n)
    two_step = pullback_ff(pullback_ff(module, f_w, mid_lift), g_w, final_lift)
    one_step = pullback_ff(module, f_w.then(g_w), final_lift)
    return modules_equal(two_step, one_step)
