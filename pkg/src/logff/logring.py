"""The coordinate ring of a logarithmically small chart mod p^n.

Elements live in R = (Z/p^n)[T_1..T_s][T_{s+1}^{+-1}..T_d^{+-1}]: the first s
slots are polynomial (they cut out the boundary divisor T_1*..*T_s = 0), the
rest are Laurent.  The module provides Frobenius lifts T_j -> w_j*T_j^p with
w_j = 1 + p*u_j, unit-monomial ring maps T_j -> c_j*T^{E_j}*(1 + p*h_j),
logarithmic derivations, falling-factorial differential operators, and the
logarithmic Taylor formula.

Internally the 1-form frame is dlog T_j = dT_j/T_j for every slot, with dual
derivations delta_j = T_j d/dT_j; non-divisor slots are Laurent so this loses
nothing.  Divided coefficients such as (Phi(T)/Psi(T)-1)^I / I! are computed
at a raised working precision and pushed through `exactnum.reduce_mod`, so
every division by p is an exact, checked operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, factorial

from .exactnum import factorial_valp, modinv, reduce_mod


class SpecMismatchError(ValueError):
    """Operands belong to different ring specs."""


class IllegalMapError(ValueError):
    """A ring map violates the unit-monomial invariants."""


class LiftMismatchError(ValueError):
    """Two maps that must agree mod p do not."""


@dataclass(frozen=True)
class RingSpec:
    """Shape of the chart: prime p, precision n, d slots of which the first s are polynomial."""

    p: int
    n: int
    d: int
    s: int

    def __post_init__(self):
        if self.p <= 2 or not _is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.n < 1:
            raise ValueError("precision n must be >= 1")
        if not 0 <= self.s <= self.d:
            raise ValueError("need 0 <= s <= d")

    @property
    def q(self) -> int:
        return self.p ** self.n

    def with_precision(self, n: int) -> "RingSpec":
        return RingSpec(self.p, n, self.d, self.s)

    def localized(self) -> "RingSpec":
        return RingSpec(self.p, self.n, self.d, 0)


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    f = 2
    while f * f <= m:
        if m % f == 0:
            return False
        f += 1
    return True


def falling(x: int, m: int) -> int:
    """Falling factorial x(x-1)...(x-m+1); defined for any integer x."""
    out = 1
    for t in range(m):
        out *= x - t
    return out


class RingElem:
    """Sparse element of the mixed polynomial/Laurent ring mod p^n.

    Stored as a map from exponent vectors (tuples of length d) to canonical
    coefficient representatives in [1, p^n).  Zero coefficients are dropped;
    divisor-slot exponents must be nonnegative.
    """

    __slots__ = ("spec", "terms")

    def __init__(self, spec: RingSpec, terms: dict[tuple[int, ...], int]):
        q = spec.q
        clean: dict[tuple[int, ...], int] = {}
        for exps, c in terms.items():
            c %= q
            if c == 0:
                continue
            if len(exps) != spec.d:
                raise ValueError(f"exponent vector {exps} has wrong length for d={spec.d}")
            for j in range(spec.s):
                if exps[j] < 0:
                    raise ValueError(f"negative exponent on divisor slot {j + 1}: {exps}")
            clean[tuple(exps)] = c
        self.spec = spec
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, spec: RingSpec) -> "RingElem":
        return cls(spec, {})

    @classmethod
    def const(cls, spec: RingSpec, c: int) -> "RingElem":
        return cls(spec, {(0,) * spec.d: c})

    @classmethod
    def one(cls, spec: RingSpec) -> "RingElem":
        return cls.const(spec, 1)

    @classmethod
    def variable(cls, spec: RingSpec, j: int, power: int = 1) -> "RingElem":
        """T_j^power for the 1-based slot index j."""
        if not 1 <= j <= spec.d:
            raise ValueError(f"slot index {j} out of range 1..{spec.d}")
        exps = [0] * spec.d
        exps[j - 1] = power
        return cls(spec, {tuple(exps): 1})

    @classmethod
    def monomial(cls, spec: RingSpec, exps: tuple[int, ...], c: int = 1) -> "RingElem":
        return cls(spec, {tuple(exps): c})

    # -- ring structure ------------------------------------------------

    def _check(self, other: "RingElem"):
        if self.spec != other.spec:
            raise SpecMismatchError(f"{self.spec} vs {other.spec}")

    def __add__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        out = dict(self.terms)
        q = self.spec.q
        for exps, c in other.terms.items():
            r = (out.get(exps, 0) + c) % q
            if r:
                out[exps] = r
            else:
                out.pop(exps, None)
        return RingElem(self.spec, out)

    def __neg__(self) -> "RingElem":
        q = self.spec.q
        return RingElem(self.spec, {e: q - c for e, c in self.terms.items()})

    def __sub__(self, other: "RingElem") -> "RingElem":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        q = self.spec.q
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                c = c1 * c2 % q
                if c == 0:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                r = (out.get(e, 0) + c) % q
                if r:
                    out[e] = r
                else:
                    out.pop(e, None)
        return RingElem(self.spec, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "RingElem":
        q = self.spec.q
        c %= q
        return RingElem(self.spec, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, m: int) -> "RingElem":
        if m < 0:
            return self.invert_unit() ** (-m)
        out = RingElem.one(self.spec)
        base = self
        while m:
            if m & 1:
                out = out * base
            base = base * base if m > 1 else base
            m >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((self.spec, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def eq_mod(self, other: "RingElem", m: int) -> bool:
        """Equality after reduction mod p^m (m <= n)."""
        self._check(other)
        pm = self.spec.p ** m
        keys = set(self.terms) | set(other.terms)
        return all((self.terms.get(k, 0) - other.terms.get(k, 0)) % pm == 0 for k in keys)

    # -- derivations and operators --------------------------------------

    def log_derive(self, j: int) -> "RingElem":
        """delta_j = T_j d/dT_j on the 1-based slot j: T^E -> E_j T^E."""
        j0 = j - 1
        return RingElem(self.spec, {e: e[j0] * c for e, c in self.terms.items()})

    def d_dT(self, j: int) -> "RingElem":
        """Ordinary derivative d/dT_j; produces T_j^{-1} factors, so the slot must be Laurent."""
        j0 = j - 1
        out: dict[tuple[int, ...], int] = {}
        for e, c in self.terms.items():
            if e[j0] == 0:
                continue
            e2 = list(e)
            e2[j0] -= 1
            out[tuple(e2)] = e[j0] * c
        return RingElem(self.spec, out)

    def falling_coeff(self, index: tuple[int, ...]) -> "RingElem":
        """Scalar falling-factorial operator: T^E -> (prod_j falling(E_j, i_j)) T^E."""
        out: dict[tuple[int, ...], int] = {}
        for e, c in self.terms.items():
            f = 1
            for ej, ij in zip(e, index):
                if ij:
                    f *= falling(ej, ij)
                    if f == 0:
                        break
            if f:
                out[e] = f * c
        return RingElem(self.spec, out)

    # -- precision and units --------------------------------------------

    def with_spec(self, spec: RingSpec) -> "RingElem":
        """Reinterpret over a compatible spec (canonical lift when raising precision)."""
        if (spec.p, spec.d) != (self.spec.p, self.spec.d):
            raise SpecMismatchError("incompatible specs")
        return RingElem(spec, dict(self.terms))

    def unit_monomial_mod_p(self):
        """If this element is a unit of R/p, return (exps, coeff mod p); else None.

        Units of the mixed ring mod p are exactly c*T^E with c != 0 and E
        supported on Laurent slots.
        """
        p = self.spec.p
        modp = {e: c % p for e, c in self.terms.items() if c % p}
        if len(modp) != 1:
            return None
        (exps, c), = modp.items()
        if any(exps[j] for j in range(self.spec.s)):
            return None
        return exps, c

    def invert_unit(self) -> "RingElem":
        """Inverse of a unit c*T^E*(1 + p*z), via a finite geometric series mod p^n."""
        um = self.unit_monomial_mod_p()
        if um is None:
            raise ZeroDivisionError(f"not a unit of the ring: {self}")
        exps, _ = um
        a = self.terms[exps]
        base_inv = RingElem.monomial(self.spec, tuple(-e for e in exps), modinv(a, self.spec.q))
        z = self * base_inv - RingElem.one(self.spec)
        # z is divisible by p, so z^n = 0 mod p^n
        out = RingElem.one(self.spec)
        term = RingElem.one(self.spec)
        for _ in range(1, self.spec.n):
            term = -(term * z)
            if term.is_zero():
                break
            out = out + term
        return out * base_inv

    def divisible_by_p(self, k: int = 1) -> bool:
        pk = self.spec.p ** k
        return all(c % pk == 0 for c in self.terms.values())

    def div_exact_p(self, k: int) -> "RingElem":
        """Divide the canonical representatives by p^k; top k digits of the result are zero.

        The quotient of an element of Z/p^n by p^k is only defined mod p^{n-k};
        this picks the representative with vanishing top digits.
        """
        pk = self.spec.p ** k
        out = {}
        for e, c in self.terms.items():
            if c % pk:
                raise ValueError(f"coefficient {c} not divisible by p^{k}")
            out[e] = c // pk
        return RingElem(self.spec, out)

    # -- display ---------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms):
            c = self.terms[exps]
            factors = [f"T{j + 1}" + (f"^{e}" if e != 1 else "") for j, e in enumerate(exps) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"RingElem({self.spec.p}^{self.spec.n}, {self})"


# -- maps ------------------------------------------------------------------


class RingMap:
    """Unit-monomial ring map f(T_j) = c_j * T^{E_j} * (1 + p*h_j).

    The structured (c, E, h) form is kept because ratios f(T_j)/g(T_j) of two
    such maps with equal monomial parts are honest units, which is what the
    divided-power Taylor machinery needs.
    """

    def __init__(self, source: RingSpec, target: RingSpec,
                 images: list[tuple[int, tuple[int, ...], RingElem]]):
        if (source.p, source.n) != (target.p, target.n):
            raise IllegalMapError("source and target must share p and precision")
        if len(images) != source.d:
            raise IllegalMapError(f"need {source.d} images, got {len(images)}")
        self.source = source
        self.target = target
        norm = []
        for j, (c, exps, h) in enumerate(images):
            c %= target.q
            if c % target.p == 0:
                raise IllegalMapError(f"constant of image {j + 1} is not a unit")
            exps = tuple(exps)
            if len(exps) != target.d:
                raise IllegalMapError(f"image {j + 1}: exponent vector has wrong length")
            if any(exps[l] < 0 for l in range(target.s)):
                raise IllegalMapError(f"image {j + 1}: negative exponent on a target divisor slot")
            if j >= source.s and any(exps[l] for l in range(target.s)):
                raise IllegalMapError(
                    f"image of Laurent slot {j + 1} must be a unit monomial")
            if h.spec != target:
                raise SpecMismatchError("unit part lives in the wrong ring")
            norm.append((c, exps, h))
        self.images = norm
        self._elems = [self._assemble(c, exps, h) for c, exps, h in norm]
        self._inv_elems: dict[int, RingElem] = {}

    def _assemble(self, c, exps, h):
        one_plus = RingElem.one(self.target) + h.scale(self.target.p)
        return RingElem.monomial(self.target, exps, c) * one_plus

    @classmethod
    def identity(cls, spec: RingSpec) -> "RingMap":
        images = []
        for j in range(spec.d):
            e = [0] * spec.d
            e[j] = 1
            images.append((1, tuple(e), RingElem.zero(spec)))
        return cls(spec, spec, images)

    def image_elem(self, j: int) -> RingElem:
        """f(T_j) for the 1-based slot j."""
        return self._elems[j - 1]

    def _image_pow(self, j0: int, e: int) -> RingElem:
        if e >= 0:
            return self._elems[j0] ** e
        inv = self._inv_elems.get(j0)
        if inv is None:
            try:
                inv = self._elems[j0].invert_unit()
            except ZeroDivisionError:
                raise IllegalMapError(
                    f"negative power of non-unit image of slot {j0 + 1}") from None
            self._inv_elems[j0] = inv
        return inv ** (-e)

    def apply(self, r: RingElem) -> RingElem:
        if r.spec != self.source:
            raise SpecMismatchError("element not in the source ring")
        out = RingElem.zero(self.target)
        for exps, c in r.terms.items():
            term = RingElem.const(self.target, c)
            for j0, e in enumerate(exps):
                if e:
                    term = term * self._image_pow(j0, e)
            out = out + term
        return out

    def then(self, g: "RingMap") -> "RingMap":
        """The composite g after self, again in unit-monomial form."""
        if self.target != g.source:
            raise IllegalMapError("maps are not composable")
        p, q = g.target.p, g.target.q
        images = []
        for c, exps, h in self.images:
            new_c = c % q
            new_exps = [0] * g.target.d
            unit = RingElem.one(g.target)
            for l0, e in enumerate(exps):
                if e == 0:
                    continue
                cl, el, hl = g.images[l0]
                new_c = new_c * (pow(cl, e, q) if e > 0 else pow(modinv(cl, q), -e, q)) % q
                for t in range(g.target.d):
                    new_exps[t] += e * el[t]
                one_plus = RingElem.one(g.target) + hl.scale(p)
                unit = unit * (one_plus ** e)
            unit = unit * (RingElem.one(g.target) + g.apply(h).scale(p))
            new_h = (unit - RingElem.one(g.target)).div_exact_p(1)
            images.append((new_c, tuple(new_exps), new_h))
        return RingMap(self.source, g.target, images)

    def with_precision(self, n: int) -> "RingMap":
        src = self.source.with_precision(n)
        tgt = self.target.with_precision(n)
        return RingMap(src, tgt, [(c, e, h.with_spec(tgt)) for c, e, h in self.images])

    def __eq__(self, other):
        if not isinstance(other, RingMap):
            return NotImplemented
        return (self.source, self.target, self.images) == (other.source, other.target, other.images)


class FrobLift:
    """Frobenius lift Phi(T_j) = w_j T_j^p with w_j = 1 + p*u_j.

    Storing the u_j makes the invariant w_j = 1 mod p structural; the lift
    property Phi(r) = r^p mod p then holds for every element.
    """

    def __init__(self, spec: RingSpec, u: list[RingElem]):
        if len(u) != spec.d:
            raise ValueError(f"need {spec.d} unit parts, got {len(u)}")
        for uj in u:
            if uj.spec != spec:
                raise SpecMismatchError("unit part in the wrong ring")
        self.spec = spec
        self.u = list(u)
        images = []
        for j in range(spec.d):
            e = [0] * spec.d
            e[j] = spec.p
            images.append((1, tuple(e), u[j]))
        self._map = RingMap(spec, spec, images)

    @classmethod
    def standard(cls, spec: RingSpec) -> "FrobLift":
        """The lift with w_j = 1 (T_j -> T_j^p)."""
        return cls(spec, [RingElem.zero(spec)] * spec.d)

    def w(self, j: int) -> RingElem:
        """The unit w_j = 1 + p*u_j, 1-based slot."""
        return RingElem.one(self.spec) + self.u[j - 1].scale(self.spec.p)

    def as_ring_map(self) -> RingMap:
        return self._map

    def apply(self, r: RingElem) -> RingElem:
        return self._map.apply(r)

    def with_precision(self, n: int) -> "FrobLift":
        spec = self.spec.with_precision(n)
        return FrobLift(spec, [uj.with_spec(spec) for uj in self.u])

    def __eq__(self, other):
        if not isinstance(other, FrobLift):
            return NotImplemented
        return self.spec == other.spec and self.u == other.u


# -- spec-named operation wrappers ------------------------------------------


def ring_mul(x: RingElem, y: RingElem) -> RingElem:
    """Sparse product in R; SpecMismatchError if the specs differ."""
    return x * y


def apply_frobenius(r: RingElem, lift: FrobLift) -> RingElem:
    """Ring-homomorphic image T^E -> prod_j (w_j T_j^p)^{E_j}, coefficients fixed."""
    if r.spec != lift.spec:
        raise SpecMismatchError("element and lift live over different specs")
    return lift.apply(r)


def log_derive(r: RingElem, j: int) -> RingElem:
    """delta_j(T^E) = E_j * T^E extended additively (1-based slot index)."""
    if not 1 <= j <= r.spec.d:
        raise ValueError(f"slot index {j} out of range 1..{r.spec.d}")
    return r.log_derive(j)


def falling_op(r: RingElem, index: tuple[int, ...]) -> RingElem:
    """The scalar operator prod_j prod_{k<i_j} (delta_j - k) on ring elements."""
    if len(index) != r.spec.d:
        raise ValueError("multi-index length must equal d")
    return r.falling_coeff(tuple(index))


def apply_ring_map(r: RingElem, f: RingMap) -> RingElem:
    """Substitution homomorphism along a unit-monomial map."""
    return f.apply(r)


def localize(r: RingElem) -> RingElem:
    """The same element over the spec with every slot Laurent (s = 0)."""
    return r.with_spec(r.spec.localized())


# -- truncation control ------------------------------------------------------


def design_shell_bound(p: int, n: int, width: int) -> int:
    """The design truncation bound width + ceil(n(p-1)/(p-2)) for shell sums."""
    return width + ceil(n * (p - 1) / (p - 2))


def stop_shell(p: int, n: int, width: int) -> int:
    """First shell c from which on every divided term provably vanishes mod p^n.

    A term of order |I| = c carries p-valuation at least
    c - v_p(I!) - min(width, c) >= c - floor((c-1)/(p-1)) - min(width, c),
    and the bound is nondecreasing for c >= width, so once it reaches n all
    later shells are zero.  This makes the truncation a checked fact rather
    than an article of faith; stopping on an observed zero shell alone could
    terminate too early.
    """
    c = max(width, 1)
    while c - (c - 1) // (p - 1) - min(width, c) < n:
        c += 1
    return c


def multi_indices(d: int, total: int):
    """All multi-indices of length d with |I| = total, in lexicographic order."""
    if d == 0:
        if total == 0:
            yield ()
        return
    if d == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in multi_indices(d - 1, total - first):
            yield (first,) + rest


def multi_factorial(index: tuple[int, ...]) -> int:
    out = 1
    for i in index:
        out *= factorial(i)
    return out


def work_precision(p: int, base_n: int, width: int) -> int:
    """Working precision for divided-coefficient sums reduced into Z/p^base_n.

    Every division removes at most width + v_p(I!) powers of p beyond those
    guaranteed in the numerator, and v_p(I!) over the computed shells is
    bounded by stop_shell // (p - 1).
    """
    return base_n + width + stop_shell(p, base_n, width) // (p - 1) + 1


class DividedCoeffs:
    """Divided coefficients (g1(T)/g2(T) - 1)^I / (I! * p^e) for a pair of maps.

    g1 and g2 must be unit-monomial maps with identical monomial parts that
    agree mod p (LiftMismatchError otherwise).  The powers x^I are accumulated
    at a raised working precision, and each requested coefficient is divided
    exactly and reduced into the base precision; a division that is not
    p-integral raises NonIntegralError.

    With mode="difference" the base quantity is x_j = g1(T_j) - g2(T_j)
    instead of the ratio minus one; this is the coefficient stream of the
    classical (non-logarithmic) comparison formula.

    base_n is the precision of the reduced output; the maps are moved to the
    working precision from whatever precision they carry.  Maps assembled by
    composition must be composed at the working precision already, since a
    base-precision composite underdetermines the digits the divisions
    consume; `work_precision` names the precision to compose at.
    """

    def __init__(self, g1: RingMap, g2: RingMap, width: int,
                 mode: str = "ratio", base_n: int | None = None):
        if g1.source != g2.source or g1.target != g2.target:
            raise SpecMismatchError("the two maps must share source and target")
        n = base_n if base_n is not None else g1.target.n
        tgt = g1.target.with_precision(n)
        self.base_spec = tgt
        p = tgt.p
        self.p, self.n = p, n
        self.width = width
        self.stop = stop_shell(p, n, width)
        self.design_bound = design_shell_bound(p, n, width)
        self.work_n = work_precision(p, n, width)
        wspec = tgt.with_precision(self.work_n)
        g1w = g1.with_precision(self.work_n)
        g2w = g2.with_precision(self.work_n)
        one = RingElem.one(wspec)
        self.x: list[RingElem] = []
        for j in range(g1.source.d):
            if mode == "ratio":
                c1, e1, h1 = g1w.images[j]
                c2, e2, h2 = g2w.images[j]
                if e1 != e2:
                    raise LiftMismatchError(
                        f"images of slot {j + 1} have different monomial parts")
                num = (one + h1.scale(p)).scale(c1)
                den = (one + h2.scale(p)).scale(c2)
                xj = num * den.invert_unit() - one
            else:
                xj = g1w.image_elem(j + 1) - g2w.image_elem(j + 1)
            if not xj.divisible_by_p():
                raise LiftMismatchError(f"maps do not agree mod p on slot {j + 1}")
            self.x.append(xj)
        self._powers: dict[tuple[int, ...], RingElem] = {(0,) * g1.source.d: one}

    def _power(self, index: tuple[int, ...]) -> RingElem:
        got = self._powers.get(index)
        if got is not None:
            return got
        j0 = next(i for i, v in enumerate(index) if v)
        parent = list(index)
        parent[j0] -= 1
        out = self._power(tuple(parent)) * self.x[j0]
        self._powers[index] = out
        return out

    def coeff(self, index: tuple[int, ...], p_exponent: int) -> RingElem:
        """x^I / (I! * p^p_exponent) as an element mod p^n."""
        fact = multi_factorial(index)
        needed = self.n + p_exponent + sum(factorial_valp(i, self.p) for i in index)
        if needed > self.work_n:
            raise AssertionError("working precision underestimated")
        denom = fact * self.p ** p_exponent
        xI = self._power(index)
        out = {e: reduce_mod(Fraction(c, denom), self.p, self.n) for e, c in xI.terms.items()}
        return RingElem(self.base_spec, out)


def taylor_residual(r: RingElem, lift1: FrobLift, lift2: FrobLift) -> RingElem:
    """Phi(r) - sum_I Psi(delta^{I}(r)) * (Phi(T)/Psi(T)-1)^I / I!, truncated.

    The sum runs over all shells |I| < stop_shell(p, n, 0); the remaining
    shells provably vanish mod p^n, so the residual is exactly the defect of
    the logarithmic Taylor formula.  The contract is that it is 0 for every r.
    """
    spec = r.spec
    if lift1.spec != spec or lift2.spec != spec:
        raise SpecMismatchError("lifts must live over the element's spec")
    coeffs = DividedCoeffs(lift1.as_ring_map(), lift2.as_ring_map(), width=0)
    acc = apply_frobenius(r, lift1)
    for c in range(coeffs.stop):
        for index in multi_indices(spec.d, c):
            part = falling_op(r, index)
            if part.is_zero():
                continue
            acc = acc - apply_frobenius(part, lift2) * coeffs.coeff(index, 0)
    return acc
