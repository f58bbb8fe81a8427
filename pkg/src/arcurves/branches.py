"""Branch decomposition of the curve and parametrization data.

Over a splitting field the defining polynomial factors as a monomial
part times a product of binomials a x^p + b y^q.  Each irreducible
factor h cuts out a branch R' = S/(h), parametrized inside k[t]:

  y-axis branch (h = y):    x -> t,        y -> 0,        R' = k[x]
  binomial branch:          x -> c t^q,    y -> t^p,      a c^p = -b

The t-degree of a parametrized monomial equals its weighted degree
divided by the branch scale (1 for binomials, q for the y-axis branch),
so value semigroups, Frobenius numbers, and integrality of fractions
are all decided by integer arithmetic on t-exponents.
"""

from __future__ import annotations

import sympy

from .errors import CertificationError, FormSplitError, InputError, NotSquarefreeError
from .ring import HypersurfaceRing, QElement, WPoly, semigroup_member


class Branch:
    """One analytic branch of the curve, with its k[t] parametrization."""

    def __init__(self, ring: HypersurfaceRing, kind: str, h: WPoly,
                 cx, ex: int, cy, ey: int, scale: int):
        self.ring = ring
        self.kind = kind
        self.h = h
        self.cx = cx
        self.ex = ex
        self.cy = cy
        self.ey = ey
        self.scale = scale
        gens = []
        if not ring.field.is_zero(cx):
            gens.append(ex)
        if not ring.field.is_zero(cy):
            gens.append(ey)
        self.generators = tuple(sorted(set(gens)))
        self.frobenius = _frobenius_closed_form(self.generators)
        enumerated = _frobenius_by_enumeration(self.generators)
        if enumerated != self.frobenius:
            raise CertificationError(
                f"Frobenius closed form {self.frobenius} disagrees with "
                f"enumeration {enumerated}")
        self.conductor = self.frobenius + 1
        # Multiplicity of the branch: smallest positive t-degree of a
        # parameter image, i.e. the least semigroup generator.
        self.multiplicity = min(self.generators)

    def tdeg_of_wdeg(self, d: int):
        """t-degree carried by weighted degree d, or None if not attained."""
        if d % self.scale != 0:
            return None
        return d // self.scale

    def semigroup_contains(self, t: int) -> bool:
        if t < 0:
            return False
        if self.generators == (1,):
            return True
        a, b = self.generators
        return semigroup_member(t, a, b)

    def evaluate(self, poly: WPoly):
        """Image of a homogeneous polynomial, as (coeff, t-degree) or None."""
        K = self.ring.field
        if poly.is_zero():
            return None
        total = K.zero
        tdeg = None
        for (i, j), c in poly.terms.items():
            if i > 0 and K.is_zero(self.cx):
                continue
            if j > 0 and K.is_zero(self.cy):
                continue
            term = c
            if i > 0:
                term = K.mul(term, _power(K, self.cx, i))
            if j > 0:
                term = K.mul(term, _power(K, self.cy, j))
            total = K.add(total, term)
            tdeg = self.ex * i + self.ey * j
        if tdeg is None or K.is_zero(total):
            return None
        return total, tdeg

    def evaluate_q(self, qe: QElement):
        """Image of a fraction as (coeff, t-degree) or None; cached on qe."""
        key = id(self)
        if key in qe._image_cache:
            return qe._image_cache[key]
        den_img = self.evaluate(qe.den)
        if den_img is None:
            raise InputError("denominator vanishes on the branch")
        num_img = self.evaluate(qe.num)
        if num_img is None:
            result = None
        else:
            K = self.ring.field
            result = (K.div(num_img[0], den_img[0]), num_img[1] - den_img[1])
        qe._image_cache[key] = result
        return result

    def describe(self) -> dict:
        K = self.ring.field
        return {
            "kind": self.kind,
            "h": self.h.to_string(),
            "parametrization": {
                "x": f"{K.to_str(self.cx)}*t^{self.ex}",
                "y": f"{K.to_str(self.cy)}*t^{self.ey}",
            },
            "semigroup_generators": list(self.generators),
            "frobenius": self.frobenius,
            "conductor": self.conductor,
            "multiplicity": self.multiplicity,
        }

    def __repr__(self):
        return f"Branch({self.kind}, h={self.h.to_string()})"


def _power(K, base, exp: int):
    out = K.one
    for _ in range(exp):
        out = K.mul(out, base)
    return out


def _frobenius_closed_form(gens) -> int:
    if gens == (1,):
        return -1
    if len(gens) == 2:
        a, b = gens
        return a * b - a - b
    raise InputError(f"unsupported semigroup generators {gens}")


def _frobenius_by_enumeration(gens) -> int:
    if gens == (1,):
        return -1
    bound = gens[0] * gens[-1] + 1
    reachable = [False] * (bound + 1)
    reachable[0] = True
    for g in gens:
        for t in range(g, bound + 1):
            if reachable[t - g]:
                reachable[t] = True
    gaps = [t for t in range(bound + 1) if not reachable[t]]
    return max(gaps) if gaps else -1


def _axis_branch(ring: HypersurfaceRing, which: str) -> Branch:
    K = ring.field
    if which == "y":
        # h = y: the branch is the x-axis line parametrized by x -> t.
        return Branch(ring, "y-axis", ring.y_poly(), K.one, 1, K.zero, 0, ring.q)
    return Branch(ring, "x-axis", ring.x_poly(), K.zero, 0, K.one, 1, ring.p)


def _binomial_branch(ring: HypersurfaceRing, alpha, beta) -> Branch:
    """Branch of alpha x^p + beta y^q, normalized so y -> t^p."""
    K = ring.field
    alpha = K.div(alpha, beta)
    h = WPoly(K, ring.q, ring.p, {(ring.p, 0): alpha, (0, ring.q): K.one})
    target = K.neg(K.inv(alpha))
    cx = _pth_root(K, target, ring.p)
    if cx is None:
        raise FormSplitError(
            f"form does not split over k: no p-th root of {K.to_str(target)}")
    return Branch(ring, "binomial", h, cx, ring.q, K.one, ring.p, 1)


def _pth_root(K, value, p: int):
    if K.char == 0:
        from fractions import Fraction
        val = value
        sign = 1
        if val < 0:
            if p % 2 == 0:
                return None
            sign = -1
            val = -val
        num = _int_nth_root(val.numerator, p)
        den = _int_nth_root(val.denominator, p)
        if num is None or den is None:
            return None
        return Fraction(sign * num, den)
    for c in range(1, K.char):
        if pow(c, p, K.char) == value % K.char:
            return c
    return None


def _int_nth_root(n: int, p: int):
    if n == 0:
        return 0
    lo, hi = 1, max(2, n)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** p < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** p == n else None


def factor_hypersurface(ring: HypersurfaceRing) -> list[Branch]:
    """All branches of the curve, in a deterministic order.

    Raises NotSquarefreeError when g has a repeated factor and
    FormSplitError when some binomial factor has no root in k.
    """
    cached = getattr(ring, "_branches_cache", None)
    if cached is not None:
        return cached
    if not ring.is_reduced:
        raise NotSquarefreeError("not squarefree")
    K = ring.field
    g = ring.g
    i0 = g.min_x_exponent()
    j0 = g.min_y_exponent()
    branches = []
    if i0 >= 1:
        branches.append(_axis_branch(ring, "x"))
    if j0 >= 1:
        branches.append(_axis_branch(ring, "y"))
    stripped = WPoly(K, ring.q, ring.p,
                     {(i - i0, j - j0): c for (i, j), c in g.terms.items()})
    if stripped.degree > 0:
        pairs = []
        for alpha, beta, mult in _factor_binary_form(ring, stripped):
            if mult >= 2:
                raise NotSquarefreeError("not squarefree")
            pairs.append((alpha, beta))
        pairs.sort(key=lambda ab: (K.to_str(K.div(ab[0], ab[1]))))
        for alpha, beta in pairs:
            branches.append(_binomial_branch(ring, alpha, beta))
    # The factors must multiply back to g up to a scalar.
    product = ring.monomial(i0, j0)
    for br in branches:
        if br.kind == "binomial":
            product = product * br.h
    key = next(iter(product.terms))
    scalar = K.div(g.terms[key], product.terms[key])
    if not (product * scalar) == g:
        raise CertificationError("branch product does not recover g")
    ring._branches_cache = branches
    return branches


def _factor_binary_form(ring: HypersurfaceRing, stripped: WPoly):
    """Linear factors (alpha, beta, multiplicity) of the form in (x^p, y^q)."""
    K = ring.field
    p, q = ring.p, ring.q
    degT = max(i for i, _ in stripped.terms) // p
    coeffs = [K.zero] * (degT + 1)
    for (i, j), c in stripped.terms.items():
        if i % p != 0 or j % q != 0:
            raise InputError("stripped polynomial is not a form in x^p, y^q")
        coeffs[i // p] = c
    T = sympy.Symbol("T")
    if K.char == 0:
        sym_coeffs = [sympy.Rational(c.numerator, c.denominator)
                      for c in reversed(coeffs)]
        poly = sympy.Poly(sym_coeffs, T, domain="QQ")
    else:
        poly = sympy.Poly([int(c) for c in reversed(coeffs)], T,
                          modulus=K.char, symmetric=False)
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        if fac.degree() >= 2:
            raise FormSplitError("form does not split over k")
        a1, a0 = fac.all_coeffs() if fac.degree() == 1 else (0, fac.all_coeffs()[0])
        if fac.degree() == 0:
            continue
        alpha = _from_sympy(K, a1)
        beta = _from_sympy(K, a0)
        if K.is_zero(beta):
            raise CertificationError("binary form vanished at the origin")
        out.append((alpha, beta, mult))
    return out


def _from_sympy(K, value):
    from fractions import Fraction
    if K.char == 0:
        r = sympy.Rational(value)
        return Fraction(int(r.p), int(r.q))
    return int(value) % K.char


def singular_branch(ring: HypersurfaceRing) -> Branch:
    """The default branch carrying the conductor: the form factor's branch.

    b x^p + y^q always divides g, so among the binomial branches the one
    it cuts out is the canonical default.  For b = 0 the curve is y^q f = 0
    and never squarefree, so the y-axis branch is built directly without
    factoring.
    """
    if ring.field.is_zero(ring.b):
        return _axis_branch(ring, "y")
    form = (ring.monomial(ring.p, 0, ring.b) + ring.monomial(0, ring.q))
    candidates = [br for br in factor_hypersurface(ring)
                  if br.kind == "binomial" and br.evaluate(form) is None]
    if len(candidates) != 1:
        raise InputError(
            f"no canonical branch: {len(candidates)} matches for the form factor")
    return candidates[0]


class BranchFraction:
    """A fraction read on a single branch (numerator over denominator).

    Unlike QElement this only requires the denominator not to vanish on
    the branch, so it can represent elements of Q(R') that have no
    global meaning.
    """

    def __init__(self, branch: Branch, num: WPoly, den: WPoly):
        if branch.evaluate(den) is None:
            raise InputError("denominator vanishes on the branch")
        self.branch = branch
        self.num = num
        self.den = den

    def image(self):
        num_img = self.branch.evaluate(self.num)
        if num_img is None:
            return None
        den_img = self.branch.evaluate(self.den)
        K = self.branch.ring.field
        return (K.div(num_img[0], den_img[0]), num_img[1] - den_img[1])

    def to_string(self):
        return f"({self.num.to_string()})/({self.den.to_string()})"


def gamma_prime(branch: Branch) -> BranchFraction:
    """A degree-maximal element of the inverse different of the branch.

    Returns y^{q-1}/x on a binomial branch and 1/x on the y-axis branch;
    the image is a nonzero multiple of t^Frobenius.  Certified by the
    graded criterion: the branch has no nonzero piece in the degree of
    the returned fraction, and multiplying by either variable lands in
    the branch ring.
    """
    ring = branch.ring
    if branch.kind == "binomial":
        frac = BranchFraction(branch, ring.monomial(0, ring.q - 1), ring.x_poly())
    elif branch.kind == "y-axis":
        frac = BranchFraction(branch, ring.one(), ring.x_poly())
    else:
        frac = BranchFraction(branch, ring.one(), ring.y_poly())
    coeff, tdeg = frac.image()
    if tdeg != branch.frobenius:
        raise CertificationError("gamma' does not sit in the Frobenius degree")
    if branch.semigroup_contains(tdeg):
        raise CertificationError("gamma' lies in the branch ring")
    for var in (ring.x_poly(), ring.y_poly()):
        img = branch.evaluate(var)
        if img is None:
            continue
        if not branch.semigroup_contains(tdeg + img[1]):
            raise CertificationError("gamma' times the maximal ideal escapes R'")
    return frac
