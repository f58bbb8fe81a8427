"""Weighted-homogeneous polynomial arithmetic and graded hypersurface rings.

The ambient ring is S = k[x, y] graded by deg x = q and deg y = p for a
coprime pair p, q >= 3.  A curve instance is R = S/(g) with
g = (b x^p + y^q) f, where f is homogeneous, not divisible by x, and
f - y^v lies in xS for v = deg(f)/p.  Then g is monic in y of y-degree
q + v, which gives a normal form with y-exponents below q + v and the
monomial k-basis {x^i y^j : j < q + v} in each degree.

Elements of the total quotient ring are kept as exact fractions with a
nonzerodivisor denominator; membership in R is decided degreewise by
exact linear algebra, never numerically.
"""

from __future__ import annotations

import re

from .errors import InputError, NotSquarefreeError
from .fields import QQ
from .linalg import solve_dense


class WPoly:
    """Sparse weighted-homogeneous polynomial in x and y.

    terms maps (i, j) exponent pairs to nonzero coefficients; all terms
    share the same weighted degree q*i + p*j (wx = q weights x, wy = p
    weights y).  The zero polynomial has empty terms and degree None.
    """

    __slots__ = ("field", "wx", "wy", "terms")

    def __init__(self, field, wx: int, wy: int, terms: dict):
        self.field = field
        self.wx = wx
        self.wy = wy
        clean = {}
        deg = None
        for (i, j), c in terms.items():
            if field.is_zero(c):
                continue
            d = wx * i + wy * j
            if deg is None:
                deg = d
            elif d != deg:
                raise InputError("polynomial is not weighted-homogeneous")
            clean[(i, j)] = c
        self.terms = clean

    @classmethod
    def zero(cls, field, wx, wy):
        return cls(field, wx, wy, {})

    @classmethod
    def monomial(cls, field, wx, wy, i, j, coeff=None):
        c = field.one if coeff is None else field(coeff)
        return cls(field, wx, wy, {(i, j): c})

    @property
    def degree(self):
        if not self.terms:
            return None
        i, j = next(iter(self.terms))
        return self.wx * i + self.wy * j

    def is_zero(self) -> bool:
        return not self.terms

    def _like(self, terms):
        return WPoly(self.field, self.wx, self.wy, terms)

    def __add__(self, other):
        K = self.field
        out = dict(self.terms)
        for key, c in other.terms.items():
            cur = out.get(key)
            new = c if cur is None else K.add(cur, c)
            if K.is_zero(new):
                out.pop(key, None)
            else:
                out[key] = new
        return self._like(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        K = self.field
        return self._like({k: K.neg(c) for k, c in self.terms.items()})

    def __mul__(self, other):
        K = self.field
        if not isinstance(other, WPoly):
            c = K(other)
            if K.is_zero(c):
                return self._like({})
            return self._like({k: K.mul(v, c) for k, v in self.terms.items()})
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                piece = K.mul(c1, c2)
                cur = out.get(key)
                new = piece if cur is None else K.add(cur, piece)
                if K.is_zero(new):
                    out.pop(key, None)
                else:
                    out[key] = new
        return self._like(out)

    __rmul__ = __mul__

    def shift_monomial(self, di: int, dj: int):
        """Multiply by x^di y^dj (di, dj may not be negative)."""
        if di < 0 or dj < 0:
            raise InputError("negative monomial shift")
        return self._like({(i + di, j + dj): c for (i, j), c in self.terms.items()})

    def coeff(self, i: int, j: int):
        return self.terms.get((i, j), self.field.zero)

    def min_x_exponent(self):
        return min(i for i, _ in self.terms) if self.terms else None

    def min_y_exponent(self):
        return min(j for _, j in self.terms) if self.terms else None

    def max_y_exponent(self):
        return max(j for _, j in self.terms) if self.terms else None

    def div_exact_x(self, power: int):
        """Exact division by x^power; raises if some term is not divisible."""
        for (i, _j) in self.terms:
            if i < power:
                raise InputError("not divisible by the requested power of x")
        return self._like({(i - power, j): c for (i, j), c in self.terms.items()})

    def _leading(self):
        # Lex order with y ahead of x; multiplicative, so exact division
        # of a product always finds a divisible leading term.
        return max(self.terms, key=lambda ij: (ij[1], ij[0]))

    def div_exact(self, divisor: "WPoly") -> "WPoly":
        """Exact polynomial division in S; raises InputError on nonzero remainder."""
        K = self.field
        if divisor.is_zero():
            raise InputError("division by zero polynomial")
        rem = dict(self.terms)
        quot = {}
        di, dj = divisor._leading()
        dc = divisor.terms[(di, dj)]
        while rem:
            li, lj = max(rem, key=lambda ij: (ij[1], ij[0]))
            if li < di or lj < dj:
                raise InputError("polynomial division left a remainder")
            qi, qj = li - di, lj - dj
            qc = K.div(rem[(li, lj)], dc)
            quot[(qi, qj)] = qc
            for (i, j), c in divisor.terms.items():
                key = (i + qi, j + qj)
                cur = rem.get(key, K.zero)
                new = K.sub(cur, K.mul(qc, c))
                if K.is_zero(new):
                    rem.pop(key, None)
                else:
                    rem[key] = new
        return self._like(quot)

    def __eq__(self, other):
        if not isinstance(other, WPoly):
            return NotImplemented
        if (self.wx, self.wy) != (other.wx, other.wy):
            return False
        if set(self.terms) != set(other.terms):
            return False
        K = self.field
        return all(K.eq(c, other.terms[k]) for k, c in self.terms.items())

    def __hash__(self):
        K = self.field
        return hash(tuple(sorted((k, K.to_str(c)) for k, c in self.terms.items())))

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        K = self.field
        parts = []
        for (i, j) in sorted(self.terms):
            parts.append(f"{K.to_str(self.terms[(i, j)])}*x^{i}*y^{j}")
        return "+".join(parts)

    def __repr__(self):
        return f"WPoly({self.to_string()})"


_TERM_PART = re.compile(r"^(?:(?P<coeff>[+-]?\d+(?:/\d+)?)|(?P<var>[xy])(?:\^(?P<exp>\d+))?)$")


def poly_from_string(field, wx: int, wy: int, text: str) -> WPoly:
    """Parse "coeff*x^i*y^j" terms joined by "+" (a leading "-" is also accepted)."""
    cleaned = text.replace(" ", "")
    if not cleaned:
        raise InputError("empty polynomial string")
    cleaned = cleaned.replace("-", "+-")
    if cleaned.startswith("+"):
        cleaned = cleaned[1:]
    terms: dict[tuple[int, int], object] = {}
    for chunk in cleaned.split("+"):
        if not chunk:
            raise InputError(f"malformed polynomial string {text!r}")
        coeff = field.one
        negate = False
        i = j = 0
        for part in chunk.split("*"):
            if part == "-":
                negate = True
                continue
            m = _TERM_PART.match(part)
            if m is None:
                raise InputError(f"malformed term {chunk!r} in {text!r}")
            if m.group("coeff") is not None:
                coeff = field.mul(coeff, field(m.group("coeff")))
            else:
                exp = int(m.group("exp") or 1)
                if m.group("var") == "x":
                    i += exp
                else:
                    j += exp
        if negate:
            coeff = field.neg(coeff)
        cur = terms.get((i, j), field.zero)
        terms[(i, j)] = field.add(cur, coeff)
    return WPoly(field, wx, wy, terms)


def semigroup_member(d: int, p: int, q: int) -> bool:
    """Whether d lies in the numerical semigroup generated by p and q."""
    if d < 0:
        return False
    for a in range(d // q + 1):
        if (d - a * q) % p == 0:
            return True
    return False


def _strip_monomial(poly: WPoly):
    i0 = poly.min_x_exponent()
    j0 = poly.min_y_exponent()
    stripped = WPoly(poly.field, poly.wx, poly.wy,
                     {(i - i0, j - j0): c for (i, j), c in poly.terms.items()})
    return i0, j0, stripped


def _dehomogenized_form(poly: WPoly, p: int, q: int):
    """Coefficient list of the binary form underlying a monomial-free poly.

    A weighted-homogeneous polynomial with x- and y-exponent minimum zero
    has x-exponents in p*Z and y-exponents in q*Z (weights force a single
    congruence class per degree), so it is a form in (x^p, y^q).  Returns
    the coefficients of T^s for the substitution T = x^p.
    """
    K = poly.field
    degT = max(i for i, _ in poly.terms) // p
    coeffs = [K.zero] * (degT + 1)
    for (i, j), c in poly.terms.items():
        if i % p != 0 or j % q != 0:
            raise InputError("polynomial is not a form in x^p and y^q")
        coeffs[i // p] = c
    return coeffs


def _univariate_gcd_degree(a, b, field) -> int:
    """Degree of gcd of two univariate coefficient lists (0 if coprime)."""
    K = field

    def trim(u):
        while u and K.is_zero(u[-1]):
            u = u[:-1]
        return u

    a, b = trim(list(a)), trim(list(b))
    while b:
        # a mod b
        while len(a) >= len(b) and a:
            factor = K.div(a[-1], b[-1])
            shift = len(a) - len(b)
            a = [K.sub(c, K.mul(factor, b[t - shift])) if shift <= t else c
                 for t, c in enumerate(a)]
            a = trim(a)
        a, b = b, a
    return len(a) - 1 if a else -1


class HypersurfaceRing:
    """The graded curve R = k[x, y]/((b x^p + y^q) f), deg x = q, deg y = p."""

    def __init__(self, field, p: int, q: int, b, f, m: int | None = None,
                 n: int | None = None):
        if field.char == 2:
            raise InputError("characteristic 2 is not supported")
        if p < 3 or q < 3:
            raise InputError("p and q must both be at least 3")
        if _gcd(p, q) != 1:
            raise InputError("p and q must be coprime")
        self.field = field
        self.p = p
        self.q = q
        self.b = field(b)
        if isinstance(f, str):
            f = poly_from_string(field, q, p, f)
        if f.is_zero():
            raise InputError("f must be nonzero")
        self.f = f
        # x must not divide f, and the sole x-free term must be y^v with
        # coefficient 1; that makes g monic in y.
        pure = [(i, j) for (i, j) in f.terms if i == 0]
        if len(pure) != 1:
            raise InputError("f must have exactly one term free of x")
        v = pure[0][1]
        if not field.eq(f.terms[(0, v)], field.one):
            raise InputError("the y^v coefficient of f must be 1")
        if f.degree != p * v:
            raise InputError("deg f must equal p*v")
        self.v = v
        binomial = WPoly(field, q, p, {(p, 0): self.b, (0, q): field.one})
        self.binomial = binomial
        self.g = binomial * f
        self.deg_g = p * (q + v)
        self.ybound = q + v
        self.gamma_degree = self.deg_g - p - q
        if m is not None and not (1 <= m <= p - 2):
            raise InputError(f"m must satisfy 1 <= m <= {p - 2}")
        if n is not None and not (2 <= n <= q - 1):
            raise InputError(f"n must satisfy 2 <= n <= {q - 1}")
        self.m = m
        self.n = n
        self.is_reduced = self._squarefree(self.g)
        if not field.is_zero(self.b) and not self.is_reduced:
            raise NotSquarefreeError("defining polynomial has a repeated factor")
        # y^(q+v) reduces to y^(q+v) - g, whose terms all carry an x factor.
        self._ytop_tail = WPoly(field, q, p, {(0, self.ybound): field.one}) - self.g
        self._nf_cache: dict[int, dict] = {}
        self._piece_cache: dict[int, list] = {}
        self._s_piece_cache: dict[int, list] = {}

    # ------------------------------------------------------------------
    # construction helpers

    def poly(self, text: str) -> WPoly:
        return poly_from_string(self.field, self.q, self.p, text)

    def zero_poly(self) -> WPoly:
        return WPoly.zero(self.field, self.q, self.p)

    def monomial(self, i: int, j: int, coeff=None) -> WPoly:
        return WPoly.monomial(self.field, self.q, self.p, i, j, coeff)

    def x_poly(self) -> WPoly:
        return self.monomial(1, 0)

    def y_poly(self) -> WPoly:
        return self.monomial(0, 1)

    def one(self) -> WPoly:
        return self.monomial(0, 0)

    def wdeg(self, i: int, j: int) -> int:
        return self.q * i + self.p * j

    # ------------------------------------------------------------------
    # normal form

    def _monomial_nf(self, j: int) -> dict:
        """Normal form of y^j as a dict (i, j') -> coeff with j' < ybound."""
        cached = self._nf_cache.get(j)
        if cached is not None:
            return cached
        K = self.field
        if j < self.ybound:
            result = {(0, j): K.one}
        else:
            result = {}
            for (a, c2), coeff in self._ytop_tail.terms.items():
                sub = self._monomial_nf(j - self.ybound + c2)
                for (i2, j2), c3 in sub.items():
                    key = (i2 + a, j2)
                    cur = result.get(key, K.zero)
                    new = K.add(cur, K.mul(coeff, c3))
                    if K.is_zero(new):
                        result.pop(key, None)
                    else:
                        result[key] = new
        self._nf_cache[j] = result
        return result

    def normal_form(self, poly: WPoly) -> WPoly:
        """The representative with all y-exponents below q + v."""
        K = self.field
        if poly.max_y_exponent() is None or poly.max_y_exponent() < self.ybound:
            return poly
        out: dict[tuple[int, int], object] = {}
        for (i, j), c in poly.terms.items():
            if j < self.ybound:
                cur = out.get((i, j), K.zero)
                new = K.add(cur, c)
                if K.is_zero(new):
                    out.pop((i, j), None)
                else:
                    out[(i, j)] = new
                continue
            for (a, b2), c2 in self._monomial_nf(j).items():
                key = (a + i, b2)
                cur = out.get(key, K.zero)
                new = K.add(cur, K.mul(c, c2))
                if K.is_zero(new):
                    out.pop(key, None)
                else:
                    out[key] = new
        return WPoly(self.field, self.q, self.p, out)

    # ------------------------------------------------------------------
    # graded pieces

    def graded_piece(self, d: int) -> list:
        """Sorted monomial k-basis of R_d, as (i, j) pairs with j < q + v."""
        cached = self._piece_cache.get(d)
        if cached is None:
            cached = self._lattice_points(d, self.ybound - 1)
            self._piece_cache[d] = cached
        return cached

    def s_piece(self, d: int) -> list:
        """Sorted monomial basis of the ambient polynomial ring in degree d."""
        cached = self._s_piece_cache.get(d)
        if cached is None:
            cached = self._lattice_points(d, None)
            self._s_piece_cache[d] = cached
        return cached

    def _lattice_points(self, d: int, jmax: int | None) -> list:
        if d < 0:
            return []
        top = d // self.p
        if jmax is not None:
            top = min(top, jmax)
        out = []
        for j in range(top + 1):
            rest = d - self.p * j
            if rest % self.q == 0:
                out.append((rest // self.q, j))
        out.sort(key=lambda ij: (ij[1], ij[0]))
        return out

    def piece_dim(self, d: int) -> int:
        return len(self.graded_piece(d))

    def hilbert_coefficient(self, d: int) -> int:
        """Coefficient of T^d in (1 - T^deg(g)) / ((1 - T^q)(1 - T^p))."""
        return len(self.s_piece(d)) - len(self.s_piece(d - self.deg_g))

    def piece_coords(self, poly: WPoly, d: int) -> list:
        """Coordinates of a normal-form polynomial in the basis of R_d."""
        K = self.field
        basis = self.graded_piece(d)
        if poly.is_zero():
            return [K.zero] * len(basis)
        if poly.degree != d:
            raise InputError("degree mismatch in piece coordinates")
        index = {key: t for t, key in enumerate(basis)}
        coords = [K.zero] * len(basis)
        for key, c in poly.terms.items():
            coords[index[key]] = c
        return coords

    # ------------------------------------------------------------------
    # zerodivisor testing via the binary-form gcd

    def _squarefree(self, gpoly: WPoly) -> bool:
        i0, j0, stripped = _strip_monomial(gpoly)
        if i0 > 1 or j0 > 1:
            return False
        if stripped.degree == 0:
            return True
        coeffs = _dehomogenized_form(stripped, self.p, self.q)
        K = self.field
        deriv = [K.mul(K(t), coeffs[t]) for t in range(1, len(coeffs))]
        return _univariate_gcd_degree(coeffs, deriv, K) <= 0

    def is_nonzerodivisor(self, poly: WPoly) -> bool:
        """Whether the class of poly in R is a nonzerodivisor.

        Associated primes of R all have height one (hypersurface), so the
        class is a nonzerodivisor exactly when poly shares no irreducible
        factor with g.  Weighted-homogeneous factors other than x and y
        biject with factors of the dehomogenized binary form, so a
        univariate gcd decides this without factoring.
        """
        nf = self.normal_form(poly)
        if nf.is_zero():
            return False
        gi, gj, gstripped = _strip_monomial(self.g)
        ri, rj, rstripped = _strip_monomial(nf)
        if gi >= 1 and ri >= 1:
            return False
        if gj >= 1 and rj >= 1:
            return False
        if gstripped.degree == 0 or rstripped.degree == 0:
            return True
        gform = _dehomogenized_form(gstripped, self.p, self.q)
        rform = _dehomogenized_form(rstripped, self.p, self.q)
        return _univariate_gcd_degree(gform, rform, self.field) <= 0

    # ------------------------------------------------------------------
    # membership in R for fractions

    def q_membership(self, num: WPoly, den: WPoly):
        """Solve r * den = num in R; returns the unique normal form or None.

        The denominator must be a nonzerodivisor, which also makes the
        solution unique when it exists.
        """
        if not self.is_nonzerodivisor(den):
            raise InputError("denominator is a zero divisor")
        num = self.normal_form(num)
        if num.is_zero():
            return self.zero_poly()
        d = num.degree - den.degree
        if d < 0:
            return None
        basis = self.graded_piece(d)
        if not basis:
            return None
        columns = []
        for (i, j) in basis:
            prod = self.normal_form(den.shift_monomial(i, j))
            columns.append(self.piece_coords(prod, num.degree))
        rows = [[col[r] for col in columns] for r in range(len(columns[0]))]
        rhs = self.piece_coords(num, num.degree)
        sol = solve_dense(rows, rhs, self.field)
        if sol is None:
            return None
        terms = {basis[t]: c for t, c in enumerate(sol) if not self.field.is_zero(c)}
        return WPoly(self.field, self.q, self.p, terms)

    def describe(self) -> dict:
        return {
            "field": repr(self.field),
            "p": self.p,
            "q": self.q,
            "b": self.field.to_str(self.b),
            "f": self.f.to_string(),
            "v": self.v,
            "g": self.g.to_string(),
            "deg_g": self.deg_g,
            "gamma_degree": self.gamma_degree,
            "reduced": self.is_reduced,
            "m": self.m,
            "n": self.n,
        }

    def __repr__(self):
        return (f"HypersurfaceRing({self.field!r}, p={self.p}, q={self.q}, "
                f"b={self.field.to_str(self.b)}, f={self.f.to_string()})")


class QElement:
    """An element of the total quotient ring, as an exact fraction.

    The numerator is homogeneous and the denominator a homogeneous
    nonzerodivisor, so equality, arithmetic, and membership in R are all
    decided exactly.  Branch images are cached by the branch module.
    """

    __slots__ = ("ring", "num", "den", "_image_cache", "_in_ring_cache")

    def __init__(self, ring: HypersurfaceRing, num: WPoly, den: WPoly):
        if den.is_zero() or not ring.is_nonzerodivisor(den):
            raise InputError("denominator is a zero divisor")
        self.ring = ring
        self.num = ring.normal_form(num)
        self.den = ring.normal_form(den)
        self._image_cache: dict = {}
        self._in_ring_cache = ("unset",)

    @property
    def degree(self):
        if self.num.is_zero():
            return None
        return self.num.degree - self.den.degree

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def in_ring(self):
        """The element of R this fraction equals, in normal form, or None."""
        if self._in_ring_cache == ("unset",):
            self._in_ring_cache = self.ring.q_membership(self.num, self.den)
        return self._in_ring_cache

    def __mul__(self, other):
        if isinstance(other, QElement):
            return QElement(self.ring, self.num * other.num, self.den * other.den)
        if isinstance(other, WPoly):
            return QElement(self.ring, self.num * other, self.den)
        return QElement(self.ring, self.num * other, self.den)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, QElement):
            raise TypeError("can only add QElements")
        return QElement(self.ring,
                        self.num * other.den + other.num * self.den,
                        self.den * other.den)

    def __neg__(self):
        return QElement(self.ring, -self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, QElement):
            return NotImplemented
        cross = self.num * other.den - other.num * self.den
        return self.ring.normal_form(cross).is_zero()

    def __hash__(self):
        raise TypeError("QElement is unhashable")

    def to_string(self) -> str:
        return f"({self.num.to_string()})/({self.den.to_string()})"

    def __repr__(self):
        return f"QElement({self.to_string()})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def random_ring(rng, field=QQ, with_ideal=True):
    """A random valid curve instance whose branches split over the field.

    The binomial coefficient is +/-1 chosen so that c^p = -1/b has a
    rational root (p odd allows b = 1, otherwise b = -1), keeping every
    branch parametrizable without extensions.  For v < q homogeneity
    forces f = y^v, so f is drawn from {1, y} plus, for odd p, the
    two-branch shape y^q - b x^p.
    """
    pairs = [(3, 4), (3, 5), (3, 7), (4, 5), (4, 7), (5, 6), (5, 7), (6, 7),
             (4, 3), (5, 3), (7, 3), (5, 4), (7, 4), (7, 5), (7, 6)]
    p, q = pairs[rng.randrange(len(pairs))]
    b = 1 if p % 2 == 1 else -1
    choices = ["1*x^0*y^0", "1*x^0*y^1"]
    if p % 2 == 1:
        # b = 1 for odd p, so this is y^q - x^p, coprime to b x^p + y^q
        choices.append(f"1*x^0*y^{q}-1*x^{p}*y^0")
    f = choices[rng.randrange(len(choices))]
    kwargs = {}
    if with_ideal:
        kwargs["m"] = rng.randrange(1, p - 1)
        kwargs["n"] = rng.randrange(2, q)
    return HypersurfaceRing(field, p, q, b, f, **kwargs)
