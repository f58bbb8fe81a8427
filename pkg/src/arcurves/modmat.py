"""Graded matrices, matrix factorizations, modules, and hom spaces.

Conventions used throughout:

  * A graded matrix A carries row degrees w and column degrees u, and
    entry (i, j) is homogeneous of degree u[j] - w[i] (or zero).
  * A presents the module cok(A) with generator degrees w and relation
    degrees u, i.e. A maps F(u) into F(w).
  * A homomorphism of degree d from cok(A) to cok(B) is a matrix H with
    rows B.rows and columns A.rows + d, sending the j-th generator to
    sum_i H[i][j] times the i-th generator of the target.
  * A matrix factorization of g is a pair (phi, psi) with
    phi psi = g Id and psi phi = g Id exactly over the polynomial ring.

Everything is exact; all solved systems go through canonical RREF, so
identical input yields identical output.
"""

from __future__ import annotations

import random

import sympy

from .errors import (CertificationError, FieldTooSmallError,
                     InconclusiveSplitError, InputError, VerificationError)
from .linalg import SparseRREF, kernel_dense, rank_dense, solve_dense, \
    solve_sparse_system
from .ring import HypersurfaceRing, WPoly


class GradedMatrix:
    """Matrix of weighted-homogeneous polynomials with degree bookkeeping."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: HypersurfaceRing, rows, cols, entries):
        self.ring = ring
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        ents = []
        for i in range(len(self.rows)):
            row = []
            for j in range(len(self.cols)):
                e = entries[i][j]
                if not e.is_zero() and e.degree != self.cols[j] - self.rows[i]:
                    raise InputError(
                        f"entry ({i},{j}) has degree {e.degree}, expected "
                        f"{self.cols[j] - self.rows[i]}")
                row.append(e)
            ents.append(tuple(row))
        self.entries = tuple(ents)

    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, ring, rows, cols):
        z = ring.zero_poly()
        return cls(ring, rows, cols, [[z] * len(cols) for _ in rows])

    @classmethod
    def identity(cls, ring, degs):
        one = ring.one()
        z = ring.zero_poly()
        ents = [[one if i == j else z for j in range(len(degs))]
                for i in range(len(degs))]
        return cls(ring, degs, degs, ents)

    @classmethod
    def scalar(cls, ring, degs, value):
        c = ring.monomial(0, 0, value)
        z = ring.zero_poly()
        ents = [[c if i == j else z for j in range(len(degs))]
                for i in range(len(degs))]
        return cls(ring, degs, degs, ents)

    def shift(self, s: int) -> "GradedMatrix":
        return GradedMatrix(self.ring, [r + s for r in self.rows],
                            [c + s for c in self.cols], self.entries)

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise InputError("degree vectors differ in matrix sum")
        ents = [[self.entries[i][j] + other.entries[i][j]
                 for j in range(len(self.cols))] for i in range(len(self.rows))]
        return GradedMatrix(self.ring, self.rows, self.cols, ents)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        ents = [[-e for e in row] for row in self.entries]
        return GradedMatrix(self.ring, self.rows, self.cols, ents)

    def scale(self, value):
        ents = [[e * value for e in row] for row in self.entries]
        return GradedMatrix(self.ring, self.rows, self.cols, ents)

    def mul(self, other: "GradedMatrix", shift=None) -> "GradedMatrix":
        """Exact product over the polynomial ring.

        The column degrees of self must exceed the row degrees of other
        by one constant (the composition shift); the result's columns
        are other's columns raised by that constant.
        """
        if len(self.cols) != len(other.rows):
            raise InputError("inner dimensions differ in matrix product")
        if len(self.cols) == 0:
            c0 = shift or 0
        else:
            diffs = {self.cols[t] - other.rows[t] for t in range(len(self.cols))}
            if len(diffs) != 1:
                raise InputError("incompatible degree vectors in matrix product")
            c0 = diffs.pop()
        z = self.ring.zero_poly()
        ents = []
        for i in range(len(self.rows)):
            row = []
            for j in range(len(other.cols)):
                acc = z
                for t in range(len(self.cols)):
                    a = self.entries[i][t]
                    b = other.entries[t][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            ents.append(row)
        return GradedMatrix(self.ring, self.rows,
                            [c + c0 for c in other.cols], ents)

    def nf(self) -> "GradedMatrix":
        ents = [[self.ring.normal_form(e) for e in row] for row in self.entries]
        return GradedMatrix(self.ring, self.rows, self.cols, ents)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def is_zero_mod_g(self) -> bool:
        return self.nf().is_zero()

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and all(self.entries[i][j] == other.entries[i][j]
                        for i in range(len(self.rows))
                        for j in range(len(self.cols))))

    def __hash__(self):
        raise TypeError("GradedMatrix is unhashable")

    def eq_mod_g(self, other) -> bool:
        if len(self.rows) != len(other.rows) or len(self.cols) != len(other.cols):
            return False
        same = ([c - r for r in self.rows for c in self.cols] ==
                [c - r for r in other.rows for c in other.cols])
        if not same:
            return False
        diff = [[self.entries[i][j] - other.entries[i][j]
                 for j in range(len(self.cols))] for i in range(len(self.rows))]
        return all(self.ring.normal_form(e).is_zero()
                   for row in diff for e in row)

    def div_exact_g(self) -> "GradedMatrix":
        """Entrywise exact quotient by g; column degrees drop by deg g."""
        g = self.ring.g
        ents = [[e.div_exact(g) for e in row] for row in self.entries]
        return GradedMatrix(self.ring, self.rows,
                            [c - self.ring.deg_g for c in self.cols], ents)

    def is_reduced(self) -> bool:
        """No entry is a unit, i.e. all entries lie in the maximal ideal."""
        return all(e.is_zero() or e.degree > 0
                   for row in self.entries for e in row)

    def entry_strings(self):
        return [[e.to_string() for e in row] for row in self.entries]

    def __repr__(self):
        return f"GradedMatrix(rows={self.rows}, cols={self.cols})"


def block_matrix(ring, blocks, rows, cols) -> GradedMatrix:
    """Assemble a matrix from a 2D grid of GradedMatrix blocks (None = 0).

    rows and cols are the degree vectors of the result; the blocks only
    have to match entrywise degrees, so uniformly shifted copies of a
    block are accepted as they are.
    """
    z = ring.zero_poly()
    heights = [next(len(b.rows) for b in brow if b is not None)
               for brow in blocks]
    ncolblocks = len(blocks[0])
    widths = [next(len(blocks[bi][bj].cols) for bi in range(len(blocks))
                   if blocks[bi][bj] is not None)
              for bj in range(ncolblocks)]
    total_r, total_c = sum(heights), sum(widths)
    if total_r != len(rows) or total_c != len(cols):
        raise InputError("block grid does not match the degree vectors")
    ents = [[z] * total_c for _ in range(total_r)]
    r0 = 0
    for bi, brow in enumerate(blocks):
        c0 = 0
        for bj in range(ncolblocks):
            blk = brow[bj]
            if blk is not None:
                for i in range(heights[bi]):
                    for j in range(widths[bj]):
                        ents[r0 + i][c0 + j] = blk.entries[i][j]
            c0 += widths[bj]
        r0 += heights[bi]
    return GradedMatrix(ring, rows, cols, ents)


# ----------------------------------------------------------------------
# the graded linear solver


def solve_graded_system(ring, unknowns, equations, mode="mod_g",
                        want_kernel=False):
    """Solve linear matrix equations over R (mod g) or over S (exact).

    unknowns: dict name -> (row_degrees, col_degrees); the unknown entry
    (i, j) ranges over the monomial basis of its degree (the normal-form
    basis for mode "mod_g", the full polynomial piece for mode "exact").

    equations: list of (terms, const) where each term ("L", C, name)
    contributes C X, each ("R", C, name) contributes X C, and const is a
    GradedMatrix or None.  Every equation asserts that the sum vanishes.

    Returns (solution, kernel): solution maps names to GradedMatrix (the
    canonical particular solution, free variables zero) or is None when
    the system is inconsistent; kernel lists such dicts spanning the
    homogeneous solutions (only when want_kernel).
    """
    basis_of = ring.graded_piece if mode == "mod_g" else ring.s_piece
    K = ring.field

    var_index: dict = {}
    var_list = []
    for name in sorted(unknowns):
        rdegs, cdegs = unknowns[name]
        for i in range(len(rdegs)):
            for j in range(len(cdegs)):
                for mono in basis_of(cdegs[j] - rdegs[i]):
                    var_index[(name, i, j, mono)] = len(var_list)
                    var_list.append((name, i, j, mono))
    nvars = len(var_list)
    const_index = nvars

    sys_rows = []
    for terms, const in equations:
        erows, ecols = _equation_shape(unknowns, terms, const)
        for i in range(len(erows)):
            for j in range(len(ecols)):
                ed = ecols[j] - erows[i]
                out_pos = {mono: t for t, mono in enumerate(basis_of(ed))}
                cells = [dict() for _ in out_pos]

                def _accumulate(poly, vk):
                    for mkey, mval in poly.terms.items():
                        cell = cells[out_pos[mkey]]
                        new = K.add(cell.get(vk, K.zero), mval)
                        if K.is_zero(new):
                            cell.pop(vk, None)
                        else:
                            cell[vk] = new

                for side, coeff, name in terms:
                    rdegs, cdegs = unknowns[name]
                    if side == "L":
                        for t in range(len(coeff.cols)):
                            c = coeff.entries[i][t]
                            if c.is_zero():
                                continue
                            for mono in basis_of(cdegs[j] - rdegs[t]):
                                prod = c.shift_monomial(*mono)
                                if mode == "mod_g":
                                    prod = ring.normal_form(prod)
                                _accumulate(prod, var_index[(name, t, j, mono)])
                    else:
                        for t in range(len(coeff.rows)):
                            c = coeff.entries[t][j]
                            if c.is_zero():
                                continue
                            for mono in basis_of(cdegs[t] - rdegs[i]):
                                prod = c.shift_monomial(*mono)
                                if mode == "mod_g":
                                    prod = ring.normal_form(prod)
                                _accumulate(prod, var_index[(name, i, t, mono)])
                if const is not None:
                    e = const.entries[i][j]
                    if mode == "mod_g":
                        e = ring.normal_form(e)
                    _accumulate(e, const_index)
                for cell in cells:
                    if cell:
                        sys_rows.append(cell)

    particular, kernel = solve_sparse_system(sys_rows, nvars, K,
                                             const_index=const_index)

    def materialize(vec: dict):
        staged = {}
        for name in sorted(unknowns):
            rdegs, cdegs = unknowns[name]
            staged[name] = (rdegs, cdegs,
                            [[dict() for _ in cdegs] for _ in rdegs])
        for vk, value in vec.items():
            if vk == const_index:
                continue
            name, i, j, mono = var_list[vk]
            staged[name][2][i][j][mono] = value
        result = {}
        for name, (rdegs, cdegs, ents) in staged.items():
            polys = [[WPoly(K, ring.q, ring.p, ents[i][j])
                      for j in range(len(cdegs))] for i in range(len(rdegs))]
            result[name] = GradedMatrix(ring, rdegs, cdegs, polys)
        return result

    solution = materialize(particular) if particular is not None else None
    kern = [materialize(v) for v in kernel] if want_kernel else []
    return solution, kern


def _equation_shape(unknowns, terms, const):
    shapes = []
    for side, coeff, name in terms:
        rdegs, cdegs = unknowns[name]
        if side == "L":
            if len(coeff.cols) != len(rdegs):
                raise InputError("L-term inner dimension mismatch")
            c0 = 0
            if len(coeff.cols):
                diffs = {coeff.cols[t] - rdegs[t] for t in range(len(rdegs))}
                if len(diffs) != 1:
                    raise InputError("L-term degree vectors incompatible")
                c0 = diffs.pop()
            shapes.append((coeff.rows, tuple(c + c0 for c in cdegs)))
        elif side == "R":
            if len(coeff.rows) != len(cdegs):
                raise InputError("R-term inner dimension mismatch")
            c0 = 0
            if len(coeff.rows):
                diffs = {coeff.rows[t] - cdegs[t] for t in range(len(cdegs))}
                if len(diffs) != 1:
                    raise InputError("R-term degree vectors incompatible")
                c0 = -diffs.pop()
            shapes.append((rdegs, tuple(c + c0 for c in coeff.cols)))
        else:
            raise InputError(f"unknown term side {side!r}")
    if const is not None:
        shapes.append((const.rows, const.cols))
    base = shapes[0]
    base_pattern = [c - r for r in base[0] for c in base[1]]
    for sh in shapes[1:]:
        if [c - r for r in sh[0] for c in sh[1]] != base_pattern:
            raise InputError("equation terms have incompatible entry degrees")
    return base


# ----------------------------------------------------------------------
# matrix factorizations


class MatrixFactorization:
    """A pair (phi, psi) with phi psi = psi phi = g Id, checked exactly."""

    def __init__(self, phi: GradedMatrix, psi: GradedMatrix):
        ring = phi.ring
        D = ring.deg_g
        if psi.rows != phi.cols or psi.cols != tuple(r + D for r in phi.rows):
            raise InputError("degree vectors do not form a factorization pair")
        self.ring = ring
        self.phi = phi
        self.psi = psi
        if not phi.mul(psi) == g_identity(ring, phi.rows):
            raise VerificationError("phi psi is not g times the identity")
        if not psi.mul(phi.shift(D)) == g_identity(ring, phi.cols):
            raise VerificationError("psi phi is not g times the identity")

    def is_reduced(self) -> bool:
        return self.phi.is_reduced() and self.psi.is_reduced()

    def cok(self, label=None) -> "GradedModule":
        return GradedModule(self.ring, self.phi, mf=self, label=label)

    def syz(self) -> "MatrixFactorization":
        return MatrixFactorization(self.psi, self.phi.shift(self.ring.deg_g))

    def syz_inverse(self) -> "MatrixFactorization":
        return MatrixFactorization(self.psi.shift(-self.ring.deg_g), self.phi)

    def __repr__(self):
        return f"MatrixFactorization(rows={self.phi.rows}, cols={self.phi.cols})"


def g_identity(ring, degs) -> GradedMatrix:
    z = ring.zero_poly()
    ents = [[ring.g if i == j else z for j in range(len(degs))]
            for i in range(len(degs))]
    return GradedMatrix(ring, degs, [d + ring.deg_g for d in degs], ents)


def mf_check(phi: GradedMatrix, psi: GradedMatrix) -> bool:
    """Whether (phi, psi) multiplies to g Id exactly over the polynomial ring."""
    try:
        MatrixFactorization(phi, psi)
        return True
    except (InputError, VerificationError):
        return False


def mf_complete(A: GradedMatrix) -> MatrixFactorization:
    """Complete a square presentation matrix to a matrix factorization.

    Solves A B = g Id exactly over S; since S is a domain and A becomes
    injective, B A = g Id follows (and is verified by the constructor).
    """
    ring = A.ring
    if len(A.rows) != len(A.cols):
        raise InputError("only square matrices can be completed")
    unknowns = {"B": (A.cols, tuple(r + ring.deg_g for r in A.rows))}
    const = g_identity(ring, A.rows)
    sol, _ = solve_graded_system(ring, unknowns,
                                 [([("L", A, "B")], -const)], mode="exact")
    if sol is None:
        raise CertificationError(
            "presentation does not complete to a factorization of g")
    return MatrixFactorization(A, sol["B"])


def mf_from_ideal(ring: HypersurfaceRing) -> MatrixFactorization:
    """The factorization presenting the two-generated ideal (x^m, y^n).

    Generators sit in degrees (m q, n p); the pair is checked exactly and
    the cokernel's Hilbert function is compared against the ideal
    degreewise.
    """
    m, n = ring.m, ring.n
    if m is None or n is None:
        raise InputError("ring instance carries no (m, n) ideal data")
    q, v = ring.q, ring.v
    D = ring.deg_g
    s = n * ring.p + m * q
    corner = (ring.g - ring.monomial(0, q + v)).div_exact_x(m)
    phi = GradedMatrix(ring, (m * q, n * ring.p), (D, s), [
        [corner, -ring.monomial(0, n)],
        [ring.monomial(0, q + v - n), ring.monomial(m, 0)],
    ])
    psi = GradedMatrix(ring, (D, s), (m * q + D, n * ring.p + D), [
        [ring.monomial(m, 0), ring.monomial(0, n)],
        [-ring.monomial(0, q + v - n), corner],
    ])
    mf = MatrixFactorization(phi, psi)
    module = mf.cok(label="I")
    for d in range(0, 3 * D + 1):
        if module.piece_dim(d) != _ideal_piece_dim(ring, m, n, d):
            raise VerificationError(
                f"cok phi disagrees with the ideal (x^m, y^n) in degree {d}")
    return mf


def _ideal_piece_dim(ring, m, n, d) -> int:
    rr = SparseRREF(ring.field)
    pos = {mono: t for t, mono in enumerate(ring.graded_piece(d))}
    for gen, gdeg in ((ring.monomial(m, 0), m * ring.q),
                      (ring.monomial(0, n), n * ring.p)):
        for mono in ring.graded_piece(d - gdeg):
            prod = ring.normal_form(gen.shift_monomial(*mono))
            rr.insert({pos[key]: c for key, c in prod.terms.items()})
    return rr.rank


# ----------------------------------------------------------------------
# graded modules


class GradedModule:
    """A finitely presented graded R-module, given by a presentation matrix."""

    def __init__(self, ring: HypersurfaceRing, matrix: GradedMatrix,
                 mf: MatrixFactorization | None = None, label=None):
        self.ring = ring
        self.matrix = matrix.nf()
        self.gens = matrix.rows
        self.rels = matrix.cols
        self.mf = mf
        self.label = label
        self._ambient_cache: dict = {}
        self._image_cache: dict = {}
        self._hom_cache: dict = {}

    # -- graded pieces -------------------------------------------------

    def ambient_basis(self, d: int):
        """Basis of the degree-d piece of the free cover, as (gen, mono)."""
        cached = self._ambient_cache.get(d)
        if cached is None:
            cached = []
            for i, w in enumerate(self.gens):
                for mono in self.ring.graded_piece(d - w):
                    cached.append((i, mono))
            self._ambient_cache[d] = cached
        return cached

    def _image_rref(self, d: int) -> SparseRREF:
        rr = self._image_cache.get(d)
        if rr is None:
            rr = SparseRREF(self.ring.field)
            pos = {key: t for t, key in enumerate(self.ambient_basis(d))}
            for j, u in enumerate(self.rels):
                for mono in self.ring.graded_piece(d - u):
                    vec = {}
                    for i in range(len(self.gens)):
                        e = self.matrix.entries[i][j]
                        if e.is_zero():
                            continue
                        prod = self.ring.normal_form(e.shift_monomial(*mono))
                        for key, c in prod.terms.items():
                            vec[pos[(i, key)]] = c
                    rr.insert(vec)
            self._image_cache[d] = rr
        return rr

    def piece_dim(self, d: int) -> int:
        return len(self.ambient_basis(d)) - self._image_rref(d).rank

    def nonpivot_basis(self, d: int):
        """Indices into the ambient basis giving a basis of M_d."""
        amb = self.ambient_basis(d)
        pivots = set(self._image_rref(d).pivots)
        return [t for t in range(len(amb)) if t not in pivots]

    def element_coords(self, polys, d: int) -> dict:
        """Canonical coordinates in M_d of a tuple of normal-form polys."""
        pos = {key: t for t, key in enumerate(self.ambient_basis(d))}
        vec = {}
        K = self.ring.field
        for i, poly in enumerate(polys):
            if poly.is_zero():
                continue
            if poly.degree != d - self.gens[i]:
                raise InputError("element component has wrong degree")
            for key, c in poly.terms.items():
                t = pos[(i, key)]
                new = K.add(vec.get(t, K.zero), c)
                if K.is_zero(new):
                    vec.pop(t, None)
                else:
                    vec[t] = new
        return self._image_rref(d).reduce(vec)

    def shift(self, s: int) -> "GradedModule":
        mf = None
        if self.mf is not None:
            mf = MatrixFactorization(self.mf.phi.shift(-s),
                                     self.mf.psi.shift(-s))
        return GradedModule(self.ring, self.matrix.shift(-s), mf=mf,
                            label=self.label)

    def syz(self) -> "GradedModule":
        if self.mf is None:
            raise InputError("syzygy requires a matrix factorization backing")
        return self.mf.syz().cok(label=_wrap_label(self.label, "syz"))

    def syz_inverse(self) -> "GradedModule":
        if self.mf is None:
            raise InputError("cosyzygy requires a matrix factorization backing")
        return self.mf.syz_inverse().cok(label=_wrap_label(self.label, "cosyz"))

    def describe(self) -> dict:
        return {
            "label": self.label,
            "generator_degrees": list(self.gens),
            "relation_degrees": list(self.rels),
            "presentation": self.matrix.entry_strings(),
        }

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"GradedModule{tag}(gens={self.gens})"


def _wrap_label(label, op):
    return f"{op}({label})" if label else None


def free_module(ring, shifts=(0,)) -> GradedModule:
    mat = GradedMatrix(ring, tuple(shifts), (), [[] for _ in shifts])
    return GradedModule(ring, mat, label="free")


# ----------------------------------------------------------------------
# hom spaces


class GradedHom:
    """A homomorphism cok(A) -> cok(B) of fixed degree, with its matrix."""

    __slots__ = ("source", "target", "degree", "H", "coords")

    def __init__(self, source, target, degree, H, coords):
        self.source = source
        self.target = target
        self.degree = degree
        self.H = H
        self.coords = coords

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other):
        if not isinstance(other, GradedHom):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and self.degree == other.degree and self.coords == other.coords)

    def __hash__(self):
        raise TypeError("GradedHom is unhashable")

    def compose(self, first: "GradedHom") -> "GradedHom":
        """self after first."""
        if first.target is not self.source:
            raise InputError("composition chain mismatch")
        H = self.H.mul(first.H).nf()
        space = hom_graded(first.source, self.target,
                           self.degree + first.degree)
        return space.from_matrix(H)

    def __add__(self, other):
        if (self.source is not other.source or self.target is not other.target
                or self.degree != other.degree):
            raise InputError("cannot add homs from different spaces")
        space = hom_graded(self.source, self.target, self.degree)
        return space.from_matrix((self.H + other.H).nf())

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, value):
        space = hom_graded(self.source, self.target, self.degree)
        return space.from_matrix(self.H.scale(value).nf())

    def times_monomial(self, i: int, j: int) -> "GradedHom":
        """The hom multiplied by the monomial x^i y^j (degree rises)."""
        ring = self.source.ring
        d = ring.wdeg(i, j)
        ents = [[ring.normal_form(e.shift_monomial(i, j)) for e in row]
                for row in self.H.entries]
        H = GradedMatrix(ring, self.H.rows, [c + d for c in self.H.cols], ents)
        space = hom_graded(self.source, self.target, self.degree + d)
        return space.from_matrix(H)

    def __repr__(self):
        return (f"GradedHom(deg={self.degree}, "
                f"{self.source!r} -> {self.target!r})")


class HomSpace:
    """The k-vector space of degree-d homomorphisms between two modules.

    The basis is canonical: solution matrices are reduced modulo the
    presentation-artifact subspace (columns moved by the target's
    relations) and put in reduced row echelon form.
    """

    def __init__(self, source: GradedModule, target: GradedModule, degree: int):
        self.source = source
        self.target = target
        self.degree = degree
        ring = source.ring
        K = ring.field
        self._entry_index = {}
        entry_list = []
        for i, wt in enumerate(target.gens):
            for j, ws in enumerate(source.gens):
                for mono in ring.graded_piece(ws + degree - wt):
                    self._entry_index[(i, j, mono)] = len(entry_list)
                    entry_list.append((i, j, mono))
        self._entry_list = entry_list

        # Presentation artifacts: matrices of the form B C with C over R.
        self._w0 = SparseRREF(K)
        B = target.matrix
        for j, u in enumerate(target.rels):
            for l, ws in enumerate(source.gens):
                for mono in ring.graded_piece(ws + degree - u):
                    vec = {}
                    for i in range(len(target.gens)):
                        e = B.entries[i][j]
                        if e.is_zero():
                            continue
                        prod = ring.normal_form(e.shift_monomial(*mono))
                        for key, c in prod.terms.items():
                            vec[self._entry_index[(i, l, key)]] = c
                    self._w0.insert(vec)

        unknowns = {
            "H": (target.gens, tuple(w + degree for w in source.gens)),
            "K": (target.rels, tuple(u + degree for u in source.rels)),
        }
        eq = ([("R", source.matrix, "H"), ("L", -B, "K")], None)
        _, kernel = solve_graded_system(ring, unknowns, [eq], mode="mod_g",
                                        want_kernel=True)
        reduced = SparseRREF(K)
        for vec in kernel:
            reduced.insert(self._w0.reduce(self._matrix_coords(vec["H"])))
        self._span = reduced
        self.basis = []
        for piv in sorted(reduced.pivots):
            row = reduced.pivots[piv]
            self.basis.append(GradedHom(source, target, degree,
                                        self._matrix_from_coords(row),
                                        _freeze(row)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _matrix_coords(self, H: GradedMatrix) -> dict:
        vec = {}
        for i in range(len(self.target.gens)):
            for j in range(len(self.source.gens)):
                for key, c in H.entries[i][j].terms.items():
                    vec[self._entry_index[(i, j, key)]] = c
        return vec

    def _matrix_from_coords(self, coords: dict) -> GradedMatrix:
        ring = self.source.ring
        ents = [[dict() for _ in self.source.gens] for _ in self.target.gens]
        for t, c in coords.items():
            i, j, mono = self._entry_list[t]
            ents[i][j][mono] = c
        polys = [[WPoly(ring.field, ring.q, ring.p, ents[i][j])
                  for j in range(len(self.source.gens))]
                 for i in range(len(self.target.gens))]
        return GradedMatrix(ring, self.target.gens,
                            tuple(w + self.degree for w in self.source.gens),
                            polys)

    def coords_of(self, H: GradedMatrix):
        return _freeze(self._w0.reduce(self._matrix_coords(H.nf())))

    def from_matrix(self, H: GradedMatrix) -> GradedHom:
        coords = self.coords_of(H)
        if not self._span.contains(dict(coords)):
            raise InputError("matrix does not define a homomorphism here")
        return GradedHom(self.source, self.target, self.degree,
                         self._matrix_from_coords(dict(coords)), coords)

    def zero(self) -> GradedHom:
        z = GradedMatrix.zero(self.source.ring, self.target.gens,
                              tuple(w + self.degree for w in self.source.gens))
        return GradedHom(self.source, self.target, self.degree, z, ())

    def expand(self, hom: GradedHom):
        """Coefficients of a hom of this space in the canonical basis."""
        vec = dict(hom.coords)
        K = self.source.ring.field
        out = []
        for b in self.basis:
            piv = min(dict(b.coords))
            out.append(vec.get(piv, K.zero))
        return out

    def __repr__(self):
        return (f"HomSpace(dim={self.dim}, deg={self.degree}, "
                f"{self.source!r} -> {self.target!r})")


def _freeze(vec: dict):
    return tuple(sorted(vec.items()))


def hom_graded(source: GradedModule, target: GradedModule,
               degree: int) -> HomSpace:
    key = (id(target), degree)
    cached = source._hom_cache.get(key)
    if cached is not None and cached[0] is target:
        return cached[1]
    space = HomSpace(source, target, degree)
    source._hom_cache[key] = (target, space)
    return space


def identity_hom(M: GradedModule) -> GradedHom:
    return hom_graded(M, M, 0).from_matrix(GradedMatrix.identity(M.ring, M.gens))


def hom_from_coefficients(space: HomSpace, coeffs) -> GradedHom:
    K = space.source.ring.field
    H = GradedMatrix.zero(space.source.ring, space.target.gens,
                          tuple(w + space.degree for w in space.source.gens))
    for c, b in zip(coeffs, space.basis):
        if not K.is_zero(c):
            H = H + b.H.scale(c)
    return space.from_matrix(H)


# ----------------------------------------------------------------------
# stable (mod frees) endomorphisms, by direct linear algebra


def stably_zero_bruteforce(h: GradedHom) -> bool:
    """Whether h factors through a free module, by direct linear algebra.

    A map between MCM modules factors through some free module exactly
    when it factors through the free cover of its target: H = L + B C
    with L A = 0 mod g, where A and B present source and target.
    """
    M, N, d = h.source, h.target, h.degree
    ring = M.ring
    unknowns = {
        "L": (N.gens, tuple(w + d for w in M.gens)),
        "C": (N.rels, tuple(w + d for w in M.gens)),
    }
    ident = GradedMatrix.identity(ring, tuple(w + d for w in M.gens))
    eqs = [
        ([("R", M.matrix, "L")], None),
        ([("R", ident, "L"), ("L", N.matrix, "C")], -h.H),
    ]
    sol, _ = solve_graded_system(ring, unknowns, eqs, mode="mod_g")
    return sol is not None


def stably_zero_subspace(M: GradedModule, d: int) -> SparseRREF:
    """RREF span (in End-coordinates) of endomorphisms through frees."""
    space = hom_graded(M, M, d)
    ring = M.ring
    unknowns = {"L": (M.gens, tuple(w + d for w in M.gens))}
    _, kernel = solve_graded_system(ring, unknowns,
                                    [([("R", M.matrix, "L")], None)],
                                    mode="mod_g", want_kernel=True)
    span = SparseRREF(ring.field)
    for vec in kernel:
        span.insert(dict(space.coords_of(vec["L"])))
    return span


def stable_end_dim(M: GradedModule, d: int) -> int:
    """Dimension of degree-d endomorphisms modulo those through frees."""
    return hom_graded(M, M, d).dim - stably_zero_subspace(M, d).rank


def ext1_dim(mf: MatrixFactorization, N: GradedModule, d: int) -> int:
    """dim Ext^1(cosyzygy of cok phi, N) in degree d.

    The cosyzygy cok(psi(-D)) has the 2-periodic free resolution
    ... -> F(cols) --phi--> F(rows) --psi(-D)--> F(cols - D), so Ext^1
    in degree d is ker(-o phi) / im(-o psi(-D)) inside Hom(F(rows), N)_d.
    """
    ring = mf.ring
    K = ring.field
    phi = mf.phi
    psi_m = mf.psi.shift(-ring.deg_g)

    mid_basis = []
    for i, w in enumerate(phi.rows):
        for t in N.nonpivot_basis(w + d):
            mid_basis.append((i, t))
    pos_mid = {key: t for t, key in enumerate(mid_basis)}

    col_ids: dict = {}

    def cid(key):
        t = col_ids.get(key)
        if t is None:
            t = len(col_ids)
            col_ids[key] = t
        return t

    out_rref = SparseRREF(K)
    for i, t in mid_basis:
        gen, mono = N.ambient_basis(phi.rows[i] + d)[t]
        base = [ring.zero_poly()] * len(N.gens)
        base[gen] = ring.monomial(*mono)
        row = {}
        for j in range(len(phi.cols)):
            e = phi.entries[i][j]
            if e.is_zero():
                continue
            polys = [ring.normal_form(e * b) for b in base]
            for tt, c in N.element_coords(polys, phi.cols[j] + d).items():
                row[cid((j, tt))] = c
        out_rref.insert(row)
    rank_out = out_rref.rank

    in_span = SparseRREF(K)
    for j2, u in enumerate(psi_m.rows):
        for t in N.nonpivot_basis(u + d):
            gen, mono = N.ambient_basis(u + d)[t]
            base = [ring.zero_poly()] * len(N.gens)
            base[gen] = ring.monomial(*mono)
            vec = {}
            for jj in range(len(psi_m.cols)):
                e = psi_m.entries[j2][jj]
                if e.is_zero():
                    continue
                polys = [ring.normal_form(e * b) for b in base]
                for tt, c in N.element_coords(polys, psi_m.cols[jj] + d).items():
                    vec[pos_mid[(jj, tt)]] = c
            in_span.insert(vec)
    return len(mid_basis) - rank_out - in_span.rank


# ----------------------------------------------------------------------
# presentation minimization and unit splitting


def _find_unit(ents, rows, cols):
    for i in range(len(rows)):
        for j in range(len(cols)):
            e = ents[i][j]
            if not e.is_zero() and e.degree == 0:
                return i, j
    return None


def _pair_eliminate(a_ents, a_rows, a_cols, b_ents, i, j, field):
    """Clear row i and column j of matrix a around the unit at (i, j).

    b is the partner factorization matrix (or None); row operations on a
    are mirrored as inverse column operations on b and vice versa, which
    keeps both products of the pair unchanged.
    """
    uinv = field.inv(a_ents[i][j].coeff(0, 0))
    for r in range(len(a_rows)):
        if r == i or a_ents[r][j].is_zero():
            continue
        c = a_ents[r][j] * uinv
        # a: row_r -= c row_i;  b: col_i += c col_r.
        for t in range(len(a_cols)):
            a_ents[r][t] = a_ents[r][t] - c * a_ents[i][t]
        if b_ents is not None:
            for s in range(len(b_ents)):
                b_ents[s][i] = b_ents[s][i] + c * b_ents[s][r]
    for t in range(len(a_cols)):
        if t == j or a_ents[i][t].is_zero():
            continue
        c = a_ents[i][t] * uinv
        # a: col_t -= c col_j;  b: row_j += c row_t.
        for r in range(len(a_rows)):
            a_ents[r][t] = a_ents[r][t] - c * a_ents[r][j]
        if b_ents is not None:
            for s in range(len(b_ents[j])):
                b_ents[j][s] = b_ents[j][s] + c * b_ents[t][s]


def _drop(ents, i, j):
    return [[e for t, e in enumerate(row) if t != j]
            for r, row in enumerate(ents) if r != i]


def mf_reduce(mf: MatrixFactorization):
    """Split all trivial blocks off a factorization.

    Returns (reduced factorization or None, free generator degrees):
    a unit in phi is a trivial (1)-block, a unit in psi is a (g)-block
    of phi, i.e. a free summand of cok phi.
    """
    ring = mf.ring
    K = ring.field
    phi_ents = [list(r) for r in mf.phi.entries]
    psi_ents = [list(r) for r in mf.psi.entries]
    phi_rows = list(mf.phi.rows)
    phi_cols = list(mf.phi.cols)
    frees = []
    while True:
        hit = _find_unit(phi_ents, phi_rows, phi_cols)
        if hit is not None:
            i, j = hit
            _pair_eliminate(phi_ents, phi_rows, phi_cols, psi_ents, i, j, K)
            phi_ents = _drop(phi_ents, i, j)
            psi_ents = _drop(psi_ents, j, i)
            del phi_rows[i], phi_cols[j]
            continue
        psi_rows = phi_cols
        psi_cols = [r + ring.deg_g for r in phi_rows]
        hit = _find_unit(psi_ents, psi_rows, psi_cols)
        if hit is not None:
            a, b = hit
            _pair_eliminate(psi_ents, psi_rows, psi_cols, phi_ents, a, b, K)
            psi_ents = _drop(psi_ents, a, b)
            phi_ents = _drop(phi_ents, b, a)
            frees.append(phi_rows[b])
            del phi_rows[b], phi_cols[a]
            continue
        break
    frees.sort()
    if not phi_rows:
        return None, frees
    phi = GradedMatrix(ring, phi_rows, phi_cols, phi_ents)
    psi = GradedMatrix(ring, phi_cols, [r + ring.deg_g for r in phi_rows],
                       psi_ents)
    return MatrixFactorization(phi, psi), frees


def minimize_presentation(A: GradedMatrix):
    """Prune a presentation: unit entries, redundant columns, zero rows.

    Returns (pruned matrix or None, free generator degrees).  The result
    has all entries in the maximal ideal, a minimal relation set, and no
    zero rows; zero rows correspond to free summands and their degrees
    are reported separately.
    """
    ring = A.ring
    K = ring.field
    ents = [[ring.normal_form(e) for e in row] for row in A.entries]
    rows = list(A.rows)
    cols = list(A.cols)
    while True:
        hit = _find_unit(ents, rows, cols)
        if hit is None:
            break
        i, j = hit
        _pair_eliminate(ents, rows, cols, None, i, j, K)
        ents = _drop(ents, i, j)
        del rows[i], cols[j]
        ents = [[ring.normal_form(e) for e in row] for row in ents]

    keep = [j for j in range(len(cols))
            if any(not ents[i][j].is_zero() for i in range(len(rows)))]
    ents = [[row[j] for j in keep] for row in ents]
    cols = [cols[j] for j in keep]

    order = sorted(range(len(cols)), key=lambda j: (cols[j], j))
    kept: list[int] = []
    for j in order:
        if not _column_in_span(ring, ents, rows, cols, kept, j):
            kept.append(j)
    kept.sort()
    ents = [[row[j] for j in kept] for row in ents]
    cols = [cols[j] for j in kept]

    frees = []
    keep_rows = []
    for i in range(len(rows)):
        if any(not e.is_zero() for e in ents[i]):
            keep_rows.append(i)
        else:
            frees.append(rows[i])
    ents = [ents[i] for i in keep_rows]
    rows = [rows[i] for i in keep_rows]
    frees.sort()
    if not rows:
        return None, frees
    return GradedMatrix(ring, rows, cols, ents), frees


def _column_in_span(ring, ents, rows, cols, kept, j) -> bool:
    """Whether column j lies in the R-span of the kept columns in F(rows)."""
    d = cols[j]
    pos = {}
    for i, w in enumerate(rows):
        for mono in ring.graded_piece(d - w):
            pos[(i, mono)] = len(pos)
    target = {}
    for i in range(len(rows)):
        for key, c in ents[i][j].terms.items():
            target[pos[(i, key)]] = c
    span = SparseRREF(ring.field)
    for jj in kept:
        for mono in ring.graded_piece(d - cols[jj]):
            vec = {}
            for i in range(len(rows)):
                e = ents[i][jj]
                if e.is_zero():
                    continue
                prod = ring.normal_form(e.shift_monomial(*mono))
                for key, c in prod.terms.items():
                    vec[pos[(i, key)]] = c
            span.insert(vec)
    return span.contains(target)


# ----------------------------------------------------------------------
# submodules and direct-sum splitting


def submodule_presentation(M: GradedModule, elements, label=None):
    """Present the submodule of M generated by the given elements.

    elements: list of (degree, tuple of normal-form polys over the
    generators of M).  Relations are collected degreewise up to the
    bound max(gens) + deg(g) - 1, which covers every minimal relation
    of a maximal Cohen-Macaulay module; the result's Hilbert function
    is verified degreewise against the span beyond that bound.
    """
    ring = M.ring
    K = ring.field
    D = ring.deg_g

    elems = sorted(elements, key=lambda ev: ev[0])
    gens = []
    for deg, polys in elems:
        if all(poly.is_zero() for poly in polys):
            continue
        if not _element_in_span(M, gens, (deg, polys)):
            gens.append((deg, polys))
    if not gens:
        raise InputError("submodule has no nonzero generators")

    gdegs = tuple(deg for deg, _ in gens)
    bound = max(gdegs) + D - 1
    rel_cols = []
    rel_degs = []
    for d in range(min(gdegs) + 1, bound + 1):
        var_slots = []
        for t, (wdeg, _) in enumerate(gens):
            for mono in ring.graded_piece(d - wdeg):
                var_slots.append((t, mono))
        if not var_slots:
            continue
        rows: dict[int, dict] = {}
        for vk, (t, mono) in enumerate(var_slots):
            polys = [ring.normal_form(pp.shift_monomial(*mono))
                     for pp in gens[t][1]]
            for cc, val in M.element_coords(polys, d).items():
                rows.setdefault(cc, {})[vk] = val
        _, kernel = solve_sparse_system(list(rows.values()), len(var_slots),
                                        K, const_index=None)
        for vec in kernel:
            col = [ring.zero_poly()] * len(gens)
            for vk, val in vec.items():
                t, mono = var_slots[vk]
                col[t] = col[t] + ring.monomial(*mono, coeff=val)
            rel_cols.append(col)
            rel_degs.append(d)

    ents = [[rel_cols[jj][i] for jj in range(len(rel_cols))]
            for i in range(len(gens))]
    A = GradedMatrix(ring, gdegs, tuple(rel_degs), ents)
    pruned, frees = minimize_presentation(A)
    if frees or pruned is None:
        raise CertificationError(
            "submodule presentation found a generator without relations")
    sub = GradedModule(ring, pruned, label=label)
    for d in range(min(gdegs), bound + D + 1):
        if sub.piece_dim(d) != _span_dim(M, gens, d):
            raise CertificationError(
                f"submodule presentation disagrees with its span in degree {d}")
    return sub


def _element_in_span(M: GradedModule, gens, element) -> bool:
    ring = M.ring
    deg, polys = element
    target = M.element_coords(polys, deg)
    if not target:
        return True
    span = SparseRREF(ring.field)
    for wdeg, gpolys in gens:
        for mono in ring.graded_piece(deg - wdeg):
            shifted = [ring.normal_form(pp.shift_monomial(*mono))
                       for pp in gpolys]
            span.insert(M.element_coords(shifted, deg))
    return span.contains(target)


def _span_dim(M: GradedModule, gens, d: int) -> int:
    ring = M.ring
    span = SparseRREF(ring.field)
    for wdeg, gpolys in gens:
        for mono in ring.graded_piece(d - wdeg):
            shifted = [ring.normal_form(pp.shift_monomial(*mono))
                       for pp in gpolys]
            span.insert(M.element_coords(shifted, d))
    return span.rank


def _hom_columns(h: GradedHom):
    """Images of the source generators, as submodule generator data."""
    M = h.source
    out = []
    for j, w in enumerate(M.gens):
        polys = tuple(h.H.entries[i][j] for i in range(len(h.target.gens)))
        out.append((w + h.degree, polys))
    return out


def split_by_idempotent(M: GradedModule, e: GradedHom):
    """Split M as im(e) + im(1 - e) for an idempotent endomorphism e."""
    comp = identity_hom(M) - e
    part1 = submodule_presentation(M, _hom_columns(e))
    part2 = submodule_presentation(M, _hom_columns(comp))
    lo = min(M.gens)
    hi = max(max(part1.gens), max(part2.gens)) + 2 * M.ring.deg_g
    for d in range(lo, hi + 1):
        if part1.piece_dim(d) + part2.piece_dim(d) != M.piece_dim(d):
            raise CertificationError(
                f"idempotent splitting lost dimensions in degree {d}")
    return part1, part2


# ----------------------------------------------------------------------
# the degree-zero endomorphism algebra


class EndAlgebra:
    """Structure constants of End_0(M) in the canonical hom basis."""

    __slots__ = ("module", "space", "dim", "identity", "table")

    def __init__(self, module: GradedModule):
        self.module = module
        self.space = hom_graded(module, module, 0)
        self.dim = self.space.dim
        self.identity = self.space.expand(identity_hom(module))
        self.table = [[self.space.expand(bi.compose(bj))
                       for bj in self.space.basis]
                      for bi in self.space.basis]

    def mult(self, u, v):
        K = self.module.ring.field
        out = [K.zero] * self.dim
        for i, ci in enumerate(u):
            if K.is_zero(ci):
                continue
            for j, cj in enumerate(v):
                if K.is_zero(cj):
                    continue
                coeff = K.mul(ci, cj)
                for s, val in enumerate(self.table[i][j]):
                    out[s] = K.add(out[s], K.mul(coeff, val))
        return out

    def hom(self, coords) -> GradedHom:
        return hom_from_coefficients(self.space, coords)


def algebra_radical(alg: EndAlgebra):
    """Basis of the Jacobson radical via the regular trace form.

    The kernel of (a, b) -> trace(L_a L_b) is the radical over fields of
    characteristic zero or characteristic above the algebra dimension;
    smaller prime fields raise FieldTooSmallError.
    """
    K = alg.module.ring.field
    n = alg.dim
    if K.char != 0 and K.char <= n:
        raise FieldTooSmallError(
            f"characteristic {K.char} too small for a {n}-dimensional "
            "endomorphism algebra")
    # lmats[i][s][t] = coefficient of basis s in b_i b_t.
    lmats = [[[alg.table[i][t][s] for t in range(n)] for s in range(n)]
             for i in range(n)]
    gram = []
    for i in range(n):
        grow = []
        for j in range(n):
            acc = K.zero
            for s in range(n):
                for t in range(n):
                    acc = K.add(acc, K.mul(lmats[i][s][t], lmats[j][t][s]))
            grow.append(acc)
        gram.append(grow)
    return kernel_dense(gram, K)


class _QuotientAlgebra:
    """End_0 modulo its radical, multiplying by lift-then-reduce."""

    def __init__(self, alg: EndAlgebra, radical):
        self.alg = alg
        self.K = alg.module.ring.field
        self.rref = SparseRREF(self.K)
        for vec in radical:
            self.rref.insert({t: c for t, c in enumerate(vec)
                              if not self.K.is_zero(c)})
        self.dim = alg.dim - self.rref.rank

    def reduce(self, coords):
        sparse = {t: c for t, c in enumerate(coords)
                  if not self.K.is_zero(c)}
        dense = [self.K.zero] * self.alg.dim
        for t, c in self.rref.reduce(sparse).items():
            dense[t] = c
        return dense

    def mult(self, u, v):
        return self.reduce(self.alg.mult(u, v))

    def identity(self):
        return self.reduce(self.alg.identity)


def _min_poly(mult, identity, start, dim, K):
    """Monic minimal polynomial (coefficients low to high) of an element."""
    powers = [identity]
    rr = SparseRREF(K)
    rr.insert({t: c for t, c in enumerate(identity) if not K.is_zero(c)})
    current = identity
    while True:
        current = mult(start, current)
        vec = {t: c for t, c in enumerate(current) if not K.is_zero(c)}
        if rr.contains(vec):
            break
        rr.insert(vec)
        powers.append(current)
        if len(powers) > dim + 1:
            raise CertificationError("minimal polynomial search ran away")
    cols = len(powers)
    rows = [[powers[s][t] for s in range(cols)] for t in range(dim)]
    rhs = [current[t] for t in range(dim)]
    sol = solve_dense(rows, rhs, K)
    if sol is None:
        raise CertificationError("minimal polynomial solve failed")
    return [K.neg(c) for c in sol] + [K.one]


def _to_sympy_poly(coeffs, K, T):
    if K.char == 0:
        expr = sum((sympy.Rational(K.to_str(c)) * T**s
                    for s, c in enumerate(coeffs)), sympy.Integer(0))
        return sympy.Poly(expr, T, domain="QQ")
    expr = sum((sympy.Integer(int(K.to_str(c))) * T**s
                for s, c in enumerate(coeffs)), sympy.Integer(0))
    return sympy.Poly(expr, T, modulus=K.char, symmetric=False)


def _from_sympy_univariate(poly, K):
    return [K(str(c)) for c in reversed(poly.all_coeffs())]


def _factor_min_poly(coeffs, K):
    """Sympy factorization of a minimal polynomial, deterministically sorted."""
    T = sympy.Symbol("T")
    poly = _to_sympy_poly(coeffs, K, T)
    _, factors = poly.factor_list()
    out = [(fac.monic(), mult) for fac, mult in factors]
    out.sort(key=lambda fm: (fm[0].degree(), str(fm[0])))
    return poly, out


def _crt_idempotent_coeffs(poly, factors, K):
    """Coefficients of e(T) with e = 1 mod f1^e1 and e = 0 mod the rest."""
    f1, e1 = factors[0]
    block = f1**e1
    rest = poly.div(block)[0]
    s, t, h = block.gcdex(rest)
    if h.degree() != 0:
        raise CertificationError("factor blocks of the minimal polynomial "
                                 "are not coprime")
    scaled = (t * rest).div(h)[0].rem(poly)
    return _from_sympy_univariate(scaled, K)


def _evaluate_in_algebra(coeffs, elem, mult, identity, K):
    # Horner evaluation: ((c_n h + c_{n-1}) h + ...) + c_0.
    acc = [K.mul(coeffs[-1], c) for c in identity]
    for s in range(len(coeffs) - 2, -1, -1):
        acc = mult(acc, elem)
        acc = [K.add(a, K.mul(coeffs[s], e)) for a, e in zip(acc, identity)]
    return acc


def _candidate_elements(alg: EndAlgebra, rng, max_random):
    K = alg.module.ring.field
    n = alg.dim
    for i in range(n):
        vec = [K.zero] * n
        vec[i] = K.one
        yield vec
    for i in range(n):
        for j in range(n):
            if i != j:
                yield list(alg.table[i][j])
    for i in range(n):
        for j in range(i + 1, n):
            vec = [K.zero] * n
            vec[i] = K.one
            vec[j] = K.one
            yield vec
    span = 7 if K.char == 0 else min(K.char, 7)
    for _ in range(max_random):
        yield [K(rng.randrange(span)) for _ in range(n)]


def decompose(M: GradedModule, rng=None, max_random=120):
    """Split a module into indecomposable summands, exactly.

    Returns (parts, free_shifts): parts are the nonfree indecomposable
    summands (with factorization backing) and free_shifts the generator
    degrees of split-off free summands.  Splitting is driven by
    idempotents found through minimal polynomials in End_0; a module is
    only certified indecomposable when End_0 modulo its radical is k or
    is generated by one element with irreducible minimal polynomial of
    full degree.  When neither outcome can be certified the function
    raises InconclusiveSplitError rather than guessing.
    """
    if rng is None:
        rng = random.Random(0)
    core, frees = _minimal_core(M)
    if core is None:
        return [], frees
    parts = _indecomposable_parts(core, rng, max_random)
    parts.sort(key=_module_sort_key)
    return parts, frees


def _minimal_core(M: GradedModule):
    if M.mf is not None:
        mf, frees = mf_reduce(M.mf)
        if mf is None:
            return None, frees
        return mf.cok(label=M.label), frees
    pruned, frees = minimize_presentation(M.matrix)
    if pruned is None:
        return None, frees
    if len(pruned.rows) != len(pruned.cols):
        raise CertificationError(
            "minimized presentation is not square, so the module cannot "
            "be maximal Cohen-Macaulay")
    return mf_complete(pruned).cok(label=M.label), frees


def _indecomposable_parts(M: GradedModule, rng, max_random):
    alg = EndAlgebra(M)
    radical = algebra_radical(alg)
    quotient = _QuotientAlgebra(alg, radical)
    if quotient.dim == 1:
        return [M]
    K = M.ring.field
    certified = False
    for cand in _candidate_elements(alg, rng, max_random):
        mu = _min_poly(alg.mult, alg.identity, cand, alg.dim, K)
        poly, factors = _factor_min_poly(mu, K)
        if len(factors) >= 2:
            coeffs = _crt_idempotent_coeffs(poly, factors, K)
            idem = _evaluate_in_algebra(coeffs, cand, alg.mult,
                                        alg.identity, K)
            if _is_trivial_idempotent(alg, idem):
                continue
            part1, part2 = split_by_idempotent(M, alg.hom(idem))
            out = []
            for part in (part1, part2):
                sub_core, sub_frees = _minimal_core(part)
                if sub_frees or sub_core is None:
                    raise CertificationError(
                        "free summand surfaced inside a split part")
                out.extend(_indecomposable_parts(sub_core, rng, max_random))
            return out
        if not certified:
            mu_bar = _min_poly(quotient.mult, quotient.identity(),
                               quotient.reduce(cand), alg.dim, K)
            _, factors_bar = _factor_min_poly(mu_bar, K)
            if (len(factors_bar) == 1 and factors_bar[0][1] == 1
                    and factors_bar[0][0].degree() == quotient.dim):
                certified = True
    if certified:
        return [M]
    raise InconclusiveSplitError(
        "could not split the module or certify it indecomposable")


def _is_trivial_idempotent(alg: EndAlgebra, idem) -> bool:
    K = alg.module.ring.field
    if all(K.is_zero(c) for c in idem):
        return True
    return all(K.eq(a, b) for a, b in zip(idem, alg.identity))


def _module_sort_key(M: GradedModule):
    return (len(M.gens), tuple(sorted(M.gens)),
            tuple(tuple(row) for row in M.matrix.entry_strings()))


# ----------------------------------------------------------------------
# isomorphism up to shift


def iso_up_to_shift(M: GradedModule, N: GradedModule, rng=None, tries=40):
    """Find s with M isomorphic to N(s), or None if the search fails.

    Only minimal data decides: both modules are reduced first, candidate
    shifts come from matching generator-degree multisets, and a shift is
    confirmed by degree-zero maps both ways with invertible scalar part
    (each is then surjective by the graded Nakayama lemma, and a
    surjective endomorphism of a noetherian module is injective).
    """
    if rng is None:
        rng = random.Random(0)
    core_m, frees_m = _minimal_core(M)
    core_n, frees_n = _minimal_core(N)
    if (core_m is None) != (core_n is None):
        return None
    if core_m is None:
        return _shift_matching(frees_m, frees_n)
    if len(core_m.gens) != len(core_n.gens):
        return None
    cands = sorted({wn - wm for wn in core_n.gens for wm in core_m.gens})
    for s in cands:
        if sorted(core_m.gens) != sorted(w - s for w in core_n.gens):
            continue
        if sorted(frees_m) != sorted(w - s for w in frees_n):
            continue
        shifted = core_n.shift(s)
        if _find_scalar_invertible(core_m, shifted, rng, tries) is None:
            continue
        if _find_scalar_invertible(shifted, core_m, rng, tries) is not None:
            return s
    return None


def _shift_matching(frees_m, frees_n):
    if len(frees_m) != len(frees_n):
        return None
    if not frees_m:
        return 0
    s = frees_n[0] - frees_m[0]
    if sorted(frees_m) == sorted(w - s for w in frees_n):
        return s
    return None


def _scalar_part(space: HomSpace, hom: GradedHom):
    K = space.source.ring.field
    n = len(space.target.gens)
    mat = [[K.zero] * len(space.source.gens) for _ in range(n)]
    for i in range(n):
        for j in range(len(space.source.gens)):
            if space.target.gens[i] == space.source.gens[j] + space.degree:
                mat[i][j] = hom.H.entries[i][j].coeff(0, 0)
    return mat


def _find_scalar_invertible(A: GradedModule, B: GradedModule, rng, tries):
    space = hom_graded(A, B, 0)
    if space.dim == 0:
        return None
    K = A.ring.field
    n = len(B.gens)
    for hom in space.basis:
        if rank_dense(_scalar_part(space, hom), K) == n:
            return hom
    span = 7 if K.char == 0 else min(K.char, 7)
    for _ in range(tries):
        coeffs = [K(rng.randrange(span)) for _ in range(space.dim)]
        hom = hom_from_coefficients(space, coeffs)
        if rank_dense(_scalar_part(space, hom), K) == n:
            return hom
    return None


# ----------------------------------------------------------------------
# ranks along branches and multiplicity


def rank_vector(M: GradedModule, branches):
    """Generic rank of M along each branch, via parametrized elimination.

    On a branch the presentation matrix becomes a matrix of monomials
    c t^e whose exponents are forced by the grading; scaling rows and
    columns by the matching fractional powers of t turns each residue
    block into a constant matrix, so the rank over the Laurent field
    equals the rank of the coefficient matrix over k.
    """
    K = M.ring.field
    out = []
    for branch in branches:
        coeffs = []
        for i in range(len(M.gens)):
            row = []
            for j in range(len(M.rels)):
                image = branch.evaluate(M.matrix.entries[i][j])
                row.append(K.zero if image is None else image[0])
            coeffs.append(row)
        rank = rank_dense(coeffs, K) if M.rels else 0
        out.append(len(M.gens) - rank)
    return out


def multiplicity(M: GradedModule, branches) -> int:
    """Sum over branches of generic rank times branch multiplicity."""
    ranks = rank_vector(M, branches)
    return sum(r * br.multiplicity for r, br in zip(ranks, branches))
