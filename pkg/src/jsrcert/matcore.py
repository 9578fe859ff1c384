"""Integer matrices, products, exact norms, spectral radii and leading
eigenvectors for small dimensions.

Everything is exact: spectral radii are RealAlgebraic values certified
through characteristic polynomials, eigenvectors are solved over the
number field generated by the eigenvalue, and matrix 2-norms come from
the largest eigenvalue of A^T A.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebraic import (
    AlgebraicError,
    FieldElement,
    IntPolynomial,
    NumberFieldContext,
    Ordering,
    RealAlgebraic,
    compare,
    factor_int_poly,
    isolate_real_roots,
    nth_root,
)


@dataclass(frozen=True)
class IntMatrix:
    """Dense square integer matrix, row-major."""

    rows: tuple[tuple[int, ...], ...]

    @staticmethod
    def make(rows: Iterable[Iterable[int]]) -> "IntMatrix":
        rs = tuple(tuple(int(v) for v in row) for row in rows)
        if any(len(r) != len(rs) for r in rs):
            raise ValueError("matrix must be square")
        return IntMatrix(rs)

    @staticmethod
    def identity(dim: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(int(i == j) for j in range(dim))
                               for i in range(dim)))

    @staticmethod
    def zero(dim: int) -> "IntMatrix":
        return IntMatrix(tuple((0,) * dim for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        n = self.dim
        orows = other.rows
        return IntMatrix(tuple(
            tuple(sum(self.rows[i][k] * orows[k][j] for k in range(n))
                  for j in range(n))
            for i in range(n)))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(tuple(tuple(a + b for a, b in zip(ra, rb))
                               for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(k * a for a in r) for r in self.rows))

    def power(self, k: int) -> "IntMatrix":
        out = IntMatrix.identity(self.dim)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.rows for v in r)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for r in self.rows for v in r)

    def entrywise_leq(self, other: "IntMatrix") -> bool:
        return all(a <= b for ra, rb in zip(self.rows, other.rows)
                   for a, b in zip(ra, rb))

    def apply(self, vec: Sequence) -> list:
        """Matrix-vector product over any commutative coefficient type."""
        return [sum((vec[j] * self.rows[i][j] for j in range(self.dim)
                     if self.rows[i][j]), start=vec[0] * 0)
                for i in range(self.dim)]

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.dim))

    def flat(self) -> list[int]:
        return [v for r in self.rows for v in r]

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(v) for v in r) for r in self.rows) + "]"


@dataclass(frozen=True)
class MatrixFamily:
    """The finite input set of matrices, with its alphabet tag."""

    matrices: tuple[IntMatrix, ...]
    alphabet: str = "general"  # {binary, sign, general}

    @staticmethod
    def make(mats: Iterable[IntMatrix | Sequence[Sequence[int]]],
             alphabet: str = "general") -> "MatrixFamily":
        ms = tuple(m if isinstance(m, IntMatrix) else IntMatrix.make(m)
                   for m in mats)
        if not ms:
            raise ValueError("family must be nonempty")
        if len({m.dim for m in ms}) != 1:
            raise ValueError("family must have uniform dimension")
        return MatrixFamily(ms, alphabet)

    @property
    def dim(self) -> int:
        return self.matrices[0].dim

    def __len__(self) -> int:
        return len(self.matrices)

    def __getitem__(self, j: int) -> IntMatrix:
        return self.matrices[j]


@dataclass(frozen=True)
class Product:
    """A word over matrix indices with its evaluated matrix.

    The word lists indices j_1..j_n; the evaluated matrix is
    A_{j_n} ... A_{j_1} (letters applied right to left).  Indices are
    1-based to match the usual A_1, A_2 notation.
    """

    word: tuple[int, ...]
    value: IntMatrix

    @property
    def length(self) -> int:
        return len(self.word)

    def word_str(self) -> str:
        return "".join(str(j) for j in self.word)


def evaluate(word: Sequence[int], family: MatrixFamily) -> Product:
    if not word:
        raise ValueError("empty product word")
    acc = family[word[0] - 1]
    for j in word[1:]:
        acc = family[j - 1] @ acc
    return Product(tuple(word), acc)


def char_poly(A: IntMatrix) -> IntPolynomial:
    """Monic characteristic polynomial det(xI - A)."""
    n = A.dim
    if n == 1:
        return IntPolynomial.make([-A.rows[0][0], 1])
    if n == 2:
        (a, b), (c, d) = A.rows
        return IntPolynomial.make([a * d - b * c, -(a + d), 1])
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = A.rows
        det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        tr = a + e + i
        # sum of principal 2x2 minors
        m2 = (e * i - f * h) + (a * i - c * g) + (a * e - b * d)
        return IntPolynomial.make([-det, m2, -tr, 1])
    # general fallback: Faddeev-LeVerrier over fractions
    from .algebraic import _char_poly_fraction, from_fractions

    M = [[Fraction(v) for v in row] for row in A.rows]
    cp = _char_poly_fraction(M)
    ints = [int(c) for c in cp]
    return IntPolynomial.make(ints)


@dataclass
class SpectralRadius:
    """Exact spectral radius with leading-eigenvalue structure flags."""

    value: RealAlgebraic
    leading_simple: bool
    leading_complex: bool


def spectral_radius(A: IntMatrix) -> SpectralRadius:
    """max |eigenvalue| as an exact nonnegative RealAlgebraic.

    leading_simple is true iff exactly one eigenvalue attains the
    radius, counted with algebraic multiplicity, up to complex
    conjugate pairs.  leading_complex is true iff the attaining
    eigenvalue is non-real.  The zero matrix returns 0 with
    leading_simple True by convention.
    """
    if A.is_zero():
        return SpectralRadius(RealAlgebraic.from_rational(0), True, False)
    cp = char_poly(A)
    factors = factor_int_poly(cp)
    real_eigs: list[tuple[RealAlgebraic, int]] = []  # (eigenvalue, multiplicity)
    complex_mods: list[tuple[RealAlgebraic, int]] = []  # (|pair|^2, multiplicity)
    for fac, mult in factors:
        roots = isolate_real_roots(fac)
        for r in roots:
            real_eigs.append((r, mult))
        n_complex_pairs = (fac.degree - len(roots)) // 2
        if n_complex_pairs:
            for m2 in _complex_pair_modulus_squares(fac):
                complex_mods.append((m2, mult))
    # the radius: maximum of |real eigenvalue| and sqrt(|pair|^2)
    best: RealAlgebraic | None = None
    best_sq: RealAlgebraic | None = None
    for r, _ in real_eigs:
        a = r if r.sign() >= 0 else -r
        if best is None or compare(a, best) == Ordering.GREATER:
            best = a
    for m2, _ in complex_mods:
        if best_sq is None or compare(m2, best_sq) == Ordering.GREATER:
            best_sq = m2
    if best_sq is not None:
        root = nth_root(best_sq, 2)
        if best is None or compare(root, best) == Ordering.GREATER:
            rho = root
        else:
            rho = best
    else:
        rho = best
    # attainment count with multiplicity (a conjugate pair counts once)
    rho_sq = rho.pow(2)
    attain = 0
    for r, mult in real_eigs:
        if compare(r.pow(2), rho_sq) == Ordering.EQUAL:
            attain += mult
    pair_attain = 0
    for m2, mult in complex_mods:
        if compare(m2, rho_sq) == Ordering.EQUAL:
            pair_attain += mult
    simple = (attain + pair_attain) == 1
    leading_complex = pair_attain > 0
    return SpectralRadius(rho, simple, leading_complex)


def _complex_pair_modulus_squares(fac: IntPolynomial) -> list[RealAlgebraic]:
    """|z|^2 for each complex-conjugate root pair of an irreducible factor.

    deg 2: modulus^2 = constant/leading (product of the pair).
    deg 3: one real root r and one pair; |pair|^2 = |det term| / r,
    realized exactly inside Q(r).
    Higher degrees are not needed for dimensions <= 3.
    """
    d = fac.degree
    roots = isolate_real_roots(fac)
    n_pairs = (d - len(roots)) // 2
    if n_pairs == 0:
        return []
    if d == 2:
        return [RealAlgebraic.from_rational(Fraction(fac.coeffs[0], fac.coeffs[2]))]
    if d == 3 and len(roots) == 1:
        r = roots[0]
        # product of all roots = -c0/c3; |pair|^2 = product / r
        prod = Fraction(-fac.coeffs[0], fac.coeffs[3])
        if r.is_rational:
            return [RealAlgebraic.from_rational(prod / r.as_rational())]
        ctx = NumberFieldContext.from_real_algebraic(r)
        elem = ctx.from_rational(prod) / ctx.generator()
        return [elem.to_real_algebraic()]
    raise AlgebraicError(
        f"complex pair modulus for degree {d} factors is not supported")


def leading_eigenvector(A: IntMatrix, rho: RealAlgebraic | FieldElement,
                        sign: int = 1,
                        context: NumberFieldContext | None = None
                        ) -> list[FieldElement]:
    """A kernel vector of (A - sign*rho*I) over Q(rho).

    Normalized so the first nonzero coordinate is 1.  Raises if
    sign*rho is not an eigenvalue or the kernel is not 1-dimensional
    (the latter feeds non-termination diagnostics).
    """
    if isinstance(rho, FieldElement):
        ctx = rho.context
        lam = rho * sign
    else:
        ctx = context or (NumberFieldContext.from_real_algebraic(rho)
                          if not rho.is_rational else NumberFieldContext.rational_context())
        if rho.is_rational:
            lam = ctx.from_rational(rho.as_rational() * sign)
        else:
            lam = ctx.generator() * sign
    cp = char_poly(A)
    acc = ctx.zero()
    for c in reversed(cp.coeffs):
        acc = acc * lam + ctx.from_rational(c)
    if not acc.is_zero():
        raise AlgebraicError("claimed eigenvalue does not satisfy char poly")
    n = A.dim
    M = [[ctx.from_rational(A.rows[i][j]) - (lam if i == j else ctx.zero())
          for j in range(n)] for i in range(n)]
    kern = _kernel(M, ctx)
    if len(kern) != 1:
        raise AlgebraicError(
            f"kernel dimension {len(kern)} != 1 for eigenvalue (multiplicity issue)")
    v = kern[0]
    # normalize first nonzero coordinate to 1
    pivot = next(e for e in v if not e.is_zero())
    v = [e / pivot for e in v]
    return v


def _kernel(M: list[list[FieldElement]], ctx) -> list[list[FieldElement]]:
    """Kernel basis of a square matrix over the field by Gaussian elimination."""
    n = len(M)
    rows = [row[:] for row in M]
    pivots = {}
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [ctx.zero()] * n
        v[fc] = ctx.one()
        for c, pr in pivots.items():
            v[c] = -rows[pr][fc]
        basis.append(v)
    return basis


def two_norm_sq(A: IntMatrix) -> RealAlgebraic:
    """Largest eigenvalue of A^T A; the squared matrix 2-norm."""
    if A.is_zero():
        return RealAlgebraic.from_rational(0)
    G = A.transpose() @ A
    cp = char_poly(G)
    roots = isolate_real_roots(cp)
    return roots[-1]


def frobenius_norm_sq(A: IntMatrix) -> Fraction:
    return Fraction(sum(v * v for r in A.rows for v in r))


def avg_sr_compare(p: Product, q: Product) -> Ordering:
    """Order rho(p)^(1/len p) against rho(q)^(1/len q) exactly.

    Root extraction is avoided by comparing rho(p)^len(q) with
    rho(q)^len(p).
    """
    rp = spectral_radius(p.value).value
    rq = spectral_radius(q.value).value
    return compare(rp.pow(q.length), rq.pow(p.length))


def averaged_spectral_radius(p: Product) -> RealAlgebraic:
    """rho(p)^(1/len p) as an exact value."""
    rho = spectral_radius(p.value).value
    if rho.sign() == 0:
        return RealAlgebraic.from_rational(0)
    return nth_root(rho, p.length)
