"""Pair enumeration, symmetry canonicalization, and quick-decision lemmas.

A pair of dim x dim matrices over a digit alphabet is addressed by two
nonnegative integers whose base-|alphabet| digits list the entries
row-major, most significant digit first (entry (1,1) of the first
matrix; the least significant digit of the second number is entry
(dim,dim) of the second matrix).

Quick decisions settle a pair without running the polytope algorithm:
entrywise domination, sub-identity, product-order comparisons (for
nonnegative alphabets), normality, bounded-norm integer families, and
common-invariant-subspace reductions.  Every verdict carries a
machine-checkable witness.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .algebraic import Ordering, RealAlgebraic, compare, nth_root
from .matcore import (
    IntMatrix,
    MatrixFamily,
    Product,
    evaluate,
    spectral_radius,
    two_norm_sq,
)

ALPHABETS = {
    "binary": (0, 1),
    "sign": (0, 1, -1),  # digit order: 0 -> 0, 1 -> +1, 2 -> -1
    "general": None,
}


class Reason(enum.Enum):
    ZERO = "zero"
    SUB_IDENTITY = "sub_identity"
    DOMINATED = "dominated"
    COMMUTING_ORDER = "commuting_order"
    NORMAL = "normal"
    REDUCIBLE = "reducible"
    INTEGER_LEQ_ONE = "integer_leq_one"


class Outcome(enum.Enum):
    DUPLICATE = "duplicate"
    SETTLED = "settled"
    NEEDS_IPA = "needs_ipa"


@dataclass(frozen=True)
class PairCode:
    a1: int
    a2: int
    dim: int
    alphabet: str

    def __post_init__(self):
        digits = ALPHABETS[self.alphabet]
        if digits is None:
            raise ValueError("coded pairs require a digit alphabet")
        top = len(digits) ** (self.dim * self.dim)
        if not (0 <= self.a1 < top and 0 <= self.a2 < top):
            raise ValueError(f"code out of range for {self.alphabet} dim {self.dim}")

    def __str__(self) -> str:
        return f"{self.a1}/{self.a2}"

    @staticmethod
    def parse(text: str, dim: int, alphabet: str) -> "PairCode":
        a1, a2 = text.split("/")
        return PairCode(int(a1), int(a2), dim, alphabet)


@dataclass
class ReductionVerdict:
    outcome: Outcome
    reason: Optional[Reason] = None
    canonical: Optional[PairCode] = None  # for DUPLICATE
    jsr: Optional[RealAlgebraic] = None
    smp_word: Optional[tuple[int, ...]] = None
    witness: dict = field(default_factory=dict)


def decode(code: PairCode) -> tuple[IntMatrix, IntMatrix]:
    digits = ALPHABETS[code.alphabet]
    return (_decode_one(code.a1, code.dim, digits),
            _decode_one(code.a2, code.dim, digits))


def encode(pair: tuple[IntMatrix, IntMatrix], alphabet: str) -> PairCode:
    A, B = pair
    return PairCode(_encode_one(A, alphabet), _encode_one(B, alphabet),
                    A.dim, alphabet)


def _decode_one(num: int, dim: int, digits) -> IntMatrix:
    # digits run column-major: the least significant digit is entry
    # (dim, dim), the most significant entry (1, 1)
    base = len(digits)
    cells = []
    for _ in range(dim * dim):
        cells.append(digits[num % base])
        num //= base
    cells.reverse()
    cols = [cells[j * dim:(j + 1) * dim] for j in range(dim)]
    rows = [[cols[j][i] for j in range(dim)] for i in range(dim)]
    return IntMatrix.make(rows)


def _encode_one(A: IntMatrix, alphabet: str) -> int:
    digits = ALPHABETS[alphabet]
    base = len(digits)
    rev = {v: i for i, v in enumerate(digits)}
    num = 0
    for j in range(A.dim):
        for i in range(A.dim):
            v = A.rows[i][j]
            if v not in rev:
                raise ValueError(f"entry {v} not in alphabet {alphabet}")
            num = num * base + rev[v]
    return num


def pair_transforms(dim: int, alphabet: str) -> list:
    """The canonicalization group as a list of pair-to-pair callables:
    swap, simultaneous transpose, permutation similarity, and (sign
    alphabet) per-matrix negation."""
    perms = list(itertools.permutations(range(dim)))
    pmats = [IntMatrix.make([[int(p[i] == j) for j in range(dim)]
                             for i in range(dim)]) for p in perms]
    sign_flips = [(1, 1)]
    if alphabet == "sign":
        sign_flips = [(1, 1), (1, -1), (-1, 1), (-1, -1)]

    transforms = []
    for swap in (False, True):
        for transpose in (False, True):
            for P in pmats:
                for (s1, s2) in sign_flips:
                    def t(pair, swap=swap, transpose=transpose, P=P, s1=s1, s2=s2):
                        A, B = pair
                        if swap:
                            A, B = B, A
                        if transpose:
                            A, B = A.transpose(), B.transpose()
                        A = P.transpose() @ A @ P
                        B = P.transpose() @ B @ P
                        if s1 < 0:
                            A = -A
                        if s2 < 0:
                            B = -B
                        return (A, B)
                    transforms.append(t)
    return transforms


def canonical_key(pair: tuple[IntMatrix, IntMatrix], alphabet: str) -> PairCode:
    """Minimum code over the symmetry group orbit of the pair."""
    dim = pair[0].dim
    best = None
    for t in pair_transforms(dim, alphabet):
        code = encode(t(pair), alphabet)
        key = (code.a1, code.a2)
        if best is None or key < (best.a1, best.a2):
            best = code
    return best


def enumerate_campaign(alphabet: str, dim: int) -> Iterator[PairCode]:
    """Every pair code exactly once, in (a1, a2) order."""
    if alphabet not in ("binary", "sign") or dim not in (2, 3):
        raise ValueError("campaigns cover binary/sign alphabets in dims 2 and 3")
    top = len(ALPHABETS[alphabet]) ** (dim * dim)
    for a1 in range(top):
        for a2 in range(top):
            yield PairCode(a1, a2, dim, alphabet)


# ---------------------------------------------------------------------------
# quick decisions
# ---------------------------------------------------------------------------


def quick_decide(pair: tuple[IntMatrix, IntMatrix],
                 alphabet: str = "general",
                 norm_check_depth: int = 8) -> ReductionVerdict:
    """Settle a pair by reduction lemmas, or report that it needs the
    polytope algorithm.  Checks run in both orderings of the pair."""
    A1, A2 = pair
    nonneg = A1.is_nonnegative() and A2.is_nonnegative()

    # a zero member never changes the joint spectral radius
    for X, Y in ((A1, A2), (A2, A1)):
        if Y.is_zero():
            sr = spectral_radius(X)
            return ReductionVerdict(
                Outcome.SETTLED, Reason.ZERO, jsr=sr.value,
                smp_word=(1,) if Y is A2 else (2,),
                witness={"zero_member": 2 if Y is A2 else 1})

    if nonneg:
        I = IntMatrix.identity(A1.dim)
        for idx, (X, Y) in enumerate(((A1, A2), (A2, A1))):
            base_word = (1,) if idx == 0 else (2,)
            # (a) Y <= X entrywise
            if Y.entrywise_leq(X):
                return ReductionVerdict(
                    Outcome.SETTLED, Reason.DOMINATED,
                    jsr=spectral_radius(X).value, smp_word=base_word,
                    witness={"dominating": base_word[0]})
            # (c) Y <= identity
            if Y.entrywise_leq(I):
                return ReductionVerdict(
                    Outcome.SETTLED, Reason.SUB_IDENTITY,
                    jsr=spectral_radius(X).value, smp_word=base_word,
                    witness={"sub_identity": 2 if idx == 0 else 1})
            # (b) X Y <= X^2
            if (X @ Y).entrywise_leq(X @ X):
                return ReductionVerdict(
                    Outcome.SETTLED, Reason.DOMINATED,
                    jsr=spectral_radius(X).value, smp_word=base_word,
                    witness={"product_order": [base_word[0], base_word[0]]})
        # (d) A2 A1 <= A1 A2 (either ordering)
        for idx, (X, Y) in enumerate(((A1, A2), (A2, A1))):
            if (Y @ X).entrywise_leq(X @ Y):
                r1, r2 = spectral_radius(A1).value, spectral_radius(A2).value
                word = (1,) if compare(r1, r2) != Ordering.LESS else (2,)
                jsr = r1 if word == (1,) else r2
                return ReductionVerdict(
                    Outcome.SETTLED, Reason.COMMUTING_ORDER, jsr=jsr,
                    smp_word=word, witness={"ordered_pair": [2, 1] if idx == 0
                                            else [1, 2]})

    # normal matrices: 2-norm equals spectral radius
    if _is_normal(A1) and _is_normal(A2):
        r1, r2 = spectral_radius(A1).value, spectral_radius(A2).value
        word = (1,) if compare(r1, r2) != Ordering.LESS else (2,)
        return ReductionVerdict(
            Outcome.SETTLED, Reason.NORMAL,
            jsr=r1 if word == (1,) else r2, smp_word=word,
            witness={"normal": True})

    # bounded-norm integer families: JSR <= 1 forces JSR in {0, 1}
    leq1 = _norm_bounded_by_one(pair, norm_check_depth)
    if leq1 is not None:
        jsr_val, word = leq1
        return ReductionVerdict(
            Outcome.SETTLED, Reason.INTEGER_LEQ_ONE,
            jsr=RealAlgebraic.from_rational(jsr_val), smp_word=word,
            witness={"norm_depth": norm_check_depth, "jsr": str(jsr_val)})

    return ReductionVerdict(Outcome.NEEDS_IPA)


def _is_normal(A: IntMatrix) -> bool:
    return A.transpose() @ A == A @ A.transpose()


def _norm_bounded_by_one(pair, depth: int) -> Optional[tuple[int, tuple[int, ...]]]:
    """If max over all length-`depth` products of ||.||_2^(1/depth) <= 1,
    the JSR is 0 or 1 exactly (integer matrices).  Returns (jsr, word)
    with an attaining product, or None when the bound fails or no
    attaining witness exists.
    """
    fam = MatrixFamily.make(list(pair))
    attaining: Optional[tuple[int, ...]] = None
    ok = True
    for word in itertools.product((1, 2), repeat=depth):
        value = evaluate(word, fam).value
        nsq = two_norm_sq(value)
        c = compare(nsq, Fraction(1))
        if c == Ordering.GREATER:
            ok = False
            break
    if not ok:
        return None
    # JSR <= 1; find a product of spectral radius exactly 1 if one exists
    for n in range(1, depth + 1):
        for word in itertools.product((1, 2), repeat=n):
            rho = spectral_radius(evaluate(word, fam).value).value
            if rho.is_rational and rho.as_rational() == 1:
                return (1, word)
    # no radius-1 witness: all radii are 0 up to `depth`; treat as JSR 0
    # only if every product of length dim is nilpotent-consistent
    for n in range(1, depth + 1):
        for word in itertools.product((1, 2), repeat=n):
            rho = spectral_radius(evaluate(word, fam).value).value
            if rho.sign() != 0:
                return None  # irrational radius in (0,1] cannot happen; guard
    return (0, (1,))


# ---------------------------------------------------------------------------
# irreducibility
# ---------------------------------------------------------------------------


@dataclass
class BlockDecomposition:
    """Common invariant subspace and the induced integer block pairs.

    The restriction/quotient blocks are rational in general; both are
    scaled by their denominator lcm to integer matrices, so the true
    block JSR is JSR(int blocks) / scale.
    """

    basis: list[list[int]]  # vectors spanning the invariant subspace
    sub_blocks: tuple[IntMatrix, IntMatrix]
    sub_scale: int
    quot_blocks: tuple[IntMatrix, IntMatrix]
    quot_scale: int


def irreducible(pair: tuple[IntMatrix, IntMatrix]
                ) -> tuple[bool, Optional[BlockDecomposition]]:
    """Burnside test: the pair is irreducible iff the algebra generated
    by {I, A1, A2} has full dimension dim^2.

    For reducible pairs a common invariant subspace with rational basis
    is searched among eigenspace seeds closed under both matrices; the
    returned blocks are integer matrices on a saturated lattice basis.
    None is returned for the decomposition when the algebra is small
    but no rational invariant subspace exists (complex-only reduction).
    """
    A1, A2 = pair
    dim = A1.dim
    if _algebra_dimension(pair) == dim * dim:
        return True, None
    dec = _find_invariant_subspace(pair)
    return False, dec


def _algebra_dimension(pair) -> int:
    A1, A2 = pair
    dim = A1.dim
    basis: list[tuple[Fraction, ...]] = []

    def add(M: IntMatrix) -> bool:
        vec = [Fraction(v) for v in M.flat()]
        return _add_to_basis(basis, vec)

    gens = [IntMatrix.identity(dim), A1, A2]
    frontier = [g for g in gens if add(g)]
    frontier_mats = list(frontier)
    current = list(frontier_mats)
    while current:
        new = []
        for M in current:
            for G in (A1, A2):
                for Pd in (G @ M, M @ G):
                    if add(Pd):
                        new.append(Pd)
        current = new
    return len(basis)


def _add_to_basis(basis: list, vec: list[Fraction]) -> bool:
    v = list(vec)
    for b in basis:
        piv = next(i for i, c in enumerate(b) if c != 0)
        if v[piv] != 0:
            f = v[piv] / b[piv]
            v = [x - f * y for x, y in zip(v, b)]
    if all(c == 0 for c in v):
        return False
    basis.append(v)
    return True


def _find_invariant_subspace(pair) -> Optional[BlockDecomposition]:
    A1, A2 = pair
    dim = A1.dim
    from .matcore import char_poly
    from .algebraic import isolate_real_roots

    seeds: list[list[Fraction]] = []
    for M in (A1, A2):
        cp = char_poly(M)
        for r in isolate_real_roots(cp):
            if not r.is_rational:
                continue
            lam = r.as_rational()
            rows = [[Fraction(M.rows[i][j]) - (lam if i == j else 0)
                     for j in range(dim)] for i in range(dim)]
            for v in _rational_kernel(rows):
                seeds.append(v)
    # also try coordinate vectors (catches triangular forms)
    for i in range(dim):
        seeds.append([Fraction(int(j == i)) for j in range(dim)])

    for seed in seeds:
        space = [seed]
        _close_under(space, (A1, A2))
        if 0 < len(space) < dim:
            dec = _split_blocks(pair, space)
            if dec is not None:
                return dec
    return None


def _rational_kernel(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    M = [row[:] for row in rows]
    pivots = {}
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(n):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots[c] = r
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for c, pr in pivots.items():
            v[c] = -M[pr][fc]
        out.append(v)
    return out


def _close_under(space: list[list[Fraction]], mats) -> None:
    basis: list = []
    for v in space:
        _add_to_basis(basis, v)
    frontier = list(space)
    while frontier:
        new = []
        for v in frontier:
            for M in mats:
                img = M.apply(v)
                if _add_to_basis(basis, [Fraction(c) for c in img]):
                    new.append([Fraction(c) for c in img])
        frontier = new
    space.clear()
    space.extend(basis)


def _split_blocks(pair, space: list[list[Fraction]]) -> Optional[BlockDecomposition]:
    """Blocks of the pair in a basis extending the invariant subspace.

    The completion uses unit vectors, so the change of basis is merely
    rational; both blocks are cleared to integer matrices with their
    scale factor recorded (the block JSR divides by it).
    """
    A1, A2 = pair
    dim = A1.dim
    k = len(space)
    basis_vecs = [list(v) for v in space]
    for i in range(dim):
        cand = basis_vecs + [[Fraction(int(j == i)) for j in range(dim)]]
        if _rank(cand) > len(basis_vecs):
            basis_vecs = cand
        if len(basis_vecs) == dim:
            break
    if len(basis_vecs) != dim:
        return None
    U = [[basis_vecs[c][r] for c in range(dim)] for r in range(dim)]  # columns
    Uinv = _mat_inverse_q(U)
    if Uinv is None:
        return None
    raw_subs, raw_quots = [], []
    for M in (A1, A2):
        Mq = [[Fraction(v) for v in row] for row in M.rows]
        C = _mat_mul_q(_mat_mul_q(Uinv, Mq), U)
        for i in range(k, dim):
            for j in range(k):
                if C[i][j] != 0:
                    return None
        raw_subs.append([[C[i][j] for j in range(k)] for i in range(k)])
        raw_quots.append([[C[i][j] for j in range(k, dim)]
                          for i in range(k, dim)])
    sub_blocks, sub_scale = _clear_pair(raw_subs)
    quot_blocks, quot_scale = _clear_pair(raw_quots)
    return BlockDecomposition(
        basis=[_primitive_int(v) for v in space],
        sub_blocks=sub_blocks, sub_scale=sub_scale,
        quot_blocks=quot_blocks, quot_scale=quot_scale)


def _clear_pair(blocks: list[list[list[Fraction]]]) -> tuple[tuple[IntMatrix, IntMatrix], int]:
    from math import lcm

    m = 1
    for b in blocks:
        for row in b:
            for c in row:
                m = lcm(m, c.denominator)
    ints = tuple(IntMatrix.make([[int(c * m) for c in row] for row in b])
                 for b in blocks)
    return ints, m


def _primitive_int(v: list[Fraction]) -> list[int]:
    from math import gcd, lcm

    m = 1
    for c in v:
        m = lcm(m, c.denominator)
    ints = [int(c * m) for c in v]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    return [c // (g or 1) for c in ints]


def _rank(vecs: list[list[Fraction]]) -> int:
    basis: list = []
    for v in vecs:
        _add_to_basis(basis, list(v))
    return len(basis)


def _mat_inverse_q(U: list[list[Fraction]]) -> Optional[list[list[Fraction]]]:
    n = len(U)
    M = [list(row) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(U)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [[M[i][n + j] for j in range(n)] for i in range(n)]


def _mat_mul_q(A: list[list[Fraction]], B: list[list[Fraction]]) -> list[list[Fraction]]:
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]
