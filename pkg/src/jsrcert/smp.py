"""Candidate spectral-maximizing-product search.

A branch-and-bound walk over the prefix tree of products: a prefix is
pruned once its averaged operator norm drops strictly below the best
averaged spectral radius found so far, and a branch terminates when its
product matrix repeats one of its own prefixes (further extensions then
duplicate already-explored behaviour).  All comparisons are exact; a
staged rational/interval fast path keeps the exact algebra off the hot
loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebraic import (
    Ordering,
    RealAlgebraic,
    compare,
    largest_real_root_fast,
    nth_root,
)
from .matcore import (
    IntMatrix,
    MatrixFamily,
    Product,
    char_poly,
    evaluate,
    frobenius_norm_sq,
    spectral_radius,
)


@dataclass
class CandidateSet:
    """Search result: certified lower bound and the products attaining it."""

    lambda_: RealAlgebraic
    candidates: list[Product]
    upper_bound: RealAlgebraic
    depth_reached: int
    exhausted: bool
    # diagnostics
    nodes_visited: int = 0
    frobenius_prunes: int = 0
    two_norm_prunes: int = 0

    def lambda_power(self, k: int) -> RealAlgebraic:
        return self.lambda_.pow(k)


def canonical_word(word: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically least cyclic rotation of the primitive root."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word == word[:d] * (n // d):
            root = word[:d]
            break
    rots = [root[i:] + root[:i] for i in range(len(root))]
    return min(rots)


def canonicalize_product(p: Product, family: MatrixFamily) -> Product:
    """Canonical representative of p under cyclic shifts and power roots."""
    return evaluate(canonical_word(p.word), family)


class _Best:
    """Monotone best-so-far averaged spectral radius, kept as (rho, length)."""

    __slots__ = ("rho", "length", "rho_is_zero")

    def __init__(self):
        self.rho = RealAlgebraic.from_rational(0)
        self.length = 1
        self.rho_is_zero = True

    def cmp_avg(self, rho: RealAlgebraic, length: int) -> Ordering:
        """compare rho^(1/length) with the stored best, exactly."""
        if self.rho_is_zero:
            return Ordering(rho.sign())
        return compare(rho.pow(self.length), self.rho.pow(length))

    def update(self, rho: RealAlgebraic, length: int) -> None:
        self.rho = rho
        self.length = length
        self.rho_is_zero = rho.sign() == 0


def _interval_pow(lo: Fraction, hi: Fraction, k: int) -> tuple[Fraction, Fraction]:
    # nonnegative base intervals only
    return lo**k, hi**k


def _prune_test(norm_sq: RealAlgebraic, length: int, best: _Best,
                slack: Fraction) -> bool:
    """True iff norm^(1/length) < (1-slack) * best averaged radius, exactly.

    norm_sq is the squared operator norm of the prefix.
    """
    if best.rho_is_zero:
        return False
    m, l = best.length, length
    sigma = (1 - slack) ** (2 * l * m)
    # compare norm_sq^m  vs  sigma * best.rho^(2l)
    rhs = best.rho.pow(2 * l).scale(sigma)
    # interval fast path: refine a little, decide on strict separation
    for _ in range(3):
        nlo, nhi = norm_sq.interval()
        rlo, rhi = rhs.interval()
        plo, phi = _interval_pow(max(nlo, Fraction(0)), max(nhi, Fraction(0)), m)
        if phi < rlo:
            return True
        if plo > rhi:
            return False
        norm_sq.refine()
        rhs.refine()
    # exact decision on the boundary
    return compare(norm_sq.canonical().pow(m), rhs) == Ordering.LESS


def gripenberg_search(family: MatrixFamily, max_depth: int = 10,
                      slack: Fraction = Fraction(0)) -> CandidateSet:
    """Branch-and-bound candidate search with exact norm pruning.

    Returns every product (canonicalized, up to cyclic shifts and power
    roots) attaining the best averaged spectral radius within
    max_depth.  `exhausted` is True when the whole tree was closed by
    pruning or repetition, in which case lambda_ equals the joint
    spectral radius and the candidate list is complete within depth.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    slack = Fraction(slack)
    J = len(family)
    best = _Best()
    raw_candidates: list[Product] = []  # words tying best at registration time
    open_leaves: list[Product] = []
    stats = {"nodes": 0, "fro": 0, "two": 0}
    depth_reached = 0

    def register(word: tuple[int, ...], value: IntMatrix) -> None:
        sr = spectral_radius(value).value
        cmp = best.cmp_avg(sr, len(word))
        if cmp == Ordering.GREATER:
            best.update(sr, len(word))
            raw_candidates.clear()
            raw_candidates.append(Product(word, value))
        elif cmp == Ordering.EQUAL:
            raw_candidates.append(Product(word, value))

    def closed_by_repetition(word: tuple[int, ...], value: IntMatrix,
                             prefixes: tuple[IntMatrix, ...]) -> bool:
        # the product matrix is a scalar multiple of a shorter prefix on
        # this branch, with the scalar dominated by the best averaged
        # radius; extensions then cannot improve on the shorter branch
        for depth_q, pv in enumerate(prefixes):
            c = _scalar_multiple(value, pv)
            if c is None:
                continue
            ac = abs(c)
            if ac == 1:
                return True
            dl = len(word) - depth_q
            if not best.rho_is_zero and compare(
                    RealAlgebraic.from_rational(ac**best.length),
                    best.rho.pow(dl)) != Ordering.GREATER:
                return True
        return False

    # breadth-first levels: the whole of level k tightens the bound before
    # level k+1 makes any pruning decision
    ident = (IntMatrix.identity(family.dim),)
    level: list[tuple[tuple[int, ...], IntMatrix, tuple[IntMatrix, ...]]] = []
    for j in range(1, J + 1):
        word, value = (j,), family[j - 1]
        stats["nodes"] += 1
        depth_reached = 1
        register(word, value)
        level.append((word, value, ident))
    while level:
        nxt = []
        survivors = []
        for word, value, prefixes in level:
            if closed_by_repetition(word, value, prefixes):
                continue
            if len(word) >= max_depth:
                open_leaves.append(Product(word, value))
                continue
            survivors.append((word, value, prefixes))
        for word, value, prefixes in survivors:
            child_prefixes = prefixes + (value,)
            for j in range(1, J + 1):
                child = family[j - 1] @ value
                cw = word + (j,)
                if child.is_zero():
                    continue
                # cheap exact Frobenius pre-prune (||.||_F >= ||.||_2)
                fro = frobenius_norm_sq(child)
                if _prune_rational_norm(fro, len(cw), best, slack):
                    stats["fro"] += 1
                    continue
                nsq = _two_norm_sq_fast(child)
                if _prune_test(nsq, len(cw), best, slack):
                    stats["two"] += 1
                    continue
                stats["nodes"] += 1
                depth_reached = max(depth_reached, len(cw))
                register(cw, child)
                nxt.append((cw, child, child_prefixes))
        level = nxt

    candidates = _assemble_candidates(raw_candidates, family)
    if best.rho_is_zero:
        lam = RealAlgebraic.from_rational(0)
    else:
        lam = nth_root(spectral_radius(candidates[0].value).value,
                       candidates[0].length)
    exhausted = not open_leaves
    if exhausted:
        ub = lam
    else:
        ub = lam
        for leaf in open_leaves:
            nsq = spectral_radius(leaf.value @ leaf.value.transpose())
            # ||leaf||^(1/len) = (norm_sq)^(1/(2 len))
            cand = nth_root(nsq.value, 2 * leaf.length) if nsq.value.sign() > 0 \
                else RealAlgebraic.from_rational(0)
            if compare(cand, ub) == Ordering.GREATER:
                ub = cand
    return CandidateSet(lam, candidates, ub, depth_reached, exhausted,
                        stats["nodes"], stats["fro"], stats["two"])


def _prune_rational_norm(norm_sq: Fraction, length: int, best: _Best,
                         slack: Fraction) -> bool:
    if best.rho_is_zero:
        return False
    m, l = best.length, length
    sigma = (1 - slack) ** (2 * l * m)
    lhs = norm_sq**m
    rhs = best.rho.pow(2 * l).scale(sigma)
    return compare(RealAlgebraic.from_rational(lhs), rhs) == Ordering.LESS


def _two_norm_sq_fast(A: IntMatrix) -> RealAlgebraic:
    return largest_real_root_fast(char_poly(A.transpose() @ A))


def _scalar_multiple(A: IntMatrix, B: IntMatrix) -> Fraction | None:
    """c with A == c*B, or None.  Zero matrices yield c=0 only if A==0."""
    c = None
    for ra, rb in zip(A.rows, B.rows):
        for a, b in zip(ra, rb):
            if b == 0:
                if a != 0:
                    return None
            else:
                q = Fraction(a, b)
                if c is None:
                    c = q
                elif c != q:
                    return None
    if c is None:  # B == 0
        return Fraction(0) if A.is_zero() else None
    # all-zero columns of B already checked entrywise
    return c


def _assemble_candidates(raw: list[Product], family: MatrixFamily) -> list[Product]:
    """Canonicalize, deduplicate, and drop matrix-redundant tying words.

    A longer tying word whose canonical form evaluates to the same
    matrix as a shorter kept candidate adds no new spectral information
    (it arises from identities like A^3 = A) and is dropped.
    """
    if not raw:
        return []
    seen: dict[tuple[int, ...], Product] = {}
    for p in raw:
        cw = canonical_word(p.word)
        if cw not in seen:
            seen[cw] = evaluate(cw, family)
    ordered = sorted(seen.values(), key=lambda p: (p.length, p.word))
    kept: list[Product] = []
    for p in ordered:
        if any(k.length < p.length and k.value == p.value for k in kept):
            continue
        kept.append(p)
    return kept


def spectral_gap_estimate(family: MatrixFamily, candidates: list[Product],
                          lam: RealAlgebraic, depth: int) -> Fraction | None:
    """Rational upper bound < 1 on normalized non-candidate spectral radii.

    Enumerates every product of length <= depth.  A product tying lam is
    benign when its canonical form evaluates to a scalar multiple of a
    candidate's matrix (it carries the same eigeninformation); any other
    tie means no usable spectral gap and None is returned.  A
    single-matrix family with no non-candidate products yields 0.
    """
    cand_words = {p.word for p in candidates}
    cand_values = [p.value for p in candidates]
    gap = Fraction(0)
    benign_cache: dict[tuple[int, ...], bool] = {}
    stack: list[tuple[tuple[int, ...], IntMatrix]] = [
        ((j,), family[j - 1]) for j in range(1, len(family) + 1)]
    while stack:
        word, value = stack.pop()
        cw = canonical_word(word)
        if cw not in cand_words:
            rho = spectral_radius(value).value
            if lam.sign() == 0:
                if rho.sign() != 0:
                    return None  # lambda is not even maximal
                tie = True
            else:
                c = compare(rho, lam.pow(len(word)))
                if c == Ordering.GREATER:
                    return None
                tie = c == Ordering.EQUAL
            if tie:
                if cw not in benign_cache:
                    cv = evaluate(cw, family).value
                    benign_cache[cw] = any(
                        _scalar_multiple(cv, k) is not None for k in cand_values)
                if not benign_cache[cw]:
                    return None
            elif rho.sign() > 0:
                avg = nth_root(rho, len(word))
                gap = max(gap, _ratio_upper_bound(avg, lam))
        if len(word) < depth:
            for j in range(1, len(family) + 1):
                stack.append((word + (j,), family[j - 1] @ value))
    return gap


def _ratio_upper_bound(num: RealAlgebraic, den: RealAlgebraic) -> Fraction:
    """A rational q < 1 with num <= q * den, for exact num < den."""
    guard = 0
    while True:
        nlo, nhi = num.interval()
        dlo, dhi = den.interval()
        if dlo > 0 and nhi / dlo < 1:
            return max(nhi, Fraction(0)) / dlo
        num.refine()
        den.refine()
        guard += 1
        if guard > 200:
            raise RuntimeError("gap ratio refinement stalled")
