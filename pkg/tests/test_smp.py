import itertools
import random
from fractions import Fraction

import pytest

from jsrcert.algebraic import Ordering, RealAlgebraic, compare, nth_root
from jsrcert.matcore import (
    IntMatrix,
    MatrixFamily,
    Product,
    evaluate,
    spectral_radius,
)
from jsrcert.smp import (
    canonical_word,
    canonicalize_product,
    gripenberg_search,
    spectral_gap_estimate,
)

M = IntMatrix.make

# sqrt2-scaled showcase pair (3x3, integer forms)
B1 = M([[0, 0, -1], [0, 0, 0], [0, 1, 0]])
B2 = M([[1, 0, -1], [0, 0, -1], [-1, 0, -1]])

# the 2x2 mixed-sign demo pair
T1 = M([[0, 1], [0, 1]])
T2 = M([[1, 0], [1, -1]])


class TestCanonicalWord:
    def test_rotation(self):
        assert canonical_word((2, 1, 2)) == (1, 2, 2)

    def test_primitive_root(self):
        assert canonical_word((1, 2, 1, 2)) == (1, 2)

    def test_brute_force_oracle(self):
        # oracle: minimum over all rotations of all power-roots
        def oracle(w):
            n = len(w)
            best = None
            for d in range(1, n + 1):
                if n % d == 0 and w == w[:d] * (n // d):
                    for i in range(d):
                        r = w[:d][i:] + w[:d][:i]
                        if best is None or r < best:
                            best = r
            return best

        rng = random.Random(1)
        for _ in range(200):
            w = tuple(rng.randint(1, 2) for _ in range(rng.randint(1, 6)))
            assert canonical_word(w) == oracle(w)
        assert canonical_word((2, 2, 1, 2, 2, 1)) == oracle((2, 2, 1, 2, 2, 1)) == (1, 2, 2)

    def test_idempotent_and_constant_on_cyclic_classes(self):
        rng = random.Random(2)
        for _ in range(100):
            w = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 8)))
            c = canonical_word(w)
            assert canonical_word(c) == c
            for i in range(len(w)):
                assert canonical_word(w[i:] + w[:i]) == c

    def test_canonicalize_product(self):
        fam = MatrixFamily.make([T1, T2])
        p = evaluate((2, 1, 2), fam)
        c = canonicalize_product(p, fam)
        assert c.word == (1, 2, 2)
        assert c.value == evaluate((1, 2, 2), fam).value


class TestGripenbergShowcase3x3:
    def test_only_smp_is_second_matrix(self):
        fam = MatrixFamily.make([B1, B2])
        cs = gripenberg_search(fam, max_depth=8)
        assert cs.exhausted
        # lambda = sqrt2 (the scaled family's radius is 1)
        assert compare(cs.lambda_,
                       nth_root(RealAlgebraic.from_rational(2), 2)) == Ordering.EQUAL
        assert [c.word for c in cs.candidates] == [(2,)]
        assert compare(cs.upper_bound, cs.lambda_) == Ordering.EQUAL


class TestGripenbergDemo2x2:
    def test_both_single_letters_are_candidates(self):
        fam = MatrixFamily.make([T1, T2])
        cs = gripenberg_search(fam, max_depth=8)
        assert cs.exhausted
        assert cs.lambda_.as_rational() == 1
        assert [c.word for c in cs.candidates] == [(1,), (2,)]

    def test_singleton_family(self):
        fam = MatrixFamily.make([T2])
        cs = gripenberg_search(fam, max_depth=5)
        assert cs.exhausted
        assert cs.lambda_.as_rational() == 1
        assert [c.word for c in cs.candidates] == [(1,)]


class TestGripenbergBinaryPairs:
    def test_f2_pair_smp_length_five(self):
        # norm averages decay slowly here; the tree closes at depth 14
        fam = MatrixFamily.make([[[0, 1], [0, 0]], [[1, 0], [1, 1]]],
                                alphabet="binary")
        cs = gripenberg_search(fam, max_depth=14)
        assert cs.exhausted
        # lambda^5 = 4 exactly
        assert compare(cs.lambda_.pow(5), RealAlgebraic.from_rational(4)) == Ordering.EQUAL
        assert canonical_word((2, 2, 2, 2, 1)) in {c.word for c in cs.candidates}

    def test_lambda_monotone_in_depth(self):
        fam = MatrixFamily.make([[[0, 1], [0, 0]], [[1, 0], [1, 1]]],
                                alphabet="binary")
        prev = None
        for depth in (1, 2, 3, 5, 7):
            cs = gripenberg_search(fam, max_depth=depth)
            if prev is not None:
                assert compare(cs.lambda_, prev) != Ordering.LESS
            prev = cs.lambda_

    def test_sandwich_certified_by_exhaustive_enumeration(self):
        # for exhausted searches no product of length <= 8 beats lambda
        rng = random.Random(23)
        pairs_checked = 0
        while pairs_checked < 12:
            A = M([[rng.randint(0, 1) for _ in range(2)] for _ in range(2)])
            B = M([[rng.randint(0, 1) for _ in range(2)] for _ in range(2)])
            if A.is_zero() and B.is_zero():
                continue
            fam = MatrixFamily.make([A, B], alphabet="binary")
            cs = gripenberg_search(fam, max_depth=8)
            if not cs.exhausted:
                continue
            lam5 = None
            for n in range(1, 9):
                for word in itertools.product((1, 2), repeat=n):
                    rho = spectral_radius(evaluate(word, fam).value).value
                    # rho^(1/n) <= lambda  <=>  rho <= lambda^n
                    assert compare(rho, cs.lambda_.pow(n)) != Ordering.GREATER
            pairs_checked += 1

    def test_zero_family(self):
        fam = MatrixFamily.make([IntMatrix.zero(2)])
        cs = gripenberg_search(fam, max_depth=4)
        assert cs.lambda_.as_rational() == 0
        assert cs.exhausted


class TestSpectralGap:
    def test_demo_family_has_gap(self):
        fam = MatrixFamily.make([T1, T2])
        cs = gripenberg_search(fam, max_depth=8)
        g = spectral_gap_estimate(fam, cs.candidates, cs.lambda_, 6)
        assert g is not None and 0 <= g < 1

    def test_duplicated_identity_all_ties_benign(self):
        # every product of {I, I} equals a candidate matrix, so all ties
        # collapse onto the candidates and the non-candidate set is empty
        I = IntMatrix.identity(2)
        fam = MatrixFamily.make([I, I])
        cs = gripenberg_search(fam, max_depth=4)
        g = spectral_gap_estimate(fam, cs.candidates, cs.lambda_, 4)
        assert g == 0

    def test_genuine_tie_not_found(self):
        # candidate list restricted to A1 only: the tying matrix A2 is not
        # a scalar multiple of it, so no usable gap exists
        I = IntMatrix.identity(2)
        S = M([[0, 1], [1, 0]])
        fam = MatrixFamily.make([I, S])
        cs = gripenberg_search(fam, max_depth=4)
        g = spectral_gap_estimate(fam, [cs.candidates[0]], cs.lambda_, 3)
        assert g is None

    def test_singleton_zero_by_convention(self):
        fam = MatrixFamily.make([T2])
        cs = gripenberg_search(fam, max_depth=4)
        g = spectral_gap_estimate(fam, cs.candidates, cs.lambda_, 5)
        assert g == 0


class TestSymmetryInvariance:
    def test_lambda_invariant_under_group_images(self):
        rng = random.Random(31)
        perms = list(itertools.permutations(range(2)))
        for _ in range(8):
            A = M([[rng.randint(-1, 1) for _ in range(2)] for _ in range(2)])
            B = M([[rng.randint(-1, 1) for _ in range(2)] for _ in range(2)])
            if A.is_zero() and B.is_zero():
                continue
            fam = MatrixFamily.make([A, B])
            lam = gripenberg_search(fam, max_depth=6).lambda_
            images = [
                MatrixFamily.make([B, A]),
                MatrixFamily.make([A.transpose(), B.transpose()]),
                MatrixFamily.make([-A, B]),
                MatrixFamily.make([-A, -B]),
            ]
            for p in perms:
                Pm = M([[int(p[i] == j) for j in range(2)] for i in range(2)])
                images.append(MatrixFamily.make(
                    [Pm.transpose() @ A @ Pm, Pm.transpose() @ B @ Pm]))
            for g in images:
                lam2 = gripenberg_search(g, max_depth=6).lambda_
                assert compare(lam, lam2) == Ordering.EQUAL
