import math

import numpy as np
import pytest

from app.errors import BudgetExceededError, DomainError, UnsupportedRangeError
from app.schur_efm import (
    Configuration,
    block_project,
    class_eigenvalues,
    class_operator,
    gl_dimension,
    hook_dimension,
    intrinsic_class_operator,
    schur_basis,
    tensor_power_mixture_entropy,
    young_diagrams,
)
from tests.oracles import mixture_entropy_dense, random_density, tensor_power

INV_SQRT2 = 1.0 / math.sqrt(2.0)


class TestDiagrams:
    def test_young_diagrams_of_four(self) -> None:
        assert young_diagrams(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]

    def test_row_limit(self) -> None:
        assert young_diagrams(4, max_rows=2) == [(4,), (3, 1), (2, 2)]

    def test_hook_dimension(self) -> None:
        assert hook_dimension((2, 1)) == 2
        assert hook_dimension((3, 2)) == 5
        assert sum(hook_dimension(nu) ** 2 for nu in young_diagrams(6)) == math.factorial(6)

    def test_gl_dimension(self) -> None:
        assert gl_dimension((3,), 8) == 120
        assert gl_dimension((2, 1), 8) == 168
        assert gl_dimension((1, 1, 1), 8) == 56
        assert gl_dimension((1, 1, 1), 2) == 0

    def test_class_eigenvalues_of_small_diagrams(self) -> None:
        assert class_eigenvalues((2,)) == (1, 0)
        assert class_eigenvalues((1, 1)) == (-1, 0)
        assert class_eigenvalues((3,)) == (3, 2)
        assert class_eigenvalues((1, 1, 1)) == (-3, 2)

    def test_class_eigenvalues_of_a_three_row_diagram(self) -> None:
        assert class_eigenvalues((4, 2, 1)) == (3, -2)

    def test_class_eigenvalues_separate_diagrams(self) -> None:
        for n in range(1, 15):
            keys = [class_eigenvalues(nu) for nu in young_diagrams(n)]
            assert len(set(keys)) == len(keys)


class TestConfiguration:
    def test_words_are_sorted_multiset_permutations(self) -> None:
        config_ = Configuration((1, 2))
        assert config_.words().tolist() == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
        assert config_.dimension == 3
        assert config_.chain == [1, 3]

    def test_class_operator_is_symmetric_and_commutes(self) -> None:
        config_ = Configuration((1, 1, 2))
        c4 = class_operator(4, 2, 4, config_)
        c3 = class_operator(4, 2, 3, config_)
        assert np.allclose(c4, c4.T)
        assert np.allclose(c4 @ c3, c3 @ c4)

    def test_regular_representation_spectrum(self) -> None:
        transpositions = class_operator(3, 2, 3, Configuration((1, 1, 1)))
        assert np.linalg.eigvalsh(transpositions) == pytest.approx([-3.0, 0.0, 0.0, 0.0, 0.0, 3.0], abs=1e-12)


class TestIntrinsicClassOperator:
    @pytest.mark.parametrize("cycle_len", [2, 3])
    def test_full_group_matches_ordinary_operator_on_regular_representation(self, cycle_len: int) -> None:
        config_ = Configuration((1, 1, 1, 1))
        intrinsic = intrinsic_class_operator(4, cycle_len, 4, config_)
        assert np.array_equal(intrinsic, class_operator(4, cycle_len, 4, config_))

    def test_commutes_with_ordinary_operators(self) -> None:
        config_ = Configuration((1, 0, 1, 2))
        assert config_.chain == [1, 2, 4]
        ordinary = [class_operator(4, cycle_len, k, config_) for cycle_len in (2, 3) for k in range(2, 5)]
        for index in range(1, len(config_.chain) + 1):
            for cycle_len in (2, 3):
                intrinsic = intrinsic_class_operator(4, cycle_len, index, config_)
                for other in ordinary:
                    assert np.allclose(intrinsic @ other, other @ intrinsic, atol=1e-12)

    def test_chain_index_out_of_range(self) -> None:
        with pytest.raises(DomainError):
            intrinsic_class_operator(4, 2, 4, Configuration((1, 0, 1, 2)))


class TestQubitPair:
    def test_singlet_and_triplet(self) -> None:
        basis = schur_basis(2, 2)
        assert [vector.nu for vector in basis.vectors] == [(2,), (2,), (2,), (1, 1)]
        labelled = [dict(zip(vector.word_labels(), vector.coeffs)) for vector in basis.vectors]
        assert labelled[0] == pytest.approx({"αα": 1.0})
        assert labelled[1] == pytest.approx({"αβ": INV_SQRT2, "βα": INV_SQRT2})
        assert labelled[2] == pytest.approx({"ββ": 1.0})
        assert labelled[3] == pytest.approx({"αβ": INV_SQRT2, "βα": -INV_SQRT2})


class TestThreeQutrits:
    def test_antisymmetric_vector(self) -> None:
        basis = schur_basis(3, 3)
        (vector,) = basis.irreps()[(1, 1, 1)]
        labelled = dict(zip(vector.word_labels(), vector.coeffs))
        words = ["αβγ", "αγβ", "βαγ", "βγα", "γαβ", "γβα"]
        signs = [1, -1, -1, 1, 1, -1]
        for word, sign in zip(words, signs):
            assert labelled[word] == pytest.approx(sign / math.sqrt(6.0), abs=1e-12)

    def test_block_dimensions_for_eight_levels(self) -> None:
        basis = schur_basis(3, 8)
        counts = {nu: len(vectors) for nu, vectors in basis.irreps().items()}
        assert counts == {(3,): 120, (2, 1): 2 * 168, (1, 1, 1): 56}


class TestCompleteness:
    @pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (4, 2), (3, 3), (4, 3), (5, 2), (2, 4)])
    def test_basis_is_orthonormal_and_complete(self, n: int, q: int) -> None:
        basis = schur_basis(n, q)
        matrix = basis.dense_matrix()
        assert matrix.shape == (q**n, q**n)
        assert np.allclose(matrix @ matrix.T, np.eye(q**n), atol=1e-10)
        assert sum(gl_dimension(nu, q) * hook_dimension(nu) for nu in basis.irreps()) == q**n

    def test_irrep_sizes(self) -> None:
        basis = schur_basis(4, 3)
        for nu, vectors in basis.irreps().items():
            assert len(vectors) == gl_dimension(nu, 3) * hook_dimension(nu)

    def test_sort_order_is_descending(self) -> None:
        basis = schur_basis(4, 2)
        keys = [vector.sort_key(2) for vector in basis.vectors]
        assert keys == sorted(keys, reverse=True)

    def test_budget(self) -> None:
        with pytest.raises(BudgetExceededError):
            schur_basis(4, 3, budget=10)

    def test_unsupported_size(self) -> None:
        with pytest.raises(UnsupportedRangeError):
            schur_basis(15, 2)


class TestProjection:
    @pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2), (2, 4)])
    def test_off_block_mass_vanishes(self, n: int, q: int) -> None:
        rng = np.random.default_rng(n * 10 + q)
        rho = random_density(q, rng)
        basis = schur_basis(n, q)
        matrix = basis.dense_matrix()
        rotated = matrix @ tensor_power(rho, n) @ matrix.T
        labels = [(vector.nu, vector.tableau) for vector in basis.vectors]
        same = np.array([[a == b for b in labels] for a in labels])
        assert np.max(np.abs(rotated[~same])) <= 1e-9

    def test_blocks_reproduce_trace(self) -> None:
        rng = np.random.default_rng(7)
        rho = random_density(3, rng)
        blocks = block_project(schur_basis(3, 3), rho)
        total = sum(block.multiplicity * np.trace(block.block) for block in blocks)
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_blocks_do_not_depend_on_young_tableau(self) -> None:
        rng = np.random.default_rng(11)
        rho = random_density(3, rng)
        basis = schur_basis(3, 3)
        tableaux = sorted({vector.tableau for vector in basis.irreps()[(2, 1)]})
        assert len(tableaux) == 2
        first, second = ({block.nu: block.block for block in block_project(basis, rho, t)} for t in tableaux)
        assert first.keys() == second.keys()
        for nu, block in first.items():
            assert np.allclose(block, second[nu], atol=1e-12)

    @pytest.mark.parametrize("n,q", [(2, 4), (3, 2), (3, 4)])
    def test_mixture_entropy_matches_dense(self, n: int, q: int) -> None:
        rng = np.random.default_rng(n + q)
        rho_a, rho_b = random_density(q, rng), random_density(q, rng)
        expected = mixture_entropy_dense(rho_a, rho_b, n, 0.3, 0.7)
        assert tensor_power_mixture_entropy(schur_basis(n, q), rho_a, rho_b, 0.3, 0.7) == pytest.approx(
            expected, abs=1e-9
        )
