import math

import numpy as np
import pytest

from app.channels import PauliDist, depolarizing
from app.errors import BudgetExceededError, DomainError
from app.repcodes import (
    LOGICAL_ERRORS,
    CatSyndromeClass,
    ConcSyndromeClass,
    cat_conditional_entropy,
    cat_joint,
    cat_joint_table,
    class_count,
    conccat_conditional_entropy,
    conccat_joint,
    iter_conc_classes,
    reduce_conc_classes,
)
from tests.oracles import cat_joint_brute, conc_joint_brute, conc_syndrome_of_class, conditional_entropy

SKEWED = PauliDist(0.7, 0.12, 0.08, 0.1)


class TestCatCode:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_joint_matches_enumeration(self, m: int) -> None:
        brute = cat_joint_brute(m, SKEWED)
        for syndrome, column in brute.items():
            cls = CatSyndromeClass(m, sum(syndrome))
            for l in LOGICAL_ERRORS:
                assert cat_joint(l, cls, SKEWED) == pytest.approx(column.get(tuple(l), 0.0), abs=1e-12)

    def test_table_is_normalized(self) -> None:
        m = 6
        table = cat_joint_table(m, depolarizing(0.17))
        multiplicity = np.array([CatSyndromeClass(m, s).multiplicity for s in range(m)])
        assert float(table.sum(axis=0) @ multiplicity) == pytest.approx(1.0, abs=1e-12)

    def test_conditional_entropy_matches_enumeration(self) -> None:
        for m in (2, 3, 5):
            brute = conditional_entropy(cat_joint_brute(m, SKEWED))
            assert cat_conditional_entropy(m, SKEWED) == pytest.approx(brute, abs=1e-12)

    def test_single_qubit_is_full_entropy(self) -> None:
        dist = depolarizing(0.1)
        expected = -sum(x * math.log2(x) for x in dist.as_array())
        assert cat_conditional_entropy(1, dist) == pytest.approx(expected, abs=1e-12)


class TestConcClasses:
    def test_class_count_matches_enumeration(self) -> None:
        for m1, m2 in [(1, 1), (2, 3), (3, 2), (3, 4)]:
            classes = list(iter_conc_classes(m1, m2))
            assert len(classes) == class_count(m1, m2)
            assert len(set(classes)) == len(classes)

    def test_multiplicities_cover_all_syndromes(self) -> None:
        for m1, m2 in [(2, 3), (3, 3), (4, 2)]:
            total = sum(cls.multiplicity for cls in iter_conc_classes(m1, m2))
            assert total == 2 ** (m1 * m2 - 1)

    def test_invalid_frequency_vector(self) -> None:
        with pytest.raises(DomainError):
            ConcSyndromeClass(2, 3, 0, (1, 0, 0, 0))

    def test_budget_is_enforced(self) -> None:
        with pytest.raises(BudgetExceededError):
            reduce_conc_classes(3, 10, lambda beta1, freq, log_mult: 0.0, budget=10)

    def test_log_multiplicities_sum_to_syndrome_count(self) -> None:
        total = reduce_conc_classes(
            3, 4, lambda beta1, freq, log_mult: float(np.exp(log_mult).sum()), threads=1
        )
        assert total == pytest.approx(2.0 ** (3 * 4 - 1), rel=1e-12)


class TestConcatenatedCat:
    @pytest.mark.parametrize("m1,m2", [(2, 2), (2, 3), (3, 2)])
    def test_joint_matches_enumeration(self, m1: int, m2: int) -> None:
        brute = conc_joint_brute(m1, m2, SKEWED)
        for cls in iter_conc_classes(m1, m2):
            column = brute.get(conc_syndrome_of_class(m1, cls.beta1, cls.freq), {})
            for l in LOGICAL_ERRORS:
                assert conccat_joint(l, cls, SKEWED) == pytest.approx(column.get(tuple(l), 0.0), abs=1e-12)

    @pytest.mark.parametrize("m1,m2", [(2, 2), (2, 3), (3, 2), (1, 5)])
    def test_conditional_entropy_matches_enumeration(self, m1: int, m2: int) -> None:
        brute = conditional_entropy(conc_joint_brute(m1, m2, SKEWED))
        assert conccat_conditional_entropy(m1, m2, SKEWED, threads=1) == pytest.approx(brute, abs=1e-12)

    def test_single_outer_block_is_cat_code(self) -> None:
        for m in (1, 3, 6):
            assert conccat_conditional_entropy(m, 1, SKEWED) == pytest.approx(
                cat_conditional_entropy(m, SKEWED), abs=1e-12
            )

    def test_single_inner_qubit_is_dual_cat_code(self) -> None:
        dual = PauliDist(SKEWED.p_i, SKEWED.p_z, SKEWED.p_y, SKEWED.p_x)
        assert conccat_conditional_entropy(1, 7, SKEWED) == pytest.approx(
            cat_conditional_entropy(7, dual), abs=1e-12
        )

    def test_result_does_not_depend_on_threads(self) -> None:
        dist = depolarizing(0.19)
        single = conccat_conditional_entropy(3, 6, dist, threads=1)
        many = conccat_conditional_entropy(3, 6, dist, threads=4)
        assert single == many
