import pytest

from app.capacity import (
    CapacityQuery,
    cat_rate,
    conc_rate,
    hashing_rate,
    one_shot_capacity,
    pmax_capacity,
    pmax_profile,
)
from app.channels import PauliDist, depolarizing


class TestRates:
    def test_hashing_rate_of_noiseless_channel(self) -> None:
        assert hashing_rate(PauliDist(1.0, 0.0, 0.0, 0.0)) == 1.0

    def test_hashing_rate_is_not_clamped(self) -> None:
        assert hashing_rate(depolarizing(0.3)) < 0.0

    def test_one_shot_equals_hashing(self) -> None:
        for p in (0.0, 0.05, 0.1893, 0.3):
            assert one_shot_capacity(p) == pytest.approx(hashing_rate(depolarizing(p)), abs=1e-12)

    def test_trivial_concatenation_is_hashing(self) -> None:
        query = CapacityQuery.depolarizing(1, 1, 0.1)
        assert conc_rate(query) == pytest.approx(hashing_rate(query.dist), abs=1e-12)

    def test_cat_rate_matches_concatenated_path(self) -> None:
        dist = depolarizing(0.19)
        for m in (2, 5, 8):
            assert cat_rate(m, dist) == pytest.approx(conc_rate(CapacityQuery(m, 1, dist)), abs=1e-12)

    @pytest.mark.parametrize("m1,m2", [(1, 1), (3, 1), (2, 3), (4, 2)])
    def test_noiseless_channel_rate(self, m1: int, m2: int) -> None:
        assert conc_rate(CapacityQuery.depolarizing(m1, m2, 0.0)) == pytest.approx(1.0 / (m1 * m2), abs=1e-15)

    def test_cat_code_beats_hashing_near_threshold(self) -> None:
        dist = depolarizing(0.19)
        assert hashing_rate(dist) < 0.0
        assert cat_rate(5, dist) > 0.0


class TestThresholds:
    def test_hashing_threshold(self) -> None:
        assert pmax_capacity(1, 1) == pytest.approx(0.189290, abs=1e-5)

    def test_cat_code_profile_peaks_at_five(self) -> None:
        profile = dict((m, pmax_capacity(m, 1)) for m in range(2, 10))
        best = max(profile, key=profile.get)
        assert best == 5
        assert profile[5] == pytest.approx(0.190356, abs=1e-5)
        increasing = [profile[m] for m in range(2, 6)]
        assert increasing == sorted(increasing)
        decreasing = [profile[m] for m in range(5, 10)]
        assert decreasing == sorted(decreasing, reverse=True)

    def test_profile_helper(self) -> None:
        profile = pmax_profile(1, [1, 2])
        assert [m2 for m2, _ in profile] == [1, 2]
        assert profile[0][1] == pytest.approx(0.189290, abs=1e-5)

    @pytest.mark.slow
    def test_concatenated_3_19(self) -> None:
        assert pmax_capacity(3, 19) == pytest.approx(0.190857, abs=1e-5)

    @pytest.mark.slow
    def test_concatenated_5_16(self) -> None:
        assert pmax_capacity(5, 16) == pytest.approx(0.190877, abs=1e-5)

    @pytest.mark.slow
    @pytest.mark.long
    def test_concatenated_5_22(self) -> None:
        assert pmax_capacity(5, 22) == pytest.approx(0.190996, abs=1e-5)

    @pytest.mark.slow
    @pytest.mark.long
    def test_three_bit_inner_profile_peaks_at_longest_outer_block(self) -> None:
        profile = dict(pmax_profile(3, range(1, 20)))
        assert max(profile, key=profile.get) == 19
