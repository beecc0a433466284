import pytest

from app.channels import (
    PauliDist,
    ProtocolKind,
    bb84_t_range,
    depolarizing,
    effective_dist,
    parse_protocol,
)
from app.errors import DomainError


class TestPauliDist:
    def test_depolarizing_weights(self) -> None:
        dist = depolarizing(0.3)
        assert dist.as_array() == pytest.approx([0.7, 0.1, 0.1, 0.1])
        assert dist.flip == pytest.approx(0.2)

    def test_must_sum_to_one(self) -> None:
        with pytest.raises(DomainError):
            PauliDist(0.5, 0.1, 0.1, 0.1)

    def test_negative_weight_raises(self) -> None:
        with pytest.raises(DomainError):
            PauliDist(1.1, -0.1, 0.0, 0.0)

    def test_depolarizing_out_of_range(self) -> None:
        with pytest.raises(DomainError):
            depolarizing(1.2)


class TestEffectiveDist:
    def test_bb84_defaults_to_independent_errors(self) -> None:
        p = 0.1
        dist = effective_dist(ProtocolKind.BB84, p)
        assert dist.as_array() == pytest.approx([(1 - p) ** 2, p * (1 - p), p * p, p * (1 - p)])

    def test_bb84_bit_error_rate_is_p_for_any_t(self) -> None:
        for t in (0.0, 0.02, 0.1):
            assert effective_dist("bb84", 0.1, t).flip == pytest.approx(0.1)

    def test_bb84_infeasible_t(self) -> None:
        with pytest.raises(DomainError):
            effective_dist(ProtocolKind.BB84, 0.1, 0.2)

    def test_six_state_is_isotropic(self) -> None:
        dist = effective_dist(ProtocolKind.SIX_STATE, 0.12)
        assert dist.as_array() == pytest.approx([0.82, 0.06, 0.06, 0.06])
        assert dist.flip == pytest.approx(0.12)

    def test_six_state_takes_no_t(self) -> None:
        with pytest.raises(DomainError):
            effective_dist(ProtocolKind.SIX_STATE, 0.1, 0.01)

    def test_t_range(self) -> None:
        assert bb84_t_range(0.1) == (0.0, 0.1)
        assert bb84_t_range(0.7) == pytest.approx((0.4, 0.7))


class TestParseProtocol:
    @pytest.mark.parametrize("value", ["six-state", "SixState", "6-state", " six_state "])
    def test_six_state_aliases(self, value: str) -> None:
        assert parse_protocol(value) is ProtocolKind.SIX_STATE

    def test_bb84(self) -> None:
        assert parse_protocol("BB84") is ProtocolKind.BB84

    def test_unknown(self) -> None:
        with pytest.raises(DomainError):
            parse_protocol("e91")
