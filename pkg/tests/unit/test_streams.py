"""Tests for keyed random streams."""

from __future__ import annotations

import numpy as np
import pytest

from boundary_mipt.core.streams import StreamTag, TrajectoryStreams, keyed_rng


class TestKeyedRng:
    def test_same_key_same_draws(self) -> None:
        a = keyed_rng(1, 2, StreamTag.GATES, 3, 4).random(8)
        b = keyed_rng(1, 2, StreamTag.GATES, 3, 4).random(8)
        assert np.array_equal(a, b)

    def test_keys_are_independent(self) -> None:
        base = keyed_rng(1, 2, StreamTag.GATES, 3).random(8)
        assert not np.array_equal(base, keyed_rng(1, 2, StreamTag.EDGE_WEIGHTS, 3).random(8))
        assert not np.array_equal(base, keyed_rng(1, 3, StreamTag.GATES, 3).random(8))
        assert not np.array_equal(base, keyed_rng(1, 2, StreamTag.GATES, 4).random(8))

    def test_negative_key_rejected(self) -> None:
        with pytest.raises(ValueError, match="non-negative"):
            keyed_rng(0, -1, StreamTag.ORACLE)


class TestTrajectoryStreams:
    def test_edge_weights_in_range(self, streams: TrajectoryStreams) -> None:
        weights = streams.edge_weights(2, 500, 7)
        assert weights.min() >= 1
        assert weights.max() <= 6

    def test_row_draws_do_not_depend_on_order(self) -> None:
        first = TrajectoryStreams(4, 0)
        second = TrajectoryStreams(4, 0)
        later = first.edge_weights(5, 10, 5)
        first.edge_weights(1, 10, 5)
        assert np.array_equal(second.edge_weights(5, 10, 5), later)

    @pytest.mark.parametrize(("p_x", "expected"), [(0.0, False), (1.0, True)])
    def test_basis_mask_extremes(
        self, streams: TrajectoryStreams, p_x: float, expected: bool
    ) -> None:
        assert np.all(streams.x_basis_mask(3, 16, p_x) == expected)

    def test_gate_draws_shapes(self, streams: TrajectoryStreams) -> None:
        presence, choice = streams.gate_draws(0, 2, 1, 5, 720)
        assert presence.shape == choice.shape == (5,)
        assert np.all((choice >= 0) & (choice < 720))
