import numpy as np
import pytest

from conftest import BULLY_MEANS, N2_MEANS
from congestion_coalitions import core_model as cm
from congestion_coalitions import (DomainError, Partition, RewardModel, canonical_profile, coalition_utility,
                                   congestion_vector, eval_reward, fair_payoff, worth_records, zero_cost_worth,
                                   zero_cost_worths)


def test_eval_reward_equi_divisible():
    model = RewardModel.from_means(N2_MEANS, 2)
    assert eval_reward(model, 0, 2) == pytest.approx(0.5)
    five = RewardModel.from_means((0.55, 0.52, 0.5, 0.45, 0.3), 5)
    assert eval_reward(five, 4, 1) == pytest.approx(0.3)


def test_eval_reward_tabular_lookup():
    model = RewardModel.from_table([[0.6, 0.27], [0.5, 0.2]])
    assert model.mode == cm.TABULAR
    assert eval_reward(model, 0, 2) == 0.27


@pytest.mark.parametrize("link,k", [(-1, 1), (2, 1), (0, 0), (0, 3)])
def test_eval_reward_domain(link, k):
    with pytest.raises(DomainError):
        eval_reward(RewardModel.from_means(N2_MEANS, 2), link, k)


@pytest.mark.parametrize("table", [
    [[0.4, 0.2], [1.0, 0.5]],     # unsorted solo rewards
    [[1.0, 0.0], [0.4, 0.2]],     # zero reward
    [[1.0, -0.1]],
    [[1.0, np.inf]],
    [1.0, 0.5],                   # not 2-d
])
def test_reward_model_rejects_bad_tables(table):
    with pytest.raises(ValueError):
        RewardModel.from_table(table)


def test_reward_model_is_read_only():
    model = RewardModel.from_means(N2_MEANS, 2)
    with pytest.raises(ValueError):
        model.table[0, 0] = 3.0
    assert model.padded[:, 0].tolist() == [0.0, 0.0]


def test_with_first_mean():
    model = RewardModel.from_means(BULLY_MEANS, 5).with_first_mean(1.1)
    assert model.means.tolist() == [1.1, 0.52, 0.5, 0.45, 0.3]
    with pytest.raises(ValueError):
        model.with_first_mean(0.4)
    with pytest.raises(ValueError):
        RewardModel.from_table([[1.0, 0.5]]).with_first_mean(2.0)


def test_partition_invariants():
    assert Partition.of(1, 4).sizes == (4, 1)
    assert Partition((3, 1, 1)).starts == (0, 3, 4)
    assert str(Partition((2, 2, 1))) == "[2,2,1]"
    assert Partition((5,)).is_grand and Partition((1, 1)).is_all_alone
    for bad in [(1, 2), (0,), (), (2, -1)]:
        with pytest.raises(ValueError):
            Partition(bad)


def test_canonical_profile_sorts_blocks():
    p = Partition((2, 1))
    assert canonical_profile(p, (1, 0, 0)) == ((0, 1), (0,))
    assert canonical_profile(p, [[1, 0], [0]]) == ((0, 1), (0,))
    with pytest.raises(ValueError):
        canonical_profile(p, (0, 1))
    with pytest.raises(ValueError):
        canonical_profile(p, [[0], [0, 1]])


def test_congestion_vector_examples():
    assert congestion_vector((0, 0), 2).tolist() == [2, 0]
    assert congestion_vector(range(5), 5).tolist() == [1, 1, 1, 1, 1]
    assert congestion_vector(((0, 1, 2, 3), (0,)), 5).tolist() == [2, 1, 1, 1, 0]
    with pytest.raises(DomainError):
        congestion_vector((0, 5), 5)


def test_coalition_utility_examples():
    n2 = RewardModel.from_means(N2_MEANS, 2)
    alc = Partition((1, 1))
    assert coalition_utility(n2, alc, (0, 0), 0) == pytest.approx(0.5)
    assert zero_cost_worth(n2, alc, (0, 0), 1) == pytest.approx(0.5)
    assert zero_cost_worth(n2, Partition((2,)), (0, 1), 0) == pytest.approx(1.4)

    five = RewardModel.from_means(BULLY_MEANS, 5)
    gc = Partition((5,))
    assert coalition_utility(five, gc, tuple(range(5)), 0) == pytest.approx(2.37)
    assert coalition_utility(five, gc, tuple(range(5)), 0, beta=0.1) == pytest.approx(1.97)
    with pytest.raises(ValueError):
        coalition_utility(five, gc, tuple(range(5)), 0, beta=-0.1)


def test_worth_counts_outside_congestion():
    # the singleton shares link 0 with one member of the big coalition
    model = RewardModel.from_means(BULLY_MEANS, 5)
    worths = zero_cost_worths(model, Partition((4, 1)), ((0, 1, 2, 3), (0,)))
    assert worths == pytest.approx([0.3 + 0.52 + 0.5 + 0.45, 0.3])


def test_worth_records_linear_in_beta():
    model = RewardModel.from_means(BULLY_MEANS, 5)
    (rec,) = worth_records(model, Partition((5,)), tuple(range(5)))
    assert rec.size == 5 and rec.at(0.1) == pytest.approx(1.97)


def test_fair_payoff_examples():
    assert fair_payoff(Partition((5,)), [2.37]).values == pytest.approx([0.474] * 5)
    assert fair_payoff(Partition((1,)), [0.5]).values == pytest.approx([0.5])
    fair = fair_payoff(Partition((2, 1)), [1.4, 0.3])
    assert fair.values == pytest.approx([0.7, 0.7, 0.3]) and fair.feasible
    assert not fair_payoff(Partition((2, 1)), [-0.2, 0.3]).feasible
    with pytest.raises(ValueError):
        fair_payoff(Partition((2, 1)), [1.0])


def test_tolerance_context_restores():
    assert cm.EPS == 1e-9
    with cm.tolerance(1e-6):
        assert cm.EPS == 1e-6
    assert cm.EPS == 1e-9
    with pytest.raises(ValueError):
        with cm.tolerance(0):
            pass
