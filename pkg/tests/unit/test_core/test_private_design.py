"""
Unit Tests for private mechanism design
"""

import math

import numpy as np
import pytest

from app.core.errors import InputError, TrivialMechanismSignal
from app.core.model import (
    CostTable,
    Instance,
    SharingTable,
    power_instance,
    random_instance,
    social_optimum,
)
from app.core.private_design import (
    PrivateMechanism,
    bound_document,
    build_lp2,
    fast_path,
    marginal_index,
    persuasion_bound,
    solve_private,
    verify_persuasive_marginals,
)


@pytest.fixture
def cheap_pair():
    """Both agents belong at the second location: i* = N"""
    return Instance(
        n_agents=2,
        prior1=0.9,
        sharing=SharingTable(values=(1.0, 1.0, 0.6)),
        costs=CostTable(values=(0.0, 0.1, 0.1)),
    )


def test_marginal_index():
    assert marginal_index(3, 1, 1) == 0
    assert marginal_index(3, 2, 1) == 3
    assert marginal_index(3, 3, 3) == 8


def test_lp2_shape(two_agent_game):
    lp = build_lp2(two_agent_game)
    assert lp.n_variables == 4
    # move and stay per agent, cardinality, N^2 matroid rows
    assert lp.n_constraints == 2 + 2 + 1 + 4
    assert lp.variable_names[1] == "p_1_2"


def test_lp2_signals_trivial_prior(two_agent_game):
    with pytest.raises(TrivialMechanismSignal):
        build_lp2(two_agent_game.with_prior(0.0))


def test_solve_private_two_agents(two_agent_game):
    mech = solve_private(two_agent_game)
    assert mech.objective == pytest.approx(0.4)
    assert mech.marginals == pytest.approx(np.array([[1.0, 0.0], [0.0, 0.0]]), abs=1e-9)
    assert not mech.fast_path
    assert verify_persuasive_marginals(two_agent_game, mech.marginals).ok


def test_zero_prior_gives_all_stay(two_agent_game):
    mech = solve_private(two_agent_game.with_prior(0.0))
    assert mech.objective == 0.0
    assert not mech.marginals.any()
    assert mech.size_dist == pytest.approx([1.0, 0.0, 0.0])


def test_persuasion_bound(two_agent_game, cheap_pair):
    assert persuasion_bound(two_agent_game) == pytest.approx(1.0)
    assert math.isinf(persuasion_bound(cheap_pair))
    inst = power_instance(3, 0.5, 0.5, "constant", 1.0)
    assert persuasion_bound(inst) == pytest.approx(0.5 * math.sqrt(2.0))


def test_fast_path_two_agents(two_agent_game):
    mech = fast_path(two_agent_game)
    assert mech is not None
    assert mech.fast_path
    assert mech.objective == pytest.approx(0.4)
    assert mech.marginals.tolist() == [[1.0, 0.0], [0.0, 0.0]]
    assert mech.size_dist == pytest.approx([0.0, 1.0, 0.0])


def test_fast_path_rejected_above_bound():
    inst = power_instance(3, 0.9, 0.5, "constant", 1.0)
    assert fast_path(inst) is None
    mech = solve_private(inst)
    assert mech.objective < social_optimum(inst)[1] - 1e-6


def test_fast_path_everyone_moves(cheap_pair):
    mech = fast_path(cheap_pair)
    assert mech.marginals.tolist() == [[0.0, 1.0], [0.0, 1.0]]
    assert mech.objective == pytest.approx(0.9 * 1.0)
    assert verify_persuasive_marginals(cheap_pair, mech.marginals).ok


def test_private_below_social_optimum(rng):
    for _ in range(10):
        inst = random_instance(rng, 6)
        mech = solve_private(inst)
        i_star, ceiling = social_optimum(inst)
        assert mech.objective <= ceiling + 1e-7
        assert verify_persuasive_marginals(inst, mech.marginals).ok
        if inst.prior1 <= persuasion_bound(inst):
            assert mech.objective == pytest.approx(ceiling, abs=1e-7)


def test_size_dist_and_conditional_marginals():
    p = np.array([[0.2, 0.3], [0.0, 0.3]])
    mech = PrivateMechanism(marginals=p, objective=0.0)
    assert mech.size_dist == pytest.approx([0.5, 0.2, 0.3])
    assert mech.cond_marginals == pytest.approx(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_verify_flags_matroid_and_cardinality(two_agent_game):
    lonely_pair = verify_persuasive_marginals(
        two_agent_game, np.array([[0.0, 1.0], [0.0, 0.0]])
    )
    assert not lonely_pair.ok
    assert lonely_pair.matroid == pytest.approx(1.0)

    crowded = verify_persuasive_marginals(
        two_agent_game, np.array([[1.0, 0.0], [1.0, 0.0]])
    )
    assert crowded.cardinality == pytest.approx(1.0)


def test_verify_flags_unpersuasive_move():
    # agent 2 pays 0.9 for a share of 0.6 when both move
    inst = Instance(
        n_agents=2,
        prior1=0.5,
        sharing=SharingTable(values=(1.0, 1.0, 0.6)),
        costs=CostTable(values=(0.0, 0.5, 0.9)),
    )
    report = verify_persuasive_marginals(inst, np.array([[0.0, 1.0], [0.0, 1.0]]))
    assert report.move == pytest.approx(0.3)
    assert not report.ok


def test_verify_rejects_wrong_shape(two_agent_game):
    with pytest.raises(InputError):
        verify_persuasive_marginals(two_agent_game, np.zeros((3, 3)))


def test_mechanism_document(two_agent_game):
    doc = fast_path(two_agent_game).to_document(two_agent_game)
    assert doc.kind == "private_mechanism"
    assert doc.fingerprint == two_agent_game.fingerprint()
    assert doc.payload["marginals"] == [[1.0, 0.0], [0.0, 0.0]]
    assert doc.payload["fast_path"] is True


def test_bound_document(two_agent_game, cheap_pair):
    payload = bound_document(two_agent_game).payload
    assert payload["i_star"] == 1
    assert payload["social_optimum"] == pytest.approx(0.4)
    assert payload["bound"] == pytest.approx(1.0)
    assert bound_document(cheap_pair).payload["bound"] is None


@pytest.fixture
def single_agent():
    return Instance(
        n_agents=1,
        prior1=0.5,
        sharing=SharingTable(values=(1.0, 1.0)),
        costs=CostTable(values=(0.0, 0.3)),
    )


def test_single_agent(single_agent):
    lp = build_lp2(single_agent)
    assert (lp.n_variables, lp.n_constraints) == (1, 4)
    mech = solve_private(single_agent)
    assert mech.marginals[0, 0] == pytest.approx(1.0)
    assert mech.objective == pytest.approx(0.35)


def test_lp2_size_at_twenty_agents():
    lp = build_lp2(power_instance(20, 0.5, 0.8, "constant", 0.1))
    assert (lp.n_variables, lp.n_constraints) == (400, 441)


def test_fast_path_power_law():
    inst = power_instance(20, 0.2, 0.8, "constant", 0.1)
    assert persuasion_bound(inst) == pytest.approx(0.237, abs=5e-4)
    mech = fast_path(inst)
    assert mech is not None
    assert mech.objective == pytest.approx(social_optimum(inst)[1])
    assert mech.marginals[:6, 5].tolist() == [1.0] * 6
    assert fast_path(inst.with_prior(0.5)) is None


@pytest.mark.parametrize(
    "alpha, family, coeff, expected",
    [(0.8, "constant", 0.2, 0.241), (0.6, "linear", 0.1, 0.464)],
)
def test_persuasion_bound_table_cells(alpha, family, coeff, expected):
    inst = power_instance(20, 0.5, alpha, family, coeff)
    assert persuasion_bound(inst) == pytest.approx(expected, abs=5e-4)


def test_all_stay_is_not_persuasive_at_high_prior(two_agent_game):
    report = verify_persuasive_marginals(two_agent_game, np.zeros((2, 2)))
    assert report.stay == pytest.approx(0.5 - 0.25 * 0.5)
    assert report.move == 0.0
    assert report.matroid == 0.0
