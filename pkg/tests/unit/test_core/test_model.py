"""
Unit Tests for the game model
"""

import math

import numpy as np
import pytest

from app.core.errors import DomainViolation, InputError, InstanceStructureError
from app.core.model import (
    CostTable,
    Instance,
    InstanceSpec,
    SharingTable,
    cost_table,
    power_instance,
    power_sharing,
    random_instance,
    require_valid,
    social_optimum,
    threshold_welfare,
    validate_instance,
    welfare_count,
    welfare_of_set,
)


def test_power_sharing_repeats_first_value():
    table = power_sharing(0.5, 4)
    assert table.values[0] == table.values[1] == 1.0
    assert table.values[4] == pytest.approx(0.5)


def test_cost_families():
    assert cost_table("constant", 0.4, 3).values == pytest.approx((0.0, 0.2, 0.2, 0.2))
    assert cost_table("linear", 1.0, 3).values == pytest.approx((0.0, 0.1, 0.2, 0.3))
    quadratic = cost_table("quadratic", 1.0, 3).values
    assert quadratic == pytest.approx((0.0, 0.02, 0.08, 0.18))


def test_table_cost_family_needs_values():
    with pytest.raises(InputError):
        cost_table("table", 1.0, 3)


def test_instance_spec_builds_both_forms(two_agent_spec, power_spec, two_agent_game):
    assert InstanceSpec(**two_agent_spec).build() == two_agent_game
    inst = InstanceSpec(**power_spec).build()
    assert inst == power_instance(5, 0.8, 0.5, "constant", 0.5)


def test_two_agent_game_is_valid(two_agent_game):
    report = validate_instance(two_agent_game)
    assert report.ok
    require_valid(two_agent_game)


def test_increasing_sharing_is_flagged():
    inst = Instance(
        n_agents=2,
        prior1=0.5,
        sharing=SharingTable(values=(1.0, 1.0, 1.2)),
        costs=CostTable(values=(0.0, 0.1, 0.2)),
    )
    report = validate_instance(inst)
    clauses = {v.clause for v in report.violations}
    assert "F decreasing" in clauses
    assert "nF(n) concave" in clauses
    with pytest.raises(DomainViolation):
        require_valid(inst)


def test_short_tables_are_structural_errors():
    inst = Instance(
        n_agents=3,
        prior1=0.5,
        sharing=SharingTable(values=(1.0, 1.0, 0.6)),
        costs=CostTable(values=(0.0, 0.1, 0.2, 0.3)),
    )
    with pytest.raises(InstanceStructureError):
        validate_instance(inst)


def test_welfare_functions(two_agent_game):
    assert welfare_of_set(two_agent_game, 1, [1]) == pytest.approx(0.5)
    assert welfare_of_set(two_agent_game, 1, [1, 2]) == pytest.approx(0.1)
    assert welfare_of_set(two_agent_game, 0, [2]) == pytest.approx(-0.6)
    assert welfare_of_set(two_agent_game, 1, []) == 0.0
    assert welfare_count(two_agent_game, 2) == pytest.approx(0.1)
    assert threshold_welfare(two_agent_game, 0.8, 1) == pytest.approx(0.3)


def test_welfare_rejects_bad_arguments(two_agent_game):
    with pytest.raises(InstanceStructureError):
        welfare_of_set(two_agent_game, 1, [3])
    with pytest.raises(InputError):
        welfare_of_set(two_agent_game, 2, [1])
    with pytest.raises(InputError):
        threshold_welfare(two_agent_game, 1.5, 1)


def test_social_optimum(two_agent_game):
    i_star, value = social_optimum(two_agent_game)
    assert i_star == 1
    assert value == pytest.approx(0.4)


def test_social_optimum_matches_brute_force(rng):
    for _ in range(20):
        inst = random_instance(rng, 7)
        values = [welfare_count(inst, n) for n in range(8)]
        i_star, value = social_optimum(inst)
        assert values[i_star] == pytest.approx(max(values))
        assert value == pytest.approx(inst.prior1 * max(values))


def test_fingerprint_tracks_content(two_agent_game):
    same = Instance(**two_agent_game.model_dump())
    assert same.fingerprint() == two_agent_game.fingerprint()
    assert two_agent_game.with_prior(0.3).fingerprint() != two_agent_game.fingerprint()


def test_random_instances_are_valid(rng):
    for n in (1, 3, 9):
        assert validate_instance(random_instance(rng, n)).ok


def test_zero_agent_game_rejected():
    with pytest.raises(ValueError):
        Instance(
            n_agents=0,
            prior1=0.5,
            sharing=SharingTable(values=(1.0,)),
            costs=CostTable(values=(0.0,)),
        )


def test_power_sharing_alpha_zero_is_flat():
    assert np.allclose(power_sharing(0.0, 3).array, 1.0)
    assert not math.isnan(power_sharing(0.9, 20).values[-1])


def test_nf_must_increase():
    inst = Instance(
        n_agents=3,
        prior1=0.5,
        sharing=SharingTable(values=(1.0, 1.0, 0.4, 0.35)),
        costs=CostTable(values=(0.0, 0.1, 0.1, 0.1)),
    )
    messages = validate_instance(inst).messages()
    assert "nF(n) not increasing at n=1→2" in messages


def test_social_optimum_power_law():
    inst = power_instance(20, 0.8, 0.8, "constant", 0.1)
    assert social_optimum(inst)[0] == 6
    assert social_optimum(inst.with_prior(0.0))[1] == 0.0


def test_threshold_welfare_examples(two_agent_game):
    assert threshold_welfare(two_agent_game, 0.7, 1) == pytest.approx(0.2)
    assert threshold_welfare(two_agent_game, 1.0, 2) == pytest.approx(0.1)
    assert threshold_welfare(two_agent_game, 0.4, 0) == 0.0
    assert welfare_of_set(two_agent_game, 0, [1, 2]) == pytest.approx(-1.1)
