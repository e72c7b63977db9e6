import pytest

from walkval.numth import digit_sum
from walkval.verify import (
    SCENARIO_NAMES,
    failures,
    get_scenario,
    render_rows,
    run_scenario,
    ternary_equality_shape,
)
from walkval.walks import no_adjacent_ones, ones_before_zeros


def test_prop_odd_rows():
    rows = run_scenario(get_scenario("prop-odd"), 256)
    assert not failures(rows)
    assert [r.n for r in rows if r.equal] == [n for n in range(1, 257) if no_adjacent_ones(n)]


def test_prop_mult_k2():
    rows = run_scenario(get_scenario("prop-mult", k=2), 128)
    assert not failures(rows)
    assert all(r.bound == digit_sum(r.n, 2) + 1 for r in rows)
    assert [r.n for r in rows if r.equal] == [n for n in range(1, 129) if ones_before_zeros(n)]


def test_prop_tri_some_rows():
    rows = run_scenario(get_scenario("prop-tri"), 81)
    assert not failures(rows)
    assert [r.n for r in rows if r.equal] == [n for n in range(1, 82) if ternary_equality_shape(n)]


def test_ternary_shape():
    assert ternary_equality_shape(1) and ternary_equality_shape(3) and ternary_equality_shape(10)
    assert not ternary_equality_shape(2) and not ternary_equality_shape(4)   # 2, 11
    assert not ternary_equality_shape(11)                                    # 102


def test_identity_scenarios_start_at_zero():
    rows = run_scenario(get_scenario("identity-X"), 10)
    assert rows[0].n == 0 and not failures(rows)


def test_bad_scenarios():
    with pytest.raises(ValueError):
        get_scenario("prop-nope")
    with pytest.raises(ValueError):
        get_scenario("theorem-c", d=8)
    with pytest.raises(ValueError):
        get_scenario("prop-pow", e=1)
    with pytest.raises(ValueError):
        get_scenario("prop-gdomb", a=1, b=0)
    with pytest.raises(ValueError):
        get_scenario("prop-prime", p=4)
    with pytest.raises(ValueError):
        get_scenario("prop-odd", k=1)


def test_parallel_is_deterministic():
    sc = get_scenario("theorem-c", d=12)
    one = render_rows(sc, run_scenario(sc, 40))
    three = render_rows(sc, run_scenario(sc, 40, jobs=3))
    assert one == three
    assert one.splitlines()[0] == "#scenario theorem-c d=12 rows=40 failures=0"


def test_every_scenario_runs_small():
    for name in SCENARIO_NAMES:
        rows = run_scenario(get_scenario(name), 6)
        assert rows and not failures(rows), name


def test_json_render():
    import json

    sc = get_scenario("prop-pow", e=3)
    obj = json.loads(render_rows(sc, run_scenario(sc, 5), "json"))
    assert obj["params"] == {"e": 3} and obj["failures"] == 0 and len(obj["rows"]) == 5
