import os
import subprocess

import pytest

import smgcheck

MICRO = """player 0 p1
player 1 p2
state 0 0
state 1 1
state 2 1
trans 0 a 1:0.3 2:0.7
trans 0 b 1:0.7 2:0.3
label "goal" 1
init 0
"""


@pytest.fixture
def micro():
    return smgcheck.Game.from_text(MICRO)


def test_game_shape(micro):
    assert micro.num_states == 3
    assert micro.players == ["p1", "p2"]
    assert micro.actions(0) == ["a", "b"]
    assert micro.labels["goal"] == [1]
    assert smgcheck.Game.from_text(micro.to_text()).to_text() == micro.to_text()


def test_check_and_witness(micro):
    result = smgcheck.check(micro, '<<p1>> Pmax=? [ F "goal" ]')
    assert result["value"] == pytest.approx(0.7)
    assert "0,-,b" in result["strategy"]
    replay = smgcheck.evaluate_under(micro, result["strategy"], '<<>> Pmax=? [ F "goal" ]')
    assert replay["value"] == pytest.approx(0.7)
    bound = smgcheck.check(micro, '<<p1>> P>=0.5 [ F "goal" ]')
    assert bound["holds"] is True


def test_oracle_agrees(micro):
    values = smgcheck.brute_force_value(micro, ["p1"], "goal", optimum="min")
    assert values[0] == pytest.approx(0.3)


def test_errors(micro):
    with pytest.raises(smgcheck.Error):
        smgcheck.parse_formula("<<p1>> P>=2 [ F \"goal\" ]")
    with pytest.raises(smgcheck.Error):
        smgcheck.check(micro, '<<nobody>> Pmax=? [ F "goal" ]')
    with pytest.raises(smgcheck.Error):
        smgcheck.trust_game(alpha=2)


def test_trust_game():
    tg = smgcheck.trust_game(k=3)
    assert tg.game.num_states > 1
    assert tg.describe(tg.initial).startswith("choose")
    unpaid = smgcheck.check(tg.game, '<<requester>> R{"unpaid"}max=? [ Fc "got_k" ]', tg.initial)
    assert 0 <= unpaid["value"] <= 3
    assert smgcheck.attack_feasible(alpha=0.5) == [True, True, True]
    assert smgcheck.attack_feasible(alpha=0.8) == [False, False, False]


def test_experiments():
    rows = smgcheck.fig1([(0.5, "2")], k_min=1, k_max=3)
    assert [r["k"] for r in rows] == [1, 2, 3]
    assert rows[0]["unpaid_max"] == pytest.approx(1.0)
    costs = smgcheck.fig2(k_min=1, k_max=2)
    assert {r["sharing"] for r in costs} == {"automatic", "strategic-optimal", "strategic-heuristic"}
    split = smgcheck.fig3(k=4)
    assert sum(r["received"] for r in split if r["pricing"] == "original") == pytest.approx(4.0)


@pytest.mark.skipif("SMGCHECK_CLI" not in os.environ, reason="command-line tool path not set")
def test_cli_exit_codes(tmp_path):
    cli = os.environ["SMGCHECK_CLI"]
    model = tmp_path / "micro.smg"
    model.write_text(MICRO)

    def run(*args):
        return subprocess.run([cli, *args], capture_output=True, text=True)

    holds = run("check", "-m", str(model), "-p", '<<p1>> P>=0.5 [ F "goal" ]')
    assert holds.returncode == 0
    assert "result: true" in holds.stdout
    fails = run("check", "-m", str(model), "-p", '<<p1>> P>=0.9 [ F "goal" ]')
    assert fails.returncode == 1
    bad = run("check", "-m", str(model), "-p", "<<p1>> P>=")
    assert bad.returncode == 2
    assert "error" in bad.stderr
