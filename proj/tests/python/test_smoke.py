import os
import subprocess
import tempfile

try:
    import tfel2048 as t
except ImportError:
    import _tfel as t


def test_board_and_moves():
    b = t.Board.parse("2,2,2,2")
    assert b.sum() == 8
    assert b.count_empty() == 0
    after = t.swipe(b, t.Direction.LEFT)
    assert after.render() == "4,4,0,0"
    assert t.swipe(after, t.Direction.RIGHT).render() == "0,0,0,8"
    assert t.swipe(t.Board.parse("2,0,0,0"), t.Direction.LEFT) is None
    moves = t.legal_moves(t.Board.parse("2,0;0,0"))
    assert set(moves) == {t.Direction.RIGHT, t.Direction.DOWN}


def test_spawn_and_goal():
    b = t.spawn(t.Board(1, 2), 0, 0, 2)
    assert b.render() == "2,0"
    assert t.goal_merge_reached(t.Board.parse("128,0,128,0"), 8)


def test_count_table():
    table = t.CountTable.build(2, 2, 4)
    assert table.layer_size(4) == 10
    sum_, index = table.rank(t.Board.parse("4,0;0,0"))
    assert (sum_, index) == (4, 9)
    assert table.unrank(4, 9).render() == "4,0;0,0"
    assert table.total_positions() == 3**4


def test_solvers():
    with tempfile.TemporaryDirectory() as tmp:
        win = t.solve_reach(2, 2, 8, os.path.join(tmp, "reach"))
        assert win is True
        assert t.query_reach(os.path.join(tmp, "reach"), t.Board(2, 2), "computer")

        raw, decimal = t.solve_prob(2, 2, 8, os.path.join(tmp, "prob"))
        assert 0 < raw < 2**32
        assert decimal.startswith("0.")


def test_lemma_check():
    report = t.check_lemma(playouts=200, depth=2, seed=1, workers=2)
    assert report["passed"]
    assert report["wins"] == report["playouts"] == 200


def test_cli_census():
    cli = os.environ.get("TFEL_CLI")
    if not cli:
        return
    out = subprocess.run(
        [cli, "census", "--rows", "4", "--cols", "4", "--goal", "256"],
        capture_output=True, text=True, check=True,
    ).stdout
    assert "1353817378016" in out
