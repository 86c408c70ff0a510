import json

import pytest

from artifact.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from artifact.expr import ExprError, Session, evaluate, evaluate_to_text

QZ = Session.from_config(None)
WORDS = Session.from_config({"kind": "word", "generators": ["a", "b"]})
GRID = Session.from_config({"kind": "product", "factors": [{"H": ["1"]}, {"H": ["1"]}]})


@pytest.mark.parametrize(
    "session, expr, expected",
    [
        (QZ, "dist([1:0+H], [1/2:0+H])", "1/2"),
        (QZ, "reduce([1:0+H, 1:(0+H)'])", "id"),
        (QZ, "median([1:0+H],[1:0+H],[2:0+H])", "[1:0+H]"),
        (QZ, "[1:0+H] * [1:0+H]", "[2:0+H]"),
        (QZ, "[1/2:0+H]^-", "[1/2:(1/2+H)']"),
        (QZ, "[1:0+H]^- * [1:0+H]", "id"),
        (QZ, "admissible([1:0+H, 1:(0+H)'])", "false"),
        (QZ, "gromov([1:0+H, 1:1/2+H], [1:0+H])", "1"),
        (QZ, "gromov([1:0+H], [2:0+H], [1:0+H])", "0"),
        (QZ, "axis([1/2:0+H], 0+H)", "OnAxisNotStabilizing"),
        (QZ, "join([1:0+H], [2:0+H])", "[2:0+H]"),
        (QZ, "len(meet([2:0+H], [1:0+H, 1:1/2+H]))", "1"),
        (QZ, "leq(id, [1:0+H])", "true"),
        (WORDS, "a * b * b^-", "a"),
        (WORDS, "dist(a * b, a * a)", "2"),
        (GRID, "flat(([1:0+H] | [1:0+H]), 0+H | 0+H)", "InFlatStabilizing"),
        (GRID, "([1:0+H] | id) * (id | [1/2:0+H])", "([1:0+H] | [1/2:0+H])"),
    ],
)
def test_evaluate(session, expr, expected):
    assert evaluate_to_text(expr, session) == expected


@pytest.mark.parametrize(
    "expr, position",
    [("dist([1:0+H], ", 14), ("meet([1:0+H])", 0), ("[1:0+H] +", 8), ("nope", 0), ("median(id, id)", 0)],
)
def test_parse_errors_carry_positions(expr, position):
    with pytest.raises(ExprError) as info:
        evaluate(expr, QZ)
    assert info.value.position == position
    assert info.value.caret(expr).splitlines()[1].index("^") == position


def test_join_without_upper_bound_is_a_domain_error():
    with pytest.raises(ValueError):
        evaluate("join(a, b)", WORDS)


# -- command line ------------------------------------------------------------


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_command(capsys):
    code, out, err = run(capsys, "eval", "dist([1:0+H], [1/2:0+H])")
    assert (code, out, err) == (EXIT_OK, "1/2\n", "")


def test_eval_parse_error_prints_a_caret(capsys):
    code, out, err = run(capsys, "eval", "dist([1:0+H], ")
    assert code == EXIT_USAGE and out == ""
    assert "^" in err


def test_inadmissible_input_is_a_usage_error(capsys):
    code, out, err = run(capsys, "gromov", "[1:0+H, 1:(0+H)']", "id")
    assert code == EXIT_USAGE and out == "" and err


def test_reduce_prints_steps(capsys):
    code, out, _ = run(capsys, "reduce", "[1:0+H, 1/2:(0+H)', 1:1/2+H]")
    assert code == EXIT_OK
    assert out.splitlines() == ["reduce at 1 with half-width 1/2", "[1/2:0+H, 1:1/2+H]"]


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "atoms.json"
    cfg.write_text(json.dumps({"kind": "atoms", "names": ["x1", "x2"], "twist": "anti"}))
    code, out, _ = run(capsys, "eval", "--config", str(cfg), "[1:x1] * [1:x2*]")
    assert code == EXIT_OK and out == "[1:x1, 1:x2*]\n"


def test_missing_config_is_a_usage_error(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "--config", str(tmp_path / "absent.json"), "id")
    assert code == EXIT_USAGE and "cannot read config" in err


def test_unknown_suite(capsys):
    code, out, err = run(capsys, "suite", "nonsense")
    assert code == EXIT_USAGE and out == "" and "nonsense" in err


def test_unknown_command(capsys):
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE


def test_suite_json_report(capsys):
    code, out, _ = run(capsys, "suite", "reduction", "--seed", "3", "--count", "5")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["suite"] == "reduction" and report["failure_count"] == 0 and report["cases"] > 0


def test_suite_bmw_preset(capsys):
    code, out, _ = run(capsys, "suite", "bmw", "--preset", "f2xf2", "--count", "5", "--format", "text")
    assert code == EXIT_OK and out.startswith("suite bmw seed 0:")


def test_invalid_presentation_fails_validation(capsys, tmp_path):
    path = tmp_path / "bad.bmw"
    path.write_text("bmw{A=a;X=x,y;R=a x a^- x^-, a x a^- y^-;}")
    code, out, _ = run(capsys, "validate", "--presentation", str(path))
    assert code == EXIT_FAILURE and out.startswith("valid false")


@pytest.mark.parametrize("preset, radius, vertices", [("z2", 1, 5), ("swap", 1, 9), ("swap", 0, 1), ("f2xf2", 1, 9)])
def test_export_ball(capsys, preset, radius, vertices):
    code, out, _ = run(capsys, "export-dot", "bmw-ball", "--preset", preset, "--radius", str(radius))
    assert code == EXIT_OK
    assert out.count("[label=\"(") == vertices


def test_export_ball_to_file_is_deterministic(capsys, tmp_path):
    paths = [tmp_path / "one.dot", tmp_path / "two.dot"]
    for path in paths:
        assert main(["export-dot", "bmw-ball", "--preset", "swap", "--radius", "2", "--out", str(path)]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_normal_form_command(capsys):
    code, out, _ = run(capsys, "normal-form", "--preset", "swap", "x a")
    assert (code, out) == (EXIT_OK, "(a | y)\nlength 2\n")
    code, out, _ = run(capsys, "normal-form", "--preset", "swap", "--level", "2", "a a")
    assert out.splitlines()[1] == "length 1"


def test_directions_and_hyp_commands(capsys):
    code, out, _ = run(capsys, "directions", "[1:0+H]", "[2:0+H]", "[1:(0+H)']")
    assert code == EXIT_OK and out.splitlines()[-1] == "valence at id is at least 2"
    code, out, _ = run(capsys, "hyp", "--seed", "1", "--count", "12", "--format", "json")
    report = json.loads(out)
    assert code == EXIT_OK and report["witness"] is None and report["all_in_lambda"]


def test_same_seed_gives_same_output(capsys):
    first = run(capsys, "hyp", "--seed", "5", "--count", "10")
    second = run(capsys, "hyp", "--seed", "5", "--count", "10")
    assert first == second
