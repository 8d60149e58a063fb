import subprocess
import sys

import pytest

from cmsvote import Intractable, gen_random, solve_profile
from cmsvote.cli import main
from cmsvote.dispatch import SolveConfig, majority_alternative, restrict_profile
from cmsvote.model import approve, issue_ballot, make_profile, total_dissatisfaction

from helpers import P1_DOC, naive_optimum


def multi_component_profile():
    """Two dependent pairs plus an isolated three-way issue."""
    issues = [
        ("A", ("0", "1")),
        ("B", ("0", "1")),
        ("C", ("x", "y", "z")),
        ("D", ("0", "1")),
        ("E", ("0", "1")),
    ]
    voters = [
        (
            "v1",
            [
                approve(0, {1}),
                issue_ballot(1, (0,), {(0,): {0}, (1,): {1}}),
                approve(2, {1}),
            ],
        ),
        ("v2", [approve(2, {1, 2}), issue_ballot(4, (3,), {(1,): {0}})]),
        ("v3", [approve(2, {0}), approve(3, {1})]),
    ]
    return make_profile(issues, voters)


class TestDispatch:
    def test_component_solving_matches_naive(self):
        profile = multi_component_profile()
        solution = solve_profile(profile)
        expected_cost, _ = naive_optimum(profile)
        assert solution.cost == expected_cost
        assert solution.cost == total_dissatisfaction(profile, solution.outcome)

    def test_routes_are_reported(self):
        solution = solve_profile(multi_component_profile())
        assert "majority" in solution.method

    def test_majority_counts_approvals(self):
        profile = multi_component_profile()
        assert majority_alternative(profile, 2) == 1  # "y": two approvals

    def test_majority_tie_breaks_low(self):
        profile = make_profile(
            [("A", ("x", "y"))],
            [("v", [approve(0, {0})]), ("w", [approve(0, {1})])],
        )
        assert majority_alternative(profile, 0) == 0

    def test_restrict_profile_keeps_all_voters(self):
        profile = multi_component_profile()
        sub = restrict_profile(profile, [3, 4])
        assert sub.n == profile.n
        assert sub.m == 2
        assert sub.issues[0].name == "D"
        # v2's conditional on E survives with remapped ids
        assert sub.voters[1].ballots[1].scope == (0,)

    def test_method_override_applies_everywhere(self):
        profile = multi_component_profile()
        solution = solve_profile(profile, SolveConfig(method="brute"))
        assert solution.method == "brute"
        assert solution.cost == naive_optimum(profile)[0]

    def test_inapplicable_override_is_intractable(self):
        profile = multi_component_profile()  # has a non-binary issue
        with pytest.raises(Intractable):
            solve_profile(profile, SolveConfig(method="mincut"))

    def test_cross_validation(self):
        profile = gen_random(
            6, 4, delta_max=1, statement_density=0.6, seed=5, group_dichotomous=True
        )
        checked = solve_profile(profile, SolveConfig(cross_validate=True))
        plain = solve_profile(profile)
        assert checked.cost == plain.cost

    def test_thread_pool_path_is_equivalent(self):
        profile = multi_component_profile()
        serial = solve_profile(profile, SolveConfig(threads=1))
        parallel = solve_profile(profile, SolveConfig(threads=4))
        assert serial.cost == parallel.cost
        assert serial.outcome == parallel.outcome

    def test_threads_env_var(self, monkeypatch):
        profile = multi_component_profile()
        monkeypatch.setenv("CMS_THREADS", "3")
        via_env = solve_profile(profile)
        monkeypatch.setenv("CMS_THREADS", "nope")
        with pytest.raises(ValueError):
            solve_profile(profile)
        monkeypatch.delenv("CMS_THREADS")
        assert via_env.outcome == solve_profile(profile).outcome

    def test_intractable_instance(self):
        issues = [(f"i{j}", ("0", "1")) for j in range(40)]
        ballots = [
            issue_ballot(j, (j - 2, j - 1), {(0, 1): {1}}) for j in range(2, 40)
        ]
        profile = make_profile(issues, [("v", ballots)])
        with pytest.raises(Intractable) as err:
            solve_profile(profile)
        assert err.value.report.components[0].route == "INTRACTABLE"


@pytest.fixture
def p1_path(tmp_path):
    path = tmp_path / "p1.profile"
    path.write_text(P1_DOC)
    return str(path)


class TestCli:
    def test_solve(self, p1_path, capsys):
        assert main(["solve", p1_path]) == 0
        out = capsys.readouterr().out
        assert "cmssolution 1" in out
        assert "cost 1" in out
        assert "assign A 0" in out

    def test_solve_decision_threshold(self, p1_path, capsys):
        assert main(["solve", p1_path, "--max-dissat", "0"]) == 1
        assert main(["solve", p1_path, "--max-dissat", "1"]) == 0

    def test_solve_method_override_failure(self, tmp_path, capsys):
        doc = """cmsprofile 1
issues 2
issue A 0 1
issue B 0 1
voters 1
voter v
cond B if A=0 then 1
end
"""
        path = tmp_path / "nongd.profile"
        path.write_text(doc)
        assert main(["solve", str(path), "--method", "mincut"]) == 3

    def test_solve_cross_validate(self, p1_path, capsys):
        assert main(["solve", p1_path, "--cross-validate"]) == 0
        assert "cost 1" in capsys.readouterr().out

    def test_parse_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "broken.profile"
        path.write_text("cmsprofile 9000\n")
        assert main(["solve", str(path)]) == 2
        assert "error" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert main(["solve", "/nonexistent.profile"]) == 2

    def test_analyze(self, p1_path, capsys):
        assert main(["analyze", p1_path]) == 0
        out = capsys.readouterr().out
        assert "MINCUT" in out
        assert main(["analyze", p1_path, "--kv"]) == 0
        assert "component.0.route MINCUT" in capsys.readouterr().out

    def test_generate_grid_and_solve(self, tmp_path, capsys):
        out_path = tmp_path / "grid.profile"
        assert main(["generate", "grid", "3", "--out", str(out_path)]) == 0
        assert main(["solve", str(out_path), "--max-dissat", "0"]) == 0

    def test_generate_random_deterministic(self, capsys):
        assert main(["generate", "random", "--issues", "4", "--voters", "3",
                     "--seed", "9"]) == 0
        first = capsys.readouterr().out
        assert main(["generate", "random", "--issues", "4", "--voters", "3",
                     "--seed", "9"]) == 0
        assert capsys.readouterr().out == first

    def test_generate_sat(self, tmp_path, capsys):
        cnf = tmp_path / "f.cnf"
        cnf.write_text("p cnf 2 1\n1 2 0\n")
        assert main(["generate", "sat", str(cnf), "--issues", "2"]) == 0
        assert "cmsprofile 1" in capsys.readouterr().out

    def test_generate_csp_and_clique(self, tmp_path, capsys):
        csp = tmp_path / "c.csp"
        csp.write_text("alphabet a b\nconstraint u v a:b\n")
        assert main(["generate", "csp", str(csp)]) == 0
        graph = tmp_path / "g.graph"
        graph.write_text("class r r0\nclass g g0\nedge r0 g0\n")
        assert main(["generate", "clique", str(graph)]) == 0

    def test_verify_roundtrip_and_tamper(self, p1_path, tmp_path, capsys):
        sol_path = tmp_path / "p1.solution"
        assert main(["solve", p1_path, "--out", str(sol_path)]) == 0
        assert main(["verify", p1_path, str(sol_path)]) == 0
        out = capsys.readouterr().out
        assert "cost confirmed" in out

        tampered = sol_path.read_text().replace("cost 1", "cost 0")
        sol_path.write_text(tampered)
        assert main(["verify", p1_path, str(sol_path)]) == 1
        assert "MISMATCH" in capsys.readouterr().out

    def test_verify_missing_assignment(self, p1_path, tmp_path, capsys):
        sol_path = tmp_path / "broken.solution"
        sol_path.write_text("cmssolution 1\ncost 1\nassign A 0\n")
        assert main(["verify", p1_path, str(sol_path)]) == 2

    def test_usage_error(self, capsys):
        assert main(["solve"]) == 2

    def test_console_script_help(self):
        proc = subprocess.run(
            [sys.executable, "-m", "cmsvote.cli", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "solve" in proc.stdout
