"""Command-line behavior: golden outputs, determinism, exit codes, coverage."""

import json

import pytest

from partcat.cli import OP_DISPATCH, SUBCOMMANDS, load_config, run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGolden:
    def test_enum_count(self, capsys):
        code, out, _ = invoke(capsys, "enum", "--shape", "0,4", "--category", "Eh", "--count")
        assert code == 0 and out == "3\n"

    def test_weingarten_entry(self, capsys):
        code, out, _ = invoke(
            capsys, "weingarten", "--category", "NCs", "--k", "2", "--n", "5"
        )
        assert code == 0
        assert out.splitlines()[0] == "1/4 | -1/20"

    def test_verify_json_empty_failures(self, capsys):
        code, out, _ = invoke(
            capsys, "--format", "json", "verify", "--check", "capping-descent",
            "--case", "3", "--max-legs", "6",
        )
        assert code == 0
        data = json.loads(out)
        assert data["failures"] == [] and data["passed"] is True

    def test_member(self, capsys):
        code, out, _ = invoke(
            capsys, "member", "--partition", "1 4 | 2 5 | 3 6",
            "--category", "Eh[s=3]",
        )
        assert code == 0 and out == "false\n"

    def test_recurrence_csv(self, capsys):
        code, out, _ = invoke(capsys, "recurrence", "--max-k", "4", "--format", "csv")
        assert code == 0
        assert out.splitlines()[1:] == ["2,1,1", "4,3,1", "6,16,1", "8,131,1"]

    def test_integrate(self, capsys):
        code, out, _ = invoke(
            capsys, "integrate", "--category", "Ps", "--n", "4",
            "--i", "1,2", "--j", "1,2",
        )
        assert code == 0 and out == "1/12\n"

    def test_moments_csv(self, capsys):
        code, out, _ = invoke(
            capsys, "moments", "--category", "Ps", "--n", "8", "--m", "8",
            "--max-k", "2", "--format", "csv",
        )
        assert code == 0
        assert out.splitlines() == [
            "category,k,n,m,value_num,value_den",
            "Ps,1,8,8,1,1",
            "Ps,2,8,8,2,1",
        ]

    def test_closure_equals_category(self, capsys):
        code, out, _ = invoke(
            capsys, "--format", "json", "closure", "--generators", "u1 l2 | u2 l1",
            "--base", "NCs", "--max-legs", "4", "--equals-category", "Ps",
        )
        assert code == 0
        assert json.loads(out)["equals_category"] is True

    def test_diagram_ops(self, capsys):
        code, out, _ = invoke(
            capsys, "member", "--partition", "l1 l2", "--op", "involute"
        )
        assert code == 0 and out == "P(2,0): u1 u2\n"
        code, out, _ = invoke(
            capsys, "member", "--partition", "l1 l2", "--op", "cap",
            "--cap-kind", "singleton", "--cap-positions", "0",
        )
        assert code == 0 and out == "P(0,1): l1\n"


class TestDeterminism:
    def test_sample_reproducible(self, capsys):
        args = ("--seed", "42", "sample", "--group", "O", "--n", "4")
        _, first, _ = invoke(capsys, *args)
        _, second, _ = invoke(capsys, *args)
        assert first == second and first

    def test_fixed_dim_reproducible(self, capsys):
        args = (
            "--seed", "42", "--samples", "200", "sample", "--group", "S",
            "--n", "4", "--fixed-dim", "2",
        )
        _, first, _ = invoke(capsys, *args)
        _, second, _ = invoke(capsys, *args)
        assert first == second

    def test_global_flags_both_positions(self, capsys):
        _, before, _ = invoke(capsys, "--format", "csv", "recurrence", "--max-k", "3")
        _, after, _ = invoke(capsys, "recurrence", "--max-k", "3", "--format", "csv")
        assert before == after


class TestExitCodes:
    def test_domain_error_is_one(self, capsys):
        code, _, err = invoke(
            capsys, "weingarten", "--category", "Ps", "--k", "4", "--n", "2"
        )
        assert code == 1 and "GramSingular" in err

    def test_parse_error_is_one(self, capsys):
        code, _, err = invoke(capsys, "member", "--partition", "l1 l1")
        assert code == 1 and "ParseError" in err

    def test_missing_seed_is_two(self, capsys):
        code, _, err = invoke(capsys, "sample", "--group", "O", "--n", "3")
        assert code == 2 and "seed" in err

    def test_bad_flag_is_two(self, capsys):
        with pytest.raises(SystemExit) as err:
            run(["enum", "--no-such-flag"])
        assert err.value.code == 2


class TestConfig:
    def test_file_overrides(self, tmp_path, capsys):
        cfg = tmp_path / "partcat.cfg"
        cfg.write_text("format=csv\nseed=3\n")
        code, out, _ = invoke(
            capsys, "--config", str(cfg), "recurrence", "--max-k", "3"
        )
        assert code == 0 and out.splitlines()[0] == "order,value_num,value_den"

    def test_env_var(self, tmp_path, monkeypatch, capsys):
        cfg = tmp_path / "partcat.cfg"
        cfg.write_text("format=json\n")
        monkeypatch.setenv("PARTCAT_CONFIG", str(cfg))
        code, out, _ = invoke(capsys, "recurrence", "--max-k", "2")
        assert code == 0 and json.loads(out)["values"] == ["1/1", "3/1"]

    def test_flag_beats_file(self, tmp_path, capsys):
        cfg = tmp_path / "partcat.cfg"
        cfg.write_text("format=json\n")
        code, out, _ = invoke(
            capsys, "--config", str(cfg), "--format", "csv", "recurrence",
            "--max-k", "2",
        )
        assert code == 0 and out.splitlines()[0] == "order,value_num,value_den"

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "partcat.cfg"
        cfg.write_text("legbound=9\n")
        with pytest.raises(ValueError):
            load_config(str(cfg))


class TestDispatchCoverage:
    def test_every_operation_reachable_exactly_once(self):
        # OP_DISPATCH is a mapping, so each operation has a single subcommand;
        # every named subcommand must exist and every subcommand must be used
        assert set(OP_DISPATCH.values()) <= set(SUBCOMMANDS)
        assert set(OP_DISPATCH.values()) == set(SUBCOMMANDS)

    def test_roster_is_complete(self):
        expected = {
            "parse", "tensor", "compose", "involute", "rotate", "join",
            "block_count", "block_sizes", "is_noncrossing", "enumerate",
            "subpartitions", "member", "axioms_hold", "generate",
            "special_partition", "delta", "build_operator", "sample",
            "intertwines", "mc_fixed_dim", "gram_from_vectors", "gram_matrix",
            "weingarten_matrix", "haar_integral", "moment", "asymptotic_moment",
            "law_moments", "balanced_recurrence", "law_compare",
            "apply_capping", "lambda_set", "associated_easy_group",
            "verify_block_size_lemma", "verify_capping_descent",
            "verify_difference_generators", "verify_pairing_trichotomy",
            "verify_cubic_ring_relations",
        }
        assert set(OP_DISPATCH) == expected
