import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from extsum.cli import main
from extsum.cli.config import ConfigError, RunConfig, load_config
from extsum.cli.traceio import TraceFormatError, csv_header, dumps_csv, read_trace, write_trace
from extsum.core import ConvergenceTrace
from extsum.oracles import SelectionStrategy
from extsum.problems import builtin
from extsum.splitting import AlgorithmConfig, run_efb

from helpers import bit_identical


@pytest.fixture(autouse=True)
def no_env_seed(monkeypatch):
    monkeypatch.delenv("EXTSUM_SEED", raising=False)


def run_cli(*args, capsys):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


class TestRun:
    def test_paper_example(self, tmp_path, capsys):
        out_path = tmp_path / "t.csv"
        code, out, _ = run_cli("run", "--problem", "paper-example", "--strategy", "boundary",
                               "--q", "1/3", "--max-iter", "1000", "--output", str(out_path),
                               capsys=capsys)
        assert code == 0
        assert "final dist_to_solution = 0" in out and "h1_sup = 0.25 " in out
        trace = read_trace(out_path)
        assert len(trace) == 1000 and np.all(trace.dist == 0.0)

    def test_quad_halfspace(self, capsys):
        code, out, _ = run_cli("run", "--problem", "quad-halfspace", "--max-iter", "100000",
                               capsys=capsys)
        assert code == 0
        dist = float(out.split("final dist_to_solution = ")[1].split()[0])
        assert dist <= 1e-3

    def test_passty_on_paper_example(self, capsys):
        code, _, err = run_cli("run", "--problem", "paper-example", "--algorithm", "passty",
                               capsys=capsys)
        assert code == 1
        assert "exact subdifferential empty at x=0" in err

    def test_invalid_schedule(self, capsys):
        code, _, err = run_cli("run", "--p", "0.7", "--q", "0.233", capsys=capsys)
        assert code == 1 and "(lambda_n/eps_n)^2" in err

    def test_unknown_problem(self, capsys):
        code, _, err = run_cli("run", "--problem", "nope", capsys=capsys)
        assert code == 1 and "problem_id" in err

    def test_unwritable_path(self, tmp_path, capsys):
        code, _, err = run_cli("run", "--max-iter", "5", "--output",
                               str(tmp_path / "missing" / "t.csv"), capsys=capsys)
        assert code == 1 and "cannot write" in err

    def test_byte_identical_outputs(self, tmp_path, capsys):
        path = tmp_path / "a.json"
        outputs = []
        for _ in range(2):
            assert run_cli("run", "--problem", "abs-box", "--strategy", "random", "--seed", "9",
                           "--max-iter", "300", "--output", str(path), capsys=capsys)[0] == 0
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1]

    def test_env_seed_and_flag_precedence(self, tmp_path, monkeypatch, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"problem_id": "abs-box", "strategy": "random", "seed": 1,
                                   "max_iter": 50}))
        outs = {}
        for tag, env, flag in [("file", None, None), ("env", "2", None), ("flag", "2", "3"),
                               ("ref2", None, "2"), ("ref3", None, "3")]:
            if env is None:
                monkeypatch.delenv("EXTSUM_SEED", raising=False)
            else:
                monkeypatch.setenv("EXTSUM_SEED", env)
            path = tmp_path / f"{tag}.csv"
            args = ["run", "--config", str(cfg), "--output", str(path)]
            if flag:
                args += ["--seed", flag]
            assert run_cli(*args, capsys=capsys)[0] == 0
            outs[tag] = path.read_bytes()
        assert outs["env"] == outs["ref2"] != outs["file"]
        assert outs["flag"] == outs["ref3"]

    def test_jobs_sweep_matches_sequential(self, tmp_path, capsys):
        cfgs = []
        for i, pid in enumerate(["abs-box", "quad-halfspace", "quad-box-2d"]):
            path = tmp_path / f"{i}.json"
            path.write_text(json.dumps({"problem_id": pid, "max_iter": 200,
                                        "output_path": str(tmp_path / f"{i}.csv")}))
            cfgs += ["--config", str(path)]
        assert run_cli("run", *cfgs, "--jobs", "3", capsys=capsys)[0] == 0
        parallel = [(tmp_path / f"{i}.csv").read_bytes() for i in range(3)]
        assert run_cli("run", *cfgs, capsys=capsys)[0] == 0
        assert parallel == [(tmp_path / f"{i}.csv").read_bytes() for i in range(3)]


class TestValidateSchedule:
    def test_canonical(self, capsys):
        code, out, _ = run_cli("validate-schedule", "1", "1", "1/3", capsys=capsys)
        assert code == 0 and out.strip().endswith("valid")

    def test_ratio_fails(self, capsys):
        code, out, _ = run_cli("validate-schedule", "1", "0.7", "0.233", capsys=capsys)
        assert code == 1 and "(lambda_n/eps_n)^2" in out.splitlines()[-1]

    def test_step_sum_fails(self, capsys):
        code, out, _ = run_cli("validate-schedule", "1", "1.5", "0.5", capsys=capsys)
        assert code == 1 and "sum lambda_n = inf" in out.splitlines()[-1]

    def test_non_positive(self, capsys):
        assert run_cli("validate-schedule", "0", "1", "1", capsys=capsys)[0] == 1


class TestDiagnose:
    def test_paper_example_trace(self, tmp_path, capsys):
        path = tmp_path / "t.json"
        main(["run", "--strategy", "boundary", "--max-iter", "500", "--output", str(path)])
        capsys.readouterr()
        code, out, _ = run_cli("diagnose", str(path), capsys=capsys)
        report = json.loads(out)
        assert code == 0 and report["h1_sup"] == 0.25 and report["fejer_violations"] == 0

    def test_adversarial_fixture(self, tmp_path, capsys):
        path = tmp_path / "adv.csv"
        lines = [",".join(csv_header(1))]
        for n in range(1, 41):
            x = 25.0 if n == 20 else 0.0
            lines.append(f"{n},{1 / n!r},{n ** (-1 / 3)!r},{x!r},0,0.1,0")
        path.write_text("\n".join(lines) + "\n")
        code, out, _ = run_cli("diagnose", str(path), "--problem", "paper-example", capsys=capsys)
        assert code == 2 and json.loads(out)["fejer_violations"] >= 1

    def test_empty_file(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        path.write_text("")
        assert run_cli("diagnose", str(path), capsys=capsys)[0] == 1

    def test_malformed_rows(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text(",".join(csv_header(1)) + "\n1,2,3\n")
        assert run_cli("diagnose", str(path), capsys=capsys)[0] == 1


def test_list_problems(capsys):
    code, out, _ = run_cli("list-problems", capsys=capsys)
    assert code == 0
    assert sorted(line.split(":")[0] for line in out.splitlines()) == sorted(
        ["abs-box", "paper-example", "quad-box-2d", "quad-halfspace"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "extsum", "validate-schedule", "1", "1", "1/3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0


class TestConfig:
    def test_field_level_errors(self):
        with pytest.raises(ConfigError) as info:
            RunConfig.from_mapping({"algorithm": "bogus", "max_iter": 0, "schedule": {"p": -1},
                                    "colour": "red"})
        assert set(info.value.errors) == {"algorithm", "max_iter", "schedule.p", "colour"}

    def test_random_needs_seed(self):
        with pytest.raises(ConfigError) as info:
            RunConfig.from_mapping({"strategy": "random"})
        assert "seed" in info.value.errors

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"schedule": {"c": 2, "p": 1, "q": "1/3"}, "max_iter": 9}))
        cfg = load_config(path, {"p": "0.9", "max_iter": 4}, env={})
        assert cfg.schedule == {"c": 2.0, "p": 0.9, "q": 1 / 3} and cfg.max_iter == 4

    def test_bad_json(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(path, env={})

    def test_format_from_suffix(self):
        assert RunConfig(output_path="a.JSON").resolved_format == "json"
        assert RunConfig(output_path="a.txt").resolved_format == "csv"


class TestTraceIO:
    @settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(seed=st.integers(0, 2**31 - 1), every=st.integers(1, 5),
           pid=st.sampled_from(["paper-example", "abs-box", "quad-box-2d"]))
    def test_csv_round_trip_bit_exact(self, tmp_path, seed, every, pid):
        strategy = SelectionStrategy.random(seed) if pid != "paper-example" else SelectionStrategy.boundary()
        trace = run_efb(builtin(pid).spec, AlgorithmConfig(strategy=strategy, max_iter=60,
                                                           record_every=every))
        # CSV carries the row columns only; JSON also keeps the running sup
        for fmt in ("csv", "json"):
            back = read_trace(write_trace(trace, tmp_path / f"t.{fmt}", fmt))
            assert bit_identical(trace, back, check_sup=(fmt == "json"))

    def test_absent_distance_is_empty_field(self):
        rows = run_efb(builtin("abs-box").spec, AlgorithmConfig(max_iter=3))
        trace = ConvergenceTrace.from_rows(
            [r.__class__(r.n, r.lam, r.eps, r.x, r.xbar, r.eps_u_norm, None) for r in rows.rows()])
        text = dumps_csv(trace)
        assert all(line.endswith(",") for line in text.splitlines()[1:])

    def test_header_checked(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(TraceFormatError):
            read_trace(path)
