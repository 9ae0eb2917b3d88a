"""End-to-end tests of the command-line interface via ``main(argv)``."""

import dataclasses

import pytest

import pencilbox.scenario as scenario
from pencilbox.cli import main

STEP_ARGS = ["--a", "0.5", "--b", "1", "--gbar", "1"]

UNIT_STEP_CSV = (
    "k,T,C,I,G\n"
    "0,0,,,1\n"
    "1,0,0,,1\n"
    "2,1,0,0,1\n"
    "3,2,0.5,0.5,1\n"
    "4,2.5,1,0.5,1\n"
)


class TestSimulate:
    def test_stdout_csv(self, capsys):
        assert main(["simulate", *STEP_ARGS, "--horizon", "4"]) == 0
        assert capsys.readouterr().out == UNIT_STEP_CSV

    def test_engine_flag_accepted(self, capsys):
        assert main(["simulate", *STEP_ARGS, "--horizon", "4", "--engine", "pencil"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "k,T,C,I,G"
        assert out.splitlines()[4] == "3,2,0.5,0.5,1"

    def test_output_file_and_rerun_bytes(self, tmp_path):
        first, second = tmp_path / "one.csv", tmp_path / "two.csv"
        args = ["simulate", "--a", "0.63", "--b", "1.7", "--gbar", "3", "--horizon", "50"]
        assert main([*args, "--out", str(first)]) == 0
        assert main([*args, "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_figure_written(self, tmp_path):
        fig = tmp_path / "out.png"
        assert main(["simulate", *STEP_ARGS, "--horizon", "8", "--fig", str(fig),
                     "--out", str(tmp_path / "t.csv")]) == 0
        assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_config_file_with_overrides(self, tmp_path, capsys):
        cfg = tmp_path / "base.cfg"
        cfg.write_text("a = 0.9\nb = 1\ngbar = 1\nhorizon = 4\n", encoding="utf-8")
        assert main(["simulate", "--config", str(cfg), "--a", "0.5"]) == 0
        assert capsys.readouterr().out == UNIT_STEP_CSV

    def test_verify_all_rejected_here(self, capsys):
        rc = main(["simulate", *STEP_ARGS, "--engine", "verify_all"])
        assert rc == 2
        assert "verify" in capsys.readouterr().err


class TestExitCodes:
    def test_validation_error_is_2(self, capsys):
        assert main(["simulate", "--a", "1.2", "--b", "1"]) == 2
        err = capsys.readouterr().err
        assert err.startswith("validation error:")
        assert "0 < a < 1" in err

    def test_config_error_is_1(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("a = 0.5\nb = 1\nwavelength = 3\n", encoding="utf-8")
        assert main(["simulate", "--config", str(cfg)]) == 1
        assert capsys.readouterr().err.startswith("config error:")

    def test_missing_config_file_is_3(self, tmp_path, capsys):
        assert main(["simulate", "--config", str(tmp_path / "ghost.cfg")]) == 3
        assert capsys.readouterr().err.startswith("i/o error:")

    def test_unwritable_output_is_3(self, tmp_path, capsys):
        target = tmp_path / "no-such-dir" / "run.csv"
        assert main(["simulate", *STEP_ARGS, "--out", str(target)]) == 3
        assert capsys.readouterr().err.startswith("i/o error:")

    def test_t2_off_recursion_is_2(self, capsys):
        assert main(["simulate", *STEP_ARGS, "--t2", "1.5"]) == 2
        assert "recursion" in capsys.readouterr().err

    def test_t2_on_recursion_is_accepted(self, capsys):
        assert main(["simulate", *STEP_ARGS, "--horizon", "4", "--t2", "1"]) == 0
        capsys.readouterr()


class TestEigen:
    def test_report_content(self, capsys):
        assert main(["eigen", *STEP_ARGS]) == 0
        out = capsys.readouterr().out
        assert "p = 2, q = 1, q_star = 1" in out
        assert "spectral radius 0.707106781187" in out
        assert "steady state: 2" in out

    def test_report_to_file(self, tmp_path):
        out = tmp_path / "eigen.txt"
        assert main(["eigen", *STEP_ARGS, "--out", str(out)]) == 0
        assert "s1 = 0.5+0.5i" in out.read_text(encoding="utf-8")


class TestVerify:
    def test_pass_is_0(self, capsys):
        assert main(["verify", *STEP_ARGS, "--horizon", "30"]) == 0
        out = capsys.readouterr().out
        assert "result: PASS" in out
        assert "engine pencil" in out

    def test_injected_engine_fault_is_4(self, monkeypatch, capsys):
        true_engine = scenario.run_engine

        def crooked(config, engine):
            rows = true_engine(config, engine)
            if engine == "pencil":
                rows = list(rows)
                rows[6] = dataclasses.replace(rows[6], T=rows[6].T + 1e-4)
            return rows

        monkeypatch.setattr(scenario, "run_engine", crooked)
        rc = main(["verify", *STEP_ARGS, "--horizon", "30"])
        captured = capsys.readouterr()
        assert rc == 4
        assert "result: FAIL" in captured.out
        assert captured.err.startswith("verification failure:")


class TestPlot:
    def test_requires_out(self, capsys):
        assert main(["plot", *STEP_ARGS]) == 2
        assert "--out" in capsys.readouterr().err

    def test_writes_svg(self, tmp_path):
        out = tmp_path / "traj.svg"
        assert main(["plot", *STEP_ARGS, "--horizon", "25", "--out", str(out)]) == 0
        text = out.read_text(encoding="utf-8")
        assert text.startswith('<?xml version="1.0"')
        assert 'viewBox="0 0 800 500"' in text
        assert text.count("<polyline") == 3

    def test_plot_reruns_identical(self, tmp_path):
        first, second = tmp_path / "p1.svg", tmp_path / "p2.svg"
        args = ["plot", "--a", "0.8", "--b", "0.5", "--gbar", "2", "--horizon", "40"]
        assert main([*args, "--out", str(first)]) == 0
        assert main([*args, "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()


class TestParser:
    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            main([])

    def test_unknown_engine_rejected_by_argparse(self):
        with pytest.raises(SystemExit):
            main(["simulate", "--a", "0.5", "--b", "1", "--engine", "qz"])
