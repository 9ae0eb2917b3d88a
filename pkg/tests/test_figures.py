"""Smoke tests for the matplotlib figure writer (Agg backend, headless)."""

from pencilbox.figures import save_trajectory_figure
from pencilbox.scenario import build_config, run_engine


def test_png_written(tmp_path):
    config = build_config({}, {"a": 0.5, "b": 1.0, "gbar": 1.0, "horizon": 15})
    rows = run_engine(config, "oracle")
    path = tmp_path / "traj.png"
    save_trajectory_figure(rows, str(path), title="unit step")
    data = path.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000


def test_missing_leading_cells_are_tolerated(tmp_path):
    # years 0 and 1 have undefined C / I; the series must just start later
    config = build_config({}, {"a": 0.7, "b": 2.0, "gbar": 0.0, "t0": 1.0, "horizon": 9})
    rows = run_engine(config, "closed_form")
    path = tmp_path / "free.png"
    save_trajectory_figure(rows, str(path))
    assert path.stat().st_size > 0
