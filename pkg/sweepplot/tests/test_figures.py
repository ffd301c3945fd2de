import hashlib

import numpy as np
import pytest

from sweepplot import FigureSpec, SchemaError, build_figure, load_records, render

HEADER = "d_lambda,separation_m,delta_aaoa_rad,delta_eaoa_rad,chordal,cmd,seed"


def write_csv(path, rows):
    lines = [HEADER] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def synthetic_rows(d_lambdas=(0.0, 5.0), seeds=(1, 2), n_sep=11):
    rows = []
    for dl in d_lambdas:
        for sep in np.linspace(0.1, 20.0, n_sep):
            for seed in seeds:
                rows.append([dl, sep, 0.1 * sep / (1 + dl), 0.05 * sep / (1 + dl),
                             1e-3 * sep ** 2 + 1e-9, max(0.0, 1 - sep / 25), seed])
    return rows


def test_figure_spec_rejects_unknown_id(tmp_path):
    with pytest.raises(ValueError, match="unknown figure id 'pie'"):
        FigureSpec(str(tmp_path / "x.csv"), str(tmp_path / "y.png"), "pie")


def test_missing_column_named(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("d_lambda,separation_m,delta_aaoa_rad,delta_eaoa_rad,chordal,seed\n")
    with pytest.raises(SchemaError, match="missing column 'cmd'"):
        load_records(str(p))


def test_header_only_renders_empty_axes(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text(HEADER + "\n")
    out = tmp_path / "empty.png"
    render(FigureSpec(str(p), str(out), "cmd"))
    assert out.exists() and out.stat().st_size > 0


def test_single_curve_minimal_input(tmp_path):
    p = tmp_path / "three.csv"
    write_csv(p, [[5.0, 1.0, 0.1, 0.05, 1e-6, 0.9, 1],
                  [5.0, 2.0, 0.2, 0.08, 2e-6, 0.8, 1],
                  [5.0, 3.0, 0.3, 0.09, 3e-6, 0.7, 1]])
    fig = build_figure(load_records(str(p)), "cmd")
    lines = fig.axes[0].get_lines()
    assert len(lines) == 1
    assert np.allclose(lines[0].get_xdata(), [1.0, 2.0, 3.0])


def test_cmd_axis_fixed_to_unit_interval(tmp_path):
    p = tmp_path / "s.csv"
    write_csv(p, synthetic_rows())
    fig = build_figure(load_records(str(p)), "cmd")
    assert fig.axes[0].get_ylim() == (0.0, 1.0)


def test_angles_figure_has_two_panels(tmp_path):
    p = tmp_path / "s.csv"
    write_csv(p, synthetic_rows())
    fig = build_figure(load_records(str(p)), "angles")
    assert len(fig.axes) == 2


def test_mean_aggregation_merges_seed_curves(tmp_path):
    p = tmp_path / "s.csv"
    write_csv(p, synthetic_rows(d_lambdas=(0.0, 5.0), seeds=(1, 2, 3)))
    data = load_records(str(p))
    per_seed = build_figure(data, "cmd", mean_over_seeds=False)
    merged = build_figure(data, "cmd", mean_over_seeds=True)
    assert len(per_seed.axes[0].get_lines()) == 6
    assert len(merged.axes[0].get_lines()) == 2


def test_one_labeled_curve_per_d_lambda(tmp_path):
    p = tmp_path / "s.csv"
    write_csv(p, synthetic_rows(d_lambdas=(0.0, 5.0, 15.0), seeds=(1, 2)))
    fig = build_figure(load_records(str(p)), "chordal")
    _, labels = fig.axes[0].get_legend_handles_labels()
    assert len(labels) == 3
    assert any("0 m" in lab for lab in labels)


def test_render_is_read_only_and_deterministic(tmp_path):
    p = tmp_path / "s.csv"
    write_csv(p, synthetic_rows())
    before = hashlib.sha256(p.read_bytes()).hexdigest()
    out1, out2 = tmp_path / "a.png", tmp_path / "b.png"
    render(FigureSpec(str(p), str(out1), "angles"))
    render(FigureSpec(str(p), str(out2), "angles"))
    assert hashlib.sha256(p.read_bytes()).hexdigest() == before
    assert out1.read_bytes() == out2.read_bytes()
