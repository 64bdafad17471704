import re
from dataclasses import replace

import numpy as np
import pytest

from waveabc.boundaries import BoundarySpec
from waveabc.errors import ConfigError, StabilityError
from waveabc.harness import (ErrorSeries, compare, error_series,
                             experiment_catalog, find_experiment, run,
                             timing_report, write_error_csv)
from waveabc.medium import Constant
from waveabc.source import SourceSpec


def test_catalog_contents():
    specs = experiment_catalog()
    names = {s.name for s in specs}
    assert len(specs) == 12
    for base in ("exp1", "exp2", "exp3", "const"):
        for bc in ("tappert", "higdon2", "higdon3"):
            assert f"{base}-{bc}" in names

    exp1 = find_experiment("exp1-tappert")
    assert float(exp1.medium.speed(0.0, 5.0)) == pytest.approx(0.5, abs=1e-12)

    exp2 = find_experiment("exp2-higdon2")
    b = exp2.resolved_boundary()
    assert b.speeds is not None and len(b.speeds) == 2
    assert b.speeds[0] == b.speeds[1]
    assert b.speeds[0] == pytest.approx(1.60014, abs=2e-4)

    exp3 = find_experiment("exp3-tappert")
    assert (exp3.source.x, exp3.source.y) == (7.5, 5.0)

    with pytest.raises(ConfigError):
        find_experiment("exp9-tappert")


def test_extension_covers_the_no_reach_invariant():
    spec = find_experiment("exp2-tappert")
    src = spec.resolved_source()
    assert spec.resolved_extension() >= spec.c_max() * spec.T_final \
        + src.c0 * src.duration


def test_zero_final_time_returns_initial_state_only():
    spec = replace(find_experiment("const-tappert"), T_final=0.0)
    res = run(spec, truncated=True)
    assert len(res.steps) == 1 and res.steps[0] == 0
    assert res.times[0] == 0.0
    assert len(res.fields) == 1


def _tiny_pair():
    spec = replace(find_experiment("const-tappert"), T_final=2.0, Ly=2.0,
                   source=SourceSpec(x=5.0, y=1.0, duration=0.3,
                                     waveform="zero_mean"))
    rt = run(spec, truncated=True)
    re_ = run(spec, truncated=False)
    return spec, rt, re_


def test_error_series_identical_runs_are_zero():
    _, rt, re_ = _tiny_pair()
    series = error_series(rt, rt)
    assert np.all(series.E == 0.0) and np.all(series.e == 0.0)
    # and the real pair starts at exactly zero (bit-identical initial data)
    series2 = error_series(rt, re_)
    assert series2.E[0] == 0.0 and series2.e[0] == 0.0


def test_error_series_single_node_and_scaling():
    _, rt, re_ = _tiny_pair()
    bumped = replace(re_)
    bumped.fields = [f.copy() for f in re_.fields]
    bumped.fields[-1][3, 4] += 0.125
    series = error_series(bumped, re_)
    assert series.e[-1] == 0.125

    doubled = replace(re_)
    doubled.fields = [2.0 * f for f in re_.fields]
    series = error_series(doubled, re_)
    nonzero = np.abs([f.sum() for f in re_.fields]) > 0
    np.testing.assert_allclose(series.E[nonzero][-1], 1.0, rtol=1e-12)


def test_error_series_zero_denominator_policy():
    _, rt, re_ = _tiny_pair()
    zero_ref = replace(re_)
    zero_ref.fields = [np.zeros_like(f) for f in re_.fields]
    zero_both = replace(rt)
    zero_both.fields = [np.zeros_like(f) for f in rt.fields]
    ok = error_series(zero_both, zero_ref)
    assert np.all(ok.E == 0.0)
    undefined = error_series(rt, zero_ref)  # nonzero field, zero reference
    assert np.isnan(undefined.E[-1])


def test_error_series_requires_matching_runs():
    spec, rt, re_ = _tiny_pair()
    other = run(replace(spec, snapshot_stride=7), truncated=True)
    with pytest.raises(ConfigError):
        error_series(rt, other)


def test_truncated_matches_extended_before_the_signal_can_arrive():
    spec = replace(find_experiment("const-tappert"), T_final=6.0)
    series, rt, re_ = compare(spec)
    src = spec.resolved_source()
    grid_speed = spec.h / rt.grid.tau  # one column per step
    support_edge = src.x - (src.c0 * src.duration + 2 * spec.h)
    t_star = support_edge / grid_speed
    early = series.times < t_star
    assert early.sum() >= 3
    assert np.nanmax(series.E[early]) < 1e-10
    assert np.nanmax(series.E) > 1e-4  # the comparison does eventually bite


def test_hard_wall_left_reflects_only_after_arrival():
    spec = replace(find_experiment("const-tappert"), T_final=9.0,
                   boundary=BoundarySpec(side="left", kind="hard_wall"))
    series, rt, _ = compare(spec)
    src = spec.resolved_source()
    t_star = (src.x - src.c0 * src.duration - 2 * spec.h) / (spec.h / rt.grid.tau)
    assert np.nanmax(series.E[series.times < t_star]) < 1e-10
    assert series.final_E() > 1e-2


def test_error_csv_format(tmp_path):
    series = ErrorSeries(times=np.array([0.0, 0.1234567890123456]),
                         E=np.array([0.0, 0.00123456789012345]),
                         e=np.array([0.0, 7.5e-9]))
    path = tmp_path / "errors.csv"
    write_error_csv(path, series)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,E,e"
    assert len(lines) == 3
    # 15 significant digits survive
    assert "0.123456789012346" in lines[2]
    assert re.fullmatch(r"[0-9.eE+\-,]+", lines[2])
    assert not (tmp_path / "errors.csv.tmp").exists()


def test_refinement_does_not_worsen_final_error():
    for bc in ("tappert", "higdon2"):
        coarse = find_experiment(f"exp1-{bc}", T_final=10.0)
        fine = replace(coarse, h=0.05)
        e_c, _, _ = compare(coarse)
        e_f, _, _ = compare(fine)
        assert e_f.final_E() <= 1.1 * e_c.final_E()


def test_instrumented_run_records_step_times():
    spec = replace(find_experiment("const-tappert"), T_final=1.0)
    res = run(spec, truncated=True, instrument=True)
    assert res.step_seconds is not None
    assert len(res.step_seconds) == res.n_steps
    assert np.all(res.step_seconds > 0.0)
    assert np.all(res.boundary_seconds <= res.step_seconds)


@pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
@pytest.mark.filterwarnings("ignore:invalid value:RuntimeWarning")
def test_instability_is_detected_and_reported():
    spec = replace(find_experiment("const-tappert"), T_final=2.0,
                   inject_in_main=True,
                   source=SourceSpec(x=5.0, y=5.0, duration=1.0,
                                     amplitude=1e308))
    with pytest.raises(StabilityError) as err:
        run(spec, truncated=True)
    assert err.value.step > 0


def test_timing_report_rows():
    spec = replace(find_experiment("const-tappert"), Lx=2.0, Ly=2.0,
                   inject_in_main=True,
                   source=SourceSpec(x=1.0, y=1.0, duration=0.5, amplitude=1e-3))
    rows = timing_report(spec, n_steps=40, warmup=10)
    kinds = [r.kind for r in rows]
    assert kinds == ["interior_only", "tappert", "higdon1", "higdon2", "higdon3"]
    assert all(r.per_step_seconds > 0 for r in rows)
    assert rows[0].boundary_share_seconds == 0.0
