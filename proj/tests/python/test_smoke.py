"""Smoke tests for the python bindings."""

import pytest

import boostersim as bs


def test_juwels_preset_bisection():
    graph = bs.build_dragonfly_plus(bs.juwels_booster_topology())
    assert graph.spec.cell_count() == 20
    assert bs.bisection_bandwidth(graph) == 400e12
    assert graph.is_connected()


def test_peak_table():
    gpu = bs.a100_40gb()
    assert bs.peak_flops(gpu, bs.Precision.FP64_TC) == 19.5e12
    sys = bs.juwels_booster()
    assert bs.system_peak(sys, bs.Precision.FP64_TC) == 73.008e15
    assert bs.energy_efficiency(19.5e12, 400.0) == 48.75e9
    with pytest.raises(ValueError):
        bs.energy_efficiency(1e12, 0.0)


def test_ring_allreduce_formula():
    params = bs.CollectiveParams()
    params.participants = 4
    params.message_bytes = 1e6
    params.alpha_s = 5e-6
    params.beta_s_per_byte = 5e-9
    assert bs.ring_allreduce_time(params) == pytest.approx(7.53e-3)


def test_route_and_contention():
    graph = bs.build_dragonfly_plus(bs.juwels_booster_topology())
    path = bs.route(graph, 0, 500)
    assert path.hop_count() == 5
    placement = bs.Placement.packed(64, 4)
    beta = bs.contended_beta(graph, placement, bs.Algorithm.Hierarchical)
    assert beta > 0


def test_sweep_report():
    cfg = bs.Config.builtin_default()
    job = cfg.workload("bigearthnet_resnet152")
    report = bs.sweep(job, [4, 16, 64, 256], cfg.system)
    assert [row.devices for row in report.rows] == [4, 16, 64, 256]
    assert report.rows[0].efficiency == 1.0
    assert all(row.efficiency <= 1.05 for row in report.rows)
    assert "p,step_time_s" in bs.report_csv(report)


def test_calibration_recovers_beta():
    cfg = bs.Config.builtin_default()
    graph = bs.build_dragonfly_plus(cfg.system.topology)
    truth = cfg.workload("convlstm_era5")
    truth.comm.beta_s_per_byte = 2e-9

    measurements = []
    for p in (2, 8, 32):
        job = cfg.workload("convlstm_era5")
        job.comm.beta_s_per_byte = 2e-9
        job.devices = p
        measurements.append(bs.Measurement(p, bs.epoch_time(job, cfg.system, graph)))

    options = bs.FitOptions()
    options.free = [bs.FreeParam.Beta]
    result = bs.fit(measurements, truth, cfg.system, options, graph)
    assert result.beta_s_per_byte == pytest.approx(2e-9, rel=0.01)


def test_reproduce_cases():
    cfg = bs.Config.builtin_default()
    for case in ("bisection", "peaks"):
        result = bs.run_reproduce_case(case, cfg)
        assert result.passed, result.lines
