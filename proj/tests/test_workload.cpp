#include "doctest.h"

#include <stdexcept>
#include "boostersim/config.hpp"
#include "boostersim/presets.hpp"
#include "boostersim/workload.hpp"

using namespace boostersim;

namespace {

struct Fixture {
    Config cfg = Config::builtin_default();
    topo::NetworkGraph graph = topo::build_dragonfly_plus(cfg.system.topology);
};

}  // namespace

TEST_CASE("single device pays no communication") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");
    job.devices = 1;
    const wl::StepBreakdown bd = wl::step_breakdown(job, f.cfg.system, &f.graph);
    CHECK(bd.comm_s == 0.0);
    CHECK(bd.io_s == 0.0);
    CHECK(bd.total_s == bd.compute_s);
}

TEST_CASE("full overlap hides communication shorter than compute") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");
    job.devices = 16;
    job.comm.beta_s_per_byte = 1e-10;  // comm well below compute
    job.overlap_fraction = 1.0;
    const wl::StepBreakdown bd = wl::step_breakdown(job, f.cfg.system, &f.graph);
    CHECK(bd.comm_s > 0.0);
    CHECK(bd.comm_s < bd.compute_s);
    CHECK(bd.exposed_comm_s == 0.0);
    CHECK(bd.total_s == bd.compute_s);
}

TEST_CASE("shipped convlstm job reproduces its 50-minute single-GPU epoch") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");
    job.devices = 1;
    CHECK(wl::steps_per_epoch(job) == 6144);
    CHECK(wl::epoch_time(job, f.cfg.system, &f.graph) == doctest::Approx(3000.0).epsilon(1e-6));
}

TEST_CASE("epoch time arithmetic") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");
    job.devices = 4;

    SUBCASE("one full step when the dataset equals the global batch") {
        job.dataset_samples = 4 * 16;
        CHECK(wl::epoch_time(job, f.cfg.system, &f.graph) ==
              wl::step_time(job, f.cfg.system, &f.graph));
    }
    SUBCASE("doubling the dataset doubles the epoch") {
        job.dataset_samples = 98304;
        const double once = wl::epoch_time(job, f.cfg.system, &f.graph);
        job.dataset_samples = 2 * 98304;
        CHECK(wl::epoch_time(job, f.cfg.system, &f.graph) ==
              doctest::Approx(2.0 * once).epsilon(1e-12));
    }
}

TEST_CASE("time to train") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");
    job.epochs = 0;
    CHECK(wl::time_to_train(job, f.cfg.system, &f.graph) == 0.0);
    job.epochs = 100;
    CHECK(wl::time_to_train(job, f.cfg.system, &f.graph) ==
          doctest::Approx(100.0 * wl::epoch_time(job, f.cfg.system, &f.graph)));
}

TEST_CASE("shipped 256-GPU pre-training example lands near 81 hours") {
    Fixture f;
    const wl::JobSpec& job = f.cfg.workload("resnet152x4_imagenet21k");
    const double hours = wl::time_to_train(job, f.cfg.system, &f.graph) / 3600.0;
    CHECK(hours > 79.0);
    CHECK(hours < 83.0);
}

TEST_CASE("strong scaling efficiency") {
    CHECK(wl::scaling_efficiency(2550.0, 1.0, 50.0, 64.0) == doctest::Approx(0.796875));
    CHECK(wl::scaling_efficiency(123.0, 1.0, 123.0, 1.0) == 1.0);
    CHECK(wl::scaling_efficiency(3000.0, 1.0, 208.3, 16.0) ==
          doctest::Approx(0.90).epsilon(2e-4));
    // invariant under common rescaling of both times
    CHECK(wl::scaling_efficiency(7.0 * 2550.0, 1.0, 7.0 * 50.0, 64.0) ==
          doctest::Approx(wl::scaling_efficiency(2550.0, 1.0, 50.0, 64.0)).epsilon(1e-12));

    CHECK_THROWS_AS(wl::scaling_efficiency(0.0, 1.0, 50.0, 64.0), std::invalid_argument);
    CHECK_THROWS_AS(wl::scaling_efficiency(2550.0, 1.0, -50.0, 64.0), std::invalid_argument);
    CHECK_THROWS_AS(wl::scaling_efficiency(2550.0, 64.0, 50.0, 1.0), std::invalid_argument);
}

TEST_CASE("sweep over the published device counts") {
    Fixture f;
    const wl::JobSpec& job = f.cfg.workload("bigearthnet_resnet152");
    const wl::ScalingReport report =
        wl::sweep(job, {256, 4, 64, 16}, f.cfg.system, &f.graph);

    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].devices == 4);  // sorted ascending
    CHECK(report.rows[3].devices == 256);
    CHECK(report.rows[0].efficiency == 1.0);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].epoch_time_s <= report.rows[i - 1].epoch_time_s);
        CHECK(report.rows[i].efficiency < 1.0);
        CHECK(report.rows[i].efficiency > 0.0);
        CHECK(report.rows[i].ideal_epoch_time_s ==
              doctest::Approx(report.rows[0].epoch_time_s * 4.0 / report.rows[i].devices));
    }
    // epoch_time * p never decreases: communication only adds work
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        CHECK(report.rows[i].epoch_time_s * report.rows[i].devices >=
              report.rows[i - 1].epoch_time_s * report.rows[i - 1].devices);
}

TEST_CASE("sweep with a single count is the trivial baseline") {
    Fixture f;
    const wl::ScalingReport report =
        wl::sweep(f.cfg.workload("convlstm_era5"), {1}, f.cfg.system, &f.graph);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].efficiency == 1.0);
}

TEST_CASE("free communication gives ideal scaling at dividing counts") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");
    job.comm.alpha_s = 0.0;
    job.comm.beta_s_per_byte = 0.0;
    const wl::ScalingReport report =
        wl::sweep(job, {1, 2, 4, 8, 16, 64}, f.cfg.system, &f.graph);
    for (const wl::ScalingRow& row : report.rows)
        CHECK(row.efficiency == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sweep rejects an empty device list") {
    Fixture f;
    CHECK_THROWS_AS(wl::sweep(f.cfg.workload("convlstm_era5"), {}, f.cfg.system, &f.graph),
                    std::invalid_argument);
}

TEST_CASE("step time is monotone in efficiency and overlap") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");
    job.devices = 16;
    job.comm.beta_s_per_byte = 3e-8;

    double prev = 1e30;
    for (double eta : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        job.compute_efficiency = eta;
        const double t = wl::step_time(job, f.cfg.system, &f.graph);
        CHECK(t <= prev);
        prev = t;
    }

    job.compute_efficiency = 0.336082051;
    prev = 1e30;
    for (double o : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        job.overlap_fraction = o;
        const double t = wl::step_time(job, f.cfg.system, &f.graph);
        CHECK(t <= prev);
        prev = t;
    }
}

TEST_CASE("batch-norm sync is off by default and adds a ring term when enabled") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");
    job.devices = 16;
    job.comm.beta_s_per_byte = 1e-9;

    const wl::StepBreakdown off = wl::step_breakdown(job, f.cfg.system, &f.graph);
    CHECK(off.bn_sync_s == 0.0);

    job.bn_sync_bytes = 4096.0;  // stats for all ranks
    const wl::StepBreakdown all = wl::step_breakdown(job, f.cfg.system, &f.graph);
    const double expected_all = 2.0 * 15.0 * job.comm.alpha_s + 2.0 * (15.0 / 16.0) * 4096e-9;
    CHECK(all.bn_sync_s == doctest::Approx(expected_all).epsilon(1e-12));
    CHECK(all.comm_s == doctest::Approx(off.comm_s + all.bn_sync_s).epsilon(1e-12));

    job.bn_sync_ranks = 4;  // statistics over a subset only
    const wl::StepBreakdown subset = wl::step_breakdown(job, f.cfg.system, &f.graph);
    const double expected_subset = 2.0 * 3.0 * job.comm.alpha_s + 2.0 * 0.75 * 4096e-9;
    CHECK(subset.bn_sync_s == doctest::Approx(expected_subset).epsilon(1e-12));
    CHECK(subset.bn_sync_s < all.bn_sync_s);
}

TEST_CASE("io term adds the sample-loading time") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");
    job.devices = 1;
    const double without = wl::step_time(job, f.cfg.system, &f.graph);
    job.io_bandwidth_bytes_per_s = 400e9;
    job.bytes_per_sample = 1.56e6;
    const double with_io = wl::step_time(job, f.cfg.system, &f.graph);
    CHECK(with_io == doctest::Approx(without + 16.0 * 1.56e6 / 400e9).epsilon(1e-12));
}

TEST_CASE("job validation") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");

    job.devices = 100000;  // beyond the 3744 devices of the system
    CHECK_THROWS_AS(wl::step_time(job, f.cfg.system, &f.graph), std::invalid_argument);

    job = f.cfg.workload("convlstm_era5");
    job.compute_efficiency = 0.0;
    CHECK_THROWS_AS(wl::step_time(job, f.cfg.system, &f.graph), std::invalid_argument);
    job.compute_efficiency = 1.5;
    CHECK_THROWS_AS(wl::step_time(job, f.cfg.system, &f.graph), std::invalid_argument);

    job = f.cfg.workload("convlstm_era5");
    job.overlap_fraction = -0.1;
    CHECK_THROWS_AS(wl::step_time(job, f.cfg.system, &f.graph), std::invalid_argument);

    job = f.cfg.workload("convlstm_era5");
    job.dataset_samples = 3;  // below one global batch
    CHECK_THROWS_AS(wl::step_time(job, f.cfg.system, &f.graph), std::invalid_argument);
}

TEST_CASE("report serialization is deterministic") {
    Fixture f;
    const wl::JobSpec& job = f.cfg.workload("bigearthnet_resnet152");
    const wl::ScalingReport r1 = wl::sweep(job, {4, 16, 64, 256}, f.cfg.system, &f.graph);
    const wl::ScalingReport r2 = wl::sweep(job, {4, 16, 64, 256}, f.cfg.system, &f.graph);
    CHECK(wl::to_csv(r1) == wl::to_csv(r2));
    CHECK(wl::to_text(r1) == wl::to_text(r2));
    CHECK(wl::to_csv(r1).substr(0, 2) == "p,");
}
