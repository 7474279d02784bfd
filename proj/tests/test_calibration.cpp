#include "doctest.h"

#include <stdexcept>
#include <algorithm>

#include "boostersim/calibration.hpp"
#include "boostersim/config.hpp"

using namespace boostersim;

namespace {

struct Fixture {
    Config cfg = Config::builtin_default();
    topo::NetworkGraph graph = topo::build_dragonfly_plus(cfg.system.topology);

    // Epoch-time measurements produced by the forward model itself.
    std::vector<calib::Measurement> synthesize(const wl::JobSpec& job,
                                               const std::vector<std::uint64_t>& counts) {
        std::vector<calib::Measurement> out;
        for (std::uint64_t p : counts) {
            wl::JobSpec j = job;
            j.devices = p;
            out.push_back({p, wl::epoch_time(j, cfg.system, &graph), false});
        }
        return out;
    }
};

}  // namespace

TEST_CASE("synthetic alpha/beta are recovered within 1%") {
    Fixture f;
    wl::JobSpec truth = f.cfg.workload("convlstm_era5");
    truth.comm.alpha_s = 2e-5;
    truth.comm.beta_s_per_byte = 1.3e-9;
    const auto measurements = f.synthesize(truth, {2, 4, 8, 16, 32});

    wl::JobSpec job = truth;
    job.comm.alpha_s = 1e-5;  // start away from the truth
    job.comm.beta_s_per_byte.reset();

    calib::FitOptions options;
    options.free = {calib::FreeParam::Alpha, calib::FreeParam::Beta};
    const calib::FitResult result = calib::fit(measurements, job, f.cfg.system, options, &f.graph);

    CHECK(std::abs(result.alpha_s - 2e-5) / 2e-5 < 0.01);
    CHECK(std::abs(result.beta_s_per_byte - 1.3e-9) / 1.3e-9 < 0.01);
    CHECK(result.residual < 1e-4);
}

TEST_CASE("single-parameter eta fit matches the closed-form inversion") {
    Fixture f;
    wl::JobSpec job = f.cfg.workload("convlstm_era5");
    job.devices = 1;

    const double eta_true = 0.42;
    const double peak = hw::peak_flops(f.cfg.system.node.gpu, job.model.compute_precision);
    const double observed_step =
        static_cast<double>(job.per_device_batch) * job.model.flops_per_sample /
        (eta_true * peak);

    calib::FitOptions options;
    options.free = {calib::FreeParam::Eta};
    const calib::FitResult result =
        calib::fit({{1, observed_step, true}}, job, f.cfg.system, options, &f.graph);

    const double eta_closed_form =
        static_cast<double>(job.per_device_batch) * job.model.flops_per_sample /
        (peak * observed_step);
    CHECK(std::abs(result.eta - eta_closed_form) / eta_closed_form < 1e-3);
}

TEST_CASE("refitting the model's own predictions leaves no residual") {
    Fixture f;
    wl::JobSpec truth = f.cfg.workload("convlstm_era5");
    truth.comm.beta_s_per_byte = 5e-9;
    const auto measurements = f.synthesize(truth, {1, 4, 16});

    calib::FitOptions options;
    options.free = {calib::FreeParam::Beta};
    const calib::FitResult result =
        calib::fit(measurements, truth, f.cfg.system, options, &f.graph);
    CHECK(result.residual <= 1e-9);
}

TEST_CASE("fit is invariant to measurement ordering") {
    Fixture f;
    wl::JobSpec truth = f.cfg.workload("convlstm_era5");
    truth.comm.alpha_s = 5e-6;
    truth.comm.beta_s_per_byte = 8e-10;
    auto measurements = f.synthesize(truth, {2, 8, 32});

    calib::FitOptions options;
    options.free = {calib::FreeParam::Alpha, calib::FreeParam::Beta};
    const calib::FitResult a = calib::fit(measurements, truth, f.cfg.system, options, &f.graph);
    std::reverse(measurements.begin(), measurements.end());
    const calib::FitResult b = calib::fit(measurements, truth, f.cfg.system, options, &f.graph);
    CHECK(a.alpha_s == b.alpha_s);
    CHECK(a.beta_s_per_byte == b.beta_s_per_byte);
    CHECK(a.residual == b.residual);
}

TEST_CASE("narrowing bounds around the optimum never hurts the residual") {
    Fixture f;
    wl::JobSpec truth = f.cfg.workload("convlstm_era5");
    truth.comm.beta_s_per_byte = 2.7e-9;
    const auto measurements = f.synthesize(truth, {4, 16});

    calib::FitOptions wide;
    wide.free = {calib::FreeParam::Beta};
    wide.bounds[calib::FreeParam::Beta] = {1e-12, 1e-6, true};
    const calib::FitResult broad = calib::fit(measurements, truth, f.cfg.system, wide, &f.graph);

    calib::FitOptions narrow = wide;
    narrow.bounds[calib::FreeParam::Beta] = {1e-9, 1e-8, true};
    const calib::FitResult tight = calib::fit(measurements, truth, f.cfg.system, narrow, &f.graph);
    CHECK(tight.residual <= broad.residual + 1e-12);
}

TEST_CASE("underdetermined fits and bad bounds are rejected") {
    Fixture f;
    const wl::JobSpec& job = f.cfg.workload("convlstm_era5");

    calib::FitOptions options;
    options.free = {calib::FreeParam::Alpha, calib::FreeParam::Beta};
    CHECK_THROWS_AS(calib::fit({{4, 100.0, false}}, job, f.cfg.system, options, &f.graph),
                    std::invalid_argument);

    options.free = {calib::FreeParam::Beta};
    options.bounds[calib::FreeParam::Beta] = {1e-6, 1e-9, true};  // lo > hi
    CHECK_THROWS_AS(
        calib::fit({{4, 100.0, false}, {8, 60.0, false}}, job, f.cfg.system, options, &f.graph),
        std::invalid_argument);

    options.bounds[calib::FreeParam::Beta] = {0.0, 1e-9, true};  // log scale needs lo > 0
    CHECK_THROWS_AS(
        calib::fit({{4, 100.0, false}, {8, 60.0, false}}, job, f.cfg.system, options, &f.graph),
        std::invalid_argument);

    CHECK_THROWS_AS(calib::fit({}, job, f.cfg.system, options, &f.graph), std::invalid_argument);
    CHECK_THROWS_AS(
        calib::fit({{0, 100.0, false}}, job, f.cfg.system, options, &f.graph),
        std::invalid_argument);
}

TEST_CASE("fit result serializes only the fitted parameters") {
    Fixture f;
    wl::JobSpec truth = f.cfg.workload("convlstm_era5");
    truth.comm.beta_s_per_byte = 1e-9;
    const auto measurements = f.synthesize(truth, {4, 16});

    calib::FitOptions options;
    options.free = {calib::FreeParam::Beta};
    const calib::FitResult result =
        calib::fit(measurements, truth, f.cfg.system, options, &f.graph);
    const std::string json = calib::to_json(result);
    CHECK(json.find("beta_s_per_byte") != std::string::npos);
    CHECK(json.find("compute_efficiency") == std::string::npos);
    CHECK(json.find("\"residual\"") != std::string::npos);
    CHECK(json == calib::to_json(result));
}
