#include "boostersim/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boostersim/presets.hpp"
#include "boostersim/util.hpp"

namespace boostersim::repro {

namespace {

using util::fmt_g;

bool near_rel(double actual, double expected, double rel_tol) {
    return std::abs(actual - expected) <= rel_tol * std::abs(expected);
}

std::string check_line(bool ok, const std::string& what) {
    return std::string(ok ? "  ok: " : "  FAILED: ") + what;
}

CaseResult case_bisection(const Config& cfg) {
    CaseResult r{"bisection", false, {}};
    const topo::TopologySpec& t = cfg.system.topology;
    const topo::NetworkGraph g = topo::build_dragonfly_plus(t);
    const std::uint32_t cells = t.cell_count();
    const std::uint32_t half = cells / 2;
    const std::uint32_t rest = cells - half;
    const double bw = topo::bisection_bandwidth(g);

    r.lines.push_back("cells = ceil(" + std::to_string(t.num_nodes) + " / " +
                      std::to_string(t.nodes_per_cell) + ") = " + std::to_string(cells));
    r.lines.push_back("balanced cut crosses " + std::to_string(half) + " x " +
                      std::to_string(rest) + " cell pairs x " +
                      std::to_string(t.intercell_links_per_pair) + " links = " +
                      std::to_string(static_cast<std::uint64_t>(half) * rest *
                                     t.intercell_links_per_pair) +
                      " links");
    r.lines.push_back("bisection = cut links x " + fmt_g(t.link_bandwidth_bits_per_s / 1e9) +
                      " Gbit/s x 2 directions = " + fmt_g(bw / 1e12) + " Tbit/s");
    const bool exact = bw == 400e12;
    r.lines.push_back(check_line(exact, "equals 400 Tbit/s exactly"));
    const std::size_t intercell = g.intercell_edge_count();
    const std::size_t expected_edges =
        static_cast<std::size_t>(cells) * (cells - 1) / 2 * t.intercell_links_per_pair;
    const bool edges_ok = intercell == expected_edges;
    r.lines.push_back(check_line(edges_ok, "graph carries " + std::to_string(intercell) +
                                               " inter-cell edges (expected " +
                                               std::to_string(expected_edges) + ")"));
    r.passed = exact && edges_ok;
    return r;
}

CaseResult case_peaks(const Config& cfg) {
    CaseResult r{"peaks", false, {}};
    const hw::SystemSpec& sys = cfg.system;
    const double fp64tc = hw::system_peak(sys, hw::Precision::FP64_TC);
    const double per_gpu = hw::peak_flops(sys.node.gpu, hw::Precision::FP64_TC);
    const double eff = hw::energy_efficiency(per_gpu, sys.node.gpu.tdp_watts);

    r.lines.push_back("system peak = " + std::to_string(sys.total_devices()) + " GPUs x " +
                      fmt_g(per_gpu / 1e12) + " Tflop/s = " + fmt_g(fp64tc / 1e15) + " Pflop/s");
    const bool peak_ok = near_rel(fp64tc, 73.008e15, 5e-5);
    r.lines.push_back(check_line(peak_ok, "system peak equals 73.008 Pflop/s"));

    r.lines.push_back("peak efficiency = " + fmt_g(per_gpu / 1e12) + " Tflop/s / " +
                      fmt_g(sys.node.gpu.tdp_watts) + " W = " + fmt_g(eff / 1e9) +
                      " Gflop/s/W");
    const bool eff_ok = near_rel(eff, 48.75e9, 5e-5);
    r.lines.push_back(check_line(eff_ok, "peak efficiency equals 48.75 Gflop/s/W"));
    r.passed = peak_ok && eff_ok;
    return r;
}

// Shared scaffolding of the two published scaling cases: calibrate eta on the
// smallest-device measurement, then (alpha, beta) on the full set, and
// evaluate the largest device count.
struct ScalingFit {
    double eta = 0.0;
    double alpha_s = 0.0;
    double beta_s_per_byte = 0.0;
    double residual = 0.0;
    double predicted_s = 0.0;
    double efficiency = 0.0;
    calib::Measurement base;
    calib::Measurement target;
};

ScalingFit fit_scaling_case(const Config& cfg, const std::string& workload_name,
                            const std::string& measurement_name) {
    const wl::JobSpec& job = cfg.workload(workload_name);
    std::vector<calib::Measurement> meas = cfg.measurement_set(measurement_name);
    if (meas.size() < 2) throw std::runtime_error(measurement_name + ": need >= 2 measurements");
    std::sort(meas.begin(), meas.end(),
              [](const calib::Measurement& a, const calib::Measurement& b) {
                  return a.devices < b.devices;
              });

    ScalingFit out;
    out.base = meas.front();
    out.target = meas.back();

    const topo::NetworkGraph graph = topo::build_dragonfly_plus(cfg.system.topology);

    calib::FitOptions eta_only;
    eta_only.free = {calib::FreeParam::Eta};
    const calib::FitResult eta_fit =
        calib::fit({out.base}, job, cfg.system, eta_only, &graph);

    wl::JobSpec calibrated = job;
    calibrated.compute_efficiency = eta_fit.eta;

    calib::FitOptions comm_fit;
    comm_fit.free = {calib::FreeParam::Alpha, calib::FreeParam::Beta};
    const calib::FitResult ab_fit = calib::fit(meas, calibrated, cfg.system, comm_fit, &graph);

    out.eta = eta_fit.eta;
    out.alpha_s = ab_fit.alpha_s;
    out.beta_s_per_byte = ab_fit.beta_s_per_byte;
    out.residual = ab_fit.residual;

    wl::JobSpec final_job = calibrated;
    final_job.comm.alpha_s = ab_fit.alpha_s;
    final_job.comm.beta_s_per_byte = ab_fit.beta_s_per_byte;
    final_job.devices = out.target.devices;
    out.predicted_s = wl::epoch_time(final_job, cfg.system, &graph);
    out.efficiency =
        wl::scaling_efficiency(out.base.time_s, static_cast<double>(out.base.devices),
                               out.predicted_s, static_cast<double>(out.target.devices));
    return out;
}

CaseResult case_bigearthnet(const Config& cfg) {
    CaseResult r{"bigearthnet", false, {}};
    const ScalingFit f = fit_scaling_case(cfg, "bigearthnet_resnet152", "bigearthnet_epochs");

    r.lines.push_back("eta fitted to " + fmt_g(f.base.time_s) + " s/epoch at " +
                      std::to_string(f.base.devices) + " GPUs: eta = " + fmt_g(f.eta));
    r.lines.push_back("fitted alpha = " + fmt_g(f.alpha_s) + " s, beta = " +
                      fmt_g(f.beta_s_per_byte) + " s/B, residual = " + fmt_g(f.residual));
    r.lines.push_back("predicted epoch at " + std::to_string(f.target.devices) +
                      " GPUs (64 nodes) = " + fmt_g(f.predicted_s) + " s");

    const bool window_ok = f.predicted_s >= 45.0 && f.predicted_s <= 55.0;
    r.lines.push_back(check_line(window_ok, "predicted epoch within [45, 55] s"));
    const bool eff_ok = f.efficiency >= 0.75 && f.efficiency <= 0.85;
    r.lines.push_back(check_line(eff_ok, "scaling efficiency " + fmt_g(f.efficiency) +
                                             " within [0.75, 0.85]"));
    const double exact = wl::scaling_efficiency(2550.0, 1.0, 50.0, 64.0);
    const bool exact_ok = std::abs(exact - 0.797) <= 0.001;
    r.lines.push_back(check_line(exact_ok, "efficiency(2550 s @ 1 node, 50 s @ 64 nodes) = " +
                                               fmt_g(exact) + " = 0.797 +/- 0.001"));
    r.passed = window_ok && eff_ok && exact_ok;
    return r;
}

CaseResult case_convlstm(const Config& cfg) {
    CaseResult r{"convlstm", false, {}};
    const ScalingFit f = fit_scaling_case(cfg, "convlstm_era5", "convlstm_epochs");

    r.lines.push_back("eta fitted to " + fmt_g(f.base.time_s) + " s/epoch (50 min) at " +
                      std::to_string(f.base.devices) + " GPU: eta = " + fmt_g(f.eta));
    r.lines.push_back("fitted alpha = " + fmt_g(f.alpha_s) + " s, beta = " +
                      fmt_g(f.beta_s_per_byte) + " s/B, residual = " + fmt_g(f.residual));
    r.lines.push_back("predicted epoch at " + std::to_string(f.target.devices) +
                      " GPUs = " + fmt_g(f.predicted_s) + " s, efficiency = " +
                      fmt_g(f.efficiency));

    const bool resid_ok = f.residual < 0.02;
    r.lines.push_back(check_line(resid_ok, "calibration residual below 2%"));
    const bool eff_ok = f.efficiency >= 0.88 && f.efficiency <= 0.92;
    r.lines.push_back(
        check_line(eff_ok, "16-GPU efficiency " + fmt_g(f.efficiency) + " = 0.90 +/- 0.02"));
    const bool alpha_ok = f.alpha_s >= 1e-8 && f.alpha_s <= 1e-2;
    const bool beta_ok = f.beta_s_per_byte >= 1e-12 && f.beta_s_per_byte <= 1e-6;
    r.lines.push_back(check_line(alpha_ok && beta_ok, "fitted (alpha, beta) within bounds"));
    r.passed = resid_ok && eff_ok && alpha_ok && beta_ok;
    return r;
}

}  // namespace

std::vector<std::string> case_names() {
    return {"bisection", "peaks", "bigearthnet", "convlstm"};
}

CaseResult run_case(const std::string& name, const Config& cfg) {
    if (name == "bisection") return case_bisection(cfg);
    if (name == "peaks") return case_peaks(cfg);
    if (name == "bigearthnet") return case_bigearthnet(cfg);
    if (name == "convlstm") return case_convlstm(cfg);
    throw std::invalid_argument("unknown reproduce case: " + name);
}

std::vector<CaseResult> run_all(const Config& cfg) {
    std::vector<CaseResult> results;
    for (const std::string& name : case_names()) results.push_back(run_case(name, cfg));
    return results;
}

}  // namespace boostersim::repro
