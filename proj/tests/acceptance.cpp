// Acceptance suite: one pass/fail line per criterion, non-zero exit when any
// fails. Criterion 7 spawns the CLI, whose path is argv[1].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "boostersim/calibration.hpp"
#include "boostersim/config.hpp"
#include "boostersim/presets.hpp"
#include "boostersim/reproduce.hpp"
#include "boostersim/workload.hpp"
#include "oracles.hpp"

using namespace boostersim;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int criterion, const std::string& label, bool pass, double elapsed_s,
            double budget_s, const std::string& detail = "") {
    const bool in_budget = elapsed_s < budget_s;
    const bool ok = pass && in_budget;
    if (!ok) ++g_failures;
    std::printf("%s criterion-%d %s (%.3f s%s)%s%s\n", ok ? "PASS" : "FAIL", criterion,
                label.c_str(), elapsed_s, in_budget ? "" : ", over budget",
                detail.empty() ? "" : " -- ", detail.c_str());
}

bool case_passes(const Config& cfg, const std::string& name, std::string& detail) {
    const repro::CaseResult r = repro::run_case(name, cfg);
    for (const std::string& line : r.lines)
        if (line.find("FAILED") != std::string::npos) detail += line + "; ";
    return r.passed;
}

// --- criterion 5 pieces ---------------------------------------------------

bool bisection_oracle_suite() {
    for (std::uint32_t cells = 2; cells <= 8; ++cells) {
        topo::TopologySpec t;
        t.num_nodes = cells * 4;
        t.nodes_per_cell = 4;
        t.intercell_links_per_pair = 3;
        t.link_bandwidth_bits_per_s = 100e9;
        t.nics_per_node = 1;
        t.nic_bandwidth_bits_per_s = 100e9;
        const topo::NetworkGraph g = topo::build_dragonfly_plus(t);
        if (topo::bisection_bandwidth(g) != oracles::min_balanced_bipartition_bits(g))
            return false;
    }
    return true;
}

bool routing_oracle_suite() {
    std::mt19937 rng(20210405);
    topo::TopologySpec small;
    small.num_nodes = 64;
    small.nodes_per_cell = 8;
    small.intercell_links_per_pair = 3;
    small.nics_per_node = 2;
    const topo::NetworkGraph instances[] = {
        topo::build_dragonfly_plus(small),
        topo::build_dragonfly_plus(presets::juwels_booster_topology())};
    for (const topo::NetworkGraph& g : instances) {
        std::uniform_int_distribution<std::uint32_t> pick(0, g.num_compute_nodes() - 1);
        int checked = 0;
        while (checked < 100) {
            const std::uint32_t a = pick(rng), b = pick(rng);
            if (a == b) continue;
            if (topo::route(g, a, b).hop_count() != oracles::bfs_hop_count(g, a, b)) return false;
            ++checked;
        }
    }
    return true;
}

bool calibration_recovery_suite(const Config& cfg, const topo::NetworkGraph& graph) {
    wl::JobSpec truth = cfg.workload("convlstm_era5");
    truth.comm.alpha_s = 2e-5;
    truth.comm.beta_s_per_byte = 1.3e-9;
    std::vector<calib::Measurement> measurements;
    for (std::uint64_t p : {2ull, 4ull, 8ull, 16ull, 32ull}) {
        wl::JobSpec j = truth;
        j.devices = p;
        measurements.push_back({p, wl::epoch_time(j, cfg.system, &graph), false});
    }
    calib::FitOptions options;
    options.free = {calib::FreeParam::Alpha, calib::FreeParam::Beta};
    const calib::FitResult fit =
        calib::fit(measurements, truth, cfg.system, options, &graph);
    return std::abs(fit.alpha_s - 2e-5) / 2e-5 < 0.01 &&
           std::abs(fit.beta_s_per_byte - 1.3e-9) / 1.3e-9 < 0.01;
}

// --- criterion 6 pieces ---------------------------------------------------

bool property_suite(const Config& cfg, const topo::NetworkGraph& graph, std::string& detail) {
    bool ok = true;
    const auto fail = [&](const char* what) {
        ok = false;
        detail += std::string(what) + "; ";
    };

    // collective-time monotonicity in p, M and alpha
    coll::CollectiveParams params;
    params.participants = 8;
    params.message_bytes = 1e6;
    params.alpha_s = 1e-6;
    params.beta_s_per_byte = 1e-10;
    double prev = -1.0;
    for (std::uint64_t p : {1ull, 2ull, 8ull, 64ull}) {
        coll::CollectiveParams q = params;
        q.participants = p;
        const double t = coll::ring_allreduce_time(q);
        if (t < prev) fail("monotone in p");
        prev = t;
    }
    prev = -1.0;
    for (double m : {0.0, 1e4, 1e7, 1e10}) {
        coll::CollectiveParams q = params;
        q.message_bytes = m;
        const double t = coll::ring_allreduce_time(q);
        if (t < prev) fail("monotone in M");
        prev = t;
    }
    prev = -1.0;
    for (double a : {0.0, 1e-7, 1e-4}) {
        coll::CollectiveParams q = params;
        q.alpha_s = a;
        const double t = coll::ring_allreduce_time(q);
        if (t < prev) fail("monotone in alpha");
        prev = t;
    }

    // compression round trip
    if (coll::compressed_bytes(coll::compressed_bytes(1717004.0, hw::Precision::FP32,
                                                      hw::Precision::FP16),
                               hw::Precision::FP16, hw::Precision::FP32) != 1717004.0)
        fail("compression round trip");

    // hierarchical == flat ring when one rank per node
    const hw::NodeSpec node = presets::juwels_booster_node();
    coll::CollectiveParams h = params;
    h.participants = 16;
    h.algorithm = coll::Algorithm::Hierarchical;
    coll::CollectiveParams flat = h;
    flat.algorithm = coll::Algorithm::Ring;
    if (coll::hierarchical_allreduce_time(h, node, coll::Placement::packed(16, 1)) !=
        coll::ring_allreduce_time(flat))
        fail("hierarchical equals flat at g=1");

    // efficiency is 1 at the baseline and bounded above
    const wl::ScalingReport report =
        wl::sweep(cfg.workload("bigearthnet_resnet152"), {4, 16, 64, 256}, cfg.system, &graph);
    if (report.rows.front().efficiency != 1.0) fail("baseline efficiency 1.0");
    for (const wl::ScalingRow& row : report.rows)
        if (row.efficiency <= 0.0 || row.efficiency > 1.05) fail("efficiency bounds");

    // contention conservation
    coll::Placement placement;
    for (std::uint32_t n = 0; n < 96; n += 3) placement.slots.push_back({n, 0});
    const coll::ContentionResult contention =
        coll::analyze_contention(graph, placement, coll::Algorithm::Ring);
    if (contention.total_edge_load != contention.total_hops) fail("contention conservation");

    // byte-identical outputs across repeated runs
    const wl::ScalingReport again =
        wl::sweep(cfg.workload("bigearthnet_resnet152"), {4, 16, 64, 256}, cfg.system, &graph);
    if (wl::to_csv(report) != wl::to_csv(again)) fail("deterministic csv");
    if (Config::builtin_default().to_json_text() != Config::builtin_default().to_json_text())
        fail("deterministic config json");

    return ok;
}

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
#ifdef _WIN32
    return status;
#else
    return WEXITSTATUS(status);
#endif
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const Config cfg = Config::builtin_default();
    const topo::NetworkGraph graph = topo::build_dragonfly_plus(cfg.system.topology);

    {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        const bool pass = case_passes(cfg, "bisection", detail);
        report(1, "bisection-reproduction", pass, seconds_since(t0), 1.0, detail);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        const bool pass = case_passes(cfg, "peaks", detail);
        report(2, "peak-derivations", pass, seconds_since(t0), 60.0, detail);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        const bool pass = case_passes(cfg, "bigearthnet", detail);
        report(3, "bigearthnet-scaling", pass, seconds_since(t0), 1.0, detail);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        const bool pass = case_passes(cfg, "convlstm", detail);
        report(4, "convlstm-scaling", pass, seconds_since(t0), 10.0, detail);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = true;
        if (!bisection_oracle_suite()) {
            pass = false;
            detail += "bisection oracle; ";
        }
        if (!routing_oracle_suite()) {
            pass = false;
            detail += "routing oracle; ";
        }
        if (!calibration_recovery_suite(cfg, graph)) {
            pass = false;
            detail += "calibration recovery; ";
        }
        report(5, "oracle-equivalence", pass, seconds_since(t0), 60.0, detail);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        const bool pass = property_suite(cfg, graph, detail);
        report(6, "property-suites", pass, seconds_since(t0), 60.0, detail);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool pass = false;
        std::string detail;
        if (cli.empty()) {
            detail = "no CLI path given";
        } else {
            pass = run_cli(cli, "--quiet reproduce --all") == 0;
            if (!pass) detail = "reproduce --all returned non-zero";
        }
        report(7, "reproduce-all", pass, seconds_since(t0), 120.0, detail);
    }

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
