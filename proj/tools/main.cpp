#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "boostersim/config.hpp"
#include "boostersim/presets.hpp"
#include "boostersim/reproduce.hpp"
#include "boostersim/util.hpp"

namespace {

using namespace boostersim;
using nlohmann::json;
using util::fmt_g;

struct GlobalOptions {
    std::string config_path;
    std::string out_path;
    std::string format;  // empty = config default
    bool quiet = false;
};

Config load_config(const GlobalOptions& opts) {
    if (!opts.config_path.empty()) return Config::load(opts.config_path);
    if (const char* env = std::getenv("BOOSTERSIM_CONFIG"); env && *env)
        return Config::load(env);
    Config cfg = Config::builtin_default();
    cfg.validate();
    return cfg;
}

std::string effective_format(const GlobalOptions& opts, const Config& cfg) {
    const std::string f = opts.format.empty() ? cfg.output.format : opts.format;
    if (f != "csv" && f != "json" && f != "text")
        throw ConfigError("output.format: must be csv, json or text");
    return f;
}

void emit(const GlobalOptions& opts, const std::string& payload) {
    if (!opts.out_path.empty())
        util::write_file(opts.out_path, payload);
    else
        std::fputs(payload.c_str(), stdout);
}

void note(const GlobalOptions& opts, const std::string& text) {
    if (!opts.quiet) std::fputs(text.c_str(), stderr);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string tok = text.substr(pos, next - pos);
        if (!tok.empty()) out.push_back(tok);
        pos = next + 1;
    }
    return out;
}

std::vector<std::uint64_t> parse_count_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    for (const std::string& tok : split_list(text)) out.push_back(std::stoull(tok));
    return out;
}

int cmd_topo(const GlobalOptions& opts, const std::string& edges_path,
             const std::string& dot_path) {
    const Config cfg = load_config(opts);
    const std::string format = effective_format(opts, cfg);
    const topo::NetworkGraph graph = topo::build_dragonfly_plus(cfg.system.topology);
    const double bisection = topo::bisection_bandwidth(graph);

    if (!edges_path.empty()) util::write_file(edges_path, topo::to_edge_csv(graph));
    if (!dot_path.empty()) util::write_file(dot_path, topo::to_dot(graph));

    const std::uint32_t cells = cfg.system.topology.cell_count();
    std::string payload;
    if (format == "json") {
        json j = {{"cells", cells},
                  {"compute_nodes", graph.num_compute_nodes()},
                  {"vertices", graph.vertices.size()},
                  {"edges", graph.edges.size()},
                  {"intercell_edges", graph.intercell_edge_count()},
                  {"bisection_bandwidth_bits_per_s", bisection}};
        payload = j.dump(2) + "\n";
    } else {
        payload =
            "cells,compute_nodes,vertices,edges,intercell_edges,bisection_bandwidth_bits_per_s\n" +
            std::to_string(cells) + "," + std::to_string(graph.num_compute_nodes()) + "," +
            std::to_string(graph.vertices.size()) + "," + std::to_string(graph.edges.size()) +
            "," + std::to_string(graph.intercell_edge_count()) + "," + fmt_g(bisection) + "\n";
    }
    emit(opts, payload);

    note(opts, "dragonfly+ instance: " + std::to_string(graph.num_compute_nodes()) + " nodes in " +
                   std::to_string(cells) + " cells, " + std::to_string(graph.edges.size()) +
                   " links, bisection " + fmt_g(bisection / 1e12) + " Tbit/s\n");
    return 0;
}

int cmd_hw(const GlobalOptions& opts) {
    const Config cfg = load_config(opts);
    const std::string format = effective_format(opts, cfg);
    const hw::GpuSpec& gpu = cfg.system.node.gpu;

    std::string csv = "precision,bytes_per_element,gpu_peak_flops_per_s,system_peak_flops_per_s\n";
    std::string text = "gpu: " + gpu.name + " (tdp " + fmt_g(gpu.tdp_watts) + " W, memory " +
                       fmt_g(gpu.memory_bytes / 1e9) + " GB)\n";
    text += "system: " + std::to_string(cfg.system.num_nodes) + " nodes x " +
            std::to_string(cfg.system.node.gpus_per_node) + " GPUs = " +
            std::to_string(cfg.system.total_devices()) + " devices\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%10s %8s %16s %18s %14s\n", "precision", "bytes",
                  "gpu peak", "system peak", "Gflop/s/W");
    text += line;
    json jrows = json::array();
    for (const auto& [p, flops] : gpu.peak_flops) {
        const double sys_peak = hw::system_peak(cfg.system, p);
        const double gflops_per_w = hw::energy_efficiency(flops, gpu.tdp_watts) / 1e9;
        csv += std::string(hw::to_string(p)) + "," + std::to_string(hw::bytes_per_element(p)) +
               "," + fmt_g(flops) + "," + fmt_g(sys_peak) + "\n";
        std::snprintf(line, sizeof(line), "%10s %8zu %13.4g TF %15.6g PF %14.4g\n",
                      hw::to_string(p), hw::bytes_per_element(p), flops / 1e12, sys_peak / 1e15,
                      gflops_per_w);
        text += line;
        jrows.push_back({{"precision", hw::to_string(p)},
                         {"bytes_per_element", hw::bytes_per_element(p)},
                         {"gpu_peak_flops_per_s", flops},
                         {"system_peak_flops_per_s", sys_peak}});
    }
    if (format == "json") {
        json j = {{"gpu", gpu.name},
                  {"tdp_watts", gpu.tdp_watts},
                  {"devices", cfg.system.total_devices()},
                  {"table", jrows}};
        emit(opts, j.dump(2) + "\n");
    } else {
        emit(opts, csv);
    }
    note(opts, text);
    return 0;
}

int cmd_collective(const GlobalOptions& opts, const std::string& algorithm_name,
                   const std::string& participants, const std::string& message_list,
                   double alpha, std::optional<double> beta, double compression, bool contended,
                   const std::string& placement_name) {
    const Config cfg = load_config(opts);
    const coll::Algorithm algorithm = coll::algorithm_from_string(algorithm_name);
    const wl::PlacementPolicy policy = wl::placement_policy_from_string(placement_name);
    const std::vector<std::uint64_t> counts = parse_count_list(participants);
    const std::vector<std::string> messages = split_list(message_list);
    if (counts.empty()) throw ConfigError("collective: --participants list is empty");
    if (messages.empty()) throw ConfigError("collective: --message list is empty");
    if (!beta && !contended)
        throw ConfigError("collective: provide --beta or --contended");

    topo::NetworkGraph graph;
    if (contended) graph = topo::build_dragonfly_plus(cfg.system.topology);

    std::string csv =
        "algorithm,participants,message_bytes,alpha_s,beta_s_per_byte,compression_factor,"
        "time_s\n";
    for (std::uint64_t p : counts) {
        const coll::Placement placement =
            policy == wl::PlacementPolicy::Packed
                ? coll::Placement::packed(p, cfg.system.node.gpus_per_node)
                : coll::Placement::round_robin_cells(p, cfg.system.node.gpus_per_node,
                                                     cfg.system.topology);
        double beta_used = beta.value_or(0.0);
        if (contended) beta_used = coll::contended_beta(graph, placement, algorithm);
        for (const std::string& msg : messages) {
            coll::CollectiveParams params;
            params.algorithm = algorithm;
            params.participants = p;
            params.message_bytes = util::parse_byte_size(msg);
            params.alpha_s = alpha;
            params.beta_s_per_byte = beta_used;
            params.compression_factor = compression;
            const double t = algorithm == coll::Algorithm::Ring
                                 ? coll::ring_allreduce_time(params)
                                 : coll::hierarchical_allreduce_time(params, cfg.system.node,
                                                                     placement);
            csv += std::string(coll::to_string(algorithm)) + "," + std::to_string(p) + "," +
                   fmt_g(params.message_bytes) + "," + fmt_g(alpha) + "," + fmt_g(beta_used) +
                   "," + fmt_g(compression) + "," + fmt_g(t) + "\n";
        }
    }
    emit(opts, csv);
    return 0;
}

int cmd_train(const GlobalOptions& opts, const std::string& workload_name,
              std::optional<std::uint64_t> devices) {
    const Config cfg = load_config(opts);
    const std::string format = effective_format(opts, cfg);
    wl::JobSpec job = cfg.workload(workload_name);
    if (devices) job.devices = *devices;
    const topo::NetworkGraph graph = topo::build_dragonfly_plus(cfg.system.topology);

    const wl::StepBreakdown bd = wl::step_breakdown(job, cfg.system, &graph);
    const std::uint64_t steps = wl::steps_per_epoch(job);
    const double epoch = static_cast<double>(steps) * bd.total_s;
    const double total = static_cast<double>(job.epochs) * epoch;
    const double samples_per_s = static_cast<double>(job.dataset_samples) / epoch;
    const double achieved_flops = samples_per_s * job.model.flops_per_sample;
    const double power = static_cast<double>(job.devices) * cfg.system.node.gpu.tdp_watts;
    const double flops_per_watt = hw::energy_efficiency(achieved_flops, power);

    if (format == "json") {
        json j = {{"workload", workload_name},
                  {"devices", job.devices},
                  {"step_time_s", bd.total_s},
                  {"epoch_time_s", epoch},
                  {"time_to_train_s", total},
                  {"samples_per_s", samples_per_s},
                  {"achieved_flops_per_s", achieved_flops},
                  {"flops_per_watt", flops_per_watt}};
        emit(opts, j.dump(2) + "\n");
    } else {
        emit(opts,
             "workload,devices,step_time_s,epoch_time_s,time_to_train_s,samples_per_s,"
             "achieved_flops_per_s,flops_per_watt\n" +
                 workload_name + "," + std::to_string(job.devices) + "," + fmt_g(bd.total_s) +
                 "," + fmt_g(epoch) + "," + fmt_g(total) + "," + fmt_g(samples_per_s) + "," +
                 fmt_g(achieved_flops) + "," + fmt_g(flops_per_watt) + "\n");
    }

    note(opts, "step: compute " + fmt_g(bd.compute_s) + " s + exposed comm " +
                   fmt_g(bd.exposed_comm_s) + " s (full comm " + fmt_g(bd.comm_s) + " s, beta " +
                   fmt_g(bd.beta_used_s_per_byte) + " s/B) + io " + fmt_g(bd.io_s) + " s = " +
                   fmt_g(bd.total_s) + " s\n" + "epoch: " + std::to_string(steps) +
                   " steps -> " + fmt_g(epoch) + " s; " + std::to_string(job.epochs) +
                   " epochs -> " + fmt_g(total / 3600.0) + " h\n");
    return 0;
}

int cmd_sweep(const GlobalOptions& opts, const std::string& workload_name,
              const std::string& devices, const std::string& measurement_set) {
    const Config cfg = load_config(opts);
    const std::string format = effective_format(opts, cfg);
    const std::vector<std::uint64_t> counts = parse_count_list(devices);
    if (counts.empty()) throw ConfigError("sweep: --devices list is empty");

    const wl::JobSpec& job = cfg.workload(workload_name);
    const topo::NetworkGraph graph = topo::build_dragonfly_plus(cfg.system.topology);
    const wl::ScalingReport report = wl::sweep(job, counts, cfg.system, &graph);

    if (format == "json") {
        json rows = json::array();
        for (const wl::ScalingRow& r : report.rows)
            rows.push_back({{"p", r.devices},
                            {"step_time_s", r.step_time_s},
                            {"epoch_time_s", r.epoch_time_s},
                            {"samples_per_s", r.samples_per_s},
                            {"efficiency", r.efficiency},
                            {"ideal_epoch_time_s", r.ideal_epoch_time_s}});
        emit(opts, rows.dump(2) + "\n");
    } else {
        emit(opts, wl::to_csv(report));
    }
    note(opts, wl::to_text(report));
    if (!measurement_set.empty()) {
        // Echo measured points next to the prediction; no variance modeling.
        for (const calib::Measurement& m : cfg.measurement_set(measurement_set)) {
            double predicted = 0.0;
            for (const wl::ScalingRow& row : report.rows)
                if (row.devices == m.devices) predicted = row.epoch_time_s;
            note(opts, "observed p=" + std::to_string(m.devices) + ": " + fmt_g(m.time_s) +
                           " s" +
                           (predicted > 0.0 ? " (predicted " + fmt_g(predicted) + " s)" : "") +
                           "\n");
        }
    }
    return 0;
}

int cmd_calibrate(const GlobalOptions& opts, const std::string& workload_name,
                  const std::string& measurements_path, const std::string& measurement_set,
                  const std::string& free_list, std::vector<std::string> bound_specs,
                  std::uint32_t grid, std::uint32_t rounds) {
    const Config cfg = load_config(opts);
    const wl::JobSpec& job = cfg.workload(workload_name);

    std::vector<calib::Measurement> measurements;
    if (!measurements_path.empty())
        measurements = measurements_from_csv(util::read_file(measurements_path));
    else if (!measurement_set.empty())
        measurements = cfg.measurement_set(measurement_set);
    else
        throw ConfigError("calibrate: provide --measurements or --measurement-set");

    calib::FitOptions options;
    options.grid_points = grid;
    options.refinement_rounds = rounds;
    std::size_t pos = 0;
    const std::string& fl = free_list;
    while (pos < fl.size()) {
        std::size_t next = fl.find(',', pos);
        if (next == std::string::npos) next = fl.size();
        const std::string tok = fl.substr(pos, next - pos);
        if (!tok.empty()) options.free.push_back(calib::free_param_from_string(tok));
        pos = next + 1;
    }
    for (const std::string& spec : bound_specs) {
        const std::size_t eq = spec.find('=');
        const std::size_t colon = spec.find(':', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || colon == std::string::npos)
            throw ConfigError("calibrate: --bounds expects param=lo:hi, got '" + spec + "'");
        const calib::FreeParam p = calib::free_param_from_string(spec.substr(0, eq));
        calib::ParamRange range = calib::default_range(p);
        range.lo = std::stod(spec.substr(eq + 1, colon - eq - 1));
        range.hi = std::stod(spec.substr(colon + 1));
        options.bounds[p] = range;
    }

    const topo::NetworkGraph graph = topo::build_dragonfly_plus(cfg.system.topology);
    const calib::FitResult result = calib::fit(measurements, job, cfg.system, options, &graph);
    emit(opts, calib::to_json(result));
    note(opts, "residual (rms relative error): " + fmt_g(result.residual) + "\n");
    return 0;
}

int cmd_reproduce(const GlobalOptions& opts, const std::string& case_name, bool all) {
    const Config cfg = load_config(opts);
    std::vector<repro::CaseResult> results;
    if (!case_name.empty() && !all)
        results.push_back(repro::run_case(case_name, cfg));
    else
        results = repro::run_all(cfg);

    bool ok = true;
    std::string out;
    for (const repro::CaseResult& r : results) {
        for (const std::string& line : r.lines) out += line + "\n";
        out += std::string(r.passed ? "PASS" : "FAIL") + ": " + r.name + "\n";
        ok = ok && r.passed;
    }
    emit(opts, out);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analytical scaling model for data-parallel training on a DragonFly+ GPU system"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "JSON configuration file")
        ->envname("BOOSTERSIM_CONFIG");
    app.add_option("--out", opts.out_path, "write machine output to this path");
    app.add_option("--format", opts.format, "csv, json or text");
    app.add_flag("--quiet", opts.quiet, "suppress human-readable tables on stderr");

    auto* topo_cmd = app.add_subcommand("topo", "build the network and report derived figures");
    std::string edges_path, dot_path;
    topo_cmd->add_option("--edges", edges_path, "write edge list CSV to this path");
    topo_cmd->add_option("--dot", dot_path, "write Graphviz DOT to this path");

    auto* hw_cmd = app.add_subcommand("hw", "hardware capability tables");
    hw_cmd->add_subcommand("show", "print the per-precision peak table");

    auto* coll_cmd = app.add_subcommand("collective", "evaluate allreduce cost points");
    std::string algorithm = "ring", participants, messages, placement_name = "packed";
    double alpha = 0.0, compression = 1.0;
    std::optional<double> beta;
    bool contended = false;
    coll_cmd->add_option("--algorithm", algorithm, "ring or hierarchical");
    coll_cmd->add_option("--participants,-p", participants, "comma-separated participant counts")
        ->required();
    coll_cmd->add_option("--message,-m", messages,
                         "comma-separated message sizes (B/KB/MB/GB suffixes)")
        ->required();
    coll_cmd->add_option("--alpha", alpha, "per-step latency in seconds");
    coll_cmd->add_option("--beta", beta, "seconds per byte");
    coll_cmd->add_flag("--contended", contended, "derive beta from topology contention");
    coll_cmd->add_option("--compression", compression, "payload compression factor in (0,1]");
    coll_cmd->add_option("--placement", placement_name, "packed or round_robin_cells");

    auto* train_cmd = app.add_subcommand("train", "predict step/epoch/total training time");
    std::string train_workload;
    std::optional<std::uint64_t> train_devices;
    train_cmd->add_option("--workload", train_workload, "workload name from the config")
        ->required();
    train_cmd->add_option("--devices", train_devices, "override the configured device count");

    auto* sweep_cmd = app.add_subcommand("sweep", "scaling report over device counts");
    std::string sweep_workload, sweep_devices, sweep_measurements;
    sweep_cmd->add_option("--workload", sweep_workload, "workload name from the config")
        ->required();
    sweep_cmd->add_option("--devices", sweep_devices, "comma-separated device counts")
        ->required();
    sweep_cmd->add_option("--measurement-set", sweep_measurements,
                          "echo this measurement set next to the report");

    auto* cal_cmd = app.add_subcommand("calibrate", "fit model parameters to measurements");
    std::string cal_workload, cal_measurements, cal_set, cal_free = "alpha,beta";
    std::vector<std::string> cal_bounds;
    std::uint32_t cal_grid = 7, cal_rounds = 30;
    cal_cmd->add_option("--workload", cal_workload, "workload name from the config")->required();
    cal_cmd->add_option("--measurements", cal_measurements, "CSV file with columns p,time_s");
    cal_cmd->add_option("--measurement-set", cal_set, "named measurement set from the config");
    cal_cmd->add_option("--free", cal_free, "parameters to fit: alpha,beta,eta,overlap");
    cal_cmd->add_option("--bounds", cal_bounds, "bound override param=lo:hi (repeatable)");
    cal_cmd->add_option("--grid", cal_grid, "grid points per axis");
    cal_cmd->add_option("--rounds", cal_rounds, "refinement rounds");

    auto* repro_cmd = app.add_subcommand("reproduce", "run the published-number checks");
    std::string repro_case;
    bool repro_all = false;
    repro_cmd->add_option("--case", repro_case, "single case name");
    repro_cmd->add_flag("--all", repro_all, "run every case");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (topo_cmd->parsed()) return cmd_topo(opts, edges_path, dot_path);
        if (hw_cmd->parsed()) return cmd_hw(opts);
        if (coll_cmd->parsed())
            return cmd_collective(opts, algorithm, participants, messages, alpha, beta,
                                  compression, contended, placement_name);
        if (train_cmd->parsed()) return cmd_train(opts, train_workload, train_devices);
        if (sweep_cmd->parsed())
            return cmd_sweep(opts, sweep_workload, sweep_devices, sweep_measurements);
        if (cal_cmd->parsed())
            return cmd_calibrate(opts, cal_workload, cal_measurements, cal_set, cal_free,
                                 cal_bounds, cal_grid, cal_rounds);
        if (repro_cmd->parsed()) return cmd_reproduce(opts, repro_case, repro_all);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
