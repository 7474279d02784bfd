#include "boostersim/config.hpp"

#include <set>
#include <sstream>

#include "json.hpp"

#include "boostersim/presets.hpp"
#include "boostersim/util.hpp"

namespace boostersim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items())
        if (allowed.find(key) == allowed.end()) fail(path + "." + key, "unknown field");
}

double get_number(const json& j, const std::string& path, const std::string& key,
                  bool required, double fallback) {
    if (!j.contains(key)) {
        if (required) fail(path + "." + key, "missing required field");
        return fallback;
    }
    if (!j.at(key).is_number()) fail(path + "." + key, "expected a number");
    return j.at(key).get<double>();
}

std::uint64_t get_uint(const json& j, const std::string& path, const std::string& key,
                       bool required, std::uint64_t fallback) {
    if (!j.contains(key)) {
        if (required) fail(path + "." + key, "missing required field");
        return fallback;
    }
    if (!j.at(key).is_number_unsigned()) fail(path + "." + key, "expected a non-negative integer");
    return j.at(key).get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path, const std::string& key,
                       bool required, const std::string& fallback) {
    if (!j.contains(key)) {
        if (required) fail(path + "." + key, "missing required field");
        return fallback;
    }
    if (!j.at(key).is_string()) fail(path + "." + key, "expected a string");
    return j.at(key).get<std::string>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) fail(path + "." + key, "expected a boolean");
    return j.at(key).get<bool>();
}

hw::GpuSpec parse_gpu(const json& j, const std::string& path) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "a100_40gb") return presets::a100_40gb();
        fail(path, "unknown gpu preset '" + name + "'");
    }
    check_keys(j, path, {"name", "peak_flops", "tdp_watts", "memory_bytes"});
    hw::GpuSpec gpu;
    gpu.name = get_string(j, path, "name", true, "");
    if (!j.contains("peak_flops") || !j.at("peak_flops").is_object())
        fail(path + ".peak_flops", "expected an object of precision -> flop/s");
    for (const auto& [key, value] : j.at("peak_flops").items()) {
        hw::Precision p;
        try {
            p = hw::precision_from_string(key);
        } catch (const std::exception& e) {
            fail(path + ".peak_flops." + key, e.what());
        }
        if (!value.is_number()) fail(path + ".peak_flops." + key, "expected a number");
        gpu.peak_flops[p] = value.get<double>();
    }
    gpu.tdp_watts = get_number(j, path, "tdp_watts", true, 0.0);
    gpu.memory_bytes = get_number(j, path, "memory_bytes", false, 0.0);
    return gpu;
}

topo::TopologySpec parse_topology(const json& j, const std::string& path) {
    topo::TopologySpec t;
    if (j.contains("preset")) {
        const std::string name = get_string(j, path, "preset", true, "");
        if (name != "juwels_booster") fail(path + ".preset", "unknown preset '" + name + "'");
        t = presets::juwels_booster_topology();
    }
    check_keys(j, path,
               {"preset", "num_nodes", "nodes_per_cell", "intercell_links_per_pair",
                "link_bandwidth_bits_per_s", "intra_cell_levels", "nics_per_node",
                "nic_bandwidth_bits_per_s", "intra_node_bandwidth_bytes_per_s",
                "switch_hop_latency_s", "nic_latency_s", "switch_radix"});
    t.num_nodes = static_cast<std::uint32_t>(get_uint(j, path, "num_nodes", false, t.num_nodes));
    t.nodes_per_cell =
        static_cast<std::uint32_t>(get_uint(j, path, "nodes_per_cell", false, t.nodes_per_cell));
    t.intercell_links_per_pair = static_cast<std::uint32_t>(
        get_uint(j, path, "intercell_links_per_pair", false, t.intercell_links_per_pair));
    t.link_bandwidth_bits_per_s =
        get_number(j, path, "link_bandwidth_bits_per_s", false, t.link_bandwidth_bits_per_s);
    t.intra_cell_levels = static_cast<std::uint32_t>(
        get_uint(j, path, "intra_cell_levels", false, t.intra_cell_levels));
    t.nics_per_node =
        static_cast<std::uint32_t>(get_uint(j, path, "nics_per_node", false, t.nics_per_node));
    t.nic_bandwidth_bits_per_s =
        get_number(j, path, "nic_bandwidth_bits_per_s", false, t.nic_bandwidth_bits_per_s);
    t.intra_node_bandwidth_bytes_per_s = get_number(j, path, "intra_node_bandwidth_bytes_per_s",
                                                    false, t.intra_node_bandwidth_bytes_per_s);
    t.switch_hop_latency_s =
        get_number(j, path, "switch_hop_latency_s", false, t.switch_hop_latency_s);
    t.nic_latency_s = get_number(j, path, "nic_latency_s", false, t.nic_latency_s);
    t.switch_radix =
        static_cast<std::uint32_t>(get_uint(j, path, "switch_radix", false, t.switch_radix));
    return t;
}

void parse_hardware(const json& j, const std::string& path, hw::SystemSpec& sys) {
    if (j.contains("preset")) {
        const std::string name = get_string(j, path, "preset", true, "");
        if (name != "juwels_booster") fail(path + ".preset", "unknown preset '" + name + "'");
        sys = presets::juwels_booster();
    }
    check_keys(j, path,
               {"preset", "gpu", "gpus_per_node", "nics_per_node", "nic_bandwidth_bits_per_s",
                "intra_node_bandwidth_bytes_per_s", "host_memory_bytes", "num_nodes"});
    if (j.contains("gpu")) sys.node.gpu = parse_gpu(j.at("gpu"), path + ".gpu");
    sys.node.gpus_per_node = static_cast<std::uint32_t>(
        get_uint(j, path, "gpus_per_node", false, sys.node.gpus_per_node));
    sys.node.nics_per_node = static_cast<std::uint32_t>(
        get_uint(j, path, "nics_per_node", false, sys.node.nics_per_node));
    sys.node.nic_bandwidth_bits_per_s =
        get_number(j, path, "nic_bandwidth_bits_per_s", false, sys.node.nic_bandwidth_bits_per_s);
    sys.node.intra_node_bandwidth_bytes_per_s =
        get_number(j, path, "intra_node_bandwidth_bytes_per_s", false,
                   sys.node.intra_node_bandwidth_bytes_per_s);
    sys.node.host_memory_bytes =
        get_number(j, path, "host_memory_bytes", false, sys.node.host_memory_bytes);
    sys.num_nodes =
        static_cast<std::uint32_t>(get_uint(j, path, "num_nodes", false, sys.num_nodes));
}

wl::JobSpec parse_workload(const json& j, const std::string& path) {
    check_keys(j, path,
               {"model", "devices", "per_device_batch", "dataset_samples", "epochs", "placement",
                "overlap_fraction", "io_bandwidth_bytes_per_s", "bytes_per_sample",
                "compute_efficiency", "bn_sync_bytes", "bn_sync_ranks", "comm"});
    wl::JobSpec job;
    if (!j.contains("model")) fail(path + ".model", "missing required field");
    const json& m = j.at("model");
    const std::string mpath = path + ".model";
    check_keys(m, mpath,
               {"name", "parameter_count", "flops_per_sample", "gradient_precision",
                "compute_precision"});
    job.model.name = get_string(m, mpath, "name", false, "");
    job.model.parameter_count = get_uint(m, mpath, "parameter_count", true, 0);
    job.model.flops_per_sample = get_number(m, mpath, "flops_per_sample", true, 0.0);
    try {
        job.model.gradient_precision =
            hw::precision_from_string(get_string(m, mpath, "gradient_precision", false, "fp32"));
        job.model.compute_precision =
            hw::precision_from_string(get_string(m, mpath, "compute_precision", false, "fp32"));
    } catch (const std::exception& e) {
        fail(mpath, e.what());
    }

    job.devices = get_uint(j, path, "devices", false, 1);
    job.per_device_batch = get_uint(j, path, "per_device_batch", false, 1);
    job.dataset_samples = get_uint(j, path, "dataset_samples", true, 0);
    job.epochs = static_cast<std::uint32_t>(get_uint(j, path, "epochs", false, 1));
    try {
        job.placement =
            wl::placement_policy_from_string(get_string(j, path, "placement", false, "packed"));
    } catch (const std::exception& e) {
        fail(path + ".placement", e.what());
    }
    job.overlap_fraction = get_number(j, path, "overlap_fraction", false, 0.0);
    job.io_bandwidth_bytes_per_s =
        get_number(j, path, "io_bandwidth_bytes_per_s", false, job.io_bandwidth_bytes_per_s);
    job.bytes_per_sample = get_number(j, path, "bytes_per_sample", false, 0.0);
    job.compute_efficiency = get_number(j, path, "compute_efficiency", false, 1.0);
    job.bn_sync_bytes = get_number(j, path, "bn_sync_bytes", false, 0.0);
    job.bn_sync_ranks = get_uint(j, path, "bn_sync_ranks", false, 0);

    if (j.contains("comm")) {
        const json& c = j.at("comm");
        const std::string cpath = path + ".comm";
        check_keys(c, cpath,
                   {"algorithm", "alpha_s", "compression_factor", "beta_s_per_byte"});
        try {
            job.comm.algorithm =
                coll::algorithm_from_string(get_string(c, cpath, "algorithm", false, "ring"));
        } catch (const std::exception& e) {
            fail(cpath + ".algorithm", e.what());
        }
        job.comm.alpha_s = get_number(c, cpath, "alpha_s", false, job.comm.alpha_s);
        job.comm.compression_factor =
            get_number(c, cpath, "compression_factor", false, job.comm.compression_factor);
        if (c.contains("beta_s_per_byte") && !c.at("beta_s_per_byte").is_null())
            job.comm.beta_s_per_byte = get_number(c, cpath, "beta_s_per_byte", false, 0.0);
    }
    return job;
}

std::vector<calib::Measurement> parse_measurements(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of measurements");
    std::vector<calib::Measurement> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string mpath = path + "[" + std::to_string(i) + "]";
        const json& m = j.at(i);
        check_keys(m, mpath, {"devices", "time_s", "is_step_time"});
        calib::Measurement meas;
        meas.devices = get_uint(m, mpath, "devices", true, 0);
        meas.time_s = get_number(m, mpath, "time_s", true, 0.0);
        meas.is_step_time = get_bool(m, mpath, "is_step_time", false);
        out.push_back(meas);
    }
    return out;
}

json gpu_to_json(const hw::GpuSpec& gpu) {
    json peaks = json::object();
    for (const auto& [p, flops] : gpu.peak_flops) peaks[hw::to_string(p)] = flops;
    return {{"name", gpu.name},
            {"peak_flops", peaks},
            {"tdp_watts", gpu.tdp_watts},
            {"memory_bytes", gpu.memory_bytes}};
}

json workload_to_json(const wl::JobSpec& job) {
    json comm = {{"algorithm", coll::to_string(job.comm.algorithm)},
                 {"alpha_s", job.comm.alpha_s},
                 {"compression_factor", job.comm.compression_factor}};
    if (job.comm.beta_s_per_byte) comm["beta_s_per_byte"] = *job.comm.beta_s_per_byte;
    return {{"model",
             {{"name", job.model.name},
              {"parameter_count", job.model.parameter_count},
              {"flops_per_sample", job.model.flops_per_sample},
              {"gradient_precision", hw::to_string(job.model.gradient_precision)},
              {"compute_precision", hw::to_string(job.model.compute_precision)}}},
            {"devices", job.devices},
            {"per_device_batch", job.per_device_batch},
            {"dataset_samples", job.dataset_samples},
            {"epochs", job.epochs},
            {"placement", wl::to_string(job.placement)},
            {"overlap_fraction", job.overlap_fraction},
            {"io_bandwidth_bytes_per_s", job.io_bandwidth_bytes_per_s},
            {"bytes_per_sample", job.bytes_per_sample},
            {"compute_efficiency", job.compute_efficiency},
            {"bn_sync_bytes", job.bn_sync_bytes},
            {"bn_sync_ranks", job.bn_sync_ranks},
            {"comm", comm}};
}

}  // namespace

const wl::JobSpec& Config::workload(const std::string& name) const {
    const auto it = workloads.find(name);
    if (it == workloads.end()) throw ConfigError("workloads." + name + ": no such workload");
    return it->second;
}

const std::vector<calib::Measurement>& Config::measurement_set(const std::string& name) const {
    const auto it = measurement_sets.find(name);
    if (it == measurement_sets.end())
        throw ConfigError("measurements." + name + ": no such measurement set");
    return it->second;
}

void Config::validate() const {
    try {
        system.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("hardware: ") + e.what());
    }
    for (const auto& [name, job] : workloads) {
        try {
            job.validate();
        } catch (const std::exception& e) {
            throw ConfigError("workloads." + name + ": " + e.what());
        }
        if (job.devices > system.total_devices())
            throw ConfigError("workloads." + name + ": devices exceed system capacity");
    }
    for (const auto& [name, set] : measurement_sets) {
        for (const calib::Measurement& m : set) {
            if (m.devices == 0)
                throw ConfigError("measurements." + name + ": devices must be >= 1");
            if (!(m.time_s > 0.0))
                throw ConfigError("measurements." + name + ": time_s must be > 0");
            if (m.devices > system.total_devices())
                throw ConfigError("measurements." + name + ": devices exceed system capacity");
        }
    }
    if (output.format != "csv" && output.format != "json" && output.format != "text")
        throw ConfigError("output.format: must be csv, json or text");
}

Config Config::builtin_default() {
    Config cfg;
    cfg.system = presets::juwels_booster();

    // Multispectral ResNet-152 on 354196 training patches; 2550 s/epoch on
    // one node, ~50 s/epoch on 64 nodes.
    {
        wl::JobSpec job;
        job.model.name = "resnet152-multispectral";
        job.model.parameter_count = 58'200'000;
        job.model.flops_per_sample = 31e9;
        job.model.gradient_precision = hw::Precision::FP32;
        job.model.compute_precision = hw::Precision::FP32;
        job.devices = 4;
        job.per_device_batch = 16;
        job.dataset_samples = 354196;
        job.epochs = 100;
        job.compute_efficiency = 0.0552879044;
        job.comm.algorithm = coll::Algorithm::Hierarchical;
        job.comm.alpha_s = 1e-5;
        job.comm.compression_factor = 0.5;  // FP16 gradient compression
        cfg.workloads["bigearthnet_resnet152"] = job;
    }

    // Small convLSTM video-prediction model; about 50 min/epoch on a single
    // GPU, 90% scaling efficiency at 16 GPUs.
    {
        wl::JobSpec job;
        job.model.name = "convlstm-era5";
        job.model.parameter_count = 429'251;
        job.model.flops_per_sample = 2e11;
        job.model.gradient_precision = hw::Precision::FP32;
        job.model.compute_precision = hw::Precision::FP32;
        job.devices = 1;
        job.per_device_batch = 16;
        job.dataset_samples = 98304;
        job.epochs = 10;
        job.compute_efficiency = 0.336082051;
        job.comm.algorithm = coll::Algorithm::Ring;
        job.comm.alpha_s = 1e-5;
        job.comm.compression_factor = 0.5;
        cfg.workloads["convlstm_era5"] = job;
    }

    // ResNet-152x4 pre-training, 90 epochs on 256 GPUs in roughly 81 hours.
    {
        wl::JobSpec job;
        job.model.name = "resnet152x4";
        job.model.parameter_count = 928'000'000;
        job.model.flops_per_sample = 5.6e11;
        job.model.gradient_precision = hw::Precision::FP32;
        job.model.compute_precision = hw::Precision::FP16_TC;
        job.devices = 256;
        job.per_device_batch = 16;
        job.dataset_samples = 14'197'122;
        job.epochs = 90;
        job.compute_efficiency = 0.0369236585;
        job.comm.algorithm = coll::Algorithm::Hierarchical;
        job.comm.alpha_s = 1e-5;
        job.comm.compression_factor = 0.5;
        cfg.workloads["resnet152x4_imagenet21k"] = job;
    }

    cfg.measurement_sets["bigearthnet_epochs"] = {{4, 2550.0, false}, {256, 50.0, false}};
    cfg.measurement_sets["convlstm_epochs"] = {{1, 3000.0, false}, {16, 625.0 / 3.0, false}};
    return cfg;
}

Config Config::from_json_text(const std::string& text, const std::string& source_name) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // Report the line of the failure rather than a byte offset.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(source_name + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": " + e.what());
    }

    check_keys(root, source_name, {"hardware", "topology", "workloads", "measurements", "output"});
    Config cfg;
    cfg.system = presets::juwels_booster();
    if (root.contains("hardware")) parse_hardware(root.at("hardware"), "hardware", cfg.system);
    if (root.contains("topology"))
        cfg.system.topology = parse_topology(root.at("topology"), "topology");
    if (root.contains("workloads")) {
        if (!root.at("workloads").is_object()) fail("workloads", "expected an object");
        for (const auto& [name, value] : root.at("workloads").items())
            cfg.workloads[name] = parse_workload(value, "workloads." + name);
    }
    if (root.contains("measurements")) {
        if (!root.at("measurements").is_object()) fail("measurements", "expected an object");
        for (const auto& [name, value] : root.at("measurements").items())
            cfg.measurement_sets[name] = parse_measurements(value, "measurements." + name);
    }
    if (root.contains("output")) {
        const json& o = root.at("output");
        check_keys(o, "output", {"format", "quiet"});
        cfg.output.format = get_string(o, "output", "format", false, cfg.output.format);
        cfg.output.quiet = get_bool(o, "output", "quiet", cfg.output.quiet);
    }
    cfg.validate();
    return cfg;
}

Config Config::load(const std::string& path) {
    return from_json_text(util::read_file(path), path);
}

std::string Config::to_json_text() const {
    json root;
    root["hardware"] = {{"gpu", gpu_to_json(system.node.gpu)},
                        {"gpus_per_node", system.node.gpus_per_node},
                        {"nics_per_node", system.node.nics_per_node},
                        {"nic_bandwidth_bits_per_s", system.node.nic_bandwidth_bits_per_s},
                        {"intra_node_bandwidth_bytes_per_s",
                         system.node.intra_node_bandwidth_bytes_per_s},
                        {"host_memory_bytes", system.node.host_memory_bytes},
                        {"num_nodes", system.num_nodes}};
    const topo::TopologySpec& t = system.topology;
    root["topology"] = {{"num_nodes", t.num_nodes},
                        {"nodes_per_cell", t.nodes_per_cell},
                        {"intercell_links_per_pair", t.intercell_links_per_pair},
                        {"link_bandwidth_bits_per_s", t.link_bandwidth_bits_per_s},
                        {"intra_cell_levels", t.intra_cell_levels},
                        {"nics_per_node", t.nics_per_node},
                        {"nic_bandwidth_bits_per_s", t.nic_bandwidth_bits_per_s},
                        {"intra_node_bandwidth_bytes_per_s", t.intra_node_bandwidth_bytes_per_s},
                        {"switch_hop_latency_s", t.switch_hop_latency_s},
                        {"nic_latency_s", t.nic_latency_s},
                        {"switch_radix", t.switch_radix}};
    root["workloads"] = json::object();
    for (const auto& [name, job] : workloads) root["workloads"][name] = workload_to_json(job);
    root["measurements"] = json::object();
    for (const auto& [name, set] : measurement_sets) {
        json arr = json::array();
        for (const calib::Measurement& m : set)
            arr.push_back({{"devices", m.devices},
                           {"time_s", m.time_s},
                           {"is_step_time", m.is_step_time}});
        root["measurements"][name] = arr;
    }
    root["output"] = {{"format", output.format}, {"quiet", output.quiet}};
    return root.dump(2) + "\n";
}

std::vector<calib::Measurement> measurements_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("measurements csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "p,time_s") throw ConfigError("measurements csv: expected header 'p,time_s'");
    std::vector<calib::Measurement> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("measurements csv:" + std::to_string(lineno) +
                              ": expected 'p,time_s'");
        calib::Measurement m;
        try {
            m.devices = std::stoull(line.substr(0, comma));
            m.time_s = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw ConfigError("measurements csv:" + std::to_string(lineno) + ": malformed row");
        }
        out.push_back(m);
    }
    if (out.empty()) throw ConfigError("measurements csv: no data rows");
    return out;
}

}  // namespace boostersim
