#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "boostersim/calibration.hpp"
#include "boostersim/collectives.hpp"
#include "boostersim/config.hpp"
#include "boostersim/hardware.hpp"
#include "boostersim/presets.hpp"
#include "boostersim/reproduce.hpp"
#include "boostersim/topology.hpp"
#include "boostersim/workload.hpp"

namespace py = pybind11;
using namespace boostersim;

namespace {

void bind_topology(py::module_& m) {
    py::class_<topo::TopologySpec>(m, "TopologySpec")
        .def(py::init<>())
        .def_readwrite("num_nodes", &topo::TopologySpec::num_nodes)
        .def_readwrite("nodes_per_cell", &topo::TopologySpec::nodes_per_cell)
        .def_readwrite("intercell_links_per_pair", &topo::TopologySpec::intercell_links_per_pair)
        .def_readwrite("link_bandwidth_bits_per_s", &topo::TopologySpec::link_bandwidth_bits_per_s)
        .def_readwrite("intra_cell_levels", &topo::TopologySpec::intra_cell_levels)
        .def_readwrite("nics_per_node", &topo::TopologySpec::nics_per_node)
        .def_readwrite("nic_bandwidth_bits_per_s", &topo::TopologySpec::nic_bandwidth_bits_per_s)
        .def_readwrite("intra_node_bandwidth_bytes_per_s",
                       &topo::TopologySpec::intra_node_bandwidth_bytes_per_s)
        .def_readwrite("switch_hop_latency_s", &topo::TopologySpec::switch_hop_latency_s)
        .def_readwrite("nic_latency_s", &topo::TopologySpec::nic_latency_s)
        .def_readwrite("switch_radix", &topo::TopologySpec::switch_radix)
        .def("cell_count", &topo::TopologySpec::cell_count)
        .def("validate", &topo::TopologySpec::validate);

    py::enum_<topo::VertexKind>(m, "VertexKind")
        .value("ComputeNode", topo::VertexKind::ComputeNode)
        .value("LeafSwitch", topo::VertexKind::LeafSwitch)
        .value("SpineSwitch", topo::VertexKind::SpineSwitch);

    py::class_<topo::Vertex>(m, "Vertex")
        .def_readonly("id", &topo::Vertex::id)
        .def_readonly("kind", &topo::Vertex::kind)
        .def_readonly("cell", &topo::Vertex::cell);

    py::class_<topo::Edge>(m, "Edge")
        .def_readonly("a", &topo::Edge::a)
        .def_readonly("b", &topo::Edge::b)
        .def_readonly("bandwidth_bits_per_s", &topo::Edge::bandwidth_bits_per_s)
        .def_readonly("latency_s", &topo::Edge::latency_s);

    py::class_<topo::NetworkGraph>(m, "NetworkGraph")
        .def_readonly("spec", &topo::NetworkGraph::spec)
        .def_readonly("vertices", &topo::NetworkGraph::vertices)
        .def_readonly("edges", &topo::NetworkGraph::edges)
        .def("num_compute_nodes", &topo::NetworkGraph::num_compute_nodes)
        .def("cell_of", &topo::NetworkGraph::cell_of)
        .def("intercell_edge_count", &topo::NetworkGraph::intercell_edge_count)
        .def("is_connected", &topo::NetworkGraph::is_connected);

    py::class_<topo::Path>(m, "Path")
        .def_readonly("edges", &topo::Path::edges)
        .def_readonly("vertices", &topo::Path::vertices)
        .def_readonly("bottleneck_bandwidth_bits_per_s",
                      &topo::Path::bottleneck_bandwidth_bits_per_s)
        .def_readonly("latency_s", &topo::Path::latency_s)
        .def("hop_count", &topo::Path::hop_count);

    m.def("build_dragonfly_plus", &topo::build_dragonfly_plus, py::arg("spec"));
    m.def("route", &topo::route, py::arg("graph"), py::arg("src"), py::arg("dst"));
    m.def("bisection_bandwidth", &topo::bisection_bandwidth, py::arg("graph"));
    m.def("path_latency", &topo::path_latency, py::arg("graph"), py::arg("path"));
    m.def("to_edge_csv", &topo::to_edge_csv, py::arg("graph"));
    m.def("to_dot", &topo::to_dot, py::arg("graph"));
}

void bind_hardware(py::module_& m) {
    py::enum_<hw::Precision>(m, "Precision")
        .value("FP64", hw::Precision::FP64)
        .value("FP64_TC", hw::Precision::FP64_TC)
        .value("FP32", hw::Precision::FP32)
        .value("TF32_TC", hw::Precision::TF32_TC)
        .value("FP16", hw::Precision::FP16)
        .value("FP16_TC", hw::Precision::FP16_TC);

    py::class_<hw::GpuSpec>(m, "GpuSpec")
        .def(py::init<>())
        .def_readwrite("name", &hw::GpuSpec::name)
        .def_readwrite("peak_flops", &hw::GpuSpec::peak_flops)
        .def_readwrite("tdp_watts", &hw::GpuSpec::tdp_watts)
        .def_readwrite("memory_bytes", &hw::GpuSpec::memory_bytes)
        .def("validate", &hw::GpuSpec::validate);

    py::class_<hw::NodeSpec>(m, "NodeSpec")
        .def(py::init<>())
        .def_readwrite("gpus_per_node", &hw::NodeSpec::gpus_per_node)
        .def_readwrite("gpu", &hw::NodeSpec::gpu)
        .def_readwrite("nics_per_node", &hw::NodeSpec::nics_per_node)
        .def_readwrite("nic_bandwidth_bits_per_s", &hw::NodeSpec::nic_bandwidth_bits_per_s)
        .def_readwrite("intra_node_bandwidth_bytes_per_s",
                       &hw::NodeSpec::intra_node_bandwidth_bytes_per_s)
        .def_readwrite("host_memory_bytes", &hw::NodeSpec::host_memory_bytes);

    py::class_<hw::SystemSpec>(m, "SystemSpec")
        .def(py::init<>())
        .def_readwrite("node", &hw::SystemSpec::node)
        .def_readwrite("num_nodes", &hw::SystemSpec::num_nodes)
        .def_readwrite("topology", &hw::SystemSpec::topology)
        .def("total_devices", &hw::SystemSpec::total_devices)
        .def("validate", &hw::SystemSpec::validate);

    m.def("bytes_per_element", &hw::bytes_per_element, py::arg("precision"));
    m.def("peak_flops", &hw::peak_flops, py::arg("gpu"), py::arg("precision"));
    m.def("system_peak", &hw::system_peak, py::arg("system"), py::arg("precision"));
    m.def("energy_efficiency", &hw::energy_efficiency, py::arg("flops"), py::arg("power_watts"));
}

void bind_collectives(py::module_& m) {
    py::enum_<coll::Algorithm>(m, "Algorithm")
        .value("Ring", coll::Algorithm::Ring)
        .value("Hierarchical", coll::Algorithm::Hierarchical);

    py::class_<coll::CollectiveParams>(m, "CollectiveParams")
        .def(py::init<>())
        .def_readwrite("algorithm", &coll::CollectiveParams::algorithm)
        .def_readwrite("participants", &coll::CollectiveParams::participants)
        .def_readwrite("message_bytes", &coll::CollectiveParams::message_bytes)
        .def_readwrite("alpha_s", &coll::CollectiveParams::alpha_s)
        .def_readwrite("beta_s_per_byte", &coll::CollectiveParams::beta_s_per_byte)
        .def_readwrite("compression_factor", &coll::CollectiveParams::compression_factor);

    py::class_<coll::Placement::Slot>(m, "PlacementSlot")
        .def_readonly("node", &coll::Placement::Slot::node)
        .def_readonly("local_device", &coll::Placement::Slot::local_device);

    py::class_<coll::Placement>(m, "Placement")
        .def(py::init<>())
        .def_readonly("slots", &coll::Placement::slots)
        .def_static("packed", &coll::Placement::packed, py::arg("ranks"),
                    py::arg("gpus_per_node"))
        .def_static("round_robin_cells", &coll::Placement::round_robin_cells, py::arg("ranks"),
                    py::arg("gpus_per_node"), py::arg("topology"))
        .def("node_count", &coll::Placement::node_count)
        .def("max_devices_per_node", &coll::Placement::max_devices_per_node);

    py::class_<coll::ContentionResult>(m, "ContentionResult")
        .def_readonly("beta_s_per_byte", &coll::ContentionResult::beta_s_per_byte)
        .def_readonly("effective_bandwidth_bytes_per_s",
                      &coll::ContentionResult::effective_bandwidth_bytes_per_s)
        .def_readonly("bottleneck_load", &coll::ContentionResult::bottleneck_load)
        .def_readonly("routed_messages", &coll::ContentionResult::routed_messages)
        .def_readonly("total_hops", &coll::ContentionResult::total_hops)
        .def_readonly("total_edge_load", &coll::ContentionResult::total_edge_load);

    m.def("compressed_bytes", &coll::compressed_bytes, py::arg("message_bytes"), py::arg("from_"),
          py::arg("to"));
    m.def("ring_allreduce_time", &coll::ring_allreduce_time, py::arg("params"));
    m.def("hierarchical_allreduce_time", &coll::hierarchical_allreduce_time, py::arg("params"),
          py::arg("node"), py::arg("placement"));
    m.def("analyze_contention", &coll::analyze_contention, py::arg("graph"), py::arg("placement"),
          py::arg("algorithm"));
    m.def("contended_beta", &coll::contended_beta, py::arg("graph"), py::arg("placement"),
          py::arg("algorithm"));
}

void bind_workload(py::module_& m) {
    py::class_<wl::ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def_readwrite("name", &wl::ModelSpec::name)
        .def_readwrite("parameter_count", &wl::ModelSpec::parameter_count)
        .def_readwrite("flops_per_sample", &wl::ModelSpec::flops_per_sample)
        .def_readwrite("gradient_precision", &wl::ModelSpec::gradient_precision)
        .def_readwrite("compute_precision", &wl::ModelSpec::compute_precision);

    py::enum_<wl::PlacementPolicy>(m, "PlacementPolicy")
        .value("Packed", wl::PlacementPolicy::Packed)
        .value("RoundRobinCells", wl::PlacementPolicy::RoundRobinCells);

    py::class_<wl::CommConfig>(m, "CommConfig")
        .def(py::init<>())
        .def_readwrite("algorithm", &wl::CommConfig::algorithm)
        .def_readwrite("alpha_s", &wl::CommConfig::alpha_s)
        .def_readwrite("compression_factor", &wl::CommConfig::compression_factor)
        .def_readwrite("beta_s_per_byte", &wl::CommConfig::beta_s_per_byte);

    py::class_<wl::JobSpec>(m, "JobSpec")
        .def(py::init<>())
        .def_readwrite("model", &wl::JobSpec::model)
        .def_readwrite("devices", &wl::JobSpec::devices)
        .def_readwrite("per_device_batch", &wl::JobSpec::per_device_batch)
        .def_readwrite("dataset_samples", &wl::JobSpec::dataset_samples)
        .def_readwrite("epochs", &wl::JobSpec::epochs)
        .def_readwrite("placement", &wl::JobSpec::placement)
        .def_readwrite("overlap_fraction", &wl::JobSpec::overlap_fraction)
        .def_readwrite("io_bandwidth_bytes_per_s", &wl::JobSpec::io_bandwidth_bytes_per_s)
        .def_readwrite("bytes_per_sample", &wl::JobSpec::bytes_per_sample)
        .def_readwrite("compute_efficiency", &wl::JobSpec::compute_efficiency)
        .def_readwrite("bn_sync_bytes", &wl::JobSpec::bn_sync_bytes)
        .def_readwrite("bn_sync_ranks", &wl::JobSpec::bn_sync_ranks)
        .def_readwrite("comm", &wl::JobSpec::comm);

    py::class_<wl::StepBreakdown>(m, "StepBreakdown")
        .def_readonly("compute_s", &wl::StepBreakdown::compute_s)
        .def_readonly("comm_s", &wl::StepBreakdown::comm_s)
        .def_readonly("bn_sync_s", &wl::StepBreakdown::bn_sync_s)
        .def_readonly("exposed_comm_s", &wl::StepBreakdown::exposed_comm_s)
        .def_readonly("io_s", &wl::StepBreakdown::io_s)
        .def_readonly("total_s", &wl::StepBreakdown::total_s)
        .def_readonly("beta_used_s_per_byte", &wl::StepBreakdown::beta_used_s_per_byte)
        .def_readonly("message_bytes", &wl::StepBreakdown::message_bytes);

    py::class_<wl::ScalingRow>(m, "ScalingRow")
        .def_readonly("devices", &wl::ScalingRow::devices)
        .def_readonly("step_time_s", &wl::ScalingRow::step_time_s)
        .def_readonly("epoch_time_s", &wl::ScalingRow::epoch_time_s)
        .def_readonly("samples_per_s", &wl::ScalingRow::samples_per_s)
        .def_readonly("efficiency", &wl::ScalingRow::efficiency)
        .def_readonly("ideal_epoch_time_s", &wl::ScalingRow::ideal_epoch_time_s)
        .def_readonly("over_unity", &wl::ScalingRow::over_unity);

    py::class_<wl::ScalingReport>(m, "ScalingReport")
        .def_readonly("rows", &wl::ScalingReport::rows);

    m.def("step_breakdown", &wl::step_breakdown, py::arg("job"), py::arg("system"),
          py::arg("graph") = nullptr);
    m.def("step_time", &wl::step_time, py::arg("job"), py::arg("system"),
          py::arg("graph") = nullptr);
    m.def("steps_per_epoch", &wl::steps_per_epoch, py::arg("job"));
    m.def("epoch_time", &wl::epoch_time, py::arg("job"), py::arg("system"),
          py::arg("graph") = nullptr);
    m.def("time_to_train", &wl::time_to_train, py::arg("job"), py::arg("system"),
          py::arg("graph") = nullptr);
    m.def("scaling_efficiency", &wl::scaling_efficiency, py::arg("t_base_s"), py::arg("p_base"),
          py::arg("t_p_s"), py::arg("p"));
    m.def("sweep", &wl::sweep, py::arg("job_template"), py::arg("device_counts"),
          py::arg("system"), py::arg("graph") = nullptr);
    m.def("report_csv", [](const wl::ScalingReport& r) { return wl::to_csv(r); });
    m.def("report_text", [](const wl::ScalingReport& r) { return wl::to_text(r); });
}

void bind_calibration(py::module_& m) {
    py::enum_<calib::FreeParam>(m, "FreeParam")
        .value("Alpha", calib::FreeParam::Alpha)
        .value("Beta", calib::FreeParam::Beta)
        .value("Eta", calib::FreeParam::Eta)
        .value("Overlap", calib::FreeParam::Overlap);

    py::class_<calib::Measurement>(m, "Measurement")
        .def(py::init<>())
        .def(py::init([](std::uint64_t devices, double time_s, bool is_step_time) {
                 return calib::Measurement{devices, time_s, is_step_time};
             }),
             py::arg("devices"), py::arg("time_s"), py::arg("is_step_time") = false)
        .def_readwrite("devices", &calib::Measurement::devices)
        .def_readwrite("time_s", &calib::Measurement::time_s)
        .def_readwrite("is_step_time", &calib::Measurement::is_step_time);

    py::class_<calib::ParamRange>(m, "ParamRange")
        .def(py::init<>())
        .def(py::init([](double lo, double hi, bool log_scale) {
                 return calib::ParamRange{lo, hi, log_scale};
             }),
             py::arg("lo"), py::arg("hi"), py::arg("log_scale") = true)
        .def_readwrite("lo", &calib::ParamRange::lo)
        .def_readwrite("hi", &calib::ParamRange::hi)
        .def_readwrite("log_scale", &calib::ParamRange::log_scale);

    py::class_<calib::FitOptions>(m, "FitOptions")
        .def(py::init<>())
        .def_readwrite("free", &calib::FitOptions::free)
        .def_readwrite("bounds", &calib::FitOptions::bounds)
        .def_readwrite("grid_points", &calib::FitOptions::grid_points)
        .def_readwrite("refinement_rounds", &calib::FitOptions::refinement_rounds);

    py::class_<calib::PointReport>(m, "PointReport")
        .def_readonly("devices", &calib::PointReport::devices)
        .def_readonly("observed_s", &calib::PointReport::observed_s)
        .def_readonly("predicted_s", &calib::PointReport::predicted_s)
        .def_readonly("relative_error", &calib::PointReport::relative_error);

    py::class_<calib::FitResult>(m, "FitResult")
        .def_readonly("alpha_s", &calib::FitResult::alpha_s)
        .def_readonly("beta_s_per_byte", &calib::FitResult::beta_s_per_byte)
        .def_readonly("eta", &calib::FitResult::eta)
        .def_readonly("overlap", &calib::FitResult::overlap)
        .def_readonly("residual", &calib::FitResult::residual)
        .def_readonly("fitted_params", &calib::FitResult::fitted_params)
        .def_readonly("points", &calib::FitResult::points);

    m.def("default_range", &calib::default_range, py::arg("param"));
    m.def("fit", &calib::fit, py::arg("measurements"), py::arg("job_template"), py::arg("system"),
          py::arg("options"), py::arg("graph") = nullptr);
    m.def("fit_json", [](const calib::FitResult& r) { return calib::to_json(r); });
}

void bind_config(py::module_& m) {
    py::class_<OutputOptions>(m, "OutputOptions")
        .def(py::init<>())
        .def_readwrite("format", &OutputOptions::format)
        .def_readwrite("quiet", &OutputOptions::quiet);

    py::class_<Config>(m, "Config")
        .def(py::init<>())
        .def_readwrite("system", &Config::system)
        .def_readwrite("workloads", &Config::workloads)
        .def_readwrite("measurement_sets", &Config::measurement_sets)
        .def_readwrite("output", &Config::output)
        .def("workload", &Config::workload, py::return_value_policy::copy)
        .def("measurement_set", &Config::measurement_set, py::return_value_policy::copy)
        .def("validate", &Config::validate)
        .def("to_json_text", &Config::to_json_text)
        .def_static("builtin_default", &Config::builtin_default)
        .def_static("load", &Config::load, py::arg("path"))
        .def_static("from_json_text", &Config::from_json_text, py::arg("text"),
                    py::arg("source_name") = "<string>");

    py::class_<repro::CaseResult>(m, "CaseResult")
        .def_readonly("name", &repro::CaseResult::name)
        .def_readonly("passed", &repro::CaseResult::passed)
        .def_readonly("lines", &repro::CaseResult::lines);

    m.def("reproduce_case_names", &repro::case_names);
    m.def("run_reproduce_case", &repro::run_case, py::arg("name"), py::arg("config"));
    m.def("run_all_reproduce_cases", &repro::run_all, py::arg("config"));
}

void bind_presets(py::module_& m) {
    m.def("a100_40gb", &presets::a100_40gb);
    m.def("juwels_booster_node", &presets::juwels_booster_node);
    m.def("juwels_booster_topology", &presets::juwels_booster_topology);
    m.def("juwels_booster", &presets::juwels_booster);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Analytical scaling and energy model for data-parallel training on a "
              "DragonFly+ GPU system";
    bind_topology(m);
    bind_hardware(m);
    bind_collectives(m);
    bind_workload(m);
    bind_calibration(m);
    bind_config(m);
    bind_presets(m);

    py::register_exception<ConfigError>(m, "ConfigError");
}
