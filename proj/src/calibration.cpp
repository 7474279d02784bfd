#include "boostersim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "boostersim/util.hpp"

namespace boostersim::calib {

const char* to_string(FreeParam p) {
    switch (p) {
        case FreeParam::Alpha: return "alpha";
        case FreeParam::Beta: return "beta";
        case FreeParam::Eta: return "eta";
        case FreeParam::Overlap: return "overlap";
    }
    return "?";
}

FreeParam free_param_from_string(std::string_view name) {
    if (name == "alpha") return FreeParam::Alpha;
    if (name == "beta") return FreeParam::Beta;
    if (name == "eta") return FreeParam::Eta;
    if (name == "overlap") return FreeParam::Overlap;
    throw std::invalid_argument("unknown fit parameter: " + std::string(name));
}

ParamRange default_range(FreeParam p) {
    switch (p) {
        case FreeParam::Alpha: return {1e-8, 1e-2, true};
        case FreeParam::Beta: return {1e-12, 1e-6, true};
        case FreeParam::Eta: return {1e-4, 1.0, true};
        case FreeParam::Overlap: return {0.0, 1.0, false};
    }
    throw std::invalid_argument("unknown fit parameter");
}

namespace {

std::vector<double> grid_values(const ParamRange& range, std::uint32_t points) {
    std::vector<double> values(points);
    for (std::uint32_t i = 0; i < points; ++i) {
        const double t = points > 1 ? static_cast<double>(i) / (points - 1) : 0.0;
        values[i] = range.log_scale ? range.lo * std::pow(range.hi / range.lo, t)
                                    : range.lo + (range.hi - range.lo) * t;
    }
    return values;
}

void apply(wl::JobSpec& job, FreeParam p, double value) {
    switch (p) {
        case FreeParam::Alpha: job.comm.alpha_s = value; break;
        case FreeParam::Beta: job.comm.beta_s_per_byte = value; break;
        case FreeParam::Eta: job.compute_efficiency = value; break;
        case FreeParam::Overlap: job.overlap_fraction = value; break;
    }
}

}  // namespace

FitResult fit(const std::vector<Measurement>& measurements, const wl::JobSpec& job_template,
              const hw::SystemSpec& sys, const FitOptions& options,
              const topo::NetworkGraph* graph) {
    if (measurements.empty()) throw std::invalid_argument("fit: no measurements");
    for (const Measurement& m : measurements) {
        if (m.devices == 0) throw std::invalid_argument("fit: measurement with zero devices");
        if (!(m.time_s > 0.0)) throw std::invalid_argument("fit: measurement time must be > 0");
    }

    // Canonical axis order keeps the lexicographic tie-break well defined.
    std::vector<FreeParam> axes = options.free;
    std::sort(axes.begin(), axes.end());
    axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
    if (axes.empty()) throw std::invalid_argument("fit: no free parameters");
    if (measurements.size() < axes.size())
        throw std::invalid_argument("fit: underdetermined (fewer measurements than parameters)");
    if (options.grid_points < 2) throw std::invalid_argument("fit: grid_points must be >= 2");

    std::vector<ParamRange> ranges;
    for (FreeParam p : axes) {
        const auto it = options.bounds.find(p);
        ParamRange r = it != options.bounds.end() ? it->second : default_range(p);
        if (!(r.lo <= r.hi)) throw std::invalid_argument("fit: bound lo > hi");
        if (r.log_scale && !(r.lo > 0.0))
            throw std::invalid_argument("fit: log-scale bound requires lo > 0");
        ranges.push_back(r);
    }

    // One job per measurement; beta is resolved from contention once up front
    // unless it is a free axis or given explicitly.
    const bool beta_free = std::find(axes.begin(), axes.end(), FreeParam::Beta) != axes.end();
    topo::NetworkGraph local_graph;
    bool built = false;
    std::vector<wl::JobSpec> jobs;
    for (const Measurement& m : measurements) {
        wl::JobSpec job = job_template;
        job.devices = m.devices;
        if (!beta_free && !job.comm.beta_s_per_byte && m.devices > 1) {
            if (graph == nullptr && !built) {
                local_graph = topo::build_dragonfly_plus(sys.topology);
                built = true;
            }
            const topo::NetworkGraph& g = graph ? *graph : local_graph;
            const wl::StepBreakdown bd = wl::step_breakdown(job, sys, &g);
            job.comm.beta_s_per_byte = bd.beta_used_s_per_byte;
        }
        jobs.push_back(std::move(job));
    }

    const auto objective = [&](const std::vector<double>& values) {
        double sum = 0.0;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            wl::JobSpec job = jobs[i];
            for (std::size_t a = 0; a < axes.size(); ++a) apply(job, axes[a], values[a]);
            const double predicted = measurements[i].is_step_time
                                         ? wl::step_time(job, sys, graph)
                                         : wl::epoch_time(job, sys, graph);
            const double rel = (predicted - measurements[i].time_s) / measurements[i].time_s;
            sum += rel * rel;
        }
        return sum;
    };

    const std::uint32_t k = options.grid_points;
    std::vector<double> best_values(axes.size());
    double best_objective = std::numeric_limits<double>::infinity();

    for (std::uint32_t round = 0; round < options.refinement_rounds; ++round) {
        std::vector<std::vector<double>> grids;
        for (const ParamRange& r : ranges) grids.push_back(grid_values(r, k));

        // Full cartesian scan in lexicographic order; strictly-less updates
        // keep the first (smallest) point of any objective tie.
        std::vector<std::uint32_t> index(axes.size(), 0);
        std::vector<std::uint32_t> round_index(axes.size(), 0);
        double round_best = std::numeric_limits<double>::infinity();
        while (true) {
            std::vector<double> values(axes.size());
            for (std::size_t a = 0; a < axes.size(); ++a) values[a] = grids[a][index[a]];
            const double obj = objective(values);
            if (obj < round_best) {
                round_best = obj;
                round_index = index;
            }
            if (obj < best_objective) {
                best_objective = obj;
                best_values = values;
            }
            std::size_t a = axes.size();
            while (a > 0 && ++index[a - 1] == k) {
                index[a - 1] = 0;
                --a;
            }
            if (a == 0) break;
        }

        // Shrink each axis around the round incumbent, keeping the best point
        // seen so far inside the window.
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const std::uint32_t i = round_index[a];
            ranges[a].lo = std::min(grids[a][i == 0 ? 0 : i - 1], best_values[a]);
            ranges[a].hi = std::max(grids[a][std::min(i + 1, k - 1)], best_values[a]);
        }
    }

    FitResult result;
    result.fitted_params = axes;
    result.alpha_s = job_template.comm.alpha_s;
    result.beta_s_per_byte = job_template.comm.beta_s_per_byte.value_or(0.0);
    result.eta = job_template.compute_efficiency;
    result.overlap = job_template.overlap_fraction;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        switch (axes[a]) {
            case FreeParam::Alpha: result.alpha_s = best_values[a]; break;
            case FreeParam::Beta: result.beta_s_per_byte = best_values[a]; break;
            case FreeParam::Eta: result.eta = best_values[a]; break;
            case FreeParam::Overlap: result.overlap = best_values[a]; break;
        }
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        wl::JobSpec job = jobs[i];
        for (std::size_t a = 0; a < axes.size(); ++a) apply(job, axes[a], best_values[a]);
        PointReport point;
        point.devices = measurements[i].devices;
        point.observed_s = measurements[i].time_s;
        point.predicted_s = measurements[i].is_step_time ? wl::step_time(job, sys, graph)
                                                         : wl::epoch_time(job, sys, graph);
        point.relative_error = (point.predicted_s - point.observed_s) / point.observed_s;
        sum += point.relative_error * point.relative_error;
        result.points.push_back(point);
    }
    result.residual = std::sqrt(sum / static_cast<double>(jobs.size()));
    return result;
}

std::string to_json(const FitResult& result) {
    const auto fitted = [&](FreeParam p) {
        return std::find(result.fitted_params.begin(), result.fitted_params.end(), p) !=
               result.fitted_params.end();
    };
    std::string out = "{\n";
    if (fitted(FreeParam::Alpha) || fitted(FreeParam::Beta)) {
        out += "  \"comm\": {";
        bool first = true;
        if (fitted(FreeParam::Alpha)) {
            out += "\"alpha_s\": " + util::fmt_g(result.alpha_s);
            first = false;
        }
        if (fitted(FreeParam::Beta)) {
            if (!first) out += ", ";
            out += "\"beta_s_per_byte\": " + util::fmt_g(result.beta_s_per_byte);
        }
        out += "},\n";
    }
    if (fitted(FreeParam::Eta))
        out += "  \"compute_efficiency\": " + util::fmt_g(result.eta) + ",\n";
    if (fitted(FreeParam::Overlap))
        out += "  \"overlap_fraction\": " + util::fmt_g(result.overlap) + ",\n";
    out += "  \"fit\": {\"residual\": " + util::fmt_g(result.residual) + ", \"points\": [";
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const PointReport& p = result.points[i];
        if (i) out += ", ";
        out += "{\"devices\": " + std::to_string(p.devices) +
               ", \"observed_s\": " + util::fmt_g(p.observed_s) +
               ", \"predicted_s\": " + util::fmt_g(p.predicted_s) +
               ", \"relative_error\": " + util::fmt_g(p.relative_error) + "}";
    }
    out += "]}\n}\n";
    return out;
}

}  // namespace boostersim::calib
