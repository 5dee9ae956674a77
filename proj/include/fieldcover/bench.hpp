#pragma once

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "fieldcover/csv.hpp"
#include "fieldcover/errors.hpp"
#include "fieldcover/planners.hpp"
#include "fieldcover/svg.hpp"

namespace fieldcover {

inline const std::vector<std::string>& known_algorithms() {
    static const std::vector<std::string> kAlgorithms{"hexcover", "diskcover", "hexcovertour", "diskcovertour"};
    return kAlgorithms;
}

// Experiment sweep description. Defaults mirror the agricultural-field
// hyperparameters (L = 8.33 m, sigma0 = 12.87, sigma^2 = 0.0361) and the
// three accuracy regimes Delta/sigma0^2 in {0.3, 0.2, 0.1}.
struct ExperimentConfig {
    std::vector<std::pair<double, double>> environments;  // rectangle width x height, meters
    double sigma0 = 12.87;
    double length_scale = 8.33;
    double noise_var = 0.0361;
    std::vector<double> delta_fractions{0.3, 0.2, 0.1};
    std::vector<std::string> algorithms = known_algorithms();
    double grid_step = 0.0;  // 0: r_min/10 per combination
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    std::string matching = "exact";
    std::size_t matching_threshold = 1000;  // odd-vertex count before greedy fallback

    FieldParams params() const { return FieldParams(sigma0 * sigma0, length_scale, noise_var); }
};

/// Square environments over 8 log-spaced areas in [400, 40000] m^2.
inline ExperimentConfig default_config() {
    ExperimentConfig config;
    const int n_areas = 8;
    for (int i = 0; i < n_areas; ++i) {
        const double area = 400.0 * std::pow(100.0, static_cast<double>(i) / (n_areas - 1));
        const double side = std::sqrt(area);
        config.environments.emplace_back(side, side);
    }
    return config;
}

namespace detail {

inline nlohmann::json parse_strict_json(const std::string& text) {
    std::vector<std::set<std::string>> key_stack;
    const auto cb = [&key_stack](int /*depth*/, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
        if (event == nlohmann::json::parse_event_t::object_start) {
            key_stack.emplace_back();
        } else if (event == nlohmann::json::parse_event_t::object_end) {
            key_stack.pop_back();
        } else if (event == nlohmann::json::parse_event_t::key) {
            const auto key = parsed.get<std::string>();
            if (!key_stack.back().insert(key).second) {
                throw ConfigParseError("config: duplicate key '" + key + "'");
            }
        }
        return true;
    };
    try {
        return nlohmann::json::parse(text, cb);
    } catch (const ConfigParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigParseError(std::string("config: malformed JSON: ") + e.what());
    }
}

inline double require_positive(const nlohmann::json& j, const char* field) {
    if (!j.is_number()) throw ConfigParseError(std::string("config: field '") + field + "' must be a number");
    const double v = j.get<double>();
    if (!(v > 0.0)) throw ConfigParseError(std::string("config: field '") + field + "' must be positive");
    return v;
}

}  // namespace detail

// Strict flat JSON: unknown keys and duplicate keys are rejected; every
// invariant violation names its field.
inline ExperimentConfig parse_config_text(const std::string& text) {
    const nlohmann::json j = detail::parse_strict_json(text);
    if (!j.is_object()) throw ConfigParseError("config: top level must be a JSON object");
    static const std::set<std::string> kKnown{"environments", "sigma0",     "length_scale",      "noise_var",
                                             "delta_fractions", "algorithms", "grid_step",         "seed",
                                             "output_dir",      "matching",   "matching_threshold"};
    for (const auto& [key, value] : j.items()) {
        if (!kKnown.count(key)) throw ConfigParseError("config: unknown key '" + key + "'");
    }
    ExperimentConfig config = default_config();
    if (!j.contains("environments")) throw ConfigParseError("config: field 'environments' is required");
    config.environments.clear();
    if (!j["environments"].is_array() || j["environments"].empty()) {
        throw ConfigParseError("config: field 'environments' must be a non-empty array of [width, height]");
    }
    for (const auto& e : j["environments"]) {
        if (!e.is_array() || e.size() != 2) {
            throw ConfigParseError("config: field 'environments' entries must be [width, height]");
        }
        const double w = detail::require_positive(e[0], "environments[].width");
        const double h = detail::require_positive(e[1], "environments[].height");
        config.environments.emplace_back(w, h);
    }
    if (j.contains("sigma0")) config.sigma0 = detail::require_positive(j["sigma0"], "sigma0");
    if (j.contains("length_scale")) config.length_scale = detail::require_positive(j["length_scale"], "length_scale");
    if (j.contains("noise_var")) {
        if (!j["noise_var"].is_number() || j["noise_var"].get<double>() < 0.0) {
            throw ConfigParseError("config: field 'noise_var' must be a nonnegative number");
        }
        config.noise_var = j["noise_var"].get<double>();
    }
    if (j.contains("delta_fractions")) {
        if (!j["delta_fractions"].is_array() || j["delta_fractions"].empty()) {
            throw ConfigParseError("config: field 'delta_fractions' must be a non-empty array");
        }
        config.delta_fractions.clear();
        for (const auto& f : j["delta_fractions"]) config.delta_fractions.push_back(detail::require_positive(f, "delta_fractions[]"));
    }
    if (j.contains("algorithms")) {
        if (!j["algorithms"].is_array() || j["algorithms"].empty()) {
            throw ConfigParseError("config: field 'algorithms' must be a non-empty array");
        }
        config.algorithms.clear();
        for (const auto& a : j["algorithms"]) {
            const auto name = a.get<std::string>();
            if (std::find(known_algorithms().begin(), known_algorithms().end(), name) == known_algorithms().end()) {
                throw ConfigParseError("config: unknown algorithm '" + name + "'");
            }
            config.algorithms.push_back(name);
        }
    }
    if (j.contains("grid_step")) {
        if (!j["grid_step"].is_number() || j["grid_step"].get<double>() < 0.0) {
            throw ConfigParseError("config: field 'grid_step' must be a nonnegative number");
        }
        config.grid_step = j["grid_step"].get<double>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
            throw ConfigParseError("config: field 'seed' must be an integer");
        }
        config.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw ConfigParseError("config: field 'output_dir' must be a string");
        config.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("matching")) {
        const auto m = j["matching"].get<std::string>();
        if (m != "exact" && m != "greedy") throw ConfigParseError("config: field 'matching' must be exact or greedy");
        config.matching = m;
    }
    if (j.contains("matching_threshold")) {
        if (!j["matching_threshold"].is_number_unsigned() && !j["matching_threshold"].is_number_integer()) {
            throw ConfigParseError("config: field 'matching_threshold' must be an integer");
        }
        config.matching_threshold = j["matching_threshold"].get<std::size_t>();
    }
    // delta fractions must stay above the noise-floor fraction and below 1
    const FieldParams params = config.params();
    const double floor_fraction = noise_floor(params) / params.sigma0_sq;
    for (double f : config.delta_fractions) {
        if (!(f > floor_fraction) || !(f < 1.0)) {
            throw ConfigParseError("config: delta_fractions entries must lie in (noise_floor/sigma0^2, 1) = (" +
                                   std::to_string(floor_fraction) + ", 1)");
        }
    }
    return config;
}

inline ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError("config: cannot open file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

// One sweep combination. Tour columns are NaN for cover-only algorithms.
struct ResultRow {
    std::string algorithm;
    double area_m2 = 0.0;
    double delta_fraction = 0.0;
    std::size_t n_samples = 0;
    double tour_length_m = std::numeric_limits<double>::quiet_NaN();
    double raw_christofides_length_m = std::numeric_limits<double>::quiet_NaN();
    double runtime_ms = 0.0;
    bool feasible = false;
    double worst_error = 0.0;
    BoundsReport bounds;
    std::string matching = "none";
};

inline void write_results_csv(const std::string& path, std::span<const ResultRow> rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "algorithm,area_m2,delta_fraction,n_samples,tour_length_m,raw_christofides_length_m,runtime_ms,"
           "feasible,worst_error,sample_lower_bound,sample_upper_bound,tour_lower_bound,tour_upper_bound,"
           "realized_sample_ratio,realized_tour_ratio,alpha_samples,alpha_tour,matching\n";
    const auto opt = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
    for (const ResultRow& r : rows) {
        out << r.algorithm << ',' << format_double(r.area_m2) << ',' << format_double(r.delta_fraction) << ','
            << r.n_samples << ',' << opt(r.tour_length_m) << ',' << opt(r.raw_christofides_length_m) << ','
            << format_double(r.runtime_ms) << ',' << (r.feasible ? "true" : "false") << ','
            << format_double(r.worst_error) << ',' << r.bounds.sample_lower_bound << ','
            << r.bounds.sample_upper_bound << ',' << format_double(r.bounds.tour_lower_bound) << ','
            << format_double(r.bounds.tour_upper_bound) << ',' << format_double(r.bounds.realized_sample_ratio)
            << ',' << format_double(r.bounds.realized_tour_ratio) << ',' << format_double(r.bounds.alpha_samples)
            << ',' << format_double(r.bounds.alpha_tour) << ',' << r.matching << '\n';
    }
}

namespace detail {

inline bool wants(const ExperimentConfig& config, const std::string& name) {
    return std::find(config.algorithms.begin(), config.algorithms.end(), name) != config.algorithms.end();
}

}  // namespace detail

// Runs the algorithm x environment x Delta sweep, verifies every plan, and
// emits results.csv plus the two comparison figures into output_dir. Any
// infeasible plan aborts the sweep.
inline std::vector<ResultRow> run_bench(const ExperimentConfig& config, std::ostream* log = nullptr) {
    namespace fs = std::filesystem;
    const FieldParams params = config.params();
    fs::create_directories(config.output_dir);
    std::vector<ResultRow> rows;
    using Clock = std::chrono::steady_clock;

    PlannerOptions planner_opts;
    planner_opts.feasibility = FeasibilityMode::kCertified;
    planner_opts.tsp.matching = (config.matching == "greedy") ? MatchingMode::kGreedy : MatchingMode::kExact;
    planner_opts.tsp.greedy_fallback_threshold = config.matching_threshold;

    for (double frac : config.delta_fractions) {
        const double delta = frac * params.sigma0_sq;
        const PlanningQuery query = make_planning_query(params, delta);
        for (const auto& [w, h] : config.environments) {
            const Environment env = Environment::rectangle(w, h);
            const double step = config.grid_step > 0.0 ? config.grid_step : query.r_min / 10.0;
            PlannerOptions opts = planner_opts;
            opts.grid_step = step;
            for (const bool disk : {false, true}) {
                const std::string cover_name = disk ? "diskcover" : "hexcover";
                const std::string tour_name = disk ? "diskcovertour" : "hexcovertour";
                const bool want_cover = detail::wants(config, cover_name);
                const bool want_tour = detail::wants(config, tour_name);
                if (!want_cover && !want_tour) continue;
                const auto t0 = Clock::now();
                const MeasurementSet samples =
                    plan_samples(disk ? PlannerAlgorithm::kDiskCover : PlannerAlgorithm::kHexCover, env, params,
                                 delta, opts);
                const auto t1 = Clock::now();
                const FeasibilityResult feasibility =
                    check_feasibility(env, samples.points, params, delta, step, opts.feasibility);
                if (!feasibility.feasible) {
                    throw std::runtime_error("bench: " + cover_name + " plan is infeasible on " +
                                             std::to_string(w) + "x" + std::to_string(h) +
                                             " at delta fraction " + std::to_string(frac) + " (worst error " +
                                             std::to_string(feasibility.worst_error) + ")");
                }
                const double plan_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                const double env_area = area(env);
                if (want_cover) {
                    ResultRow row;
                    row.algorithm = cover_name;
                    row.area_m2 = env_area;
                    row.delta_fraction = frac;
                    row.n_samples = samples.points.size();
                    row.runtime_ms = plan_ms;
                    row.feasible = feasibility.feasible;
                    row.worst_error = feasibility.worst_error;
                    row.bounds = compute_bounds(env, query, samples.points.size());
                    rows.push_back(std::move(row));
                }
                if (want_tour) {
                    const auto t2 = Clock::now();
                    const ChristofidesResult cr = christofides(samples.points, opts.tsp);
                    const Tour improved = two_opt(cr.tour, samples.points);
                    const auto t3 = Clock::now();
                    ResultRow row;
                    row.algorithm = tour_name;
                    row.area_m2 = env_area;
                    row.delta_fraction = frac;
                    row.n_samples = samples.points.size();
                    row.tour_length_m = improved.length;
                    row.raw_christofides_length_m = cr.tour.length;
                    row.runtime_ms = plan_ms + std::chrono::duration<double, std::milli>(t3 - t2).count();
                    row.feasible = feasibility.feasible;
                    row.worst_error = feasibility.worst_error;
                    row.bounds = compute_bounds(env, query, samples.points.size(), cr.tour.length);
                    row.matching = (cr.matching_used == MatchingMode::kExact) ? "exact" : "greedy";
                    rows.push_back(std::move(row));
                }
                if (log != nullptr) {
                    *log << cover_name << "/" << tour_name << " area=" << env_area << " frac=" << frac
                         << " n=" << samples.points.size() << " worst=" << feasibility.worst_error << "\n";
                }
            }
        }
    }

    write_results_csv((fs::path(config.output_dir) / "results.csv").string(), rows);

    const auto panel_chart = [&](const std::string& title, const std::string& y_label,
                                 const std::vector<std::string>& algo_names, bool use_tour_length) {
        std::vector<ChartPanel> panels;
        for (double frac : config.delta_fractions) {
            ChartPanel panel;
            char sub[64];
            std::snprintf(sub, sizeof(sub), "Delta/sigma0^2 = %g", frac);
            panel.subtitle = sub;
            for (const std::string& name : algo_names) {
                if (!detail::wants(config, name)) continue;
                ChartSeries series;
                series.name = name;
                for (const ResultRow& r : rows) {
                    if (r.algorithm != name || r.delta_fraction != frac) continue;
                    series.values.push_back({r.area_m2, use_tour_length ? r.tour_length_m : static_cast<double>(r.n_samples)});
                }
                std::sort(series.values.begin(), series.values.end(), [](Point2 a, Point2 b) { return a.x < b.x; });
                if (!series.values.empty()) panel.series.push_back(std::move(series));
            }
            panels.push_back(std::move(panel));
        }
        return render_chart_svg(title, "environment area (m^2)", y_label, panels);
    };

    {
        std::ofstream fig((fs::path(config.output_dir) / "samples_vs_area.svg").string());
        fig << panel_chart("Sample placement: measurements vs environment size", "number of measurements",
                           {"hexcover", "diskcover"}, false);
    }
    {
        std::ofstream fig((fs::path(config.output_dir) / "tour_length_vs_area.svg").string());
        fig << panel_chart("Measurement tours: length vs environment size", "tour length (m)",
                           {"hexcovertour", "diskcovertour"}, true);
    }
    return rows;
}

}  // namespace fieldcover
