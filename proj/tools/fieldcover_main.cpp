#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "fieldcover/fieldcover.hpp"

namespace {

using namespace fieldcover;
namespace fs = std::filesystem;

struct FieldArgs {
    std::string rect;
    double sigma0 = 12.87;
    double length_scale = 8.33;
    double noise_var = 0.0361;
    double delta_frac = 0.3;
    double grid_step = 0.0;
    std::string output_dir = ".";
    std::string matching = "exact";
    bool json = false;
};

void add_field_options(CLI::App* cmd, FieldArgs& args, bool with_rect = true) {
    if (with_rect) cmd->add_option("--rect", args.rect, "rectangle environment WxH in meters, e.g. 100x100")->required();
    cmd->add_option("--sigma0", args.sigma0, "prior field standard deviation sigma0");
    cmd->add_option("--length-scale", args.length_scale, "kernel length scale L in meters");
    cmd->add_option("--noise-var", args.noise_var, "measurement noise variance sigma^2");
    cmd->add_option("--delta-frac", args.delta_frac, "error tolerance as a fraction of sigma0^2");
    cmd->add_option("--grid-step", args.grid_step, "verification grid step in meters (default r_min/20)");
    cmd->add_option("--output-dir", args.output_dir, "directory for emitted files");
    cmd->add_flag("--json", args.json, "emit a machine-readable JSON report");
}

Environment parse_rect(const std::string& spec) {
    const auto x = spec.find('x');
    if (x == std::string::npos) throw ConfigParseError("--rect must look like WxH, got '" + spec + "'");
    try {
        const double w = std::stod(spec.substr(0, x));
        const double h = std::stod(spec.substr(x + 1));
        return Environment::rectangle(w, h);
    } catch (const std::invalid_argument&) {
        throw ConfigParseError("--rect must look like WxH, got '" + spec + "'");
    }
}

PlannerOptions planner_options(const FieldArgs& args) {
    PlannerOptions opts;
    opts.grid_step = args.grid_step;
    opts.tsp.matching = (args.matching == "greedy") ? MatchingMode::kGreedy : MatchingMode::kExact;
    return opts;
}

nlohmann::json bounds_json(const BoundsReport& b) {
    return {{"sample_lower_bound", b.sample_lower_bound},
            {"sample_upper_bound", b.sample_upper_bound},
            {"tour_lower_bound", b.tour_lower_bound},
            {"tour_upper_bound", b.tour_upper_bound},
            {"realized_sample_ratio", b.realized_sample_ratio},
            {"realized_tour_ratio", b.realized_tour_ratio},
            {"alpha_samples", b.alpha_samples},
            {"alpha_tour", b.alpha_tour}};
}

void print_report_summary(const PlanReport& report, const std::string& plan_path) {
    std::printf("samples:        %zu (tiling %zu, projected %zu, repair %zu)\n", report.samples.points.size(),
                std::count(report.samples.origin_tags.begin(), report.samples.origin_tags.end(), SampleOrigin::kTiling),
                std::count(report.samples.origin_tags.begin(), report.samples.origin_tags.end(), SampleOrigin::kProjected),
                std::count(report.samples.origin_tags.begin(), report.samples.origin_tags.end(), SampleOrigin::kRepair));
    std::printf("r_min:          %.6f m%s\n", report.query.r_min,
                report.samples.spacing_capped ? "  (capped at r_max for spacing)" : "");
    std::printf("r_max:          %.6f m\n", report.query.r_max);
    std::printf("sample bounds:  lower %lld, upper %lld (realized ratio %.3f, alpha %.3f)\n",
                report.diagnostics.sample_lower_bound, report.diagnostics.sample_upper_bound,
                report.diagnostics.realized_sample_ratio, report.diagnostics.alpha_samples);
    if (report.tour) {
        std::printf("tour length:    %.3f m (raw christofides %.3f m, matching %s)\n", report.tour->length,
                    report.raw_tour_length, report.matching_used == MatchingMode::kExact ? "exact" : "greedy");
        std::printf("tour bounds:    lower %.3f m, upper %.3f m (realized ratio %.3f, alpha %.3f)\n",
                    report.diagnostics.tour_lower_bound, report.diagnostics.tour_upper_bound,
                    report.diagnostics.realized_tour_ratio, report.diagnostics.alpha_tour);
    }
    std::printf("feasibility:    %s (worst error %.9g at (%.3f, %.3f), grid step %.4f, %zu points, %s mode)\n",
                report.feasibility.feasible ? "PASS" : "FAIL", report.feasibility.worst_error,
                report.feasibility.worst_point.x, report.feasibility.worst_point.y, report.feasibility.grid_step,
                report.feasibility.points_checked, report.feasibility.exact_mode ? "exact" : "certified");
    if (!plan_path.empty()) std::printf("wrote:          %s\n", plan_path.c_str());
}

nlohmann::json report_json(const PlanReport& report) {
    nlohmann::json j{{"n_samples", report.samples.points.size()},
                     {"r_min", report.query.r_min},
                     {"r_max", report.query.r_max},
                     {"delta", report.query.delta},
                     {"spacing_capped", report.samples.spacing_capped},
                     {"bounds", bounds_json(report.diagnostics)},
                     {"feasible", report.feasibility.feasible},
                     {"worst_error", report.feasibility.worst_error},
                     {"worst_point", {report.feasibility.worst_point.x, report.feasibility.worst_point.y}},
                     {"grid_step", report.feasibility.grid_step},
                     {"points_checked", report.feasibility.points_checked}};
    if (report.tour) {
        j["tour_length"] = report.tour->length;
        j["raw_christofides_length"] = report.raw_tour_length;
        j["matching"] = report.matching_used == MatchingMode::kExact ? "exact" : "greedy";
    }
    return j;
}

int run_plan(const FieldArgs& args) {
    const Environment env = parse_rect(args.rect);
    const FieldParams params(args.sigma0 * args.sigma0, args.length_scale, args.noise_var);
    const double delta = args.delta_frac * params.sigma0_sq;
    const PlanReport report = hex_cover_plan(env, params, delta, planner_options(args));
    fs::create_directories(args.output_dir);
    const std::string plan_path = (fs::path(args.output_dir) / "plan.csv").string();
    write_plan_csv(plan_path, report.samples);
    if (args.json) {
        nlohmann::json j = report_json(report);
        j["plan_csv"] = plan_path;
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        print_report_summary(report, plan_path);
    }
    return report.feasibility.feasible ? 0 : 1;
}

int run_tour(const FieldArgs& args) {
    const Environment env = parse_rect(args.rect);
    const FieldParams params(args.sigma0 * args.sigma0, args.length_scale, args.noise_var);
    const double delta = args.delta_frac * params.sigma0_sq;
    const PlanReport report = hex_cover_tour(env, params, delta, planner_options(args));
    fs::create_directories(args.output_dir);
    const std::string tour_path = (fs::path(args.output_dir) / "tour.csv").string();
    const std::string svg_path = (fs::path(args.output_dir) / "tour.svg").string();
    write_tour_csv(tour_path, report.tour->order, report.samples.points);
    std::vector<Point2> ordered;
    ordered.reserve(report.tour->order.size());
    for (int idx : report.tour->order) ordered.push_back(report.samples.points[static_cast<std::size_t>(idx)]);
    {
        std::ofstream svg(svg_path);
        svg << render_plan_svg(env, report.samples, &ordered, true);
    }
    if (args.json) {
        nlohmann::json j = report_json(report);
        j["tour_csv"] = tour_path;
        j["svg"] = svg_path;
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        print_report_summary(report, tour_path);
        std::printf("wrote:          %s\n", svg_path.c_str());
    }
    return report.feasibility.feasible ? 0 : 1;
}

int run_verify(const FieldArgs& args, const std::string& plan_path) {
    const Environment env = parse_rect(args.rect);
    const FieldParams params(args.sigma0 * args.sigma0, args.length_scale, args.noise_var);
    const double delta = args.delta_frac * params.sigma0_sq;
    const MeasurementSet samples = read_plan_csv(plan_path);
    const double step = args.grid_step > 0.0 ? args.grid_step : compute_r_min(params, delta) / 20.0;
    const FeasibilityResult result = check_feasibility(env, samples.points, params, delta, step);
    if (args.json) {
        const nlohmann::json j{{"feasible", result.feasible},
                               {"worst_error", result.worst_error},
                               {"worst_point", {result.worst_point.x, result.worst_point.y}},
                               {"delta", delta},
                               {"grid_step", result.grid_step},
                               {"points_checked", result.points_checked}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("feasibility:    %s (worst error %.9g vs delta %.9g at (%.3f, %.3f), %zu grid points)\n",
                    result.feasible ? "PASS" : "FAIL", result.worst_error, delta, result.worst_point.x,
                    result.worst_point.y, result.points_checked);
    }
    return result.feasible ? 0 : 1;
}

int run_counterexample(bool json) {
    const CounterexampleReport report = counterexample_check();
    if (json) {
        const nlohmann::json j{{"rhs_bound", report.rhs_bound},
                               {"r_used", report.r_used},
                               {"error_value", report.error_value},
                               {"delta", report.delta},
                               {"contradiction", report.contradiction}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("prior-bound RHS:   %.8f\n", report.rhs_bound);
        std::printf("placement radius:  %.8f (beyond the claimed bound)\n", report.r_used);
        std::printf("estimation error:  %.6f with four samples on the axes\n", report.error_value);
        std::printf("delta:             %.6f\n", report.delta);
        std::printf("contradiction:     %s\n", report.contradiction ? "yes" : "no");
    }
    return report.contradiction ? 0 : 1;
}

int run_bench_cmd(const std::string& config_path, const std::string& output_dir, const std::string& matching,
                  std::uint64_t seed, bool have_seed) {
    ExperimentConfig config = config_path.empty() ? default_config() : parse_config(config_path);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (!matching.empty()) config.matching = matching;
    if (have_seed) config.seed = seed;
    const auto rows = run_bench(config, &std::cerr);
    std::printf("bench: %zu rows written to %s/results.csv (+2 SVG figures)\n", rows.size(),
                config.output_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage planning and measurement tours over stationary Gaussian random fields"};
    app.require_subcommand(1);

    FieldArgs plan_args;
    auto* plan_cmd = app.add_subcommand("plan", "compute a HexCover sample placement and write plan.csv");
    add_field_options(plan_cmd, plan_args);

    FieldArgs tour_args;
    auto* tour_cmd = app.add_subcommand("tour", "compute a HexCover measurement tour; writes tour.csv and tour.svg");
    add_field_options(tour_cmd, tour_args);
    tour_cmd->add_option("--matching", tour_args.matching, "exact|greedy minimum-weight matching")
        ->check(CLI::IsMember({"exact", "greedy"}));

    FieldArgs verify_args;
    std::string verify_plan_path;
    auto* verify_cmd = app.add_subcommand("verify", "re-check an existing plan.csv against the error tolerance");
    add_field_options(verify_cmd, verify_args);
    verify_cmd->add_option("--plan", verify_plan_path, "plan CSV to verify")->required();

    bool ce_json = false;
    auto* ce_cmd = app.add_subcommand("counterexample", "reproduce the counterexample to the prior lower-bound claim");
    ce_cmd->add_flag("--json", ce_json, "emit a machine-readable JSON report");

    std::string bench_config, bench_output, bench_matching;
    std::uint64_t bench_seed = 0;
    bool bench_have_seed = false;
    auto* bench_cmd = app.add_subcommand("bench", "run the experiment sweep; writes results.csv and figures");
    bench_cmd->add_option("--config", bench_config, "JSON experiment config (defaults to the built-in sweep)");
    bench_cmd->add_option("--output-dir", bench_output, "directory for results and figures");
    bench_cmd->add_option("--matching", bench_matching, "exact|greedy minimum-weight matching")
        ->check(CLI::IsMember({"exact", "greedy"}));
    bench_cmd->add_option("--seed", bench_seed, "sweep seed recorded in the results")
        ->each([&](const std::string&) { bench_have_seed = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (plan_cmd->parsed()) return run_plan(plan_args);
        if (tour_cmd->parsed()) return run_tour(tour_args);
        if (verify_cmd->parsed()) return run_verify(verify_args, verify_plan_path);
        if (ce_cmd->parsed()) return run_counterexample(ce_json);
        if (bench_cmd->parsed()) return run_bench_cmd(bench_config, bench_output, bench_matching, bench_seed, bench_have_seed);
    } catch (const fieldcover::InfeasibleToleranceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const fieldcover::ConfigParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
