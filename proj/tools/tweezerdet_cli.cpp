#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <tweezerdet/config_io.hpp>
#include <tweezerdet/count_model.hpp>
#include <tweezerdet/depump.hpp>
#include <tweezerdet/errors.hpp>
#include <tweezerdet/inference.hpp>
#include <tweezerdet/presets.hpp>
#include <tweezerdet/simulate.hpp>

namespace {

using nlohmann::json;
using namespace tweezerdet;

struct CommonArgs {
    std::string preset;
    std::string config_path;
    std::string out_path;
    std::string format = "json";
};

void add_scenario_options(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--preset", args.preset,
                    "built-in scenario: paper-sigma, paper-pi, paper-final, paper-lowdepth");
    sub->add_option("--config", args.config_path, "scenario JSON file");
    sub->add_option("--out", args.out_path, "output file (default stdout)");
    sub->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
}

ScenarioConfig resolve_scenario(const CommonArgs& args) {
    if (!args.preset.empty() && !args.config_path.empty()) {
        throw std::invalid_argument("--preset and --config are mutually exclusive");
    }
    if (!args.preset.empty()) {
        return make_preset(args.preset);
    }
    if (!args.config_path.empty()) {
        return load_scenario_file(args.config_path);
    }
    throw std::invalid_argument("one of --preset or --config is required");
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw std::invalid_argument("cannot open for writing: " + out_path);
    }
    out << text << '\n';
    if (!out) {
        throw std::invalid_argument("write failed: " + out_path);
    }
}

void emit_json(const json& value, const std::string& out_path) {
    emit(canonical_json_from_text(value.dump()), out_path);
}

void require_format(const CommonArgs& args, const char* needed) {
    if (args.format != needed) {
        throw std::invalid_argument(std::string("--format ") + args.format +
                                    " is not supported by this subcommand");
    }
}

// insert ".bright"/".dark" before the extension: out.csv -> out.bright.csv
std::string with_state_suffix(const std::string& path, const char* state) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + "." + state;
    }
    return path.substr(0, dot) + "." + state + path.substr(dot);
}

json budget_json(const DepumpBudget& b) {
    return {
        {"trap_rate", b.trap_rate},
        {"probe_rate", b.probe_rate},
        {"raman_prob_per_scatter", b.raman_prob_per_scatter},
        {"r_trap", b.r_trap},
        {"r_probe", b.r_probe},
        {"r_raman", b.r_raman},
        {"total_r", b.total_r},
    };
}

json report_json(const ErrorReport& r) {
    return {
        {"eps_bright", r.eps_bright},
        {"eps_dark", r.eps_dark},
        {"infidelity", r.infidelity},
        {"fidelity", r.fidelity},
    };
}

json summary_json(const BatchSummary& s) {
    return {
        {"n_shots", s.n_shots},
        {"mean_counts", s.mean_counts},
        {"mean_pulses", s.mean_pulses},
        {"mean_wait_time", s.mean_wait_time},
        {"mean_scattered", s.mean_scattered},
        {"mean_energy_temp", s.mean_energy_temp},
        {"bright_label_fraction", s.bright_label_fraction},
        {"bright_label_low", s.bright_label_low},
        {"bright_label_high", s.bright_label_high},
        {"loss_fraction", s.loss_fraction},
        {"loss_low", s.loss_low},
        {"loss_high", s.loss_high},
        {"depump_fraction", s.depump_fraction},
    };
}

DepumpBudget scenario_budget(const ScenarioConfig& c) {
    const DLineConstants lines = cesium_d_lines(c.trap.wavelength);
    return depump_budget(c.trap, c.probe, lines, c.detection.r_bright,
                         c.detection.collection_efficiency);
}

// --- rates ---

void run_rates(const CommonArgs& args) {
    const ScenarioConfig scenario = resolve_scenario(args);
    validate_scenario(scenario);
    const DepumpBudget budget = scenario_budget(scenario);
    if (args.format == "csv") {
        std::string csv = "quantity,value\n";
        const json b = budget_json(budget);
        for (const auto& item : b.items()) {
            csv += item.key() + "," + canonical_double(item.value().get<double>()) + "\n";
        }
        csv.pop_back();
        emit(csv, args.out_path);
        return;
    }
    emit_json(budget_json(budget), args.out_path);
}

// --- distribution ---

struct DistributionArgs {
    CommonArgs common;
    std::string prepared = "bright";
    int n_max = -1;
};

int auto_n_max(const DetectionParams& params) {
    const double mean = (params.r_bright + params.r_background) * params.t_d;
    return static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(std::max(mean, 1.0)) + 20.0));
}

void run_distribution(const DistributionArgs& args) {
    const ScenarioConfig scenario = resolve_scenario(args.common);
    validate_scenario(scenario);
    const DetectionParams& params = scenario.detection;
    const int n_max = args.n_max >= 0 ? args.n_max : auto_n_max(params);

    const bool want_bright = args.prepared != "dark";
    const bool want_dark = args.prepared != "bright";
    std::vector<double> p_bright, p_dark;
    for (int n = 0; n <= n_max; ++n) {
        if (want_bright) p_bright.push_back(count_distribution(n, params, PreparedState::bright));
        if (want_dark) p_dark.push_back(count_distribution(n, params, PreparedState::dark));
    }

    if (args.common.format == "csv") {
        std::string csv = "n";
        if (want_bright) csv += ",p_bright";
        if (want_dark) csv += ",p_dark";
        csv += "\n";
        for (int n = 0; n <= n_max; ++n) {
            csv += std::to_string(n);
            if (want_bright) csv += "," + canonical_double(p_bright[static_cast<std::size_t>(n)]);
            if (want_dark) csv += "," + canonical_double(p_dark[static_cast<std::size_t>(n)]);
            csv += "\n";
        }
        csv.pop_back();
        emit(csv, args.common.out_path);
        return;
    }
    json out{{"n_max", n_max}};
    if (want_bright) out["bright"] = p_bright;
    if (want_dark) out["dark"] = p_dark;
    emit_json(out, args.common.out_path);
}

// --- sweep ---

struct SweepAxis {
    std::string param;
    double from = 0.0;
    double to = 0.0;
    int points = 0;
};

struct SweepArgs {
    CommonArgs common;
    SweepAxis primary;
    SweepAxis secondary;
    long mc_shots = 0;
    std::uint64_t seed = 1234567;
};

std::vector<double> axis_values(const SweepAxis& axis) {
    static const char* known[] = {"t_d", "threshold", "depth", "background"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
            return axis.param == k;
        }) == std::end(known)) {
        throw std::invalid_argument("sweep parameter must be one of t_d, threshold, depth, "
                                    "background; got '" + axis.param + "'");
    }
    if (axis.param == "threshold") {
        const int lo = static_cast<int>(axis.from);
        const int hi = static_cast<int>(axis.to);
        if (static_cast<double>(lo) != axis.from || static_cast<double>(hi) != axis.to ||
            lo < 1 || hi < lo) {
            throw std::invalid_argument("threshold sweep needs integer bounds with from <= to");
        }
        std::vector<double> values;
        for (int m = lo; m <= hi; ++m) values.push_back(m);
        return values;
    }
    if (axis.points < 1) {
        throw std::invalid_argument("sweep needs --points >= 1");
    }
    if (axis.points == 1) {
        return {axis.from};
    }
    std::vector<double> values;
    const double step = (axis.to - axis.from) / (axis.points - 1);
    for (int i = 0; i < axis.points; ++i) {
        values.push_back(axis.from + step * i);
    }
    return values;
}

// One grid point: overrides applied to a copy of the scenario. Depth
// changes re-derive the transfer rates from the physics budget, since
// both the trap and Raman channels scale with depth.
ScenarioConfig apply_axis(ScenarioConfig scenario, const std::string& param, double value) {
    if (param == "t_d") {
        scenario.detection.t_d = value;
        scenario.protocol.max_total_time = value;
    } else if (param == "threshold") {
        scenario.detection.threshold = static_cast<int>(value);
        scenario.protocol.threshold = static_cast<int>(value);
    } else if (param == "background") {
        scenario.detection.r_background = value;
    } else if (param == "depth") {
        scenario.trap = make_trap(value, scenario.trap.polarization_mode,
                                  scenario.trap.wavelength);
        const DLineConstants lines = cesium_d_lines(scenario.trap.wavelength);
        const DepumpBudget budget =
            depump_budget(scenario.trap, scenario.probe, lines, scenario.detection.r_bright,
                          scenario.detection.collection_efficiency);
        scenario.detection.r_dep_bright = budget.total_r * scenario.detection.r_bright;
        scenario.detection.r_dep_dark = budget.trap_rate;
        scenario.heating = make_heating(scenario.trap, scenario.heating.loss_enabled);
    }
    return scenario;
}

void run_sweep(const SweepArgs& args) {
    const ScenarioConfig base = resolve_scenario(args.common);
    validate_scenario(base);
    if (args.primary.param.empty()) {
        throw std::invalid_argument("sweep needs --param");
    }
    const std::vector<double> primary = axis_values(args.primary);
    std::vector<double> secondary{0.0};
    const bool two_d = !args.secondary.param.empty();
    if (two_d) {
        if (args.secondary.param == args.primary.param) {
            throw std::invalid_argument("--param2 must differ from --param");
        }
        secondary = axis_values(args.secondary);
    }
    const std::size_t grid = primary.size() * secondary.size();
    if (grid > 1'000'000) {
        throw std::invalid_argument("sweep grid exceeds 1e6 points");
    }

    const bool with_mc = args.mc_shots > 0;
    json rows = json::array();
    std::string csv =
        "t_d,threshold,depth_freq,r_background,eps_bright,eps_dark,infidelity";
    if (with_mc) csv += ",mc_loss_fraction,mc_mean_energy_temp";
    csv += "\n";

    std::size_t index = 0;
    for (const double outer : primary) {
        for (const double inner : secondary) {
            ScenarioConfig point = apply_axis(base, args.primary.param, outer);
            if (two_d) point = apply_axis(point, args.secondary.param, inner);
            validate_scenario(point);
            const ErrorReport report = error_report(point.detection);
            json row{
                {"t_d", point.detection.t_d},
                {"threshold", point.detection.threshold},
                {"depth_freq", point.trap.depth_freq},
                {"r_background", point.detection.r_background},
                {"eps_bright", report.eps_bright},
                {"eps_dark", report.eps_dark},
                {"infidelity", report.infidelity},
            };
            csv += canonical_double(point.detection.t_d) + "," +
                   std::to_string(point.detection.threshold) + "," +
                   canonical_double(point.trap.depth_freq) + "," +
                   canonical_double(point.detection.r_background) + "," +
                   canonical_double(report.eps_bright) + "," +
                   canonical_double(report.eps_dark) + "," +
                   canonical_double(report.infidelity);
            if (with_mc) {
                const BatchResult batch =
                    run_batch(point.detection, point.protocol, point.heating,
                              PreparedState::bright, args.mc_shots,
                              args.seed + static_cast<std::uint64_t>(index));
                row["mc_loss_fraction"] = batch.summary.loss_fraction;
                row["mc_mean_energy_temp"] = batch.summary.mean_energy_temp;
                csv += "," + canonical_double(batch.summary.loss_fraction) + "," +
                       canonical_double(batch.summary.mean_energy_temp);
            }
            csv += "\n";
            rows.push_back(std::move(row));
            ++index;
        }
    }
    csv.pop_back();
    if (args.common.format == "json") {
        emit_json(rows, args.common.out_path);
    } else {
        emit(csv, args.common.out_path);
    }
}

// --- simulate ---

struct SimulateArgs {
    CommonArgs common;
    long shots = 0;
    std::string prepared = "both";
    std::uint64_t seed = 1234567;
    std::string records_path;
    std::string hist_path;
    std::string wait_hist_path;
};

void write_records_csv(const std::string& path, const std::vector<ShotRecord>& records) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot open for writing: " + path);
    }
    out << "shot,collected_counts,pulses_used,wait_time_s,scattered_photons,"
           "depump_time_s,final_energy_temp_k,lost,label\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const ShotRecord& r = records[i];
        out << i << ',' << r.collected_counts << ',' << r.pulses_used << ','
            << canonical_double(r.wait_time) << ',' << r.scattered_photons << ','
            << (r.depump_time ? canonical_double(*r.depump_time) : std::string()) << ','
            << canonical_double(r.final_energy_temp) << ',' << (r.lost ? 1 : 0) << ','
            << (r.label_bright ? "bright" : "dark") << '\n';
    }
    if (!out) {
        throw std::invalid_argument("write failed: " + path);
    }
}

void write_wait_hist_csv(const std::string& path, const WaitTimeHistogram& hist,
                         const AdaptiveProtocol& protocol) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot open for writing: " + path);
    }
    out << "pulses,wait_time_s,empirical_fraction,empirical_cdf,reference_cdf\n";
    double prev = 0.0;
    for (std::size_t k = 0; k < hist.empirical_cdf.size(); ++k) {
        const double cdf = hist.empirical_cdf[k];
        out << (k + 1) << ','
            << canonical_double(static_cast<double>(k + 1) * protocol.pulse_duration) << ','
            << canonical_double(cdf - prev) << ',' << canonical_double(cdf) << ','
            << canonical_double(hist.reference_cdf[k]) << '\n';
        prev = cdf;
    }
    if (!out) {
        throw std::invalid_argument("write failed: " + path);
    }
}

void run_simulate(const SimulateArgs& args) {
    require_format(args.common, "json");
    const ScenarioConfig scenario = resolve_scenario(args.common);
    validate_scenario(scenario);
    if (args.shots < 1) {
        throw std::invalid_argument("--shots must be at least 1");
    }
    const bool want_bright = args.prepared != "dark";
    const bool want_dark = args.prepared != "bright";
    const bool both = want_bright && want_dark;
    const std::string label =
        scenario.preset_name.empty() ? "custom" : scenario.preset_name;

    json out{{"seed", args.seed},
             {"n_shots", args.shots},
             {"prepared", args.prepared},
             {"label", label}};

    BatchResult bright_batch, dark_batch;
    if (want_bright) {
        bright_batch = run_batch(scenario.detection, scenario.protocol, scenario.heating,
                                 PreparedState::bright, args.shots, args.seed);
        out["bright"] = summary_json(bright_batch.summary);
    }
    if (want_dark) {
        // Offset stream: dark shots never reuse the bright shots' draws.
        dark_batch = run_batch(scenario.detection, scenario.protocol, scenario.heating,
                               PreparedState::dark, args.shots,
                               args.seed ^ 0x6461726b64617267ULL);
        out["dark"] = summary_json(dark_batch.summary);
    }
    if (both) {
        long bright_mislabels = 0, dark_mislabels = 0;
        for (const auto& r : bright_batch.records) bright_mislabels += r.label_bright ? 0 : 1;
        for (const auto& r : dark_batch.records) dark_mislabels += r.label_bright ? 1 : 0;
        const WilsonInterval eb = wilson_interval(bright_mislabels, args.shots, kZOneSigma);
        const WilsonInterval ed = wilson_interval(dark_mislabels, args.shots, kZOneSigma);
        const double eps_b = eb.center;
        const double eps_d = ed.center;
        out["errors"] = {
            {"eps_bright", eps_b},
            {"eps_bright_low", eb.low},
            {"eps_bright_high", eb.high},
            {"eps_dark", eps_d},
            {"eps_dark_low", ed.low},
            {"eps_dark_high", ed.high},
            {"infidelity", 0.5 * (eps_b + eps_d)},
            {"fidelity", 1.0 - 0.5 * (eps_b + eps_d)},
        };
        const LossEstimate loss = detection_loss(bright_batch.records, dark_batch.records);
        out["loss"] = {
            {"loss", loss.loss},
            {"std_error", loss.std_error},
            {"survival_bright", loss.survival_bright},
            {"survival_dark", loss.survival_dark},
        };
    }

    const auto state_path = [&](const std::string& path, const char* state) {
        return both ? with_state_suffix(path, state) : path;
    };
    if (!args.records_path.empty()) {
        if (want_bright) write_records_csv(state_path(args.records_path, "bright"),
                                           bright_batch.records);
        if (want_dark) write_records_csv(state_path(args.records_path, "dark"),
                                         dark_batch.records);
    }
    if (!args.hist_path.empty()) {
        const auto dump_hist = [&](const BatchResult& batch, PreparedState prepared,
                                   const char* state) {
            std::vector<int> counts;
            counts.reserve(batch.records.size());
            for (const auto& r : batch.records) counts.push_back(r.collected_counts);
            write_histogram_csv(state_path(args.hist_path, state),
                                histogram_from_records(counts, prepared, label));
        };
        if (want_bright) dump_hist(bright_batch, PreparedState::bright, "bright");
        if (want_dark) dump_hist(dark_batch, PreparedState::dark, "dark");
    }
    if (!args.wait_hist_path.empty()) {
        if (!want_bright) {
            throw std::invalid_argument(
                "--wait-hist needs bright-prepared shots (the reference is the bright "
                "stopping-time law)");
        }
        const WaitTimeHistogram wait =
            wait_time_histogram(bright_batch.records, scenario.protocol,
                                scenario.detection.r_bright + scenario.detection.r_background);
        write_wait_hist_csv(args.wait_hist_path, wait, scenario.protocol);
        out["wait_time"] = {
            {"ks_statistic", wait.ks_statistic},
            {"timeout_fraction", wait.timeout_fraction},
        };
    }
    emit_json(out, args.common.out_path);
}

// --- fit ---

struct FitArgs {
    CommonArgs common;
    std::string hist_path;
    std::string residuals_path;
    bool fix_count_rate = false;
};

void run_fit(const FitArgs& args) {
    require_format(args.common, "json");
    const ScenarioConfig scenario = resolve_scenario(args.common);
    validate_scenario(scenario);
    const CountHistogram hist = read_histogram_csv(args.hist_path);
    const FitResult fit =
        fit_depump(hist, scenario.detection, scenario.detection.collection_efficiency,
                   !args.fix_count_rate);
    json out{
        {"label", hist.label},
        {"n_shots", hist.n_shots},
        {"depump_prob", fit.depump_prob},
        {"depump_prob_low", fit.depump_prob_low},
        {"depump_prob_high", fit.depump_prob_high},
        {"fitted_r_dep", fit.fitted_r_dep},
        {"fitted_r_dep_low", fit.fitted_r_dep_low},
        {"fitted_r_dep_high", fit.fitted_r_dep_high},
        {"fitted_r_p", fit.fitted_r_p},
        {"r_np", fit.r_np},
        {"log_likelihood", fit.log_likelihood},
        {"converged", fit.converged},
    };
    if (!args.residuals_path.empty()) {
        const auto rows = histogram_residuals(hist, fit.fitted_r_p, fit.r_np,
                                              fit.fitted_r_dep, scenario.detection.t_d);
        std::ofstream res(args.residuals_path);
        if (!res) {
            throw std::invalid_argument("cannot open for writing: " + args.residuals_path);
        }
        res << "n,observed_freq,wilson_low,wilson_high,poisson_ref,"
               "observed_minus_poisson,model_p,model_minus_poisson\n";
        for (const auto& row : rows) {
            res << row.n << ',' << canonical_double(row.observed_freq) << ','
                << canonical_double(row.wilson_low) << ','
                << canonical_double(row.wilson_high) << ','
                << canonical_double(row.poisson_ref) << ','
                << canonical_double(row.observed_minus_poisson) << ','
                << canonical_double(row.model_p) << ','
                << canonical_double(row.model_minus_poisson) << '\n';
        }
        if (!res) {
            throw std::invalid_argument("write failed: " + args.residuals_path);
        }
    }
    emit_json(out, args.common.out_path);
}

// --- report ---

void run_report(const CommonArgs& args) {
    require_format(args, "json");
    const ScenarioConfig scenario = resolve_scenario(args);
    validate_scenario(scenario);
    const DepumpBudget budget = scenario_budget(scenario);
    const ErrorReport errors = error_report(scenario.detection);
    const ThresholdResult best_m = optimal_threshold(scenario.detection);
    const TimeResult best_t =
        optimal_time(scenario.detection, scenario.detection.t_d / 20.0,
                     scenario.detection.t_d * 4.0, scenario.detection.threshold);

    json out{
        {"scenario", json::parse(scenario_to_json_text(scenario))},
        {"budget", budget_json(budget)},
        {"errors", report_json(errors)},
        {"optimal_threshold",
         {{"threshold", best_m.threshold}, {"errors", report_json(best_m.report)}}},
        {"optimal_time",
         {{"t_d", best_t.t_d}, {"errors", report_json(best_t.report)}}},
    };
    if (scenario.detection.r_background > 0.0) {
        out["transfer_free_time"] = transfer_free_optimal_time(
            scenario.detection.r_bright + scenario.detection.r_background,
            scenario.detection.r_background, scenario.detection.threshold);
    }
    emit_json(out, args.out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analytic and Monte Carlo toolkit for single-atom fluorescence readout"};
    app.require_subcommand(1);

    CommonArgs rates_args;
    add_scenario_options(app.add_subcommand("rates", "state-transfer rate budget"),
                         rates_args);

    DistributionArgs dist_args;
    {
        CLI::App* sub = app.add_subcommand("distribution", "analytic count distribution");
        add_scenario_options(sub, dist_args.common);
        sub->add_option("--prepared", dist_args.prepared, "bright, dark, or both")
            ->check(CLI::IsMember({"bright", "dark", "both"}));
        sub->add_option("--n-max", dist_args.n_max, "largest count to tabulate");
    }

    SweepArgs sweep_args;
    {
        CLI::App* sub = app.add_subcommand("sweep", "error grid over one or two parameters");
        add_scenario_options(sub, sweep_args.common);
        sweep_args.common.format = "csv";
        sub->add_option("--param", sweep_args.primary.param,
                        "t_d, threshold, depth, or background")->required();
        sub->add_option("--from", sweep_args.primary.from)->required();
        sub->add_option("--to", sweep_args.primary.to)->required();
        sub->add_option("--points", sweep_args.primary.points);
        sub->add_option("--param2", sweep_args.secondary.param, "optional second axis");
        sub->add_option("--from2", sweep_args.secondary.from);
        sub->add_option("--to2", sweep_args.secondary.to);
        sub->add_option("--points2", sweep_args.secondary.points);
        sub->add_option("--mc-shots", sweep_args.mc_shots,
                        "per-point Monte Carlo shots for loss/heating columns");
        sub->add_option("--seed", sweep_args.seed, "Monte Carlo seed");
    }

    SimulateArgs sim_args;
    {
        CLI::App* sub = app.add_subcommand("simulate", "Monte Carlo readout batches");
        add_scenario_options(sub, sim_args.common);
        sub->add_option("--shots", sim_args.shots, "shots per prepared state")->required();
        sub->add_option("--prepared", sim_args.prepared, "bright, dark, or both")
            ->check(CLI::IsMember({"bright", "dark", "both"}));
        sub->add_option("--seed", sim_args.seed, "root seed");
        sub->add_option("--records", sim_args.records_path, "per-shot CSV path");
        sub->add_option("--hist", sim_args.hist_path, "count histogram CSV path");
        sub->add_option("--wait-hist", sim_args.wait_hist_path,
                        "stopping-time histogram CSV path (bright shots)");
    }

    FitArgs fit_args;
    {
        CLI::App* sub = app.add_subcommand("fit", "transfer-rate fit to a count histogram");
        add_scenario_options(sub, fit_args.common);
        sub->add_option("--hist", fit_args.hist_path, "histogram CSV path")->required();
        sub->add_option("--residuals", fit_args.residuals_path,
                        "per-bin residual CSV path");
        sub->add_flag("--fix-count-rate", fit_args.fix_count_rate,
                      "pin the count rate instead of floating it");
    }

    CommonArgs report_args;
    add_scenario_options(app.add_subcommand("report", "full scenario report"), report_args);

    try {
        app.parse(argc, argv);
        if (app.got_subcommand("rates")) run_rates(rates_args);
        if (app.got_subcommand("distribution")) run_distribution(dist_args);
        if (app.got_subcommand("sweep")) run_sweep(sweep_args);
        if (app.got_subcommand("simulate")) run_simulate(sim_args);
        if (app.got_subcommand("fit")) run_fit(fit_args);
        if (app.got_subcommand("report")) run_report(report_args);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::out_of_range& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const tweezerdet::numerical_error& err) {
        std::cerr << "numerical error: " << err.what() << '\n';
        return 3;
    } catch (const std::domain_error& err) {
        std::cerr << "numerical error: " << err.what() << '\n';
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
