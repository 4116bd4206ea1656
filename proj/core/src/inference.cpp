#include "tweezerdet/inference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tweezerdet/errors.hpp"
#include "tweezerdet/minimize.hpp"

namespace tweezerdet {

namespace {

using nlohmann::json;

std::string prepared_to_string(PreparedState s) {
    return s == PreparedState::bright ? "bright" : "dark";
}

PreparedState prepared_from_string(const std::string& s) {
    if (s == "bright") return PreparedState::bright;
    if (s == "dark") return PreparedState::dark;
    throw std::invalid_argument("prepared: expected bright or dark, got '" + s + "'");
}

bool file_exists(const std::string& path) {
    std::ifstream f(path);
    return f.good();
}

struct KernelFit {
    const CountHistogram* hist;
    double r_np;
    double t_d;

    double log_likelihood(double r_p, double r_dep) const {
        double ll = 0.0;
        for (const auto& [n, count] : hist->tallies) {
            const double p = count_distribution_kernel(n, r_p, r_np, r_dep, t_d);
            ll += static_cast<double>(count) * std::log(std::max(p, 1e-300));
        }
        return ll;
    }
};

}  // namespace

WilsonInterval wilson_interval(long successes, long trials, double z) {
    if (trials <= 0) {
        throw std::domain_error("wilson_interval: trials must be positive");
    }
    if (successes < 0 || successes > trials) {
        throw std::domain_error("wilson_interval: successes must lie in [0, trials]");
    }
    if (!(z > 0.0)) {
        throw std::domain_error("wilson_interval: z must be positive");
    }
    const double n = static_cast<double>(trials);
    const double p_hat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p_hat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom;
    return {center - half, center + half, p_hat};
}

CountHistogram histogram_from_records(const std::vector<int>& counts,
                                      PreparedState prepared,
                                      const std::string& label) {
    CountHistogram h;
    h.prepared = prepared;
    h.label = label;
    for (int c : counts) {
        if (c < 0) {
            throw std::invalid_argument("histogram counts must be non-negative");
        }
        ++h.tallies[c];
    }
    h.n_shots = static_cast<long>(counts.size());
    return h;
}

void write_histogram_csv(const std::string& path, const CountHistogram& hist) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot open for writing: " + path);
    }
    out << "n,count\n";
    for (const auto& [n, count] : hist.tallies) {
        out << n << "," << count << "\n";
    }
    if (!out) {
        throw std::invalid_argument("write failed: " + path);
    }
    json side;
    side["label"] = hist.label;
    side["n_shots"] = hist.n_shots;
    side["prepared"] = prepared_to_string(hist.prepared);
    std::ofstream meta(path + ".json");
    if (!meta) {
        throw std::invalid_argument("cannot open for writing: " + path + ".json");
    }
    meta << side.dump(2) << "\n";
}

CountHistogram read_histogram_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open histogram file: " + path);
    }
    CountHistogram hist;
    std::string line;
    int line_no = 0;
    long total = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1) {
            if (line != "n,count") {
                throw std::invalid_argument(path + ":1: expected header 'n,count'");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected 'n,count' row");
        }
        int n = 0;
        long count = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(line.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("trailing characters");
            const std::string rest = line.substr(comma + 1);
            count = std::stol(rest, &used);
            if (used != rest.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": malformed integer field");
        }
        if (n < 0 || count < 0) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": negative value");
        }
        if (!hist.tallies.emplace(n, count).second) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": duplicate count bin " + std::to_string(n));
        }
        total += count;
    }
    hist.n_shots = total;

    const std::string side_path = path + ".json";
    if (file_exists(side_path)) {
        std::ifstream meta(side_path);
        json side;
        try {
            side = json::parse(meta);
        } catch (const json::parse_error& err) {
            throw std::invalid_argument(side_path + ": " + err.what());
        }
        if (side.contains("n_shots")) {
            const long declared = side["n_shots"].get<long>();
            if (declared != total) {
                throw std::invalid_argument(side_path + ": n_shots " +
                                            std::to_string(declared) +
                                            " does not match tally sum " +
                                            std::to_string(total));
            }
        }
        if (side.contains("prepared")) {
            hist.prepared = prepared_from_string(side["prepared"].get<std::string>());
        }
        if (side.contains("label")) {
            hist.label = side["label"].get<std::string>();
        }
    }
    return hist;
}

FitResult fit_depump(const CountHistogram& hist, const DetectionParams& init,
                     double ce, bool float_count_rate) {
    validate_detection(init);
    if (!(ce > 0.0) || ce > 1.0) {
        throw std::domain_error("fit_depump: collection efficiency must lie in (0, 1]");
    }
    if (hist.n_shots <= 0 || hist.tallies.empty()) {
        throw std::invalid_argument("fit_depump: histogram is empty");
    }
    long occupied = 0;
    for (const auto& [n, tally] : hist.tallies) {
        (void)n;
        if (tally > 0) ++occupied;
    }
    if (occupied < 2) {
        throw numerical_error(
            "fit_depump: degenerate histogram, all " + std::to_string(hist.n_shots) +
            " shots fall in one bin; the likelihood has no interior optimum");
    }
    const KernelFit model{&hist, init.r_background, init.t_d};
    const double r_p_init = init.r_bright + init.r_background;
    const double r_p_lo = init.r_background + 1e-6 * r_p_init;
    const double r_p_hi = 3.0 * r_p_init;

    double last_r_p = r_p_init;
    const auto profile = [&](double r_dep) {
        if (!float_count_rate) {
            last_r_p = r_p_init;
            return model.log_likelihood(r_p_init, r_dep);
        }
        const auto neg_ll = [&](double r_p) { return -model.log_likelihood(r_p, r_dep); };
        // Warm start around the previous optimum; fall back to the full
        // bracket when the narrow one pins to an edge.
        double lo = std::max(r_p_lo, 0.7 * last_r_p);
        double hi = std::min(r_p_hi, 1.4 * last_r_p);
        MinimizeResult best = golden_minimize(neg_ll, lo, hi, 1e-6);
        if (best.x < lo * 1.001 || best.x > hi * 0.999) {
            best = golden_minimize(neg_ll, r_p_lo, r_p_hi, 1e-6);
        }
        last_r_p = best.x;
        return -best.value;
    };

    const double r_dep_hi = 5.0 / init.t_d;
    const auto neg_profile = [&](double r_dep) { return -profile(r_dep); };
    const MinimizeResult top = golden_minimize(neg_profile, 0.0, r_dep_hi, 1e-6);

    FitResult fit;
    fit.fitted_r_dep = top.x;
    fit.log_likelihood = -top.value;
    fit.r_np = init.r_background;
    fit.fitted_r_p = float_count_rate ? last_r_p : r_p_init;
    // Pin the count rate while tracing the transfer-rate profile so the
    // interval reflects the likelihood curvature at the optimum.
    const double r_p_hat = fit.fitted_r_p;
    const auto profile_fixed = [&](double r_dep) {
        return model.log_likelihood(r_p_hat, r_dep);
    };
    const double ll_hat = profile_fixed(fit.fitted_r_dep);
    const double target = ll_hat - 0.5;

    bool upper_found = true;
    if (profile_fixed(0.0) >= target) {
        fit.fitted_r_dep_low = 0.0;
    } else {
        fit.fitted_r_dep_low = bisect_root(
            [&](double r) { return profile_fixed(r) - target; }, 0.0, fit.fitted_r_dep);
    }
    if (profile_fixed(r_dep_hi) >= target) {
        fit.fitted_r_dep_high = r_dep_hi;
        upper_found = false;
    } else {
        fit.fitted_r_dep_high = bisect_root(
            [&](double r) { return profile_fixed(r) - target; }, fit.fitted_r_dep, r_dep_hi);
    }

    const double to_prob = ce / fit.fitted_r_p;
    fit.depump_prob = fit.fitted_r_dep * to_prob;
    fit.depump_prob_low = fit.fitted_r_dep_low * to_prob;
    fit.depump_prob_high = fit.fitted_r_dep_high * to_prob;
    fit.converged = upper_found && fit.fitted_r_dep < 0.999 * r_dep_hi;
    return fit;
}

std::vector<ResidualRow> histogram_residuals(const CountHistogram& hist,
                                             double r_p, double r_np,
                                             double r_dep, double t_d) {
    if (hist.n_shots <= 0 || hist.tallies.empty()) {
        throw std::invalid_argument("histogram_residuals: histogram is empty");
    }
    double mean = 0.0;
    for (const auto& [n, count] : hist.tallies) {
        mean += static_cast<double>(n) * static_cast<double>(count);
    }
    mean /= static_cast<double>(hist.n_shots);

    const int n_max = hist.tallies.rbegin()->first;
    std::vector<ResidualRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        ResidualRow row;
        row.n = n;
        const auto it = hist.tallies.find(n);
        const long count = it == hist.tallies.end() ? 0 : it->second;
        row.observed_freq = static_cast<double>(count) / static_cast<double>(hist.n_shots);
        const WilsonInterval w = wilson_interval(count, hist.n_shots, kZOneSigma);
        row.wilson_low = w.low;
        row.wilson_high = w.high;
        row.poisson_ref = poisson_pmf(n, mean);
        row.observed_minus_poisson = row.observed_freq - row.poisson_ref;
        row.model_p = count_distribution_kernel(n, r_p, r_np, r_dep, t_d);
        row.model_minus_poisson = row.model_p - row.poisson_ref;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace tweezerdet
