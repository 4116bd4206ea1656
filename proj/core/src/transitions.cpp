#include "tweezerdet/transitions.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tweezerdet {

namespace {

using nlohmann::json;

// On-disk branching ratios are exact integer fractions; recover them from
// the stored double so a load/save cycle is byte-stable.
std::pair<long, long> as_fraction(double value) {
    for (long den = 1; den <= 1000; ++den) {
        const double scaled = value * static_cast<double>(den);
        const double num = std::round(scaled);
        if (std::abs(scaled - num) < 1e-12 * den) {
            return {static_cast<long>(num), den};
        }
    }
    throw std::invalid_argument("branching_to_dark is not a small exact fraction");
}

TransitionEntry entry_from_json(const json& row, std::size_t index) {
    const auto field = [&](const char* key) -> const json& {
        auto it = row.find(key);
        if (it == row.end()) {
            throw std::invalid_argument("transitions[" + std::to_string(index) +
                                        "]: missing field '" + key + "'");
        }
        return *it;
    };
    TransitionEntry e{};
    e.f_prime = field("f_prime").get<int>();
    e.m_f_prime = field("m_f_prime").get<int>();
    e.polarization = polarization_from_string(field("polarization").get<std::string>());
    e.detuning = field("detuning_mhz").get<double>() * 1e6 * 2.0 * std::numbers::pi;
    const long num = field("branching_num").get<long>();
    const long den = field("branching_den").get<long>();
    if (den <= 0) {
        throw std::invalid_argument("transitions[" + std::to_string(index) +
                                    "].branching_den: must be positive");
    }
    e.branching_to_dark = static_cast<double>(num) / static_cast<double>(den);
    e.sat_ratio = field("sat_ratio").get<double>();
    if (e.f_prime < 0 || std::abs(e.m_f_prime) > e.f_prime) {
        throw std::invalid_argument("transitions[" + std::to_string(index) +
                                    "]: |m_f_prime| must not exceed f_prime");
    }
    if (e.branching_to_dark < 0.0 || e.branching_to_dark > 1.0) {
        throw std::invalid_argument("transitions[" + std::to_string(index) +
                                    "].branching: must lie in [0, 1]");
    }
    if (!(e.sat_ratio > 0.0)) {
        throw std::invalid_argument("transitions[" + std::to_string(index) +
                                    "].sat_ratio: must be positive");
    }
    return e;
}

}  // namespace

std::string to_string(Polarization p) {
    switch (p) {
        case Polarization::sigma_plus: return "sigma_plus";
        case Polarization::sigma_minus: return "sigma_minus";
        case Polarization::pi: return "pi";
    }
    throw std::invalid_argument("unknown polarization value");
}

Polarization polarization_from_string(const std::string& s) {
    if (s == "sigma_plus") return Polarization::sigma_plus;
    if (s == "sigma_minus") return Polarization::sigma_minus;
    if (s == "pi") return Polarization::pi;
    throw std::invalid_argument("polarization: expected sigma_plus, sigma_minus, or pi, got '" + s + "'");
}

std::vector<TransitionEntry> cs_d2_depump_table() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return {
        {4, 4, Polarization::pi, two_pi * 251e6, 5.0 / 12.0, 2.14},
        {4, 3, Polarization::sigma_minus, two_pi * 251e6, 5.0 / 12.0, 8.57},
        {3, 3, Polarization::sigma_minus, two_pi * 452e6, 3.0 / 4.0, 5.14},
    };
}

const TransitionEntry& table_lookup(const std::vector<TransitionEntry>& table,
                                    int f_prime, int m_f_prime) {
    for (const auto& e : table) {
        if (e.f_prime == f_prime && e.m_f_prime == m_f_prime) return e;
    }
    throw std::out_of_range("no transition entry for F'=" + std::to_string(f_prime) +
                            ", mF'=" + std::to_string(m_f_prime));
}

std::vector<TransitionEntry> transitions_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("transitions: ") + err.what());
    }
    if (!doc.is_array()) {
        throw std::invalid_argument("transitions: top-level JSON must be an array");
    }
    std::vector<TransitionEntry> table;
    table.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        table.push_back(entry_from_json(doc[i], i));
    }
    return table;
}

std::string transitions_to_json(const std::vector<TransitionEntry>& table) {
    json doc = json::array();
    for (const auto& e : table) {
        const auto [num, den] = as_fraction(e.branching_to_dark);
        json row;
        row["f_prime"] = e.f_prime;
        row["m_f_prime"] = e.m_f_prime;
        row["polarization"] = to_string(e.polarization);
        row["detuning_mhz"] = e.detuning / (2.0 * std::numbers::pi * 1e6);
        row["branching_num"] = num;
        row["branching_den"] = den;
        row["sat_ratio"] = e.sat_ratio;
        doc.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

std::vector<TransitionEntry> load_transitions_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open transitions file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return transitions_from_json(buf.str());
}

}  // namespace tweezerdet
