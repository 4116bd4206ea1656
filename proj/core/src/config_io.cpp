#include "tweezerdet/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace tweezerdet {

namespace {

using nlohmann::json;

std::string join_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// Strict-mode guard: every key must be declared, required or optional.
void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument(join_path(path, item.key()) +
                                        ": unknown field (strict mode)");
        }
    }
}

const json& require_field(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw std::invalid_argument(join_path(path, key) + ": missing required field");
    }
    return *it;
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        throw std::invalid_argument(where + ": expected a number");
    }
    return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) {
        throw std::invalid_argument(where + ": expected an integer");
    }
    return v.get<int>();
}

bool as_bool(const json& v, const std::string& where) {
    if (!v.is_boolean()) {
        throw std::invalid_argument(where + ": expected a boolean");
    }
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) {
        throw std::invalid_argument(where + ": expected a string");
    }
    return v.get<std::string>();
}

const json& require_object(const json& root, const char* key) {
    const json& section = require_field(root, "", key);
    if (!section.is_object()) {
        throw std::invalid_argument(std::string(key) + ": expected an object");
    }
    return section;
}

double number_or(const json& obj, const std::string& path, const char* key,
                 double fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : as_number(*it, join_path(path, key));
}

void write_canonical(const json& v, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (v.type()) {
        case json::value_t::null:
            out += "null";
            return;
        case json::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            return;
        case json::value_t::number_integer:
            out += std::to_string(v.get<long long>());
            return;
        case json::value_t::number_unsigned:
            out += std::to_string(v.get<unsigned long long>());
            return;
        case json::value_t::number_float:
            out += canonical_double(v.get<double>());
            return;
        case json::value_t::string:
            out += v.dump();  // handles escaping
            return;
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                write_canonical(item, out, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            // nlohmann's default object is key-sorted already.
            out += "{\n";
            bool first = true;
            for (const auto& item : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + json(item.key()).dump() + ": ";
                write_canonical(item.value(), out, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        default:
            throw std::invalid_argument("canonical JSON cannot represent binary values");
    }
}

}  // namespace

ScenarioConfig scenario_from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("config parse error: ") + err.what());
    }
    if (!root.is_object()) {
        throw std::invalid_argument("config root: expected an object");
    }
    check_keys(root, "", {"schema_version", "preset_name", "trap", "probe", "detection",
                          "protocol", "heating"});
    const json& ver = require_field(root, "", "schema_version");
    if (!ver.is_number_integer() || ver.get<long long>() != kConfigSchemaVersion) {
        throw std::invalid_argument("schema_version: expected " +
                                    std::to_string(kConfigSchemaVersion));
    }

    ScenarioConfig c{};
    if (const auto it = root.find("preset_name"); it != root.end()) {
        c.preset_name = as_string(*it, "preset_name");
    }

    {
        const json& trap = require_object(root, "trap");
        check_keys(trap, "trap", {"depth_freq", "polarization_mode", "wavelength"});
        const double depth = as_number(require_field(trap, "trap", "depth_freq"),
                                       "trap.depth_freq");
        const std::string mode_str = as_string(
            require_field(trap, "trap", "polarization_mode"), "trap.polarization_mode");
        TrapPolarization mode;
        try {
            mode = trap_polarization_from_string(mode_str);
        } catch (const std::invalid_argument& err) {
            throw std::invalid_argument(std::string("trap.polarization_mode: ") + err.what());
        }
        const double wavelength =
            number_or(trap, "trap", "wavelength", kDefaultTrapWavelength);
        c.trap = make_trap(depth, mode, wavelength);
    }

    {
        const json& probe = require_object(root, "probe");
        check_keys(probe, "probe",
                   {"intensity_sat", "pol_fraction_sigma_plus", "pol_fraction_sigma_minus",
                    "pol_fraction_pi", "polarization_purity"});
        const double sat = as_number(require_field(probe, "probe", "intensity_sat"),
                                     "probe.intensity_sat");
        const double f_minus =
            as_number(require_field(probe, "probe", "pol_fraction_sigma_minus"),
                      "probe.pol_fraction_sigma_minus");
        const double f_pi = as_number(require_field(probe, "probe", "pol_fraction_pi"),
                                      "probe.pol_fraction_pi");
        try {
            c.probe = make_probe(sat, f_minus, f_pi);
        } catch (const std::domain_error& err) {
            throw std::invalid_argument(std::string("probe: ") + err.what());
        }
        // The derived fields may be restated; they must then agree.
        const double f_plus = number_or(probe, "probe", "pol_fraction_sigma_plus",
                                        c.probe.pol_fraction_sigma_plus);
        if (std::abs(f_plus - c.probe.pol_fraction_sigma_plus) > 1e-9) {
            throw std::invalid_argument(
                "probe.pol_fraction_sigma_plus: fractions must sum to 1");
        }
        const double purity = number_or(probe, "probe", "polarization_purity",
                                        c.probe.polarization_purity);
        if (std::abs(purity - c.probe.polarization_purity) > 1e-9) {
            throw std::invalid_argument(
                "probe.polarization_purity: must equal pol_fraction_sigma_plus");
        }
    }

    {
        const json& det = require_object(root, "detection");
        check_keys(det, "detection",
                   {"r_bright", "r_background", "r_dep_bright", "r_dep_dark", "t_d",
                    "threshold", "collection_efficiency"});
        c.detection.r_bright = as_number(require_field(det, "detection", "r_bright"),
                                         "detection.r_bright");
        c.detection.r_background =
            as_number(require_field(det, "detection", "r_background"),
                      "detection.r_background");
        c.detection.r_dep_bright =
            as_number(require_field(det, "detection", "r_dep_bright"),
                      "detection.r_dep_bright");
        c.detection.r_dep_dark = number_or(det, "detection", "r_dep_dark", 0.0);
        c.detection.t_d = as_number(require_field(det, "detection", "t_d"),
                                    "detection.t_d");
        if (const auto it = det.find("threshold"); it != det.end()) {
            c.detection.threshold = as_int(*it, "detection.threshold");
        } else {
            c.detection.threshold = 2;
        }
        c.detection.collection_efficiency =
            as_number(require_field(det, "detection", "collection_efficiency"),
                      "detection.collection_efficiency");
    }

    {
        const json& proto = require_object(root, "protocol");
        check_keys(proto, "protocol",
                   {"pulse_duration", "max_total_time", "threshold", "adaptive"});
        c.protocol.pulse_duration =
            as_number(require_field(proto, "protocol", "pulse_duration"),
                      "protocol.pulse_duration");
        c.protocol.max_total_time =
            as_number(require_field(proto, "protocol", "max_total_time"),
                      "protocol.max_total_time");
        if (const auto it = proto.find("threshold"); it != proto.end()) {
            c.protocol.threshold = as_int(*it, "protocol.threshold");
        } else {
            c.protocol.threshold = 2;
        }
        if (const auto it = proto.find("adaptive"); it != proto.end()) {
            c.protocol.adaptive = as_bool(*it, "protocol.adaptive");
        } else {
            c.protocol.adaptive = true;
        }
    }

    c.heating = make_heating(c.trap);
    if (const auto it = root.find("heating"); it != root.end()) {
        const json& heat = *it;
        if (!heat.is_object()) {
            throw std::invalid_argument("heating: expected an object");
        }
        check_keys(heat, "heating",
                   {"recoil_temp", "energy_per_scatter", "trap_depth_temp", "loss_enabled"});
        c.heating.recoil_temp =
            number_or(heat, "heating", "recoil_temp", c.heating.recoil_temp);
        c.heating.energy_per_scatter = number_or(heat, "heating", "energy_per_scatter",
                                                 2.0 * c.heating.recoil_temp);
        c.heating.trap_depth_temp =
            number_or(heat, "heating", "trap_depth_temp", c.heating.trap_depth_temp);
        if (const auto flag = heat.find("loss_enabled"); flag != heat.end()) {
            c.heating.loss_enabled = as_bool(*flag, "heating.loss_enabled");
        }
    }

    validate_scenario(c);
    return c;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return scenario_from_json_text(buf.str());
    } catch (const std::invalid_argument& err) {
        throw std::invalid_argument(path + ": " + err.what());
    }
}

std::string scenario_to_json_text(const ScenarioConfig& config) {
    json root;
    root["schema_version"] = kConfigSchemaVersion;
    if (!config.preset_name.empty()) {
        root["preset_name"] = config.preset_name;
    }
    root["trap"] = {
        {"depth_freq", config.trap.depth_freq},
        {"polarization_mode", to_string(config.trap.polarization_mode)},
        {"wavelength", config.trap.wavelength},
    };
    root["probe"] = {
        {"intensity_sat", config.probe.intensity_sat},
        {"pol_fraction_sigma_plus", config.probe.pol_fraction_sigma_plus},
        {"pol_fraction_sigma_minus", config.probe.pol_fraction_sigma_minus},
        {"pol_fraction_pi", config.probe.pol_fraction_pi},
        {"polarization_purity", config.probe.polarization_purity},
    };
    root["detection"] = {
        {"r_bright", config.detection.r_bright},
        {"r_background", config.detection.r_background},
        {"r_dep_bright", config.detection.r_dep_bright},
        {"r_dep_dark", config.detection.r_dep_dark},
        {"t_d", config.detection.t_d},
        {"threshold", config.detection.threshold},
        {"collection_efficiency", config.detection.collection_efficiency},
    };
    root["protocol"] = {
        {"pulse_duration", config.protocol.pulse_duration},
        {"max_total_time", config.protocol.max_total_time},
        {"threshold", config.protocol.threshold},
        {"adaptive", config.protocol.adaptive},
    };
    root["heating"] = {
        {"recoil_temp", config.heating.recoil_temp},
        {"energy_per_scatter", config.heating.energy_per_scatter},
        {"trap_depth_temp", config.heating.trap_depth_temp},
        {"loss_enabled", config.heating.loss_enabled},
    };
    return canonical_json_from_text(root.dump());
}

void save_scenario_file(const std::string& path, const ScenarioConfig& config) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot open for writing: " + path);
    }
    out << scenario_to_json_text(config) << '\n';
    if (!out) {
        throw std::invalid_argument("write failed: " + path);
    }
}

std::string canonical_double(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("canonical JSON cannot represent non-finite numbers");
    }
    if (x == 0.0) {
        return "0";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string canonical_json_from_text(const std::string& text) {
    json parsed;
    try {
        parsed = json::parse(text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("JSON parse error: ") + err.what());
    }
    std::string out;
    write_canonical(parsed, out, 0);
    return out;
}

}  // namespace tweezerdet
