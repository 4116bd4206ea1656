#pragma once

#include <string>
#include <vector>

namespace tweezerdet {

enum class Polarization {
    sigma_plus,
    sigma_minus,
    pi,
};

std::string to_string(Polarization p);
Polarization polarization_from_string(const std::string& s);  // throws std::invalid_argument

// One excited-state channel through which probe light can pump a bright
// atom toward the dark hyperfine ground state.
struct TransitionEntry {
    int f_prime;
    int m_f_prime;
    Polarization polarization;   // probe component that drives this channel
    double detuning;             // probe detuning from the channel, rad/s
    double branching_to_dark;    // decay fraction ending in the dark ground state
    double sat_ratio;            // saturation intensity relative to the cycling transition
};

// Built-in depump channels of the cesium D2 cycling configuration.
std::vector<TransitionEntry> cs_d2_depump_table();

// Throws std::out_of_range when no row matches.
const TransitionEntry& table_lookup(const std::vector<TransitionEntry>& table,
                                    int f_prime, int m_f_prime);

// JSON (de)serialization. The on-disk form stores branching ratios as
// exact integer fractions and detunings in MHz.
std::vector<TransitionEntry> transitions_from_json(const std::string& json_text);
std::string transitions_to_json(const std::vector<TransitionEntry>& table);
std::vector<TransitionEntry> load_transitions_file(const std::string& path);

}  // namespace tweezerdet
