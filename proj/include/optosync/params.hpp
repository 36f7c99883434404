#ifndef OPTOSYNC_PARAMS_HPP
#define OPTOSYNC_PARAMS_HPP

#include <map>
#include <string>

namespace optosync {

// Physical rates and drive settings of the two-mirror cavity, dimensionless,
// normalized to the mechanical frequency of mirror 1.
struct SystemParams {
    double omega_m = 1.0;    // mechanical frequency of mirror 1
    double delta_m = 0.0;    // mechanical detuning of mirror 2
    double delta = 1.0;      // cavity-laser detuning
    double kappa = 0.1;      // cavity amplitude decay rate
    double gamma_m1 = 1e-3;  // mechanical damping, mirror 1
    double gamma_m2 = 1e-3;  // mechanical damping, mirror 2
    double g = 0.05;         // single-photon optomechanical coupling
    double drive_e = 2.1;    // laser drive strength
    double mod_omega = 0.5;  // modulation frequency
    double mod_eps = 0.5;    // modulation depth
    double n_ph = 0.0;       // thermal occupancy of the field
    double n_m1 = 0.0;       // thermal occupancy, mirror 1
    double n_m2 = 0.0;       // thermal occupancy, mirror 2

    double omega_m2() const { return omega_m + delta_m; }

    // Throws ConfigError when a rate or occupancy is out of range.
    void validate() const;
};

// Parses either flat "key = value" text ('#' comments allowed) or a flat
// JSON object; both use the field names above.
SystemParams params_from_string(const std::string& text);
SystemParams params_from_file(const std::string& path);

// Applies "key=value" overrides onto p. Unknown keys throw ConfigError.
void apply_param_override(SystemParams& p, const std::string& key, const std::string& value);

std::map<std::string, double> params_to_map(const SystemParams& p);

} // namespace optosync

#endif
