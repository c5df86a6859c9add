#pragma once

#include <string>
#include <vector>

#include "fnls/initial_data.hpp"
#include "fnls/params.hpp"
#include "fnls/quadrature.hpp"

namespace fnls {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};
struct ValidationError : ConfigError {
    using ConfigError::ConfigError;
};
struct UnknownKey : ConfigError {
    using ConfigError::ConfigError;
};

/// Flat key = value run configuration.  Unknown keys are rejected; all
/// numeric ranges are validated at load.  `fnls --help` documents every key.
struct RunConfig {
    PhysParams params;                 // N, s, p
    std::size_t grid_points = 256;     // M
    double half_length = 20.0;         // L

    double gs_tol = 1e-10;
    int gs_max_iter = 2000;

    double dt = 1e-3;
    double T = 5.0;
    long sample_every = 10;
    bool sponge = false;
    double sponge_sigma0 = 10.0;
    bool dealias = false;

    double virial_radius = 0.0;        // 0 -> L/3
    std::size_t m_nodes = 200;
    MRuleKind m_rule = MRuleKind::RationalJacobi;
    long virial_rate_every = 1;        // rate identity every k-th sample; 0 off

    InitialData initial;
    std::string out_dir = "out";
    long snapshot_every = 0;           // samples between snapshots; 0 final only

    std::vector<std::string> warnings; // non-fatal validation notes

    double effective_virial_radius() const {
        return virial_radius > 0.0 ? virial_radius : half_length / 3.0;
    }
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

/// One line per key: name, default, meaning.
std::string config_help();

} // namespace fnls
