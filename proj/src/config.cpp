#include "fnls/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fnls {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": key '" + key +
                         "' expects a number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ParseError("line " + std::to_string(line) + ": key '" + key +
                     "' expects on/off, got '" + value + "'");
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected key = value");

        if (key == "N") cfg.params.dim = static_cast<int>(parse_number(key, value, lineno));
        else if (key == "s") cfg.params.s = parse_number(key, value, lineno);
        else if (key == "p") cfg.params.p = parse_number(key, value, lineno);
        else if (key == "M") cfg.grid_points = static_cast<std::size_t>(parse_number(key, value, lineno));
        else if (key == "L") cfg.half_length = parse_number(key, value, lineno);
        else if (key == "gs_tol") cfg.gs_tol = parse_number(key, value, lineno);
        else if (key == "gs_max_iter") cfg.gs_max_iter = static_cast<int>(parse_number(key, value, lineno));
        else if (key == "dt") cfg.dt = parse_number(key, value, lineno);
        else if (key == "T") cfg.T = parse_number(key, value, lineno);
        else if (key == "sample_every") cfg.sample_every = static_cast<long>(parse_number(key, value, lineno));
        else if (key == "sponge") cfg.sponge = parse_bool(key, value, lineno);
        else if (key == "sponge_sigma0") cfg.sponge_sigma0 = parse_number(key, value, lineno);
        else if (key == "dealias") cfg.dealias = parse_bool(key, value, lineno);
        else if (key == "virial_R") cfg.virial_radius = parse_number(key, value, lineno);
        else if (key == "m_nodes") cfg.m_nodes = static_cast<std::size_t>(parse_number(key, value, lineno));
        else if (key == "m_rule") {
            if (value == "rational_jacobi") cfg.m_rule = MRuleKind::RationalJacobi;
            else if (value == "tan_legendre") cfg.m_rule = MRuleKind::TanLegendre;
            else throw ParseError("line " + std::to_string(lineno) +
                                  ": m_rule is rational_jacobi or tan_legendre");
        }
        else if (key == "virial_rate_every") cfg.virial_rate_every = static_cast<long>(parse_number(key, value, lineno));
        else if (key == "family") {
            if (value == "gaussian") cfg.initial.family = InitialData::Family::Gaussian;
            else if (value == "ground_state_multiple") cfg.initial.family = InitialData::Family::GroundStateMultiple;
            else throw ParseError("line " + std::to_string(lineno) +
                                  ": family is gaussian or ground_state_multiple");
        }
        else if (key == "amplitude") cfg.initial.amplitude = parse_number(key, value, lineno);
        else if (key == "width") cfg.initial.width = parse_number(key, value, lineno);
        else if (key == "chirp") cfg.initial.chirp = parse_number(key, value, lineno);
        else if (key == "multiple") cfg.initial.multiple = parse_number(key, value, lineno);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "snapshot_every") cfg.snapshot_every = static_cast<long>(parse_number(key, value, lineno));
        else throw UnknownKey("line " + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
    }

    // validation
    if (cfg.params.dim < 1 || cfg.params.dim > 3)
        throw ValidationError("N: must be 1, 2 or 3");
    if (!(cfg.params.s > 0.0 && cfg.params.s < 1.0))
        throw ValidationError("s: must lie in (0, 1)");
    if (!(cfg.params.p > 1.0))
        throw ValidationError("p: must be > 1");
    if (!is_power_of_two(cfg.grid_points) || cfg.grid_points < 16)
        throw ValidationError("M: must be a power of two >= 16");
    if (!(cfg.half_length > 0.0))
        throw ValidationError("L: must be > 0");
    if (!(cfg.gs_tol > 1e-12 && cfg.gs_tol < 1e-4))
        throw ValidationError("gs_tol: must lie in (1e-12, 1e-4)");
    if (cfg.gs_max_iter < 1)
        throw ValidationError("gs_max_iter: must be >= 1");
    if (!(cfg.dt > 0.0))
        throw ValidationError("dt: must be > 0");
    if (!(cfg.T >= 0.0))
        throw ValidationError("T: must be >= 0");
    if (cfg.sample_every < 1)
        throw ValidationError("sample_every: must be >= 1");
    if (cfg.sponge_sigma0 < 0.0)
        throw ValidationError("sponge_sigma0: must be >= 0");
    if (cfg.virial_radius < 0.0 || cfg.virial_radius >= cfg.half_length)
        if (cfg.virial_radius != 0.0)
            throw ValidationError("virial_R: must lie in (0, L), or 0 for L/3");
    if (cfg.m_nodes < 8)
        throw ValidationError("m_nodes: must be >= 8");
    if (cfg.virial_rate_every < 0)
        throw ValidationError("virial_rate_every: must be >= 0");
    if (!(cfg.initial.amplitude > 0.0))
        throw ValidationError("amplitude: must be > 0");
    if (!(cfg.initial.width > 0.0))
        throw ValidationError("width: must be > 0");
    if (!(cfg.initial.multiple > 0.0))
        throw ValidationError("multiple: must be > 0");
    if (cfg.snapshot_every < 0)
        throw ValidationError("snapshot_every: must be >= 0");

    const double mc = cfg.params.mass_critical_power();
    if (cfg.params.p <= mc) {
        std::ostringstream w;
        w << "subcritical: p = " << cfg.params.p << " is below 1+4s/N = " << mc
          << "; classify will refuse, evolve is allowed";
        cfg.warnings.push_back(w.str());
    } else if (!cfg.params.in_supercritical_window()) {
        cfg.warnings.push_back(
            "p is at or above the energy-critical power 1+4s/(N-2s); "
            "outside the supercritical window");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_help() {
    return
        "config keys (flat key = value lines, '#' comments):\n"
        "  N                  1|2|3        space dimension (default 2)\n"
        "  s                  (0,1)        fractional order (default 0.75)\n"
        "  p                  > 1          nonlinearity power (default 3)\n"
        "  M                  2^k >= 16    grid points per axis (default 256)\n"
        "  L                  > 0          box half-length, box [-L,L)^N (default 20)\n"
        "  gs_tol             (1e-12,1e-4) ground-state tolerance (default 1e-10)\n"
        "  gs_max_iter        >= 1         ground-state iteration cap (default 2000)\n"
        "  dt                 > 0          time step (default 1e-3)\n"
        "  T                  >= 0         final time (default 5)\n"
        "  sample_every       >= 1         steps between diagnostics samples (default 10)\n"
        "  sponge             on|off       absorbing sponge layer (default off)\n"
        "  sponge_sigma0      >= 0         sponge strength (default 10)\n"
        "  dealias            on|off       2/3-rule spectral filter (default off)\n"
        "  virial_R           (0,L)|0      virial cutoff radius, 0 -> L/3 (default 0)\n"
        "  m_nodes            >= 8         resolvent m-quadrature nodes (default 200)\n"
        "  m_rule             rational_jacobi|tan_legendre (default rational_jacobi)\n"
        "  virial_rate_every  >= 0         rate identity every k-th sample, 0 off (default 1)\n"
        "  family             gaussian|ground_state_multiple (default gaussian)\n"
        "  amplitude          > 0          gaussian amplitude A (default 1)\n"
        "  width              > 0          gaussian width w, u0 = A exp(-|x|^2/w^2) (default 1)\n"
        "  chirp              real         quadratic phase b, factor exp(i b |x|^2) (default 0)\n"
        "  multiple           > 0          c in u0 = c Q (default 1)\n"
        "  out_dir            path         output directory (default out)\n"
        "  snapshot_every     >= 0         samples between snapshots, 0 final only (default 0)\n";
}

} // namespace fnls
