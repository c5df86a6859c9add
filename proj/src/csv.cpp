#include "fnls/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fnls {

std::string csv_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_flags(const DetectorFlags& flags) {
    std::string out;
    const auto add = [&out](const char* name) {
        if (!out.empty()) out += ';';
        out += name;
    };
    if (flags.consistent_with_scattering) add("consistent-with-scattering");
    if (flags.blowup_indicated) add("blowup-indicated");
    if (flags.undetermined) add("undetermined");
    if (flags.tail_exceeded) add("tail");
    if (flags.sponge_active) add("sponge");
    if (flags.overflow) add("overflow");
    return out.empty() ? "none" : out;
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& history) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    out << "# fnls-diagnostics v1\n";
    out << "time,mass,energy,hs_seminorm_sq,lp1_norm,virial,virial_rate_fd,"
           "virial_rate_id,strichartz_accum,coercivity_gap,flags\n";
    for (const auto& r : history) {
        out << csv_double(r.time) << ',' << csv_double(r.mass) << ','
            << csv_double(r.energy) << ',' << csv_double(r.hs_seminorm_sq)
            << ',' << csv_double(r.lp1_norm) << ',' << csv_double(r.virial)
            << ',' << csv_double(r.virial_rate_fd) << ','
            << csv_double(r.virial_rate_id) << ','
            << csv_double(r.strichartz_accum) << ','
            << csv_double(r.coercivity_gap) << ',' << csv_flags(r.flags)
            << '\n';
    }
    if (!out) throw std::runtime_error("csv: write failed: " + path);
}

} // namespace fnls
