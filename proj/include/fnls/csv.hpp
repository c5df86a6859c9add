#pragma once

#include <string>
#include <vector>

#include "fnls/diagnostics.hpp"

namespace fnls {

/// Serializes a double with 17 significant digits (float64 round-trip exact).
std::string csv_double(double v);

/// Flag serialization: fixed-order semicolon list of active flag names,
/// "none" when empty.
std::string csv_flags(const DetectorFlags& flags);

/// Fixed, versioned schema: a "# fnls-diagnostics v1" comment line, then a
/// header naming exactly the DiagnosticsRecord fields in order.
void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& history);

} // namespace fnls
