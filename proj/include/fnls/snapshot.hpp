#pragma once

#include <string>

#include "fnls/field.hpp"

namespace fnls {

/// Bit-exact binary state snapshot.
///
/// Layout (little-endian regardless of host):
///   magic "FNLS" | u32 version=1 | u32 dim | u32 points_per_dim |
///   f64 half_length | f64 time | f64 s | f64 p |
///   M^N interleaved (re, im) f64, row-major.
struct Snapshot {
    Field field;
    double time;
    double s;
    double p;
};

void write_snapshot(const std::string& path, const Field& field, double time,
                    double s, double p);

Snapshot read_snapshot(const std::string& path);

} // namespace fnls
