#pragma once

#include <cmath>

namespace fnls {

/// Radial cutoff profile for the localized virial.
///
/// phi(r) = r^2 on [0, 1], a C^3 polynomial bridge on (1, 2), and a
/// constant plateau on [2, inf).  The bridge is chosen through its second
/// derivative psi(t) = 2 - 96 t^2 + 184 t^3 - 90 t^4 (t = r - 1), which
/// keeps phi'' <= 2 everywhere with phi'(2) = phi''(2) = phi'''(2) = 0;
/// only derivatives of phi enter any computed quantity, so the plateau
/// constant is immaterial.
namespace cutoff {

inline double phi(double r) {
    if (r <= 1.0) return r * r;
    if (r >= 2.0) return 2.2;
    const double t = r - 1.0;
    const double t2 = t * t, t4 = t2 * t2;
    return 1.0 + 2.0 * t + t2 - 8.0 * t4 + 9.2 * t4 * t - 3.0 * t4 * t2;
}

inline double dphi(double r) {
    if (r <= 1.0) return 2.0 * r;
    if (r >= 2.0) return 0.0;
    const double t = r - 1.0;
    const double t2 = t * t, t3 = t2 * t;
    return 2.0 + 2.0 * t - 32.0 * t3 + 46.0 * t3 * t - 18.0 * t3 * t2;
}

inline double d2phi(double r) {
    if (r <= 1.0) return 2.0;
    if (r >= 2.0) return 0.0;
    const double t = r - 1.0;
    const double t2 = t * t;
    return 2.0 - 96.0 * t2 + 184.0 * t2 * t - 90.0 * t2 * t2;
}

inline double d3phi(double r) {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    const double t = r - 1.0;
    return -192.0 * t + 552.0 * t * t - 360.0 * t * t * t;
}

inline double d4phi(double r) {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    const double t = r - 1.0;
    return -192.0 + 1104.0 * t - 1080.0 * t * t;
}

/// dphi(r)/r, continuous through r = 0 (limit 2).
inline double dphi_over_r(double r) {
    if (r <= 1.0) return 2.0;
    if (r >= 2.0) return 0.0;
    return dphi(r) / r;
}

/// Laplacian of phi(|y|) in N dimensions.
inline double lap_phi(double r, int dim) {
    if (r < 1e-12) return 2.0 * dim;
    return d2phi(r) + (dim - 1) * dphi(r) / r;
}

/// Bilaplacian of phi(|y|) in N dimensions; supported on the bridge.
inline double bilap_phi(double r, int dim) {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    const double n1 = dim - 1;
    return d4phi(r) + n1 * (2.0 * d3phi(r) / r +
                            (dim - 3) * (d2phi(r) / (r * r) -
                                         dphi(r) / (r * r * r)));
}

} // namespace cutoff
} // namespace fnls
