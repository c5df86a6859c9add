#include "fnls/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fnls {

namespace {

// Symmetric tridiagonal QL with implicit shifts, tracking only the first
// row of the eigenvector matrix (all Golub-Welsch needs): on return d holds
// the eigenvalues ascending and z[i] the first component of eigenvector i.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                std::vector<double>& z) {
    const std::size_t n = d.size();
    if (n == 0) return;
    e.push_back(0.0);
    for (std::size_t l = 0; l < n; ++l) {
        for (int iter = 0; iter < 60; ++iter) {
            std::size_t m = l;
            for (; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m == l) break;
            if (iter == 59)
                throw std::runtime_error("quadrature: QL failed to converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (r == 0.0 && m > l + 1) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // selection sort, eigenvalues ascending
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t k = i;
        for (std::size_t j = i + 1; j < n; ++j)
            if (d[j] < d[k]) k = j;
        if (k != i) {
            std::swap(d[i], d[k]);
            std::swap(z[i], z[k]);
        }
    }
}

QuadratureRule golub_welsch(std::vector<double> diag, std::vector<double> off,
                            double mu0) {
    const std::size_t n = diag.size();
    std::vector<double> z(n, 0.0);
    if (n > 0) z[0] = 1.0;
    tridiag_ql(diag, off, z);
    QuadratureRule rule;
    rule.nodes = std::move(diag);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        rule.weights[i] = mu0 * z[i] * z[i];
    return rule;
}

} // namespace

QuadratureRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("quadrature: n must be positive");
    std::vector<double> diag(n, 0.0), off(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        off[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    return golub_welsch(std::move(diag), std::move(off), 2.0);
}

QuadratureRule gauss_jacobi(std::size_t n, double alpha, double beta) {
    if (n == 0) throw std::invalid_argument("quadrature: n must be positive");
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::invalid_argument("quadrature: jacobi needs alpha,beta > -1");
    const double ab = alpha + beta;
    std::vector<double> diag(n), off(n > 0 ? n - 1 : 0);
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        diag[k] = (beta * beta - alpha * alpha) /
                  ((2.0 * kk + ab) * (2.0 * kk + ab + 2.0));
    }
    if (n > 1)
        off[0] = std::sqrt(4.0 * (1.0 + alpha) * (1.0 + beta) /
                           ((ab + 2.0) * (ab + 2.0) * (ab + 3.0)));
    for (std::size_t k = 2; k < n; ++k) {
        const double kk = static_cast<double>(k);
        off[k - 1] = std::sqrt(
            4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
            ((2.0 * kk + ab) * (2.0 * kk + ab) * (2.0 * kk + ab + 1.0) *
             (2.0 * kk + ab - 1.0)));
    }
    const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
                       std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);
    return golub_welsch(std::move(diag), std::move(off), mu0);
}

QuadratureRule resolvent_m_rule(std::size_t n, double s, MRuleKind kind) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("resolvent_m_rule: s must lie in (0,1)");
    QuadratureRule out;
    out.nodes.resize(n);
    out.weights.resize(n);
    if (kind == MRuleKind::RationalJacobi) {
        // v = 1/(1+m):  int_0^inf m^s F dm = int_0^1 (1-v)^s v^{-s} v^{-2} F dv,
        // Jacobi weight (1-x)^s (1+x)^{-s} after v = (x+1)/2.
        QuadratureRule gj = gauss_jacobi(n, s, -s);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = 0.5 * (gj.nodes[i] + 1.0);
            out.nodes[i] = (1.0 - v) / v;
            out.weights[i] = gj.weights[i] / (2.0 * v * v);
        }
    } else {
        // m = tan^2(pi theta/2) on theta in (0,1); kept as the substitution
        // the integrand is written against, endpoint singularity and all.
        QuadratureRule gl = gauss_legendre(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double theta = 0.5 * (gl.nodes[i] + 1.0);
            const double t = std::tan(0.5 * M_PI * theta);
            const double m = t * t;
            out.nodes[i] = m;
            out.weights[i] =
                0.5 * gl.weights[i] * std::pow(m, s) * M_PI * t * (1.0 + t * t);
        }
    }
    return out;
}

} // namespace fnls
