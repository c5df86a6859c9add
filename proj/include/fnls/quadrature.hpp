#pragma once

#include <cstddef>
#include <vector>

namespace fnls {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(std::size_t n);

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1 (Golub-Welsch).
QuadratureRule gauss_jacobi(std::size_t n, double alpha, double beta);

enum class MRuleKind {
    RationalJacobi, // v = 1/(1+m), Gauss-Jacobi((1-v)^s v^-s); default
    TanLegendre,    // m = tan^2(pi theta/2), Gauss-Legendre in theta
};

/// Nodes m_i and weights w_i such that
///   int_0^inf m^s F(m) dm  ~=  sum_i w_i F(m_i)
/// (the m^s factor is folded into the weights).
QuadratureRule resolvent_m_rule(std::size_t n, double s,
                                MRuleKind kind = MRuleKind::RationalJacobi);

} // namespace fnls
