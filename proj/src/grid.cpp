#include "fnls/grid.hpp"

#include <cmath>
#include <limits>

namespace fnls {

namespace {
bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}

Grid::Grid(int dim, std::size_t points_per_dim, double half_length)
    : dim_(dim), m_(points_per_dim), half_length_(half_length) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("grid: dim must be 1, 2 or 3");
    if (!is_power_of_two(m_) || m_ < 16)
        throw std::invalid_argument(
            "grid: points_per_dim must be a power of two >= 16");
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw std::invalid_argument("grid: half_length must be positive");

    // h = 2L/M is exact in binary floating point (division by a power of two),
    // so h * M == 2L holds exactly.
    spacing_ = 2.0 * half_length_ / static_cast<double>(m_);

    size_ = 1;
    for (int d = 0; d < dim_; ++d) {
        if (size_ > std::numeric_limits<std::size_t>::max() / m_)
            throw std::invalid_argument("grid: total point count overflows");
        size_ *= m_;
    }

    cell_volume_ = 1.0;
    for (int d = 0; d < dim_; ++d) cell_volume_ *= spacing_;

    const double dk = M_PI / half_length_;
    wavenumbers_.resize(m_);
    coordinates_.resize(m_);
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(m_ / 2);
    for (std::size_t i = 0; i < m_; ++i) {
        const std::ptrdiff_t si = static_cast<std::ptrdiff_t>(i);
        wavenumbers_[i] = dk * static_cast<double>(si < half ? si : si - static_cast<std::ptrdiff_t>(m_));
        coordinates_[i] = spacing_ * static_cast<double>(si - half);
    }
}

GridPtr make_grid(int dim, std::size_t points_per_dim, double half_length) {
    return std::make_shared<const Grid>(dim, points_per_dim, half_length);
}

} // namespace fnls
