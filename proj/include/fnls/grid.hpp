#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

namespace fnls {

/// Uniform periodic Cartesian grid on the box [-L, L)^N.
///
/// The per-axis wavenumbers are stored in standard FFT ordering,
/// k[i] = (pi/L) * (i < M/2 ? i : i - M), i.e. the set
/// (pi/L) * {-M/2, ..., M/2 - 1} with the single unpaired Nyquist mode.
class Grid {
public:
    Grid(int dim, std::size_t points_per_dim, double half_length);

    int dim() const { return dim_; }
    std::size_t points_per_dim() const { return m_; }
    double half_length() const { return half_length_; }
    double spacing() const { return spacing_; }
    std::size_t size() const { return size_; }

    /// Quadrature weight of the rectangle rule, h^N.
    double cell_volume() const { return cell_volume_; }

    const std::vector<double>& wavenumbers() const { return wavenumbers_; }
    const std::vector<double>& coordinates() const { return coordinates_; }

    /// Physical coordinate along one axis for a given index.
    double coord(std::size_t i) const { return coordinates_[i]; }

    /// Decompose a flat row-major index into per-axis indices.
    void unflatten(std::size_t flat, std::size_t idx[3]) const {
        idx[1] = idx[2] = 0;
        for (int d = dim_ - 1; d >= 0; --d) {
            idx[d] = flat % m_;
            flat /= m_;
        }
    }

    bool operator==(const Grid& other) const {
        return dim_ == other.dim_ && m_ == other.m_ &&
               half_length_ == other.half_length_;
    }
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    int dim_;
    std::size_t m_;
    double half_length_;
    double spacing_;
    std::size_t size_;
    double cell_volume_;
    std::vector<double> wavenumbers_;
    std::vector<double> coordinates_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validates the preconditions (dim in {1,2,3}, M a power of two >= 16,
/// L > 0) and builds the grid.  Throws std::invalid_argument otherwise.
GridPtr make_grid(int dim, std::size_t points_per_dim, double half_length);

} // namespace fnls
