#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace parasource {

using complex = std::complex<double>;

struct Axis {
    double lower = 0.0;
    double upper = 1.0;
    std::size_t points = 3;

    double spacing() const { return (upper - lower) / static_cast<double>(points - 1); }
    double coordinate(std::size_t i) const;

    bool operator==(const Axis&) const = default;
};

/// Uniform sample lattice on an n-dimensional box (n = 1, 2, 3).
///
/// Samples include both endpoints of every axis. Storage is row-major with the
/// last axis varying fastest, which is also the layout FFTW expects.
class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<Axis> axes);

    /// Same interval and point count on every axis.
    static Grid cube(std::size_t dim, double lower, double upper, std::size_t points);

    std::size_t dim() const { return axes_.size(); }
    const Axis& axis(std::size_t k) const { return axes_.at(k); }
    const std::vector<Axis>& axes() const { return axes_; }
    std::size_t size() const { return size_; }

    /// Product of the per-axis spacings.
    double cell_volume() const;
    /// Product of the per-axis extents (b_k - a_k).
    double box_volume() const;

    /// Multi-index of a flat storage index.
    std::vector<std::size_t> unflatten(std::size_t flat) const;
    std::size_t flatten(std::span<const std::size_t> idx) const;
    /// Physical coordinates of a flat storage index, written into `x`.
    void point(std::size_t flat, std::span<double> x) const;

    bool operator==(const Grid& other) const { return axes_ == other.axes_; }

private:
    std::vector<Axis> axes_;
    std::size_t size_ = 0;
};

/// Angular frequencies of the dual lattice, standard DFT ordering per axis.
struct FreqGrid {
    std::vector<std::vector<double>> freqs;
    std::vector<double> steps; // 2*pi/(N_k*dx_k)

    std::size_t dim() const { return freqs.size(); }
    /// Product of the per-axis frequency spacings.
    double cell_volume() const;
};

FreqGrid freq_grid(const Grid& grid);

/// Visits every lattice point in storage order with its multi-index.
template <class Fn>
void for_each_lattice_index(const Grid& grid, Fn&& fn)
{
    const std::size_t n = grid.dim();
    std::array<std::size_t, 3> idx{};
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        fn(flat, std::span<const std::size_t>(idx.data(), n));
        for (std::size_t k = n; k-- > 0;) {
            if (++idx[k] < grid.axis(k).points)
                break;
            idx[k] = 0;
        }
    }
}

/// Visits every dual-lattice point with its angular frequency vector.
template <class Fn>
void for_each_frequency(const Grid& grid, Fn&& fn)
{
    const FreqGrid fg = freq_grid(grid);
    std::array<double, 3> xi{};
    for_each_lattice_index(grid, [&](std::size_t flat, std::span<const std::size_t> idx) {
        for (std::size_t k = 0; k < idx.size(); ++k)
            xi[k] = fg.freqs[k][idx[k]];
        fn(flat, std::span<const double>(xi.data(), idx.size()));
    });
}

/// Real samples on a grid. Values are validated finite on construction.
class Field {
public:
    Field() = default;
    Field(Grid grid, std::vector<double> values);
    static Field zeros(const Grid& grid);
    static Field sample(const Grid& grid, const std::function<double(std::span<const double>)>& fn);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Complex coefficients on the dual lattice of a grid.
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(Grid grid, std::vector<complex> values);

    const Grid& grid() const { return grid_; }
    std::span<const complex> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    complex operator[](std::size_t i) const { return values_[i]; }

private:
    Grid grid_;
    std::vector<complex> values_;
};

// Difference a - b on a shared grid.
Field subtract(const Field& a, const Field& b);
Field scale(const Field& f, double s);
Field axpby(double a, const Field& x, double b, const Field& y);

/// Rectangle-rule L2 norm, (dx_1...dx_n * sum |f|^2)^(1/2).
double l2_norm_rect(const Field& f);

/// Forward transform with symmetric normalization:
///   F(xi_m) = (dx_1...dx_n) (2pi)^(-n/2) sum_x exp(-i xi_m . x) f(x)
/// with x the physical sample coordinates.
SpectralField dft_forward(const Field& f);

/// Inverse of dft_forward. Returns the real part; throws NumericalError when
/// the discarded imaginary part exceeds 1e-6 of the output L2 norm.
Field dft_inverse(const SpectralField& spectrum);

struct InverseResult {
    Field field;
    double imag_residue = 0.0; // rectangle-rule L2 norm of the imaginary part
};
InverseResult dft_inverse_checked(const SpectralField& spectrum);

/// Per-mode multiplier evaluated from a frequency vector.
using Multiplier = std::function<complex(std::span<const double> xi)>;

/// Pointwise product spectrum * g(xi).
///
/// On axes with an even point count the Nyquist frequency is its own mirror;
/// there g is averaged over both signs of that component so that a multiplier
/// with g(-xi) = conj(g(xi)) maps real fields to real fields.
SpectralField apply_multiplier(const SpectralField& spectrum, const Multiplier& g);

/// Evaluates g at every dual-lattice point with the same Nyquist averaging
/// as apply_multiplier.
std::vector<complex> sample_multiplier(const Grid& grid, const Multiplier& g);

} // namespace parasource
