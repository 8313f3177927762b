#include "parasource/spectral.hpp"

#include "parasource/error.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace parasource {

namespace {

// The FFTW planner is not re-entrant; execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

void run_fft(const Grid& grid, std::vector<complex>& data, int sign)
{
    std::vector<int> dims;
    for (const auto& ax : grid.axes())
        dims.push_back(static_cast<int>(ax.points));

    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        // FFTW_ESTIMATE leaves the arrays untouched while planning.
        plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, sign, FFTW_ESTIMATE);
    }
    if (plan == nullptr)
        throw NumericalError("FFTW failed to create a plan");
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

// exp(-i xi . a) per flat index, with a the lower corner of the box.
std::vector<complex> corner_phase(const Grid& grid, const FreqGrid& fg, double sign)
{
    const std::size_t n = grid.dim();
    std::vector<std::vector<complex>> per_axis(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = grid.axis(k).lower;
        for (double xi : fg.freqs[k])
            per_axis[k].push_back(std::polar(1.0, sign * xi * a));
    }
    std::vector<complex> out(grid.size());
    for_each_lattice_index(grid, [&](std::size_t flat, std::span<const std::size_t> idx) {
        complex ph = 1.0;
        for (std::size_t k = 0; k < n; ++k)
            ph *= per_axis[k][idx[k]];
        out[flat] = ph;
    });
    return out;
}

void check_finite(std::span<const double> v, const char* what)
{
    for (double x : v)
        if (!std::isfinite(x))
            throw ValidationError(std::string(what) + ": non-finite value");
}

} // namespace

double Axis::coordinate(std::size_t i) const
{
    if (i + 1 == points)
        return upper;
    return lower + static_cast<double>(i) * spacing();
}

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes))
{
    require(!axes_.empty() && axes_.size() <= 3, "grid: dimension must be 1, 2 or 3");
    size_ = 1;
    for (const auto& ax : axes_) {
        require(ax.points >= 3, "grid: every axis needs at least 3 points");
        require(std::isfinite(ax.lower) && std::isfinite(ax.upper) && ax.upper > ax.lower,
                "grid: axis upper bound must exceed lower bound");
        size_ *= ax.points;
    }
}

Grid Grid::cube(std::size_t dim, double lower, double upper, std::size_t points)
{
    return Grid(std::vector<Axis>(dim, Axis{lower, upper, points}));
}

double Grid::cell_volume() const
{
    double v = 1.0;
    for (const auto& ax : axes_)
        v *= ax.spacing();
    return v;
}

double Grid::box_volume() const
{
    double v = 1.0;
    for (const auto& ax : axes_)
        v *= ax.upper - ax.lower;
    return v;
}

std::vector<std::size_t> Grid::unflatten(std::size_t flat) const
{
    std::vector<std::size_t> idx(axes_.size());
    for (std::size_t k = axes_.size(); k-- > 0;) {
        idx[k] = flat % axes_[k].points;
        flat /= axes_[k].points;
    }
    return idx;
}

std::size_t Grid::flatten(std::span<const std::size_t> idx) const
{
    std::size_t flat = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k)
        flat = flat * axes_[k].points + idx[k];
    return flat;
}

void Grid::point(std::size_t flat, std::span<double> x) const
{
    for (std::size_t k = axes_.size(); k-- > 0;) {
        x[k] = axes_[k].coordinate(flat % axes_[k].points);
        flat /= axes_[k].points;
    }
}

double FreqGrid::cell_volume() const
{
    double v = 1.0;
    for (double s : steps)
        v *= s;
    return v;
}

FreqGrid freq_grid(const Grid& grid)
{
    FreqGrid fg;
    for (const auto& ax : grid.axes()) {
        const auto n = static_cast<long>(ax.points);
        const double step = 2.0 * std::numbers::pi / (static_cast<double>(n) * ax.spacing());
        std::vector<double> xi(ax.points);
        for (long m = 0; m < n; ++m) {
            const long signed_m = (m <= (n - 1) / 2) ? m : m - n;
            xi[static_cast<std::size_t>(m)] = step * static_cast<double>(signed_m);
        }
        fg.freqs.push_back(std::move(xi));
        fg.steps.push_back(step);
    }
    return fg;
}

Field::Field(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values))
{
    require(values_.size() == grid_.size(), "field: value count does not match grid");
    check_finite(values_, "field");
}

Field Field::zeros(const Grid& grid)
{
    return Field(grid, std::vector<double>(grid.size(), 0.0));
}

Field Field::sample(const Grid& grid, const std::function<double(std::span<const double>)>& fn)
{
    std::vector<double> v(grid.size());
    std::vector<double> x(grid.dim());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.point(i, x);
        v[i] = fn(x);
    }
    return Field(grid, std::move(v));
}

SpectralField::SpectralField(Grid grid, std::vector<complex> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    require(values_.size() == grid_.size(), "spectral field: value count does not match grid");
    for (const auto& c : values_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw ValidationError("spectral field: non-finite value");
}

Field subtract(const Field& a, const Field& b)
{
    return axpby(1.0, a, -1.0, b);
}

Field scale(const Field& f, double s)
{
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& x : v)
        x *= s;
    return Field(f.grid(), std::move(v));
}

Field axpby(double a, const Field& x, double b, const Field& y)
{
    require(x.grid() == y.grid(), "field arithmetic: grid mismatch");
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = a * x[i] + b * y[i];
    return Field(x.grid(), std::move(v));
}

double l2_norm_rect(const Field& f)
{
    double s = 0.0;
    for (double v : f.values())
        s += v * v;
    return std::sqrt(s * f.grid().cell_volume());
}

SpectralField dft_forward(const Field& f)
{
    const Grid& grid = f.grid();
    std::vector<complex> data(f.values().begin(), f.values().end());
    run_fft(grid, data, FFTW_FORWARD);

    const double n = static_cast<double>(grid.dim());
    const double weight = grid.cell_volume() * std::pow(2.0 * std::numbers::pi, -0.5 * n);
    const auto phase = corner_phase(grid, freq_grid(grid), -1.0);
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] *= weight * phase[i];
    return SpectralField(grid, std::move(data));
}

InverseResult dft_inverse_checked(const SpectralField& spectrum)
{
    const Grid& grid = spectrum.grid();
    const FreqGrid fg = freq_grid(grid);
    const auto phase = corner_phase(grid, fg, 1.0);

    std::vector<complex> data(spectrum.values().begin(), spectrum.values().end());
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] *= phase[i];
    run_fft(grid, data, FFTW_BACKWARD);

    const double n = static_cast<double>(grid.dim());
    const double weight = fg.cell_volume() * std::pow(2.0 * std::numbers::pi, -0.5 * n);
    std::vector<double> re(data.size());
    double imag_sq = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        re[i] = weight * data[i].real();
        const double im = weight * data[i].imag();
        imag_sq += im * im;
    }
    InverseResult out{Field(grid, std::move(re)), std::sqrt(imag_sq * grid.cell_volume())};
    return out;
}

Field dft_inverse(const SpectralField& spectrum)
{
    auto res = dft_inverse_checked(spectrum);
    const double norm = l2_norm_rect(res.field);
    if (res.imag_residue > 1e-6 * norm)
        throw NumericalError("dft_inverse: spectrum is not consistent with a real field (imaginary residue "
                             + std::to_string(res.imag_residue) + ", real norm " + std::to_string(norm) + ")");
    return std::move(res.field);
}

std::vector<complex> sample_multiplier(const Grid& grid, const Multiplier& g)
{
    const FreqGrid fg = freq_grid(grid);
    const std::size_t n = grid.dim();

    // Index of the self-mirrored Nyquist mode per axis, or npos.
    std::vector<std::size_t> nyquist(n, static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < n; ++k)
        if (grid.axis(k).points % 2 == 0)
            nyquist[k] = grid.axis(k).points / 2;

    std::vector<complex> out(grid.size());
    std::vector<double> xi(n);
    std::vector<std::size_t> nyq_axes;
    for_each_lattice_index(grid, [&](std::size_t flat, std::span<const std::size_t> idx) {
        nyq_axes.clear();
        for (std::size_t k = 0; k < n; ++k) {
            xi[k] = fg.freqs[k][idx[k]];
            if (idx[k] == nyquist[k])
                nyq_axes.push_back(k);
        }
        if (nyq_axes.empty()) {
            out[flat] = g(xi);
            return;
        }
        complex acc = 0.0;
        const std::size_t combos = std::size_t{1} << nyq_axes.size();
        for (std::size_t mask = 0; mask < combos; ++mask) {
            auto flipped = xi;
            for (std::size_t j = 0; j < nyq_axes.size(); ++j)
                if (mask & (std::size_t{1} << j))
                    flipped[nyq_axes[j]] = -flipped[nyq_axes[j]];
            acc += g(flipped);
        }
        out[flat] = acc / static_cast<double>(combos);
    });
    return out;
}

SpectralField apply_multiplier(const SpectralField& spectrum, const Multiplier& g)
{
    auto gain = sample_multiplier(spectrum.grid(), g);
    for (std::size_t i = 0; i < gain.size(); ++i)
        gain[i] *= spectrum[i];
    return SpectralField(spectrum.grid(), std::move(gain));
}

} // namespace parasource
