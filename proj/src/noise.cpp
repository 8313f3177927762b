#include "parasource/noise.hpp"

#include "parasource/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <string>

namespace parasource {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t parse_seed(std::string_view text)
{
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        base = 16;
        text.remove_prefix(2);
    }
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value, base);
    if (text.empty() || ec != std::errc() || ptr != end)
        throw ValidationError("seed: expected a decimal or 0x-hex integer, got '" + std::string(text) + "'");
    return value;
}

Field add_noise(const Field& y, const NoiseSpec& spec)
{
    require(std::isfinite(spec.epsilon) && spec.epsilon >= 0.0, "noise epsilon must be non-negative");
    if (spec.epsilon == 0.0)
        return y;
    std::mt19937_64 rng(splitmix64(spec.seed));
    std::normal_distribution<double> eta(0.0, spec.epsilon);
    std::vector<double> v(y.values().begin(), y.values().end());
    for (double& x : v)
        x += eta(rng);
    return Field(y.grid(), std::move(v));
}

std::vector<double> simpson_weights(std::size_t points, double h)
{
    require(points >= 3, "Simpson rule needs at least 3 points per axis");
    std::vector<double> w(points, 0.0);
    // Simpson covers an even number of intervals; an odd leftover gets a trapezoid.
    const std::size_t simpson_points = (points % 2 == 1) ? points : points - 1;
    for (std::size_t i = 0; i < simpson_points; ++i) {
        if (i == 0 || i + 1 == simpson_points)
            w[i] = h / 3.0;
        else
            w[i] = (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
    }
    if (simpson_points != points) {
        w[points - 2] += 0.5 * h;
        w[points - 1] += 0.5 * h;
    }
    return w;
}

double l2_norm_simpson(const Field& f)
{
    const Grid& grid = f.grid();
    const std::size_t n = grid.dim();
    std::vector<std::vector<double>> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = simpson_weights(grid.axis(k).points, grid.axis(k).spacing());

    // Contract the last axis first; rows are contiguous in storage.
    const std::size_t inner = grid.axis(n - 1).points;
    const std::size_t outer = grid.size() / inner;
    std::vector<double> partial(outer, 0.0);
    for (std::size_t r = 0; r < outer; ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < inner; ++i) {
            const double v = f[r * inner + i];
            s += w[n - 1][i] * v * v;
        }
        partial[r] = s;
    }
    for (std::size_t k = n - 1; k-- > 0;) {
        const std::size_t len = grid.axis(k).points;
        const std::size_t rows = partial.size() / len;
        std::vector<double> next(rows, 0.0);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t i = 0; i < len; ++i)
                next[r] += w[k][i] * partial[r * len + i];
        partial = std::move(next);
    }
    return std::sqrt(std::max(0.0, partial.front()));
}

double noise_level(const Field& y, const Field& y_delta)
{
    require(y.grid() == y_delta.grid(), "noise_level: grid mismatch");
    return l2_norm_simpson(subtract(y, y_delta));
}

double delta_max(std::span<const double> deltas)
{
    require(!deltas.empty(), "delta_max: empty list of noise levels");
    double m = 0.0;
    for (double d : deltas) {
        require(std::isfinite(d) && d >= 0.0, "delta_max: noise levels must be non-negative");
        m = std::max(m, d);
    }
    return 1.0 + m;
}

} // namespace parasource
