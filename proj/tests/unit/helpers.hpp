#pragma once

#include "parasource/spectral.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

using parasource::complex;
using parasource::Field;
using parasource::Grid;

inline Field random_field(const Grid& g, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    std::vector<double> v(g.size());
    for (double& x : v)
        x = n(rng);
    return Field(g, std::move(v));
}

// Signed DFT index m for position i on an axis of n points.
inline long signed_index(std::size_t i, std::size_t n)
{
    const long m = static_cast<long>(i);
    const long nn = static_cast<long>(n);
    return m <= (nn - 1) / 2 ? m : m - nn;
}

inline std::vector<double> frequency_of(const Grid& g, std::size_t flat)
{
    const auto idx = g.unflatten(flat);
    std::vector<double> xi(g.dim());
    for (std::size_t k = 0; k < g.dim(); ++k) {
        const auto& ax = g.axis(k);
        xi[k] = 2.0 * std::numbers::pi * static_cast<double>(signed_index(idx[k], ax.points)) /
                (static_cast<double>(ax.points) * ax.spacing());
    }
    return xi;
}

// Direct O(N^2) evaluation of (prod dx)(2pi)^(-n/2) sum_x exp(-i xi.x) f(x).
inline std::vector<complex> brute_forward(const Field& f)
{
    const Grid& g = f.grid();
    const double n = static_cast<double>(g.dim());
    double w = std::pow(2.0 * std::numbers::pi, -n / 2.0);
    for (const auto& ax : g.axes())
        w *= ax.spacing();
    std::vector<complex> out(g.size());
    std::vector<double> x(g.dim());
    for (std::size_t m = 0; m < g.size(); ++m) {
        const auto xi = frequency_of(g, m);
        complex s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            g.point(j, x);
            double phase = 0.0;
            for (std::size_t k = 0; k < g.dim(); ++k)
                phase += xi[k] * x[k];
            s += std::polar(1.0, -phase) * f[j];
        }
        out[m] = w * s;
    }
    return out;
}

// Direct inverse: (prod dxi)(2pi)^(-n/2) sum_xi exp(i xi.x) F(xi).
inline std::vector<complex> brute_inverse(const Grid& g, const std::vector<complex>& spec)
{
    const double n = static_cast<double>(g.dim());
    double w = std::pow(2.0 * std::numbers::pi, -n / 2.0);
    for (const auto& ax : g.axes())
        w *= 2.0 * std::numbers::pi / (static_cast<double>(ax.points) * ax.spacing());
    std::vector<complex> out(g.size());
    std::vector<double> x(g.dim());
    for (std::size_t j = 0; j < g.size(); ++j) {
        g.point(j, x);
        complex s = 0.0;
        for (std::size_t m = 0; m < g.size(); ++m) {
            const auto xi = frequency_of(g, m);
            double phase = 0.0;
            for (std::size_t k = 0; k < g.dim(); ++k)
                phase += xi[k] * x[k];
            s += std::polar(1.0, phase) * spec[m];
        }
        out[j] = w * s;
    }
    return out;
}

inline double rel_diff(const std::vector<complex>& a, std::span<const complex> b)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(a[i]);
    }
    return std::sqrt(num / den);
}

inline double rel_diff(const Field& a, const Field& b)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += a[i] * a[i];
    }
    return std::sqrt(num / den);
}

// Adaptive Simpson quadrature on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 50)
{
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid);
            const double rm = 0.5 * (mid + hi);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
                return left + right + (left + right - whole) / 15.0;
            return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, d - 1) +
                   rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, d - 1);
        };
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

inline std::filesystem::path temp_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("parasource_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        lines.push_back(line);
    return lines;
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace testing
