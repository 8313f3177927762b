#include "parasource/analysis.hpp"

#include "parasource/error.hpp"
#include "parasource/noise.hpp"

#include <algorithm>
#include <cmath>

namespace parasource {

double sobolev_norm(const Field& f, double p)
{
    require(std::isfinite(p) && p >= 0.0, "sobolev_norm: p must be non-negative");
    const auto spectrum = dft_forward(f);
    const auto weights = sample_multiplier(f.grid(), [p](std::span<const double> xi) {
        double xi2 = 0.0;
        for (double v : xi)
            xi2 += v * v;
        return complex(std::pow(1.0 + xi2, p), 0.0);
    });
    double s = 0.0;
    for (std::size_t i = 0; i < spectrum.size(); ++i)
        s += std::norm(spectrum[i]) * weights[i].real();
    return std::sqrt(s * freq_grid(f.grid()).cell_volume());
}

double relative_error(const Field& f_true, const Field& f_est)
{
    require(f_true.grid() == f_est.grid(), "relative_error: grid mismatch");
    const double denom = l2_norm_simpson(f_true);
    require(denom > 0.0, "relative_error: reference field has zero norm");
    return l2_norm_simpson(subtract(f_true, f_est)) / denom;
}

double bound_constant(RegularizerKind kind, const ModelParams& params, TimeInstant t0, std::size_t dim)
{
    require(params.alpha2 > 0.0, "bound constants need alpha2 > 0");
    require(params.nu > 0.0, "bound constants are undefined for nu = 0 (no reaction term)");
    const double a2 = params.alpha2;
    const double nu = params.nu;
    const double t = t0.value();
    const double adv = std::sqrt(static_cast<double>(dim)) * params.beta_inf_norm();

    switch (kind) {
    case RegularizerKind::R1:
        return std::max(2.0 * nu + 2.0 * a2 + adv, 2.0 / t + adv / (nu * t));
    case RegularizerKind::R2:
        return std::max(2.0 * nu + 2.0 * a2 + 2.0 * adv, 2.0 / t + 2.0 * adv / (nu * t));
    case RegularizerKind::R3: {
        const double g = std::sqrt(a2 * nu);
        return std::max((a2 + nu) * (8.0 + 4.0 * adv / g), 8.0 / t + 4.0 * adv / (t * g));
    }
    }
    return 0.0;
}

double BoundConstants::m(RegularizerKind kind) const
{
    switch (kind) {
    case RegularizerKind::R1:
        return m1;
    case RegularizerKind::R2:
        return m2;
    case RegularizerKind::R3:
        return m3;
    }
    return 0.0;
}

double BoundConstants::k(RegularizerKind kind) const
{
    switch (kind) {
    case RegularizerKind::R1:
        return k1;
    case RegularizerKind::R2:
        return k2;
    case RegularizerKind::R3:
        return k3;
    }
    return 0.0;
}

BoundConstants bound_constants(const ModelParams& params, TimeInstant t0, std::size_t dim, double c,
                               double delta_max)
{
    BoundConstants b;
    b.m1 = bound_constant(RegularizerKind::R1, params, t0, dim);
    b.m2 = bound_constant(RegularizerKind::R2, params, t0, dim);
    b.m3 = bound_constant(RegularizerKind::R3, params, t0, dim);
    b.c = c;
    b.k1 = c + delta_max * b.m1;
    b.k2 = c + delta_max * b.m2;
    b.k3 = c + delta_max * b.m3;
    return b;
}

double theoretical_bound(double c, double delta, double delta_max, double m, double p)
{
    require(std::isfinite(p) && p > 0.0, "p must be positive and finite");
    require(delta > 0.0 && delta < delta_max, "theoretical_bound needs 0 < delta < delta_max");
    const double r = delta / delta_max;
    const double holder = std::max(std::pow(r, 2.0 / (p + 2.0)), std::pow(r, p / (p + 2.0)));
    return (c + delta_max * m) * holder;
}

Field rk4_oracle_solve(const Field& f, TimeInstant t0, const ModelParams& params, std::size_t steps)
{
    require(steps >= 100, "rk4_oracle_solve: at least 100 steps required");
    params.validate(f.grid().dim());
    const auto f_hat = dft_forward(f);
    const auto z = sample_multiplier(f.grid(), [&](std::span<const double> xi) { return symbol_z(xi, params); });
    const double t = t0.value();

    std::vector<complex> u(f_hat.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const complex zi = z[i];
        const complex src = f_hat[i];
        const auto stiff = static_cast<std::size_t>(std::ceil(std::abs(zi) * t / 0.05));
        const std::size_t n = std::max(steps, stiff);
        const double h = t / static_cast<double>(n);
        auto rhs = [&](complex v) { return -zi * v + src; };
        complex v = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            const complex k1 = rhs(v);
            const complex k2 = rhs(v + 0.5 * h * k1);
            const complex k3 = rhs(v + 0.5 * h * k2);
            const complex k4 = rhs(v + h * k3);
            v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        u[i] = v;
    }
    return dft_inverse(SpectralField(f.grid(), std::move(u)));
}

} // namespace parasource
