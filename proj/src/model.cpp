#include "parasource/model.hpp"

#include "parasource/error.hpp"

#include <algorithm>
#include <cmath>

namespace parasource {

namespace {

// Below this |z t| the propagator switches to its Taylor series.
constexpr double kSeriesThreshold = 1e-6;

} // namespace

void ModelParams::validate(std::size_t dim) const
{
    require(std::isfinite(alpha2) && alpha2 > 0.0, "alpha2 must be positive");
    require(std::isfinite(nu) && nu >= 0.0, "nu must be non-negative");
    require(beta.size() == dim, "beta must have one component per grid dimension");
    for (double b : beta)
        require(std::isfinite(b), "beta must be finite");
}

double ModelParams::beta_inf_norm() const
{
    double m = 0.0;
    for (double b : beta)
        m = std::max(m, std::abs(b));
    return m;
}

TimeInstant::TimeInstant(double t) : t_(t)
{
    require(std::isfinite(t) && t > 0.0, "time must be positive");
}

complex symbol_z(std::span<const double> xi, const ModelParams& params)
{
    double xi2 = 0.0;
    double bxi = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) {
        xi2 += xi[k] * xi[k];
        bxi += params.beta[k] * xi[k];
    }
    return {params.alpha2 * xi2 + params.nu, bxi};
}

complex one_minus_exp_neg(complex w)
{
    // 1 - e^{-a}(cos b - i sin b) with a = Re w, b = Im w.
    const double a = w.real();
    const double b = w.imag();
    const double s = std::sin(0.5 * b);
    const double re = -std::expm1(-a) * std::cos(b) + 2.0 * s * s;
    const double im = std::exp(-a) * std::sin(b);
    return {re, im};
}

complex propagator_of_z(complex z, double t)
{
    const complex w = z * t;
    if (std::abs(w) < kSeriesThreshold)
        return t * (1.0 - w / 2.0 + w * w / 6.0);
    return one_minus_exp_neg(w) / z;
}

complex lambda_of_z(complex z, double t0)
{
    const complex w = z * t0;
    if (std::abs(w) < kSeriesThreshold)
        return 1.0 / (t0 * (1.0 - w / 2.0 + w * w / 6.0));
    return z / one_minus_exp_neg(w);
}

complex propagator(std::span<const double> xi, TimeInstant t, const ModelParams& params)
{
    return propagator_of_z(symbol_z(xi, params), t.value());
}

complex lambda_multiplier(std::span<const double> xi, TimeInstant t0, const ModelParams& params)
{
    return lambda_of_z(symbol_z(xi, params), t0.value());
}

SpectralField forward_solve(const SpectralField& f_hat, TimeInstant t, const ModelParams& params)
{
    params.validate(f_hat.grid().dim());
    return apply_multiplier(f_hat, [&](std::span<const double> xi) { return propagator(xi, t, params); });
}

Field forward_solve_field(const Field& f, TimeInstant t, const ModelParams& params)
{
    return dft_inverse(forward_solve(dft_forward(f), t, params));
}

Field estimate_unregularized(const Field& y_delta, TimeInstant t0, const ModelParams& params)
{
    params.validate(y_delta.grid().dim());
    const auto spectrum = dft_forward(y_delta);
    return dft_inverse(
        apply_multiplier(spectrum, [&](std::span<const double> xi) { return lambda_multiplier(xi, t0, params); }));
}

} // namespace parasource
