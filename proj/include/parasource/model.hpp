#pragma once

#include "parasource/spectral.hpp"

#include <span>
#include <vector>

namespace parasource {

/// Coefficients of u_t = alpha2 * Lap(u) - beta . grad(u) - nu * u + f.
struct ModelParams {
    double alpha2 = 1.0;
    std::vector<double> beta;
    double nu = 0.0;

    /// Throws ValidationError unless alpha2 > 0, nu >= 0 and beta has `dim` entries.
    void validate(std::size_t dim) const;
    double beta_inf_norm() const;
};

/// A strictly positive time value.
class TimeInstant {
public:
    explicit TimeInstant(double t);
    double value() const { return t_; }

private:
    double t_;
};

/// z(xi) = alpha2 |xi|^2 + i beta . xi + nu.
complex symbol_z(std::span<const double> xi, const ModelParams& params);

/// 1 - exp(-w), accurate for small |w|.
complex one_minus_exp_neg(complex w);

/// (1 - exp(-z t)) / z at z = symbol_z(xi); tends to t as z -> 0.
complex propagator(std::span<const double> xi, TimeInstant t, const ModelParams& params);
complex propagator_of_z(complex z, double t);

/// Lambda(xi) = z / (1 - exp(-z t0)), the reciprocal of the propagator at t0.
complex lambda_multiplier(std::span<const double> xi, TimeInstant t0, const ModelParams& params);
complex lambda_of_z(complex z, double t0);

/// Spectrum of u(., t) for a source spectrum f_hat and zero initial data.
SpectralField forward_solve(const SpectralField& f_hat, TimeInstant t, const ModelParams& params);

/// Samples of u(., t) for a sampled source.
Field forward_solve_field(const Field& f, TimeInstant t, const ModelParams& params);

/// Direct inversion f = F^-1[Lambda * F[y_delta]] with no regularization.
Field estimate_unregularized(const Field& y_delta, TimeInstant t0, const ModelParams& params);

} // namespace parasource
