#pragma once

#include "parasource/spectral.hpp"

#include <cstdint>
#include <span>
#include <string_view>

namespace parasource {

struct NoiseSpec {
    double epsilon = 0.0; // standard deviation of the additive Gaussian noise
    std::uint64_t seed = 0;
};

/// Mixes a master seed with a case index into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Parses a decimal or 0x-prefixed hexadecimal seed.
std::uint64_t parse_seed(std::string_view text);

/// y + eta, eta_i ~ N(0, epsilon^2) i.i.d., reproducible from spec.seed.
Field add_noise(const Field& y, const NoiseSpec& spec);

/// Composite Simpson weights for one axis (trapezoid on the last interval when
/// the point count is even).
std::vector<double> simpson_weights(std::size_t points, double h);

/// Tensorized composite-Simpson approximation of (integral |f|^2)^(1/2).
double l2_norm_simpson(const Field& f);

/// delta = Simpson L2 norm of y - y_delta.
double noise_level(const Field& y, const Field& y_delta);

/// delta_M = 1 + max(deltas).
double delta_max(std::span<const double> deltas);

} // namespace parasource
