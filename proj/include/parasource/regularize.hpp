#pragma once

#include "parasource/model.hpp"
#include "parasource/spectral.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace parasource {

/// The three spectral filter families:
///   R1 = Lambda / (1 + mu^2 |xi|^2)
///   R2 = Lambda / (1 + mu^2 |xi|^4)
///   R3 = Lambda * exp(-mu^2 |xi|^2 / 4)
enum class RegularizerKind { R1 = 1, R2 = 2, R3 = 3 };

inline constexpr std::array<RegularizerKind, 3> kAllKinds = {RegularizerKind::R1, RegularizerKind::R2,
                                                             RegularizerKind::R3};

int kind_index(RegularizerKind kind); // 1, 2 or 3
std::string to_string(RegularizerKind kind);
std::optional<RegularizerKind> parse_kind(std::string_view text);

struct RegConfig {
    RegularizerKind kind = RegularizerKind::R1;
    double p = 1.0;  // source smoothness exponent, 0 < p < inf
    double mu = 0.5; // regularization parameter, 0 < mu < 1

    void validate() const;
};

/// R_mu / Lambda, evaluated symbolically from |xi|^2.
double filter_ratio(RegularizerKind kind, double mu, double xi2);

/// R_mu(xi) for one frequency vector. Rejects mu outside (0, 1).
complex filter_gain(RegularizerKind kind, double mu, std::span<const double> xi, TimeInstant t0,
                    const ModelParams& params);

/// A-priori rule mu = (delta / delta_max)^(1/(p+2)); requires 0 < delta < delta_max.
double choose_mu(double delta, double delta_max, double p);

/// Regularized estimate F^-1[R_mu * F[y_delta]].
Field estimate_source(const Field& y_delta, const RegConfig& cfg, TimeInstant t0, const ModelParams& params);

/// Same as estimate_source but starting from an already transformed measurement.
Field estimate_from_spectrum(const SpectralField& y_hat, const RegConfig& cfg, TimeInstant t0,
                             const ModelParams& params);

} // namespace parasource
