#include "parasource/regularize.hpp"

#include "parasource/error.hpp"

#include <cmath>

namespace parasource {

int kind_index(RegularizerKind kind)
{
    return static_cast<int>(kind);
}

std::string to_string(RegularizerKind kind)
{
    return "R" + std::to_string(kind_index(kind));
}

std::optional<RegularizerKind> parse_kind(std::string_view text)
{
    if (!text.empty() && (text.front() == 'R' || text.front() == 'r'))
        text.remove_prefix(1);
    if (text == "1")
        return RegularizerKind::R1;
    if (text == "2")
        return RegularizerKind::R2;
    if (text == "3")
        return RegularizerKind::R3;
    return std::nullopt;
}

void RegConfig::validate() const
{
    require(std::isfinite(p) && p > 0.0, "p must be positive and finite");
    require(std::isfinite(mu) && mu > 0.0 && mu < 1.0, "mu must lie in (0, 1)");
}

double filter_ratio(RegularizerKind kind, double mu, double xi2)
{
    const double mu2 = mu * mu;
    switch (kind) {
    case RegularizerKind::R1:
        return 1.0 / (1.0 + mu2 * xi2);
    case RegularizerKind::R2:
        return 1.0 / (1.0 + mu2 * xi2 * xi2);
    case RegularizerKind::R3:
        return std::exp(-0.25 * mu2 * xi2);
    }
    return 0.0;
}

complex filter_gain(RegularizerKind kind, double mu, std::span<const double> xi, TimeInstant t0,
                    const ModelParams& params)
{
    require(std::isfinite(mu) && mu > 0.0 && mu < 1.0, "mu must lie in (0, 1)");
    double xi2 = 0.0;
    for (double v : xi)
        xi2 += v * v;
    return lambda_multiplier(xi, t0, params) * filter_ratio(kind, mu, xi2);
}

double choose_mu(double delta, double delta_max, double p)
{
    require(std::isfinite(p) && p > 0.0, "p must be positive and finite");
    require(std::isfinite(delta) && delta > 0.0, "noise level delta must be positive");
    require(std::isfinite(delta_max) && delta < delta_max, "noise level delta must be below delta_max");
    return std::pow(delta / delta_max, 1.0 / (p + 2.0));
}

Field estimate_from_spectrum(const SpectralField& y_hat, const RegConfig& cfg, TimeInstant t0,
                             const ModelParams& params)
{
    cfg.validate();
    params.validate(y_hat.grid().dim());
    return dft_inverse(apply_multiplier(
        y_hat, [&](std::span<const double> xi) { return filter_gain(cfg.kind, cfg.mu, xi, t0, params); }));
}

Field estimate_source(const Field& y_delta, const RegConfig& cfg, TimeInstant t0, const ModelParams& params)
{
    return estimate_from_spectrum(dft_forward(y_delta), cfg, t0, params);
}

} // namespace parasource
