#pragma once

#include "parasource/model.hpp"
#include "parasource/regularize.hpp"
#include "parasource/spectral.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace parasource {

/// Discrete H^p norm, (sum_xi |f_hat|^2 (1 + |xi|^2)^p dxi)^(1/2), with dxi the
/// dual-lattice cell volume. At p = 0 this equals l2_norm_rect by Parseval.
double sobolev_norm(const Field& f, double p);

/// ||f_true - f_est|| / ||f_true|| in the Simpson L2 norm.
double relative_error(const Field& f_true, const Field& f_est);

/// Filter bound constant M_i, with |R_i(xi)| < M_i / mu^2 for 0 < mu < 1.
/// Requires nu > 0 (the constants are undefined for nu = 0).
double bound_constant(RegularizerKind kind, const ModelParams& params, TimeInstant t0, std::size_t dim);

struct BoundConstants {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double c = 0.0; // H^p norm of the source
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;

    double m(RegularizerKind kind) const;
    double k(RegularizerKind kind) const;
};

BoundConstants bound_constants(const ModelParams& params, TimeInstant t0, std::size_t dim, double c,
                               double delta_max);

/// (c + delta_max * m) * max{(delta/delta_max)^(2/(p+2)), (delta/delta_max)^(p/(p+2))}.
double theoretical_bound(double c, double delta, double delta_max, double m, double p);

/// Independent forward oracle: classical RK4 on u_hat' = -z u_hat + f_hat from
/// u_hat(0) = 0 to t0, one ODE per frequency mode. Each mode takes at least
/// `steps` steps and enough extra to keep |z| h <= 0.05. Test use only.
Field rk4_oracle_solve(const Field& f, TimeInstant t0, const ModelParams& params, std::size_t steps);

/// One inequality checked by the lemma suite.
struct LemmaCheck {
    std::string name;
    std::string statement;
    bool strict = true;      // "<" (true) or "<=" (false)
    std::size_t samples = 0;
    double worst_ratio = 0.0; // max over samples of lhs / rhs
    std::size_t violations = 0;
    bool skipped = false;
    std::string note;

    bool passed() const { return skipped || violations == 0; }
};

struct LemmaReport {
    std::vector<LemmaCheck> checks;

    bool passed() const;
    std::string to_text() const;
    std::string to_json() const;
};

struct LemmaSuiteOptions {
    std::size_t samples = 100000;   // dense samples per scalar lemma
    double ratio_tolerance = 1e-12; // slack for the non-strict inequalities
};

/// Evaluates the auxiliary inequalities behind the filter bounds on dense
/// samples of their domains and, for the filter bounds, at every frequency of
/// `grid`. Violations are reported, never thrown.
LemmaReport verify_lemma_suite(const ModelParams& params, TimeInstant t0, const Grid& grid,
                               const std::vector<double>& p_list, const std::vector<double>& mu_list,
                               const LemmaSuiteOptions& options = {});

} // namespace parasource
