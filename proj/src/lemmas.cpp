#include "parasource/analysis.hpp"

#include "parasource/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace parasource {

namespace {

// Accumulates lhs/rhs ratios for one inequality.
class Tally {
public:
    Tally(std::string name, std::string statement, bool strict, double tol)
        : tol_(tol)
    {
        check_.name = std::move(name);
        check_.statement = std::move(statement);
        check_.strict = strict;
    }

    void add(double lhs, double rhs)
    {
        ++check_.samples;
        const double ratio = lhs / rhs;
        if (!std::isfinite(ratio)) {
            ++check_.violations;
            check_.worst_ratio = std::numeric_limits<double>::infinity();
            return;
        }
        check_.worst_ratio = std::max(check_.worst_ratio, ratio);
        const bool bad = check_.strict ? !(lhs < rhs) : lhs > rhs * (1.0 + tol_) + tol_;
        if (bad)
            ++check_.violations;
    }

    LemmaCheck finish() { return std::move(check_); }

private:
    LemmaCheck check_;
    double tol_;
};

LemmaCheck skipped(std::string name, std::string statement, std::string why)
{
    LemmaCheck c;
    c.name = std::move(name);
    c.statement = std::move(statement);
    c.skipped = true;
    c.note = std::move(why);
    return c;
}

// Log-spaced samples on [lo, hi].
std::vector<double> log_samples(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

std::string fmt_mu(double mu)
{
    std::ostringstream os;
    os << mu;
    return os.str();
}

// x / (1 - e^{-x}) on (0,1), 1 / (1 - e^{-x}) on [1, inf).
double lemma2_fn(double x)
{
    const double d = -std::expm1(-x);
    return x < 1.0 ? x / d : 1.0 / d;
}

} // namespace

bool LemmaReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.passed(); });
}

std::string LemmaReport::to_text() const
{
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.skipped ? "[SKIP] " : (c.passed() ? "[ OK ] " : "[FAIL] ")) << std::left << std::setw(28) << c.name;
        if (c.skipped) {
            os << c.note << '\n';
            continue;
        }
        os << " samples=" << c.samples << " worst_ratio=" << std::setprecision(6) << std::scientific
           << c.worst_ratio << std::defaultfloat << " violations=" << c.violations;
        if (!c.note.empty())
            os << " (" << c.note << ')';
        os << '\n';
    }
    os << (passed() ? "all inequalities hold" : "inequality violations found") << '\n';
    return os.str();
}

std::string LemmaReport::to_json() const
{
    nlohmann::json j;
    j["passed"] = passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"statement", c.statement},
                               {"strict", c.strict},
                               {"samples", c.samples},
                               {"worst_ratio", c.worst_ratio},
                               {"violations", c.violations},
                               {"skipped", c.skipped},
                               {"note", c.note},
                               {"passed", c.passed()}});
    }
    return j.dump(2);
}

LemmaReport verify_lemma_suite(const ModelParams& params, TimeInstant t0, const Grid& grid,
                               const std::vector<double>& p_list, const std::vector<double>& mu_list,
                               const LemmaSuiteOptions& options)
{
    params.validate(grid.dim());
    for (double mu : mu_list)
        require(mu > 0.0 && mu < 1.0, "lemma suite: every mu must lie in (0, 1)");
    for (double p : p_list)
        require(std::isfinite(p) && p > 0.0, "lemma suite: every p must be positive and finite");

    const std::size_t n = std::max<std::size_t>(options.samples, 2);
    const double tol = options.ratio_tolerance;
    const double a2 = params.alpha2;
    const double nu = params.nu;
    const double t = t0.value();
    LemmaReport report;

    // |1/(1 - e^{-w})| <= 1/(1 - e^{-Re w}), Re w > 0.
    {
        Tally tally("lemma1", "|1/(1-exp(-w))| <= 1/(1-exp(-Re w))", false, tol);
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> im(-60.0, 60.0);
        for (double a : log_samples(1e-6, 50.0, n)) {
            const complex w(a, im(rng));
            tally.add(1.0 / std::abs(one_minus_exp_neg(w)), 1.0 / -std::expm1(-a));
        }
        if (nu > 0.0) {
            for_each_frequency(grid, [&](std::size_t, std::span<const double> xi) {
                const complex w = symbol_z(xi, params) * t;
                tally.add(1.0 / std::abs(one_minus_exp_neg(w)), 1.0 / -std::expm1(-w.real()));
            });
        }
        report.checks.push_back(tally.finish());
    }

    {
        Tally tally("lemma2", "x/(1-e^-x) on (0,1), 1/(1-e^-x) on [1,inf) < 2", true, tol);
        for (double x : log_samples(1e-10, 1e3, n))
            tally.add(lemma2_fn(x), 2.0);
        report.checks.push_back(tally.finish());
    }

    for (double mu : mu_list) {
        Tally tally("lemma3[mu=" + fmt_mu(mu) + "]", "x^2/((1-e^-x^2) e^(mu^2 x^2/4)) < 4/mu^2", true, tol);
        for (double x : log_samples(1e-6, 1e4, n)) {
            const double x2 = x * x;
            tally.add(x2 / (-std::expm1(-x2)) * std::exp(-0.25 * mu * mu * x2), 4.0 / (mu * mu));
        }
        report.checks.push_back(tally.finish());
    }

    {
        Tally tally("lemma4", "(1-e^-x^2)/x^2 < 1", true, tol);
        for (double x : log_samples(1e-6, 1e3, n)) {
            const double x2 = x * x;
            tally.add(-std::expm1(-x2) / x2, 1.0);
        }
        report.checks.push_back(tally.finish());
    }

    {
        Tally tally("lemma5", "x/(a x^2 + b) <= 1/(2 sqrt(ab))", false, tol);
        std::vector<std::pair<double, double>> ab = {{1.0, 1.0}, {1e-2, 1e2}, {1e2, 1e-2}, {2e-5, 1.0}};
        if (nu > 0.0)
            ab.emplace_back(a2, nu);
        const std::size_t per = std::max<std::size_t>(n / ab.size(), 2);
        for (auto [a, b] : ab) {
            const double x0 = std::sqrt(b / a);
            auto scales = log_samples(1e-4, 1e4, per);
            scales.push_back(1.0);
            for (double s : scales) {
                const double x = s * x0;
                tally.add(x / (a * x * x + b), 1.0 / (2.0 * std::sqrt(a * b)));
            }
        }
        report.checks.push_back(tally.finish());
    }

    const auto rho = log_samples(1e-6, 1e6, n);
    for (double mu : mu_list) {
        const double mu2 = mu * mu;
        Tally first("lemma6a[mu=" + fmt_mu(mu) + "]", "|rho|/(1+rho^2 mu^2) < 1/(2 mu^2)", true, tol);
        for (double r : rho)
            first.add(r / (1.0 + r * r * mu2), 0.5 / mu2);
        report.checks.push_back(first.finish());

        Tally first7("lemma7a[mu=" + fmt_mu(mu) + "]", "rho/(1+rho^4 mu^2) < 1/mu^2", true, tol);
        for (double r : rho)
            first7.add(r / (1.0 + r * r * r * r * mu2), 1.0 / mu2);
        report.checks.push_back(first7.finish());

        if (nu > 0.0) {
            Tally second("lemma6b[mu=" + fmt_mu(mu) + "]", "(a2 rho^2+nu)/(1+rho^2 mu^2) < (nu+a2)/mu^2", true, tol);
            Tally second7("lemma7b[mu=" + fmt_mu(mu) + "]", "(a2 rho^2+nu)/(1+rho^4 mu^2) < (nu+a2)/mu^2", true,
                          tol);
            second.add(nu, (nu + a2) / mu2); // rho = 0
            for (double r : rho) {
                second.add((a2 * r * r + nu) / (1.0 + r * r * mu2), (nu + a2) / mu2);
                second7.add((a2 * r * r + nu) / (1.0 + r * r * r * r * mu2), (nu + a2) / mu2);
            }
            report.checks.push_back(second.finish());
            report.checks.push_back(second7.finish());
        } else {
            report.checks.push_back(skipped("lemma6b[mu=" + fmt_mu(mu) + "]", "", "needs nu > 0"));
            report.checks.push_back(skipped("lemma7b[mu=" + fmt_mu(mu) + "]", "", "needs nu > 0"));
        }
    }

    // Directions for the dense filter samples: first axis, and beta when present.
    std::vector<std::vector<double>> directions;
    {
        std::vector<double> e1(grid.dim(), 0.0);
        e1[0] = 1.0;
        directions.push_back(e1);
        const double bnorm = std::sqrt(std::inner_product(params.beta.begin(), params.beta.end(),
                                                          params.beta.begin(), 0.0));
        if (bnorm > 0.0) {
            std::vector<double> b(params.beta);
            for (double& v : b)
                v /= bnorm;
            directions.push_back(b);
        }
    }
    const auto radii = log_samples(1e-6, 1e4, std::max<std::size_t>(n / 10, 2));

    // |R_i(xi)| < M_i / mu^2 on the grid frequencies and along the directions above.
    if (nu > 0.0) {
        for (auto kind : kAllKinds) {
            const double m = bound_constant(kind, params, t0, grid.dim());
            for (double mu : mu_list) {
                Tally tally("lemma8[" + to_string(kind) + ",mu=" + fmt_mu(mu) + "]", "|R_mu(xi)| < M/mu^2", true,
                            tol);
                const double rhs = m / (mu * mu);
                auto eval = [&](std::span<const double> xi) {
                    double xi2 = 0.0;
                    for (double v : xi)
                        xi2 += v * v;
                    tally.add(std::abs(lambda_multiplier(xi, t0, params)) * filter_ratio(kind, mu, xi2), rhs);
                };
                for_each_frequency(grid, [&](std::size_t, std::span<const double> xi) { eval(xi); });
                std::vector<double> xi(grid.dim());
                for (const auto& d : directions)
                    for (double r : radii) {
                        for (std::size_t k = 0; k < xi.size(); ++k)
                            xi[k] = r * d[k];
                        eval(xi);
                    }
                report.checks.push_back(tally.finish());
            }
        }
    } else {
        report.checks.push_back(skipped("lemma8", "|R_mu(xi)| < M/mu^2", "bound constants need nu > 0"));
    }

    // (1+|xi|^2)^(-p/2) |1 - R_i/Lambda| <= max{mu^p, mu^2}. Depends on |xi|^2 only.
    {
        std::vector<double> xi2_samples;
        xi2_samples.reserve(grid.size() + radii.size());
        for_each_frequency(grid, [&](std::size_t, std::span<const double> xi) {
            double s = 0.0;
            for (double v : xi)
                s += v * v;
            xi2_samples.push_back(s);
        });
        for (double r : radii)
            xi2_samples.push_back(r * r);
        std::sort(xi2_samples.begin(), xi2_samples.end());
        xi2_samples.erase(std::unique(xi2_samples.begin(), xi2_samples.end()), xi2_samples.end());

        for (auto kind : kAllKinds)
            for (double p : p_list)
                for (double mu : mu_list) {
                    std::ostringstream name;
                    name << "lemma9[" << to_string(kind) << ",p=" << p << ",mu=" << mu << "]";
                    Tally tally(name.str(), "(1+|xi|^2)^(-p/2)|1-R/Lambda| <= max{mu^p, mu^2}", false, tol);
                    const double rhs = std::max(std::pow(mu, p), mu * mu);
                    for (double xi2 : xi2_samples) {
                        const double lhs = std::pow(1.0 + xi2, -0.5 * p) * std::abs(1.0 - filter_ratio(kind, mu, xi2));
                        tally.add(lhs, rhs);
                    }
                    report.checks.push_back(tally.finish());
                }
    }

    return report;
}

} // namespace parasource
