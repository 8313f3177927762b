#include "parasource/experiments.hpp"

#include "parasource/analysis.hpp"
#include "parasource/error.hpp"
#include "parasource/noise.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace parasource {

namespace {

// Sources whose discrete H^p norm exceeds this are treated as outside H^p.
constexpr double kSobolevCutoff = 1e6;
// Stand-in for mu when the data carry no noise at all.
constexpr double kNoiselessMu = 1e-12;

template <class Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(stage) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(stage) + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(stage) + ": " + e.what());
    }
}

double median(std::vector<double> v)
{
    require(!v.empty(), "median of an empty list");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Quantities shared by every noise realization of one configuration.
struct Prepared {
    Field source;
    Field measurement;
    double source_norm = 0.0;
    double sobolev = 0.0;
};

Prepared prepare(const CaseConfig& cfg)
{
    cfg.validate();
    const TimeInstant t0(cfg.t0);
    Prepared p;
    p.source = staged("sample source", [&] { return sample_source(cfg.source, cfg.grid); });
    p.source_norm = l2_norm_simpson(p.source);
    require(p.source_norm > 0.0, "sample source: the source is zero on the grid");
    p.sobolev = staged("sobolev norm", [&] { return sobolev_norm(p.source, cfg.p); });
    p.measurement = staged("forward solve", [&] { return forward_solve_field(p.source, t0, cfg.params); });
    return p;
}

Field noisy_measurement(const Prepared& prep, const CaseConfig& cfg, std::uint64_t noise_seed)
{
    return staged("add noise", [&] { return add_noise(prep.measurement, NoiseSpec{cfg.epsilon, noise_seed}); });
}

CaseReport estimate_case(const Prepared& prep, const CaseConfig& cfg, const Field& noisy, double delta,
                         std::optional<double> delta_max_override, CaseFields* fields)
{
    const TimeInstant t0(cfg.t0);
    CaseReport r;
    r.epsilon = cfg.epsilon;
    r.seed = cfg.seed;
    r.p = cfg.p;
    r.delta = delta;
    r.delta_max = delta_max_override.value_or(1.0 + delta);
    r.sobolev_norm = prep.sobolev;
    r.mu = delta > 0.0 ? staged("choose mu", [&] { return choose_mu(delta, r.delta_max, cfg.p); }) : kNoiselessMu;

    std::optional<BoundConstants> constants;
    if (cfg.params.nu <= 0.0)
        r.bound_note = "bound constants are undefined for nu = 0";
    else if (delta <= 0.0)
        r.bound_note = "no noise, bound not applicable";
    else if (prep.sobolev > kSobolevCutoff)
        r.bound_note = "discrete H^p norm above 1e6, source treated as outside H^p";
    else
        constants = bound_constants(cfg.params, t0, cfg.grid.dim(), prep.sobolev, r.delta_max);

    const auto y_hat = staged("transform measurement", [&] { return dft_forward(noisy); });
    for (auto kind : cfg.kinds) {
        const RegConfig reg{kind, cfg.p, r.mu};
        auto est = staged("regularized estimate", [&] { return estimate_from_spectrum(y_hat, reg, t0, cfg.params); });
        KindResult k;
        k.kind = kind;
        k.absolute_error = l2_norm_simpson(subtract(prep.source, est));
        k.relative_error = k.absolute_error / prep.source_norm;
        if (constants)
            k.bound = theoretical_bound(prep.sobolev, delta, r.delta_max, constants->m(kind), cfg.p);
        r.kinds.push_back(k);
        if (fields)
            fields->estimates.emplace_back(kind, std::move(est));
    }

    const auto unreg = staged("unregularized estimate", [&] {
        return dft_inverse(apply_multiplier(
            y_hat, [&](std::span<const double> xi) { return lambda_multiplier(xi, t0, cfg.params); }));
    });
    r.unregularized_error = l2_norm_simpson(subtract(prep.source, unreg)) / prep.source_norm;

    if (fields) {
        fields->source = prep.source;
        fields->measurement = prep.measurement;
        fields->noisy = noisy;
    }
    return r;
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    return buf;
}

// Runs fn(i) for i in [0, n) on up to worker_count() threads.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn)
{
    const std::size_t workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace

void CaseConfig::validate() const
{
    require(grid.dim() >= 1, "case config: grid is empty");
    require(source.dim == grid.dim(), "case config: source dimension " + std::to_string(source.dim) +
                                          " does not match grid dimension " + std::to_string(grid.dim()));
    params.validate(grid.dim());
    require(std::isfinite(t0) && t0 > 0.0, "case config: t0 must be positive");
    require(std::isfinite(p) && p > 0.0, "case config: p must be positive and finite");
    require(std::isfinite(epsilon) && epsilon >= 0.0, "case config: epsilon must be non-negative");
    require(!kinds.empty(), "case config: at least one regularizer kind is required");
}

const KindResult* CaseReport::find(RegularizerKind kind) const
{
    for (const auto& k : kinds)
        if (k.kind == kind)
            return &k;
    return nullptr;
}

std::string CaseReport::to_json() const
{
    nlohmann::json j;
    j["epsilon"] = epsilon;
    j["seed"] = seed;
    j["p"] = p;
    j["delta"] = delta;
    j["delta_max"] = delta_max;
    j["mu"] = mu;
    j["sobolev_norm"] = sobolev_norm;
    j["unregularized_error"] = unregularized_error;
    nlohmann::json errors = nlohmann::json::object();
    nlohmann::json abs_errors = nlohmann::json::object();
    nlohmann::json bounds = nlohmann::json::object();
    for (const auto& k : kinds) {
        const auto key = "r" + std::to_string(kind_index(k.kind));
        errors[key] = k.relative_error;
        abs_errors[key] = k.absolute_error;
        bounds[key] = k.bound ? nlohmann::json(*k.bound) : nlohmann::json(nullptr);
    }
    j["relative_errors"] = errors;
    j["absolute_errors"] = abs_errors;
    j["bounds"] = bounds;
    j["bound_note"] = bound_note;
    j["wall_time"] = wall_time;
    return j.dump(2);
}

std::uint64_t case_seed(std::uint64_t realization_seed, std::size_t index)
{
    return derive_seed(realization_seed, index);
}

CaseReport run_case(const CaseConfig& cfg, const RunOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    const auto prep = prepare(cfg);
    const auto noisy = noisy_measurement(prep, cfg, case_seed(cfg.seed, 0));
    const double delta = noise_level(prep.measurement, noisy);
    auto report = estimate_case(prep, cfg, noisy, delta, options.delta_max, options.fields);
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

double TableRow::error(RegularizerKind kind) const
{
    for (const auto& [k, e] : errors)
        if (k == kind)
            return e;
    throw ValidationError("table row has no column for " + to_string(kind));
}

TableResult run_table(const CaseConfig& base, const std::vector<double>& epsilons,
                      const std::vector<std::uint64_t>& seeds)
{
    require(!epsilons.empty(), "run_table: empty epsilon list");
    require(!seeds.empty(), "run_table: empty seed list");
    for (double e : epsilons)
        require(std::isfinite(e) && e >= 0.0, "run_table: epsilon must be non-negative");

    const auto prep = prepare(base);
    const std::size_t ne = epsilons.size();
    const std::size_t ns = seeds.size();
    auto config_for = [&](std::size_t e, std::size_t s) {
        CaseConfig c = base;
        c.epsilon = epsilons[e];
        c.seed = seeds[s];
        return c;
    };

    // The noise level of every case first, since delta_M couples the levels of one seed.
    std::vector<double> delta(ne * ns);
    parallel_for(ne * ns, [&](std::size_t i) {
        const std::size_t s = i / ne;
        const std::size_t e = i % ne;
        const auto noisy = noisy_measurement(prep, config_for(e, s), case_seed(seeds[s], e));
        delta[i] = noise_level(prep.measurement, noisy);
    });
    std::vector<double> dmax(ns);
    for (std::size_t s = 0; s < ns; ++s)
        dmax[s] = delta_max(std::span<const double>(delta.data() + s * ne, ne));

    TableResult table;
    table.cases.assign(ne, std::vector<CaseReport>(ns));
    parallel_for(ne * ns, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        const std::size_t s = i / ne;
        const std::size_t e = i % ne;
        const auto cfg = config_for(e, s);
        const auto noisy = noisy_measurement(prep, cfg, case_seed(seeds[s], e));
        auto report = estimate_case(prep, cfg, noisy, delta[i], dmax[s], nullptr);
        report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        table.cases[e][s] = std::move(report);
    });

    for (std::size_t e = 0; e < ne; ++e) {
        const auto& runs = table.cases[e];
        auto collect = [&](auto&& get) {
            std::vector<double> v;
            v.reserve(runs.size());
            for (const auto& r : runs)
                v.push_back(get(r));
            return median(std::move(v));
        };
        TableRow row;
        row.epsilon = epsilons[e];
        row.delta = collect([](const CaseReport& r) { return r.delta; });
        row.delta_max = collect([](const CaseReport& r) { return r.delta_max; });
        row.mu = collect([](const CaseReport& r) { return r.mu; });
        row.unregularized_error = collect([](const CaseReport& r) { return r.unregularized_error; });
        for (auto kind : base.kinds) {
            row.errors.emplace_back(kind, collect([&](const CaseReport& r) { return r.find(kind)->relative_error; }));
            const bool have_bounds = std::all_of(runs.begin(), runs.end(), [&](const CaseReport& r) {
                return r.find(kind)->bound.has_value();
            });
            std::optional<double> b;
            if (have_bounds)
                b = collect([&](const CaseReport& r) { return *r.find(kind)->bound; });
            row.bounds.emplace_back(kind, b);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

TableResult run_example_table(int example, const std::vector<double>& epsilons,
                              const std::vector<std::uint64_t>& seeds)
{
    return run_table(example_case(example, epsilons.empty() ? 0.0 : epsilons.front(), 0), epsilons, seeds);
}

std::vector<FigureCase> run_figures(const CaseConfig& base, const std::vector<double>& epsilons)
{
    require(!epsilons.empty(), "run_figures: empty epsilon list");
    const auto prep = prepare(base);
    std::vector<Field> noisy;
    std::vector<double> delta;
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        CaseConfig cfg = base;
        cfg.epsilon = epsilons[e];
        noisy.push_back(noisy_measurement(prep, cfg, case_seed(base.seed, e)));
        delta.push_back(noise_level(prep.measurement, noisy.back()));
    }
    const double dmax = delta_max(delta);
    std::vector<FigureCase> out(epsilons.size());
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        const auto start = std::chrono::steady_clock::now();
        CaseConfig cfg = base;
        cfg.epsilon = epsilons[e];
        out[e].report = estimate_case(prep, cfg, noisy[e], delta[e], dmax, &out[e].fields);
        out[e].report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return out;
}

std::string TableResult::to_csv() const
{
    std::string out = "epsilon,delta,delta_max,mu";
    if (rows.empty())
        return out + '\n';
    for (const auto& [kind, e] : rows.front().errors)
        out += ",error_r" + std::to_string(kind_index(kind));
    out += ",error_unregularized";
    for (const auto& [kind, b] : rows.front().bounds)
        out += ",bound_r" + std::to_string(kind_index(kind));
    out += '\n';
    for (const auto& row : rows) {
        out += format_number(row.epsilon) + ',' + format_number(row.delta) + ',' + format_number(row.delta_max) +
               ',' + format_number(row.mu);
        for (const auto& [kind, e] : row.errors)
            out += ',' + format_number(e);
        out += ',' + format_number(row.unregularized_error);
        for (const auto& [kind, b] : row.bounds)
            out += ',' + (b ? format_number(*b) : std::string());
        out += '\n';
    }
    return out;
}

unsigned worker_count()
{
    if (const char* env = std::getenv("PARASOURCE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace parasource
