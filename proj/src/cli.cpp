#include "parasource/cli.hpp"

#include "parasource/analysis.hpp"
#include "parasource/error.hpp"
#include "parasource/experiments.hpp"
#include "parasource/noise.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>

namespace parasource {

namespace {

namespace fs = std::filesystem;

// Options shared by the pipeline subcommands.
struct CaseOptions {
    int example = 0;
    std::string config;
    std::optional<double> epsilon;
    std::string seed;
    std::optional<double> p;
    std::optional<double> t0;
    std::vector<std::string> kinds;
    std::string out = "results";
};

void add_case_options(CLI::App* cmd, CaseOptions& o, bool with_epsilon)
{
    auto* ex = cmd->add_option("--example", o.example, "Example id (1-6)")->check(CLI::Range(1, 6));
    cmd->add_option("--config", o.config, "JSON case description")->check(CLI::ExistingFile)->excludes(ex);
    if (with_epsilon)
        cmd->add_option("--epsilon", o.epsilon, "Noise standard deviation")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", o.seed, "Seed, decimal or 0x-hex");
    cmd->add_option("--p", o.p, "Smoothness exponent")->check(CLI::PositiveNumber);
    cmd->add_option("--t0", o.t0, "Measurement time")->check(CLI::PositiveNumber);
    cmd->add_option("--kind", o.kinds, "Regularizer 1, 2 or 3 (repeatable)");
    cmd->add_option("--out", o.out, "Output directory");
}

std::vector<RegularizerKind> parse_kinds(const std::vector<std::string>& texts)
{
    std::vector<RegularizerKind> out;
    for (const auto& t : texts) {
        const auto k = parse_kind(t);
        if (!k)
            throw ValidationError("--kind: unknown regularizer '" + t + "' (expected 1, 2 or 3)");
        if (std::find(out.begin(), out.end(), *k) == out.end())
            out.push_back(*k);
    }
    return out;
}

// Resolves --example/--config plus overrides into a validated configuration.
CaseConfig resolve_case(const CaseOptions& o)
{
    CaseConfig cfg;
    if (!o.config.empty())
        cfg = load_custom_config(o.config);
    else if (o.example != 0)
        cfg = example_case(o.example, 0.0, 0);
    else
        throw ValidationError("--example: one of --example or --config is required");
    if (o.epsilon)
        cfg.epsilon = *o.epsilon;
    if (!o.seed.empty()) {
        try {
            cfg.seed = parse_seed(o.seed);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("--seed: ") + e.what());
        }
    }
    if (o.p)
        cfg.p = *o.p;
    if (o.t0)
        cfg.t0 = *o.t0;
    if (!o.kinds.empty())
        cfg.kinds = parse_kinds(o.kinds);
    cfg.validate();
    return cfg;
}

std::string label(const CaseOptions& o)
{
    return o.example != 0 ? "ex" + std::to_string(o.example) : "custom";
}

std::string eps_tag(double eps)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps);
    return buf;
}

int cmd_forward(const CaseOptions& o, std::ostream& out)
{
    const auto cfg = resolve_case(o);
    const auto f = sample_source(cfg.source, cfg.grid);
    const auto y = forward_solve_field(f, TimeInstant(cfg.t0), cfg.params);
    const fs::path dir(o.out);
    for (const auto& path : export_field(f, dir / (label(o) + "_source")))
        out << "wrote " << path.string() << '\n';
    for (const auto& path : export_field(y, dir / (label(o) + "_forward")))
        out << "wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_estimate(const CaseOptions& o, std::ostream& out)
{
    auto cfg = resolve_case(o);
    if (!o.epsilon && o.config.empty())
        cfg.epsilon = example_defaults(o.example).figure_epsilons.front();
    CaseFields fields;
    RunOptions run;
    run.fields = &fields;
    const auto report = run_case(cfg, run);
    const fs::path dir(o.out);
    for (const auto& [kind, est] : fields.estimates)
        for (const auto& path : export_field(est, dir / (label(o) + "_estimate_r" + std::to_string(kind_index(kind)))))
            out << "wrote " << path.string() << '\n';
    const auto json_path = dir / (label(o) + "_report.json");
    write_text_file(json_path, report.to_json() + "\n");
    out << "wrote " << json_path.string() << '\n';
    for (const auto& k : report.kinds)
        out << to_string(k.kind) << " relative error " << k.relative_error << '\n';
    out << "unregularized relative error " << report.unregularized_error << '\n';
    return kExitOk;
}

int cmd_table(const CaseOptions& o, std::vector<double> epsilons, std::size_t seed_count, std::ostream& out)
{
    const auto cfg = resolve_case(o);
    if (epsilons.empty())
        epsilons = example_defaults(o.example != 0 ? o.example : 1).table_epsilons;
    std::vector<std::uint64_t> seeds(seed_count);
    for (std::size_t i = 0; i < seed_count; ++i)
        seeds[i] = cfg.seed + i;
    const auto table = run_table(cfg, epsilons, seeds);
    const auto path = fs::path(o.out) / (o.example != 0 ? "table" + std::to_string(o.example) + ".csv"
                                                        : "table_custom.csv");
    write_text_file(path, table.to_csv());
    out << table.to_csv() << "wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_figures(const CaseOptions& o, std::vector<double> epsilons, std::ostream& out)
{
    const auto cfg = resolve_case(o);
    if (epsilons.empty()) {
        if (o.example == 0)
            throw ValidationError("--epsilon: required with --config");
        epsilons = example_defaults(o.example).figure_epsilons;
    }
    const auto cases = run_figures(cfg, epsilons);
    const fs::path dir(o.out);
    const std::string stem = "fig_" + label(o);
    std::vector<fs::path> written = export_field(cases.front().fields.source, dir / (stem + "_source"));
    for (const auto& c : cases) {
        const std::string tag = stem + "_eps" + eps_tag(c.report.epsilon);
        for (const auto& p : export_field(c.fields.noisy, dir / (tag + "_measurement")))
            written.push_back(p);
        for (const auto& [kind, est] : c.fields.estimates)
            for (const auto& p : export_field(est, dir / (tag + "_r" + std::to_string(kind_index(kind)))))
                written.push_back(p);
        write_text_file(dir / (tag + "_report.json"), c.report.to_json() + "\n");
        written.push_back(dir / (tag + "_report.json"));
    }
    for (const auto& p : written)
        out << "wrote " << p.string() << '\n';
    return kExitOk;
}

// Smooth periodic test source built from a few low modes of the grid.
Field band_limited_source(const Grid& grid, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const Axis& ax = grid.axis(0);
    const double len = static_cast<double>(ax.points) * ax.spacing();
    std::vector<double> a(9), b(9);
    for (std::size_t m = 0; m < a.size(); ++m) {
        a[m] = coef(rng);
        b[m] = coef(rng);
    }
    return Field::sample(grid, [&](std::span<const double> x) {
        double v = 0.0;
        for (std::size_t m = 0; m < a.size(); ++m) {
            const double w = 2.0 * std::numbers::pi * static_cast<double>(m) * (x[0] - ax.lower) / len;
            v += a[m] * std::cos(w) + b[m] * std::sin(w);
        }
        return v;
    });
}

struct NamedCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double limit = 0.0;
};

int cmd_verify(std::size_t samples, const std::string& json_path, std::ostream& out)
{
    nlohmann::json summary;
    bool ok = true;
    const std::vector<double> p_list = {0.6, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> mu_list = {0.9, 0.5, 0.1, 0.01};
    LemmaSuiteOptions opts;
    opts.samples = samples;

    for (int ex = 1; ex <= 6; ++ex) {
        const auto d = example_defaults(ex);
        const auto report = verify_lemma_suite(d.params, TimeInstant(d.t0), d.grid, p_list, mu_list, opts);
        std::size_t failed = 0;
        for (const auto& c : report.checks)
            if (!c.passed()) {
                ++failed;
                out << "example " << ex << ": " << c.name << " violated " << c.violations
                    << " times, worst ratio " << c.worst_ratio << '\n';
            }
        out << "lemma suite, example " << ex << ": " << report.checks.size() << " checks, " << failed
            << " failed\n";
        ok = ok && report.passed();
        summary["lemmas"]["example" + std::to_string(ex)] = nlohmann::json::parse(report.to_json());
    }

    std::vector<NamedCheck> checks;
    const std::vector<Grid> grids = {Grid::cube(1, -3.0, 2.0, 257), Grid({{-1.0, 1.0, 64}, {0.0, 3.0, 65}}),
                                     Grid({{-1.0, 1.0, 17}, {-2.0, 0.5, 16}, {0.0, 1.0, 15}})};
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> normal;
    for (const auto& g : grids) {
        std::vector<double> v(g.size());
        for (double& x : v)
            x = normal(rng);
        const Field f(g, std::move(v));
        const double err = l2_norm_rect(subtract(f, dft_inverse(dft_forward(f)))) / l2_norm_rect(f);
        checks.push_back({"fft round trip " + std::to_string(g.dim()) + "-d", err <= 1e-12, err, 1e-12});
    }

    for (int ex = 1; ex <= 6; ++ex) {
        const auto d = example_defaults(ex);
        const Grid g = Grid::cube(1, d.grid.axis(0).lower, d.grid.axis(0).upper, 257);
        const ModelParams params{d.params.alpha2, {d.params.beta.front()}, d.params.nu};
        const auto f = band_limited_source(g, derive_seed(99, static_cast<std::uint64_t>(ex)));
        const TimeInstant t0(d.t0);
        const auto fast = forward_solve_field(f, t0, params);
        const auto slow = rk4_oracle_solve(f, t0, params, 2000);
        const double err = l2_norm_rect(subtract(fast, slow)) / l2_norm_rect(slow);
        checks.push_back({"forward vs rk4, example " + std::to_string(ex) + " parameters", err <= 1e-6, err, 1e-6});
    }

    for (const auto& c : checks) {
        out << (c.passed ? "[ OK ] " : "[FAIL] ") << c.name << ": " << c.value << " (limit " << c.limit << ")\n";
        ok = ok && c.passed;
        summary["checks"].push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"passed", c.passed}});
    }
    summary["passed"] = ok;
    if (!json_path.empty())
        write_text_file(json_path, summary.dump(2) + "\n");
    out << (ok ? "verification passed" : "verification FAILED") << '\n';
    return ok ? kExitOk : kExitCheckFailed;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Source identification for the advection-diffusion-reaction equation", "parasource"};
    app.require_subcommand(1);

    CaseOptions forward_o, estimate_o, table_o, figures_o;
    auto* forward = app.add_subcommand("forward", "Sample a source and solve the forward problem");
    add_case_options(forward, forward_o, false);

    auto* estimate = app.add_subcommand("estimate", "Run one noisy case and write estimates plus a JSON report");
    add_case_options(estimate, estimate_o, true);

    std::vector<double> table_eps;
    std::size_t seed_count = 10;
    auto* table = app.add_subcommand("table", "Median relative errors over seeds for a list of noise levels");
    add_case_options(table, table_o, false);
    table->add_option("--epsilon", table_eps, "Noise level (repeatable)")->check(CLI::NonNegativeNumber);
    table->add_option("--seeds", seed_count, "Number of noise realizations")->check(CLI::Range(1, 100000));

    std::vector<double> fig_eps;
    auto* figures = app.add_subcommand("figures", "Export source, measurement and estimates for plotting");
    add_case_options(figures, figures_o, false);
    figures->add_option("--epsilon", fig_eps, "Noise level (repeatable)")->check(CLI::NonNegativeNumber);

    std::size_t samples = 100000;
    std::string verify_json;
    auto* verify = app.add_subcommand("verify", "Check the filter inequalities, FFT round trip and forward oracle");
    verify->add_option("--samples", samples, "Dense samples per scalar inequality")->check(CLI::Range(2, 100000000));
    verify->add_option("--json", verify_json, "Also write the report as JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*forward)
            return cmd_forward(forward_o, out);
        if (*estimate)
            return cmd_estimate(estimate_o, out);
        if (*table)
            return cmd_table(table_o, table_eps, seed_count, out);
        if (*figures)
            return cmd_figures(figures_o, fig_eps, out);
        if (*verify)
            return cmd_verify(samples, verify_json, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}

} // namespace parasource
