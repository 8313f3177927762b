#include "parasource/experiments.hpp"

#include "parasource/error.hpp"

#include <cmath>
#include <numbers>

namespace parasource {

namespace {

bool inside(const AffinePiece& piece, std::span<const double> x)
{
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] < piece.lower[k])
            return false;
        if (piece.closed_upper ? x[k] > piece.upper[k] : x[k] >= piece.upper[k])
            return false;
    }
    return true;
}

double ex1(double x)
{
    if (x < -10.0 || x > 10.0)
        return 0.0;
    if (x < -5.0)
        return -1.0;
    if (x < 0.0)
        return 1.0;
    if (x < 5.0)
        return -1.0;
    return 1.0;
}

double ex2(double x)
{
    if (x < -10.0 || x > 10.0)
        return 0.0;
    return (-x * x * x / 4.0 + 1.5 * x) * std::exp(-x * x / 4.0);
}

double ex3(double x)
{
    if (x >= -1.0 && x < 0.0)
        return x + 1.0;
    if (x >= 0.0 && x <= 1.0)
        return -x + 1.0;
    return 0.0;
}

double ex4(double x, double y)
{
    if (std::abs(x) > 40.0 || std::abs(y) > 40.0)
        return 0.0;
    return std::cos(x / 20.0) * std::cos(y / 20.0);
}

double ex5(double x, double y)
{
    if (x >= -10.0 && x <= 0.0) {
        if (y >= 0.0 && y <= 10.0 + x)
            return 10.0 + x - y;
        if (y >= -10.0 - x && y <= 0.0)
            return 10.0 + x + y;
    }
    if (x >= 0.0 && x <= 10.0) {
        if (y >= 0.0 && y <= 10.0 - x)
            return 10.0 - x - y;
        if (y >= -10.0 + x && y <= 0.0)
            return 10.0 - x + y;
    }
    return 0.0;
}

double ex6(double x, double y, double z)
{
    const double l = 2.0 * std::numbers::pi;
    if (std::abs(x) > l || std::abs(y) > l || std::abs(z) > l)
        return 0.0;
    return std::sin((x + y + z) / 20.0);
}

} // namespace

SourceSpec example_source(int example)
{
    require(example >= 1 && example <= 6, "example id must be between 1 and 6");
    SourceSpec s;
    s.id = static_cast<SourceId>(example);
    s.dim = example <= 3 ? 1 : (example <= 5 ? 2 : 3);
    return s;
}

double source_value(const SourceSpec& spec, std::span<const double> x)
{
    require(x.size() == spec.dim, "source_value: point dimension does not match the source");
    switch (spec.id) {
    case SourceId::Ex1:
        return ex1(x[0]);
    case SourceId::Ex2:
        return ex2(x[0]);
    case SourceId::Ex3:
        return ex3(x[0]);
    case SourceId::Ex4:
        return ex4(x[0], x[1]);
    case SourceId::Ex5:
        return ex5(x[0], x[1]);
    case SourceId::Ex6:
        return ex6(x[0], x[1], x[2]);
    case SourceId::Custom:
        break;
    }
    require(!spec.samples, "source_value: a sampled source has no pointwise evaluation");
    for (const auto& piece : spec.pieces) {
        if (!inside(piece, x))
            continue;
        double v = piece.constant;
        for (std::size_t k = 0; k < x.size() && k < piece.slope.size(); ++k)
            v += piece.slope[k] * x[k];
        return v;
    }
    return 0.0;
}

Field sample_source(const SourceSpec& spec, const Grid& grid)
{
    require(grid.dim() == spec.dim, "source dimension " + std::to_string(spec.dim) +
                                        " does not match grid dimension " + std::to_string(grid.dim()));
    if (spec.samples) {
        require(spec.samples->grid() == grid, "sampled source lives on a different grid");
        return *spec.samples;
    }
    return Field::sample(grid, [&](std::span<const double> x) { return source_value(spec, x); });
}

ExampleDefaults example_defaults(int example)
{
    require(example >= 1 && example <= 6, "example id must be between 1 and 6");
    const std::vector<double> table_eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    ExampleDefaults d;
    d.example = example;
    d.table_epsilons = table_eps;
    const double two_pi = 2.0 * std::numbers::pi;
    switch (example) {
    case 1:
        d.params = {2e-5, {1e-5}, 1.0};
        d.t0 = 5.0;
        d.grid = Grid::cube(1, -10.0, 10.0, 1001);
        d.p = 1.0;
        d.figure_epsilons = {0.2, 0.15, 0.1, 0.05};
        break;
    case 2:
        d.params = {1.0, {0.0}, 0.0};
        d.t0 = 0.1;
        d.grid = Grid::cube(1, -10.0, 10.0, 1001);
        d.p = 2.0;
        d.figure_epsilons = {0.01, 0.007, 0.003, 0.001};
        break;
    case 3:
        d.params = {2.0, {0.0}, 1.0};
        d.t0 = 0.2;
        d.grid = Grid::cube(1, -2.0, 2.0, 1001);
        d.p = 4.0;
        d.figure_epsilons = {0.004, 0.003, 0.002, 0.0001};
        break;
    case 4:
        d.params = {0.2, {0.0, 0.0}, 0.99};
        d.t0 = 1.0;
        d.grid = Grid::cube(2, -40.0, 40.0, 1001);
        d.p = 1.0;
        d.figure_epsilons = {0.025};
        break;
    case 5:
        d.params = {1.0, {0.0, 0.0}, 1.0};
        d.t0 = 0.4;
        d.grid = Grid::cube(2, -10.0, 10.0, 1001);
        d.p = 0.6;
        d.figure_epsilons = {0.05};
        break;
    default:
        d.params = {0.4, {1.0, -0.5, -0.5}, 0.997};
        d.t0 = 3.0;
        d.grid = Grid::cube(3, -two_pi, two_pi, 129);
        d.p = 3.0;
        d.figure_epsilons = {0.035};
        break;
    }
    return d;
}

CaseConfig example_case(int example, double epsilon, std::uint64_t seed)
{
    const auto d = example_defaults(example);
    CaseConfig cfg;
    cfg.source = example_source(example);
    cfg.params = d.params;
    cfg.t0 = d.t0;
    cfg.grid = d.grid;
    cfg.p = d.p;
    cfg.epsilon = epsilon;
    cfg.seed = seed;
    return cfg;
}

} // namespace parasource
