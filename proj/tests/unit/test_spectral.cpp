#include "doctest.h"

#include "helpers.hpp"

#include "parasource/error.hpp"
#include "parasource/spectral.hpp"

#include <limits>

using namespace parasource;
using namespace testing;

TEST_CASE("grid rejects degenerate axes")
{
    CHECK_THROWS_AS(Grid({{0.0, 1.0, 2}}), ValidationError);
    CHECK_THROWS_AS(Grid({{1.0, 1.0, 5}}), ValidationError);
    CHECK_THROWS_AS(Grid({{2.0, 1.0, 5}}), ValidationError);
    CHECK_THROWS_AS(Grid(std::vector<Axis>{}), ValidationError);
    CHECK_THROWS_AS(Grid::cube(4, 0.0, 1.0, 3), ValidationError);
}

TEST_CASE("grid geometry")
{
    const Grid g({{-1.0, 1.0, 5}, {0.0, 3.0, 4}});
    CHECK(g.size() == 20);
    CHECK(g.axis(0).spacing() == doctest::Approx(0.5));
    CHECK(g.axis(1).spacing() == doctest::Approx(1.0));
    CHECK(g.cell_volume() == doctest::Approx(0.5));
    CHECK(g.box_volume() == doctest::Approx(6.0));
    CHECK(g.axis(0).coordinate(4) == 1.0);
    const auto idx = g.unflatten(13);
    CHECK(idx[0] == 3);
    CHECK(idx[1] == 1);
    CHECK(g.flatten(idx) == 13);
    std::vector<double> x(2);
    g.point(13, x);
    CHECK(x[0] == doctest::Approx(0.5));
    CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("frequency lattice in standard DFT order")
{
    const double pi = std::numbers::pi;
    auto fg = freq_grid(Grid::cube(1, 0.0, 3.0, 4));
    REQUIRE(fg.freqs[0].size() == 4);
    CHECK(fg.freqs[0][0] == 0.0);
    CHECK(fg.freqs[0][1] == doctest::Approx(pi / 2));
    CHECK(fg.freqs[0][2] == doctest::Approx(-pi));
    CHECK(fg.freqs[0][3] == doctest::Approx(-pi / 2));

    fg = freq_grid(Grid::cube(1, 0.0, 2.0, 3));
    CHECK(fg.freqs[0][0] == 0.0);
    CHECK(fg.freqs[0][1] == doctest::Approx(2 * pi / 3));
    CHECK(fg.freqs[0][2] == doctest::Approx(-2 * pi / 3));

    fg = freq_grid(Grid({{-3.0, 2.0, 7}, {0.0, 1.0, 10}, {5.0, 9.0, 3}}));
    for (const auto& axis : fg.freqs)
        CHECK(axis[0] == 0.0);
    CHECK(fg.cell_volume() == doctest::Approx(fg.steps[0] * fg.steps[1] * fg.steps[2]));
}

TEST_CASE("field rejects non-finite values and size mismatch")
{
    const Grid g = Grid::cube(1, 0.0, 1.0, 3);
    CHECK_THROWS_AS(Field(g, {0.0, std::numeric_limits<double>::quiet_NaN(), 1.0}), ValidationError);
    CHECK_THROWS_AS(Field(g, {0.0, std::numeric_limits<double>::infinity(), 1.0}), ValidationError);
    CHECK_THROWS_AS(Field(g, {0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(SpectralField(g, {0.0, complex(0.0, std::numeric_limits<double>::infinity()), 1.0}),
                    ValidationError);
}

TEST_CASE("zero field has zero spectrum and back")
{
    const Grid g = Grid::cube(2, -1.0, 1.0, 9);
    const auto spec = dft_forward(Field::zeros(g));
    for (const auto& c : spec.values())
        CHECK(std::abs(c) == 0.0);
    const auto back = dft_inverse(spec);
    for (double v : back.values())
        CHECK(v == 0.0);
}

TEST_CASE("unit impulse at the origin has a flat spectrum")
{
    const Grid g = Grid::cube(1, -4.0, 3.0, 8);
    std::vector<double> v(8, 0.0);
    v[4] = 1.0; // x = 0
    const auto spec = dft_forward(Field(g, v));
    const double expected = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (const auto& c : spec.values()) {
        CHECK(std::abs(c) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(std::abs(c.imag()) < 1e-15);
    }
}

TEST_CASE("Gaussian maps to Gaussian")
{
    const Grid g = Grid::cube(1, -10.0, 10.0, 1001);
    const auto f = Field::sample(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2.0); });
    const auto spec = dft_forward(f);
    const auto fg = freq_grid(g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double xi = fg.freqs[0][i];
        if (std::abs(xi) <= 10.0)
            worst = std::max(worst, std::abs(spec[i] - std::exp(-xi * xi / 2.0)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("forward transform agrees with a direct DFT sum")
{
    const std::vector<Grid> grids = {Grid::cube(1, -2.0, 1.5, 16), Grid::cube(1, 0.3, 4.0, 17),
                                     Grid({{-1.0, 1.0, 8}, {-0.5, 2.0, 9}}),
                                     Grid({{-1.0, 1.0, 5}, {0.0, 2.0, 6}, {-3.0, -1.0, 4}})};
    std::uint64_t seed = 1;
    for (const auto& g : grids) {
        const auto f = random_field(g, seed++);
        const auto oracle = brute_forward(f);
        CHECK(rel_diff(oracle, dft_forward(f).values()) <= 1e-10);
    }
}

TEST_CASE("round trip recovers random fields")
{
    const std::vector<Grid> grids = {Grid::cube(1, -1.0, 1.0, 64), Grid::cube(1, -10.0, 10.0, 1001),
                                     Grid({{-1.0, 1.0, 64}, {0.0, 5.0, 33}}), Grid::cube(3, -2.0, 2.0, 17)};
    std::uint64_t seed = 11;
    for (const auto& g : grids) {
        const auto f = random_field(g, seed++);
        const auto back = dft_inverse(dft_forward(f));
        CHECK(l2_norm_rect(subtract(back, f)) <= 1e-12 * l2_norm_rect(f));
    }
}

TEST_CASE("Parseval identity under the symmetric scaling")
{
    for (const auto& g : {Grid::cube(1, -3.0, 3.0, 101), Grid({{-1.0, 2.0, 20}, {0.0, 1.0, 31}})}) {
        const auto f = random_field(g, 5);
        const auto spec = dft_forward(f);
        double s = 0.0;
        for (const auto& c : spec.values())
            s += std::norm(c);
        const double spectral = std::sqrt(s * freq_grid(g).cell_volume());
        CHECK(spectral == doctest::Approx(l2_norm_rect(f)).epsilon(1e-10));
    }
}

TEST_CASE("forward transform is linear")
{
    const Grid g = Grid::cube(2, -1.0, 1.0, 15);
    const auto f = random_field(g, 1);
    const auto h = random_field(g, 2);
    const auto lhs = dft_forward(axpby(2.5, f, -0.75, h));
    const auto a = dft_forward(f);
    const auto b = dft_forward(h);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        worst = std::max(worst, std::abs(lhs[i] - (2.5 * a[i] - 0.75 * b[i])));
    CHECK(worst <= 1e-12);
}

TEST_CASE("conjugate-symmetric spectrum inverts to a real field")
{
    const Grid g = Grid::cube(1, -8.0, 7.0, 16);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    std::vector<complex> spec(16);
    for (std::size_t m = 0; m <= 8; ++m) {
        const std::size_t mirror = (16 - m) % 16;
        if (mirror == m)
            spec[m] = n(rng);
        else {
            spec[m] = complex(n(rng), n(rng));
            spec[mirror] = std::conj(spec[m]);
        }
    }
    const auto oracle = brute_inverse(g, spec);
    const auto res = dft_inverse_checked(SpectralField(g, spec));
    double worst_imag = 0.0;
    for (std::size_t j = 0; j < 16; ++j) {
        CHECK(res.field[j] == doctest::Approx(oracle[j].real()).epsilon(1e-10));
        worst_imag = std::max(worst_imag, std::abs(oracle[j].imag()));
    }
    CHECK(worst_imag <= 1e-12);
    CHECK(res.imag_residue <= 1e-12);
}

TEST_CASE("non-real spectrum is rejected by the strict inverse")
{
    const Grid g = Grid::cube(1, -1.0, 1.0, 9);
    std::vector<complex> spec(9, 0.0);
    spec[1] = 1.0; // positive frequency only
    CHECK_THROWS_AS(dft_inverse(SpectralField(g, spec)), NumericalError);
    CHECK(dft_inverse_checked(SpectralField(g, spec)).imag_residue > 0.1);
}

TEST_CASE("odd multiplier keeps real fields real on even grids")
{
    // i*xi is the derivative symbol; on even N the Nyquist value must be averaged away.
    const Grid g({{-1.0, 1.0, 16}, {0.0, 2.0, 12}});
    const auto f = random_field(g, 9);
    const auto spec = apply_multiplier(dft_forward(f), [](std::span<const double> xi) { return complex(0.0, xi[0]); });
    const auto res = dft_inverse_checked(spec);
    CHECK(res.imag_residue <= 1e-12 * l2_norm_rect(res.field));

    const auto sampled = sample_multiplier(g, [](std::span<const double> xi) { return complex(0.0, xi[0]); });
    CHECK(std::abs(sampled[8 * 12]) == 0.0); // Nyquist row on axis 0
}

TEST_CASE("lattice walk matches unflatten")
{
    const Grid g({{0.0, 1.0, 3}, {0.0, 1.0, 4}, {0.0, 1.0, 5}});
    std::size_t count = 0;
    for_each_lattice_index(g, [&](std::size_t flat, std::span<const std::size_t> idx) {
        const auto ref = g.unflatten(flat);
        CHECK(std::equal(idx.begin(), idx.end(), ref.begin()));
        CHECK(flat == count++);
    });
    CHECK(count == g.size());
}

TEST_CASE("field arithmetic checks grids")
{
    const auto a = Field::zeros(Grid::cube(1, 0.0, 1.0, 5));
    const auto b = Field::zeros(Grid::cube(1, 0.0, 1.0, 7));
    CHECK_THROWS_AS(subtract(a, b), ValidationError);
    const auto c = Field(Grid::cube(1, 0.0, 1.0, 5), {1.0, 2.0, 3.0, 4.0, 5.0});
    const auto s = scale(c, -2.0);
    CHECK(s[4] == -10.0);
}
