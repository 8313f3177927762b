#include "parasource/experiments.hpp"

#include "parasource/error.hpp"
#include "parasource/noise.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace parasource {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& msg)
{
    throw ValidationError("config key '" + key + "': " + msg);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& required,
                const std::set<std::string>& optional = {})
{
    if (!obj.is_object())
        fail(where, "expected a JSON object");
    for (const auto& key : required)
        if (!obj.contains(key))
            fail(where.empty() ? key : where + "." + key, "missing");
    for (const auto& [key, value] : obj.items())
        if (!required.contains(key) && !optional.contains(key))
            fail(where.empty() ? key : where + "." + key, "unknown key");
}

double number(const json& v, const std::string& key)
{
    if (!v.is_number())
        fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        fail(key, "expected a finite number");
    return d;
}

std::vector<double> numbers(const json& v, const std::string& key)
{
    if (v.is_number())
        return {number(v, key)};
    if (!v.is_array())
        fail(key, "expected a number or an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(number(v[i], key + "[" + std::to_string(i) + "]"));
    return out;
}

Grid parse_grid(const json& g)
{
    check_keys(g, "grid", {"lower", "upper", "points"});
    const auto lower = numbers(g["lower"], "grid.lower");
    const auto upper = numbers(g["upper"], "grid.upper");
    const auto points = numbers(g["points"], "grid.points");
    if (upper.size() != lower.size())
        fail("grid.upper", "length differs from grid.lower");
    if (points.size() != lower.size())
        fail("grid.points", "length differs from grid.lower");
    std::vector<Axis> axes;
    for (std::size_t k = 0; k < lower.size(); ++k) {
        if (points[k] < 3 || points[k] != std::floor(points[k]))
            fail("grid.points", "expected integers of at least 3");
        axes.push_back({lower[k], upper[k], static_cast<std::size_t>(points[k])});
    }
    try {
        return Grid(std::move(axes));
    } catch (const ValidationError& e) {
        fail("grid", e.what());
    }
}

SourceSpec parse_source(const json& s, const Grid& grid)
{
    if (!s.is_object() || s.size() != 1)
        fail("source", "expected an object with exactly one of 'example', 'pieces', 'samples'");
    SourceSpec spec;
    spec.dim = grid.dim();
    if (s.contains("example")) {
        const double id = number(s["example"], "source.example");
        if (id < 1 || id > 6 || id != std::floor(id))
            fail("source.example", "expected an example id between 1 and 6");
        spec = example_source(static_cast<int>(id));
        if (spec.dim != grid.dim())
            fail("source.example", "example dimension does not match the grid");
        return spec;
    }
    if (s.contains("samples")) {
        auto v = numbers(s["samples"], "source.samples");
        if (v.size() != grid.size())
            fail("source.samples", "expected " + std::to_string(grid.size()) + " values, got " +
                                       std::to_string(v.size()));
        spec.samples = Field(grid, std::move(v));
        return spec;
    }
    if (!s.contains("pieces"))
        fail("source", "expected one of 'example', 'pieces', 'samples'");
    const auto& pieces = s["pieces"];
    if (!pieces.is_array())
        fail("source.pieces", "expected an array");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string where = "source.pieces[" + std::to_string(i) + "]";
        check_keys(pieces[i], where, {"lower", "upper", "value"}, {"slope", "closed_upper"});
        AffinePiece piece;
        piece.lower = numbers(pieces[i]["lower"], where + ".lower");
        piece.upper = numbers(pieces[i]["upper"], where + ".upper");
        piece.constant = number(pieces[i]["value"], where + ".value");
        piece.slope = pieces[i].contains("slope") ? numbers(pieces[i]["slope"], where + ".slope")
                                                  : std::vector<double>(grid.dim(), 0.0);
        if (pieces[i].contains("closed_upper")) {
            if (!pieces[i]["closed_upper"].is_boolean())
                fail(where + ".closed_upper", "expected true or false");
            piece.closed_upper = pieces[i]["closed_upper"].get<bool>();
        }
        if (piece.lower.size() != grid.dim())
            fail(where + ".lower", "length differs from the grid dimension");
        if (piece.upper.size() != grid.dim())
            fail(where + ".upper", "length differs from the grid dimension");
        if (piece.slope.size() != grid.dim())
            fail(where + ".slope", "length differs from the grid dimension");
        spec.pieces.push_back(std::move(piece));
    }
    return spec;
}

std::uint64_t parse_seed_value(const json& v)
{
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_string()) {
        try {
            return parse_seed(v.get<std::string>());
        } catch (const ValidationError& e) {
            fail("seed", e.what());
        }
    }
    fail("seed", "expected a non-negative integer or a decimal/0x-hex string");
}

std::vector<RegularizerKind> parse_kinds(const json& v)
{
    if (!v.is_array() || v.empty())
        fail("kinds", "expected a non-empty array");
    std::vector<RegularizerKind> out;
    for (const auto& item : v) {
        const std::string text = item.is_string() ? item.get<std::string>() : item.dump();
        const auto kind = parse_kind(text);
        if (!kind)
            fail("kinds", "unknown regularizer '" + text + "'");
        if (std::find(out.begin(), out.end(), *kind) == out.end())
            out.push_back(*kind);
    }
    return out;
}

} // namespace

CaseConfig parse_custom_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: malformed JSON: ") + e.what());
    }
    check_keys(j, "", {"alpha2", "beta", "nu", "t0", "grid", "p", "epsilon", "seed", "source"}, {"kinds"});

    CaseConfig cfg;
    cfg.grid = parse_grid(j["grid"]);
    cfg.params.alpha2 = number(j["alpha2"], "alpha2");
    cfg.params.beta = numbers(j["beta"], "beta");
    cfg.params.nu = number(j["nu"], "nu");
    if (cfg.params.beta.size() != cfg.grid.dim())
        fail("beta", "has " + std::to_string(cfg.params.beta.size()) + " components but the grid has dimension " +
                         std::to_string(cfg.grid.dim()));
    if (cfg.params.alpha2 <= 0.0)
        fail("alpha2", "must be positive");
    if (cfg.params.nu < 0.0)
        fail("nu", "must be non-negative");
    cfg.t0 = number(j["t0"], "t0");
    if (cfg.t0 <= 0.0)
        fail("t0", "must be positive");
    cfg.p = number(j["p"], "p");
    if (cfg.p <= 0.0)
        fail("p", "must be positive");
    cfg.epsilon = number(j["epsilon"], "epsilon");
    if (cfg.epsilon < 0.0)
        fail("epsilon", "must be non-negative");
    cfg.seed = parse_seed_value(j["seed"]);
    cfg.source = parse_source(j["source"], cfg.grid);
    if (j.contains("kinds"))
        cfg.kinds = parse_kinds(j["kinds"]);
    cfg.validate();
    return cfg;
}

CaseConfig load_custom_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config: cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_custom_config(os.str());
}

} // namespace parasource
