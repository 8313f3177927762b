#pragma once

#include "parasource/model.hpp"
#include "parasource/regularize.hpp"
#include "parasource/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace parasource {

enum class SourceId { Ex1 = 1, Ex2, Ex3, Ex4, Ex5, Ex6, Custom };

/// Affine function c + slope . x on a box. The box is closed at the lower
/// corner; the upper faces are included only when `closed_upper` is set.
struct AffinePiece {
    std::vector<double> lower;
    std::vector<double> upper;
    bool closed_upper = true;
    double constant = 0.0;
    std::vector<double> slope;
};

/// A source term: one of the six catalogued examples, a list of affine
/// pieces (zero elsewhere, first matching piece wins), or raw samples.
struct SourceSpec {
    SourceId id = SourceId::Custom;
    std::size_t dim = 1;
    std::vector<AffinePiece> pieces;
    std::optional<Field> samples;
};

SourceSpec example_source(int example);

double source_value(const SourceSpec& spec, std::span<const double> x);

/// Samples the source on `grid`. Raw-sample sources must already live on it.
Field sample_source(const SourceSpec& spec, const Grid& grid);

/// Parameter list of one catalogued example.
struct ExampleDefaults {
    int example = 1;
    ModelParams params;
    double t0 = 1.0;
    Grid grid;
    double p = 1.0;
    std::vector<double> figure_epsilons;
    std::vector<double> table_epsilons;
};

ExampleDefaults example_defaults(int example);

struct CaseConfig {
    SourceSpec source;
    ModelParams params;
    double t0 = 1.0;
    Grid grid;
    double p = 1.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::vector<RegularizerKind> kinds{kAllKinds.begin(), kAllKinds.end()};

    void validate() const;
};

CaseConfig example_case(int example, double epsilon, std::uint64_t seed);

struct KindResult {
    RegularizerKind kind = RegularizerKind::R1;
    double relative_error = 0.0;
    double absolute_error = 0.0; // Simpson L2 norm of f - f_est
    std::optional<double> bound;  // empty when the bound check was skipped
};

struct CaseReport {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    double p = 1.0;
    double delta = 0.0;
    double delta_max = 1.0;
    double mu = 0.0;
    std::vector<KindResult> kinds;
    double unregularized_error = 0.0;
    double sobolev_norm = 0.0; // C, the discrete H^p norm of the true source
    std::string bound_note;    // why the bound columns are empty, if they are
    double wall_time = 0.0;    // seconds

    const KindResult* find(RegularizerKind kind) const;
    std::string to_json() const;
};

/// Sampled fields of one run, kept when the caller wants to export them.
struct CaseFields {
    Field source;
    Field measurement;
    Field noisy;
    std::vector<std::pair<RegularizerKind, Field>> estimates;
};

struct RunOptions {
    std::optional<double> delta_max; // defaults to 1 + delta
    CaseFields* fields = nullptr;
};

/// Full pipeline: sample, solve forward, add noise, measure delta, choose mu,
/// estimate per kind, score. Errors are rethrown prefixed with the failing stage.
CaseReport run_case(const CaseConfig& cfg, const RunOptions& options = {});

/// Seed of the noise stream for the `index`-th noise level of one realization.
std::uint64_t case_seed(std::uint64_t realization_seed, std::size_t index);

struct TableRow {
    double epsilon = 0.0;
    double delta = 0.0;     // median over seeds
    double delta_max = 0.0; // median over seeds
    double mu = 0.0;        // median over seeds
    std::vector<std::pair<RegularizerKind, double>> errors; // medians
    double unregularized_error = 0.0;                       // median
    std::vector<std::pair<RegularizerKind, std::optional<double>>> bounds; // medians

    double error(RegularizerKind kind) const;
};

struct TableResult {
    std::vector<TableRow> rows;                 // one per epsilon, input order
    std::vector<std::vector<CaseReport>> cases; // [epsilon][seed]

    std::string to_csv() const;
};

/// Runs every (epsilon, seed) pair. For each seed, delta_M is one plus the
/// largest delta across the epsilon list; rows hold medians over seeds.
/// Cases run on up to PARASOURCE_THREADS threads with identical results for
/// any worker count.
TableResult run_table(const CaseConfig& base, const std::vector<double>& epsilons,
                      const std::vector<std::uint64_t>& seeds);

TableResult run_example_table(int example, const std::vector<double>& epsilons,
                              const std::vector<std::uint64_t>& seeds);

struct FigureCase {
    CaseReport report;
    CaseFields fields;
};

/// One realization per noise level with its fields kept for export. delta_M
/// follows the table rule over `epsilons`.
std::vector<FigureCase> run_figures(const CaseConfig& base, const std::vector<double>& epsilons);

/// Worker count from PARASOURCE_THREADS, else the hardware concurrency.
unsigned worker_count();

/// Writes a field as CSV (x,f / x,y,f). A 3-D field becomes three slice files
/// through the origin, named <stem>_x0.csv, <stem>_y0.csv and <stem>_z0.csv.
/// Returns the files written.
std::vector<std::filesystem::path> export_field(const Field& field, const std::filesystem::path& stem);

void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Reads a JSON case description. Throws ValidationError naming the offending key.
CaseConfig load_custom_config(const std::filesystem::path& path);
CaseConfig parse_custom_config(const std::string& json_text);

} // namespace parasource
