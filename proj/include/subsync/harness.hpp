#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subsync/balls.hpp"
#include "subsync/docex.hpp"
#include "subsync/error.hpp"
#include "subsync/labeling.hpp"

namespace subsync {

enum class SchemeKind { Worst, Average };

std::string_view scheme_name(SchemeKind scheme) noexcept;
SchemeKind parse_scheme(std::string_view text);

// "identity" or "hash:R". Hash labelings are reseeded (seed, seed + 1, ...) when
// they collide on a confusable string; the seed actually used is reported.
struct LabelingSpec {
    bool hash = false;
    std::size_t width = 64;

    static LabelingSpec parse(std::string_view text);
    std::string name() const;
    LabelingPtr make(std::uint64_t seed) const;
};

inline constexpr unsigned kHashReseedAttempts = 16;

// How the density window is chosen for each n.
struct DeltaRule {
    enum class Kind { Scaled, Preset, Fixed, Full };
    Kind kind = Kind::Scaled;
    double alpha = 8.0;        // Scaled: ceil(alpha * log2 n)
    std::size_t window = 0;    // Fixed
    unsigned preset_k = 1;     // Preset: k * 2^(2k+3) * log2 n

    std::size_t window_for(std::size_t n) const;
    std::string describe() const;
};

// Pattern plus window rule; the preset rule also fixes the pattern to 0^k 1^k.
struct DensitySpec {
    BitString pattern = BitString::parse("01");
    DeltaRule rule{};

    DensityConfig config_for(std::size_t n) const;
};

struct BenchRecord {
    std::size_t n = 0;
    unsigned t = 0;
    unsigned k = 0;
    SchemeKind scheme = SchemeKind::Worst;
    std::string labeling;
    std::size_t trials = 0;
    double mean_bits = 0;
    double p95_bits = 0;
    double mean_modulus_bits = 0;
    std::uint64_t seed = 0;
    std::size_t min_bits = 0;
    std::size_t max_bits = 0;
    // Average scheme only: trials that took the dense branch, the mean dense
    // modulus bits and the mean worst-case modulus bits for the same strings.
    std::size_t dense_trials = 0;
    std::optional<double> mean_dense_modulus_bits;
    std::optional<double> mean_reference_modulus_bits;
    std::size_t monotonicity_violations = 0;
};

struct DensityCensusRecord {
    std::size_t n = 0;
    BitString pattern;
    std::size_t window = 0;
    std::size_t samples = 0;
    double non_dense_fraction = 0;
    double union_bound = 0;
    double std_error = 0;
    bool exhaustive = false;
    std::size_t non_dense = 0;
    bool within_bound = true;
};

// -- census and benchmark drivers --------------------------------------------

struct BallCensusOptions {
    std::vector<std::size_t> n_grid;
    unsigned t = 1;
    unsigned k = 1;
    std::size_t samples = 10;
    std::uint64_t seed = 1;
    bool oracle = false;
    std::optional<BitString> string;    // census this string instead of sampling
    std::optional<DensitySpec> density;  // report restricted sizes for dense strings
    BallLimits limits{};
};

std::vector<BallCensusRecord> ball_census(const BallCensusOptions& options);

struct DensityCensusOptions {
    std::vector<std::size_t> n_grid;
    DensitySpec density{};
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    bool exhaustive = false;  // exact count over all 2^n strings (n <= 26)
};

// (n - w + 1) * (1 - 2^-|p|)^floor(w / |p|) with w = min(delta, n)
double density_union_bound(std::size_t n, std::size_t pattern_length, std::size_t window);

std::vector<DensityCensusRecord> density_census(const DensityCensusOptions& options);

struct BenchOptions {
    std::vector<std::size_t> n_grid;
    unsigned t = 1;
    unsigned k = 1;
    SchemeKind scheme = SchemeKind::Worst;
    LabelingSpec labeling{};
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    DensitySpec density{};
    CodecOptions codec{};
};

struct BenchResult {
    std::vector<BenchRecord> records;
    std::optional<double> slope;  // least squares of mean bits against log2 n
    std::vector<std::string> warnings;
};

// Every trial round-trips through the wire format; a failed trial throws.
BenchResult redundancy_bench(const BenchOptions& options);

// Least-squares slope of y against x; nullopt when fewer than two distinct x.
std::optional<double> least_squares_slope(std::span<const double> x, std::span<const double> y);

// -- end-to-end sync -----------------------------------------------------------

enum class Corruption { None, Magic, Version, Scheme };

Corruption parse_corruption(std::string_view text);

struct SyncOptions {
    std::optional<BitString> x;  // random of length n when absent
    std::size_t n = 64;
    unsigned t = 1;
    unsigned k = 1;
    std::uint64_t seed = 1;
    SchemeKind scheme = SchemeKind::Worst;
    LabelingSpec labeling{};
    DensitySpec density{};
    std::optional<std::vector<SubstringEdit>> edits;  // fixed trace instead of a sampled one
    Corruption corrupt = Corruption::None;
    CodecOptions codec{};
};

struct SyncReport {
    bool ok = false;
    std::string stage;  // failing stage, or "done"
    std::string message;
    std::optional<Errc> error;
    BitString x;
    BitString y;
    std::optional<BitString> decoded;
    std::vector<SubstringEdit> edits;
    std::string labeling;
    std::optional<bool> dense;
    std::size_t redundancy_bits = 0;
    std::size_t wire_bytes = 0;
};

SyncReport run_sync(const SyncOptions& options);
void print_sync_report(std::ostream& out, const SyncReport& report);

// Parses "i:u:v" with a 1-based position and possibly empty u or v.
SubstringEdit parse_edit(std::string_view text);

// -- property suites -------------------------------------------------------------

struct VerifyOptions {
    std::uint64_t seed = 1;
    CodecOptions codec{};  // codec.search lets a mutation replace the modulus search
};

struct VerifyReport {
    std::string suite;
    std::size_t checks = 0;
    std::vector<std::string> counterexamples;

    bool ok() const noexcept { return counterexamples.empty(); }
};

inline constexpr std::string_view kVerifySuites[] = {"edits", "balls", "labeling", "docex"};

// suite is one of kVerifySuites or "all"; unknown names throw ConfigError.
std::vector<VerifyReport> run_verify(std::string_view suite, const VerifyOptions& options);

// Deliberately broken search: one less than the minimal modulus whenever that
// minimum exceeds 2, so some confusable label shares x's residue.
ModulusSearch off_by_one_search();

// -- emitters ----------------------------------------------------------------------

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view text);

// Six significant digits.
std::string format_float(double value);

void write_ball_census(std::ostream& out, std::span<const BallCensusRecord> rows, OutputFormat format);
void write_density_census(std::ostream& out, std::span<const DensityCensusRecord> rows, OutputFormat format);
void write_bench(std::ostream& out, const BenchResult& result, OutputFormat format);

// Parses "64,128,256" (ranges "4-8" also accepted).
std::vector<std::size_t> parse_grid(std::string_view text);

}  // namespace subsync
