#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subsync/error.hpp"
#include "subsync/harness.hpp"

namespace {

using namespace subsync;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::ConfigError:
        case Errc::InvalidDensityConfig:
        case Errc::InvalidEdit: return kExitUsage;
        case Errc::BallTooLarge:
        case Errc::OracleTooLarge: return kExitBudget;
        default: return kExitViolation;
    }
}

struct DensityFlags {
    std::string pattern = "01";
    double alpha = 8.0;
    std::string delta;  // explicit window, or "n" for the whole string
    bool preset = false;
    bool given = false;

    void add_to(CLI::App& app) {
        app.add_option("--pattern", pattern, "Density pattern p")->each([this](const std::string&) { given = true; });
        app.add_option("--delta-alpha", alpha, "Window rule delta = ceil(alpha * log2 n)")
            ->each([this](const std::string&) { given = true; });
        app.add_option("--delta", delta, "Explicit window delta, or 'n' for the whole string")
            ->each([this](const std::string&) { given = true; });
        app.add_flag("--density-preset,--lemma6-preset", preset, "Use p = 0^k 1^k and delta = k * 2^(2k+3) * log2 n")
            ->each([this](const std::string&) { given = true; });
    }

    DensitySpec build(unsigned k) const {
        DensitySpec spec;
        spec.pattern = BitString::parse(pattern);
        if (preset) {
            spec.rule.kind = DeltaRule::Kind::Preset;
            spec.rule.preset_k = k;
        } else if (delta == "n") {
            spec.rule.kind = DeltaRule::Kind::Full;
        } else if (!delta.empty()) {
            spec.rule.kind = DeltaRule::Kind::Fixed;
            try {
                spec.rule.window = std::stoul(delta);
            } catch (const std::exception&) {
                throw Error(Errc::ConfigError, "invalid --delta '" + delta + "'");
            }
        } else {
            if (!(alpha > 0)) throw Error(Errc::ConfigError, "--delta-alpha must be positive");
            spec.rule.alpha = alpha;
        }
        return spec;
    }
};

struct OutputFlags {
    std::string out;
    std::string format = "csv";

    void add_to(CLI::App& app) {
        app.add_option("--out", out, "Write records to this file instead of stdout");
        app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    }

    template <typename Write>
    void emit(Write&& write) const {
        const OutputFormat fmt = parse_format(format);
        if (out.empty()) {
            write(std::cout, fmt);
            return;
        }
        std::ofstream file(out);
        if (!file) throw Error(Errc::ConfigError, "cannot open '" + out + "' for writing");
        write(file, fmt);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Document exchange under k-substring edits: sync demo, censuses, benchmarks, property suites"};
    app.require_subcommand(1);

    // sync
    auto* sync = app.add_subcommand("sync", "Encode, transmit and decode one string through the wire format");
    std::string sync_x, scheme = "worst", labeling = "identity", corrupt = "none";
    std::size_t sync_n = 64;
    unsigned t = 1, k = 1;
    std::uint64_t seed = 1;
    std::vector<std::string> edit_texts;
    DensityFlags sync_density;
    sync->add_option("--x", sync_x, "Source string (random of length --n when absent)");
    sync->add_option("--n", sync_n, "Length of the random source string");
    sync->add_option("--t", t, "Number of edits");
    sync->add_option("--k", k, "Maximum substring length per edit");
    sync->add_option("--seed", seed, "Random seed");
    sync->add_option("--scheme", scheme)->check(CLI::IsMember({"worst", "average"}));
    sync->add_option("--labeling", labeling, "identity or hash:R");
    sync->add_option("--edit", edit_texts, "Fixed edit i:u:v (1-based, repeatable) instead of a sampled trace");
    sync->add_option("--corrupt", corrupt, "Corrupt the wire bytes: magic, version or scheme");
    sync_density.add_to(*sync);

    // ball-census
    auto* census = app.add_subcommand("ball-census", "Edit and confusion ball sizes against the analytic bound");
    std::string grid_text = "4,6,8";
    std::size_t samples = 10;
    bool oracle = false;
    std::string census_x;
    DensityFlags census_density;
    OutputFlags census_out;
    census->add_option("--n-grid", grid_text, "Lengths, e.g. 8,16 or 4-8");
    census->add_option("--t", t);
    census->add_option("--k", k);
    census->add_option("--samples", samples, "Sampled strings per n");
    census->add_option("--seed", seed);
    census->add_flag("--oracle", oracle, "Cross-check the confusion ball against the definition-level scan");
    census->add_option("--x", census_x, "Census this string instead of sampling");
    census_density.add_to(*census);
    census_out.add_to(*census);

    // density-census
    auto* dcensus = app.add_subcommand("density-census", "Non-dense fraction against the union bound");
    std::string dgrid_text = "64,256,1024";
    std::size_t dsamples = 10000;
    bool exhaustive = false;
    DensityFlags dcensus_density;
    OutputFlags dcensus_out;
    dcensus->add_option("--n-grid", dgrid_text);
    dcensus->add_option("--samples", dsamples);
    dcensus->add_option("--seed", seed);
    dcensus->add_option("--k", k, "k for the preset rule");
    dcensus->add_flag("--exhaustive", exhaustive, "Count all 2^n strings instead of sampling");
    dcensus_density.add_to(*dcensus);
    dcensus_out.add_to(*dcensus);

    // bench
    auto* bench = app.add_subcommand("bench", "Redundancy benchmark with a least-squares slope against log2 n");
    std::string bgrid_text = "64,128,256,512";
    std::size_t trials = 200;
    DensityFlags bench_density;
    OutputFlags bench_out;
    bench->add_option("--n-grid", bgrid_text);
    bench->add_option("--t", t);
    bench->add_option("--k", k);
    bench->add_option("--trials", trials);
    bench->add_option("--seed", seed);
    bench->add_option("--scheme", scheme)->check(CLI::IsMember({"worst", "average"}));
    bench->add_option("--labeling", labeling, "identity or hash:R");
    bench_density.add_to(*bench);
    bench_out.add_to(*bench);

    // verify
    auto* verify = app.add_subcommand("verify", "Run property suites: edits, balls, labeling, docex or all");
    std::string suite = "all";
    std::string mutation;
    verify->add_option("suite", suite, "Suite name");
    verify->add_option("--seed", seed);
    verify->add_option("--mutate", mutation, "Break a component on purpose (off-by-one)")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sync) {
            SyncOptions options;
            if (!sync_x.empty()) options.x = BitString::parse(sync_x);
            options.n = sync_n;
            options.t = t;
            options.k = k;
            options.seed = seed;
            options.scheme = parse_scheme(scheme);
            options.labeling = LabelingSpec::parse(labeling);
            options.density = sync_density.build(k);
            options.corrupt = parse_corruption(corrupt);
            if (!edit_texts.empty()) {
                std::vector<SubstringEdit> edits;
                for (const std::string& text : edit_texts) edits.push_back(parse_edit(text));
                options.edits = std::move(edits);
            }
            const SyncReport report = run_sync(options);
            print_sync_report(std::cout, report);
            if (report.ok) return kExitOk;
            return report.error ? exit_code_for(*report.error) : kExitViolation;
        }

        if (*census) {
            BallCensusOptions options;
            options.n_grid = parse_grid(grid_text);
            options.t = t;
            options.k = k;
            options.samples = samples;
            options.seed = seed;
            options.oracle = oracle;
            if (!census_x.empty()) {
                options.string = BitString::parse(census_x);
                options.n_grid = {options.string->size()};
            }
            if (census_density.given) options.density = census_density.build(k);
            const auto rows = ball_census(options);
            census_out.emit([&](std::ostream& out, OutputFormat fmt) { write_ball_census(out, rows, fmt); });
            int rc = kExitOk;
            for (const BallCensusRecord& r : rows) {
                if (r.error) {
                    std::cerr << "n=" << r.n << " x=" << r.string.str() << ": " << *r.error << "\n";
                    rc = std::max(rc, kExitBudget);
                    continue;
                }
                if (r.ball_size > r.bound) {
                    std::cerr << "bound violated: |B_2t|=" << r.ball_size << " > " << r.bound.get_str()
                              << " for x=" << r.string.str() << "\n";
                    rc = rc == kExitBudget ? rc : kExitViolation;
                }
                if (r.oracle_match && !*r.oracle_match) {
                    std::cerr << "oracle mismatch for x=" << r.string.str() << "\n";
                    rc = rc == kExitBudget ? rc : kExitViolation;
                }
            }
            return rc;
        }

        if (*dcensus) {
            DensityCensusOptions options;
            options.n_grid = parse_grid(dgrid_text);
            options.density = dcensus_density.build(k);
            options.samples = dsamples;
            options.seed = seed;
            options.exhaustive = exhaustive;
            const auto rows = density_census(options);
            dcensus_out.emit([&](std::ostream& out, OutputFormat fmt) { write_density_census(out, rows, fmt); });
            int rc = kExitOk;
            for (const DensityCensusRecord& r : rows)
                if (!r.within_bound) {
                    std::cerr << "n=" << r.n << ": non-dense fraction " << format_float(r.non_dense_fraction)
                              << " exceeds the union bound " << format_float(r.union_bound) << " + 3 SE\n";
                    rc = kExitViolation;
                }
            return rc;
        }

        if (*bench) {
            BenchOptions options;
            options.n_grid = parse_grid(bgrid_text);
            options.t = t;
            options.k = k;
            options.trials = trials;
            options.seed = seed;
            options.scheme = parse_scheme(scheme);
            options.labeling = LabelingSpec::parse(labeling);
            options.density = bench_density.build(k);
            const BenchResult result = redundancy_bench(options);
            bench_out.emit([&](std::ostream& out, OutputFormat fmt) { write_bench(out, result, fmt); });
            for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
            if (result.slope) std::cerr << "fitted slope (bits per log2 n): " << format_float(*result.slope) << "\n";
            int rc = kExitOk;
            for (const BenchRecord& r : result.records)
                if (r.monotonicity_violations > 0) {
                    std::cerr << "n=" << r.n << ": dense modulus exceeded the worst-case modulus "
                              << r.monotonicity_violations << " times\n";
                    rc = kExitViolation;
                }
            return rc;
        }

        if (*verify) {
            VerifyOptions options;
            options.seed = seed;
            if (mutation == "off-by-one")
                options.codec.search = off_by_one_search();
            else if (!mutation.empty())
                throw Error(Errc::ConfigError, "unknown mutation '" + mutation + "'");
            const auto reports = run_verify(suite, options);
            int rc = kExitOk;
            for (const VerifyReport& r : reports) {
                std::cout << (r.ok() ? "PASS " : "FAIL ") << r.suite << " (" << r.checks << " checks)\n";
                for (const std::string& c : r.counterexamples) std::cout << "  counterexample: " << c << "\n";
                if (!r.ok()) rc = kExitViolation;
            }
            return rc;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitOk;
}
