#include "subsync/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "subsync/error.hpp"
#include "subsync/intmath.hpp"
#include "subsync/wire.hpp"

namespace subsync {

namespace {

std::size_t parse_size(std::string_view text, std::string_view what) {
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
        throw Error(Errc::ConfigError, "invalid " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

std::string csv_optional(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : ""; }
std::string csv_optional(const std::optional<double>& v) { return v ? format_float(*v) : ""; }
std::string csv_optional(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : ""; }

template <typename T>
nlohmann::json json_optional(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

// Runs `body` with the labeling named by `spec`, reseeding hash labelings that
// turn out to collide on a confusable string.
template <typename Body>
auto with_labeling(const LabelingSpec& spec, std::uint64_t seed, Body&& body) {
    if (!spec.hash) return body(identity_labeling());
    for (unsigned attempt = 0;; ++attempt) {
        try {
            return body(spec.make(seed + attempt));
        } catch (const Error& e) {
            if (e.code() != Errc::LabelingUnsound || attempt + 1 >= kHashReseedAttempts) throw;
        }
    }
}

std::size_t nearest_rank(std::vector<std::size_t> values, double q) {
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

double mean_of(std::span<const std::size_t> values) {
    double sum = 0;
    for (std::size_t v : values) sum += static_cast<double>(v);
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

std::size_t main_modulus_bits(const AverageCaseEncoding& enc) {
    if (const auto* d = std::get_if<DenseEncoding>(&enc)) return modulus_bits(d->modulus);
    return modulus_bits(std::get<NonDenseEncoding>(enc).inner.modulus);
}

}  // namespace

std::string_view scheme_name(SchemeKind scheme) noexcept { return scheme == SchemeKind::Worst ? "worst" : "average"; }

SchemeKind parse_scheme(std::string_view text) {
    if (text == "worst") return SchemeKind::Worst;
    if (text == "average") return SchemeKind::Average;
    throw Error(Errc::ConfigError, "unknown scheme '" + std::string(text) + "' (expected worst or average)");
}

LabelingSpec LabelingSpec::parse(std::string_view text) {
    if (text == "identity") return {};
    if (text == "hash") return {true, 64};
    if (text.starts_with("hash:")) {
        const std::size_t width = parse_size(text.substr(5), "hash width");
        if (width < 1) throw Error(Errc::ConfigError, "hash width must be >= 1");
        return {true, width};
    }
    throw Error(Errc::ConfigError, "unknown labeling '" + std::string(text) + "' (expected identity or hash:R)");
}

std::string LabelingSpec::name() const { return hash ? "hash:" + std::to_string(width) : "identity"; }

LabelingPtr LabelingSpec::make(std::uint64_t seed) const {
    return hash ? hash_labeling(width, seed) : identity_labeling();
}

std::size_t DeltaRule::window_for(std::size_t n) const {
    switch (kind) {
        case Kind::Scaled: return scaled_log_window(alpha, n);
        case Kind::Preset: return density_preset(preset_k, n).window;
        case Kind::Fixed: return window;
        case Kind::Full: return n;
    }
    return window;
}

std::string DeltaRule::describe() const {
    switch (kind) {
        case Kind::Scaled: return "ceil(" + format_float(alpha) + "*log2 n)";
        case Kind::Preset: return "preset(k=" + std::to_string(preset_k) + ")";
        case Kind::Fixed: return std::to_string(window);
        case Kind::Full: return "n";
    }
    return "";
}

DensityConfig DensitySpec::config_for(std::size_t n) const {
    if (rule.kind == DeltaRule::Kind::Preset) {
        DensityPreset preset = density_preset(rule.preset_k, n);
        return {std::move(preset.pattern), preset.window};
    }
    DensityConfig config{pattern, rule.window_for(n)};
    config.validate();
    return config;
}

// -- ball census -----------------------------------------------------------------

std::vector<BallCensusRecord> ball_census(const BallCensusOptions& options) {
    std::vector<BallCensusRecord> rows;
    for (std::size_t n : options.n_grid) {
        EditParams{n, options.t, options.k}.validate();
        std::vector<BitString> strings;
        if (options.string) {
            if (options.string->size() == n) strings.push_back(*options.string);
        } else {
            SplitMix64 rng(mix_seed(options.seed, n));
            for (std::size_t s = 0; s < options.samples; ++s) strings.push_back(BitString::random(n, rng));
        }
        for (const BitString& x : strings) {
            BallCensusRecord row;
            row.n = n;
            row.t = options.t;
            row.k = options.k;
            row.string = x;
            row.bound = ball_size_upper_bound(n, options.t, options.k);
            try {
                row.ball_t_size = edit_ball(x, options.t, options.k, options.limits).size();
                row.ball_size = edit_ball(x, 2 * options.t, options.k, options.limits).size();
                const StringSet confusion =
                    options.t == 0 ? StringSet{x} : confusion_ball(x, options.t, options.k, options.limits);
                row.confusion_size = confusion.size();
                if (options.oracle && n <= options.limits.oracle_max_length)
                    row.oracle_match = confusion == confusion_ball_oracle(x, options.t, options.k, options.limits);
                if (options.density && options.t > 0) {
                    const DensityConfig config = options.density->config_for(n);
                    if (config.is_dense(x))
                        row.restricted_size = restricted_confusion_ball(x, options.t, options.k, config.pattern,
                                                                        config.window, options.limits)
                                                  .size();
                }
            } catch (const Error& e) {
                if (e.code() != Errc::BallTooLarge && e.code() != Errc::OracleTooLarge) throw;
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// -- density census --------------------------------------------------------------

double density_union_bound(std::size_t n, std::size_t pattern_length, std::size_t window) {
    // Strings shorter than the window are judged as one whole-string window.
    const std::size_t w = std::min(window, n);
    const double windows = static_cast<double>(n - w + 1);
    const double blocks = static_cast<double>(w / pattern_length);
    return windows * std::pow(1.0 - std::ldexp(1.0, -static_cast<int>(pattern_length)), blocks);
}

std::vector<DensityCensusRecord> density_census(const DensityCensusOptions& options) {
    std::vector<DensityCensusRecord> rows;
    for (std::size_t n : options.n_grid) {
        if (n < 1) throw Error(Errc::ConfigError, "n must be >= 1");
        const DensityConfig config = options.density.config_for(n);
        DensityCensusRecord row;
        row.n = n;
        row.pattern = config.pattern;
        row.window = config.window;
        row.exhaustive = options.exhaustive;
        if (options.exhaustive) {
            if (n > 26) throw Error(Errc::ConfigError, "exhaustive density counts are limited to n <= 26");
            row.samples = std::size_t{1} << n;
            for (std::uint64_t v = 0; v < row.samples; ++v) {
                BitString x;
                x.append_bits(v, static_cast<unsigned>(n));
                if (!config.is_dense(x)) ++row.non_dense;
            }
        } else {
            if (options.samples < 1) throw Error(Errc::ConfigError, "samples must be >= 1");
            row.samples = options.samples;
            SplitMix64 rng(mix_seed(options.seed, n));
            for (std::size_t s = 0; s < options.samples; ++s)
                if (!config.is_dense(BitString::random(n, rng))) ++row.non_dense;
        }
        const double m = static_cast<double>(row.samples);
        row.non_dense_fraction = static_cast<double>(row.non_dense) / m;
        row.std_error =
            options.exhaustive ? 0.0 : std::sqrt(row.non_dense_fraction * (1.0 - row.non_dense_fraction) / m);
        row.union_bound = density_union_bound(n, config.pattern.size(), config.window);
        row.within_bound = row.non_dense_fraction <= row.union_bound + 3.0 * row.std_error;
        rows.push_back(std::move(row));
    }
    return rows;
}

// -- redundancy benchmark --------------------------------------------------------

std::optional<double> least_squares_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t m = std::min(x.size(), y.size());
    if (m < 2) return std::nullopt;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0) return std::nullopt;
    return sxy / sxx;
}

BenchResult redundancy_bench(const BenchOptions& options) {
    if (options.trials < 1) throw Error(Errc::ConfigError, "trials must be >= 1");
    BenchResult result;
    for (std::size_t n : options.n_grid) {
        const EditParams params{n, options.t, options.k};
        params.validate();
        BenchRecord rec;
        rec.n = n;
        rec.t = options.t;
        rec.k = options.k;
        rec.scheme = options.scheme;
        rec.labeling = options.labeling.name();
        rec.trials = options.trials;
        rec.seed = options.seed;
        std::vector<std::size_t> bits, mod_bits, dense_bits, reference_bits;
        const DensityConfig density =
            options.scheme == SchemeKind::Average ? options.density.config_for(n) : DensityConfig{};
        for (std::size_t trial = 0; trial < options.trials; ++trial) {
            const std::uint64_t trial_seed = mix_seed(mix_seed(options.seed, n), trial);
            SplitMix64 rng(trial_seed);
            const BitString x = BitString::random(n, rng);
            const EditTrace trace = sample_edit_trace(x, options.t, options.k, mix_seed(trial_seed, 1));
            const auto fail = [&](const std::string& what) {
                return std::runtime_error("trial " + std::to_string(trial) + " at n=" + std::to_string(n) +
                                          " failed: " + what + " (x=" + x.str() + ")");
            };
            with_labeling(options.labeling, options.seed, [&](const LabelingPtr& f) {
                if (options.scheme == SchemeKind::Worst) {
                    const WorstCaseEncoding enc = encode_worst(x, params, *f, options.codec);
                    const auto msg = wire::deserialize(wire::serialize(enc));
                    const auto* got = std::get_if<WorstCaseEncoding>(&msg);
                    if (got == nullptr || decode_worst(trace.result, *got, *f, options.codec) != x)
                        throw fail("round trip mismatch");
                    bits.push_back(encoding_bit_length(enc));
                    mod_bits.push_back(modulus_bits(enc.modulus));
                    return 0;
                }
                const AverageCaseEncoding enc = encode_average(x, params, *f, density, options.codec);
                const auto msg = wire::deserialize(wire::serialize(enc));
                const auto* got = std::get_if<AverageCaseEncoding>(&msg);
                if (got == nullptr || decode_average(trace.result, *got, *f, options.codec) != x)
                    throw fail("round trip mismatch");
                bits.push_back(encoding_bit_length(enc));
                mod_bits.push_back(main_modulus_bits(enc));
                if (const auto* d = std::get_if<DenseEncoding>(&enc)) {
                    const WorstCaseEncoding reference = encode_worst(x, params, *f, options.codec);
                    dense_bits.push_back(modulus_bits(d->modulus));
                    reference_bits.push_back(modulus_bits(reference.modulus));
                    if (d->modulus.value() > reference.modulus.value()) ++rec.monotonicity_violations;
                }
                return 0;
            });
        }
        rec.mean_bits = mean_of(bits);
        rec.p95_bits = static_cast<double>(nearest_rank(bits, 0.95));
        rec.min_bits = *std::min_element(bits.begin(), bits.end());
        rec.max_bits = *std::max_element(bits.begin(), bits.end());
        rec.mean_modulus_bits = mean_of(mod_bits);
        if (options.scheme == SchemeKind::Average) {
            rec.dense_trials = dense_bits.size();
            if (!dense_bits.empty()) {
                rec.mean_dense_modulus_bits = mean_of(dense_bits);
                rec.mean_reference_modulus_bits = mean_of(reference_bits);
            }
        }
        result.records.push_back(std::move(rec));
    }

    std::vector<double> xs, ys;
    for (const BenchRecord& r : result.records) {
        xs.push_back(std::log2(static_cast<double>(r.n)));
        ys.push_back(r.mean_bits);
    }
    if (options.t == 0) {
        result.warnings.push_back("t = 0: encodings carry no edit information; slope fit skipped");
    } else if (auto slope = least_squares_slope(xs, ys)) {
        result.slope = slope;
    } else {
        result.warnings.push_back("fewer than two distinct n in the grid; slope fit skipped");
    }
    return result;
}

// -- sync ------------------------------------------------------------------------

Corruption parse_corruption(std::string_view text) {
    if (text == "none") return Corruption::None;
    if (text == "magic") return Corruption::Magic;
    if (text == "version") return Corruption::Version;
    if (text == "scheme") return Corruption::Scheme;
    throw Error(Errc::ConfigError, "unknown corruption '" + std::string(text) + "' (expected magic, version or scheme)");
}

SubstringEdit parse_edit(std::string_view text) {
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
        throw Error(Errc::ConfigError, "edit must look like i:u:v, got '" + std::string(text) + "'");
    SubstringEdit e;
    e.position = parse_size(text.substr(0, c1), "edit position");
    e.deleted = BitString::parse(text.substr(c1 + 1, c2 - c1 - 1));
    e.inserted = BitString::parse(text.substr(c2 + 1));
    return e;
}

SyncReport run_sync(const SyncOptions& options) {
    SyncReport report;
    std::string stage = "generate";
    try {
        if (options.x) {
            report.x = *options.x;
        } else {
            SplitMix64 rng(mix_seed(options.seed, 0));
            report.x = BitString::random(options.n, rng);
        }
        const EditParams params{report.x.size(), options.t, options.k};
        params.validate();

        stage = "edit";
        if (options.edits) {
            if (options.edits->size() > options.t)
                throw Error(Errc::ConfigError, "trace has more edits than t = " + std::to_string(options.t));
            report.y = report.x;
            for (const SubstringEdit& e : *options.edits) {
                if (e.deleted.size() > options.k || e.inserted.size() > options.k)
                    throw Error(Errc::InvalidEdit, "edit exceeds k = " + std::to_string(options.k));
                report.y = apply_substring_edit(report.y, e);
            }
            report.edits = *options.edits;
        } else {
            EditTrace trace = sample_edit_trace(report.x, options.t, options.k, mix_seed(options.seed, 1));
            report.y = std::move(trace.result);
            report.edits = std::move(trace.edits);
        }

        const DensityConfig density =
            options.scheme == SchemeKind::Average ? options.density.config_for(params.n) : DensityConfig{};
        with_labeling(options.labeling, options.seed, [&](const LabelingPtr& f) {
            report.labeling = f->name();
            stage = "encode";
            std::vector<std::uint8_t> bytes;
            if (options.scheme == SchemeKind::Worst) {
                const WorstCaseEncoding enc = encode_worst(report.x, params, *f, options.codec);
                report.redundancy_bits = encoding_bit_length(enc);
                stage = "serialize";
                bytes = wire::serialize(enc);
            } else {
                const AverageCaseEncoding enc = encode_average(report.x, params, *f, density, options.codec);
                report.dense = is_dense_branch(enc);
                report.redundancy_bits = encoding_bit_length(enc);
                stage = "serialize";
                bytes = wire::serialize(enc);
            }
            report.wire_bytes = bytes.size();

            stage = "transmit";
            switch (options.corrupt) {
                case Corruption::None: break;
                case Corruption::Magic: bytes[0] ^= 0xFF; break;
                case Corruption::Version: bytes[4] = static_cast<std::uint8_t>(wire::kVersion + 1); break;
                case Corruption::Scheme: bytes[5] = 0x7F; break;
            }

            stage = "deserialize";
            const wire::Message msg = wire::deserialize(bytes);

            stage = "decode";
            if (const auto* w = std::get_if<WorstCaseEncoding>(&msg))
                report.decoded = decode_worst(report.y, *w, *f, options.codec);
            else
                report.decoded = decode_average(report.y, std::get<AverageCaseEncoding>(msg), *f, options.codec);
            return 0;
        });

        stage = "compare";
        if (*report.decoded != report.x) {
            report.stage = stage;
            report.message = "decoded string differs from the source";
            return report;
        }
        report.ok = true;
        report.stage = "done";
    } catch (const Error& e) {
        report.stage = stage;
        report.message = e.what();
        report.error = e.code();
    }
    return report;
}

void print_sync_report(std::ostream& out, const SyncReport& r) {
    out << "x        " << r.x.str() << " (n=" << r.x.size() << ")\n";
    for (const SubstringEdit& e : r.edits)
        out << "edit     " << e.position << ":" << e.deleted.str() << ":" << e.inserted.str() << "\n";
    out << "y        " << r.y.str() << "\n";
    if (!r.labeling.empty()) out << "labeling " << r.labeling << "\n";
    if (r.dense) out << "branch   " << (*r.dense ? "dense" : "non-dense") << "\n";
    if (r.redundancy_bits > 0)
        out << "encoding " << r.redundancy_bits << " bits (" << r.wire_bytes << " wire bytes)\n";
    if (r.decoded) out << "decoded  " << r.decoded->str() << "\n";
    if (r.ok)
        out << "result   success\n";
    else
        out << "result   failure at stage '" << r.stage << "': " << r.message << "\n";
}

// -- emitters --------------------------------------------------------------------

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw Error(Errc::ConfigError, "unknown format '" + std::string(text) + "' (expected csv or json)");
}

std::string format_float(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

void write_ball_census(std::ostream& out, std::span<const BallCensusRecord> rows, OutputFormat format) {
    if (format == OutputFormat::Json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const BallCensusRecord& r : rows)
            doc.push_back({{"n", r.n},
                           {"t", r.t},
                           {"k", r.k},
                           {"string", r.string.str()},
                           {"ball_t_size", r.ball_t_size},
                           {"ball_size", r.ball_size},
                           {"confusion_size", r.confusion_size},
                           {"bound", r.bound.get_str()},
                           {"restricted_size", json_optional(r.restricted_size)},
                           {"oracle_match", json_optional(r.oracle_match)},
                           {"error", json_optional(r.error)}});
        out << doc.dump(2) << "\n";
        return;
    }
    out << "n,t,k,string,ball_t_size,ball_size,confusion_size,bound,restricted_size,oracle_match,error\n";
    for (const BallCensusRecord& r : rows)
        out << r.n << ',' << r.t << ',' << r.k << ',' << r.string.str() << ',' << r.ball_t_size << ','
            << r.ball_size << ',' << r.confusion_size << ',' << r.bound.get_str() << ','
            << csv_optional(r.restricted_size) << ',' << csv_optional(r.oracle_match) << ','
            << (r.error ? "\"" + *r.error + "\"" : "") << '\n';
}

void write_density_census(std::ostream& out, std::span<const DensityCensusRecord> rows, OutputFormat format) {
    if (format == OutputFormat::Json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const DensityCensusRecord& r : rows)
            doc.push_back({{"n", r.n},
                           {"pattern", r.pattern.str()},
                           {"delta", r.window},
                           {"samples", r.samples},
                           {"non_dense", r.non_dense},
                           {"non_dense_fraction", r.non_dense_fraction},
                           {"union_bound", r.union_bound},
                           {"std_error", r.std_error},
                           {"exhaustive", r.exhaustive},
                           {"within_bound", r.within_bound}});
        out << doc.dump(2) << "\n";
        return;
    }
    out << "n,pattern,delta,samples,non_dense,non_dense_fraction,union_bound,std_error,exhaustive,within_bound\n";
    for (const DensityCensusRecord& r : rows)
        out << r.n << ',' << r.pattern.str() << ',' << r.window << ',' << r.samples << ',' << r.non_dense << ','
            << format_float(r.non_dense_fraction) << ',' << format_float(r.union_bound) << ','
            << format_float(r.std_error) << ',' << (r.exhaustive ? "true" : "false") << ','
            << (r.within_bound ? "true" : "false") << '\n';
}

void write_bench(std::ostream& out, const BenchResult& result, OutputFormat format) {
    if (format == OutputFormat::Json) {
        nlohmann::json records = nlohmann::json::array();
        for (const BenchRecord& r : result.records)
            records.push_back({{"n", r.n},
                               {"t", r.t},
                               {"k", r.k},
                               {"scheme", scheme_name(r.scheme)},
                               {"labeling", r.labeling},
                               {"trials", r.trials},
                               {"mean_bits", r.mean_bits},
                               {"p95_bits", r.p95_bits},
                               {"mean_modulus_bits", r.mean_modulus_bits},
                               {"seed", r.seed},
                               {"min_bits", r.min_bits},
                               {"max_bits", r.max_bits},
                               {"dense_trials", r.dense_trials},
                               {"mean_dense_modulus_bits", json_optional(r.mean_dense_modulus_bits)},
                               {"mean_reference_modulus_bits", json_optional(r.mean_reference_modulus_bits)}});
        nlohmann::json doc = {{"records", records},
                              {"slope", json_optional(result.slope)},
                              {"warnings", result.warnings}};
        out << doc.dump(2) << "\n";
        return;
    }
    out << "n,t,k,scheme,labeling,trials,mean_bits,p95_bits,mean_modulus_bits,seed,min_bits,max_bits,"
           "dense_trials,mean_dense_modulus_bits,mean_reference_modulus_bits\n";
    for (const BenchRecord& r : result.records)
        out << r.n << ',' << r.t << ',' << r.k << ',' << scheme_name(r.scheme) << ',' << r.labeling << ','
            << r.trials << ',' << format_float(r.mean_bits) << ',' << format_float(r.p95_bits) << ','
            << format_float(r.mean_modulus_bits) << ',' << r.seed << ',' << r.min_bits << ',' << r.max_bits << ','
            << r.dense_trials << ',' << csv_optional(r.mean_dense_modulus_bits) << ','
            << csv_optional(r.mean_reference_modulus_bits) << '\n';
}

std::vector<std::size_t> parse_grid(std::string_view text) {
    std::vector<std::size_t> grid;
    while (!text.empty()) {
        const std::size_t comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        if (const std::size_t dash = item.find('-'); dash != std::string_view::npos) {
            const std::size_t lo = parse_size(item.substr(0, dash), "grid value");
            const std::size_t hi = parse_size(item.substr(dash + 1), "grid value");
            if (lo > hi) throw Error(Errc::ConfigError, "empty grid range '" + std::string(item) + "'");
            for (std::size_t v = lo; v <= hi; ++v) grid.push_back(v);
        } else {
            grid.push_back(parse_size(item, "grid value"));
        }
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (grid.empty()) throw Error(Errc::ConfigError, "empty n grid");
    return grid;
}

}  // namespace subsync
