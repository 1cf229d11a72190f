#include "mshift/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mshift/dimension.hpp"
#include "mshift/json_io.hpp"
#include "mshift/measures.hpp"
#include "mshift/oracle.hpp"
#include "mshift/render.hpp"
#include "mshift/rng.hpp"

namespace mshift {

namespace {

struct RunConfig {
    std::string command;
    std::string spec_path;
    std::string preset;
    std::optional<int> full_shift;
    std::optional<int> m;
    std::optional<int> q;
    double tol = 1e-12;
    int depth = 40;
    std::optional<int> trunc;
    std::optional<long> n;
    int replicates = 50;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "json";
    std::string measure_path;
    std::string precision = "extended";
    bool timing = false;
};

class NotConverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Product counts above this are not enumerated word by word.
constexpr long kEnumerationLimit = 1L << 22;
constexpr int kPerturbations = 100;
constexpr Real kPerturbationAmplitude = 0.1L;
constexpr Real kTelescopingTolerance = 1e-12L;
constexpr Real kNormalizationTolerance = 1e-12L;

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError("'" + path + "' is not valid JSON: " + e.what());
    }
}

OmegaSpec load_spec(const RunConfig& cfg) {
    const int sources = (!cfg.spec_path.empty() ? 1 : 0) + (!cfg.preset.empty() ? 1 : 0) + (cfg.full_shift ? 1 : 0);
    if (sources > 1) throw SpecError("give at most one of --spec, --preset and --full-shift");
    const int q = cfg.q.value_or(2);
    const int trunc = cfg.trunc.value_or(OmegaSpec::kDefaultBetaDepth);

    if (!cfg.spec_path.empty()) {
        Json doc = read_json_file(cfg.spec_path);
        if (doc.is_object()) {
            if (cfg.q) doc["q"] = *cfg.q;
            if (cfg.trunc && doc.value("variant", "") == "beta_shift") doc["truncation_depth"] = *cfg.trunc;
        }
        return spec_from_json(doc);
    }
    if (!cfg.preset.empty()) {
        if (cfg.m && !cfg.preset.starts_with("full:") ) {
            throw SpecError("--m cannot be combined with --preset " + cfg.preset);
        }
        return preset_spec(cfg.preset, q, trunc);
    }
    if (cfg.full_shift) {
        if (cfg.m && *cfg.m != *cfg.full_shift) throw SpecError("--m disagrees with --full-shift");
        return OmegaSpec::full_shift(*cfg.full_shift, q);
    }
    if (cfg.m) return OmegaSpec::full_shift(*cfg.m, q);
    throw SpecError("no spec given; use --spec, --preset, --full-shift or --m");
}

Precision precision_of(const RunConfig& cfg) { return cfg.precision == "multi" ? Precision::Multi : Precision::Extended; }

FixedPointSolution solve_or_throw(const PrefixAutomaton& aut, const RunConfig& cfg, int q) {
    SolveOptions options;
    options.tol = static_cast<Real>(cfg.tol);
    options.precision = precision_of(cfg);
    FixedPointSolution sol = solve(aut, q, options);
    if (!sol.converged()) {
        throw NotConverged("fixed point did not reach tolerance " + std::to_string(cfg.tol) + " after " +
                           std::to_string(sol.iterations) + " sweeps");
    }
    return sol;
}

MarkovMeasure measure_under_test(const RunConfig& cfg, const FixedPointSolution& sol) {
    if (!cfg.measure_path.empty()) return measure_from_json(read_json_file(cfg.measure_path), sol.automaton);
    return optimal_measure(sol).measure;
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed) {
        if (cfg.format == f) return;
    }
    throw SpecError("--format " + cfg.format + " is not available for " + cfg.command);
}

void emit(const Json& doc, std::ostream& out) { out << doc.dump(2) << '\n'; }

// E[-log_m P_mu[x_1^n]] / n: each fiber of length k contributes H_k.
Real expected_pointwise(const MarkovMeasure& measure, int q, long n) {
    const FiberDecomposition fibers(n, q);
    const EntropyProfile profile = entropy_profile(measure, fibers.max_length(), q);
    Real total = 0;
    for (int k = 1; k <= fibers.max_length(); ++k) {
        total += static_cast<Real>(fibers.count_of_length(k)) * profile.entropies[static_cast<std::size_t>(k - 1)];
    }
    return total / static_cast<Real>(n);
}

long sampling_length(int q) {
    long n = 1;
    while (n * q <= (1L << 14)) n *= q;
    return n;
}

// ---------------------------------------------------------------------------------------

int cmd_dim(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json"});
    const auto start = std::chrono::steady_clock::now();
    const OmegaSpec spec = load_spec(cfg);
    AnalyzeOptions options;
    options.tol = static_cast<Real>(cfg.tol);
    options.series_depth = cfg.depth;
    options.precision = precision_of(cfg);
    const DimensionReport report = analyze(spec, options);

    Json doc;
    doc["spec"] = spec_to_json(spec);
    const Json body = report_json(report);
    for (const auto& [key, value] : body.items()) doc[key] = value;
    if (cfg.timing) {
        doc["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    emit(doc, out);
    return report.converged() ? kExitOk : kExitNotConverged;
}

int cmd_measure(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json"});
    const OmegaSpec spec = load_spec(cfg);
    const FixedPointSolution sol = solve_or_throw(build_automaton(spec), cfg, spec.q());
    const OptimalMeasure opt = optimal_measure(sol);
    Json doc = measure_json(opt.measure);
    doc["entropy_series"] = bracket_json(entropy_profile(opt.measure, cfg.depth, spec.q()).s);
    doc["hausdorff"] = bracket_json(hausdorff_dim(sol));
    emit(doc, out);
    return kExitOk;
}

Json count_row(const PrefixAutomaton& aut, int q, long n) {
    const BigInt count = product_count(aut, q, n);
    Json row;
    row["n"] = n;
    row["count"] = big_json(count);
    if (count <= kEnumerationLimit) {
        row["enumerated"] = big_json(enumerate_X_prefixes(aut, q, n).count);
    } else {
        row["enumerated"] = nullptr;
    }
    row["convergent"] = static_cast<double>(log_big(count) / (static_cast<Real>(n) * std::log(static_cast<Real>(aut.alphabet_size()))));
    return row;
}

int cmd_count(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json", "csv"});
    const OmegaSpec spec = load_spec(cfg);
    const PrefixAutomaton aut = build_automaton(spec);
    const long n = cfg.n.value_or(16);
    if (n < 1) throw SpecError("--n must be >= 1");

    std::vector<long> lengths;
    for (long k = 1; k <= std::min(n, 64L); ++k) lengths.push_back(k);
    for (long p = 128; p <= n; p *= 2) lengths.push_back(p);
    if (lengths.back() != n) lengths.push_back(n);

    int depth = 0;
    for (long x = n; x > 0; x /= spec.q()) ++depth;
    Json rows = Json::array();
    for (long k : lengths) rows.push_back(count_row(aut, spec.q(), k));

    if (cfg.format == "csv") {
        out << "n,count,convergent\n";
        for (const auto& row : rows) {
            out << row["n"].get<long>() << ',' << row["count"].get<std::string>() << ',' << row["convergent"].dump() << '\n';
        }
        return kExitOk;
    }
    Json doc;
    doc["spec"] = spec_to_json(spec);
    doc["n"] = n;
    doc["prefix_counts"] = counts_json(count_prefixes(aut, depth));
    doc["X_prefix_counts"] = rows;
    emit(doc, out);
    return kExitOk;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json", "csv"});
    const OmegaSpec spec = load_spec(cfg);
    const FixedPointSolution sol = solve_or_throw(build_automaton(spec), cfg, spec.q());
    const MarkovMeasure measure = measure_under_test(cfg, sol);
    const long n = cfg.n.value_or(1L << 16);
    const SampleRun run = sample_pointwise_dimension(measure, spec.q(), n, cfg.replicates, cfg.seed);

    if (cfg.format == "csv") {
        out << "replicate,value\n";
        for (std::size_t r = 0; r < run.values.size(); ++r) out << r << ',' << Json(static_cast<double>(run.values[r])).dump() << '\n';
        return kExitOk;
    }
    Json doc = sample_json(run);
    doc["expected_mean"] = static_cast<double>(expected_pointwise(measure, spec.q(), n));
    doc["entropy_series"] = bracket_json(entropy_profile(measure, cfg.depth, spec.q()).s);
    if (!run.regular_n) doc["note"] = "n is not divisible by q";
    emit(doc, out);
    return kExitOk;
}

int cmd_render(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"pgm", "csv", "json"});
    const OmegaSpec spec = load_spec(cfg);
    const PrefixAutomaton aut = build_automaton(spec);
    const long resolution = cfg.n.value_or(kPresetRenderResolution);
    if (resolution < 1 || resolution > kMaxRenderResolution) {
        throw SpecError("render resolution --n must be in 1.." + std::to_string(kMaxRenderResolution));
    }
    const RenderGrid grid = render_interleaved(aut, spec.q(), static_cast<int>(resolution));
    const bool csv = cfg.format == "csv";

    if (cfg.out_path.empty()) {
        if (csv) {
            write_csv(grid, out);
        } else {
            write_pgm(grid, out);
        }
        return kExitOk;
    }
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) throw SpecError("cannot write '" + cfg.out_path + "'");
    if (csv) {
        write_csv(grid, file);
    } else {
        write_pgm(grid, file);
    }
    Json doc;
    doc["resolution"] = grid.resolution;
    doc["side"] = grid.side();
    doc["set_pixels"] = grid.count_set();
    doc["prefix_count"] = big_json(product_count(aut, spec.q(), 2 * resolution));
    doc["out"] = cfg.out_path;
    emit(doc, out);
    return kExitOk;
}

// ---------------------------------------------------------------------------------------

struct Check {
    std::string name;
    std::string status;  // pass, fail or skipped
    std::string detail;
};

std::string real_text(Real x) { return Json(static_cast<double>(x)).dump(); }

Check check_enumeration(const PrefixAutomaton& aut, int q, long n_max) {
    Check c{"enumeration_vs_product", "pass", ""};
    long checked = 0;
    for (long n = 1; n <= n_max; ++n) {
        const BigInt product = product_count(aut, q, n);
        if (product > kEnumerationLimit) break;
        const BigInt enumerated = enumerate_X_prefixes(aut, q, n).count;
        if (enumerated != product) {
            c.status = "fail";
            c.detail = "n = " + std::to_string(n) + ": enumerated " + enumerated.str() + ", product " + product.str();
            return c;
        }
        checked = n;
    }
    c.detail = "exact for n = 1.." + std::to_string(checked);
    if (checked == 0) c.status = "skipped";
    return c;
}

Check check_normalization(const MarkovMeasure& measure, int q, long n_max) {
    Check c{"normalization", "pass", ""};
    Real worst = 0;
    long checked = 0;
    for (long n = 1; n <= n_max; ++n) {
        if (product_count(measure.automaton(), q, n) > kEnumerationLimit) break;
        worst = std::max(worst, std::abs(total_X_mass(measure, q, n) - 1));
        checked = n;
    }
    c.detail = "max |total mass - 1| = " + real_text(worst) + " over n = 1.." + std::to_string(checked);
    if (worst > kNormalizationTolerance) c.status = "fail";
    if (checked == 0) c.status = "skipped";
    return c;
}

Check check_telescoping(const EntropyProfile& profile) {
    const Real diff = std::abs(profile.partial_direct() - profile.partial_conditional());
    return {"telescoping", diff <= kTelescopingTolerance ? "pass" : "fail", "|direct - conditional| = " + real_text(diff)};
}

Check check_closed_form(const EntropyProfile& profile, const FixedPointSolution& sol) {
    const Bracket dim = hausdorff_dim(sol);
    const Real slack = 64 * static_cast<Real>(profile.depth()) * std::numeric_limits<Real>::epsilon();
    const bool ok = profile.s.lo <= dim.hi + slack && dim.lo <= profile.s.hi + slack;
    return {"closed_form", ok ? "pass" : "fail",
            "s in [" + real_text(profile.s.lo) + ", " + real_text(profile.s.hi) + "], (q-1) log_m t in [" + real_text(dim.lo) +
                ", " + real_text(dim.hi) + "]"};
}

bool has_branching_row(const MarkovMeasure& measure) {
    const PrefixAutomaton& aut = measure.automaton();
    for (int v = 0; v < aut.size(); ++v) {
        if (!aut.is_frontier(v) && aut.outdegree(v) >= 2) return true;
    }
    return false;
}

Check check_dominance(const MarkovMeasure& measure, const EntropyProfile& profile, int q, std::uint64_t seed) {
    Check c{"dominance", "pass", ""};
    if (!has_branching_row(measure)) {
        c.status = "skipped";
        c.detail = "no state has two continuations";
        return c;
    }
    Real smallest = std::numeric_limits<Real>::infinity();
    int failures = 0;
    for (int i = 0; i < kPerturbations; ++i) {
        const std::uint64_t s = SplitMix64::stream(seed, 0x646f6d, static_cast<std::uint64_t>(i))();
        const MarkovMeasure candidate = perturb_rows(measure, kPerturbationAmplitude, s);
        const OptimalityGap gap = compare(profile, entropy_profile(candidate, profile.depth(), q));
        smallest = std::min(smallest, gap.gap - gap.slack);
        if (!gap.strictly_dominated()) ++failures;
    }
    c.detail = std::to_string(kPerturbations - failures) + "/" + std::to_string(kPerturbations) +
               " perturbations strictly worse; min gap beyond slack " + real_text(smallest);
    if (failures > 0) c.status = "fail";
    return c;
}

Check check_sampling(const MarkovMeasure& measure, int q, std::uint64_t seed) {
    const long n = sampling_length(q);
    const int replicates = 20;
    const SampleRun run = sample_pointwise_dimension(measure, q, n, replicates, seed);
    const Real expected = expected_pointwise(measure, q, n);
    const Real allowed = std::max<Real>(3 * run.standard_error, 1e-12L);
    const Real diff = std::abs(run.mean - expected);
    return {"sampling", diff <= allowed ? "pass" : "fail",
            "n = " + std::to_string(n) + ", mean " + real_text(run.mean) + ", expected " + real_text(expected) + ", 3 SE " +
                real_text(3 * run.standard_error)};
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"json"});
    const OmegaSpec spec = load_spec(cfg);
    const PrefixAutomaton aut = build_automaton(spec);
    const int q = spec.q();
    const long n_max = cfg.n.value_or(16);
    if (n_max < 1) throw SpecError("--n must be >= 1");

    std::vector<Check> checks;
    checks.push_back(check_enumeration(aut, q, n_max));
    if (!aut.is_exact()) {
        for (const char* name : {"normalization", "telescoping", "closed_form", "dominance", "sampling"}) {
            checks.push_back({name, "skipped", "measures need an exact automaton"});
        }
    } else {
        const FixedPointSolution sol = solve_or_throw(aut, cfg, q);
        const MarkovMeasure measure = measure_under_test(cfg, sol);
        const EntropyProfile profile = entropy_profile(measure, cfg.depth, q);
        checks.push_back(check_normalization(measure, q, std::min<long>(n_max, 14)));
        checks.push_back(check_telescoping(profile));
        checks.push_back(check_closed_form(profile, sol));
        checks.push_back(check_dominance(measure, profile, q, cfg.seed));
        checks.push_back(check_sampling(measure, q, cfg.seed));
    }

    bool pass = true;
    Json list = Json::array();
    for (const Check& c : checks) {
        pass = pass && c.status != "fail";
        list.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
    }
    Json doc;
    doc["spec"] = spec_to_json(spec);
    doc["checks"] = list;
    doc["pass"] = pass;
    emit(doc, out);
    return pass ? kExitOk : kExitVerificationFailed;
}

void add_common_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--spec", cfg.spec_path, "Spec JSON file");
    sub->add_option("--preset", cfg.preset, "golden, tribonacci, forbidden111, full:<m> or beta:<value>");
    sub->add_option("--full-shift", cfg.full_shift, "Full shift on m symbols")->check(CLI::Range(2, 64));
    sub->add_option("--m", cfg.m, "Alphabet size")->check(CLI::Range(2, 64));
    sub->add_option("--q", cfg.q, "Multiplicative base")->check(CLI::Range(2, 64));
    sub->add_option("--tol", cfg.tol, "Bracket width tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--depth", cfg.depth, "Series depth K")->check(CLI::Range(1, 2000));
    sub->add_option("--trunc", cfg.trunc, "Truncation depth D of beta-shifts")->check(CLI::Range(1, 100000));
    sub->add_option("--n", cfg.n, "Prefix length (render: resolution exponent N)");
    sub->add_option("--replicates", cfg.replicates, "Sampling replicates")->check(CLI::Range(1, 1000000));
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--out", cfg.out_path, "Output file");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "pgm"}));
    sub->add_option("--measure", cfg.measure_path, "Measure JSON to use instead of the optimal measure");
    sub->add_option("--precision", cfg.precision, "Fixed-point arithmetic")->check(CLI::IsMember({"extended", "multi"}));
    sub->add_flag("--timing", cfg.timing, "Include wall-clock timing in the report");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dimensions of multiplicative subshifts X_Omega"};
    app.name("mshift");
    app.require_subcommand(1);
    RunConfig cfg;
    const std::vector<std::pair<const char*, const char*>> commands = {
        {"dim", "Hausdorff and Minkowski dimension brackets"},
        {"measure", "Optimal measure on Omega"},
        {"verify", "Run the oracle checks"},
        {"count", "Exact prefix counts of X_Omega"},
        {"sample", "Monte-Carlo pointwise dimension"},
        {"render", "Bitmap of the interleaved planar set (m = 2, q = 2)"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common_options(sub, cfg);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "mshift: " << e.what() << '\n';
        return kExitInvalidInput;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.command == "render" && cfg.format == "json") cfg.format = "pgm";

    try {
        if (cfg.command == "dim") return cmd_dim(cfg, out);
        if (cfg.command == "measure") return cmd_measure(cfg, out);
        if (cfg.command == "verify") return cmd_verify(cfg, out);
        if (cfg.command == "count") return cmd_count(cfg, out);
        if (cfg.command == "sample") return cmd_sample(cfg, out);
        return cmd_render(cfg, out);
    } catch (const NotConverged& e) {
        err << "mshift: " << e.what() << '\n';
        return kExitNotConverged;
    } catch (const std::invalid_argument& e) {
        err << "mshift: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const TruncationError& e) {
        err << "mshift: " << e.what() << '\n';
        return kExitInvalidInput;
    }
}

}  // namespace mshift
