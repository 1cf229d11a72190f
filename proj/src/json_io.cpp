#include "mshift/json_io.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace mshift {

namespace {

const std::set<std::string>& allowed_keys(std::string_view variant) {
    static const std::set<std::string> full{"variant", "m", "q"};
    static const std::set<std::string> sft{"variant", "m", "q", "matrix"};
    static const std::set<std::string> multi{"variant", "m", "q", "step", "forbidden"};
    static const std::set<std::string> beta{"variant", "m", "q", "beta", "digits", "truncation_depth"};
    static const std::set<std::string> automaton{"variant", "m", "q", "automaton"};
    if (variant == "full_shift") return full;
    if (variant == "sft") return sft;
    if (variant == "multi_step_sft") return multi;
    if (variant == "beta_shift") return beta;
    if (variant == "automaton") return automaton;
    throw SpecError("unknown variant '" + std::string(variant) + "'");
}

int get_int(const Json& doc, const char* key) {
    const Json& v = doc.at(key);
    if (!v.is_number_integer()) throw SpecError(std::string("'") + key + "' must be an integer");
    return v.get<int>();
}

int get_int_or(const Json& doc, const char* key, int fallback) { return doc.contains(key) ? get_int(doc, key) : fallback; }

BetaReal beta_value(const Json& v) {
    if (v.is_string()) return parse_beta(v.get<std::string>());
    // dump() gives the shortest decimal that round-trips the double.
    if (v.is_number()) return parse_beta(v.dump());
    throw SpecError("'beta' must be a number or a string");
}

int ceil_to_int(const BetaReal& x) {
    return static_cast<int>(boost::multiprecision::ceil(x).convert_to<long long>());
}

PrefixAutomaton automaton_from_json(const Json& doc, int m) {
    for (const auto& [key, _] : doc.items()) {
        if (key != "root" && key != "edges" && key != "labels") throw SpecError("unknown automaton key '" + key + "'");
    }
    const int root = get_int(doc, "root");
    auto edges = doc.at("edges").get<std::vector<std::vector<int>>>();
    std::vector<Word> labels;
    if (doc.contains("labels")) {
        for (const auto& l : doc.at("labels")) labels.push_back(parse_word(l.get<std::string>(), m));
    } else {
        labels.assign(edges.size(), Word{});
    }
    return PrefixAutomaton(m, root, std::move(edges), std::move(labels));
}

Json row_json(std::span<const Real> row) {
    Json out = Json::array();
    for (Real p : row) out.push_back(static_cast<double>(p));
    return out;
}

}  // namespace

OmegaSpec spec_from_json(const Json& doc) {
    try {
        if (!doc.is_object()) throw SpecError("spec must be a JSON object");
        if (!doc.contains("variant")) throw SpecError("spec is missing 'variant'");
        const std::string variant = doc.at("variant").get<std::string>();
        const auto& allowed = allowed_keys(variant);
        for (const auto& [key, _] : doc.items()) {
            if (!allowed.count(key)) throw SpecError("key '" + key + "' is not valid for variant " + variant);
        }
        const int q = get_int_or(doc, "q", 2);

        if (variant == "full_shift") return OmegaSpec::full_shift(get_int(doc, "m"), q);

        if (variant == "sft") {
            auto matrix = doc.at("matrix").get<BinaryMatrix>();
            if (doc.contains("m") && get_int(doc, "m") != static_cast<int>(matrix.size())) {
                throw SpecError("'m' does not match the matrix size");
            }
            return OmegaSpec::sft(std::move(matrix), q);
        }

        if (variant == "multi_step_sft") {
            const int m = get_int(doc, "m");
            std::vector<Word> forbidden;
            for (const auto& w : doc.at("forbidden")) forbidden.push_back(parse_word(w.get<std::string>(), m));
            int step = forbidden.empty() ? 2 : static_cast<int>(forbidden.front().size());
            step = get_int_or(doc, "step", step);
            return OmegaSpec::multi_step(m, step, std::move(forbidden), q);
        }

        if (variant == "beta_shift") {
            if (doc.contains("beta") == doc.contains("digits")) {
                throw SpecError("beta_shift needs exactly one of 'beta' and 'digits'");
            }
            if (doc.contains("beta")) {
                const BetaReal beta = beta_value(doc.at("beta"));
                const int m = doc.contains("m") ? get_int(doc, "m") : std::max(2, ceil_to_int(beta));
                return OmegaSpec::beta(beta, m, q, get_int_or(doc, "truncation_depth", OmegaSpec::kDefaultBetaDepth));
            }
            Word digits = doc.at("digits").get<Word>();
            if (doc.contains("truncation_depth")) {
                const int depth = get_int(doc, "truncation_depth");
                if (depth < 1 || depth > static_cast<int>(digits.size())) {
                    throw SpecError("'truncation_depth' must be between 1 and the number of digits");
                }
                digits.resize(static_cast<std::size_t>(depth));
            }
            const int m = doc.contains("m") ? get_int(doc, "m") : *std::max_element(digits.begin(), digits.end()) + 1;
            return OmegaSpec::beta_digits(std::move(digits), m, q);
        }

        const int m = get_int(doc, "m");
        return OmegaSpec::explicit_automaton(automaton_from_json(doc.at("automaton"), m), q);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("malformed spec: ") + e.what());
    }
}

Json spec_to_json(const OmegaSpec& spec) {
    Json doc;
    doc["variant"] = std::string(variant_name(spec.variant()));
    doc["m"] = spec.m();
    doc["q"] = spec.q();
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, SftMatrix>) {
                doc["matrix"] = p.matrix;
            } else if constexpr (std::is_same_v<T, MultiStepSft>) {
                doc["step"] = p.step;
                Json words = Json::array();
                for (const Word& w : p.forbidden) words.push_back(format_word(w, spec.m()));
                doc["forbidden"] = words;
            } else if constexpr (std::is_same_v<T, BetaShift>) {
                doc["digits"] = p.digits;
            } else if constexpr (std::is_same_v<T, ExplicitAutomaton>) {
                const PrefixAutomaton& a = p.automaton;
                Json edges = Json::array();
                Json labels = Json::array();
                for (int v = 0; v < a.size(); ++v) {
                    edges.push_back(std::vector<int>(a.edges(v).begin(), a.edges(v).end()));
                    labels.push_back(format_word(a.label(v), a.alphabet_size()));
                }
                doc["automaton"] = {{"root", a.root()}, {"edges", edges}, {"labels", labels}};
            }
        },
        spec.payload());
    return doc;
}

OmegaSpec preset_spec(std::string_view name, int q, int beta_depth) {
    if (name == "golden") return OmegaSpec::sft({{1, 1}, {1, 0}}, q);
    if (name == "tribonacci") return OmegaSpec::sft({{1, 1, 1}, {1, 0, 0}, {0, 1, 0}}, q);
    if (name == "forbidden111") return OmegaSpec::multi_step(2, 3, {{1, 1, 1}}, q);
    if (name.starts_with("full:")) {
        const std::string arg(name.substr(5));
        std::size_t used = 0;
        int m = 0;
        try {
            m = std::stoi(arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != arg.size()) throw SpecError("preset full:<m> needs an integer m, got '" + arg + "'");
        return OmegaSpec::full_shift(m, q);
    }
    if (name.starts_with("beta:")) {
        const BetaReal beta = parse_beta(name.substr(5));
        return OmegaSpec::beta(beta, std::max(2, ceil_to_int(beta)), q, beta_depth);
    }
    throw SpecError("unknown preset '" + std::string(name) +
                    "' (expected golden, tribonacci, forbidden111, full:<m> or beta:<value>)");
}

Json bracket_json(const Bracket& b) { return {{"lo", to_double_down(b.lo)}, {"hi", to_double_up(b.hi)}}; }

Json big_json(const BigInt& x) { return x.str(); }

Json solution_json(const FixedPointSolution& sol) {
    Json out = Json::object();
    for (int v = 0; v < sol.automaton.size(); ++v) {
        out[sol.automaton.name(v)] = {to_double_down(sol.lo[v]), to_double_up(sol.hi[v])};
    }
    return out;
}

Json report_json(const DimensionReport& report) {
    Json doc;
    doc["hausdorff"] = bracket_json(report.hausdorff);
    doc["minkowski"] = bracket_json(report.minkowski);
    doc["verdict"] = std::string(equality_name(report.equality));
    doc["converged"] = report.converged();
    doc["series_depth"] = report.series_depth;
    doc["iterations"] = report.solution.iterations;
    doc["residual"] = static_cast<double>(report.solution.residual);
    doc["t"] = solution_json(report.solution);
    doc["prefix_counts"] = counts_json(report.prefix_counts);
    Json symmetry = {{"symmetric", report.symmetry.symmetric},
                     {"checked_depth", report.symmetry.checked_depth},
                     {"decided_forever", report.symmetry.decided_forever}};
    if (report.symmetry.witness) {
        const int m = report.solution.automaton.alphabet_size();
        symmetry["witness"] = {format_word(report.symmetry.witness->first, m), format_word(report.symmetry.witness->second, m)};
    }
    doc["symmetry"] = symmetry;
    doc["warnings"] = report.warnings;
    return doc;
}

Json measure_json(const MarkovMeasure& measure) {
    const PrefixAutomaton& aut = measure.automaton();
    Json states = Json::array();
    Json transitions = Json::object();
    for (int v = 0; v < aut.size(); ++v) {
        states.push_back(aut.name(v));
        transitions[aut.name(v)] = row_json(measure.row(v));
    }
    return {{"states", states}, {"transitions", transitions}, {"initial", row_json(measure.row(aut.root()))}};
}

MarkovMeasure measure_from_json(const Json& doc, const PrefixAutomaton& aut) {
    try {
        if (!doc.is_object()) throw SpecError("measure must be a JSON object");
        for (const auto& [key, _] : doc.items()) {
            if (key != "states" && key != "transitions" && key != "initial") throw SpecError("unknown measure key '" + key + "'");
        }
        const Json& transitions = doc.at("transitions");
        for (const auto& [name, _] : transitions.items()) {
            if (!aut.find(name)) throw SpecError("measure names unknown state '" + name + "'");
        }
        const auto m = static_cast<std::size_t>(aut.alphabet_size());
        MarkovMeasure::Rows rows(static_cast<std::size_t>(aut.size()));
        for (int v = 0; v < aut.size(); ++v) {
            const std::string name = aut.name(v);
            const Json* source = nullptr;
            if (transitions.contains(name)) {
                source = &transitions.at(name);
            } else if (v == aut.root() && doc.contains("initial")) {
                source = &doc.at("initial");
            }
            if (source == nullptr) {
                if (aut.is_frontier(v)) continue;
                throw SpecError("measure has no row for state '" + name + "'");
            }
            auto row = source->get<std::vector<double>>();
            if (row.empty() && aut.is_frontier(v)) continue;
            if (row.size() != m) throw SpecError("row of state '" + name + "' must have " + std::to_string(m) + " entries");
            rows[static_cast<std::size_t>(v)].assign(row.begin(), row.end());
        }
        return MarkovMeasure(aut, std::move(rows));
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("malformed measure: ") + e.what());
    }
}

Json counts_json(const PrefixCountTable& counts) {
    Json out = Json::array();
    for (const BigInt& n : counts.counts()) out.push_back(big_json(n));
    return out;
}

Json sample_json(const SampleRun& run) {
    Json values = Json::array();
    for (Real v : run.values) values.push_back(static_cast<double>(v));
    return {{"seed", run.seed},
            {"n", run.n},
            {"replicates", run.replicates},
            {"regular_n", run.regular_n},
            {"mean", static_cast<double>(run.mean)},
            {"stddev", static_cast<double>(run.stddev)},
            {"standard_error", static_cast<double>(run.standard_error)},
            {"values", values}};
}

}  // namespace mshift
