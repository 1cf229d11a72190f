#pragma once

// JSON documents for specs, reports, measures and sampling runs.
//
// Brackets are written as {"lo": ..., "hi": ...} with both ends rounded outward to double.
// Big integers are written as decimal strings.

#include <string_view>

#include <json.hpp>

#include "mshift/dimension.hpp"
#include "mshift/measures.hpp"
#include "mshift/omega.hpp"
#include "mshift/oracle.hpp"

namespace mshift {

using Json = nlohmann::ordered_json;

/// Reads {"variant", "m", "q", ...payload}. Unknown keys, and keys that do not belong to
/// the variant, are rejected with SpecError.
OmegaSpec spec_from_json(const Json& doc);
Json spec_to_json(const OmegaSpec& spec);

/// golden, tribonacci, forbidden111, full:<m>, beta:<value>. `q` defaults to 2, `beta_depth`
/// is the truncation depth of beta presets.
OmegaSpec preset_spec(std::string_view name, int q = 2, int beta_depth = OmegaSpec::kDefaultBetaDepth);

Json bracket_json(const Bracket& b);
Json big_json(const BigInt& x);

/// {state name: [lo, hi]}.
Json solution_json(const FixedPointSolution& sol);
Json report_json(const DimensionReport& report);

/// {"states": [...], "transitions": {state: [p_0..p_{m-1}]}, "initial": [...]} using the
/// first layer of rows; "initial" is the row of the root.
Json measure_json(const MarkovMeasure& measure);

/// Inverse of measure_json on a given automaton. Rows are matched by state name; a missing
/// root row is taken from "initial". Throws SpecError on malformed documents.
MarkovMeasure measure_from_json(const Json& doc, const PrefixAutomaton& aut);

Json counts_json(const PrefixCountTable& counts);
Json sample_json(const SampleRun& run);

}  // namespace mshift
