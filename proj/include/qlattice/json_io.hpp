#pragma once

// JSON surface: backend specifications, moment tables, and report documents.
//
// Backend files:
//   {"type": "finite_group", "mult_table": [[...]], "rep": [matrix, ...]}
//   {"type": "dual_group", "group": {...}, "generators": [[...], ...]}
//   {"type": "span_q", "q_diag": [...]}  or  {"type": "span_q", "q": matrix}
// Group objects: {"kind": "free"|"free_abelian", "rank": r},
// {"kind": "finite", "mult_table": [[...]]}, or {"kind": "free_product",
// "parts": [group, ...]}.  Generators use the group's flat integer element
// encoding.  Matrices are arrays of rows; an entry is a plain number or an
// [re, im] pair.  Writers always emit [re, im].
//
// Serialization is deterministic: ordered_json keeps insertion order and
// doubles render as shortest round-trip decimals.

#include <string>

#include <json.hpp>

#include "qlattice/amenability.hpp"
#include "qlattice/backend.hpp"
#include "qlattice/lattice.hpp"
#include "qlattice/moments.hpp"

namespace qlat {

using ordered_json = nlohmann::ordered_json;

Mat mat_from_json(const nlohmann::json& j);
ordered_json mat_to_json(const Mat& m);

GroupSpec group_from_json(const nlohmann::json& j);
ordered_json group_to_json(const GroupSpec& g);

// Throws config_error on schema violations (wrapping JSON type errors).
Backend backend_from_json(const nlohmann::json& j);
ordered_json backend_to_json(const Backend& b);
Backend load_backend(const std::string& path);

// One-line summary such as "dual(Z^2)" or "span_q(n=2)" for diagnostics.
std::string backend_describe(const Backend& b);

// {"max_len": k, "entries": {"abab": 6, ...}}
ordered_json moment_table_to_json(const MomentTable& t);
MomentTable moment_table_from_json(const nlohmann::json& j);

ordered_json axiom_report_to_json(const AxiomReport& r, double threshold);
ordered_json bratteli_to_json(const BratteliData& b);

// Spectral estimate in the report schema: lower_bounds, ratios,
// extrapolated, verdict, n, d, index, index_is_square.  The plain Kesten
// form has no associated lattice, so d falls back to the ceiling and the
// index fields are null.
ordered_json amenability_report(const std::string& test,
                                const SpectralEstimate& est, int n);
ordered_json amenability_report(const std::string& test,
                                const LatticeAmenability& la, int n);

}  // namespace qlat
