#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "trihyp/reduction.hpp"
#include "trihyp/symbols.hpp"

namespace trihyp {

using json = nlohmann::json;

/// FNV-1a of the canonical config dump; embedded in every report.
std::uint64_t config_hash(const json& j);
std::string config_hash_hex(const json& j);

/// Operator definition from the documented JSON schema:
///   {"q1": "<expr>", "q2": "<expr>", "q3": "<expr>",
///    "p2_re": "<expr>", "p2_im": "<expr>",
///    "domain": {"T": .., "X": [lo, hi]}}
/// Missing symbol entries default to zero.
OperatorModel load_operator(const json& j);

/// Reduced operator round-trip. Expression-backed fields serialize as
/// their source text; lambda-backed fields are tabulated as xi-polynomial
/// coefficients on a (t,x) grid and reload as interpolating fields.
json reduced_to_json(const ReducedOperator& r, const DomainBox& box);
ReducedOperator reduced_from_json(const json& j);

/// Minimal CSV writer: header then rows.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// CSV with arbitrary cells (used where a column is textual, e.g. model ids).
void write_csv_mixed(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

void write_text(const std::string& path, const std::string& content);

}  // namespace trihyp
