#pragma once

// JSON encodings of models and valuations.
//
//   model:     {"worlds": [..], "access": [[w,u],..], "domain": [..],
//               "inner_domains": {w: [e,..]}?, "singular_consts": {a: e},
//               "plural_consts": {aa: {w: [e,..]}},
//               "singular_preds": {P: {w: [[e,..],..]}},
//               "plural_preds": {FF: {w: [[e,..],..]}}}
//   valuation: {"singular": {x: e}, "plural": {xx: {w: [e,..]}}}
//
// Output arrays are sorted.  Omitting "inner_domains" means fixed domain.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pluralis/error.hpp"
#include "pluralis/model.hpp"

namespace pluralis {

// Throws ParseError on malformed JSON, duplicate keys, wrong shapes and an
// empty world set.  Other invariants are left to validate_model.
[[nodiscard]] Model parse_model(std::string_view text);
[[nodiscard]] Valuation parse_valuation(std::string_view text);

[[nodiscard]] nlohmann::json model_to_json(const Model& m);
[[nodiscard]] nlohmann::json valuation_to_json(const Valuation& v);
[[nodiscard]] Model model_from_json(const nlohmann::json& j);
[[nodiscard]] Valuation valuation_from_json(const nlohmann::json& j);

// Parses JSON text rejecting duplicate object keys.
[[nodiscard]] nlohmann::json parse_json_strict(std::string_view text);

}  // namespace pluralis
