#pragma once

// Named principles and schemas, with fixed- and variable-domain variants.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pluralis/formula.hpp"
#include "pluralis/model.hpp"

namespace pluralis {

struct PrincipleId {
  std::string name;
  DomainMode mode = DomainMode::Fixed;
};

// NecInc NecNInc Indisc Cov UniAdj Nonemptiness Comprehension Extensionality
// VNonemptiness VComprehension PartialRigidification PartialRigidificationV
// Traversal UniformTraversal NecId
[[nodiscard]] const std::vector<std::string>& principle_names();
[[nodiscard]] bool is_principle_name(std::string_view name);
// True for the ids that only make sense with inner domains.
[[nodiscard]] bool requires_variable_mode(std::string_view name);
[[nodiscard]] const char* principle_summary(std::string_view name);

// Schemas are returned as a canonical instance (Comprehension with P(x),
// Indisc with the context FF(.), traversals over aa and a, b, c).
// Throws Error for an unknown name or a forbidden mode.
[[nodiscard]] Formula get_principle(const PrincipleId& id);

// exists x. phi -> exists xx. forall x. (x in xx <-> phi), or the guarded
// variable-domain schema.  `xx` defaults to the first plural name not free in
// phi.  Throws Error("modal instance rejected") for a modal phi unless
// allow_modal, and Error for a requested xx that is free in phi.
[[nodiscard]] Formula instantiate_comprehension(const Formula& phi, const std::string& x,
                                                DomainMode mode, bool allow_modal = false,
                                                std::optional<std::string> xx = std::nullopt);

// tt == uu -> (phi(tt) <-> phi(uu)), where phi(t) replaces the free plural
// variable `hole` of `context` by t.
[[nodiscard]] Formula instantiate_indisc(const Formula& context, const std::string& hole,
                                         const Term& tt, const Term& uu, bool allow_modal = false);

[[nodiscard]] Formula partial_rigidification(DomainMode mode);

// forall x. (x in aa <-> (x = c1 | ... | x = cn)), boxed if necessitated.
[[nodiscard]] Formula traversal(const std::string& aa, const std::vector<std::string>& cs,
                                bool necessitated);

// Every symbol the principle library uses.
[[nodiscard]] Signature standard_signature();

}  // namespace pluralis
