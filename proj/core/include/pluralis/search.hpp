#pragma once

// Bounded model enumeration, validity and local-consequence checking.

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pluralis/formula.hpp"
#include "pluralis/model.hpp"

namespace pluralis {

enum class FrameClass { K, T, S4, S5 };

[[nodiscard]] const char* frame_class_name(FrameClass fc);
[[nodiscard]] FrameClass parse_frame_class(std::string_view text);

struct SearchBounds {
  int max_worlds = 2;
  int max_domain = 2;
  FrameClass frame_class = FrameClass::K;
  DomainMode mode = DomainMode::Fixed;

  friend bool operator==(const SearchBounds&, const SearchBounds&) = default;
};

// Largest sizes the enumerator accepts.
constexpr int kMaxSearchWorlds = 6;
constexpr int kMaxSearchDomain = 6;

struct SearchOptions {
  double sweep_ceiling = 1e8;
};

struct Countermodel {
  Model model;
  World world;
  Valuation valuation;

  friend bool operator==(const Countermodel&, const Countermodel&) = default;
};

struct Verdict {
  SearchBounds bounds;
  std::uint64_t models_examined = 0;
  std::optional<Countermodel> countermodel;

  [[nodiscard]] bool valid() const { return !countermodel.has_value(); }
};

struct AuditQuery {
  std::vector<Formula> premises;
  Formula conclusion;
  SearchBounds bounds;
};

// Streams every model over `sig` within the bounds: sizes by worlds then
// domain, and within a size in lexicographic order of the interpretation
// (frame first).  Worlds are w1..wn, elements d1..dm.
class ModelEnumerator {
public:
  ModelEnumerator(const Signature& sig, const SearchBounds& bounds);
  ~ModelEnumerator();
  ModelEnumerator(ModelEnumerator&&) noexcept;
  ModelEnumerator& operator=(ModelEnumerator&&) noexcept;

  // Returns false once the stream is exhausted.
  bool next(Model& out);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

[[nodiscard]] std::vector<Model> enumerate_models(const Signature& sig, const SearchBounds& bounds);
// Saturates at UINT64_MAX.
[[nodiscard]] std::uint64_t count_models(const Signature& sig, const SearchBounds& bounds);

// Estimated number of evaluations a search would perform.
[[nodiscard]] double estimate_sweep(const std::vector<Formula>& formulas, const Signature& sig,
                                    const SearchBounds& bounds);

// First countermodel in enumeration order, or valid up to bounds.  The
// signature is inferred from the formulas, merged with `extra` if given.
// Throws SweepCeilingExceeded before searching if the estimate is too large.
[[nodiscard]] Verdict check_validity(const Formula& f, const SearchBounds& bounds,
                                     const SearchOptions& options = {});
[[nodiscard]] Verdict check_validity(const Formula& f, const Signature& extra,
                                     const SearchBounds& bounds, const SearchOptions& options = {});
// Local consequence: premises and conclusion at one world under one valuation.
[[nodiscard]] Verdict check_entailment(const AuditQuery& q, const SearchOptions& options = {});

struct DesignatedModel {
  Model model;
  World world;
  Valuation valuation;
};

// Two worlds 0 and 1 seeing each other, D = {pi, e}, x = pi and xx taking
// {pi} at 0 and {e} at 1.  Variable mode adds inner domains equal to D.
[[nodiscard]] DesignatedModel canonical_necinc_countermodel(DomainMode mode);

[[nodiscard]] nlohmann::json bounds_to_json(const SearchBounds& b);
[[nodiscard]] nlohmann::json verdict_to_json(const Verdict& v);

}  // namespace pluralis
