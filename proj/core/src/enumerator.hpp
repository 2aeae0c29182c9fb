#pragma once

#include <cstdint>
#include <vector>

#include "engine.hpp"
#include "pluralis/search.hpp"

namespace pluralis::detail {

// Relations are coded on n*n bits, bit i*n+j standing for (wi, wj).  Frames of
// a class are ordered by increasing code.
[[nodiscard]] std::uint64_t frame_count(int n, FrameClass fc);
[[nodiscard]] std::uint64_t frame_code(int n, FrameClass fc, std::uint64_t index);

// Odometer over interpretations, most significant digit first: frame, inner
// domains, singular constants, plural constants, singular predicates, plural
// predicates (each per world where applicable).
// Throws Error unless 1 <= worlds, elements <= the supported maxima.
void check_bounds(const SearchBounds& bounds);

class StructureEnumerator {
public:
  StructureEnumerator(const Signature& sig, const SearchBounds& bounds, bool all_frames = true);

  // Advances to the next structure; false once exhausted.
  bool next();
  [[nodiscard]] const Structure& current() const { return s_; }

  // Number of structures at one size.  Saturates.
  [[nodiscard]] static std::uint64_t count_at(const Signature& sig, const SearchBounds& bounds,
                                              int worlds, int elements, bool all_frames = true);

private:
  enum class DigitKind { Frame, Inner, SConst, PConst, SPred, PPred };
  struct Digit {
    DigitKind kind;
    std::size_t target;  // index into the structure field
    std::uint64_t radix;
    std::uint64_t value = 0;
  };

  void start_size();
  void apply(const Digit& d);

  Signature sig_;
  SearchBounds bounds_;
  bool all_frames_;
  std::vector<int> spred_arity_;
  int nW_ = 1;
  int nD_ = 0;
  bool started_ = false;
  bool done_ = false;
  std::vector<Digit> digits_;
  Structure s_;
};

// Canonical model for an enumerated structure over `sig`.
[[nodiscard]] Model to_model(const Structure& s, const Signature& sig);

}  // namespace pluralis::detail
