#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pluralis {

// Base class for every recoverable error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Byte offsets [start, end) into some input text.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class ParseError : public Error {
public:
  ParseError(std::string message, SourceSpan span, std::vector<std::string> expected = {})
      : Error(std::move(message)), span_{span}, expected_{std::move(expected)} {}

  [[nodiscard]] const SourceSpan& span() const { return span_; }
  [[nodiscard]] const std::vector<std::string>& expected() const { return expected_; }

private:
  SourceSpan span_;
  std::vector<std::string> expected_;
};

// Raised when a search would exceed the configured valuation-sweep ceiling.
class SweepCeilingExceeded : public Error {
public:
  SweepCeilingExceeded(double estimate, double ceiling);

  [[nodiscard]] double estimate() const { return estimate_; }
  [[nodiscard]] double ceiling() const { return ceiling_; }

private:
  double estimate_;
  double ceiling_;
};

}  // namespace pluralis
