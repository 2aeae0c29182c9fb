#include "enumerator.hpp"

#include <limits>
#include <map>
#include <mutex>

#include "pluralis/error.hpp"

namespace pluralis::detail {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t diagonal(int n) {
  std::uint64_t d = 0;
  for (int i = 0; i < n; ++i) d |= std::uint64_t{1} << (i * n + i);
  return d;
}

// Spreads the bits of `v` over the off-diagonal positions, in order.
std::uint64_t off_diagonal(int n, std::uint64_t v) {
  std::uint64_t code = 0;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if ((v >> k) & 1U) code |= std::uint64_t{1} << (i * n + j);
      ++k;
    }
  }
  return code;
}

bool holds(int n, std::uint64_t code, int i, int j) { return (code >> (i * n + j)) & 1U; }

bool transitive(int n, std::uint64_t code) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (holds(n, code, i, j))
        for (int k = 0; k < n; ++k)
          if (holds(n, code, j, k) && !holds(n, code, i, k)) return false;
  return true;
}

bool symmetric(int n, std::uint64_t code) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (holds(n, code, i, j) != holds(n, code, j, i)) return false;
  return true;
}

const std::vector<std::uint64_t>& closed_frames(int n, FrameClass fc) {
  static std::mutex mu;
  static std::map<std::pair<int, FrameClass>, std::vector<std::uint64_t>> cache;
  std::lock_guard lock{mu};
  auto key = std::make_pair(n, fc);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::uint64_t> codes;
  const std::uint64_t free_bits = static_cast<std::uint64_t>(n) * n - n;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << free_bits); ++v) {
    const std::uint64_t code = diagonal(n) | off_diagonal(n, v);
    if (!transitive(n, code)) continue;
    if (fc == FrameClass::S5 && !symmetric(n, code)) continue;
    codes.push_back(code);
  }
  return cache.emplace(key, std::move(codes)).first->second;
}

std::uint64_t pow2(std::uint64_t bits) { return bits >= 64 ? kSaturated : std::uint64_t{1} << bits; }

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

}  // namespace

std::uint64_t frame_count(int n, FrameClass fc) {
  static constexpr std::uint64_t preorders[] = {1, 1, 4, 29, 355, 6942, 209527};
  static constexpr std::uint64_t partitions[] = {1, 1, 2, 5, 15, 52, 203};
  const auto nn = static_cast<std::uint64_t>(n) * n;
  switch (fc) {
    case FrameClass::K: return pow2(nn);
    case FrameClass::T: return pow2(nn - n);
    case FrameClass::S4: return n <= 6 ? preorders[n] : closed_frames(n, fc).size();
    case FrameClass::S5: return n <= 6 ? partitions[n] : closed_frames(n, fc).size();
  }
  return 0;
}

std::uint64_t frame_code(int n, FrameClass fc, std::uint64_t index) {
  switch (fc) {
    case FrameClass::K: return index;
    case FrameClass::T: return diagonal(n) | off_diagonal(n, index);
    case FrameClass::S4:
    case FrameClass::S5:
      // The identity relation is the least member of both classes.
      if (index == 0) return diagonal(n);
      return closed_frames(n, fc).at(index);
  }
  return 0;
}

void check_bounds(const SearchBounds& bounds) {
  if (bounds.max_worlds < 1 || bounds.max_domain < 1) throw Error("bounds must be positive");
  if (bounds.max_worlds > kMaxSearchWorlds || bounds.max_domain > kMaxSearchDomain) {
    throw Error("bounds exceed the supported maximum of " + std::to_string(kMaxSearchWorlds) +
                " worlds and " + std::to_string(kMaxSearchDomain) + " elements");
  }
}

StructureEnumerator::StructureEnumerator(const Signature& sig, const SearchBounds& bounds,
                                         bool all_frames)
    : sig_{sig}, bounds_{bounds}, all_frames_{all_frames} {
  check_bounds(bounds);
  for (const auto& [name, arity] : sig_.singular_preds) {
    if (arity < 0) throw Error("predicate " + name + " has unknown arity");
    spred_arity_.push_back(arity);
  }
}

std::uint64_t StructureEnumerator::count_at(const Signature& sig, const SearchBounds& bounds,
                                            int worlds, int elements, bool all_frames) {
  const bool var = bounds.mode == DomainMode::Variable;
  std::uint64_t total = all_frames ? frame_count(worlds, bounds.frame_class) : 1;
  const std::uint64_t subsets = std::uint64_t{1} << elements;
  if (var) total = sat_mul(total, ipow(subsets, worlds));
  total = sat_mul(total, ipow(elements, static_cast<int>(sig.singular_consts.size())));
  total = sat_mul(total, ipow(var ? subsets : subsets - 1,
                              worlds * static_cast<int>(sig.plural_consts.size())));
  for (const auto& [name, arity] : sig.singular_preds) {
    total = sat_mul(total, ipow(pow2(ipow(elements, arity)), worlds));
  }
  total = sat_mul(total, ipow(pow2(subsets - 1), worlds * static_cast<int>(sig.plural_preds.size())));
  return total;
}

void StructureEnumerator::start_size() {
  const bool var = bounds_.mode == DomainMode::Variable;
  s_.reset(nW_, nD_, var, sig_.singular_consts.size(), sig_.plural_consts.size(), spred_arity_,
           sig_.plural_preds.size());
  digits_.clear();
  const std::uint64_t subsets = std::uint64_t{1} << nD_;
  const auto nW = static_cast<std::size_t>(nW_);
  digits_.push_back({DigitKind::Frame, 0, all_frames_ ? frame_count(nW_, bounds_.frame_class) : 1});
  if (var) {
    for (std::size_t w = 0; w < nW; ++w) digits_.push_back({DigitKind::Inner, w, subsets});
  }
  for (std::size_t c = 0; c < sig_.singular_consts.size(); ++c) {
    digits_.push_back({DigitKind::SConst, c, static_cast<std::uint64_t>(nD_)});
  }
  for (std::size_t c = 0; c < sig_.plural_consts.size(); ++c) {
    for (std::size_t w = 0; w < nW; ++w) {
      digits_.push_back({DigitKind::PConst, c * nW + w, var ? subsets : subsets - 1});
    }
  }
  std::size_t p = 0;
  for (const auto& [name, arity] : sig_.singular_preds) {
    const std::uint64_t tuples = ipow(nD_, arity);
    if (tuples > 63) {
      throw Error("predicate " + name + " of arity " + std::to_string(arity) +
                  " is too large to enumerate over " + std::to_string(nD_) + " elements");
    }
    for (std::size_t w = 0; w < nW; ++w) {
      digits_.push_back({DigitKind::SPred, p * nW + w, std::uint64_t{1} << tuples});
    }
    ++p;
  }
  for (std::size_t q = 0; q < sig_.plural_preds.size(); ++q) {
    for (std::size_t w = 0; w < nW; ++w) {
      digits_.push_back({DigitKind::PPred, q * nW + w, pow2(subsets - 1)});
    }
  }
  for (const auto& d : digits_) apply(d);
}

void StructureEnumerator::apply(const Digit& d) {
  switch (d.kind) {
    case DigitKind::Frame: {
      const std::uint64_t code = frame_code(nW_, bounds_.frame_class, d.value);
      for (int i = 0; i < nW_; ++i) {
        Mask succ = 0;
        for (int j = 0; j < nW_; ++j) {
          if ((code >> (i * nW_ + j)) & 1U) succ |= Mask{1} << j;
        }
        s_.succ[i] = succ;
      }
      break;
    }
    case DigitKind::Inner: s_.inner[d.target] = d.value; break;
    case DigitKind::SConst: s_.sconst[d.target] = static_cast<int>(d.value); break;
    case DigitKind::PConst: s_.pconst[d.target] = s_.variable ? d.value : d.value + 1; break;
    case DigitKind::SPred: s_.spred[d.target][0] = d.value; break;
    case DigitKind::PPred: s_.ppred[d.target][0] = d.value << 1; break;
  }
}

bool StructureEnumerator::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    nW_ = 1;
    nD_ = 1;
    start_size();
    return true;
  }
  for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
    if (it->value + 1 < it->radix) {
      ++it->value;
      apply(*it);
      return true;
    }
    it->value = 0;
    apply(*it);
  }
  if (++nD_ > bounds_.max_domain) {
    nD_ = 1;
    if (++nW_ > bounds_.max_worlds) {
      done_ = true;
      return false;
    }
  }
  start_size();
  return true;
}

Model to_model(const Structure& s, const Signature& sig) {
  Model m;
  for (int w = 0; w < s.nW; ++w) m.worlds.push_back("w" + std::to_string(w + 1));
  for (int e = 0; e < s.nD; ++e) m.domain.push_back("d" + std::to_string(e + 1));
  auto set_of = [&](Mask mk) {
    ElementSet es;
    for (int e = 0; e < s.nD; ++e) {
      if ((mk >> e) & 1U) es.insert(m.domain[e]);
    }
    return es;
  };
  for (int w = 0; w < s.nW; ++w) {
    for (int u = 0; u < s.nW; ++u) {
      if ((s.succ[w] >> u) & 1U) m.access.emplace(m.worlds[w], m.worlds[u]);
    }
  }
  if (s.variable) {
    std::map<World, ElementSet> inner;
    for (int w = 0; w < s.nW; ++w) inner[m.worlds[w]] = set_of(s.inner[w]);
    m.inner_domains = std::move(inner);
  }
  const auto nW = static_cast<std::size_t>(s.nW);
  std::size_t c = 0;
  for (const auto& name : sig.singular_consts) m.singular_consts[name] = m.domain[s.sconst[c++]];
  c = 0;
  for (const auto& name : sig.plural_consts) {
    auto& entries = m.plural_consts[name];
    for (std::size_t w = 0; w < nW; ++w) {
      const Mask mk = s.pconst[c * nW + w];
      if (mk != 0) entries.emplace_back(m.worlds[w], set_of(mk));
    }
    ++c;
  }
  std::size_t p = 0;
  for (const auto& [name, arity] : sig.singular_preds) {
    auto& per_world = m.singular_preds[name];
    const std::size_t tuples = static_cast<std::size_t>(ipow(s.nD, arity));
    for (std::size_t w = 0; w < nW; ++w) {
      auto& ext = per_world[m.worlds[w]];
      const auto& bits = s.spred[p * nW + w];
      for (std::size_t code = 0; code < tuples; ++code) {
        if (!((bits[code >> 6] >> (code & 63)) & 1U)) continue;
        Tuple t(arity);
        std::size_t rest = code;
        for (int i = arity - 1; i >= 0; --i) {
          t[i] = m.domain[rest % s.nD];
          rest /= s.nD;
        }
        ext.insert(std::move(t));
      }
    }
    ++p;
  }
  p = 0;
  for (const auto& name : sig.plural_preds) {
    auto& per_world = m.plural_preds[name];
    for (std::size_t w = 0; w < nW; ++w) {
      auto& ext = per_world[m.worlds[w]];
      const auto& bits = s.ppred[p * nW + w];
      for (Mask mk = 0; mk < (Mask{1} << s.nD); ++mk) {
        if ((bits[mk >> 6] >> (mk & 63)) & 1U) ext.insert(set_of(mk));
      }
    }
    ++p;
  }
  return m;
}

}  // namespace pluralis::detail

namespace pluralis {

struct ModelEnumerator::Impl {
  Signature sig;
  detail::StructureEnumerator en;
};

ModelEnumerator::ModelEnumerator(const Signature& sig, const SearchBounds& bounds)
    : impl_{std::make_unique<Impl>(Impl{sig, detail::StructureEnumerator{sig, bounds}})} {}
ModelEnumerator::~ModelEnumerator() = default;
ModelEnumerator::ModelEnumerator(ModelEnumerator&&) noexcept = default;
ModelEnumerator& ModelEnumerator::operator=(ModelEnumerator&&) noexcept = default;

bool ModelEnumerator::next(Model& out) {
  if (!impl_->en.next()) return false;
  out = detail::to_model(impl_->en.current(), impl_->sig);
  return true;
}

std::vector<Model> enumerate_models(const Signature& sig, const SearchBounds& bounds) {
  std::vector<Model> out;
  ModelEnumerator en{sig, bounds};
  Model m;
  while (en.next(m)) out.push_back(m);
  return out;
}

std::uint64_t count_models(const Signature& sig, const SearchBounds& bounds) {
  detail::check_bounds(bounds);
  std::uint64_t total = 0;
  for (int w = 1; w <= bounds.max_worlds; ++w) {
    for (int d = 1; d <= bounds.max_domain; ++d) {
      const std::uint64_t here = detail::StructureEnumerator::count_at(sig, bounds, w, d);
      constexpr auto top = std::numeric_limits<std::uint64_t>::max();
      total = here > top - total ? top : total + here;
    }
  }
  return total;
}

}  // namespace pluralis
