#pragma once

// Bitmask evaluation engine shared by the satisfaction relation and the model
// search.  Worlds and elements are indices; sets of either are uint64 masks.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pluralis/formula.hpp"
#include "pluralis/model.hpp"

namespace pluralis::detail {

using Mask = std::uint64_t;

constexpr int kMaxEngineWorlds = 64;
constexpr int kMaxEngineDomain = 20;

struct Structure {
  int nW = 0;
  int nD = 0;
  bool variable = false;
  std::vector<Mask> succ;   // [w]
  std::vector<Mask> inner;  // [w]; all ones in fixed mode
  std::vector<int> sconst;  // [c]
  std::vector<Mask> pconst; // [c * nW + w]; 0 = undefined
  // Extensions as bitsets: singular predicates over tuple codes in base nD,
  // plural predicates over element masks.
  std::vector<std::vector<Mask>> spred;  // [p * nW + w]
  std::vector<std::vector<Mask>> ppred;  // [p * nW + w]

  void reset(int worlds, int elements, bool var_mode, std::size_t n_sconst, std::size_t n_pconst,
             const std::vector<int>& spred_arity, std::size_t n_ppred);
};

struct STerm {
  bool var = false;
  int idx = 0;
};

struct PTerm {
  enum class Kind { Var, Const, Adj } kind = Kind::Var;
  int idx = 0;
  int base = -1;
  STerm adjunct;
};

enum class Op {
  SPred,
  PPred,
  In,
  Eq,
  ExistS,
  ExistP,
  Not,
  And,
  Or,
  Implies,
  Iff,
  AllS,
  SomeS,
  AllP,
  SomeP,
  Box,
};

struct Node {
  Op op = Op::Not;
  int a = -1;
  int b = -1;
  int sym = -1;
  int slot = -1;
  std::vector<STerm> args;
  int pt = -1;
  int depth = 0;      // modal depth of the subformula (body, for quantifiers)
  bool closed = false;
};

struct Program {
  std::vector<std::string> sconsts, pconsts, spreds, ppreds;
  std::vector<int> spred_arity;

  std::vector<Node> nodes;
  std::vector<PTerm> pterms;
  std::vector<int> roots;

  // Free variables occupy the first slots, in sorted name order.
  std::vector<std::string> free_singular, free_plural;
  int n_sslots = 0;
  int n_pslots = 0;
  int max_depth = 0;
};

// Compiles the roots (abbreviations expanded) against the symbol order of
// `sig`, which must cover every symbol.  Free variables with the same name
// share a slot across roots.
[[nodiscard]] Program compile(const std::vector<Formula>& roots, const Signature& sig);

class Evaluator {
public:
  explicit Evaluator(const Program& program);

  // Resets caches and per-structure tables; slot values are set to defaults.
  void bind(const Structure& s);
  [[nodiscard]] bool eval(int node, int world);
  [[nodiscard]] Mask reach(int world, int depth) const;
  [[nodiscard]] Mask lowest_plural() const { return s_->variable ? 0 : 1; }

  [[nodiscard]] const Program& program() const { return p_; }
  [[nodiscard]] const Structure& structure() const { return *s_; }

  int& sval(int slot) { return sval_[slot]; }
  Mask& pval(int slot, int world) { return pval_[static_cast<std::size_t>(slot) * s_->nW + world]; }

  // Assigns the free variables in every way that can affect truth at
  // `world` (plural values only at worlds within the program's modal depth);
  // other worlds keep the default.  Stops as soon as visit() returns true.
  bool sweep_free(int world, const std::function<bool()>& visit);

private:
  [[nodiscard]] int sdenote(const STerm& t) const {
    return t.var ? sval_[t.idx] : s_->sconst[t.idx];
  }
  [[nodiscard]] Mask pdenote(int pt, int world) const;
  bool compute(int node, int world);

  const Program& p_;
  const Structure* s_ = nullptr;
  std::vector<int> sval_;
  std::vector<Mask> pval_;
  std::vector<std::int8_t> cache_;
  std::vector<std::vector<Mask>> reach_;  // [depth][w]
};

// Sorted world and element names, giving the index order of a Structure.
struct Naming {
  std::vector<World> worlds;
  std::vector<Element> elements;
};

// Loads a (validated) model for the symbols of `program`.  Throws Error for
// symbols the model does not interpret or predicate arity mismatches.
Naming load_structure(const Model& m, const Program& program, Structure& out);

}  // namespace pluralis::detail
