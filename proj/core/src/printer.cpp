#include "pluralis/syntax.hpp"

namespace pluralis {

namespace {

using K = Formula::Kind;

const char* binary_op(K k) {
  switch (k) {
    case K::And: return " & ";
    case K::Or: return " | ";
    case K::Implies: return " -> ";
    case K::Iff: return " <-> ";
    default: return "";
  }
}

bool right_assoc(K k) { return k == K::Implies; }

void emit_term(const Term& t, std::string& out) {
  if (t.kind() == Term::Kind::Adjunction) {
    emit_term(t.base(), out);
    out += " + ";
    emit_term(t.adjunct(), out);
    return;
  }
  out += t.name();
}

// `rightmost`: nothing follows this subformula at the current nesting level,
// so a quantifier may extend to the end without parentheses.
void emit(const Formula& f, bool rightmost, std::string& out);

void emit_paren(const Formula& f, std::string& out) {
  out += '(';
  emit(f, true, out);
  out += ')';
}

void emit(const Formula& f, bool rightmost, std::string& out) {
  const auto& ts = f.terms();
  switch (f.kind()) {
    case K::SingularPred:
    case K::PluralPred: {
      out += f.name();
      out += '(';
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ", ";
        emit_term(ts[i], out);
      }
      out += ')';
      return;
    }
    case K::IsOneOf:
      emit_term(ts[0], out);
      out += " in ";
      emit_term(ts[1], out);
      return;
    case K::Identity:
      emit_term(ts[0], out);
      out += " = ";
      emit_term(ts[1], out);
      return;
    case K::SamePlurality:
      emit_term(ts[0], out);
      out += " == ";
      emit_term(ts[1], out);
      return;
    case K::ExistsPredS:
    case K::ExistsPredP:
      out += "E! ";
      emit_term(ts[0], out);
      return;
    case K::Not:
    case K::Box:
    case K::Diamond: {
      out += f.kind() == K::Not ? "~" : f.kind() == K::Box ? "[]" : "<>";
      const Formula& c = f.operand();
      if (c.is_binary()) {
        emit_paren(c, out);
        return;
      }
      std::string inner;
      emit(c, rightmost, inner);
      if (f.kind() != K::Not && !inner.empty() && inner[0] != '(' && inner[0] != '~' &&
          inner[0] != '[' && inner[0] != '<') {
        out += ' ';
      }
      out += inner;
      return;
    }
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Iff: {
      const Formula& l = f.lhs();
      const Formula& r = f.rhs();
      if (l.is_binary() && (l.kind() != f.kind() || right_assoc(f.kind()))) {
        emit_paren(l, out);
      } else {
        emit(l, false, out);
      }
      out += binary_op(f.kind());
      if (r.is_binary() && (r.kind() != f.kind() || !right_assoc(f.kind()))) {
        emit_paren(r, out);
      } else {
        emit(r, rightmost, out);
      }
      return;
    }
    case K::ForallS:
    case K::ExistsS:
    case K::ForallP:
    case K::ExistsP: {
      if (!rightmost) {
        emit_paren(f, out);
        return;
      }
      const bool universal = f.kind() == K::ForallS || f.kind() == K::ForallP;
      out += universal ? "forall " : "exists ";
      out += f.name();
      out += ". ";
      if (f.body().is_binary()) {
        emit_paren(f.body(), out);
      } else {
        emit(f.body(), true, out);
      }
      return;
    }
  }
}

}  // namespace

std::string print_term(const Term& t) {
  std::string out;
  emit_term(t, out);
  return out;
}

std::string print_formula(const Formula& f) {
  std::string out;
  emit(f, true, out);
  return out;
}

}  // namespace pluralis
