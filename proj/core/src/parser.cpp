#include <cctype>
#include <cstring>
#include <map>
#include <optional>

#include "pluralis/syntax.hpp"

namespace pluralis {

namespace {

enum class Tok {
  End,
  LowerIdent,
  UpperIdent,
  LParen,
  RParen,
  Comma,
  Dot,
  Plus,
  Eq,
  EqEq,
  Not,
  And,
  Or,
  Arrow,
  DoubleArrow,
  Box,
  Diamond,
  Exist,
  In,
  Forall,
  Exists,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::LowerIdent: return "term";
    case Tok::UpperIdent: return "predicate";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Plus: return "'+'";
    case Tok::Eq: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::Not: return "'~'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::DoubleArrow: return "'<->'";
    case Tok::Box: return "'[]'";
    case Tok::Diamond: return "'<>'";
    case Tok::Exist: return "'E!'";
    case Tok::In: return "'in'";
    case Tok::Forall: return "'forall'";
    case Tok::Exists: return "'exists'";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

struct Alias {
  const char* utf8;
  Tok kind;
};

constexpr Alias kUnicode[] = {
    {"\xE2\x89\xBA", Tok::In},           // ≺
    {"\xE2\x96\xA1", Tok::Box},          // □
    {"\xE2\x97\x87", Tok::Diamond},      // ◇
    {"\xE2\x97\x8A", Tok::Diamond},      // ◊
    {"\xE2\x89\xA1", Tok::EqEq},         // ≡
    {"\xC2\xAC", Tok::Not},              // ¬
    {"\xE2\x88\xA7", Tok::And},          // ∧
    {"\xE2\x88\xA8", Tok::Or},           // ∨
    {"\xE2\x86\x92", Tok::Arrow},        // →
    {"\xE2\x86\x94", Tok::DoubleArrow},  // ↔
    {"\xE2\x88\x80", Tok::Forall},       // ∀
    {"\xE2\x88\x83", Tok::Exists},       // ∃
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back(Token{k, std::string{text.substr(i, len)}, SourceSpan{i, i + len}});
    i += len;
  };
  auto starts = [&](const char* s) { return text.substr(i).starts_with(s); };

  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      const std::string_view word = text.substr(i, j - i);
      if (word == "E" && j < text.size() && text[j] == '!') {
        push(Tok::Exist, 2);
      } else if (word == "in") {
        push(Tok::In, 2);
      } else if (word == "forall") {
        push(Tok::Forall, 6);
      } else if (word == "exists") {
        push(Tok::Exists, 6);
      } else {
        push(std::isupper(c) ? Tok::UpperIdent : Tok::LowerIdent, j - i);
      }
      continue;
    }
    if (starts("<->")) { push(Tok::DoubleArrow, 3); continue; }
    if (starts("->")) { push(Tok::Arrow, 2); continue; }
    if (starts("[]")) { push(Tok::Box, 2); continue; }
    if (starts("<>")) { push(Tok::Diamond, 2); continue; }
    if (starts("==")) { push(Tok::EqEq, 2); continue; }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '~': push(Tok::Not, 1); continue;
      case '&': push(Tok::And, 1); continue;
      case '|': push(Tok::Or, 1); continue;
      default: break;
    }
    bool matched = false;
    for (const auto& alias : kUnicode) {
      if (starts(alias.utf8)) {
        push(alias.kind, std::strlen(alias.utf8));
        matched = true;
        break;
      }
    }
    if (matched) continue;
    std::size_t len = 1;
    if (c >= 0xC0) {
      while (i + len < text.size() && (static_cast<unsigned char>(text[i + len]) & 0xC0) == 0x80) ++len;
    }
    throw ParseError("unexpected character '" + std::string{text.substr(i, len)} + "'",
                     SourceSpan{i, i + len});
  }
  out.push_back(Token{Tok::End, {}, SourceSpan{text.size(), text.size()}});
  return out;
}

struct Located {
  Term term;
  SourceSpan span;
};

class Parser {
public:
  explicit Parser(std::string_view text) : text_{text}, toks_{lex(text)} {}

  Formula parse_top() {
    Formula f = parse_iff();
    expect(Tok::End);
    return f;
  }

  Term parse_term_top() {
    Located t = parse_term();
    expect(Tok::End);
    return t.term;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& advance() { return toks_[pos_++]; }

  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }

  const Token& expect(Tok k) {
    if (!at(k)) fail({k});
    return advance();
  }

  [[noreturn]] void fail(std::initializer_list<Tok> expected) {
    std::vector<std::string> names;
    std::string joined;
    for (Tok k : expected) {
      names.emplace_back(describe(k));
      if (!joined.empty()) joined += ", ";
      joined += describe(k);
    }
    const Token& t = peek();
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError("expected " + joined + " but found " + found, t.span, std::move(names));
  }

  [[noreturn]] static void error_at(std::string message, SourceSpan span) {
    throw ParseError(std::move(message), span);
  }

  // iff := imp ('<->' imp)*
  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (accept(Tok::DoubleArrow)) lhs = iff(lhs, parse_implies());
    return lhs;
  }

  // imp := or ('->' imp)?
  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept(Tok::Arrow)) return implies(lhs, parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (accept(Tok::Or)) lhs = disj(lhs, parse_and());
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (accept(Tok::And)) lhs = conj(lhs, parse_unary());
    return lhs;
  }

  Formula parse_unary() {
    if (accept(Tok::Not)) return neg(parse_unary());
    if (accept(Tok::Box)) return box(parse_unary());
    if (accept(Tok::Diamond)) return diamond(parse_unary());
    if (at(Tok::Forall) || at(Tok::Exists)) return parse_quantifier();
    return parse_atom();
  }

  Formula parse_quantifier() {
    const bool universal = advance().kind == Tok::Forall;
    if (!at(Tok::LowerIdent)) fail({Tok::LowerIdent});
    const Token& var = advance();
    const NameClass cls = classify_name(var.text);
    if (cls != NameClass::SingularVar && cls != NameClass::PluralVar) {
      error_at("'" + var.text + "' is not a variable", var.span);
    }
    accept(Tok::Dot);
    Formula body = parse_iff();
    using K = Formula::Kind;
    const bool plural = cls == NameClass::PluralVar;
    const K kind = universal ? (plural ? K::ForallP : K::ForallS) : (plural ? K::ExistsP : K::ExistsS);
    return quantifier(kind, var.text, std::move(body));
  }

  Formula parse_atom() {
    if (accept(Tok::LParen)) {
      Formula f = parse_iff();
      expect(Tok::RParen);
      return f;
    }
    if (at(Tok::UpperIdent)) return parse_predication();
    if (accept(Tok::Exist)) {
      Located t = parse_term();
      return exists_pred(t.term);
    }
    if (!at(Tok::LowerIdent)) {
      fail({Tok::LParen, Tok::UpperIdent, Tok::LowerIdent, Tok::Exist, Tok::Not, Tok::Box,
            Tok::Diamond, Tok::Forall, Tok::Exists});
    }
    Located lhs = parse_term();
    if (accept(Tok::In)) {
      Located rhs = parse_term();
      want_sort(lhs, Sort::Singular, "left of 'in'");
      want_sort(rhs, Sort::Plural, "right of 'in'");
      return one_of(lhs.term, rhs.term);
    }
    if (accept(Tok::EqEq)) {
      Located rhs = parse_term();
      want_sort(lhs, Sort::Plural, "left of '=='");
      want_sort(rhs, Sort::Plural, "right of '=='");
      return same_things(lhs.term, rhs.term);
    }
    if (accept(Tok::Eq)) {
      Located rhs = parse_term();
      want_sort(lhs, Sort::Singular, "left of '='");
      want_sort(rhs, Sort::Singular, "right of '='");
      return equals(lhs.term, rhs.term);
    }
    fail({Tok::In, Tok::Eq, Tok::EqEq});
  }

  Formula parse_predication() {
    const Token name = advance();
    const NameClass cls = classify_name(name.text);
    if (cls != NameClass::SingularPred && cls != NameClass::PluralPred) {
      error_at("'" + name.text + "' is not a predicate name", name.span);
    }
    expect(Tok::LParen);
    std::vector<Located> args;
    if (!at(Tok::RParen)) {
      args.push_back(parse_term());
      while (accept(Tok::Comma)) args.push_back(parse_term());
    }
    const Token& close = expect(Tok::RParen);
    const SourceSpan whole{name.span.start, close.span.end};
    if (cls == NameClass::PluralPred) {
      if (args.size() != 1) error_at("plural predicate " + name.text + " is monadic", whole);
      want_sort(args[0], Sort::Plural, "argument of " + name.text);
      return plural_predicate(name.text, args[0].term);
    }
    std::vector<Term> terms;
    for (const auto& a : args) {
      want_sort(a, Sort::Singular, "argument of " + name.text);
      terms.push_back(a.term);
    }
    auto [it, inserted] = arities_.emplace(name.text, static_cast<int>(terms.size()));
    if (!inserted && it->second != static_cast<int>(terms.size())) {
      error_at("arity mismatch: " + name.text + " used with arities " +
                   std::to_string(it->second) + " and " + std::to_string(terms.size()),
               whole);
    }
    return predicate(name.text, std::move(terms));
  }

  Located parse_primary_term() {
    if (!at(Tok::LowerIdent)) fail({Tok::LowerIdent});
    const Token& t = advance();
    if (classify_name(t.text) == NameClass::Invalid) {
      error_at("'" + t.text + "' is not a term name", t.span);
    }
    return Located{term(t.text), t.span};
  }

  Located parse_term() {
    Located base = parse_primary_term();
    while (at(Tok::Plus)) {
      advance();
      Located adjunct = parse_primary_term();
      want_sort(base, Sort::Plural, "adjunction base");
      want_sort(adjunct, Sort::Singular, "adjunct");
      base = Located{adjoin(base.term, adjunct.term), SourceSpan{base.span.start, adjunct.span.end}};
    }
    return base;
  }

  static void want_sort(const Located& t, Sort s, const std::string& where) {
    if (t.term.sort() == s) return;
    error_at(std::string{"type clash: "} + (t.term.sort() == Sort::Singular ? "singular" : "plural") +
                 " term " + where,
             t.span);
  }

  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, int> arities_;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p{text};
  return p.parse_top();
}

Formula parse_formula(std::string_view text, const Signature& sig) {
  Formula f = parse_formula(text);
  const TypingReport report = well_formed(f, sig);
  if (!report.ok()) {
    throw ParseError(report.violations.front().message, SourceSpan{0, text.size()});
  }
  return f;
}

Term parse_term(std::string_view text) {
  Parser p{text};
  return p.parse_term_top();
}

}  // namespace pluralis
