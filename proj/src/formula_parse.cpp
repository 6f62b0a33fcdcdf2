#include <cctype>

#include "valring/error.hpp"
#include "valring/formula.hpp"

namespace valring {

namespace {

struct Token {
  enum class Kind { Ident, Int, Sym, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == 0xE2 && i + 2 < src.size() && static_cast<unsigned char>(src[i + 1]) == 0x88 &&
        static_cast<unsigned char>(src[i + 2]) == 0x92) {
      out.push_back({Token::Kind::Sym, "-", i});
      i += 3;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t b = i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      out.push_back({Token::Kind::Int, std::string(src.substr(b, i - b)), b});
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      std::size_t b = i;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      out.push_back({Token::Kind::Ident, std::string(src.substr(b, i - b)), b});
      continue;
    }
    if (std::string_view("()+-*^=!&|").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Token::Kind::Sym, std::string(1, static_cast<char>(c)), i});
      ++i;
      continue;
    }
    throw SyntaxError("unexpected character '" + std::string(1, static_cast<char>(c)) + "'", i);
  }
  out.push_back({Token::Kind::End, "", src.size()});
  return out;
}

bool is_predicate_name(const std::string& s) {
  if (s == "PAS2") return true;
  if (s.size() < 2 || s[0] != 'P') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_keyword(const std::string& s) { return s == "E" || s == "A" || is_predicate_name(s); }

template <class T>
std::shared_ptr<const T> spanned(std::shared_ptr<const T> node, std::size_t b, std::size_t e) {
  T copy = *node;
  copy.span = Span{b, e};
  return std::make_shared<const T>(std::move(copy));
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  FormulaPtr formula_all() {
    FormulaPtr f = formula();
    expect_end();
    return f;
  }
  TermPtr term_all() {
    TermPtr t = term();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Token::Kind::Sym && peek(k).text == s; }
  bool accept(const char* s) {
    if (at_sym(s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const char* s) {
    if (!accept(s)) throw SyntaxError(std::string("expected '") + s + "'", peek().pos);
  }
  void expect_end() {
    if (peek().kind != Token::Kind::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
  }
  std::size_t here() const { return peek().pos; }
  std::size_t prev_end() const {
    if (pos_ == 0) return 0;
    const Token& t = toks_[pos_ - 1];
    return t.pos + t.text.size();
  }

  bool at_quantifier() const {
    return peek().kind == Token::Kind::Ident && (peek().text == "E" || peek().text == "A") &&
           peek(1).kind == Token::Kind::Ident && !is_keyword(peek(1).text);
  }

  FormulaPtr formula() {
    if (at_quantifier()) {
      std::size_t b = here();
      bool ex = peek().text == "E";
      std::string v = peek(1).text;
      pos_ += 2;
      FormulaPtr body = formula();
      return spanned(ex ? fm::exists(v, body) : fm::forall(v, body), b, prev_end());
    }
    return disj();
  }

  FormulaPtr nary(Formula::Kind kind, const char* op, FormulaPtr (Parser::*sub)()) {
    std::size_t b = here();
    std::vector<FormulaPtr> parts{(this->*sub)()};
    while (accept(op)) parts.push_back((this->*sub)());
    if (parts.size() == 1) return parts.front();
    Formula f;
    f.kind = kind;
    f.children = std::move(parts);
    f.span = Span{b, prev_end()};
    return std::make_shared<const Formula>(std::move(f));
  }

  FormulaPtr disj() { return nary(Formula::Kind::Or, "|", &Parser::conj); }
  FormulaPtr conj() { return nary(Formula::Kind::And, "&", &Parser::lit); }

  FormulaPtr lit() {
    std::size_t b = here();
    if (accept("!")) return spanned(fm::lnot(lit()), b, prev_end());
    if (at_quantifier()) return formula();
    if (at_sym("(")) {
      // Either a parenthesized formula or a term starting with '('.
      std::size_t save = pos_;
      try {
        ++pos_;
        FormulaPtr inner = formula();
        expect(")");
        if (!at_sym("=") && !at_sym("+") && !at_sym("-") && !at_sym("*") && !at_sym("^")) return inner;
      } catch (const SyntaxError&) {
      }
      pos_ = save;
    }
    return atom();
  }

  FormulaPtr atom() {
    std::size_t b = here();
    if (peek().kind == Token::Kind::Ident && is_predicate_name(peek().text) && at_sym("(", 1)) {
      std::string name = peek().text;
      pos_ += 2;
      TermPtr t = term();
      expect(")");
      if (name == "PAS2") return spanned(fm::pas2(t), b, prev_end());
      long n = std::stol(name.substr(1));
      if (n < 2 || n > 1000000) throw SyntaxError("P_n needs n >= 2", b);
      return spanned(fm::pn(static_cast<int>(n), t), b, prev_end());
    }
    TermPtr lhs = term();
    expect("=");
    TermPtr rhs = term();
    return spanned(fm::eq(lhs, rhs), b, prev_end());
  }

  TermPtr term() {
    std::size_t b = here();
    TermPtr acc = factor();
    while (true) {
      if (accept("+")) acc = spanned(fm::add(acc, factor()), b, prev_end());
      else if (accept("-")) acc = spanned(fm::sub(acc, factor()), b, prev_end());
      else return acc;
    }
  }

  TermPtr factor() {
    std::size_t b = here();
    TermPtr acc = unary();
    while (accept("*")) acc = spanned(fm::mul(acc, unary()), b, prev_end());
    return acc;
  }

  TermPtr unary() {
    std::size_t b = here();
    if (accept("-")) {
      if (peek().kind == Token::Kind::Int && !at_sym("^", 1)) {
        Integer v(peek().text);
        ++pos_;
        return spanned(fm::lit(-v), b, prev_end());
      }
      return spanned(fm::neg(unary()), b, prev_end());
    }
    return power();
  }

  TermPtr power() {
    std::size_t b = here();
    TermPtr base = primary();
    if (accept("^")) {
      if (peek().kind != Token::Kind::Int) throw SyntaxError("expected a natural-number exponent", here());
      std::uint64_t n;
      try {
        n = std::stoull(peek().text);
      } catch (const std::exception&) {
        throw SyntaxError("exponent out of range", here());
      }
      ++pos_;
      return spanned(fm::pow(base, n), b, prev_end());
    }
    return base;
  }

  TermPtr primary() {
    std::size_t b = here();
    const Token& t = peek();
    if (t.kind == Token::Kind::Int) {
      ++pos_;
      return spanned(fm::lit(Integer(t.text)), b, prev_end());
    }
    if (t.kind == Token::Kind::Ident) {
      if (is_keyword(t.text)) throw SyntaxError("'" + t.text + "' is reserved", b);
      ++pos_;
      return spanned(fm::var(t.text), b, prev_end());
    }
    if (accept("(")) {
      TermPtr inner = term();
      expect(")");
      return inner;
    }
    if (t.kind == Token::Kind::End) throw SyntaxError("unexpected end of input", b);
    throw SyntaxError("unexpected '" + t.text + "'", b);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).formula_all(); }
TermPtr parse_term(std::string_view text) { return Parser(text).term_all(); }

}  // namespace valring
