#include "valring/field.hpp"

#include <cctype>
#include <limits>

#include "valring/error.hpp"
#include "valring/laurent_field.hpp"
#include "valring/padic_field.hpp"

namespace valring {

namespace {

void require_same(const Element& a, const Element& b) {
  if (a.is_null() || b.is_null()) throw Error(ErrorCode::FieldMismatch, "operation on a null element");
  if (!a.field().same_as(b.field())) {
    throw Error(ErrorCode::FieldMismatch, a.field().descriptor() + " vs " + b.field().descriptor());
  }
}

std::string normalize_minus(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+2212 MINUS SIGN
    if (i + 2 < text.size() + 0 && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x88 && static_cast<unsigned char>(text[i + 2]) == 0x92) {
      out += '-';
      i += 2;
      continue;
    }
    out += text[i];
  }
  return out;
}

// Recursive-descent evaluator for element literals.
class LiteralParser {
 public:
  LiteralParser(const Field& field, std::string text) : field_(field), text_(std::move(text)) {}

  Element run() {
    Element value = expr();
    skip();
    if (pos_ != text_.size()) throw SyntaxError("unexpected '" + std::string(1, text_[pos_]) + "' in element literal", pos_);
    if (precision_) value = field_.with_precision(value, *precision_);
    return value;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Element expr() {
    Element acc = term();
    while (true) {
      if (accept('+')) acc = field_.add(acc, term());
      else if (accept('-')) acc = field_.sub(acc, term());
      else return acc;
    }
  }

  Element term() {
    Element acc = unary();
    while (true) {
      if (accept('*')) acc = field_.mul(acc, unary());
      else if (accept('/')) acc = field_.mul(acc, field_.inv(unary()));
      else return acc;
    }
  }

  Element unary() {
    if (accept('-')) return field_.neg(unary());
    return power();
  }

  Element power() {
    Element base = primary();
    if (accept('^')) {
      skip();
      bool negative = accept('-');
      skip();
      std::size_t begin = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (begin == pos_) throw SyntaxError("expected integer exponent", pos_);
      std::int64_t n = std::stoll(text_.substr(begin, pos_ - begin));
      return field_.pow(base, negative ? -n : n);
    }
    return base;
  }

  Element primary() {
    skip();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of element literal", pos_);
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t begin = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return field_.from_integer(Integer(text_.substr(begin, pos_ - begin)));
    }
    if (c == '(') {
      ++pos_;
      Element inner = expr();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t begin = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string name = text_.substr(begin, pos_ - begin);
      if (name == "O") {
        if (!accept('(')) throw SyntaxError("expected '(' after O", pos_);
        Element bound = expr();
        if (!accept(')')) throw SyntaxError("expected ')'", pos_);
        std::int64_t units = bound.val().in_units(field_.ramification());
        precision_ = precision_ ? std::min(*precision_, units) : units;
        return field_.zero();
      }
      auto sym = field_.symbol(name);
      if (!sym) throw SyntaxError("unknown symbol '" + name + "'", begin);
      return *sym;
    }
    throw SyntaxError("unexpected '" + std::string(1, c) + "' in element literal", pos_);
  }

  const Field& field_;
  std::string text_;
  std::size_t pos_ = 0;
  std::optional<std::int64_t> precision_;
};

// F_q with the trivial valuation.
class FiniteFieldStructure : public Field {
 public:
  explicit FiniteFieldStructure(FiniteFieldPtr k) : k_(std::move(k)) {}

  FieldKind kind() const override { return FieldKind::Finite; }
  std::string descriptor() const override {
    std::string out = "Fq:" + std::to_string(k_->p()) + "^" + std::to_string(k_->f());
    if (k_->modulus() != fp_poly::smallest_irreducible(k_->p(), k_->f())) {
      out += ":mod=";
      for (std::size_t i = 0; i < k_->modulus().size(); ++i) out += (i ? "," : "") + std::to_string(k_->modulus()[i]);
    }
    return out;
  }
  std::int64_t characteristic() const override { return k_->p(); }
  const FiniteFieldPtr& residue_field() const override { return k_; }
  int ramification() const override { return 1; }
  bool is_valued() const override { return false; }
  std::int64_t precision() const override { return 1; }

  Element from_integer(const Integer& n) const override {
    Integer r = n % k_->p();
    return element(FiniteRep{k_->from_int(r.get_si())});
  }
  Element from_rational(const Rational& r) const override {
    Element num = from_integer(Integer(r.get_num()));
    Element den = from_integer(Integer(r.get_den()));
    return mul(num, inv(den));
  }
  Element add(const Element& a, const Element& b) const override { return element(FiniteRep{k_->add(code(a), code(b))}); }
  Element neg(const Element& a) const override { return element(FiniteRep{k_->neg(code(a))}); }
  Element mul(const Element& a, const Element& b) const override { return element(FiniteRep{k_->mul(code(a), code(b))}); }
  Element inv(const Element& a) const override { return element(FiniteRep{k_->inv(code(a))}); }
  Element pow(const Element& a, std::int64_t n) const override { return element(FiniteRep{k_->pow(code(a), n)}); }

  bool is_zero(const Element& a) const override { return code(a) == 0; }
  bool is_exact(const Element&) const override { return true; }
  std::optional<std::int64_t> precision_of(const Element&) const override { return std::nullopt; }
  Element with_precision(const Element& a, std::int64_t) const override { return a; }
  bool identical(const Element& a, const Element& b) const override { return code(a) == code(b); }

  Valuation val(const Element& a) const override { return is_zero(a) ? Valuation::infinity() : Valuation(0); }
  FqElem residue(const Element& a) const override { return FqElem{k_, code(a)}; }
  Element lift(const FqElem& a) const override {
    if (!a.field || !a.field->same_as(*k_)) throw Error(ErrorCode::FieldMismatch, "lift from a foreign field");
    return element(FiniteRep{a.code});
  }
  Element uniformizer() const override {
    throw Error(ErrorCode::BadParameter, "a finite field has no uniformizer");
  }
  std::string format(const Element& a) const override { return k_->format(code(a)); }
  std::optional<Element> symbol(std::string_view name) const override {
    if (name == "z") return element(FiniteRep{k_->generator()});
    return std::nullopt;
  }

 private:
  FiniteField::Code code(const Element& a) const {
    check_owner(a);
    return std::get<FiniteRep>(a.rep()).code;
  }
  FiniteFieldPtr k_;
};

// --- descriptor parsing ----------------------------------------------------

std::vector<std::string> split_top(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

std::vector<std::string> parse_list(std::string text) {
  text = strip(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw Error(ErrorCode::MalformedDescriptor, "unbalanced brackets in '" + text + "'");
    text = text.substr(1, text.size() - 2);
  }
  std::vector<std::string> out;
  for (auto& item : split_top(text, ',')) {
    item = strip(item);
    if (item.empty()) throw Error(ErrorCode::MalformedDescriptor, "empty list entry");
    out.push_back(item);
  }
  return out;
}

std::int64_t parse_int(const std::string& text, const char* what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedDescriptor, std::string("bad ") + what + ": '" + text + "'");
  }
  if (used != text.size()) throw Error(ErrorCode::MalformedDescriptor, std::string("bad ") + what + ": '" + text + "'");
  return v;
}

std::pair<std::int64_t, int> parse_prime_power(const std::string& text) {
  auto caret = text.find('^');
  if (caret == std::string::npos) throw Error(ErrorCode::MalformedDescriptor, "expected <p>^<f>, got '" + text + "'");
  std::int64_t p = parse_int(text.substr(0, caret), "prime");
  std::int64_t f = parse_int(text.substr(caret + 1), "degree");
  if (!is_prime(p)) throw Error(ErrorCode::MalformedDescriptor, std::to_string(p) + " is not prime");
  if (f < 1 || f > 16) throw Error(ErrorCode::MalformedDescriptor, "degree out of range");
  return {p, static_cast<int>(f)};
}

std::pair<std::string, std::string> key_value(const std::string& part) {
  auto eq = part.find('=');
  if (eq == std::string::npos) throw Error(ErrorCode::MalformedDescriptor, "expected key=value, got '" + part + "'");
  return {strip(part.substr(0, eq)), strip(part.substr(eq + 1))};
}

}  // namespace

// --- Element -----------------------------------------------------------------

Element Element::operator+(const Element& o) const {
  require_same(*this, o);
  return field_->add(*this, o);
}
Element Element::operator-(const Element& o) const {
  require_same(*this, o);
  return field_->sub(*this, o);
}
Element Element::operator*(const Element& o) const {
  require_same(*this, o);
  return field_->mul(*this, o);
}
Element Element::operator/(const Element& o) const {
  require_same(*this, o);
  return field_->mul(*this, field_->inv(o));
}
Element Element::operator-() const { return field_->neg(*this); }
Element Element::pow(std::int64_t n) const { return field_->pow(*this, n); }
Element Element::inv() const { return field_->inv(*this); }
bool Element::is_zero() const { return field_->is_zero(*this); }
bool Element::is_exact() const { return field_->is_exact(*this); }
Valuation Element::val() const { return field_->val(*this); }
FqElem Element::residue() const { return field_->residue(*this); }
std::string Element::to_string() const { return field_ ? field_->format(*this) : "<null>"; }
bool Element::identical(const Element& o) const {
  return field_ && o.field_ && field_->same_as(*o.field_) && field_->identical(*this, o);
}

// --- Field -------------------------------------------------------------------

void Field::check_owner(const Element& a) const {
  if (a.is_null() || !same_as(a.field())) {
    throw Error(ErrorCode::FieldMismatch,
                "element of " + (a.is_null() ? std::string("<null>") : a.field().descriptor()) + " used in " + descriptor());
  }
}

Element Field::pow(const Element& a, std::int64_t n) const {
  Element base = n < 0 ? inv(a) : a;
  std::uint64_t k = n < 0 ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
  Element acc = one();
  while (k > 0) {
    if (k & 1) acc = mul(acc, base);
    k >>= 1;
    if (k > 0) base = mul(base, base);
  }
  return acc;
}

Element Field::parse(std::string_view literal) const {
  return LiteralParser(*this, normalize_minus(literal)).run();
}

FieldPtr make_finite_field(FiniteFieldPtr k) { return std::make_shared<const FiniteFieldStructure>(std::move(k)); }

FieldPtr make_field(std::string_view descriptor_text) {
  const std::string text = strip(normalize_minus(descriptor_text));
  auto parts = split_top(text, ':');
  for (auto& p : parts) p = strip(p);
  if (parts.empty() || parts[0].empty()) throw Error(ErrorCode::MalformedDescriptor, "empty descriptor");
  const std::string& family = parts[0];

  if (family == "Qp") {
    if (parts.size() < 2) throw Error(ErrorCode::MalformedDescriptor, "Qp needs a prime");
    PadicParams params;
    params.p = parse_int(parts[1], "prime");
    if (!is_prime(params.p)) throw Error(ErrorCode::MalformedDescriptor, parts[1] + " is not prime");
    for (std::size_t i = 2; i < parts.size(); ++i) {
      auto [k, v] = key_value(parts[i]);
      if (k == "prec") params.precision = parse_int(v, "precision");
      else throw Error(ErrorCode::MalformedDescriptor, "unknown Qp option '" + k + "'");
    }
    params.G = {0, 1};
    params.eisenstein = {LVector{Rational(-params.p)}};
    return PadicField::make(std::move(params));
  }

  if (family == "Fq" || family == "Laurent") {
    if (parts.size() < 2) throw Error(ErrorCode::MalformedDescriptor, family + " needs <p>^<f>");
    auto [p, f] = parse_prime_power(parts[1]);
    std::optional<fp_poly::Poly> modulus;
    std::int64_t precision = 64;
    for (std::size_t i = 2; i < parts.size(); ++i) {
      auto [k, v] = key_value(parts[i]);
      if (k == "mod") {
        fp_poly::Poly m;
        for (const auto& c : parse_list(v)) m.push_back(parse_int(c, "modulus coefficient"));
        modulus = m;
      } else if (k == "prec" && family == "Laurent") {
        precision = parse_int(v, "precision");
      } else {
        throw Error(ErrorCode::MalformedDescriptor, "unknown " + family + " option '" + k + "'");
      }
    }
    auto k = FiniteField::make(p, f, modulus);
    if (family == "Fq") return make_finite_field(std::move(k));
    return LaurentField::make(std::move(k), precision);
  }

  if (family == "Ext") {
    if (parts.size() < 3 || parts[1] != "Qp") throw Error(ErrorCode::MalformedDescriptor, "expected Ext:Qp:<p>:...");
    PadicParams params;
    params.p = parse_int(parts[2], "prime");
    if (!is_prime(params.p)) throw Error(ErrorCode::MalformedDescriptor, parts[2] + " is not prime");
    std::optional<std::int64_t> f;
    std::optional<std::vector<Integer>> G;
    std::optional<std::vector<std::string>> eis;
    for (std::size_t i = 3; i < parts.size(); ++i) {
      auto [k, v] = key_value(parts[i]);
      if (k == "unram") {
        f = parse_int(v, "unramified degree");
      } else if (k == "G") {
        std::vector<Integer> g;
        for (const auto& c : parse_list(v)) g.emplace_back(parse_int(c, "G coefficient"));
        G = g;
      } else if (k == "eis") {
        eis = parse_list(v);
      } else if (k == "prec") {
        params.precision = parse_int(v, "precision");
      } else {
        throw Error(ErrorCode::MalformedDescriptor, "unknown Ext option '" + k + "'");
      }
    }
    if (!f) throw Error(ErrorCode::MalformedDescriptor, "Ext needs unram=<f>");
    if (!eis) throw Error(ErrorCode::MalformedDescriptor, "Ext needs eis=<c0,...,ce>");
    if (*f < 1 || *f > 8) throw Error(ErrorCode::MalformedDescriptor, "unramified degree out of range");
    params.f = static_cast<int>(*f);
    if (G) {
      params.G = *G;
    } else {
      for (auto c : fp_poly::smallest_irreducible(params.p, params.f)) params.G.emplace_back(c);
    }
    if (static_cast<int>(params.G.size()) != params.f + 1 || params.G.back() != 1) {
      throw Error(ErrorCode::MalformedDescriptor, "G must be monic of degree unram");
    }
    if (eis->size() < 2) throw Error(ErrorCode::MalformedDescriptor, "Eisenstein polynomial must have degree >= 1");
    params.e = static_cast<int>(eis->size()) - 1;
    // Parse coefficients in Q(gamma) as expressions in g.
    std::vector<LVector> coeffs;
    for (const auto& c : *eis) coeffs.push_back(PadicField::parse_l_element(c, params.G, params.p));
    const auto& lead = coeffs.back();
    bool monic = lead[0] == 1;
    for (std::size_t i = 1; i < lead.size(); ++i) monic = monic && lead[i] == 0;
    if (!monic) throw Error(ErrorCode::NotEisenstein, "Eisenstein polynomial must be monic");
    coeffs.pop_back();
    params.eisenstein = std::move(coeffs);
    return PadicField::make(std::move(params));
  }

  throw Error(ErrorCode::MalformedDescriptor, "unknown field family '" + family + "'");
}

}  // namespace valring
