#include "mms/spacefile.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

namespace mms {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, tok_.line, tok_.column);
  }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        ++col_;
        ++pos_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '.'))
        step();
      tok_.kind = Token::Kind::Ident;
      tok_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
        c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '.' || text_[pos_] == '-' || text_[pos_] == '+' ||
              text_[pos_] == 'e' || text_[pos_] == 'E'))
        step();
      std::string s = text_.substr(start, pos_ - start);
      try {
        tok_.number = std::stod(s);
      } catch (const std::exception&) {
        throw ParseError("malformed number '" + s + "'", tok_.line, tok_.column);
      }
      tok_.kind = Token::Kind::Number;
      tok_.text = s;
      return;
    }
    tok_.kind = Token::Kind::Punct;
    tok_.text = std::string(1, c);
    step();
  }

  void step() {
    ++pos_;
    ++col_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Lexer& lex;

  explicit Parser(Lexer& l) : lex(l) {}

  void expect_punct(const std::string& p) {
    if (lex.peek().kind != Token::Kind::Punct || lex.peek().text != p)
      lex.fail("expected '" + p + "'");
    lex.take();
  }

  bool at_punct(const std::string& p) const {
    return lex.peek().kind == Token::Kind::Punct && lex.peek().text == p;
  }

  double number() {
    if (lex.peek().kind == Token::Kind::Ident && lex.peek().text == "inf") {
      lex.take();
      return kInf;
    }
    if (lex.peek().kind != Token::Kind::Number) lex.fail("expected a number");
    return lex.take().number;
  }

  int integer(const char* what) {
    double v = number();
    if (std::abs(v - std::llround(v)) > 1e-9) lex.fail(std::string("expected an integer ") + what);
    return static_cast<int>(std::llround(v));
  }

  std::vector<double> number_list() {
    expect_punct("[");
    std::vector<double> out;
    while (!at_punct("]")) out.push_back(number());
    lex.take();
    return out;
  }

  ParsedSpace expression() {
    if (lex.peek().kind != Token::Kind::Ident) lex.fail("expected a generator name");
    Token name = lex.take();
    const std::string& g = name.text;
    auto finite = [&](ParsedSpace p) -> FiniteMmSpace {
      if (std::holds_alternative<FiniteMmSpace>(p)) return std::get<FiniteMmSpace>(p);
      throw ParseError("'" + g + "' needs a finite space argument", name.line, name.column);
    };
    if (g == "point") {
      maybe_empty_parens();
      return one_point_space();
    }
    expect_punct("(");
    ParsedSpace out = one_point_space();
    if (g == "two_point") {
      double l = number(), p = number();
      out = two_point_space(l, p);
    } else if (g == "cycle") {
      int m = integer("point count");
      double c = number();
      out = cycle_space(m, c);
    } else if (g == "dissipation") {
      out = dissipation_space(integer("n"));
    } else if (g == "scale") {
      ParsedSpace e = expression();
      double t = number();
      if (std::holds_alternative<FiniteMmSpace>(e))
        out = scale(std::get<FiniteMmSpace>(e), t);
      else
        out = scale(std::get<ExtendedMmSpace>(e), t);
    } else if (g == "restrict") {
      FiniteMmSpace e = finite(expression());
      std::vector<double> raw = number_list();
      std::vector<int> subset;
      for (double v : raw) subset.push_back(static_cast<int>(std::llround(v)));
      out = restrict_normalize(e, subset);
    } else if (g == "lp_product") {
      ParsedSpace e1 = expression();
      ParsedSpace e2 = expression();
      double p = number();
      if (std::holds_alternative<FiniteMmSpace>(e1) &&
          std::holds_alternative<FiniteMmSpace>(e2))
        out = lp_product(std::get<FiniteMmSpace>(e1), std::get<FiniteMmSpace>(e2), p);
      else {
        auto lift = [](const ParsedSpace& e) {
          return std::holds_alternative<FiniteMmSpace>(e)
                     ? ExtendedMmSpace::from_finite(std::get<FiniteMmSpace>(e))
                     : std::get<ExtendedMmSpace>(e);
        };
        out = lp_product(lift(e1), lift(e2), p);
      }
    } else if (g == "lp_power") {
      FiniteMmSpace e = finite(expression());
      double p = number();
      int n = integer("power");
      out = lp_power(e, p, n);
    } else if (g == "direct_sum") {
      expect_punct("[");
      std::vector<FiniteMmSpace> parts;
      std::vector<double> weights;
      while (!at_punct("]")) {
        expect_punct("(");
        parts.push_back(finite(expression()));
        weights.push_back(number());
        expect_punct(")");
      }
      lex.take();
      out = direct_sum(parts, WeightVector(weights, WeightVector::Mode::A1));
    } else if (g == "gapped_sum") {
      expect_punct("[");
      std::vector<PointedSpace> parts;
      std::vector<double> weights;
      while (!at_punct("]")) {
        expect_punct("(");
        FiniteMmSpace e = finite(expression());
        int base = integer("base index");
        weights.push_back(number());
        parts.emplace_back(std::move(e), base);
        expect_punct(")");
      }
      lex.take();
      double r = number();
      out = gapped_sum(parts, WeightVector(weights, WeightVector::Mode::A1), r);
    } else if (g == "wedge") {
      FiniteMmSpace e1 = finite(expression());
      int b1 = integer("base index");
      FiniteMmSpace e2 = finite(expression());
      int b2 = integer("base index");
      double alpha = number();
      out = wedge_sum(PointedSpace(std::move(e1), b1), PointedSpace(std::move(e2), b2), alpha);
    } else {
      throw ParseError("unknown generator '" + g + "'", name.line, name.column);
    }
    expect_punct(")");
    return out;
  }

  void maybe_empty_parens() {
    if (at_punct("(")) {
      lex.take();
      expect_punct(")");
    }
  }

  ParsedSpace file() {
    if (lex.peek().kind != Token::Kind::Ident) lex.fail("expected 'expr', 'labels' or a generator");
    if (lex.peek().text == "expr") {
      lex.take();
      expect_punct(":");
      ParsedSpace out = expression();
      end();
      return out;
    }
    if (lex.peek().text != "labels") {
      ParsedSpace out = expression();
      end();
      return out;
    }
    lex.take();
    expect_punct(":");
    expect_punct("[");
    std::vector<std::string> labels;
    while (!at_punct("]")) {
      if (lex.peek().kind != Token::Kind::Ident && lex.peek().kind != Token::Kind::Number)
        lex.fail("expected a label");
      labels.push_back(lex.take().text);
    }
    lex.take();
    if (lex.peek().text != "dist") lex.fail("expected 'dist'");
    lex.take();
    expect_punct(":");
    expect_punct("[");
    std::vector<double> dist;
    std::size_t rows = 0;
    while (!at_punct("]")) {
      std::vector<double> row = number_list();
      if (row.size() != labels.size()) lex.fail("distance row length mismatch");
      dist.insert(dist.end(), row.begin(), row.end());
      ++rows;
    }
    lex.take();
    if (rows != labels.size()) lex.fail("distance row count mismatch");
    if (lex.peek().text != "weight") lex.fail("expected 'weight'");
    lex.take();
    expect_punct(":");
    std::vector<double> weight = number_list();
    end();
    bool finite = true;
    for (double v : dist)
      if (std::isinf(v)) finite = false;
    if (finite)
      return FiniteMmSpace::create_pruned(std::move(labels), std::move(dist),
                                          std::move(weight));
    return ExtendedMmSpace::create(std::move(labels), std::move(dist), std::move(weight));
  }

  void end() {
    if (lex.peek().kind != Token::Kind::End) lex.fail("trailing input");
  }
};

std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <class Space>
std::string serialize_impl(const Space& x) {
  std::ostringstream out;
  out << "labels: [";
  for (int i = 0; i < x.size(); ++i) {
    std::string l = x.label(i);
    for (char& c : l)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) c = '_';
    if (l.empty() || !(std::isalpha(static_cast<unsigned char>(l[0])) || l[0] == '_'))
      l = "p_" + l;
    out << (i ? " " : "") << l;
  }
  out << "]\ndist: [\n";
  for (int i = 0; i < x.size(); ++i) {
    out << "  [";
    for (int j = 0; j < x.size(); ++j) out << (j ? " " : "") << fmt(x.dist(i, j));
    out << "]\n";
  }
  out << "]\nweight: [";
  for (int i = 0; i < x.size(); ++i) out << (i ? " " : "") << fmt(x.weight(i));
  out << "]\n";
  return out.str();
}

}  // namespace

ParsedSpace parse_space_text(const std::string& text) {
  Lexer lex(text);
  Parser parser(lex);
  return parser.file();
}

ParsedSpace parse_space_expression(const std::string& expr) {
  Lexer lex(expr);
  Parser parser(lex);
  ParsedSpace out = parser.expression();
  parser.end();
  return out;
}

std::string serialize_space(const FiniteMmSpace& x) { return serialize_impl(x); }
std::string serialize_space(const ExtendedMmSpace& x) { return serialize_impl(x); }

}  // namespace mms
