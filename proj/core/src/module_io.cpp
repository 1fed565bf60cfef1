#include "muhasse/module_io.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <vector>

#include "muhasse/errors.hpp"
#include "muhasse/linalg.hpp"

namespace muhasse {

namespace {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, column = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++column;
      ++i;
    } else {
      Token t{{}, line, column};
      while (i < text.size() && text[i] != '\n' && text[i] != ' ' && text[i] != '\t' && text[i] != '\r' &&
             text[i] != '#') {
        t.text.push_back(text[i]);
        ++i;
        ++column;
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

unsigned parse_unsigned(const Token& t, std::string_view digits, std::size_t offset) {
  unsigned value = 0;
  const auto* first = digits.data();
  const auto* last = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (digits.empty() || ec != std::errc() || ptr != last)
    throw ParseError("expected a non-negative integer, got '" + std::string(digits) + "'", t.line, t.column + offset);
  return value;
}

class Parser {
 public:
  Parser(std::string_view text, bool allow_degenerate) : tokens_(tokenize(text)), allow_degenerate_(allow_degenerate) {}

  ModuleFile run() {
    ModuleFile file;
    std::optional<unsigned> ell, a, b, r, k, N;
    std::set<std::string> seen;
    while (pos_ < tokens_.size() && tokens_[pos_].text != "A:") {
      const Token& t = tokens_[pos_++];
      const auto eq = t.text.find('=');
      if (eq == std::string::npos) throw ParseError("expected a header entry key=value or 'A:', got '" + t.text + "'", t.line, t.column);
      const std::string key = t.text.substr(0, eq);
      if (!seen.insert(key).second) throw ParseError("duplicate header entry '" + key + "'", t.line, t.column);
      const unsigned value = parse_unsigned(t, std::string_view(t.text).substr(eq + 1), eq + 1);
      if (key == "ell") ell = value;
      else if (key == "a") a = value;
      else if (key == "b") b = value;
      else if (key == "r") r = value;
      else if (key == "k") k = value;
      else if (key == "N") N = value;
      else throw ParseError("unknown header entry '" + key + "'", t.line, t.column);
    }
    if (pos_ == tokens_.size()) throw ParseError("missing 'A:' block", line_at_end(), 1);
    const Token& a_tok = tokens_[pos_];
    for (const char* key : {"ell", "a", "b", "r", "k"})
      if (!seen.count(key)) throw ParseError(std::string("missing header entry '") + key + "'", a_tok.line, a_tok.column);
    try {
      file.params = make_params(*ell, *a, *b, *r, *k, N, allow_degenerate_);
    } catch (const InvalidParameters& e) {
      throw ParseError(std::string("invalid parameters: ") + e.what(), a_tok.line, a_tok.column);
    }
    ring_ = ring_for(file.params);
    ++pos_;
    file.a = read_block(file.params.n());
    if (pos_ < tokens_.size()) {
      const Token& t = tokens_[pos_];
      if (t.text != "B:") throw ParseError("expected 'B:' or end of input, got '" + t.text + "'", t.line, t.column);
      ++pos_;
      file.b = read_block(file.params.n());
      if (pos_ < tokens_.size()) {
        const Token& extra = tokens_[pos_];
        throw ParseError("unexpected trailing token '" + extra.text + "'", extra.line, extra.column);
      }
    }
    return file;
  }

 private:
  std::size_t line_at_end() const { return tokens_.empty() ? 1 : tokens_.back().line; }

  Matrix<RingElement> read_block(std::size_t n) {
    Matrix<RingElement> m(n, n, ring_->zero());
    for (std::size_t e = 0; e < n * n; ++e) {
      if (pos_ == tokens_.size())
        throw ParseError("block ends after " + std::to_string(e) + " of " + std::to_string(n * n) + " elements",
                         line_at_end(), 1);
      m.data()[e] = read_element(tokens_[pos_++]);
    }
    return m;
  }

  RingElement read_element(const Token& t) {
    const unsigned m = ring_->degree();
    std::vector<mpz_class> coeffs;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = t.text.find(',', start);
      const std::string part = t.text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      mpz_class v;
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || v.set_str(part, 10) != 0)
        throw ParseError("expected a non-negative integer coefficient, got '" + part + "'", t.line, t.column + start);
      if (v >= ring_->modulus_power())
        throw ParseError("coefficient " + part + " is not reduced mod ell^N", t.line, t.column + start);
      coeffs.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (coeffs.size() != m)
      throw ParseError("element needs " + std::to_string(m) + " coefficients, got " + std::to_string(coeffs.size()),
                       t.line, t.column);
    return ring_->from_coefficients(coeffs);
  }

  std::vector<Token> tokens_;
  bool allow_degenerate_;
  std::size_t pos_ = 0;
  std::shared_ptr<const WittRing> ring_;
};

void write_header(std::ostream& out, const PelParams& p) {
  out << "ell=" << p.ell << "\na=" << p.a << "\nb=" << p.b << "\nr=" << p.r << "\nk=" << p.k << "\nN=" << p.N << '\n';
}

void write_block(std::ostream& out, const char* name, const Matrix<RingElement>& m) {
  out << name << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      const auto& c = m(i, j).coeffs;
      for (std::size_t t = 0; t < c.size(); ++t) out << (t ? "," : "") << c[t].get_str();
    }
    out << '\n';
  }
}

}  // namespace

ModuleFile parse_module_file(std::string_view text, bool allow_degenerate) {
  return Parser(text, allow_degenerate).run();
}

DieudonneModule build_module(const ModuleFile& file) {
  if (file.b) return from_F_blocks(file.params, file.a, *file.b);
  return from_F_block(file.params, file.a);
}

DieudonneModule read_module(std::string_view text, bool allow_degenerate) {
  return build_module(parse_module_file(text, allow_degenerate));
}

std::string write_module(const DieudonneModule& module) {
  std::ostringstream out;
  write_header(out, module.params());
  write_block(out, "A:", module.f_even());
  write_block(out, "B:", module.f_odd());
  return out.str();
}

std::string write_bt1_module(const PelParams& params, const FiniteField& field, const Matrix<Residue>& a) {
  std::ostringstream out;
  write_header(out, params.with_precision(1));
  out << "A:\n";
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      const auto d = field.digits(a(i, j));
      for (std::size_t t = 0; t < d.size(); ++t) out << (t ? "," : "") << d[t];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace muhasse
