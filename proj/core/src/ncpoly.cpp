#include "freelab/ncpoly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace freelab {

namespace {

// Canonical term order: word length, then letters (symbol, factor, star).
bool word_less(const GenWord& a, const GenWord& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

NCPoly::NCPoly(std::vector<Term> terms) : terms_(std::move(terms)) { canonicalize(); }

NCPoly NCPoly::constant(cplx c) {
  NCPoly p;
  p.terms_.push_back({c, {}});
  p.canonicalize();
  return p;
}

NCPoly NCPoly::generator(std::string sym, int factor, bool star) {
  NCPoly p;
  p.terms_.push_back({cplx(1.0), {GenFactor{std::move(sym), factor, star}}});
  return p;
}

void NCPoly::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& x, const Term& y) { return word_less(x.word, y.word); });
  std::vector<Term> out;
  for (auto& t : terms_) {
    if (!out.empty() && out.back().word == t.word)
      out.back().coeff += t.coeff;
    else
      out.push_back(std::move(t));
  }
  std::erase_if(out, [](const Term& t) { return t.coeff == cplx(0.0); });
  terms_ = std::move(out);
}

NCPoly NCPoly::operator+(const NCPoly& o) const {
  std::vector<Term> ts = terms_;
  ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
  return NCPoly(std::move(ts));
}

NCPoly NCPoly::operator-(const NCPoly& o) const { return *this + o * cplx(-1.0); }

NCPoly NCPoly::operator*(const NCPoly& o) const {
  std::vector<Term> ts;
  ts.reserve(terms_.size() * o.terms_.size());
  for (const auto& s : terms_)
    for (const auto& t : o.terms_) {
      GenWord w = s.word;
      w.insert(w.end(), t.word.begin(), t.word.end());
      ts.push_back({s.coeff * t.coeff, std::move(w)});
    }
  return NCPoly(std::move(ts));
}

NCPoly NCPoly::operator*(cplx c) const {
  std::vector<Term> ts = terms_;
  for (auto& t : ts) t.coeff *= c;
  return NCPoly(std::move(ts));
}

NCPoly NCPoly::involution() const {
  std::vector<Term> ts;
  ts.reserve(terms_.size());
  for (const auto& t : terms_) {
    GenWord w(t.word.rbegin(), t.word.rend());
    for (auto& f : w) f.star = !f.star;
    ts.push_back({std::conj(t.coeff), std::move(w)});
  }
  return NCPoly(std::move(ts));
}

int NCPoly::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max<int>(d, static_cast<int>(t.word.size()));
  return d;
}

bool operator==(const NCPoly& a, const NCPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].word != b.terms_[i].word || a.terms_[i].coeff != b.terms_[i].coeff)
      return false;
  return true;
}

std::string NCPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    cplx c = t.coeff;
    if (!first) {
      if (c.imag() == 0.0 && c.real() < 0.0) {
        os << " - ";
        c = -c;
      } else {
        os << " + ";
      }
    }
    first = false;
    std::ostringstream cs;
    if (c.imag() == 0.0)
      cs << c.real();
    else
      cs << "(" << c.real() << "," << c.imag() << ")";
    if (t.word.empty()) {
      os << cs.str();
      continue;
    }
    if (c != cplx(1.0)) os << cs.str() << "*";
    for (size_t i = 0; i < t.word.size(); ++i) {
      if (i) os << ".";
      os << t.word[i].sym;
      if (t.word[i].star) os << "'";
    }
  }
  return os.str();
}

namespace {

// Grammar:
//   poly   := term (("+"|"-") term)*
//   term   := [coeff "*"] word | coeff
//   coeff  := float | "(" float "," float ")"
//   word   := factor ("." factor)*
//   factor := ident ["'"]
// Factor tags come from the leading letter: 'a' -> 0, 'b' -> 1, ...
struct Parser {
  std::string_view s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("ncpoly parse error at offset " + std::to_string(pos) +
                                ": " + what);
  }

  double number() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
            s[pos] == 'e' || s[pos] == 'E' ||
            ((s[pos] == '+' || s[pos] == '-') && (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
      ++pos;
    double v = 0;
    auto res = std::from_chars(s.data() + start, s.data() + pos, v);
    if (res.ec != std::errc() || res.ptr != s.data() + pos) fail("expected number");
    return v;
  }

  cplx coeff() {
    skip_ws();
    if (eat('(')) {
      double re = number();
      if (!eat(',')) fail("expected ','");
      double im = number();
      if (!eat(')')) fail("expected ')'");
      return {re, im};
    }
    return {number(), 0.0};
  }

  bool peek_ident() {
    skip_ws();
    return pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]));
  }

  GenFactor factor() {
    skip_ws();
    if (!peek_ident()) fail("expected generator name");
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    GenFactor f;
    f.sym = std::string(s.substr(start, pos - start));
    f.factor = std::tolower(static_cast<unsigned char>(f.sym[0])) - 'a';
    f.star = (pos < s.size() && s[pos] == '\'');
    if (f.star) ++pos;
    return f;
  }

  Term term() {
    Term t{cplx(1.0), {}};
    skip_ws();
    if (pos < s.size() && !std::isalpha(static_cast<unsigned char>(s[pos]))) {
      t.coeff = coeff();
      if (!eat('*')) return t;  // pure constant
    }
    t.word.push_back(factor());
    while (eat('.')) t.word.push_back(factor());
    return t;
  }

  NCPoly poly() {
    std::vector<Term> ts;
    skip_ws();
    bool neg = false;
    if (eat('-')) neg = true;
    Term t = term();
    if (neg) t.coeff = -t.coeff;
    ts.push_back(std::move(t));
    for (;;) {
      skip_ws();
      if (pos >= s.size()) break;
      if (eat('+'))
        neg = false;
      else if (eat('-'))
        neg = true;
      else
        fail("expected '+' or '-'");
      Term u = term();
      if (neg) u.coeff = -u.coeff;
      ts.push_back(std::move(u));
    }
    return NCPoly(std::move(ts));
  }
};

}  // namespace

NCPoly NCPoly::parse(const std::string& text) {
  Parser p{text};
  return p.poly();
}

MatC eval(const NCPoly& p, const Assignment& a, int dim_hint) {
  auto lookup = [&](const std::string& sym) -> const MatC& {
    auto it = a.find(sym);
    if (it == a.end()) throw std::invalid_argument("unassigned symbol '" + sym + "'");
    if (it->second.rows() != it->second.cols())
      throw std::invalid_argument("assignment for '" + sym + "' is not square");
    return it->second;
  };
  int dim = dim_hint;
  for (const auto& t : p.terms())
    for (const auto& f : t.word) {
      const MatC& m = lookup(f.sym);
      if (dim < 0) dim = static_cast<int>(m.rows());
      if (m.rows() != dim)
        throw std::invalid_argument("assignment matrices act on different spaces");
    }
  if (dim < 0) dim = 1;  // constant polynomial with no hint
  MatC acc = MatC::Zero(dim, dim);
  for (const auto& t : p.terms()) {
    MatC prod = MatC::Identity(dim, dim);
    for (const auto& f : t.word) {
      const MatC& m = lookup(f.sym);
      prod = f.star ? MatC(prod * m.adjoint()) : MatC(prod * m);
    }
    acc += t.coeff * prod;
  }
  return acc;
}

namespace {

// Fuses maximal same-factor runs of a word into single-factor polynomials.
std::vector<CenteredFactor> fuse_runs(const GenWord& w) {
  std::vector<CenteredFactor> runs;
  for (const auto& f : w) {
    NCPoly letter = NCPoly::generator(f.sym, f.factor, f.star);
    if (!runs.empty() && runs.back().factor == f.factor)
      runs.back().poly = runs.back().poly * letter;
    else
      runs.push_back({letter, f.factor});
  }
  return runs;
}

cplx state_of(const std::map<int, StateFn>& states, int factor, const NCPoly& p) {
  auto it = states.find(factor);
  if (it == states.end())
    throw std::invalid_argument("no state for factor " + std::to_string(factor));
  return it->second(p);
}

// Expands a fused run list into scalar + alternating centered words. Removing
// a scalar factor can make same-factor neighbours adjacent, so recurse.
void expand(const std::vector<CenteredFactor>& runs, cplx coeff,
            const std::map<int, StateFn>& states, CenterDecomposition& out) {
  // Re-fuse adjacent equal factors (can appear after dropping a middle run).
  std::vector<CenteredFactor> fused;
  for (const auto& r : runs) {
    if (!fused.empty() && fused.back().factor == r.factor)
      fused.back().poly = fused.back().poly * r.poly;
    else
      fused.push_back(r);
  }
  if (fused.empty()) {
    out.scalar += coeff;
    return;
  }
  // Split the first factor as tau*1 + centered and recurse on both branches.
  const CenteredFactor& head = fused.front();
  cplx tau = state_of(states, head.factor, head.poly);
  NCPoly centered = head.poly - NCPoly::constant(tau);
  std::vector<CenteredFactor> tail(fused.begin() + 1, fused.end());
  if (tau != cplx(0.0)) expand(tail, coeff * tau, states, out);
  if (centered.is_zero()) return;

  // Head branch: decompose the tail, then prepend the centered head. A tail
  // word may itself start with the head's factor (its own head got dropped
  // as a scalar); those fuse with the centered head and are re-centered.
  CenterDecomposition sub{cplx(0.0), {}};
  expand(tail, cplx(1.0), states, sub);
  if (sub.scalar != cplx(0.0))
    out.words.push_back({coeff * sub.scalar, {CenteredFactor{centered, head.factor}}});
  for (const auto& w : sub.words) {
    if (!w.factors.empty() && w.factors.front().factor == head.factor) {
      // Head and first tail word share a factor: fuse and re-center.
      std::vector<CenteredFactor> refused;
      refused.push_back({centered * w.factors.front().poly, head.factor});
      refused.insert(refused.end(), w.factors.begin() + 1, w.factors.end());
      CenterDecomposition inner{cplx(0.0), {}};
      expand(refused, coeff * w.coeff, states, inner);
      out.scalar += inner.scalar;
      out.words.insert(out.words.end(), inner.words.begin(), inner.words.end());
    } else {
      CenteredWord cw{coeff * w.coeff, {CenteredFactor{centered, head.factor}}};
      cw.factors.insert(cw.factors.end(), w.factors.begin(), w.factors.end());
      out.words.push_back(std::move(cw));
    }
  }
}

}  // namespace

CenterDecomposition center_decompose(const NCPoly& p,
                                     const std::map<int, StateFn>& states) {
  CenterDecomposition out{cplx(0.0), {}};
  for (const auto& t : p.terms()) {
    if (t.word.empty()) {
      out.scalar += t.coeff;
      continue;
    }
    expand(fuse_runs(t.word), t.coeff, states, out);
  }
  return out;
}

MatC eval(const CenterDecomposition& d, const Assignment& a, int dim) {
  MatC acc = d.scalar * MatC::Identity(dim, dim);
  for (const auto& w : d.words) {
    MatC prod = MatC::Identity(dim, dim);
    for (const auto& f : w.factors) prod = prod * eval(f.poly, a);
    acc += w.coeff * prod;
  }
  return acc;
}

StateFn vector_state_fn(const Assignment& a, const VecC& xi) {
  return [a, xi](const NCPoly& p) -> cplx {
    MatC m = eval(p, a, static_cast<int>(xi.size()));
    if (m.rows() != xi.size())
      throw std::invalid_argument("state vector dimension mismatch");
    return xi.dot(m * xi);  // Eigen's dot conjugates the left argument
  };
}

}  // namespace freelab
