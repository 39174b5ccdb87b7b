#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "freelab/types.hpp"

namespace freelab {

// One letter of a *-monomial: a named generator, the free factor it belongs
// to, and whether the adjoint is taken.
struct GenFactor {
  std::string sym;
  int factor = 0;  // which free factor the generator lives in
  bool star = false;

  friend bool operator==(const GenFactor&, const GenFactor&) = default;
  friend auto operator<=>(const GenFactor&, const GenFactor&) = default;
};

using GenWord = std::vector<GenFactor>;

struct Term {
  cplx coeff;
  GenWord word;  // empty word = identity
};

// *-polynomial in non-commuting tagged generators. Terms are kept in a
// canonical order (word length, then letters, then star flags) with
// zero-coefficient terms pruned, so serialization is deterministic.
// Adjacent letters from the same factor are NOT fused here; fusion happens
// only inside center_decompose.
class NCPoly {
 public:
  NCPoly() = default;
  explicit NCPoly(std::vector<Term> terms);

  static NCPoly zero() { return NCPoly(); }
  static NCPoly one() { return constant(1.0); }
  static NCPoly constant(cplx c);
  static NCPoly generator(std::string sym, int factor, bool star = false);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  NCPoly operator+(const NCPoly& o) const;
  NCPoly operator-(const NCPoly& o) const;
  NCPoly operator*(const NCPoly& o) const;
  NCPoly operator*(cplx c) const;
  friend NCPoly operator*(cplx c, const NCPoly& p) { return p * c; }

  // (pq)* = q* p*, coefficients conjugated.
  NCPoly involution() const;

  int degree() const;

  // Canonical text form, e.g. "2*a1.b2'.a3" (trailing apostrophe = star).
  std::string to_string() const;
  static NCPoly parse(const std::string& text);

  friend bool operator==(const NCPoly&, const NCPoly&);

 private:
  void canonicalize();
  std::vector<Term> terms_;
};

// Assignment of generator symbols to matrices, all acting on one space.
using Assignment = std::map<std::string, MatC>;

// Sum over terms of coeff * product of assigned matrices (adjoint where
// starred). The dimension comes from the first symbol p actually uses (the
// hint covers constant polynomials); only used symbols are checked, so one
// assignment can carry factors of several dimensions. Throws on unassigned
// symbols or dimension mismatches among the used symbols.
MatC eval(const NCPoly& p, const Assignment& a, int dim_hint = -1);

// A state functional on single-factor polynomials, used by
// center_decompose to split off scalar parts.
using StateFn = std::function<cplx(const NCPoly&)>;

// One alternating word of formally centered single-factor elements.
struct CenteredFactor {
  NCPoly poly;  // supported on a single factor; state value 0
  int factor = 0;
};

struct CenteredWord {
  cplx coeff;
  std::vector<CenteredFactor> factors;  // consecutive factors distinct
};

struct CenterDecomposition {
  cplx scalar;  // purely scalar part
  std::vector<CenteredWord> words;
};

// Fuses maximal same-factor runs, rewrites each fused factor A as
// tau(A)*1 + (A - tau(A)*1), expands, and returns the scalar part plus the
// alternating centered words. Re-expanding reproduces the evaluation of p.
// Throws if a factor appearing in p has no state.
CenterDecomposition center_decompose(const NCPoly& p,
                                     const std::map<int, StateFn>& states);

// Evaluates a centered decomposition back to a matrix (identity of dimension
// `dim` carries the scalar part); used to cross-check the decomposition.
MatC eval(const CenterDecomposition& d, const Assignment& a, int dim);

// State functional induced by an assignment and a unit vector: tau(p) =
// <eval(p) xi, xi>.
StateFn vector_state_fn(const Assignment& a, const VecC& xi);

}  // namespace freelab
