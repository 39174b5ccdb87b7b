#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "freelab/types.hpp"

namespace freelab {

// Finite-dimensional Hilbert space with a distinguished unit vector xi.
// basis_rotation is a unitary R with R*xi = e0; the orthogonal complement of
// xi is spanned by R^adj e_k, k = 1..dim-1, which is the basis used for the
// "reduced" letters of free-product words.
struct PointedSpace {
  int dim = 0;
  VecC xi;
  MatC basis_rotation;

  // Conjugates a factor matrix into the xi-adapted basis, R A R^adj. The
  // result satisfies rotate(A^adj) == rotate(A)^adj bitwise (the two
  // Hermitian components are rotated separately and re-symmetrized), so
  // lifted operators are *-compatible with no rounding slack. Exact scalar
  // multiples of the identity are passed through untouched.
  MatC rotate(const MatC& a) const;

  // Orthonormal basis vector k (1-based within H^0, i.e. k in 0..dim-2) of
  // the complement of xi, in the original coordinates.
  VecC reduced_basis_vector(int k) const;

  // State value <A xi, xi>, read off the rotated matrix.
  cplx state(const MatC& a) const { return rotate(a)(0, 0); }

  // A - <A xi, xi> I; centering against the vector state. The rotated (0,0)
  // entry of the result is zero up to roundoff (exactly zero when the
  // rotation is trivial).
  MatC centered(const MatC& a) const;
};

// Throws unless xi is a unit vector (tolerance 1e-9) of length dim >= 1.
PointedSpace make_pointed(int dim, VecC xi);

// One letter of an alternating word: which factor, and which basis vector of
// that factor's H^0 (0-based, so idx in 0..dim_i-2).
struct WordLetter {
  std::int32_t factor;
  std::int32_t idx;
  friend bool operator==(const WordLetter&, const WordLetter&) = default;
  friend auto operator<=>(const WordLetter&, const WordLetter&) = default;
};

using BasisWord = std::vector<WordLetter>;

struct BasisWordHash {
  size_t operator()(const BasisWord& w) const {
    size_t h = 1469598103934665603ull;
    for (const auto& l : w) {
      h = (h ^ static_cast<size_t>(l.factor)) * 1099511628211ull;
      h = (h ^ static_cast<size_t>(l.idx)) * 1099511628211ull;
    }
    return h;
  }
};

// Truncated free product of pointed spaces: basis = the empty word xi_0 plus
// all alternating words of length <= depth over the reduced letters.
// Ordering: by word length, then factor sequence (lexicographic), then
// letter indices (lexicographic); position 0 is xi_0.
class FreeProductSpace {
 public:
  FreeProductSpace(std::vector<PointedSpace> factors, int depth,
                   std::int64_t dim_cap = 2'000'000);

  int num_factors() const { return static_cast<int>(factors_.size()); }
  const PointedSpace& factor(int i) const { return factors_.at(i); }
  int depth() const { return depth_; }
  int dim() const { return static_cast<int>(words_.size()); }

  const BasisWord& word(int index) const { return words_.at(index); }
  int index(const BasisWord& w) const;

  // Word length of basis vector `index` (0 for xi_0).
  int length(int index) const { return static_cast<int>(words_[index].size()); }

  // Diagonal 0/1 projection onto words of length <= max_len.
  SpMat length_projector(int max_len) const;

 private:
  std::vector<PointedSpace> factors_;
  int depth_;
  std::vector<BasisWord> words_;
  std::unordered_map<BasisWord, int, BasisWordHash> index_;
};

using FreeSpacePtr = std::shared_ptr<const FreeProductSpace>;

FreeSpacePtr build_free_product_space(std::vector<PointedSpace> factors, int depth,
                                      std::int64_t dim_cap = 2'000'000);

// Closed-form dimension 1 + sum over alternating tag sequences of products
// of (dim_i - 1); cross-checked against the enumeration in tests.
std::int64_t free_product_dimension(const std::vector<int>& dims, int depth);

// 0/1 isometry V (dim_full x dim_sub) identifying each sub word with the
// corresponding full word. Requires, factor by factor, that sub factor i is
// the leading block of full factor i with the same xi (padded by zeros), and
// equal depths. V^adj V = I exactly; V V^adj projects onto the embedded copy.
SpMat embed_subspace(const FreeProductSpace& sub, const FreeProductSpace& full);

}  // namespace freelab
