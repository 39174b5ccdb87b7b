#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "freelab/freeprod.hpp"
#include "freelab/hilbert.hpp"
#include "freelab/types.hpp"

namespace freelab {

// The Toeplitz-Pimsner word space K = K_1 + K_2: alternating words of length
// 1..depth whose slots carry the FULL factor spaces (no reduction). Slots are
// stored in xi-adapted coordinates, so index 0 of a slot is the distinguished
// vector of that factor and S becomes an exact 0/1 matrix. Ordering: by
// length, then leading factor, then slot indices (lexicographic); K_1 words
// (leading factor 0) precede K_2 words of the same length.
class PimsnerSpace {
 public:
  PimsnerSpace(PointedSpace h1, PointedSpace h2, int depth,
               std::int64_t dim_cap = 2'000'000);

  const PointedSpace& factor(int i) const { return i == 0 ? h1_ : h2_; }
  int depth() const { return depth_; }
  int dim() const { return static_cast<int>(words_.size()); }

  const BasisWord& word(int index) const { return words_.at(index); }
  int index(const BasisWord& w) const;
  int length(int index) const { return static_cast<int>(words_[index].size()); }
  int leading(int index) const { return words_[index].front().factor; }

  // Projection onto L_{i,m}: words of length m with leading factor i.
  SpMat summand_projector(int leading_factor, int len) const;
  // Projection onto words of length <= max_len.
  SpMat length_projector(int max_len) const;
  // Projection onto K_j (leading factor j).
  SpMat k_projector(int leading_factor) const;

 private:
  PointedSpace h1_, h2_;
  int depth_;
  std::vector<BasisWord> words_;
  std::unordered_map<BasisWord, int, BasisWordHash> index_;
};

using PimsnerSpacePtr = std::shared_ptr<const PimsnerSpace>;

PimsnerSpacePtr build_pimsner_space(PointedSpace h1, PointedSpace h2, int depth,
                                    std::int64_t dim_cap = 2'000'000);

// The isometry S: prepends the distinguished vector of the opposite factor;
// words at the truncation depth map to 0, so S^adj S is the projection onto
// lengths <= depth-1 exactly.
SpMat build_S(const PimsnerSpace& space);

// Block-diagonal action of A_1 + A_2: acts on the first slot of each word by
// the matrix of the leading factor. Preserves every L_{i,n}.
SpMat act_diag(const MatC& a1, const MatC& a2, const PimsnerSpace& space);

// Embedding of a single factor element (A in factor i realized as A+0 or
// 0+A).
SpMat act_factor(const MatC& a, int factor, const PimsnerSpace& space);

// Gauge unitary U_theta: multiplies length-n words by exp(-i n theta).
SpMat gauge_unitary(const PimsnerSpace& space, double theta);

// alpha_theta(T) = U_theta^adj T U_theta.
SpMat gauge_apply(const SpMat& t, const PimsnerSpace& space, double theta);

// Conditional expectation onto the gauge-fixed part: keeps entries whose row
// and column word lengths agree. Equals the average of alpha_theta over any
// N >= 2*depth+1 equispaced angles; cond_expectation_sampled provides that
// route for self-tests (default grid 2*depth+3).
SpMat cond_expectation(const SpMat& t, const PimsnerSpace& space);
SpMat cond_expectation_sampled(const SpMat& t, const PimsnerSpace& space, int grid = 0);

struct FejerWeights {
  int order;
  std::vector<double> weights;  // w_j = 1 - j/(order+1), j = 0..order
};

FejerWeights fejer_weights(int order);

// Cesaro-weighted reconstruction from the gauge Fourier bands:
//   Sigma_n(T) = sum_{j=0..n} w_j (S^adj)^j E(S^j T)
//              + sum_{j=1..n} w_j E(T (S^adj)^j) S^j.
SpMat fejer_partial(const SpMat& t, const PimsnerSpace& space, int order);

// Lemma S* residuals: S^adj A S = <A xi_i, xi_i> P_{K_j} on the interior,
// and A S B = 0, A S^adj B = 0, P_{K_j} S A = S A, A S^adj P_{K_j} = A S^adj.
struct SStarReport {
  double compression_residual = 0.0;  // S*AS - <A xi, xi> P_Kj on interior
  double asb = 0.0;
  double astarb = 0.0;
  double projection_left = 0.0;
  double projection_right = 0.0;
  double max() const {
    return std::max({compression_residual, asb, astarb, projection_left, projection_right});
  }
};

SStarReport verify_sstar_relations(const PimsnerSpace& space,
                                   const std::vector<std::pair<MatC, MatC>>& samples);

// Corner embedding of Notation 2.4.2: P = I - S^2 (S^adj)^2,
// U = P (S + S^adj) P, psi_i(A) = P A P + U A U. The corner K_{1,1} (words
// that start and end in factor 0 with reduced interior slots) is identified
// with the free-product word basis by dropping/keeping the boundary
// distinguished vectors.
struct CornerEmbedding {
  PimsnerSpacePtr space;
  SpMat p;  // interior projection
  SpMat u;  // partial symmetry, U = U^adj, U^2 = P on the interior
};

CornerEmbedding make_corner_embedding(PimsnerSpacePtr space);

SpMat corner_psi(const CornerEmbedding& ce, const MatC& a, int factor);

// Product of corner maps over a centered alternating word; the empty word
// maps to P. Letters must be centered (state value within 1e-10) and
// alternate; violations throw.
struct CenteredLetter {
  MatC a;
  int factor;
};

SpMat psi_on_word(const CornerEmbedding& ce, const std::vector<CenteredLetter>& word);

// 0/1 isometry realizing K_{1,1} over the free-product basis: free word w
// maps to the Pimsner word obtained by padding with the factor-0
// distinguished vector on whichever of the two boundaries does not already
// hold a factor-0 letter. Requires pimsner depth >= free depth + 2.
SpMat k11_isometry(const PimsnerSpace& pimsner, const FreeProductSpace& free_space);

// sigma(T) = V^adj T V with V = k11_isometry.
MatC sigma_compression(const SpMat& t, const PimsnerSpace& pimsner,
                       const FreeProductSpace& free_space);

// Compression onto the quotient word space K_0 (factor-0 slots restricted to
// the leading scenario block). pi_prime(T) = W^adj T W; on generators it
// sends S to S_0 and kills lifted ideal elements.
struct QuotientPimsner {
  PimsnerSpacePtr full;
  PimsnerSpacePtr quotient;
  SpMat inclusion;  // dim_full x dim_quotient, 0/1
};

QuotientPimsner build_quotient_pimsner(const ExactnessScenario& sc, int depth);

SpMat pi_prime(const SpMat& t, const QuotientPimsner& q);

}  // namespace freelab
