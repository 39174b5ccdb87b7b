#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "freelab/hilbert.hpp"
#include "freelab/types.hpp"

namespace freelab {

// Truncated full Fock space over C^n: basis = all words over {0..n-1} of
// length <= depth, vacuum = the empty word at position 0. Ordering: by
// length, then lexicographic.
class FockSpace {
 public:
  FockSpace(int letters, int depth);

  int letters() const { return letters_; }
  int depth() const { return depth_; }
  int dim() const { return static_cast<int>(words_.size()); }

  const std::vector<int>& word(int index) const { return words_.at(index); }
  int index(const std::vector<int>& w) const;
  int length(int index) const { return static_cast<int>(words_[index].size()); }

  SpMat length_projector(int max_len) const;

 private:
  int letters_;
  int depth_;
  std::vector<std::vector<int>> words_;
  std::unordered_map<std::int64_t, int> index_;  // words encoded in base (letters+1)
  std::int64_t encode(const std::vector<int>& w) const;
};

using FockSpacePtr = std::shared_ptr<const FockSpace>;

FockSpacePtr build_fock_space(int letters, int depth);

// Free creation operator: word w -> i.w for |w| < depth, 0 at the top level.
// The adjoint strips a leading i. Exact 0/1 matrix.
SpMat creation(const FockSpace& space, int i);

// <T Omega, Omega>.
cplx vacuum_state(const SpMat& t);

// The n-th Catalan number (moments of l + l* at the vacuum).
std::int64_t catalan(int n);

// Residual report for the compression relations inside the free product of
// a matrix algebra with the Fock factor: lhat_i^adj Ahat lhat_j should be
// delta_ij tau(A) on the interior.
struct CompressionRelationReport {
  double max_residual = 0.0;       // over all i, j and samples, on interior
  double off_diagonal_max = 0.0;   // i != j cases, no interior restriction
  int interior_margin = 0;
  int fock_interior_depth = 0;
};

// Builds (C^dimA, xi) * (truncated Fock(C^n), Omega) via the free-product
// machinery (the Fock factor enters as an ordinary pointed space) and checks
// L_i^* A L_j = delta_ij tau(A) against the supplied sample elements of the
// matrix factor. Interior: free words of length <= free_depth - margin whose
// Fock slots hold Fock words of internal length <= fock_depth - 1.
CompressionRelationReport verify_compression_relation(const MatC& sample_a,
                                                      const VecC& xi_a, int fock_letters,
                                                      int fock_depth, int free_depth,
                                                      int margin = 2);

}  // namespace freelab
