#pragma once

#include <functional>
#include <vector>

#include "freelab/freeprod.hpp"
#include "freelab/hilbert.hpp"
#include "freelab/ncpoly.hpp"
#include "freelab/types.hpp"

namespace freelab {

// A *-subalgebra of M_n described by a spanning set of matrices.
struct SubAlgebra {
  int ambient_dim = 0;
  std::vector<MatC> basis;

  static SubAlgebra full(int n);
  static SubAlgebra scalars(int n);
  static SubAlgebra diagonal(int n);
  // Direct sum pattern M_a + M_b inside M_(a+b).
  static SubAlgebra block_diagonal(int a, int b);
};

// Least-squares coordinates of x in span(basis) under the Hilbert-Schmidt
// inner product; *residual receives the orthogonal remainder norm.
VecC membership_coords(const SubAlgebra& alg, const MatC& x, double* residual = nullptr);

// Max membership residual of products and adjoints of basis elements, plus
// the identity. Zero (up to tolerance) certifies a unital *-subalgebra.
double closure_residual(const SubAlgebra& alg);

// State on a matrix algebra, stored by its density matrix: tau(A) = tr(rho A).
struct FiniteState {
  MatC density;
  cplx value(const MatC& a) const { return (density * a).trace(); }
  static FiniteState vector_state(const VecC& xi);
  static FiniteState normalized_trace(int n);
  double psd_trace_residual() const;  // max(-min eig, |tr - 1|)
};

// Completely positive unital map between matrix algebras, stored through its
// Choi matrix with the Kraus factors derived by eigendecomposition.
class UCPMap {
 public:
  UCPMap() = default;
  // From the action on matrix units of M_in.
  static UCPMap from_action(int in_dim, int out_dim,
                            const std::function<MatC(const MatC&)>& action);
  static UCPMap from_choi(int in_dim, int out_dim, MatC choi);
  static UCPMap identity(int n);

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  const MatC& choi() const { return choi_; }
  const std::vector<MatC>& kraus() const { return kraus_; }

  MatC apply(const MatC& a) const;

  double choi_min_eigenvalue() const;
  double unitality_residual() const;   // ||apply(I) - I||_max
  double kraus_roundtrip_residual() const;

 private:
  int in_dim_ = 0;
  int out_dim_ = 0;
  MatC choi_;
  std::vector<MatC> kraus_;
  void derive_kraus();
};

// GNS representation of a state on a subalgebra, built on algebra/N with the
// inner product tau(b^adj a) via a Gram-matrix eigendecomposition (relative
// rank cut 1e-12).
struct GnsResult {
  int dim = 0;
  VecC cyclic;
  // Representation of an ambient matrix that lies in the span of the basis.
  std::function<MatC(const MatC&)> represent;
  // Representation matrices of the basis elements, in basis order.
  std::vector<MatC> rep_basis;
};

GnsResult gns(const SubAlgebra& alg, const FiniteState& state);

// Minimal Stinespring dilation of a UCP map on a full matrix algebra:
// phi(A) = V^adj (A kron I_rank) V with V^adj V = I.
struct StinespringDilation {
  MatC v;  // (in_dim * rank) x out_dim
  int rank = 0;
  int in_dim = 0;
  MatC represent(const MatC& a) const;
  MatC reconstruct(const MatC& a) const { return v.adjoint() * represent(a) * v; }
};

StinespringDilation stinespring(const UCPMap& phi);

// Orthogonal projection of M_n onto a unital *-subalgebra in the trace inner
// product; the unique trace-preserving conditional expectation. Unital, CP,
// idempotent, restricts to the identity on the subalgebra.
UCPMap trace_conditional_expectation(const SubAlgebra& alg);

// State-preserving UCP extension: given phi UCP on a unital *-subalgebra
// A of M_n (by its action on the basis), xi in C^n and eta in C^m with
// <phi(A) eta, eta> = <A xi, xi>, produces a UCP map on all of M_n that
// extends phi and preserves the vector states. The construction follows the
// Stinespring dilation + GNS unitary + block decomposition, with the
// infinite-dimensional extension step replaced by composition with the
// trace conditional expectation onto A.
struct ExtensionInput {
  SubAlgebra alg;
  std::vector<MatC> phi_basis_images;  // phi(basis[k]), m x m
  VecC xi;
  VecC eta;
};

struct ExtensionResult {
  UCPMap psi;
  double precondition_residual = 0.0;  // state compatibility on the basis
};

ExtensionResult extend_state_preserving(const ExtensionInput& in);

// Free product of UCP maps, evaluated on a *-polynomial word. Each factor i
// carries a source pointed space, a target pointed space, and a UCP map
// between the full matrix algebras; the word is center-decomposed against
// the source vector states, mapped factorwise, and re-evaluated through
// lifts on the target free-product space.
struct UcpFactor {
  PointedSpace source;
  PointedSpace target;
  UCPMap phi;
};

double state_compatibility_residual(const UcpFactor& f);

FreeOperator free_product_ucp(const std::vector<UcpFactor>& factors, const NCPoly& word,
                              const Assignment& source_assign,
                              const std::map<std::string, int>& symbol_factor,
                              FreeSpacePtr target_space);

}  // namespace freelab
