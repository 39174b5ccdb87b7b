#pragma once

#include <complex>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace freelab {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

// Default residual tolerances used across the library (see module contracts).
inline constexpr double kEqTol = 1e-12;   // entrywise equality residual
inline constexpr double kNormTol = 1e-9;  // norm-based checks

// Hermitian part enforced bitwise: entry (i,j) and conj of entry (j,i) are
// built from the same floating-point additions.
inline MatC hermitize(const MatC& x) { return (x + MatC(x.adjoint())) / 2.0; }

// Largest absolute entry of a sparse matrix.
inline double max_abs(const SpMat& m) {
  double r = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

inline double max_abs(const MatC& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace freelab
