#include "freelab/cpmaps.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace freelab {

namespace {

constexpr double kRankCut = 1e-12;  // relative eigenvalue cutoff for rank decisions

MatC kron(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

cplx hs_inner(const MatC& x, const MatC& y) { return (x.adjoint() * y).trace(); }

// Coordinates C (b x r) and the isometric coordinate maps for a Gram matrix:
// to_coords * c gives the orthonormal coordinates of the element with basis
// coordinates c, and from_coords is a right inverse.
struct GramFrame {
  MatC to_coords;    // r x b
  MatC from_coords;  // b x r
  int rank = 0;
};

GramFrame gram_frame(const MatC& gram, double psd_tol = 1e-10) {
  Eigen::SelfAdjointEigenSolver<MatC> es(hermitize(gram));
  const auto& ev = es.eigenvalues();
  double top = ev.size() ? ev.maxCoeff() : 0.0;
  if (ev.size() && ev.minCoeff() < -psd_tol * std::max(top, 1.0))
    throw std::invalid_argument("Gram matrix is not positive semidefinite: min eig " +
                                std::to_string(ev.minCoeff()));
  std::vector<int> keep;
  for (int k = 0; k < ev.size(); ++k)
    if (ev(k) > kRankCut * std::max(top, 1e-300)) keep.push_back(k);
  GramFrame f;
  f.rank = static_cast<int>(keep.size());
  f.to_coords = MatC::Zero(f.rank, gram.rows());
  f.from_coords = MatC::Zero(gram.rows(), f.rank);
  for (int k = 0; k < f.rank; ++k) {
    double s = std::sqrt(ev(keep[k]));
    f.to_coords.row(k) = s * es.eigenvectors().col(keep[k]).adjoint();
    f.from_coords.col(k) = es.eigenvectors().col(keep[k]) / s;
  }
  return f;
}

MatC hs_gram(const std::vector<MatC>& basis) {
  const int b = static_cast<int>(basis.size());
  MatC g(b, b);
  for (int r = 0; r < b; ++r)
    for (int c = 0; c < b; ++c) g(r, c) = hs_inner(basis[r], basis[c]);
  return g;
}

// Closest isometry to the given full-column-rank matrix (Loewdin): preserves
// the column pairing, unlike a QR factor.
MatC loewdin(const MatC& w) {
  Eigen::SelfAdjointEigenSolver<MatC> es(hermitize(w.adjoint() * w));
  MatC inv_sqrt = es.eigenvectors() *
                  es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() *
                  es.eigenvectors().adjoint();
  return w * inv_sqrt;
}

}  // namespace

SubAlgebra SubAlgebra::full(int n) {
  SubAlgebra a{n, {}};
  a.basis.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MatC e = MatC::Zero(n, n);
      e(i, j) = 1.0;
      a.basis.push_back(std::move(e));
    }
  return a;
}

SubAlgebra SubAlgebra::scalars(int n) { return {n, {MatC::Identity(n, n)}}; }

SubAlgebra SubAlgebra::diagonal(int n) {
  SubAlgebra a{n, {}};
  for (int i = 0; i < n; ++i) {
    MatC e = MatC::Zero(n, n);
    e(i, i) = 1.0;
    a.basis.push_back(std::move(e));
  }
  return a;
}

SubAlgebra SubAlgebra::block_diagonal(int a_dim, int b_dim) {
  const int n = a_dim + b_dim;
  SubAlgebra a{n, {}};
  for (int i = 0; i < a_dim; ++i)
    for (int j = 0; j < a_dim; ++j) {
      MatC e = MatC::Zero(n, n);
      e(i, j) = 1.0;
      a.basis.push_back(std::move(e));
    }
  for (int i = 0; i < b_dim; ++i)
    for (int j = 0; j < b_dim; ++j) {
      MatC e = MatC::Zero(n, n);
      e(a_dim + i, a_dim + j) = 1.0;
      a.basis.push_back(std::move(e));
    }
  return a;
}

VecC membership_coords(const SubAlgebra& alg, const MatC& x, double* residual) {
  const int b = static_cast<int>(alg.basis.size());
  MatC g = hs_gram(alg.basis);
  VecC rhs(b);
  for (int i = 0; i < b; ++i) rhs(i) = hs_inner(alg.basis[i], x);
  // Pseudo-inverse solve; the basis may legitimately be overcomplete.
  Eigen::SelfAdjointEigenSolver<MatC> es(hermitize(g));
  double top = es.eigenvalues().maxCoeff();
  VecC c = VecC::Zero(b);
  for (int k = 0; k < b; ++k) {
    double lam = es.eigenvalues()(k);
    if (lam > kRankCut * std::max(top, 1e-300)) {
      VecC q = es.eigenvectors().col(k);
      c += q * (q.dot(rhs) / lam);
    }
  }
  if (residual) {
    MatC rec = MatC::Zero(alg.ambient_dim, alg.ambient_dim);
    for (int i = 0; i < b; ++i) rec += c(i) * alg.basis[i];
    *residual = (x - rec).norm();
  }
  return c;
}

double closure_residual(const SubAlgebra& alg) {
  double worst = 0.0;
  double r;
  membership_coords(alg, MatC::Identity(alg.ambient_dim, alg.ambient_dim), &r);
  worst = std::max(worst, r);
  for (const auto& x : alg.basis) {
    membership_coords(alg, MatC(x.adjoint()), &r);
    worst = std::max(worst, r);
    for (const auto& y : alg.basis) {
      membership_coords(alg, MatC(x * y), &r);
      worst = std::max(worst, r);
    }
  }
  return worst;
}

FiniteState FiniteState::vector_state(const VecC& xi) {
  return {MatC(xi * xi.adjoint())};
}

FiniteState FiniteState::normalized_trace(int n) {
  return {MatC(MatC::Identity(n, n) / static_cast<double>(n))};
}

double FiniteState::psd_trace_residual() const {
  Eigen::SelfAdjointEigenSolver<MatC> es(hermitize(density), Eigen::EigenvaluesOnly);
  double neg = std::max(0.0, -es.eigenvalues().minCoeff());
  return std::max(neg, std::abs(density.trace() - cplx(1.0)));
}

UCPMap UCPMap::from_action(int in_dim, int out_dim,
                           const std::function<MatC(const MatC&)>& action) {
  UCPMap u;
  u.in_dim_ = in_dim;
  u.out_dim_ = out_dim;
  u.choi_ = MatC::Zero(in_dim * out_dim, in_dim * out_dim);
  for (int i = 0; i < in_dim; ++i)
    for (int j = 0; j < in_dim; ++j) {
      MatC e = MatC::Zero(in_dim, in_dim);
      e(i, j) = 1.0;
      MatC img = action(e);
      if (img.rows() != out_dim || img.cols() != out_dim)
        throw std::invalid_argument("UCPMap action has wrong output dimension");
      u.choi_.block(i * out_dim, j * out_dim, out_dim, out_dim) = img;
    }
  u.derive_kraus();
  return u;
}

UCPMap UCPMap::from_choi(int in_dim, int out_dim, MatC choi) {
  if (choi.rows() != in_dim * out_dim || choi.cols() != in_dim * out_dim)
    throw std::invalid_argument("Choi matrix has wrong dimension");
  UCPMap u;
  u.in_dim_ = in_dim;
  u.out_dim_ = out_dim;
  u.choi_ = std::move(choi);
  u.derive_kraus();
  return u;
}

UCPMap UCPMap::identity(int n) {
  return from_action(n, n, [](const MatC& a) { return a; });
}

void UCPMap::derive_kraus() {
  Eigen::SelfAdjointEigenSolver<MatC> es(hermitize(choi_));
  double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(top, 1.0))
    throw std::invalid_argument("Choi matrix is not PSD: min eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  kraus_.clear();
  for (int k = 0; k < es.eigenvalues().size(); ++k) {
    double lam = es.eigenvalues()(k);
    if (lam <= kRankCut * std::max(top, 1e-300)) continue;
    MatC kmat(out_dim_, in_dim_);
    for (int i = 0; i < in_dim_; ++i)
      for (int a = 0; a < out_dim_; ++a)
        kmat(a, i) = std::sqrt(lam) * es.eigenvectors()(i * out_dim_ + a, k);
    kraus_.push_back(std::move(kmat));
  }
}

MatC UCPMap::apply(const MatC& a) const {
  if (a.rows() != in_dim_ || a.cols() != in_dim_)
    throw std::invalid_argument("UCPMap::apply: wrong input dimension");
  MatC out = MatC::Zero(out_dim_, out_dim_);
  for (const auto& k : kraus_) out += k * a * k.adjoint();
  return out;
}

double UCPMap::choi_min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<MatC> es(hermitize(choi_), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double UCPMap::unitality_residual() const {
  return max_abs(MatC(apply(MatC::Identity(in_dim_, in_dim_)) -
                      MatC::Identity(out_dim_, out_dim_)));
}

double UCPMap::kraus_roundtrip_residual() const {
  MatC rebuilt = MatC::Zero(choi_.rows(), choi_.cols());
  for (const auto& k : kraus_)
    for (int i = 0; i < in_dim_; ++i)
      for (int j = 0; j < in_dim_; ++j)
        rebuilt.block(i * out_dim_, j * out_dim_, out_dim_, out_dim_) +=
            k.col(i) * k.col(j).adjoint();
  return max_abs(MatC(rebuilt - choi_));
}

GnsResult gns(const SubAlgebra& alg, const FiniteState& state) {
  const int b = static_cast<int>(alg.basis.size());
  MatC g(b, b);
  for (int r = 0; r < b; ++r)
    for (int c = 0; c < b; ++c)
      g(r, c) = state.value(MatC(alg.basis[r].adjoint() * alg.basis[c]));
  GramFrame frame = gram_frame(g);

  // Left multiplication in basis coordinates.
  auto left_mult = [alg](const MatC& a) {
    const int bb = static_cast<int>(alg.basis.size());
    MatC l(bb, bb);
    for (int j = 0; j < bb; ++j) l.col(j) = membership_coords(alg, MatC(a * alg.basis[j]));
    return l;
  };

  GnsResult out;
  out.dim = frame.rank;
  VecC id_coords = membership_coords(alg, MatC::Identity(alg.ambient_dim, alg.ambient_dim));
  out.cyclic = frame.to_coords * id_coords;
  MatC to = frame.to_coords, from = frame.from_coords;
  out.represent = [alg, to, from, left_mult](const MatC& a) -> MatC {
    return to * left_mult(a) * from;
  };
  out.rep_basis.reserve(b);
  for (int i = 0; i < b; ++i) out.rep_basis.push_back(out.represent(alg.basis[i]));
  return out;
}

MatC StinespringDilation::represent(const MatC& a) const {
  return kron(a, MatC::Identity(rank, rank));
}

StinespringDilation stinespring(const UCPMap& phi) {
  StinespringDilation d;
  d.in_dim = phi.in_dim();
  d.rank = static_cast<int>(phi.kraus().size());
  d.v = MatC::Zero(d.in_dim * d.rank, phi.out_dim());
  for (int k = 0; k < d.rank; ++k)
    for (int i = 0; i < d.in_dim; ++i)
      d.v.row(i * d.rank + k) = phi.kraus()[k].col(i).adjoint();
  return d;
}

UCPMap trace_conditional_expectation(const SubAlgebra& alg) {
  double closure = closure_residual(alg);
  if (closure > 1e-10)
    throw std::invalid_argument("subalgebra basis is not closed, residual " +
                                std::to_string(closure));
  GramFrame frame = gram_frame(hs_gram(alg.basis));
  // Orthonormal HS basis of the subalgebra.
  std::vector<MatC> on_basis;
  for (int k = 0; k < frame.rank; ++k) {
    MatC bmat = MatC::Zero(alg.ambient_dim, alg.ambient_dim);
    for (int i = 0; i < static_cast<int>(alg.basis.size()); ++i)
      bmat += frame.from_coords(i, k) * alg.basis[i];
    on_basis.push_back(std::move(bmat));
  }
  auto action = [on_basis, n = alg.ambient_dim](const MatC& t) {
    MatC out = MatC::Zero(n, n);
    for (const auto& bmat : on_basis) out += hs_inner(bmat, t) * bmat;
    return out;
  };
  return UCPMap::from_action(alg.ambient_dim, alg.ambient_dim, action);
}

ExtensionResult extend_state_preserving(const ExtensionInput& in) {
  const int n = in.alg.ambient_dim;
  const int m = static_cast<int>(in.eta.size());
  const int b = static_cast<int>(in.alg.basis.size());
  if (static_cast<int>(in.phi_basis_images.size()) != b)
    throw std::invalid_argument("extend: need one image per basis element");
  if (in.xi.size() != n) throw std::invalid_argument("extend: xi has wrong dimension");

  // phi on arbitrary elements of the span.
  auto phi_of = [&](const MatC& a) {
    double r;
    VecC c = membership_coords(in.alg, a, &r);
    if (r > 1e-9)
      throw std::invalid_argument("extend: element not in the subalgebra, residual " +
                                  std::to_string(r));
    MatC img = MatC::Zero(m, m);
    for (int i = 0; i < b; ++i) img += c(i) * in.phi_basis_images[i];
    return img;
  };

  // Preconditions: state compatibility and xi in the range of the algebra.
  double compat = 0.0;
  for (int i = 0; i < b; ++i) {
    cplx lhs = in.eta.dot(in.phi_basis_images[i] * in.eta);
    cplx rhs = in.xi.dot(in.alg.basis[i] * in.xi);
    compat = std::max(compat, std::abs(lhs - rhs));
  }
  if (compat > 1e-9)
    throw std::invalid_argument("extend: state compatibility violated, residual " +
                                std::to_string(compat));
  {
    MatC cols(n, b * n);
    for (int i = 0; i < b; ++i) cols.block(0, i * n, n, n) = in.alg.basis[i];
    Eigen::HouseholderQR<MatC> qr(cols);
    MatC q = qr.householderQ() * MatC::Identity(b * n, std::min<int>(n, b * n));
    // Columns of q span at least the range; project xi onto the range of cols.
    MatC proj = MatC::Zero(n, n);
    MatC r = qr.matrixQR().topRows(std::min<int>(n, b * n)).triangularView<Eigen::Upper>();
    int rank = 0;
    double top = r.cwiseAbs().diagonal().maxCoeff();
    for (int k = 0; k < r.rows(); ++k)
      if (std::abs(r(k, k)) > 1e-12 * std::max(top, 1e-300)) rank = k + 1;
    for (int k = 0; k < rank; ++k) proj += q.col(k) * q.col(k).adjoint();
    double range_res = (in.xi - proj * in.xi).norm();
    if (range_res > 1e-9)
      throw std::invalid_argument("extend: xi not in the range of the subalgebra, residual " +
                                  std::to_string(range_res));
  }

  // Stinespring space of phi on the subalgebra: Gram of E_i (x) e_a under
  // <A (x) x, B (x) y> = <phi(B^adj A) x, y>.
  MatC gst(b * m, b * m);
  for (int j = 0; j < b; ++j)
    for (int i = 0; i < b; ++i) {
      MatC block = phi_of(MatC(in.alg.basis[j].adjoint() * in.alg.basis[i]));
      for (int bb = 0; bb < m; ++bb)
        for (int a = 0; a < m; ++a) gst(j * m + bb, i * m + a) = block(bb, a);
    }
  GramFrame st = gram_frame(gst);

  // Representation on the Stinespring space and the isometry V_st.
  auto left_mult = [&](const MatC& a) {
    MatC l(b, b);
    for (int j = 0; j < b; ++j)
      l.col(j) = membership_coords(in.alg, MatC(a * in.alg.basis[j]));
    return l;
  };
  auto pi_st = [&](const MatC& a) -> MatC {
    return st.to_coords * kron(left_mult(a), MatC::Identity(m, m)) * st.from_coords;
  };
  VecC id_coords = membership_coords(in.alg, MatC::Identity(n, n));
  MatC v_st = st.to_coords * kron(MatC(id_coords), MatC::Identity(m, m));
  VecC eta_prime = v_st * in.eta;

  // The GNS unitary between H_0 = span(A xi) and K_0 = span(pi(A) eta').
  MatC h(n, b);
  for (int i = 0; i < b; ++i) h.col(i) = in.alg.basis[i] * in.xi;
  GramFrame h0 = gram_frame(hermitize(h.adjoint() * h));
  MatC p_mat = h * h0.from_coords;  // n x r0, orthonormal columns
  MatC u(st.rank, b);
  for (int i = 0; i < b; ++i) u.col(i) = pi_st(in.alg.basis[i]) * eta_prime;
  MatC w_tilde = loewdin(MatC(u * h0.from_coords));  // st.rank x r0, isometric
  MatC v0 = w_tilde * p_mat.adjoint();               // st.rank x n
  MatC p_k0 = w_tilde * w_tilde.adjoint();
  MatC q_k0 = MatC::Identity(st.rank, st.rank) - p_k0;

  UCPMap cond = trace_conditional_expectation(in.alg);
  auto psi_action = [&, v0, q_k0, v_st](const MatC& t) -> MatC {
    MatC corner = v0 * t * v0.adjoint();
    MatC off = q_k0 * pi_st(cond.apply(t)) * q_k0;
    return v_st.adjoint() * (corner + off) * v_st;
  };

  ExtensionResult out{UCPMap::from_action(n, m, psi_action), compat};
  return out;
}

double state_compatibility_residual(const UcpFactor& f) {
  const int ns = f.source.dim;
  double worst = 0.0;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j) {
      MatC e = MatC::Zero(ns, ns);
      e(i, j) = 1.0;
      cplx lhs = f.target.xi.dot(f.phi.apply(e) * f.target.xi);
      cplx rhs = f.source.xi.dot(e * f.source.xi);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

FreeOperator free_product_ucp(const std::vector<UcpFactor>& factors, const NCPoly& word,
                              const Assignment& source_assign,
                              const std::map<std::string, int>& symbol_factor,
                              FreeSpacePtr target_space) {
  if (static_cast<int>(factors.size()) != target_space->num_factors())
    throw std::invalid_argument("free_product_ucp: factor count mismatch");
  for (const auto& f : factors) {
    double r = state_compatibility_residual(f);
    if (r > 1e-9)
      throw std::invalid_argument("free_product_ucp: state compatibility residual " +
                                  std::to_string(r));
  }
  std::map<int, StateFn> states;
  for (int i = 0; i < static_cast<int>(factors.size()); ++i) {
    const VecC xi = factors[i].source.xi;
    states[i] = [xi, &source_assign](const NCPoly& p) -> cplx {
      MatC mval = eval(p, source_assign, static_cast<int>(xi.size()));
      return xi.dot(mval * xi);
    };
  }
  CenterDecomposition decomp = center_decompose(word, states);

  FreeOperator acc = cplx(decomp.scalar) * identity_operator(target_space);
  int guard = 0;
  for (const auto& w : decomp.words) {
    FreeOperator prod = identity_operator(target_space);
    for (const auto& f : w.factors) {
      MatC src = eval(f.poly, source_assign, factors[f.factor].source.dim);
      MatC tgt = factors[f.factor].phi.apply(src);
      prod = prod * lift_left_operator(tgt, f.factor, target_space);
    }
    guard = std::max(guard, static_cast<int>(w.factors.size()));
    acc = acc + cplx(w.coeff) * prod;
  }
  acc.depth_guard = guard;
  return acc;
}

}  // namespace freelab
