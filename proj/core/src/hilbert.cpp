#include "freelab/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace freelab {

namespace {

bool is_scalar_matrix(const MatC& a, cplx& lambda) {
  lambda = a(0, 0);
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) {
      if (i == j ? a(i, j) != lambda : a(i, j) != cplx(0.0)) return false;
    }
  return true;
}

}  // namespace

MatC PointedSpace::rotate(const MatC& a) const {
  if (a.rows() != dim || a.cols() != dim)
    throw std::invalid_argument("rotate: matrix is " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + ", factor dim is " +
                                std::to_string(dim));
  cplx lambda;
  if (is_scalar_matrix(a, lambda)) return lambda * MatC::Identity(dim, dim);
  if (is_scalar_matrix(basis_rotation, lambda) && lambda == cplx(1.0)) return a;
  const MatC& r = basis_rotation;
  MatC h1 = hermitize(a);
  MatC h2 = hermitize(a * cplx(0.0, -1.0));
  MatC m1 = hermitize(r * h1 * r.adjoint());
  MatC m2 = hermitize(r * h2 * r.adjoint());
  return m1 + cplx(0.0, 1.0) * m2;
}

VecC PointedSpace::reduced_basis_vector(int k) const {
  if (k < 0 || k >= dim - 1) throw std::out_of_range("reduced_basis_vector index");
  return basis_rotation.adjoint() * VecC::Unit(dim, k + 1);
}

MatC PointedSpace::centered(const MatC& a) const {
  return a - state(a) * MatC::Identity(dim, dim);
}

PointedSpace make_pointed(int dim, VecC xi) {
  if (dim < 1) throw std::invalid_argument("make_pointed: dim must be >= 1");
  if (xi.size() != dim) throw std::invalid_argument("make_pointed: xi has wrong length");
  if (std::abs(xi.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("make_pointed: xi is not a unit vector");

  // Householder step sending xi to a phase multiple of e0, then a diagonal
  // phase fix so R xi = e0 on the nose.
  cplx phase = cplx(1.0);
  if (xi(0) != cplx(0.0)) phase = xi(0) / std::abs(xi(0));
  VecC w = xi - phase * VecC::Unit(dim, 0);
  MatC r;
  double wn2 = w.squaredNorm();
  if (wn2 < 1e-30) {
    r = MatC::Identity(dim, dim);
  } else {
    r = MatC::Identity(dim, dim) - (2.0 / wn2) * (w * w.adjoint());
  }
  r.row(0) *= std::conj(phase);
  return PointedSpace{dim, std::move(xi), std::move(r)};
}

FreeProductSpace::FreeProductSpace(std::vector<PointedSpace> factors, int depth,
                                   std::int64_t dim_cap)
    : factors_(std::move(factors)), depth_(depth) {
  if (factors_.size() < 2)
    throw std::invalid_argument("free product needs at least 2 factors");
  if (depth_ < 0) throw std::invalid_argument("depth must be >= 0");

  std::vector<int> dims;
  for (const auto& f : factors_) dims.push_back(f.dim);
  std::int64_t total = free_product_dimension(dims, depth_);
  if (total > dim_cap)
    throw std::invalid_argument("free product dimension " + std::to_string(total) +
                                " exceeds cap " + std::to_string(dim_cap));

  words_.reserve(static_cast<size_t>(total));
  words_.push_back({});  // xi_0
  // Enumerate by length; within each length, extend words of length n-1 in
  // order, which yields (factor sequence, indices) lexicographic order.
  std::vector<BasisWord> prev = {{}};
  for (int n = 1; n <= depth_; ++n) {
    std::vector<BasisWord> cur;
    for (int f = 0; f < num_factors(); ++f) {
      // Words of length n with leading factor f, ordered by the rest.
      for (const auto& tail : prev) {
        if (!tail.empty() && tail.front().factor == f) continue;
        for (int k = 0; k + 1 < factors_[f].dim; ++k) {
          BasisWord w;
          w.reserve(tail.size() + 1);
          w.push_back({f, k});
          w.insert(w.end(), tail.begin(), tail.end());
          cur.push_back(std::move(w));
        }
      }
    }
    // Canonical order within a length: factor sequence first, then indices.
    std::sort(cur.begin(), cur.end(), [](const BasisWord& a, const BasisWord& b) {
      for (size_t i = 0; i < a.size(); ++i)
        if (a[i].factor != b[i].factor) return a[i].factor < b[i].factor;
      for (size_t i = 0; i < a.size(); ++i)
        if (a[i].idx != b[i].idx) return a[i].idx < b[i].idx;
      return false;
    });
    for (auto& w : cur) words_.push_back(w);
    prev = std::move(cur);
  }
  index_.reserve(words_.size() * 2);
  for (int i = 0; i < static_cast<int>(words_.size()); ++i) index_[words_[i]] = i;
}

int FreeProductSpace::index(const BasisWord& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) throw std::out_of_range("basis word not in space");
  return it->second;
}

SpMat FreeProductSpace::length_projector(int max_len) const {
  std::vector<Triplet> t;
  for (int i = 0; i < dim(); ++i)
    if (length(i) <= max_len) t.emplace_back(i, i, cplx(1.0));
  SpMat p(dim(), dim());
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

FreeSpacePtr build_free_product_space(std::vector<PointedSpace> factors, int depth,
                                      std::int64_t dim_cap) {
  return std::make_shared<const FreeProductSpace>(std::move(factors), depth, dim_cap);
}

std::int64_t free_product_dimension(const std::vector<int>& dims, int depth) {
  // count[f] = number of alternating words of the current length with
  // leading factor f.
  std::int64_t total = 1;
  std::vector<std::int64_t> count(dims.size(), 0);
  for (int n = 1; n <= depth; ++n) {
    std::vector<std::int64_t> next(dims.size(), 0);
    for (size_t f = 0; f < dims.size(); ++f) {
      std::int64_t tails = 0;
      if (n == 1) {
        tails = 1;
      } else {
        for (size_t g = 0; g < dims.size(); ++g)
          if (g != f) tails += count[g];
      }
      next[f] = tails * (dims[f] - 1);
      total += next[f];
    }
    count = std::move(next);
  }
  return total;
}

SpMat embed_subspace(const FreeProductSpace& sub, const FreeProductSpace& full) {
  if (sub.num_factors() != full.num_factors())
    throw std::invalid_argument("embed_subspace: factor count mismatch");
  if (sub.depth() != full.depth())
    throw std::invalid_argument("embed_subspace: depth mismatch");
  for (int i = 0; i < sub.num_factors(); ++i) {
    const auto& s = sub.factor(i);
    const auto& f = full.factor(i);
    if (s.dim > f.dim)
      throw std::invalid_argument("embed_subspace: sub factor larger than full factor");
    for (int k = 0; k < f.dim; ++k) {
      cplx expect = k < s.dim ? s.xi(k) : cplx(0.0);
      if (std::abs(f.xi(k) - expect) > 1e-12)
        throw std::invalid_argument(
            "embed_subspace: full xi is not the zero-padded sub xi");
    }
  }
  // Sub reduced letters are the leading reduced letters of the full factor
  // (the Householder vector lives in the leading block), so each sub word is
  // itself a full word.
  std::vector<Triplet> t;
  for (int c = 0; c < sub.dim(); ++c) t.emplace_back(full.index(sub.word(c)), c, cplx(1.0));
  SpMat v(full.dim(), sub.dim());
  v.setFromTriplets(t.begin(), t.end());
  return v;
}

}  // namespace freelab
