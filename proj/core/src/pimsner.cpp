#include "freelab/pimsner.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freelab {

PimsnerSpace::PimsnerSpace(PointedSpace h1, PointedSpace h2, int depth,
                           std::int64_t dim_cap)
    : h1_(std::move(h1)), h2_(std::move(h2)), depth_(depth) {
  if (depth_ < 1) throw std::invalid_argument("pimsner: depth must be >= 1");
  // dim L_{i,n} = product of the full slot dimensions along the alternating
  // tags; sum over both leading factors and all lengths.
  std::int64_t total = 0;
  for (int n = 1; n <= depth_; ++n) {
    std::int64_t l1 = 1, l2 = 1;
    for (int s = 0; s < n; ++s) {
      l1 *= (s % 2 == 0) ? h1_.dim : h2_.dim;
      l2 *= (s % 2 == 0) ? h2_.dim : h1_.dim;
    }
    total += l1 + l2;
    if (total > dim_cap)
      throw std::invalid_argument("pimsner dimension exceeds cap " +
                                  std::to_string(dim_cap));
  }
  words_.reserve(static_cast<size_t>(total));
  for (int n = 1; n <= depth_; ++n) {
    for (int lead = 0; lead < 2; ++lead) {
      BasisWord w(n);
      for (int s = 0; s < n; ++s) w[s] = {(lead + s) % 2, 0};
      // Odometer over the slot indices, last slot fastest.
      for (;;) {
        words_.push_back(w);
        int s = n - 1;
        while (s >= 0) {
          int d = factor(w[s].factor).dim;
          if (++w[s].idx < d) break;
          w[s].idx = 0;
          --s;
        }
        if (s < 0) break;
      }
    }
  }
  index_.reserve(words_.size() * 2);
  for (int i = 0; i < static_cast<int>(words_.size()); ++i) index_[words_[i]] = i;
}

int PimsnerSpace::index(const BasisWord& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) throw std::out_of_range("pimsner word not in space");
  return it->second;
}

SpMat PimsnerSpace::summand_projector(int leading_factor, int len) const {
  std::vector<Triplet> t;
  for (int i = 0; i < dim(); ++i)
    if (length(i) == len && leading(i) == leading_factor) t.emplace_back(i, i, cplx(1.0));
  SpMat p(dim(), dim());
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

SpMat PimsnerSpace::length_projector(int max_len) const {
  std::vector<Triplet> t;
  for (int i = 0; i < dim(); ++i)
    if (length(i) <= max_len) t.emplace_back(i, i, cplx(1.0));
  SpMat p(dim(), dim());
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

SpMat PimsnerSpace::k_projector(int leading_factor) const {
  std::vector<Triplet> t;
  for (int i = 0; i < dim(); ++i)
    if (leading(i) == leading_factor) t.emplace_back(i, i, cplx(1.0));
  SpMat p(dim(), dim());
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

PimsnerSpacePtr build_pimsner_space(PointedSpace h1, PointedSpace h2, int depth,
                                    std::int64_t dim_cap) {
  return std::make_shared<const PimsnerSpace>(std::move(h1), std::move(h2), depth,
                                              dim_cap);
}

SpMat build_S(const PimsnerSpace& space) {
  std::vector<Triplet> t;
  for (int c = 0; c < space.dim(); ++c) {
    const BasisWord& w = space.word(c);
    if (static_cast<int>(w.size()) == space.depth()) continue;
    BasisWord ext;
    ext.reserve(w.size() + 1);
    ext.push_back({1 - w.front().factor, 0});
    ext.insert(ext.end(), w.begin(), w.end());
    t.emplace_back(space.index(ext), c, cplx(1.0));
  }
  SpMat s(space.dim(), space.dim());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

SpMat act_diag(const MatC& a1, const MatC& a2, const PimsnerSpace& space) {
  const MatC m[2] = {space.factor(0).rotate(a1), space.factor(1).rotate(a2)};
  std::vector<Triplet> t;
  for (int c = 0; c < space.dim(); ++c) {
    BasisWord w = space.word(c);
    const int f = w.front().factor;
    const int r = w.front().idx;
    const int d = space.factor(f).dim;
    for (int k = 0; k < d; ++k) {
      cplx v = m[f](k, r);
      if (v == cplx(0.0)) continue;
      w.front().idx = k;
      t.emplace_back(space.index(w), c, v);
    }
  }
  SpMat out(space.dim(), space.dim());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SpMat act_factor(const MatC& a, int factor, const PimsnerSpace& space) {
  const int d0 = space.factor(0).dim;
  const int d1 = space.factor(1).dim;
  return factor == 0 ? act_diag(a, MatC::Zero(d1, d1), space)
                     : act_diag(MatC::Zero(d0, d0), a, space);
}

SpMat gauge_unitary(const PimsnerSpace& space, double theta) {
  std::vector<Triplet> t;
  for (int i = 0; i < space.dim(); ++i)
    t.emplace_back(i, i, std::exp(cplx(0.0, -theta * space.length(i))));
  SpMat u(space.dim(), space.dim());
  u.setFromTriplets(t.begin(), t.end());
  return u;
}

SpMat gauge_apply(const SpMat& t, const PimsnerSpace& space, double theta) {
  SpMat u = gauge_unitary(space, theta);
  return SpMat(SpMat(u.adjoint() * t) * u);
}

SpMat cond_expectation(const SpMat& t, const PimsnerSpace& space) {
  std::vector<Triplet> keep;
  for (int c = 0; c < t.outerSize(); ++c)
    for (SpMat::InnerIterator it(t, c); it; ++it)
      if (space.length(static_cast<int>(it.row())) == space.length(c))
        keep.emplace_back(it.row(), c, it.value());
  SpMat out(t.rows(), t.cols());
  out.setFromTriplets(keep.begin(), keep.end());
  return out;
}

SpMat cond_expectation_sampled(const SpMat& t, const PimsnerSpace& space, int grid) {
  if (grid <= 0) grid = 2 * space.depth() + 3;
  if (grid < 2 * space.depth() + 1)
    throw std::invalid_argument("gauge grid below the Nyquist bound 2*depth+1");
  SpMat acc(t.rows(), t.cols());
  for (int k = 0; k < grid; ++k) {
    double theta = 2.0 * std::numbers::pi * k / grid;
    acc = acc + gauge_apply(t, space, theta);
  }
  return SpMat(acc / static_cast<double>(grid));
}

FejerWeights fejer_weights(int order) {
  if (order < 0) throw std::invalid_argument("fejer order must be >= 0");
  FejerWeights f{order, {}};
  f.weights.reserve(order + 1);
  for (int j = 0; j <= order; ++j)
    f.weights.push_back(1.0 - static_cast<double>(j) / (order + 1));
  return f;
}

SpMat fejer_partial(const SpMat& t, const PimsnerSpace& space, int order) {
  const FejerWeights fw = fejer_weights(order);
  const SpMat s = build_S(space);
  SpMat acc(t.rows(), t.cols());
  SpMat s_pow(t.rows(), t.cols());
  s_pow.setIdentity();
  for (int j = 0; j <= order; ++j) {
    if (j > 0) s_pow = SpMat(s * s_pow);
    const SpMat s_adj_pow = SpMat(s_pow.adjoint());
    acc = acc + SpMat(fw.weights[j] * SpMat(s_adj_pow * cond_expectation(SpMat(s_pow * t), space)));
    if (j > 0)
      acc = acc + SpMat(fw.weights[j] * SpMat(cond_expectation(SpMat(t * s_adj_pow), space) * s_pow));
  }
  return acc;
}

SStarReport verify_sstar_relations(const PimsnerSpace& space,
                                   const std::vector<std::pair<MatC, MatC>>& samples) {
  SStarReport rep;
  const SpMat s = build_S(space);
  const SpMat s_adj = SpMat(s.adjoint());
  const SpMat interior = space.length_projector(space.depth() - 1);
  for (const auto& [a, b] : samples) {
    int factor;
    if (a.rows() == space.factor(0).dim && b.rows() == space.factor(0).dim)
      factor = 0;
    else if (a.rows() == space.factor(1).dim && b.rows() == space.factor(1).dim)
      factor = 1;
    else
      throw std::invalid_argument("sstar sample does not match either factor");
    const int other = 1 - factor;
    const SpMat x = act_factor(a, factor, space);
    const SpMat y = act_factor(b, factor, space);
    const SpMat pk = space.k_projector(other);
    const cplx tau = space.factor(factor).rotate(a)(0, 0);

    rep.compression_residual = std::max(
        rep.compression_residual,
        max_abs(SpMat((SpMat(s_adj * SpMat(x * s)) - SpMat(tau * pk)) * interior)));
    rep.asb = std::max(rep.asb, max_abs(SpMat(x * SpMat(s * y))));
    rep.astarb = std::max(rep.astarb, max_abs(SpMat(x * SpMat(s_adj * y))));
    rep.projection_left =
        std::max(rep.projection_left, max_abs(SpMat(SpMat(pk * SpMat(s * x)) - SpMat(s * x))));
    rep.projection_right = std::max(
        rep.projection_right, max_abs(SpMat(SpMat(SpMat(x * s_adj) * pk) - SpMat(x * s_adj))));
  }
  return rep;
}

CornerEmbedding make_corner_embedding(PimsnerSpacePtr space) {
  const SpMat s = build_S(*space);
  SpMat id(space->dim(), space->dim());
  id.setIdentity();
  const SpMat s2 = SpMat(s * s);
  SpMat p = SpMat(id - SpMat(s2 * SpMat(s2.adjoint())));
  p.prune([](int, int, const cplx& v) { return v != cplx(0.0); });
  SpMat u = SpMat(SpMat(p * SpMat(s + SpMat(s.adjoint()))) * p);
  return {std::move(space), std::move(p), std::move(u)};
}

SpMat corner_psi(const CornerEmbedding& ce, const MatC& a, int factor) {
  const SpMat x = act_factor(a, factor, *ce.space);
  return SpMat(SpMat(ce.p * SpMat(x * ce.p)) + SpMat(ce.u * SpMat(x * ce.u)));
}

SpMat psi_on_word(const CornerEmbedding& ce, const std::vector<CenteredLetter>& word) {
  SpMat acc = ce.p;  // the empty word maps to the corner unit
  int prev = -1;
  for (const auto& letter : word) {
    if (letter.factor == prev)
      throw std::invalid_argument("psi_on_word: word is not alternating");
    prev = letter.factor;
    cplx tau = ce.space->factor(letter.factor).rotate(letter.a)(0, 0);
    if (std::abs(tau) > 1e-10)
      throw std::invalid_argument("psi_on_word: letter is not centered, state value " +
                                  std::to_string(std::abs(tau)));
    acc = SpMat(acc * corner_psi(ce, letter.a, letter.factor));
  }
  return acc;
}

SpMat k11_isometry(const PimsnerSpace& pimsner, const FreeProductSpace& free_space) {
  if (free_space.num_factors() != 2)
    throw std::invalid_argument("k11_isometry: free space must have two factors");
  if (pimsner.depth() < free_space.depth() + 2)
    throw std::invalid_argument("k11_isometry: pimsner depth must be >= free depth + 2");
  for (int i = 0; i < 2; ++i) {
    if (pimsner.factor(i).dim != free_space.factor(i).dim ||
        (pimsner.factor(i).xi - free_space.factor(i).xi).norm() > 1e-12)
      throw std::invalid_argument("k11_isometry: factor mismatch");
  }
  std::vector<Triplet> t;
  for (int c = 0; c < free_space.dim(); ++c) {
    const BasisWord& w = free_space.word(c);
    BasisWord padded;
    padded.reserve(w.size() + 2);
    if (w.empty() || w.front().factor != 0) padded.push_back({0, 0});
    for (const auto& l : w) padded.push_back({l.factor, l.idx + 1});
    if (w.empty() || w.back().factor != 0) padded.push_back({0, 0});
    t.emplace_back(pimsner.index(padded), c, cplx(1.0));
  }
  SpMat v(pimsner.dim(), free_space.dim());
  v.setFromTriplets(t.begin(), t.end());
  return v;
}

MatC sigma_compression(const SpMat& t, const PimsnerSpace& pimsner,
                       const FreeProductSpace& free_space) {
  SpMat v = k11_isometry(pimsner, free_space);
  return MatC(SpMat(SpMat(v.adjoint() * t) * v));
}

QuotientPimsner build_quotient_pimsner(const ExactnessScenario& sc, int depth) {
  QuotientPimsner q;
  q.full = build_pimsner_space(sc.h1, sc.h2, depth);
  q.quotient = build_pimsner_space(sc.h10, sc.h2, depth);
  // Factor-0 quotient slots are the leading rotated coordinates of the full
  // factor (the Householder vector lives in the leading block), so quotient
  // words embed letter by letter.
  std::vector<Triplet> t;
  for (int c = 0; c < q.quotient->dim(); ++c)
    t.emplace_back(q.full->index(q.quotient->word(c)), c, cplx(1.0));
  q.inclusion = SpMat(q.full->dim(), q.quotient->dim());
  q.inclusion.setFromTriplets(t.begin(), t.end());
  return q;
}

SpMat pi_prime(const SpMat& t, const QuotientPimsner& q) {
  return SpMat(SpMat(q.inclusion.adjoint() * t) * q.inclusion);
}

}  // namespace freelab
