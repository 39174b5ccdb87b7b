#include "freelab/fock.hpp"

#include <stdexcept>

#include "freelab/freeprod.hpp"

namespace freelab {

FockSpace::FockSpace(int letters, int depth) : letters_(letters), depth_(depth) {
  if (letters < 1) throw std::invalid_argument("fock: need at least one letter");
  if (depth < 0) throw std::invalid_argument("fock: depth must be >= 0");
  std::vector<std::vector<int>> prev = {{}};
  words_.push_back({});
  for (int n = 1; n <= depth; ++n) {
    std::vector<std::vector<int>> cur;
    for (const auto& tail : prev)
      for (int a = 0; a < letters; ++a) {
        std::vector<int> w;
        w.reserve(tail.size() + 1);
        w.push_back(a);
        w.insert(w.end(), tail.begin(), tail.end());
        cur.push_back(std::move(w));
      }
    std::sort(cur.begin(), cur.end());
    for (auto& w : cur) words_.push_back(std::move(w));
    prev.clear();
    for (int i = static_cast<int>(words_.size()) - 1; i >= 0 && length(i) == n; --i)
      prev.push_back(words_[i]);
  }
  for (int i = 0; i < static_cast<int>(words_.size()); ++i) index_[encode(words_[i])] = i;
}

std::int64_t FockSpace::encode(const std::vector<int>& w) const {
  std::int64_t code = 0;
  for (int a : w) code = code * (letters_ + 1) + (a + 1);
  return code;
}

int FockSpace::index(const std::vector<int>& w) const {
  auto it = index_.find(encode(w));
  if (it == index_.end()) throw std::out_of_range("fock word not in space");
  return it->second;
}

SpMat FockSpace::length_projector(int max_len) const {
  std::vector<Triplet> t;
  for (int i = 0; i < dim(); ++i)
    if (length(i) <= max_len) t.emplace_back(i, i, cplx(1.0));
  SpMat p(dim(), dim());
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

FockSpacePtr build_fock_space(int letters, int depth) {
  return std::make_shared<const FockSpace>(letters, depth);
}

SpMat creation(const FockSpace& space, int i) {
  if (i < 0 || i >= space.letters()) throw std::out_of_range("creation letter index");
  std::vector<Triplet> t;
  for (int c = 0; c < space.dim(); ++c) {
    if (space.length(c) == space.depth()) continue;
    std::vector<int> w;
    w.reserve(space.word(c).size() + 1);
    w.push_back(i);
    w.insert(w.end(), space.word(c).begin(), space.word(c).end());
    t.emplace_back(space.index(w), c, cplx(1.0));
  }
  SpMat l(space.dim(), space.dim());
  l.setFromTriplets(t.begin(), t.end());
  return l;
}

cplx vacuum_state(const SpMat& t) { return t.coeff(0, 0); }

std::int64_t catalan(int n) {
  std::int64_t c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

CompressionRelationReport verify_compression_relation(const MatC& sample_a,
                                                      const VecC& xi_a, int fock_letters,
                                                      int fock_depth, int free_depth,
                                                      int margin) {
  const int dim_a = static_cast<int>(sample_a.rows());
  if (sample_a.cols() != dim_a) throw std::invalid_argument("sample A must be square");
  auto fock = build_fock_space(fock_letters, fock_depth);
  PointedSpace ha = make_pointed(dim_a, xi_a);
  PointedSpace hf = make_pointed(fock->dim(), VecC::Unit(fock->dim(), 0));
  auto space = build_free_product_space({ha, hf}, free_depth);

  // Interior: room for the two prepended letters, and a head Fock slot that
  // the creation operator can still raise.
  std::vector<Triplet> pt;
  for (int c = 0; c < space->dim(); ++c) {
    const BasisWord& w = space->word(c);
    if (static_cast<int>(w.size()) > free_depth - margin) continue;
    if (!w.empty() && w.front().factor == 1 &&
        fock->length(w.front().idx + 1) > fock_depth - 1)
      continue;
    pt.emplace_back(c, c, cplx(1.0));
  }
  SpMat p_int(space->dim(), space->dim());
  p_int.setFromTriplets(pt.begin(), pt.end());

  FreeOperator a_hat = lift_left_operator(sample_a, 0, space);
  cplx tau = xi_a.dot(sample_a * xi_a);

  CompressionRelationReport rep;
  rep.interior_margin = margin;
  rep.fock_interior_depth = fock_depth - 1;
  std::vector<FreeOperator> l_hat;
  for (int i = 0; i < fock_letters; ++i)
    l_hat.push_back(lift_left_operator(MatC(creation(*fock, i)), 1, space));
  SpMat id(space->dim(), space->dim());
  id.setIdentity();
  for (int i = 0; i < fock_letters; ++i)
    for (int j = 0; j < fock_letters; ++j) {
      SpMat lhs = SpMat(l_hat[i].matrix.adjoint() * a_hat.matrix * l_hat[j].matrix);
      if (i == j) {
        rep.max_residual = std::max(rep.max_residual, max_abs(SpMat((lhs - tau * id) * p_int)));
      } else {
        rep.off_diagonal_max = std::max(rep.off_diagonal_max, max_abs(lhs));
      }
    }
  return rep;
}

}  // namespace freelab
