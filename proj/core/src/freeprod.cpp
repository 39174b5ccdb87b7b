#include "freelab/freeprod.hpp"

#include <stdexcept>

namespace freelab {

namespace {

void require_same_space(const FreeOperator& a, const FreeOperator& b) {
  if (a.space != b.space)
    throw std::invalid_argument("operators live on different free-product spaces");
}

}  // namespace

FreeOperator operator*(const FreeOperator& a, const FreeOperator& b) {
  require_same_space(a, b);
  return {a.space, SpMat(a.matrix * b.matrix), a.depth_guard + b.depth_guard};
}

FreeOperator operator+(const FreeOperator& a, const FreeOperator& b) {
  require_same_space(a, b);
  return {a.space, SpMat(a.matrix + b.matrix), std::max(a.depth_guard, b.depth_guard)};
}

FreeOperator operator-(const FreeOperator& a, const FreeOperator& b) {
  require_same_space(a, b);
  return {a.space, SpMat(a.matrix - b.matrix), std::max(a.depth_guard, b.depth_guard)};
}

FreeOperator operator*(cplx c, const FreeOperator& a) {
  return {a.space, SpMat(c * a.matrix), a.depth_guard};
}

FreeOperator identity_operator(FreeSpacePtr space) {
  SpMat id(space->dim(), space->dim());
  id.setIdentity();
  return {std::move(space), std::move(id), 0};
}

FreeOperator lift_left_operator(const MatC& a, int factor, FreeSpacePtr space) {
  if (factor < 0 || factor >= space->num_factors())
    throw std::invalid_argument("lift: unknown factor " + std::to_string(factor));
  const PointedSpace& h = space->factor(factor);
  if (a.rows() != h.dim || a.cols() != h.dim)
    throw std::invalid_argument("lift: matrix dimension does not match factor");
  const MatC m = h.rotate(a);
  const int d = h.dim;
  const int n = space->dim();
  const int depth = space->depth();

  std::vector<Triplet> trip;
  auto put = [&](int row, int col, cplx v) {
    if (v != cplx(0.0)) trip.emplace_back(row, col, v);
  };

  for (int c = 0; c < n; ++c) {
    const BasisWord& w = space->word(c);
    if (w.empty()) {
      // A xi_0 = <A xi, xi> xi_0 + (A xi - <A xi, xi> xi).
      put(0, c, m(0, 0));
      if (depth >= 1)
        for (int k = 1; k < d; ++k) put(space->index({{factor, k - 1}}), c, m(k, 0));
    } else if (w.front().factor == factor) {
      // Same leading factor: act on the first letter, split off the xi part.
      const int r = w.front().idx + 1;
      BasisWord rest(w.begin() + 1, w.end());
      put(space->index(rest), c, m(0, r));
      BasisWord head = w;
      for (int k = 1; k < d; ++k) {
        head.front().idx = k - 1;
        put(space->index(head), c, m(k, r));
      }
    } else {
      // Different leading factor: scalar part keeps the word, the reduced
      // part prepends a letter (dropped past the truncation depth).
      put(c, c, m(0, 0));
      if (static_cast<int>(w.size()) + 1 <= depth) {
        BasisWord ext;
        ext.reserve(w.size() + 1);
        ext.push_back({factor, 0});
        ext.insert(ext.end(), w.begin(), w.end());
        for (int k = 1; k < d; ++k) {
          ext.front().idx = k - 1;
          put(space->index(ext), c, m(k, 0));
        }
      }
    }
  }
  SpMat mat(n, n);
  mat.setFromTriplets(trip.begin(), trip.end());
  return {std::move(space), std::move(mat), 1};
}

cplx vector_state(const FreeOperator& t) { return t.matrix.coeff(0, 0); }

FreeOperator lift_eval(const NCPoly& p, const Assignment& a,
                       const std::map<std::string, int>& symbol_factor,
                       FreeSpacePtr space) {
  std::map<std::string, FreeOperator> lifted;
  for (const auto& [sym, mat] : a) {
    auto it = symbol_factor.find(sym);
    if (it == symbol_factor.end())
      throw std::invalid_argument("no factor assigned to symbol '" + sym + "'");
    lifted.emplace(sym, lift_left_operator(mat, it->second, space));
  }
  FreeOperator acc = {space, SpMat(space->dim(), space->dim()), 0};
  for (const auto& t : p.terms()) {
    FreeOperator prod = identity_operator(space);
    for (const auto& f : t.word) {
      auto it = lifted.find(f.sym);
      if (it == lifted.end())
        throw std::invalid_argument("unassigned symbol '" + f.sym + "'");
      prod = f.star ? prod * it->second.adjoint() : prod * it->second;
    }
    acc = acc + cplx(t.coeff) * prod;
  }
  return acc;
}

MatC ExactnessScenario::a1_element(const MatC& x, const MatC& y) const {
  if (x.rows() != block_a || x.cols() != block_a || y.rows() != block_b ||
      y.cols() != block_b)
    throw std::invalid_argument("a1_element: block sizes do not match scenario");
  MatC a = MatC::Zero(block_a + block_b, block_a + block_b);
  a.topLeftCorner(block_a, block_a) = x;
  a.bottomRightCorner(block_b, block_b) = y;
  return a;
}

MatC ExactnessScenario::ideal_element(const MatC& y) const {
  return a1_element(MatC::Zero(block_a, block_a), y);
}

MatC ExactnessScenario::quotient(const MatC& a) const {
  if (a.rows() != block_a + block_b || a.cols() != block_a + block_b)
    throw std::invalid_argument("quotient: matrix does not act on H1");
  return a.topLeftCorner(block_a, block_a);
}

double ExactnessScenario::ideal_residual(const MatC& a) const {
  double r = 0.0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (i < block_a || j < block_a) r = std::max(r, std::abs(a(i, j)));
  return r;
}

ExactnessScenario make_scenario(int a, int b, VecC xi_a, int dim2, VecC xi2) {
  if (a < 1 || b < 0) throw std::invalid_argument("scenario blocks must have a>=1, b>=0");
  ExactnessScenario sc;
  sc.block_a = a;
  sc.block_b = b;
  sc.h10 = make_pointed(a, xi_a);
  VecC xi1 = VecC::Zero(a + b);
  xi1.head(a) = xi_a;
  sc.h1 = make_pointed(a + b, std::move(xi1));
  sc.h2 = make_pointed(dim2, std::move(xi2));
  return sc;
}

ScenarioSpaces build_scenario_spaces(const ExactnessScenario& sc, int depth) {
  ScenarioSpaces s;
  s.full = build_free_product_space({sc.h1, sc.h2}, depth);
  s.sub = build_free_product_space({sc.h10, sc.h2}, depth);
  s.inclusion = embed_subspace(*s.sub, *s.full);
  return s;
}

SpMat compression_pi(const FreeOperator& t, const ScenarioSpaces& spaces) {
  if (t.space.get() != spaces.full.get())
    throw std::invalid_argument("compression_pi: operator not on the scenario's full space");
  return SpMat(spaces.inclusion.adjoint() * t.matrix * spaces.inclusion);
}

namespace {

void check_ideal_word(const ExactnessScenario& sc, const IdealWordOperator& op) {
  if (op.a_list.size() != op.b_list.size() ||
      op.a_prime_list.size() != op.b_prime_list.size())
    throw std::invalid_argument("ideal word: list length mismatch");
  if (sc.ideal_residual(op.j) > 1e-12)
    throw std::invalid_argument("ideal word: J is not in the ideal block");
}

}  // namespace

VecC ideal_word_action_oracle(const ExactnessScenario& sc, const IdealWordOperator& op,
                              const FreeProductSpace& space, int windex) {
  check_ideal_word(sc, op);
  const int n = static_cast<int>(op.a_list.size());
  const int m = static_cast<int>(op.a_prime_list.size());
  const BasisWord& w = space.word(windex);
  VecC out = VecC::Zero(space.dim());

  // Annihilated summands: xi_0 and anything led by factor 2, plus words too
  // short to feed the m primed pairs and the J slot.
  if (w.empty() || w.front().factor != 0) return out;
  if (static_cast<int>(w.size()) < 2 * m + 1) return out;

  // Consume the (eta_k, zeta_k) prefix against the primed letters.
  cplx scalar(1.0);
  for (int k = 0; k < m; ++k) {
    const MatC ma = sc.h1.rotate(op.a_prime_list[k]);
    const MatC mb = sc.h2.rotate(op.b_prime_list[k]);
    scalar *= ma(0, w[2 * k].idx + 1);      // <A'_k eta_k, xi_1>
    scalar *= mb(0, w[2 * k + 1].idx + 1);  // <B'_k zeta_k, xi_2>
  }
  if (scalar == cplx(0.0)) return out;

  const BasisWord tail(w.begin() + 2 * m + 1, w.end());
  const int out_len = 2 * n + 1 + static_cast<int>(tail.size());
  if (out_len > space.depth()) return out;

  // Reduced coordinates of each chain slot: A_t xi_1, B_t xi_2, and J eta.
  std::vector<VecC> slots;
  slots.reserve(2 * n + 1);
  for (int t = 0; t < n; ++t) {
    slots.push_back(sc.h1.rotate(op.a_list[t]).col(0).tail(sc.h1.dim - 1));
    slots.push_back(sc.h2.rotate(op.b_list[t]).col(0).tail(sc.h2.dim - 1));
  }
  slots.push_back(sc.h1.rotate(op.j).col(w[2 * m].idx + 1).tail(sc.h1.dim - 1));

  // Expand the tensor product of the slots over the basis words.
  BasisWord result(2 * n + 1 + tail.size(), WordLetter{0, 0});
  for (size_t t = 0; t < tail.size(); ++t) result[2 * n + 1 + t] = tail[t];
  for (int s = 0; s < 2 * n + 1; ++s) result[s].factor = (s % 2 == 0) ? 0 : 1;

  std::vector<int> pick(2 * n + 1, 0);
  for (;;) {
    cplx coeff = scalar;
    for (int s = 0; s < 2 * n + 1; ++s) {
      coeff *= slots[s](pick[s]);
      result[s].idx = pick[s];
    }
    if (coeff != cplx(0.0)) out(space.index(result)) += coeff;
    int s = 2 * n;
    while (s >= 0 && ++pick[s] == slots[s].size()) pick[s--] = 0;
    if (s < 0) break;
  }
  return out;
}

FreeOperator ideal_word_lift(const ExactnessScenario& sc, const IdealWordOperator& op,
                             FreeSpacePtr space) {
  check_ideal_word(sc, op);
  const int n = static_cast<int>(op.a_list.size());
  const int m = static_cast<int>(op.a_prime_list.size());
  FreeOperator t = identity_operator(space);
  for (int k = 0; k < n; ++k) {
    t = t * lift_left_operator(op.a_list[k], 0, space);
    t = t * lift_left_operator(op.b_list[k], 1, space);
  }
  t = t * lift_left_operator(op.j, 0, space);
  for (int k = m - 1; k >= 0; --k) {
    t = t * lift_left_operator(op.b_prime_list[k], 1, space);
    t = t * lift_left_operator(op.a_prime_list[k], 0, space);
  }
  return t;
}

}  // namespace freelab
