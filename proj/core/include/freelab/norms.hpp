#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freelab/ncpoly.hpp"
#include "freelab/types.hpp"

namespace freelab {

// Documented default seed for the power-iteration starting vector.
inline constexpr std::uint64_t kPowerIterationSeed = 0x5eedf1ee1ab5ull;

struct NormResult {
  double value = 0.0;
  enum class Method { kDenseEigensolve, kPowerIteration } method = Method::kPowerIteration;
  int iterations = 0;
  double residual = 0.0;  // ||T*T v - lambda v|| at the accepted iterate
};

// Largest singular value by power iteration on T*T. Deterministic: the
// starting vector is all-ones plus a perturbation drawn from `seed`.
// Falls back to a dense Hermitian eigensolve when the iteration has not
// converged and the dimension is at most 512; larger non-converged problems
// throw with the last residual in the message.
NormResult op_norm(const SpMat& t, double tol = 1e-9,
                   std::uint64_t seed = kPowerIterationSeed, int max_iter = 200000);
NormResult op_norm(const MatC& t, double tol = 1e-9,
                   std::uint64_t seed = kPowerIterationSeed, int max_iter = 200000);

// Dense route, exposed for cross-checks.
double op_norm_dense(const MatC& t);

// ||T xi||, i.e. the 2-norm <T*T xi, xi>^(1/2) of the vector state at xi.
double two_norm(const SpMat& t, const VecC& xi);
double two_norm(const MatC& t, const VecC& xi);

// Duality lower bound for ||eval(p)||: the best witnessed value of
// |<eval(p p1 p2) xi0, xi0>| / (||p1||_2 ||p2||_2). Always a valid lower
// bound for the operator norm up to the evaluation tolerance.
struct DualityWitness {
  NCPoly p1;
  NCPoly p2;
};

double norm_lower_bound_duality(const NCPoly& p, const std::vector<DualityWitness>& ws,
                                const std::function<MatC(const NCPoly&)>& evaluate,
                                const VecC& xi0);

}  // namespace freelab
