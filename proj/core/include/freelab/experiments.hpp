#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freelab/freeprod.hpp"
#include "freelab/ncpoly.hpp"
#include "freelab/types.hpp"

namespace freelab {

// Generator family for the norm-convergence experiments. The k-th model
// replaces each X_i by X_i + eps_k Z_i acting block diagonally on the
// doubled space with the state vector in the leading block (so the moments
// of the family match the limit exactly); the optional state_mix leaks
// (mix/k) of the state vector into the second block, which makes the moment
// convergence genuinely order 1/k. When z_y is non-empty the Y side varies
// the same way (the Pisier variant).
struct GeneratorFamily {
  std::vector<MatC> x;  // limit tuple, all d_x x d_x
  std::vector<MatC> z;  // perturbations, same shape as x
  VecC xi_x;
  std::vector<MatC> y;  // fixed tuple on the second factor, d_y x d_y
  std::vector<MatC> z_y;  // optional Y-side perturbations
  VecC xi_y;
  std::vector<int> ks;     // sampled k values, increasing
  double state_mix = 0.0;  // 0 = exact block family

  double epsilon(int k) const { return 1.0 / static_cast<double>(k); }
};

// Symbols x1..xn are factor 0, y1..ym factor 1.
Assignment family_limit_assignment(const GeneratorFamily& fam);
Assignment family_k_assignment(const GeneratorFamily& fam, int k);
std::map<std::string, int> family_symbol_factors(const GeneratorFamily& fam);

struct HypothesisCheck {
  double max_moment_gap = 0.0;   // over sampled monomials, worst |tau_k - tau|
  double max_norm_excess = 0.0;  // worst ||q(X_k)|| - ||q(X)|| overshoot
  bool ok = true;
};

// Samples the two hypotheses over monomials of degree <= degree on the
// largest k in the family.
HypothesisCheck check_family_hypotheses(const GeneratorFamily& fam, int degree);

struct ConvergenceRow {
  int k;
  double norm_k;
  double two_norm_k;
  double gap;           // |norm_k - limit_norm|
  double liminf_slack;  // norm_k - limit_norm (must stay >= -tol)
};

struct ConvergenceReport {
  std::string poly;
  int depth = 0;
  double limit_norm = 0.0;
  double limit_two_norm = 0.0;
  std::vector<ConvergenceRow> rows;
  double final_gap = 0.0;
  bool tail_non_increasing = false;
  double min_liminf_slack = 0.0;
  bool pass = false;
  std::string hypothesis_warning;  // empty when the sampled hypotheses hold
};

struct ConvergenceConfig {
  GeneratorFamily family;
  std::vector<NCPoly> polys;
  int depth = 5;
  double tol = 1e-4;
  int hypothesis_degree = 3;
  double norm_tol = 1e-10;        // power-iteration tolerance
  std::uint64_t seed = 1;         // seeds the norm solver start vectors
  bool parallel = true;           // per-k rows are independent
};

std::vector<ConvergenceReport> run_theorem31(const ConvergenceConfig& cfg);

// Both factors varying; reduces to run_theorem31 when z_y is empty.
std::vector<ConvergenceReport> run_pisier_variant(const ConvergenceConfig& cfg);

struct MomentRow {
  int k;
  double max_gap;  // over the sampled monomials
};

struct MomentReport {
  int degree;
  std::vector<MomentRow> rows;
  double final_gap = 0.0;
};

MomentReport run_moment_convergence(const ConvergenceConfig& cfg);

// One named identity of the section-2 witness battery.
struct WitnessItem {
  std::string name;
  double residual;
  double threshold;
  bool pass;
};

struct ExactnessWitnessReport {
  int depth = 0;
  std::uint64_t seed = 0;
  std::vector<WitnessItem> items;
  bool pass = false;
};

// Runs the full battery on a scenario: subspace invariance, properties of
// the compression pi, ideal vanishing, ideal-word oracle agreement, the S*
// relations, gauge/expectation/Fejer identities, corner-embedding inversion
// samples and the commuting square.
ExactnessWitnessReport run_exactness_witness(const ExactnessScenario& sc, int depth,
                                             std::uint64_t seed);

}  // namespace freelab
