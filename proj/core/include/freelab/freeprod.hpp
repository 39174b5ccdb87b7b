#pragma once

#include "freelab/hilbert.hpp"
#include "freelab/ncpoly.hpp"
#include "freelab/types.hpp"

namespace freelab {

// Matrix realization of an algebra element acting on the truncated word
// basis. depth_guard is the maximum word-length growth per application; the
// matrix maps words of length <= D - depth_guard into the span of words of
// length <= D without loss (the interior contract).
struct FreeOperator {
  FreeSpacePtr space;
  SpMat matrix;
  int depth_guard = 1;

  FreeOperator adjoint() const { return {space, SpMat(matrix.adjoint()), depth_guard}; }
};

FreeOperator operator*(const FreeOperator& a, const FreeOperator& b);
FreeOperator operator+(const FreeOperator& a, const FreeOperator& b);
FreeOperator operator-(const FreeOperator& a, const FreeOperator& b);
FreeOperator operator*(cplx c, const FreeOperator& a);

FreeOperator identity_operator(FreeSpacePtr space);

// Canonical left action of a factor element on the free-product space,
// assembled column by column. Linear in A and *-preserving bitwise:
// lift(A^adj) has exactly the adjoint sparse pattern and values of lift(A).
// Components that would exceed the truncation depth are dropped.
FreeOperator lift_left_operator(const MatC& a, int factor, FreeSpacePtr space);

// <T xi_0, xi_0>; the free-product vector state.
cplx vector_state(const FreeOperator& t);

// Evaluates a *-polynomial through lifts: every generator symbol is assigned
// a factor matrix, lifted, and the polynomial is evaluated in the lifted
// operators. The guard is the total word degree.
FreeOperator lift_eval(const NCPoly& p, const Assignment& a,
                       const std::map<std::string, int>& symbol_factor,
                       FreeSpacePtr space);

// Finite-dimensional short-exact-sequence model: A1 = M_a + M_b acting block
// diagonally on C^(a+b), ideal J = 0 + M_b, quotient A1/J = M_a acting on
// the leading block which carries xi1. A2 is a matrix algebra on a pointed
// space of dimension dim2.
struct ExactnessScenario {
  int block_a = 0;
  int block_b = 0;
  PointedSpace h1;   // C^(a+b), xi1 = (xi_a, 0)
  PointedSpace h10;  // C^a, xi_a
  PointedSpace h2;   // C^dim2, xi2

  // A1 element from its two blocks.
  MatC a1_element(const MatC& x, const MatC& y) const;
  // Ideal element 0 + y.
  MatC ideal_element(const MatC& y) const;
  // Quotient map q: A1 -> M_a (kills the ideal block).
  MatC quotient(const MatC& a) const;
  // Membership of the ideal block structure, max |entry| outside 0+M_b.
  double ideal_residual(const MatC& a) const;
};

ExactnessScenario make_scenario(int a, int b, VecC xi_a, int dim2, VecC xi2);

// Full and quotient free-product spaces of a scenario at a common depth,
// with the canonical inclusion isometry between them.
struct ScenarioSpaces {
  FreeSpacePtr full;  // (C^(a+b), xi1) * (C^dim2, xi2)
  FreeSpacePtr sub;   // (C^a, xi1) * (C^dim2, xi2)
  SpMat inclusion;    // dim_full x dim_sub, 0/1
};

ScenarioSpaces build_scenario_spaces(const ExactnessScenario& sc, int depth);

// The compression *-homomorphism pi(T) = V^adj T V onto the sub free
// product. On lifted generators pi(lift(A)) = lift(q(A)).
SpMat compression_pi(const FreeOperator& t, const ScenarioSpaces& spaces);

// Ideal word operators T = A_1 B_1 ... A_n B_n J B'_m A'_m ... B'_1 A'_1
// with centered A's in A1, centered B's in A2 and J in the ideal. The
// closed-form action on a basis word: zero unless the word starts in factor
// 1 with an alternating (1 2)^m prefix, in which case the prefix is consumed
// against the primed letters and replaced by the chain
// (A_1 xi_1)(B_1 xi_2)...(A_n xi_1)(B_n xi_2)(J eta).
struct IdealWordOperator {
  std::vector<MatC> a_list;        // n entries, centered elements of A1
  std::vector<MatC> b_list;        // n entries, centered elements of A2
  std::vector<MatC> a_prime_list;  // m entries
  std::vector<MatC> b_prime_list;  // m entries
  MatC j;                          // ideal element
};

// Image of the basis word `windex` under the closed form, without matrix
// products. Words whose image would exceed the depth yield zero, matching
// the truncated matrix product.
VecC ideal_word_action_oracle(const ExactnessScenario& sc, const IdealWordOperator& op,
                              const FreeProductSpace& space, int windex);

// The same operator as a product of lifted factors (for cross-checks).
FreeOperator ideal_word_lift(const ExactnessScenario& sc, const IdealWordOperator& op,
                             FreeSpacePtr space);

}  // namespace freelab
