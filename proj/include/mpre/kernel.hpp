#pragma once

#include <cstdint>
#include <vector>

#include "mpre/exponent.hpp"

namespace mpre {

// Quadrature policy for kernel integrals. Panels are Gauss-Legendre of order
// `nodes_per_cell`, split at the exponent's interpolation knots and refined
// geometrically toward the kernel's vanishing point s = t until the remaining
// tail is provably below the target (never deeper than `max_refinement`).
struct QuadratureSpec {
  int nodes_per_cell = 8;
  int max_refinement = 60;
  double abs_tol = 1e-10;
};

struct KernelContext {
  const ExponentProcess& exponent;
  QuadratureSpec quadrature{};
};

// K_t(s) = (t-s)_+^{A(s)-1/2}; 0 on t <= s, always within [0,1].
double kernel_eval(const KernelContext& ctx, double t, double s);

// L_t(u,v) = (t-u)_+^{v-1/2} with the exponent given explicitly.
double l_eval(double t, double u, double v);

// Haar functions h_{j,k}; the constant-one scaling function is separate.
double haar_eval(int j, std::int64_t k, double s);
double haar_unit_eval(double s);

// Mean value of K_t over the dyadic cell [l 2^-J, (l+1) 2^-J].
double mean_kernel(const KernelContext& ctx, double t, int level,
                   std::int64_t cell);

// Cell integral with the exponent frozen at the cell's left endpoint;
// closed form, no quadrature.
double hat_kernel(const ExponentProcess& exponent, double t, int level,
                  std::int64_t cell);

// <K_t, h_{j,k}>, computed from the difference form
// 2^{j/2} int (K_t(s) - K_t(s + 2^{-j-1})) ds over the first half-support.
double haar_inner_product(const KernelContext& ctx, double t, int j,
                          std::int64_t k);

// <K_t, U> = int_0^t K_t.
double scaling_inner_product(const KernelContext& ctx, double t);

// Concrete constant for the kernel increment inequality
// |K_t(s') - K_t(s'')| <= c0 ((t-s'')^{alow-3/2} (s''-s') + |A(s')-A(s'')|):
// c0 = max(ahigh - 1/2, 1/(e (alow - 1/2)), 1), the two mean-value factors
// from the proof, maxed with one.
double increment_constant(const ExponentProcess& exponent);

struct IncrementLemmaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

IncrementLemmaCheck check_increment_lemma(const KernelContext& ctx, double t,
                                          double s_left, double s_right);

// S_j(t) = sum_k |<K_t, h_{j,k}>|.
double coefficient_sum(const KernelContext& ctx, double t, int j);

struct CoefficientSumBound {
  double lhs = 0.0;   // S_j(t)
  double rhs = 0.0;   // c4 2^{-j/2} + c0 2^{j/2} int |A(s)-A(s+2^{-j-1})| ds
  double c0 = 0.0;
  double c4 = 0.0;
  bool holds = false;
};

CoefficientSumBound check_coefficient_sum_bound(const KernelContext& ctx,
                                                double t, int j);

// int_0^{1-h} |A(s) - A(s+h)| ds; exact for the piecewise-linear kinds when
// h is a lattice step, composite quadrature otherwise.
double exponent_increment_l1(const ExponentProcess& exponent, double h);

}  // namespace mpre
