#pragma once

#include <cstddef>

#include "fpsop/certificate.hpp"
#include "fpsop/series.hpp"
#include "fpsop/weights.hpp"

namespace fpsop {

/// Weights and truncation shared by every boundedness criterion.
struct CriterionContext {
  WeightSequence beta;
  DeltaSequence delta;
  SpaceConfig space;
};

struct BoundPair {
  BoundCertificate upper;
  BoundCertificate lower;
};

/// ||C_phi|| for phi = z^m: sup_n beta(nm)/beta(n), reported as an exact value. Requires m >= 1.
BoundCertificate monomial_composition_norm(const CriterionContext& ctx, std::size_t m);

/// Polynomial phi, u = 1.
///   upper: (sum_n [sum_L (|theta_{n,L}| beta(n)/beta(L))^q]^{p/q})^{1/p}, constant B_d
///   lower: sup_n ||C_phi z^n||_beta / beta(n)
BoundPair polynomial_composition_bounds(const CriterionContext& ctx, const PolynomialSymbol& phi);

/// Series u, phi = z^m (m >= 1).
///   upper: alpha^{1/q} ||u||_beta with
///          alpha = sup_n sum_{k in A(n,m)} (delta_n beta(n) / (delta_k delta_{n-k} beta(k) beta((n-k)/m)))^q
///   lower: sup_l ||u diamond z^{ml}||_beta / beta(l)
BoundPair monomial_symbol_substitution_bounds(const CriterionContext& ctx, const RealSeries& u, std::size_t m);

/// Bound on ||M_{diamond,u}|| / ||u||_beta:
///   alpha_0 = sup_n sum_{k<=n} (delta_n beta(n) / (delta_k delta_{n-k} beta(k) beta(n-k)))^q,
/// reported as alpha_0^{1/q} with constant alpha_0.
BoundCertificate diamond_multiplication_bound(const CriterionContext& ctx);

/// u = z^{m0}, polynomial phi.
///   upper: alpha^{1/p}, alpha = sum_{n>=m0} (delta_n beta(n)/(delta_{m0} delta_{n-m0}))^p
///                                  (sum_L (|theta_{n-m0,L}|/beta(L))^q)^{p/q}
///   lower: sup_l ||u diamond C_phi z^l||_beta / beta(l)
BoundPair monomial_multiplier_substitution_bounds(const CriterionContext& ctx, std::size_t m0,
                                                  const PolynomialSymbol& phi);

/// u = z^{m1}, phi = z^{m2} (m2 >= 1).
///   upper gamma = sup_{n in B(m1,m2)} delta_n beta(n) / (delta_{m1} delta_{n-m1} beta((n-m1)/m2))
///   lower K     = sup_m delta_{m1+m m2} beta(m1+m m2) / (delta_{m m2} delta_{m1} beta(m))
BoundPair monomial_pair_bounds(const CriterionContext& ctx, std::size_t m1, std::size_t m2);

}  // namespace fpsop
