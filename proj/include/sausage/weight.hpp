#pragma once

#include <vector>

#include "sausage/persistence.hpp"

namespace sausage {

// Continuous piecewise-linear weight psi, zero at and outside its end breakpoints.
class Weight {
 public:
  Weight() = default;
  Weight(std::vector<double> radii, std::vector<double> values);

  double operator()(double r) const;
  // Integral of psi over (-inf, x].
  double antiderivative(double x) const;
  double integral(double a, double b) const { return antiderivative(b) - antiderivative(a); }

  double r0() const { return r_.front(); }
  double r1() const { return r_.back(); }
  const std::vector<double>& radii() const { return r_; }
  const std::vector<double>& values() const { return v_; }

  Weight operator+(const Weight& other) const;
  Weight scaled(double c) const;

 private:
  std::vector<double> r_;
  std::vector<double> v_;
  std::vector<double> cum_;  // antiderivative at each breakpoint
};

// Tent with peak 1 at mid, support [lo, hi].
Weight hat(double lo, double mid, double hi);
// Tent peaking at the midpoint of [r0, r1].
Weight unit_hat(double r0, double r1);
// Flat plateau of height 1 on [a, b] with linear ramps of width eps outside it.
Weight plateau(double a, double b, double eps);
// Tents at the m interior nodes of a uniform m+1 interval split of [r0, r1].
std::vector<Weight> hat_family(double r0, double r1, int m);

// Sum over degree-1 pairs of the integral of psi over [birth, death].
double phi_psi(const PersistenceDiagram& d, const Weight& psi);
double phi_psi(const std::vector<PersistencePair>& pairs, const Weight& psi);
// Same quantity through the Betti curve: integral of beta(r) psi(r) dr.
double integrate_betti(const BettiCurve& beta, const Weight& psi);

}  // namespace sausage
