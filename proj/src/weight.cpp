#include "sausage/weight.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sausage {

Weight::Weight(std::vector<double> radii, std::vector<double> values)
    : r_(std::move(radii)), v_(std::move(values)) {
  if (r_.size() < 2 || r_.size() != v_.size())
    throw std::invalid_argument("weight: need matching breakpoint lists of length >= 2");
  if (!(r_.front() > 0.0)) throw std::invalid_argument("weight: support must start above 0");
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (!std::isfinite(r_[i]) || !std::isfinite(v_[i]))
      throw std::invalid_argument("weight: non-finite breakpoint");
    if (i > 0 && !(r_[i] > r_[i - 1]))
      throw std::invalid_argument("weight: breakpoints must increase strictly");
  }
  if (v_.front() != 0.0 || v_.back() != 0.0)
    throw std::invalid_argument("weight: must vanish at the support endpoints");
  cum_.assign(r_.size(), 0.0);
  for (std::size_t i = 1; i < r_.size(); ++i)
    cum_[i] = cum_[i - 1] + 0.5 * (r_[i] - r_[i - 1]) * (v_[i] + v_[i - 1]);
}

double Weight::operator()(double r) const {
  if (r_.empty() || r <= r_.front() || r >= r_.back()) return 0.0;
  const auto i = static_cast<std::size_t>(std::upper_bound(r_.begin(), r_.end(), r) - r_.begin()) - 1;
  const double s = (r - r_[i]) / (r_[i + 1] - r_[i]);
  return v_[i] + s * (v_[i + 1] - v_[i]);
}

double Weight::antiderivative(double x) const {
  if (r_.empty() || x <= r_.front()) return 0.0;
  if (x >= r_.back()) return cum_.back();
  const auto i = static_cast<std::size_t>(std::upper_bound(r_.begin(), r_.end(), x) - r_.begin()) - 1;
  return cum_[i] + 0.5 * (x - r_[i]) * (v_[i] + (*this)(x));
}

Weight Weight::operator+(const Weight& o) const {
  std::vector<double> r = r_;
  r.insert(r.end(), o.r_.begin(), o.r_.end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  std::vector<double> v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) v[i] = (*this)(r[i]) + o(r[i]);
  return Weight(std::move(r), std::move(v));
}

Weight Weight::scaled(double c) const {
  std::vector<double> v = v_;
  for (double& x : v) x *= c;
  return Weight(r_, std::move(v));
}

Weight hat(double lo, double mid, double hi) { return Weight({lo, mid, hi}, {0.0, 1.0, 0.0}); }

Weight unit_hat(double r0, double r1) { return hat(r0, 0.5 * (r0 + r1), r1); }

Weight plateau(double a, double b, double eps) {
  return Weight({a - eps, a, b, b + eps}, {0.0, 1.0, 1.0, 0.0});
}

std::vector<Weight> hat_family(double r0, double r1, int m) {
  if (m < 1) throw std::invalid_argument("hat_family: need at least one tent");
  std::vector<double> x(static_cast<std::size_t>(m) + 2);
  for (int i = 0; i <= m + 1; ++i) x[static_cast<std::size_t>(i)] = r0 + (r1 - r0) * i / (m + 1);
  x.back() = r1;
  std::vector<Weight> out;
  for (int i = 1; i <= m; ++i)
    out.push_back(hat(x[static_cast<std::size_t>(i) - 1], x[static_cast<std::size_t>(i)],
                      x[static_cast<std::size_t>(i) + 1]));
  return out;
}

double phi_psi(const std::vector<PersistencePair>& pairs, const Weight& psi) {
  double s = 0.0;
  for (const auto& p : pairs) {
    if (p.death <= psi.r0() || p.birth >= psi.r1()) continue;
    s += psi.integral(p.birth, p.death);
  }
  return s;
}

double phi_psi(const PersistenceDiagram& d, const Weight& psi) { return phi_psi(d.h1, psi); }

double integrate_betti(const BettiCurve& beta, const Weight& psi) {
  std::vector<double> x = beta.radii;
  for (double r : psi.radii()) x.push_back(r);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i], b = x[i + 1];
    const int c = beta(a);
    if (c == 0) continue;
    s += c * 0.5 * (b - a) * (psi(a) + psi(b));
  }
  return s;
}

}  // namespace sausage
