#include "casimir/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace casimir {

namespace {

GaussRule compute_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  // Newton on P_n with the three-term recurrence; Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.x[i] = -x;  // ascending order: the cos guess starts near +1
    r.w[i] = w;
    r.x[n - 1 - i] = x;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    // Central node is exactly zero; recompute its weight directly.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 2; k <= n; ++k) {
      double p2 = (-(k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double pp = n * (0.0 - p0) / (0.0 - 1.0);
    r.x[n / 2] = 0.0;
    r.w[n / 2] = 2.0 / (pp * pp);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 256) throw std::invalid_argument("gauss_legendre: order out of range");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() == 0) return 0.0;
  if (v.size() == 1) return v[0];
  if (v.size() <= 8) {
    double s = 0.0;
    for (double t : v) s += t;
    return s;
  }
  size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double integrate_panels(const std::function<double(double)>& f,
                        std::span<const double> bp, int nodes_per_panel) {
  if (bp.size() < 2) return 0.0;
  const GaussRule& g = gauss_legendre(nodes_per_panel);
  std::vector<double> panel(bp.size() - 1);
  for (size_t j = 0; j + 1 < bp.size(); ++j) {
    double mid = 0.5 * (bp[j] + bp[j + 1]);
    double hw = 0.5 * (bp[j + 1] - bp[j]);
    double s = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(mid + hw * g.x[i]);
    panel[j] = s * hw;
  }
  return pairwise_sum(panel);
}

}  // namespace casimir
