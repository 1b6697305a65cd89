#pragma once

#include <functional>
#include <span>
#include <vector>

namespace casimir {

// Gauss-Legendre rule on [-1, 1]. Nodes are ascending; weights positive.
// Computed once per order by Newton iteration on the Legendre recurrence and
// cached; safe to call concurrently.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

// Deterministic pairwise (binary tree) sum. Order of the input fixes the
// result bit-for-bit regardless of how the terms were produced.
double pairwise_sum(std::span<const double> v);

// Composite Gauss-Legendre integral of f over consecutive panels given by
// ascending breakpoints b[0] < b[1] < ... Panel results are pairwise-summed.
double integrate_panels(const std::function<double(double)>& f,
                        std::span<const double> breakpoints, int nodes_per_panel);

}  // namespace casimir
