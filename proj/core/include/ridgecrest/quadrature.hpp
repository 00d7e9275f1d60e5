#pragma once

#include <functional>
#include <vector>

namespace ridgecrest {

//! Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

//! Nodes and weights for an m-point rule, computed by Newton iteration on the
//! Legendre polynomial; cached per m.
const GaussLegendreRule& gauss_legendre(int m);

//! Integrates f over [a, b] with an m-point Gauss-Legendre rule.
double integrate(const std::function<double(double)>& f, double a, double b, int m);

}  // namespace ridgecrest
