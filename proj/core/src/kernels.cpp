#include "ridgecrest/kernels.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ridgecrest {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("multi-index entries must be non-negative");
  }
  order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::unit(int dim, int axis) {
  if (axis < 0 || axis >= dim) throw std::invalid_argument("multi-index axis out of range");
  std::vector<int> e(static_cast<std::size_t>(dim), 0);
  e[static_cast<std::size_t>(axis)] = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::pair(int dim, int a, int b) {
  if (a < 0 || a >= dim || b < 0 || b >= dim)
    throw std::invalid_argument("multi-index axis out of range");
  std::vector<int> e(static_cast<std::size_t>(dim), 0);
  e[static_cast<std::size_t>(a)] += 1;
  e[static_cast<std::size_t>(b)] += 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::zero(int dim) {
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0));
}

double GaussianProfile::phi(double t) const { return std::exp(-t); }
double GaussianProfile::varphi(double t) const { return std::exp(-t); }

const GaussianProfile& gaussian_profile() {
  static const GaussianProfile profile;
  return profile;
}

double profile_phi(double t) { return gaussian_profile().phi(t); }
double profile_varphi(double t) { return gaussian_profile().varphi(t); }

namespace detail {

double hermite(int k, double t) {
  switch (k) {
    case 0: return 1.0;
    case 1: return t;
    case 2: return t * t - 1.0;
    case 3: return t * (t * t - 3.0);
    case 4: return t * t * (t * t - 6.0) + 3.0;
    default: break;
  }
  // He_{k+1} = t He_k - k He_{k-1}
  double prev = t * t * (t * t - 6.0) + 3.0;
  double prev2 = t * (t * t - 3.0);
  for (int i = 4; i < k; ++i) {
    double next = t * prev - i * prev2;
    prev2 = prev;
    prev = next;
  }
  return prev;
}

double mixed_partial_factor(int m, int l, double t, double sigma) {
  const int k = m + l;
  double factor = hermite(k, t) * std::pow(sigma, -k);
  return (m % 2 != 0) ? -factor : factor;
}

}  // namespace detail

double kernel_value(const Vector& x, const Vector& c, double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("kernel bandwidth must be positive");
  if (x.size() != c.size()) throw std::invalid_argument("kernel point dimensions differ");
  return std::exp(-(x - c).squaredNorm() / (2.0 * sigma * sigma));
}

double kernel_partial(const Vector& x, const Vector& c, double sigma, const MultiIndex& jx,
                      const MultiIndex& jc) {
  if (sigma <= 0.0) throw std::invalid_argument("kernel bandwidth must be positive");
  if (x.size() != c.size()) throw std::invalid_argument("kernel point dimensions differ");
  if (jx.dim() != static_cast<int>(x.size()) || jc.dim() != static_cast<int>(x.size()))
    throw std::invalid_argument("multi-index dimension does not match points");
  if (jx.order() > 2 || jc.order() > 2)
    throw std::invalid_argument("kernel partials support orders up to (2,2)");

  // The kernel factorizes over coordinates, so the mixed partial is a product
  // of per-dimension Hermite factors times the kernel value itself.
  double poly = 1.0;
  for (int d = 0; d < jx.dim(); ++d) {
    const int m = jx[d];
    const int l = jc[d];
    if (m == 0 && l == 0) continue;
    poly *= detail::mixed_partial_factor(m, l, (x[d] - c[d]) / sigma, sigma);
  }
  return poly * kernel_value(x, c, sigma);
}

}  // namespace ridgecrest
