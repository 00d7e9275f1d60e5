#pragma once

#include <vector>

#include "ridgecrest/types.hpp"

namespace ridgecrest {

//! Derivative multi-index j = (j_1,...,j_D), order |j| = sum j_i.
class MultiIndex {
 public:
  MultiIndex() : order_(0) {}
  explicit MultiIndex(std::vector<int> entries);

  //! e_axis in D dimensions.
  static MultiIndex unit(int dim, int axis);
  //! e_a + e_b in D dimensions (a == b gives 2 e_a).
  static MultiIndex pair(int dim, int a, int b);
  //! All-zero index (no differentiation).
  static MultiIndex zero(int dim);

  int order() const { return order_; }
  int dim() const { return static_cast<int>(entries_.size()); }
  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const { return entries_; }

  bool operator==(const MultiIndex& other) const { return entries_ == other.entries_; }

 private:
  std::vector<int> entries_;
  int order_;
};

//! Radial profile phi for kernels of the form phi(||x - c||^2 / (2 sigma^2)).
//! Implementations must be non-negative, monotonically non-increasing, convex
//! and differentiable; varphi(t) = -d phi / d t.
class RadialProfile {
 public:
  virtual ~RadialProfile() = default;
  virtual double phi(double t) const = 0;
  virtual double varphi(double t) const = 0;
};

//! phi(t) = exp(-t); the only profile shipped (Gaussian kernel).
class GaussianProfile final : public RadialProfile {
 public:
  double phi(double t) const override;
  double varphi(double t) const override;
};

const GaussianProfile& gaussian_profile();

double profile_phi(double t);
double profile_varphi(double t);

//! exp(-||x - c||^2 / (2 sigma^2)).
double kernel_value(const Vector& x, const Vector& c, double sigma);

//! Exact mixed partial of the Gaussian kernel: differentiate kernel_value by
//! jx with respect to x and by jc with respect to c. Orders |jx|, |jc| <= 2.
double kernel_partial(const Vector& x, const Vector& c, double sigma, const MultiIndex& jx,
                      const MultiIndex& jc);

namespace detail {

//! Probabilists' Hermite polynomial He_k(t).
double hermite(int k, double t);

//! Per-dimension polynomial factor of the Gaussian mixed partial:
//! d^m/dx^m d^l/dc^l exp(-(x-c)^2/(2 sigma^2)) =
//!   (-1)^m sigma^{-(m+l)} He_{m+l}((x-c)/sigma) exp(-(x-c)^2/(2 sigma^2)).
double mixed_partial_factor(int m, int l, double t, double sigma);

}  // namespace detail

}  // namespace ridgecrest
