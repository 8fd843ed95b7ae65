#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's transform, shrinkage or linear-algebra paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace lfp::oracle {

/// phi_k(x) straight from the trigonometric definition.
inline double phi(std::size_t k, double x) {
  if (k == 1) return 1.0;
  const double h = static_cast<double>(k / 2);
  return k % 2 == 0 ? std::sqrt(2.0) * std::cos(2.0 * std::numbers::pi * h * x)
                    : std::sqrt(2.0) * std::sin(2.0 * std::numbers::pi * h * x);
}

/// (1/N) sum_l Y_l phi_k(l/N) by direct summation.
inline std::vector<double> direct_coefficients(const std::vector<double>& y, std::size_t count) {
  const std::size_t N = y.size();
  std::vector<double> out(count, 0.0);
  for (std::size_t k = 1; k <= count; ++k) {
    long double acc = 0.0L;
    for (std::size_t l = 0; l < N; ++l) {
      acc += static_cast<long double>(y[l]) * phi(k, static_cast<double>(l) / static_cast<double>(N));
    }
    out[k - 1] = static_cast<double>(acc / static_cast<long double>(N));
  }
  return out;
}

/// f(x) = sum_k c_k phi_k(x).
inline double series(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t k = 1; k <= c.size(); ++k) acc += c[k - 1] * phi(k, x);
  return acc;
}

/// Composite trapezoidal rule on [0, 1] with `points` nodes.
inline double trapezoid(const std::function<double(double)>& f, std::size_t points = 8192) {
  const double h = 1.0 / static_cast<double>(points - 1);
  long double acc = 0.5L * (f(0.0) + f(1.0));
  for (std::size_t i = 1; i + 1 < points; ++i) acc += f(static_cast<double>(i) * h);
  return static_cast<double>(acc * h);
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix (row-major n x n),
/// returned in descending order.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

/// Gauss-Jordan inverse of a small dense matrix (row-major), partial pivoting.
inline std::vector<double> invert(std::vector<double> a, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(inv[col * n + k], inv[piv * n + k]);
    }
    const double d = a[col * n + col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col * n + k] /= d;
      inv[col * n + k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r * n + k] -= f * a[col * n + k];
        inv[r * n + k] -= f * inv[col * n + k];
      }
    }
  }
  return inv;
}

/// log pi_k + log N(x; mu_k, Sigma) up to the class-independent constant,
/// evaluated as a full quadratic form with an explicit inverse.
inline double log_gaussian_posterior(const std::vector<double>& x, const std::vector<double>& mean,
                                     const std::vector<double>& sigma_inv, double prior) {
  const std::size_t n = x.size();
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q += (x[i] - mean[i]) * sigma_inv[i * n + j] * (x[j] - mean[j]);
  return std::log(prior) - 0.5 * q;
}

} // namespace lfp::oracle
