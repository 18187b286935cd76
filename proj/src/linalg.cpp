#include "riceband/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riceband {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double quadratic_form(std::span<const double> m, std::span<const double> s) {
  const std::size_t d = s.size();
  double q = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += m[i * d + j] * s[j];
    q += s[i] * row;
  }
  return q;
}

std::vector<double> eigen_symmetric(std::span<const double> m, int d,
                                    std::vector<double>* vectors) {
  const std::size_t n = static_cast<std::size_t>(d);
  std::vector<double> a(m.begin(), m.end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<double> evals(n);
  for (std::size_t i = 0; i < n; ++i) evals[i] = a[i * n + i];
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return evals[x] < evals[y]; });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = evals[order[i]];
  if (vectors) {
    vectors->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) (*vectors)[k * n + i] = v[k * n + order[i]];
  }
  return sorted;
}

std::vector<double> clamp_psd(std::span<const double> m, int d, double tol) {
  const std::size_t n = static_cast<std::size_t>(d);
  std::vector<double> vecs;
  std::vector<double> evals = eigen_symmetric(m, d, &vecs);
  if (evals.front() < -tol) {
    throw std::invalid_argument("clamp_psd: matrix is not positive semi-definite");
  }
  std::vector<double> out(n * n, 0.0);
  for (std::size_t e = 0; e < n; ++e) {
    const double lam = std::max(0.0, evals[e]);
    if (lam == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += lam * vecs[i * n + e] * vecs[j * n + e];
  }
  return out;
}

}  // namespace riceband
