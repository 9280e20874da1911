#include "patchsize/detail/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace patchsize::detail {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double pivot_floor(const Tridiagonal& t) {
  double e2max = 1.0;
  for (double e : t.off) e2max = std::max(e2max, e * e);
  return std::numeric_limits<double>::min() * e2max;
}

std::pair<double, double> gershgorin_interval(const Tridiagonal& t) {
  const std::size_t k = t.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < k; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < k) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double pad = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + pivot_floor(t);
  return {lo - pad, hi + pad};
}

// Finds the smallest x with sturm_count(x) >= rank; rank is 1-based.
double bisect_rank(const Tridiagonal& t, std::size_t rank) {
  auto [lo, hi] = gershgorin_interval(t);
  const double floor = pivot_floor(t);
  for (int it = 0; it < 256; ++it) {
    if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + floor) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) >= rank) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::size_t sturm_count(const Tridiagonal& t, double x) {
  const double floor = pivot_floor(t);
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    q = t.diag[i] - x - (i > 0 ? t.off[i - 1] * t.off[i - 1] / q : 0.0);
    if (std::abs(q) < floor) q = -floor;
    if (q < 0.0) ++count;
  }
  return count;
}

double tridiagonal_min_eigenvalue(const Tridiagonal& t) {
  if (t.diag.empty()) throw std::invalid_argument("empty tridiagonal matrix");
  return bisect_rank(t, 1);
}

double tridiagonal_max_eigenvalue(const Tridiagonal& t) {
  if (t.diag.empty()) throw std::invalid_argument("empty tridiagonal matrix");
  return bisect_rank(t, t.diag.size());
}

std::vector<double> tridiagonal_eigenvector(const Tridiagonal& t, double lambda) {
  const std::size_t k = t.diag.size();
  if (k == 0) throw std::invalid_argument("empty tridiagonal matrix");
  if (k == 1) return {1.0};

  // LU with partial pivoting of T - lambda I (LAPACK dgttrf layout).
  std::vector<double> dl(t.off);
  std::vector<double> d(k);
  std::vector<double> du(t.off);
  std::vector<double> du2(k, 0.0);
  std::vector<bool> swapped(k, false);
  double norm = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    d[i] = t.diag[i] - lambda;
    norm = std::max(norm, std::abs(t.diag[i]) + (i > 0 ? std::abs(t.off[i - 1]) : 0.0) +
                              (i + 1 < k ? std::abs(t.off[i]) : 0.0));
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] != 0.0) {
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        dl[i] = 0.0;
      }
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < k) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  // Singular pivots are expected: lambda is an eigenvalue.
  const double tiny = std::max(kEps * norm, std::numeric_limits<double>::min());
  for (auto& pivot : d)
    if (std::abs(pivot) < tiny) pivot = std::copysign(tiny, pivot == 0.0 ? 1.0 : pivot);

  auto solve = [&](std::vector<double>& b) {
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i] - dl[i] * b[i + 1];
        b[i] = b[i + 1];
        b[i + 1] = temp;
      }
    }
    b[k - 1] /= d[k - 1];
    b[k - 2] = (b[k - 2] - du[k - 2] * b[k - 1]) / d[k - 2];
    for (std::size_t i = k - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  };
  auto normalize = [](std::vector<double>& b) {
    double s = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
    for (auto& x : b) x /= s;
  };

  // Start vector with no special structure, so it is not orthogonal to the
  // wanted eigenvector.
  std::vector<double> x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  normalize(x);
  for (int it = 0; it < 3; ++it) {
    solve(x);
    normalize(x);
  }
  return x;
}

HouseholderReduction::HouseholderReduction(std::vector<double> a, std::size_t n) : n_(n) {
  if (a.size() != n * n) throw std::invalid_argument("HouseholderReduction: matrix size mismatch");
  t_.diag.resize(n);
  t_.off.resize(n > 0 ? n - 1 : 0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  std::vector<double> p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t first = k + 1;
    const std::size_t m = n - first;
    double tail = 0.0;
    for (std::size_t i = first + 1; i < n; ++i) tail += at(i, k) * at(i, k);
    const double x0 = at(first, k);
    if (tail == 0.0) {
      t_.off[k] = x0;
      continue;
    }
    const double norm = std::sqrt(x0 * x0 + tail);
    const double alpha = x0 > 0.0 ? -norm : norm;
    Reflector r{first, 0.0, std::vector<double>(m)};
    r.v[0] = x0 - alpha;
    for (std::size_t i = 1; i < m; ++i) r.v[i] = at(first + i, k);
    const double vv = r.v[0] * r.v[0] + tail;
    r.beta = 2.0 / vv;
    t_.off[k] = alpha;

    // B <- H B H with B the trailing block: p = beta B v, w = p - (beta/2)(p.v) v.
    double pv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double* row = &at(first + i, first);
      double sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) sum += row[j] * r.v[j];
      p[i] = r.beta * sum;
      pv += p[i] * r.v[i];
    }
    const double kfac = 0.5 * r.beta * pv;
    for (std::size_t i = 0; i < m; ++i) p[i] -= kfac * r.v[i];
    for (std::size_t i = 0; i < m; ++i) {
      double* row = &at(first + i, first);
      const double vi = r.v[i];
      const double wi = p[i];
      for (std::size_t j = 0; j < m; ++j) row[j] -= vi * p[j] + wi * r.v[j];
    }
    reflectors_.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < n; ++i) t_.diag[i] = at(i, i);
  if (n >= 2) t_.off[n - 2] = at(n - 1, n - 2);
}

void HouseholderReduction::back_transform(std::span<double> x) const {
  if (x.size() != n_) throw std::invalid_argument("back_transform: vector size mismatch");
  for (auto r = reflectors_.rbegin(); r != reflectors_.rend(); ++r) {
    double dot = 0.0;
    for (std::size_t i = 0; i < r->v.size(); ++i) dot += r->v[i] * x[r->offset + i];
    const double scale = r->beta * dot;
    for (std::size_t i = 0; i < r->v.size(); ++i) x[r->offset + i] -= scale * r->v[i];
  }
}

}  // namespace patchsize::detail
