#include "patchsize/thresholds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace patchsize {

namespace {

void validate(const ChernoffQuery& q) {
  if (q.nu == 0) throw std::invalid_argument("chernoff: nu must be positive");
  if (!(q.p >= 0.0 && q.p <= 1.0)) throw std::invalid_argument("chernoff: p must lie in [0,1]");
  if (!(q.eps > 0.0)) throw std::invalid_argument("chernoff: eps must be positive");
}

double exponent(const ChernoffQuery& q) { return q.eps * q.eps * static_cast<double>(q.nu) * q.p; }

// Bound formulas give real right-hand sides for integer quantities. Values
// within rounding of an integer are taken as that integer before rounding.
double snap(double x) {
  const double r = std::nearbyint(x);
  return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
}

std::uint64_t to_count(double x, const char* what) {
  if (!(x >= 0.0) || x >= 0x1.0p63) throw std::overflow_error(std::string(what) + ": value out of range");
  return static_cast<std::uint64_t>(x);
}

void validate(const CriticalSizeQuery& q) {
  if (!(q.rho > 0.0)) throw std::invalid_argument("critical size: rho must be positive");
  if (q.s == 0) throw std::invalid_argument("critical size: s must be at least 1");
  if (!(q.delta > 0.0 && q.delta < 1.0)) throw std::invalid_argument("critical size: delta must lie in (0,1)");
  if (!(q.eps > 0.0)) throw std::invalid_argument("critical size: eps must be positive");
}

}  // namespace

double chernoff_upper(const ChernoffQuery& q) {
  validate(q);
  return std::exp(-exponent(q) / 3.0);
}

double chernoff_lower(const ChernoffQuery& q) {
  validate(q);
  return std::exp(-exponent(q) / 2.0);
}

double chernoff_symmetric(const ChernoffQuery& q) {
  validate(q);
  return 2.0 * std::exp(-exponent(q) / 3.0);
}

double connectivity_threshold(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("connectivity_threshold: n must be at least 2");
  return std::log(static_cast<double>(n)) / static_cast<double>(n);
}

double survival_threshold(std::uint64_t s, double p) {
  if (s == 0) throw std::invalid_argument("survival_threshold: s must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("survival_threshold: p must lie in [0,1]");
  return static_cast<double>(s) * p;
}

CriticalSize critical_patch_size(const CriticalSizeQuery& q) {
  validate(q);
  const double s = static_cast<double>(q.s);
  CriticalSize out{};
  out.p_eps = q.rho / ((1.0 + q.eps) * s);
  if (out.p_eps > 1.0) {
    throw std::invalid_argument("critical size: p_eps = rho/((1+eps)s) = " + std::to_string(out.p_eps) +
                                " exceeds 1; rho is too large for s and eps");
  }
  out.mu = s * out.p_eps;
  const double gap = q.rho - out.mu;
  out.n_bound = s + 3.0 * out.mu / (gap * gap) * std::log(4.0 / q.delta);
  out.n_min = to_count(std::ceil(snap(out.n_bound)), "critical size n_min");
  return out;
}

std::uint64_t max_edges(const CriticalSizeQuery& q, std::uint64_t n) {
  const CriticalSize cs = critical_patch_size(q);
  if (n < cs.n_min) {
    throw std::invalid_argument("max_edges: n=" + std::to_string(n) + " is below n_min=" + std::to_string(cs.n_min));
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return to_count(std::floor(snap(cs.p_eps * pairs)), "critical size m_max");
}

std::string_view to_string(HalfUniformKind kind) {
  return kind == HalfUniformKind::healthy_above ? "healthy_above" : "deadly_below";
}

HalfUniformBound half_uniform_bounds(std::uint64_t s, double rho, double delta) {
  if (s == 0) throw std::invalid_argument("half_uniform_bounds: s must be at least 1");
  if (!(rho > 0.0)) throw std::invalid_argument("half_uniform_bounds: rho must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("half_uniform_bounds: delta must lie in (0,1)");
  const double sd = static_cast<double>(s);
  const double gap = sd - 2.0 * rho;
  if (gap == 0.0) throw std::invalid_argument("half_uniform_bounds: rho = s/2 is singular");
  if (gap < 0.0) {
    const double bound = 6.0 * sd / (gap * gap) * std::log(1.0 / delta);
    return {HalfUniformKind::healthy_above, bound, to_count(std::ceil(snap(bound)), "half_uniform_bounds")};
  }
  const double bound = delta * std::exp(gap * gap / (4.0 * sd));
  return {HalfUniformKind::deadly_below, bound, to_count(std::floor(snap(bound)), "half_uniform_bounds")};
}

std::string_view to_string(Survival s) { return s == Survival::healthy ? "healthy" : "deadly"; }

Survival survival_check(double xi, double rho) {
  if (!(xi >= 0.0)) throw std::invalid_argument("survival_check: xi must be nonnegative");
  if (!(rho > 0.0)) throw std::invalid_argument("survival_check: rho must be positive");
  return xi <= rho ? Survival::healthy : Survival::deadly;
}

}  // namespace patchsize
