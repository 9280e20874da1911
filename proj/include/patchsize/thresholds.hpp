#pragma once

#include <cstdint>
#include <string_view>

namespace patchsize {

// Tail bounds for X ~ Bin(nu, p) at relative deviation eps.
struct ChernoffQuery {
  std::uint64_t nu;
  double p;
  double eps;
};

/// P(X >= (1+eps) nu p) <= exp(-eps^2 nu p / 3)
double chernoff_upper(const ChernoffQuery& q);
/// P(X <= (1-eps) nu p) <= exp(-eps^2 nu p / 2)
double chernoff_lower(const ChernoffQuery& q);
/// P(|X - nu p| >= eps nu p) <= 2 exp(-eps^2 nu p / 3)
double chernoff_symmetric(const ChernoffQuery& q);

/// log(n) / n: sharp threshold in p for xi > 0 when s << n.
double connectivity_threshold(std::uint64_t n);

/// s * p: sharp threshold in rho for survival in the quasi-dense regime.
double survival_threshold(std::uint64_t s, double p);

struct CriticalSizeQuery {
  double rho;
  std::uint64_t s;
  double delta;
  double eps;
};

struct CriticalSize {
  double p_eps;    // rho / ((1 + eps) s)
  double mu;       // s * p_eps
  double n_bound;  // s + 3 mu / (rho - mu)^2 * log(4 / delta)
  std::uint64_t n_min;
};

/// Smallest n for which all but a fraction delta of habitats with s sinks,
/// n vertices and at most max_edges(q, n) edges are healthy.
CriticalSize critical_patch_size(const CriticalSizeQuery& q);

/// floor(p_eps * n (n-1) / 2). Requires n >= n_min.
std::uint64_t max_edges(const CriticalSizeQuery& q, std::uint64_t n);

enum class HalfUniformKind { healthy_above, deadly_below };
std::string_view to_string(HalfUniformKind kind);

struct HalfUniformBound {
  HalfUniformKind kind;
  double bound;         // real-valued right-hand side
  std::uint64_t count;  // ceil for healthy_above, floor for deadly_below
};

/// Size bounds under the uniform measure on graphs (p = 1/2), counted in
/// non-sink vertices. rho > s/2: at least `count` non-sinks make all but a
/// fraction delta of habitats healthy. rho < s/2: at most `count` non-sinks
/// make all but a fraction delta deadly. rho == s/2 is rejected.
HalfUniformBound half_uniform_bounds(std::uint64_t s, double rho, double delta);

enum class Survival { healthy, deadly };
std::string_view to_string(Survival s);

/// healthy iff xi <= rho.
Survival survival_check(double xi, double rho);

}  // namespace patchsize
