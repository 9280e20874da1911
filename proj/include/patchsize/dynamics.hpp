#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "patchsize/defaults.hpp"
#include "patchsize/spectral.hpp"
#include "patchsize/thresholds.hpp"

namespace patchsize {

// Reaction-diffusion on the non-sink vertices; sink densities are pinned to
// zero and never stored.
//   linear:   u' = rho u - L u
//   logistic: u' = rho u (1 - u) - L u
enum class DynamicsMode { linear, logistic };
std::string_view to_string(DynamicsMode mode);

struct DynamicsSpec {
  DynamicsMode mode = DynamicsMode::logistic;
  double rho = 1.0;
  /// Step size; 0 selects half of the stability limit.
  double dt = 0.0;
  double t_max = 100.0;
  /// Initial densities; empty selects 0.5 everywhere (logistic) or 1.0 (linear).
  std::vector<double> u0;
  double survival_mass = defaults::kSurvivalMass;
  /// Keep every k-th step in the trajectory; 0 keeps about 1000 points.
  std::size_t record_every = 0;
};

struct TrajectoryPoint {
  double t;
  double total_mass;
  double norm;
};

struct DynamicsResult {
  double dt = 0.0;
  std::size_t steps = 0;
  double final_mass = 0.0;
  double final_norm = 0.0;
  /// log(||u(T)|| / ||u(T/2)||) / (T/2).
  double growth_rate = 0.0;
  Survival classification = Survival::healthy;
  /// Componentwise extremes of u over every step (in the rescaled frame for
  /// linear mode, so only their signs are meaningful there).
  double min_value = 0.0;
  double max_value = 0.0;
  std::vector<TrajectoryPoint> trajectory;
};

/// Explicit RK4 is stable on this system for dt below 2 / (rho + 2 max_degree).
double stability_limit(const DirichletSystem& sys, double rho);

/// Integrates to t_max with explicit RK4. Linear mode classifies by the sign
/// of the growth rate; logistic mode by final total mass against
/// survival_mass. Throws std::invalid_argument on a bad spec and
/// std::runtime_error on non-finite values.
DynamicsResult integrate(const DirichletSystem& sys, const DynamicsSpec& spec);

enum class DynamicVerdict { healthy, deadly, inconclusive };
std::string_view to_string(DynamicVerdict v);

struct ClassifyOptions {
  double margin = defaults::kNearCriticalMargin;
  /// The horizon is at least this many time constants 1/|rho - xi|.
  double time_constants = 60.0;
  DynamicsSpec base{};
  SolverOptions solver{};
};

/// Classifies survival from a logistic trajectory. Cases with
/// |rho - xi| <= margin * max(1, xi) are refused as inconclusive.
DynamicVerdict classify_survival(const DirichletSystem& sys, double rho, const ClassifyOptions& options = {});

}  // namespace patchsize
