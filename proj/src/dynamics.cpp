#include "patchsize/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace patchsize {

namespace {

double l2(const std::vector<double>& u) { return std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0)); }

double sum(const std::vector<double>& u) { return std::accumulate(u.begin(), u.end(), 0.0); }

}  // namespace

std::string_view to_string(DynamicsMode mode) { return mode == DynamicsMode::linear ? "linear" : "logistic"; }

std::string_view to_string(DynamicVerdict v) {
  switch (v) {
    case DynamicVerdict::healthy:
      return "healthy";
    case DynamicVerdict::deadly:
      return "deadly";
    case DynamicVerdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

double stability_limit(const DirichletSystem& sys, double rho) {
  return 2.0 / (rho + 2.0 * static_cast<double>(sys.max_degree()));
}

DynamicsResult integrate(const DirichletSystem& sys, const DynamicsSpec& spec) {
  const std::size_t d = sys.dim();
  if (!(spec.rho > 0.0)) throw std::invalid_argument("integrate: rho must be positive");
  const double limit = stability_limit(sys, spec.rho);
  const double dt_request = spec.dt == 0.0 ? 0.5 * limit : spec.dt;
  if (!(dt_request > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (dt_request >= limit) {
    throw std::invalid_argument("integrate: dt=" + std::to_string(dt_request) + " violates the stability bound " +
                                std::to_string(limit) + " = 2/(rho + 2 max_degree)");
  }
  if (!(spec.t_max > dt_request)) throw std::invalid_argument("integrate: t_max must exceed dt");
  const bool logistic = spec.mode == DynamicsMode::logistic;

  std::vector<double> u = spec.u0;
  if (u.empty()) u.assign(d, logistic ? 0.5 : 1.0);
  if (u.size() != d) throw std::invalid_argument("integrate: u0 has wrong dimension");
  for (double x : u) {
    if (!std::isfinite(x) || x < 0.0 || (logistic && x > 1.0)) {
      throw std::invalid_argument(logistic ? "integrate: logistic u0 must lie in [0,1]"
                                           : "integrate: u0 must be finite and nonnegative");
    }
  }
  if (std::all_of(u.begin(), u.end(), [](double x) { return x == 0.0; })) {
    throw std::invalid_argument("integrate: u0 must not be identically zero");
  }

  // Even step count so that T/2 falls on a step.
  std::size_t steps = static_cast<std::size_t>(std::ceil(spec.t_max / dt_request));
  steps += steps % 2;
  const double dt = spec.t_max / static_cast<double>(steps);
  const std::size_t record_every = spec.record_every ? spec.record_every : std::max<std::size_t>(1, steps / 1000);

  DynamicsResult out;
  out.dt = dt;
  out.steps = steps;
  out.min_value = *std::min_element(u.begin(), u.end());
  out.max_value = *std::max_element(u.begin(), u.end());

  // Linear mode keeps u = exp(log_scale) * v with v renormalized as needed.
  double log_scale = 0.0;
  auto log_norm = [&] { return log_scale + std::log(l2(u)); };
  auto record = [&](double t) {
    const double scale = std::exp(log_scale);
    out.trajectory.push_back({t, scale * sum(u), scale * l2(u)});
  };

  std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d), lu(d);
  auto rhs = [&](const std::vector<double>& x, std::vector<double>& f) {
    sys.apply(x, lu);
    if (logistic) {
      for (std::size_t i = 0; i < d; ++i) f[i] = spec.rho * x[i] * (1.0 - x[i]) - lu[i];
    } else {
      for (std::size_t i = 0; i < d; ++i) f[i] = spec.rho * x[i] - lu[i];
    }
  };

  record(0.0);
  double half_log_norm = 0.0;
  for (std::size_t step = 1; step <= steps; ++step) {
    rhs(u, k1);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = u[i] + dt * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < d; ++i) {
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      out.min_value = std::min(out.min_value, u[i]);
      out.max_value = std::max(out.max_value, u[i]);
    }
    const double nrm = l2(u);
    if (!std::isfinite(nrm)) {
      throw std::runtime_error("integrate: non-finite state at t=" + std::to_string(static_cast<double>(step) * dt) +
                               (logistic ? " (logistic mode overflow)" : ""));
    }
    if (!logistic && nrm > 0.0 && (nrm > 1e100 || nrm < 1e-100)) {
      log_scale += std::log(nrm);
      for (auto& x : u) x /= nrm;
    }
    if (step == steps / 2) half_log_norm = log_norm();
    if (step % record_every == 0 || step == steps) record(static_cast<double>(step) * dt);
  }

  out.final_mass = out.trajectory.back().total_mass;
  out.final_norm = out.trajectory.back().norm;
  out.growth_rate = (log_norm() - half_log_norm) / (0.5 * spec.t_max);
  if (logistic) {
    out.classification = out.final_mass > spec.survival_mass ? Survival::healthy : Survival::deadly;
  } else {
    out.classification = out.growth_rate >= 0.0 ? Survival::healthy : Survival::deadly;
  }
  return out;
}

DynamicVerdict classify_survival(const DirichletSystem& sys, double rho, const ClassifyOptions& options) {
  if (!(rho > 0.0)) throw std::invalid_argument("classify_survival: rho must be positive");
  const double xi = min_eigenvalue(sys, options.solver).value;
  const double gap = std::abs(rho - xi);
  if (gap <= options.margin * std::max(1.0, xi)) return DynamicVerdict::inconclusive;

  DynamicsSpec spec = options.base;
  spec.mode = DynamicsMode::logistic;
  spec.rho = rho;
  spec.u0.clear();
  spec.record_every = 0;
  spec.t_max = std::max(spec.t_max, options.time_constants / gap);
  const DynamicsResult r = integrate(sys, spec);
  return r.classification == Survival::healthy ? DynamicVerdict::healthy : DynamicVerdict::deadly;
}

}  // namespace patchsize
