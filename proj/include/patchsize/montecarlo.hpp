#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "patchsize/defaults.hpp"
#include "patchsize/generators.hpp"
#include "patchsize/graph.hpp"
#include "patchsize/random.hpp"
#include "patchsize/spectral.hpp"
#include "patchsize/stats.hpp"

namespace patchsize {

/// One cell of an experiment grid: `samples` standard random habitats with
/// n vertices, the first s of which are sinks.
struct GridPoint {
  std::size_t n = 0;
  std::variant<Gnp, Gnm> model = Gnp{0.0};
  std::size_t s = 0;
  std::string label;

  /// p for G(n,p); m / C(n,2) for G(n,m).
  double edge_density() const;
  /// p for G(n,p); m for G(n,m).
  double p_or_m() const;
};

struct ExperimentSpec {
  std::string name;
  std::vector<GridPoint> grid;
  std::size_t samples = defaults::kSamples;
  std::uint64_t seed = defaults::kSeed;
  /// Enables the healthy indicator xi <= rho.
  std::optional<double> rho;
};

struct RunOptions {
  std::size_t threads = 1;
  SolverOptions solver{};
  PowerOptions power{};
  double positivity_threshold = defaults::kPositivityThreshold;
  double tail_level = defaults::kTailLevel;
  /// Per-sample inequality checks allow this much slack, relative to max(1, |bound|).
  double violation_tolerance = 1e-8;
  bool weyl_check = true;
  /// Every k-th sample also checks that one random edge insertion does not
  /// decrease xi; 0 disables the check.
  std::size_t monotone_check_every = defaults::kMonotoneCheckEvery;
};

/// Per-habitat quantities and hard-inequality checks.
struct SampleRecord {
  double xi = 0.0;
  double zeta = 0.0;
  double theta = 0.0;
  double weyl = 0.0;
  bool positive = false;
  bool sandwich_violation = false;
  bool weyl_violation = false;
  bool monotone_checked = false;
  bool monotone_violation = false;
  std::size_t iterations = 0;
};

/// Evaluates one habitat. `rng` drives the monotonicity spot check (the
/// inserted edge); pass nullptr to skip it.
SampleRecord evaluate_habitat(const Habitat& h, const RunOptions& options, Rng* rng);

struct PointStats {
  GridPoint point;
  std::size_t samples = 0;
  Summary xi;
  /// xi / (s * edge_density)
  Summary ratio;
  double mean_zeta_ratio = 0.0;
  double mean_theta_ratio = 0.0;
  double std_theta_ratio = 0.0;
  std::optional<double> healthy_frac;
  double positive_frac = 0.0;
  std::size_t sandwich_violations = 0;
  std::size_t weyl_violations = 0;
  std::size_t monotone_checks = 0;
  std::size_t monotone_violations = 0;

  std::size_t violations() const { return sandwich_violations + weyl_violations + monotone_violations; }
};

struct ExperimentResult {
  ExperimentSpec spec;
  RunOptions options;
  std::vector<PointStats> rows;
  std::vector<std::string> warnings;
};

/// Seed of sample `sample` at grid point `point`.
std::uint64_t sample_seed(std::uint64_t master, std::size_t point, std::size_t sample);

/// Runs every grid point. The result depends only on (spec, options minus
/// threads): samples are written to fixed slots and reduced in index order.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options);

struct RatioSpec {
  std::size_t s = 50;
  std::vector<double> p{defaults::kRatioPGrid.begin(), defaults::kRatioPGrid.end()};
  std::vector<std::size_t> n{200, 500, 1000, 2000};
  std::size_t samples = defaults::kSamples;
  std::uint64_t seed = defaults::kSeed;
  std::optional<double> rho;
};
/// xi / (s p) against n for fixed s, one row per (p, n), ordered by p then n.
ExperimentResult run_ratio_experiment(const RatioSpec& spec, const RunOptions& options);

struct ThresholdSpec {
  std::vector<std::size_t> n{2000};
  std::size_t s = 10;
  std::vector<double> factors{defaults::kThresholdFactors.begin(), defaults::kThresholdFactors.end()};
  std::size_t samples = defaults::kSamples;
  std::uint64_t seed = defaults::kSeed;
};
/// Positive fraction of xi at p = c log(n)/n, one row per (n, c). Requires s <= n/10.
ExperimentResult run_threshold_experiment(const ThresholdSpec& spec, const RunOptions& options);

struct Fig2Spec {
  double delta = 0.01;
  double rho = 1.0;
  std::vector<std::size_t> s{10, 100};
  std::vector<double> eps{0.1, 0.2, 0.5, 1.0, 2.0};
  std::size_t samples = defaults::kSamples;
  std::uint64_t seed = defaults::kSeed;
  std::size_t max_vertices = defaults::kMaxExperimentVertices;
  /// Permit n_min above max_vertices instead of capping it.
  bool allow_large = false;
};
/// Habitats from G(n_min, m_max) per (s, eps); right tail at level delta and
/// healthy fraction at rho. Points whose n_min exceeds max_vertices are
/// capped to max_vertices with a warning unless allow_large is set.
ExperimentResult run_fig2_experiment(const Fig2Spec& spec, const RunOptions& options);

struct ExpectationReport {
  PointStats stats;
  double sp = 0.0;
  double mean_xi = 0.0;
  double standard_error = 0.0;
  /// s p - mean(xi)
  double gap = 0.0;
  /// mean(xi) - 3 SE <= s p
  bool holds = false;
};
ExpectationReport run_expectation_check(std::size_t n, double p, std::size_t s, std::size_t samples,
                                        std::uint64_t seed, const RunOptions& options);

/// Column order of every experiment CSV.
const std::vector<std::string>& csv_columns();
void write_csv(std::ostream& out, const ExperimentResult& result);

/// Seed, PRNG, tolerances, build version and grid of a run.
nlohmann::json metadata(const ExperimentResult& result);

/// `git describe` of the build.
std::string build_version();

}  // namespace patchsize
