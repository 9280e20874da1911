#include "patchsize/montecarlo.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "patchsize/parallel.hpp"
#include "patchsize/thresholds.hpp"

namespace patchsize {

namespace {

bool exceeds(double lhs, double rhs, double tol) { return lhs > rhs + tol * std::max(1.0, std::abs(rhs)); }

// Uniform pair not yet in g, or nullopt for a complete graph.
std::optional<Edge> random_non_edge(const Graph& g, Rng& rng) {
  const std::uint64_t pairs = pair_count(g.num_vertices());
  const std::uint64_t missing = pairs - g.num_edges();
  if (missing == 0) return std::nullopt;
  if (missing * 4 >= pairs) {
    for (;;) {
      const Edge e = pair_from_index(uniform_below(rng, pairs));
      if (!g.has_edge(e.u, e.v)) return e;
    }
  }
  // Dense graph: pick the k-th missing pair directly.
  std::uint64_t k = uniform_below(rng, missing);
  for (Vertex v = 1; v < g.num_vertices(); ++v) {
    auto nb = g.neighbors(v);
    const auto below = static_cast<std::uint64_t>(std::lower_bound(nb.begin(), nb.end(), v) - nb.begin());
    const std::uint64_t gaps = v - below;
    if (k >= gaps) {
      k -= gaps;
      continue;
    }
    std::size_t idx = 0;
    for (Vertex u = 0; u < v; ++u) {
      if (idx < below && nb[idx] == u) {
        ++idx;
        continue;
      }
      if (k == 0) return Edge{u, v};
      --k;
    }
  }
  return std::nullopt;
}

void validate_point(const GridPoint& pt) {
  if (pt.n == 0) throw std::invalid_argument("grid point: n must be positive");
  if (pt.s >= pt.n) {
    throw std::invalid_argument("grid point infeasible: s=" + std::to_string(pt.s) + " must be below n=" +
                                std::to_string(pt.n));
  }
  if (const auto* gnp = std::get_if<Gnp>(&pt.model); gnp && !(gnp->p >= 0.0 && gnp->p <= 1.0)) {
    throw std::invalid_argument("grid point infeasible: p=" + std::to_string(gnp->p) + " outside [0,1]");
  }
  if (const auto* gnm = std::get_if<Gnm>(&pt.model); gnm && gnm->m > pair_count(pt.n)) {
    throw std::invalid_argument("grid point infeasible: m=" + std::to_string(gnm->m) + " exceeds pair count");
  }
}

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  return fmt::format("{}", x);
}

std::string fmt_p_or_m(const GridPoint& pt) {
  if (const auto* gnm = std::get_if<Gnm>(&pt.model)) return std::to_string(gnm->m);
  return fmt_double(std::get<Gnp>(pt.model).p);
}

}  // namespace

double GridPoint::edge_density() const {
  if (const auto* gnp = std::get_if<Gnp>(&model)) return gnp->p;
  const auto pairs = pair_count(n);
  return pairs == 0 ? 0.0 : static_cast<double>(std::get<Gnm>(model).m) / static_cast<double>(pairs);
}

double GridPoint::p_or_m() const {
  if (const auto* gnp = std::get_if<Gnp>(&model)) return gnp->p;
  return static_cast<double>(std::get<Gnm>(model).m);
}

std::uint64_t sample_seed(std::uint64_t master, std::size_t point, std::size_t sample) {
  return derive_seed(master, point, sample);
}

SampleRecord evaluate_habitat(const Habitat& h, const RunOptions& options, Rng* rng) {
  const DirichletSystem sys(h);
  const EigenResult eig = min_eigenvalue(sys, options.solver);
  SampleRecord rec;
  rec.xi = eig.value;
  rec.iterations = eig.iterations;
  rec.zeta = static_cast<double>(sys.zeta());
  rec.theta = sys.theta();
  rec.positive = rec.xi > options.positivity_threshold;
  const double tol = options.violation_tolerance;
  rec.sandwich_violation = exceeds(rec.zeta, rec.xi, tol) || exceeds(rec.xi, rec.theta, tol);
  if (options.weyl_check) {
    rec.weyl = weyl_lower_bound(sys, options.power);
    rec.weyl_violation = exceeds(rec.weyl, rec.xi, tol);
  } else {
    rec.weyl = std::nan("");
  }
  if (rng != nullptr) {
    if (auto e = random_non_edge(h.graph(), *rng)) {
      const Habitat denser(h.graph().with_edge(*e), h.sinks());
      const double xi_after = min_eigenvalue(DirichletSystem(denser), options.solver).value;
      rec.monotone_checked = true;
      rec.monotone_violation = exceeds(rec.xi, xi_after, tol);
    }
  }
  return rec;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  if (spec.samples == 0) throw std::invalid_argument("experiment: samples must be at least 1");
  if (spec.rho && !(*spec.rho > 0.0)) throw std::invalid_argument("experiment: rho must be positive");
  for (const auto& pt : spec.grid) validate_point(pt);

  ExperimentResult result;
  result.spec = spec;
  result.options = options;

  std::vector<SampleRecord> records(spec.samples);
  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
    const GridPoint& pt = spec.grid[gi];
    parallel_for(spec.samples, options.threads, [&](std::size_t k) {
      const std::uint64_t seed = sample_seed(spec.seed, gi, k);
      const Habitat h(generate(pt.n, RandomModel{pt.model, seed}), pt.s);
      const bool check = options.monotone_check_every != 0 && k % options.monotone_check_every == 0;
      Rng rng(derive_seed(seed, 0x6d6f6e6fULL));
      records[k] = evaluate_habitat(h, options, check ? &rng : nullptr);
    });

    PointStats row;
    row.point = pt;
    row.samples = spec.samples;
    const double scale = static_cast<double>(pt.s) * pt.edge_density();
    std::vector<double> xi(spec.samples), ratio(spec.samples), zeta_ratio(spec.samples),
        theta_ratio(spec.samples);
    std::size_t positive = 0;
    std::size_t healthy = 0;
    for (std::size_t k = 0; k < spec.samples; ++k) {
      const auto& r = records[k];
      xi[k] = r.xi;
      ratio[k] = r.xi / scale;
      zeta_ratio[k] = r.zeta / scale;
      theta_ratio[k] = r.theta / scale;
      positive += r.positive ? 1 : 0;
      if (spec.rho && survival_check(r.xi, *spec.rho) == Survival::healthy) ++healthy;
      row.sandwich_violations += r.sandwich_violation ? 1 : 0;
      row.weyl_violations += r.weyl_violation ? 1 : 0;
      row.monotone_checks += r.monotone_checked ? 1 : 0;
      row.monotone_violations += r.monotone_violation ? 1 : 0;
    }
    const auto n = static_cast<double>(spec.samples);
    row.xi = summarize(xi, options.tail_level);
    row.ratio = summarize(ratio, options.tail_level);
    const Summary zs = summarize(zeta_ratio, options.tail_level);
    const Summary ts = summarize(theta_ratio, options.tail_level);
    row.mean_zeta_ratio = zs.mean;
    row.mean_theta_ratio = ts.mean;
    row.std_theta_ratio = ts.std;
    row.positive_frac = static_cast<double>(positive) / n;
    if (spec.rho) row.healthy_frac = static_cast<double>(healthy) / n;
    result.rows.push_back(std::move(row));
  }
  return result;
}

ExperimentResult run_ratio_experiment(const RatioSpec& spec, const RunOptions& options) {
  ExperimentSpec e;
  e.name = "mc-ratio";
  e.samples = spec.samples;
  e.seed = spec.seed;
  e.rho = spec.rho;
  for (double p : spec.p)
    for (std::size_t n : spec.n) e.grid.push_back({n, Gnp{p}, spec.s, fmt::format("p={}", p)});
  return run_experiment(e, options);
}

ExperimentResult run_threshold_experiment(const ThresholdSpec& spec, const RunOptions& options) {
  ExperimentSpec e;
  e.name = "mc-threshold";
  e.samples = spec.samples;
  e.seed = spec.seed;
  for (std::size_t n : spec.n) {
    if (spec.s == 0 || spec.s * 10 > n) {
      throw std::invalid_argument("mc-threshold: requires 1 <= s <= n/10 (s=" + std::to_string(spec.s) +
                                  ", n=" + std::to_string(n) + ")");
    }
    const double base = connectivity_threshold(n);
    for (double c : spec.factors) {
      if (!(c > 0.0)) throw std::invalid_argument("mc-threshold: factors must be positive");
      const double p = c * base;
      if (p > 1.0) {
        throw std::invalid_argument("mc-threshold: p = " + std::to_string(c) + " log(n)/n exceeds 1 at n=" +
                                    std::to_string(n));
      }
      e.grid.push_back({n, Gnp{p}, spec.s, fmt::format("c={}", c)});
    }
  }
  return run_experiment(e, options);
}

ExperimentResult run_fig2_experiment(const Fig2Spec& spec, const RunOptions& options) {
  ExperimentSpec e;
  e.name = "mc-fig2";
  e.samples = spec.samples;
  e.seed = spec.seed;
  e.rho = spec.rho;
  std::vector<std::string> warnings;
  for (std::size_t s : spec.s) {
    for (double eps : spec.eps) {
      const CriticalSizeQuery q{spec.rho, s, spec.delta, eps};
      const CriticalSize cs = critical_patch_size(q);
      std::uint64_t n = cs.n_min;
      std::string label = fmt::format("eps={}", eps);
      if (n > spec.max_vertices && !spec.allow_large) {
        warnings.push_back(fmt::format("s={} eps={}: n_min={} exceeds the desk-scale cap {}; using n={}", s, eps,
                                       cs.n_min, spec.max_vertices, spec.max_vertices));
        n = spec.max_vertices;
        label += " capped";
      }
      const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
      const auto m = n == cs.n_min ? max_edges(q, n) : static_cast<std::uint64_t>(std::floor(cs.p_eps * pairs));
      e.grid.push_back({static_cast<std::size_t>(n), Gnm{m}, s, std::move(label)});
    }
  }
  RunOptions opts = options;
  opts.tail_level = spec.delta;
  ExperimentResult r = run_experiment(e, opts);
  r.warnings = std::move(warnings);
  return r;
}

ExpectationReport run_expectation_check(std::size_t n, double p, std::size_t s, std::size_t samples,
                                        std::uint64_t seed, const RunOptions& options) {
  if (s == 0) throw std::invalid_argument("mc-expectation: s must be at least 1");
  ExperimentSpec e;
  e.name = "mc-expectation";
  e.samples = samples;
  e.seed = seed;
  e.grid.push_back({n, Gnp{p}, s, "expectation"});
  ExperimentResult r = run_experiment(e, options);
  ExpectationReport out;
  out.stats = r.rows.front();
  out.sp = survival_threshold(s, p);
  out.mean_xi = out.stats.xi.mean;
  out.standard_error = out.stats.xi.standard_error();
  out.gap = out.sp - out.mean_xi;
  out.holds = out.mean_xi - 3.0 * out.standard_error <= out.sp;
  return out;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "n",           "p_or_m",          "s",           "samples",          "mean_xi",
      "std_xi",      "mean_ratio",      "std_ratio",   "p01_right_tail",   "healthy_frac",
      "positive_frac", "violations",    "min_xi",      "max_xi",           "mean_zeta_ratio",
      "mean_theta_ratio", "std_theta_ratio", "label"};
  return columns;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& row : result.rows) {
    out << row.point.n << ',' << fmt_p_or_m(row.point) << ',' << row.point.s << ',' << row.samples << ','
        << fmt_double(row.xi.mean) << ',' << fmt_double(row.xi.std) << ',' << fmt_double(row.ratio.mean) << ','
        << fmt_double(row.ratio.std) << ',' << fmt_double(row.xi.right_tail) << ','
        << (row.healthy_frac ? fmt_double(*row.healthy_frac) : std::string()) << ','
        << fmt_double(row.positive_frac) << ',' << row.violations() << ',' << fmt_double(row.xi.min) << ','
        << fmt_double(row.xi.max) << ',' << fmt_double(row.mean_zeta_ratio) << ','
        << fmt_double(row.mean_theta_ratio) << ',' << fmt_double(row.std_theta_ratio) << ',' << row.point.label
        << '\n';
  }
}

nlohmann::json metadata(const ExperimentResult& result) {
  using nlohmann::json;
  json grid = json::array();
  for (const auto& row : result.rows) {
    json g = {{"n", row.point.n},
              {"s", row.point.s},
              {"label", row.point.label},
              {"sandwich_violations", row.sandwich_violations},
              {"weyl_violations", row.weyl_violations},
              {"monotone_checks", row.monotone_checks},
              {"monotone_violations", row.monotone_violations}};
    if (const auto* gnp = std::get_if<Gnp>(&row.point.model)) {
      g["model"] = "gnp";
      g["p"] = gnp->p;
    } else {
      g["model"] = "gnm";
      g["m"] = std::get<Gnm>(row.point.model).m;
    }
    grid.push_back(std::move(g));
  }
  const auto& o = result.options;
  json meta = {
      {"experiment", result.spec.name},
      {"seed", result.spec.seed},
      {"samples", result.spec.samples},
      {"prng", std::string(kPrngName)},
      {"substream_scheme", std::string(kSubstreamScheme)},
      {"threads", o.threads},
      {"tolerances",
       {{"eigen_relative", o.solver.tol},
        {"positivity", o.positivity_threshold},
        {"violation_relative", o.violation_tolerance},
        {"power_iteration", o.power.tol}}},
      {"solver", {{"dense_threshold", o.solver.dense_threshold}, {"krylov_dim", o.solver.krylov_dim},
                  {"max_iterations", o.solver.max_iterations}}},
      {"checks", {{"weyl", o.weyl_check}, {"monotone_every", o.monotone_check_every}}},
      {"std_convention", "population"},
      {"tail_level", o.tail_level},
      {"percentile_rule", "nearest-rank right tail"},
      {"columns", csv_columns()},
      {"grid", grid},
      {"warnings", result.warnings},
      {"git_describe", build_version()},
  };
  if (result.spec.rho) meta["rho"] = *result.spec.rho;
  return meta;
}

std::string build_version() {
#ifdef PATCHSIZE_GIT_DESCRIBE
  return PATCHSIZE_GIT_DESCRIBE;
#else
  return "unknown";
#endif
}

}  // namespace patchsize
