// patchsize: command-line front end for the habitat spectral toolkit.
//
// Numeric results go to stdout as one JSON object; bulk data (graphs, CSV
// tables) go to files, each paired with a <file>.meta.json sidecar that
// records the resolved configuration.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "patchsize/defaults.hpp"
#include "patchsize/dynamics.hpp"
#include "patchsize/generators.hpp"
#include "patchsize/graph.hpp"
#include "patchsize/montecarlo.hpp"
#include "patchsize/spectral.hpp"
#include "patchsize/thresholds.hpp"

using nlohmann::json;
using namespace patchsize;

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

// JSON config files mirror the flags: top-level keys are global options,
// nested objects are keyed by subcommand name.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const json doc = json::parse(input);
    if (!doc.is_object()) throw CLI::FileError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void collect(const json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      out.push_back(std::move(item));
    }
  }
};

struct Common {
  std::uint64_t seed = defaults::kSeed;
  std::string threads = "auto";
  double tol = defaults::kEigenTolerance;
  std::size_t dense_threshold = defaults::kDenseThreshold;
  std::string output;
};

std::size_t resolve_threads(const std::string& value) {
  if (value == "auto") return std::max(1u, std::thread::hardware_concurrency());
  std::size_t pos = 0;
  const long parsed = std::stol(value, &pos);
  if (pos != value.size() || parsed < 1) throw std::invalid_argument("--threads must be a positive integer or auto");
  return static_cast<std::size_t>(parsed);
}

json resolved_options(const CLI::App& app) {
  json out = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      out[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else if (!opt->get_default_str().empty()) {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

void write_sidecar(const std::string& path, json meta) {
  std::ofstream out(path + ".meta.json");
  if (!out) throw std::runtime_error("cannot write metadata sidecar for " + path);
  out << meta.dump(2) << '\n';
}

SolverOptions solver_options(const Common& c) {
  SolverOptions s;
  s.tol = c.tol;
  s.dense_threshold = c.dense_threshold;
  return s;
}

void print(const json& j) { std::cout << j.dump(2) << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet eigenvalues, survival bounds and Monte Carlo experiments on graph habitats"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file mirroring the command-line flags");

  Common common;
  app.add_option("--seed", common.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads (integer or auto)")
      ->envname("PATCHSIZE_THREADS")
      ->capture_default_str();
  app.add_option("--tol", common.tol, "Eigen solver tolerance relative to max(1, Gershgorin bound)")
      ->capture_default_str();
  app.add_option("--dense-threshold", common.dense_threshold, "Largest component size solved densely")
      ->capture_default_str();
  app.add_option("-o,--output", common.output, "Output file");

  // gen
  auto* gen = app.add_subcommand("gen", "Sample a G(n,p) or G(n,m) graph");
  std::size_t gen_n = 0;
  std::optional<double> gen_p;
  std::optional<std::uint64_t> gen_m;
  gen->add_option("--n", gen_n, "Vertex count")->required();
  auto* gen_p_opt = gen->add_option("--p", gen_p, "Edge probability");
  gen->add_option("--m", gen_m, "Edge count")->excludes(gen_p_opt);

  // eig
  auto* eig = app.add_subcommand("eig", "Dirichlet eigenvalue of a habitat");
  std::string eig_graph;
  std::size_t eig_sinks = 0;
  std::optional<double> eig_rho;
  std::string eig_export;
  eig->add_option("--graph,--habitat", eig_graph, "Graph file")->required()->check(CLI::ExistingFile);
  eig->add_option("--sinks", eig_sinks, "Sink count (sinks are vertices 1..s)")->required();
  eig->add_option("--rho", eig_rho, "Classify as healthy/deadly at this rho");
  eig->add_option("--export-matrix", eig_export, "Write the Dirichlet matrix in coordinate format");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Closed-form bounds and thresholds");
  std::optional<double> b_rho, b_delta, b_eps, b_p;
  std::optional<std::uint64_t> b_s, b_n, b_nu;
  std::string b_graph;
  std::size_t b_sinks = 0;
  bnd->add_option("--rho", b_rho, "Reaction-to-diffusion ratio");
  bnd->add_option("--s", b_s, "Sink count");
  bnd->add_option("--delta", b_delta, "Failure fraction");
  bnd->add_option("--eps", b_eps, "Slack (also Chernoff deviation)");
  bnd->add_option("--n", b_n, "Vertex count");
  bnd->add_option("--p", b_p, "Edge probability");
  bnd->add_option("--nu", b_nu, "Chernoff trial count");
  bnd->add_option("--graph,--habitat", b_graph, "Graph file for spectral bounds")->check(CLI::ExistingFile);
  bnd->add_option("--sinks", b_sinks, "Sink count for --graph");

  // critical-size
  auto* crit = app.add_subcommand("critical-size", "Critical patch size n_min and edge budget m_max");
  double c_rho = 1.0, c_delta = 0.01, c_eps = 0.1;
  std::uint64_t c_s = 10;
  std::optional<std::uint64_t> c_n;
  crit->add_option("--rho", c_rho)->required();
  crit->add_option("--s", c_s)->required();
  crit->add_option("--delta", c_delta)->required();
  crit->add_option("--eps", c_eps)->required();
  crit->add_option("--n", c_n, "Vertex count for m_max (default n_min)");

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "Integrate reaction-diffusion on a habitat");
  std::string d_graph;
  std::size_t d_sinks = 0;
  double d_rho = 1.0;
  std::string d_mode = "logistic";
  double d_dt = 0.0;
  std::optional<double> d_tmax;
  dyn->add_option("--habitat,--graph", d_graph, "Graph file")->required()->check(CLI::ExistingFile);
  dyn->add_option("--sinks", d_sinks, "Sink count")->required();
  dyn->add_option("--rho", d_rho)->required();
  dyn->add_option("--mode", d_mode)->check(CLI::IsMember({"linear", "logistic"}))->capture_default_str();
  dyn->add_option("--dt", d_dt, "Step size (0 = half the stability limit)")->capture_default_str();
  dyn->add_option("--t-max", d_tmax, "Horizon (default 60/|rho - xi|, at least 100)");

  // mc-*
  std::size_t samples = defaults::kSamples;
  auto* mc_ratio = app.add_subcommand("mc-ratio", "xi/(s p) against n");
  RatioSpec ratio;
  std::optional<double> ratio_rho;
  mc_ratio->add_option("--s", ratio.s)->capture_default_str();
  mc_ratio->add_option("--p", ratio.p)->delimiter(',')->capture_default_str();
  mc_ratio->add_option("--n", ratio.n)->delimiter(',')->capture_default_str();
  mc_ratio->add_option("--rho", ratio_rho);
  mc_ratio->add_option("--samples", samples)->capture_default_str();

  auto* mc_thr = app.add_subcommand("mc-threshold", "Positive fraction of xi around p = log(n)/n");
  ThresholdSpec thr;
  mc_thr->add_option("--n", thr.n)->delimiter(',')->capture_default_str();
  mc_thr->add_option("--s", thr.s)->capture_default_str();
  mc_thr->add_option("--factors", thr.factors)->delimiter(',')->capture_default_str();
  mc_thr->add_option("--samples", samples)->capture_default_str();

  auto* mc_fig2 = app.add_subcommand("mc-fig2", "xi statistics on G(n_min, m_max) habitats across eps");
  Fig2Spec fig2;
  mc_fig2->add_option("--delta", fig2.delta)->capture_default_str();
  mc_fig2->add_option("--rho", fig2.rho)->capture_default_str();
  mc_fig2->add_option("--s", fig2.s)->delimiter(',')->capture_default_str();
  mc_fig2->add_option("--eps", fig2.eps)->delimiter(',')->capture_default_str();
  mc_fig2->add_option("--max-n", fig2.max_vertices, "Desk-scale cap on n")->capture_default_str();
  mc_fig2->add_flag("--allow-large", fig2.allow_large, "Run points whose n_min exceeds --max-n uncapped");
  mc_fig2->add_option("--samples", samples)->capture_default_str();

  auto* mc_exp = app.add_subcommand("mc-expectation", "Check mean(xi) <= s p");
  std::size_t e_n = 500, e_s = 20;
  double e_p = 0.3;
  mc_exp->add_option("--n", e_n)->capture_default_str();
  mc_exp->add_option("--p", e_p)->capture_default_str();
  mc_exp->add_option("--s", e_s)->capture_default_str();
  mc_exp->add_option("--samples", samples)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  std::string command;
  for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);
  auto sidecar = [&](const CLI::App* sub, json extra) {
    json meta = std::move(extra);
    meta["command"] = command;
    meta["config"] = resolved_options(app);
    meta["config"][sub->get_name()] = resolved_options(*sub);
    meta["git_describe"] = build_version();
    return meta;
  };
  auto output_or = [&](const std::string& fallback) { return common.output.empty() ? fallback : common.output; };

  try {
    const SolverOptions solver = solver_options(common);

    if (gen->parsed()) {
      if (!gen_p && !gen_m) throw std::invalid_argument("gen: one of --p or --m is required");
      RandomModel model{gen_p ? std::variant<Gnp, Gnm>{Gnp{*gen_p}} : std::variant<Gnp, Gnm>{Gnm{*gen_m}},
                        common.seed};
      const Graph g = generate(gen_n, model);
      const std::string path = output_or("graph.txt");
      write_graph_file(path, g);
      json out = {{"output", path}, {"n", g.num_vertices()}, {"edges", g.num_edges()}, {"seed", common.seed},
                  {"prng", std::string(kPrngName)}};
      if (gen_p) out["p"] = *gen_p; else out["m"] = *gen_m;
      write_sidecar(path, sidecar(gen, out));
      print(out);
      return 0;
    }

    if (eig->parsed()) {
      const Habitat h(read_graph_file(eig_graph), eig_sinks);
      const DirichletSystem sys(h);
      const EigenResult r = min_eigenvalue(sys, solver);
      json out = {{"xi", r.value},
                  {"residual", r.residual},
                  {"solver", std::string(to_string(r.solver))},
                  {"iterations", r.iterations},
                  {"dim", sys.dim()},
                  {"zeta", static_cast<double>(sys.zeta())},
                  {"theta", sys.theta()},
                  {"boundary_edges", sys.boundary_edges()},
                  {"gershgorin_bound", sys.gershgorin_bound()}};
      try {
        out["weyl_lower_bound"] = weyl_lower_bound(sys);
      } catch (const std::runtime_error& e) {
        out["weyl_lower_bound"] = nullptr;
        out["weyl_error"] = e.what();
      }
      if (eig_rho) out["survival"] = std::string(to_string(survival_check(r.value, *eig_rho)));
      if (!eig_export.empty()) {
        std::ofstream mtx(eig_export);
        if (!mtx) throw std::runtime_error("cannot write " + eig_export);
        sys.write_coordinate(mtx);
        out["matrix"] = eig_export;
      }
      print(out);
      return 0;
    }

    if (bnd->parsed()) {
      json out = json::object();
      if (b_rho && b_s && b_delta && b_eps) {
        const CriticalSizeQuery q{*b_rho, *b_s, *b_delta, *b_eps};
        const CriticalSize cs = critical_patch_size(q);
        const std::uint64_t n = b_n.value_or(cs.n_min);
        out["critical_size"] = {{"p_eps", cs.p_eps}, {"mu", cs.mu}, {"n_bound", cs.n_bound},
                                {"n_min", cs.n_min}, {"n", n}};
        // The edge budget is only guaranteed at n >= n_min.
        out["critical_size"]["m_max"] = n >= cs.n_min ? json(max_edges(q, n)) : json(nullptr);
      }
      if (b_rho && b_s && b_delta && 2.0 * *b_rho != static_cast<double>(*b_s)) {
        const HalfUniformBound hb = half_uniform_bounds(*b_s, *b_rho, *b_delta);
        out["half_uniform"] = {{"kind", std::string(to_string(hb.kind))}, {"bound", hb.bound}, {"count", hb.count}};
      }
      if (b_n) out["connectivity_threshold"] = connectivity_threshold(*b_n);
      if (b_s && b_p) out["survival_threshold"] = survival_threshold(*b_s, *b_p);
      if (b_nu && b_p && b_eps) {
        const ChernoffQuery q{*b_nu, *b_p, *b_eps};
        out["chernoff"] = {{"upper", chernoff_upper(q)}, {"lower", chernoff_lower(q)},
                           {"symmetric", chernoff_symmetric(q)}};
      }
      if (!b_graph.empty()) {
        const DirichletSystem sys(Habitat(read_graph_file(b_graph), b_sinks));
        const SpectralBounds sb = bounds(sys);
        out["spectral"] = {{"zeta", sb.zeta}, {"theta", sb.theta}, {"weyl_lower_bound", weyl_lower_bound(sys)}};
      }
      if (out.empty()) {
        throw std::invalid_argument(
            "bounds: give --rho --s --delta [--eps], --n, --s --p, --nu --p --eps, or --graph --sinks");
      }
      print(out);
      return 0;
    }

    if (crit->parsed()) {
      const CriticalSizeQuery q{c_rho, c_s, c_delta, c_eps};
      const CriticalSize cs = critical_patch_size(q);
      const std::uint64_t n = c_n.value_or(cs.n_min);
      print({{"rho", c_rho}, {"s", c_s}, {"delta", c_delta}, {"eps", c_eps}, {"p_eps", cs.p_eps}, {"mu", cs.mu},
             {"n_bound", cs.n_bound}, {"n_min", cs.n_min}, {"n", n}, {"m_max", max_edges(q, n)}});
      return 0;
    }

    if (dyn->parsed()) {
      const DirichletSystem sys(Habitat(read_graph_file(d_graph), d_sinks));
      const double xi = min_eigenvalue(sys, solver).value;
      DynamicsSpec spec;
      spec.mode = d_mode == "linear" ? DynamicsMode::linear : DynamicsMode::logistic;
      spec.rho = d_rho;
      spec.dt = d_dt;
      const double gap = std::abs(d_rho - xi);
      spec.t_max = d_tmax.value_or(std::max(100.0, gap > 0.0 ? 60.0 / gap : 100.0));
      const DynamicsResult r = integrate(sys, spec);
      const std::string path = output_or("dynamics.csv");
      {
        std::ofstream csv(path);
        if (!csv) throw std::runtime_error("cannot write " + path);
        csv << "t,total_mass,norm\n";
        csv.precision(17);
        for (const auto& pt : r.trajectory) csv << pt.t << ',' << pt.total_mass << ',' << pt.norm << '\n';
      }
      json out = {{"output", path},
                  {"mode", std::string(to_string(spec.mode))},
                  {"rho", d_rho},
                  {"xi", xi},
                  {"dt", r.dt},
                  {"steps", r.steps},
                  {"t_max", spec.t_max},
                  {"growth_rate", r.growth_rate},
                  {"expected_growth_rate", d_rho - xi},
                  {"final_mass", r.final_mass},
                  {"classification", std::string(to_string(r.classification))},
                  {"spectral_classification", std::string(to_string(survival_check(xi, d_rho)))}};
      write_sidecar(path, sidecar(dyn, out));
      print(out);
      return 0;
    }

    RunOptions run;
    run.threads = resolve_threads(common.threads);
    run.solver = solver;

    auto finish = [&](const CLI::App* sub, const ExperimentResult& result, json summary) {
      const std::string path = output_or(sub->get_name() + ".csv");
      {
        std::ofstream csv(path);
        if (!csv) throw std::runtime_error("cannot write " + path);
        write_csv(csv, result);
      }
      json meta = metadata(result);
      for (auto& [k, v] : sidecar(sub, json::object()).items()) meta[k] = v;
      write_sidecar(path, meta);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      json rows = json::array();
      for (const auto& row : result.rows) {
        json r = {{"n", row.point.n},          {"s", row.point.s},
                  {"label", row.point.label},  {"mean_xi", row.xi.mean},
                  {"std_xi", row.xi.std},      {"mean_ratio", row.ratio.mean},
                  {"right_tail", row.xi.right_tail}, {"positive_frac", row.positive_frac},
                  {"violations", row.violations()}};
        if (row.healthy_frac) r["healthy_frac"] = *row.healthy_frac;
        rows.push_back(std::move(r));
      }
      summary["output"] = path;
      summary["rows"] = rows;
      summary["warnings"] = result.warnings;
      print(summary);
    };

    if (mc_ratio->parsed()) {
      ratio.samples = samples;
      ratio.seed = common.seed;
      ratio.rho = ratio_rho;
      finish(mc_ratio, run_ratio_experiment(ratio, run), {{"experiment", "mc-ratio"}});
      return 0;
    }
    if (mc_thr->parsed()) {
      thr.samples = samples;
      thr.seed = common.seed;
      finish(mc_thr, run_threshold_experiment(thr, run), {{"experiment", "mc-threshold"}});
      return 0;
    }
    if (mc_fig2->parsed()) {
      fig2.samples = samples;
      fig2.seed = common.seed;
      finish(mc_fig2, run_fig2_experiment(fig2, run), {{"experiment", "mc-fig2"}});
      return 0;
    }
    if (mc_exp->parsed()) {
      const ExpectationReport rep = run_expectation_check(e_n, e_p, e_s, samples, common.seed, run);
      ExperimentResult result;
      result.spec.name = "mc-expectation";
      result.spec.samples = samples;
      result.spec.seed = common.seed;
      result.spec.grid.push_back(rep.stats.point);
      result.options = run;
      result.rows.push_back(rep.stats);
      finish(mc_exp, result,
             {{"experiment", "mc-expectation"}, {"sp", rep.sp}, {"mean_xi", rep.mean_xi},
              {"standard_error", rep.standard_error}, {"gap", rep.gap}, {"holds", rep.holds}});
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
