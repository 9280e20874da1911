#include "patchsize/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "patchsize/detail/tridiagonal.hpp"
#include "patchsize/random.hpp"

namespace patchsize {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void normalize(std::vector<double>& v) {
  const double s = norm2(v);
  for (auto& x : v) x /= s;
}

// One diagonal block of the Dirichlet matrix: diag - adjacency, in CSR form
// with local indices. offsets may start at a nonzero position.
struct Block {
  std::span<const double> diag;
  std::span<const std::size_t> offsets;
  std::span<const Vertex> adjacency;

  std::size_t dim() const { return diag.size(); }

  double gershgorin() const {
    double c = 0.0;
    for (std::size_t i = 0; i < dim(); ++i)
      c = std::max(c, diag[i] + static_cast<double>(offsets[i + 1] - offsets[i]));
    return c;
  }

  void apply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < dim(); ++i) {
      double sum = diag[i] * x[i];
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) sum -= x[adjacency[k]];
      y[i] = sum;
    }
  }

  std::vector<double> dense() const {
    const std::size_t d = dim();
    std::vector<double> a(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      a[i * d + i] = diag[i];
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) a[i * d + adjacency[k]] = -1.0;
    }
    return a;
  }
};

struct OwnedBlock {
  std::vector<double> diag;
  std::vector<std::size_t> offsets;
  std::vector<Vertex> adjacency;
  std::vector<std::size_t> members;  // global index of each local vertex

  Block view() const { return {diag, offsets, adjacency}; }
};

// Rayleigh quotient and residual of a unit vector.
std::pair<double, double> rayleigh_residual(const Block& b, std::span<const double> x) {
  std::vector<double> y(x.size());
  b.apply(x, y);
  const double lambda = dot(x, y);
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - lambda * x[i];
    r2 += r * r;
  }
  return {lambda, std::sqrt(r2)};
}

EigenResult solve_dense(const Block& b, double tol_abs) {
  const std::size_t d = b.dim();
  detail::HouseholderReduction reduction(b.dense(), d);
  const auto& t = reduction.tridiagonal();
  const double lambda = detail::tridiagonal_min_eigenvalue(t);
  auto x = detail::tridiagonal_eigenvector(t, lambda);
  reduction.back_transform(x);
  normalize(x);
  auto [value, residual] = rayleigh_residual(b, x);
  EigenResult out{value, residual, SolverKind::dense, 1, std::move(x)};
  if (!(residual <= tol_abs)) {
    throw ConvergenceError("dense eigensolver: residual " + std::to_string(residual) + " above tolerance " +
                               std::to_string(tol_abs),
                           out);
  }
  return out;
}

// Lanczos on c I - L, whose largest eigenvalue is c - lambda_min(L).
EigenResult solve_lanczos(const Block& b, const SolverOptions& options, double tol_abs) {
  const std::size_t d = b.dim();
  const double c = b.gershgorin();
  const std::size_t basis_cap = std::min(d, std::max<std::size_t>(options.krylov_dim, 2));
  const double breakdown = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, c);

  // Strictly positive start vector: c I - L is nonnegative and irreducible on
  // a connected block, so its Perron vector is positive and has nonzero
  // overlap with it.
  std::vector<double> start(d);
  Rng rng(derive_seed(0x1a2c05ULL, d));
  for (auto& x : start) x = 0.5 + uniform01(rng);
  normalize(start);

  EigenResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.residual = std::numeric_limits<double>::infinity();
  best.solver = SolverKind::lanczos;

  std::vector<std::vector<double>> basis;
  detail::Tridiagonal t;
  std::vector<double> w(d);
  std::size_t steps = 0;

  while (steps < options.max_iterations) {
    basis.clear();
    t.diag.clear();
    t.off.clear();
    std::vector<double> q = start;
    for (std::size_t j = 0; j < basis_cap; ++j) {
      basis.push_back(q);
      b.apply(q, w);
      for (std::size_t i = 0; i < d; ++i) w[i] = c * q[i] - w[i];
      double alpha = dot(q, w);
      for (std::size_t i = 0; i < d; ++i) w[i] -= alpha * q[i];
      if (j > 0) {
        const double beta = t.off.back();
        const auto& prev = basis[j - 1];
        for (std::size_t i = 0; i < d; ++i) w[i] -= beta * prev[i];
      }
      // Full reorthogonalization, two classical Gram-Schmidt passes.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k <= j; ++k) {
          const double h = dot(basis[k], w);
          if (k == j) alpha += h;
          const auto& qk = basis[k];
          for (std::size_t i = 0; i < d; ++i) w[i] -= h * qk[i];
        }
      }
      t.diag.push_back(alpha);
      const double beta = norm2(w);
      ++steps;

      const double theta = detail::tridiagonal_max_eigenvalue(t);
      const auto y = detail::tridiagonal_eigenvector(t, theta);
      const double estimate = beta * std::abs(y.back());
      const bool exhausted = j + 1 == basis_cap || steps >= options.max_iterations;
      if (estimate <= 0.5 * tol_abs || beta <= breakdown || exhausted) {
        std::vector<double> ritz(d, 0.0);
        for (std::size_t k = 0; k <= j; ++k) {
          const auto& qk = basis[k];
          for (std::size_t i = 0; i < d; ++i) ritz[i] += y[k] * qk[i];
        }
        normalize(ritz);
        auto [value, residual] = rayleigh_residual(b, ritz);
        if (residual < best.residual) {
          best.value = value;
          best.residual = residual;
          best.vector = ritz;
        }
        best.iterations = steps;
        if (residual <= tol_abs) return best;
        start = std::move(ritz);
        break;
      }
      t.off.push_back(beta);
      for (std::size_t i = 0; i < d; ++i) q[i] = w[i] / beta;
    }
  }
  throw ConvergenceError("lanczos: no convergence after " + std::to_string(steps) + " steps (residual " +
                             std::to_string(best.residual) + ", tolerance " + std::to_string(tol_abs) + ")",
                         best);
}

EigenResult solve_block(const Block& b, const SolverOptions& options, double tol_abs) {
  if (b.dim() <= options.dense_threshold) return solve_dense(b, tol_abs);
  return solve_lanczos(b, options, tol_abs);
}

}  // namespace

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::dense:
      return "dense";
    case SolverKind::lanczos:
      return "lanczos";
    case SolverKind::oracle:
      return "oracle";
  }
  return "unknown";
}

DirichletSystem::DirichletSystem(const Habitat& h)
    : num_vertices_(h.num_vertices()),
      sinks_(h.sinks()),
      interior_(induced_subgraph(h)),
      z_(sink_adjacency(h)) {
  diagonal_.resize(z_.size());
  zeta_ = std::numeric_limits<std::size_t>::max();
  min_degree_ = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const std::size_t internal = interior_.degree(static_cast<Vertex>(i));
    const std::size_t full = z_[i] + internal;
    diagonal_[i] = static_cast<double>(full);
    boundary_edges_ += z_[i];
    zeta_ = std::min(zeta_, z_[i]);
    max_degree_ = std::max(max_degree_, full);
    min_degree_ = std::min(min_degree_, full);
    gershgorin_ = std::max(gershgorin_, static_cast<double>(full + internal));
  }
}

void DirichletSystem::apply(std::span<const double> x, std::span<double> y) const {
  Block{diagonal_, interior_.offsets(), interior_.adjacency()}.apply(x, y);
}

std::vector<double> DirichletSystem::dense() const {
  return Block{diagonal_, interior_.offsets(), interior_.adjacency()}.dense();
}

void DirichletSystem::write_coordinate(std::ostream& out) const {
  std::size_t nnz = 2 * interior_.num_edges();
  for (double v : diagonal_)
    if (v != 0.0) ++nnz;
  out << dim() << ' ' << nnz << '\n';
  for (Vertex i = 0; i < dim(); ++i) {
    auto nb = interior_.neighbors(i);
    auto it = nb.begin();
    for (; it != nb.end() && *it < i; ++it) out << i + 1 << ' ' << *it + 1 << " -1\n";
    if (diagonal_[i] != 0.0) out << i + 1 << ' ' << i + 1 << ' ' << static_cast<std::size_t>(diagonal_[i]) << '\n';
    for (; it != nb.end(); ++it) out << i + 1 << ' ' << *it + 1 << " -1\n";
  }
}

double absolute_tolerance(const DirichletSystem& sys, double tol) {
  return tol * std::max(1.0, sys.gershgorin_bound());
}

double residual_norm(const DirichletSystem& sys, double lambda, std::span<const double> v) {
  std::vector<double> y(v.size());
  sys.apply(v, y);
  double r2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r2 += (y[i] - lambda * v[i]) * (y[i] - lambda * v[i]);
  return std::sqrt(r2) / norm2(v);
}

EigenResult min_eigenvalue(const DirichletSystem& sys, const SolverOptions& options) {
  const std::size_t d = sys.dim();
  if (d == 0) throw std::invalid_argument("min_eigenvalue: empty system");
  if (!(options.tol > 0.0)) throw std::invalid_argument("min_eigenvalue: tolerance must be positive");
  const double tol_abs = absolute_tolerance(sys, options.tol);

  const Components comps = connected_components(sys.interior());
  std::vector<std::size_t> sink_edges(comps.count, 0);
  std::vector<std::size_t> sizes(comps.count, 0);
  for (std::size_t i = 0; i < d; ++i) {
    sink_edges[comps.label[i]] += sys.z()[i];
    ++sizes[comps.label[i]];
  }

  // A component without sink neighbors carries a plain Laplacian block,
  // whose smallest eigenvalue is exactly 0 with a constant eigenvector.
  for (std::size_t c = 0; c < comps.count; ++c) {
    if (sink_edges[c] != 0) continue;
    EigenResult out{0.0, 0.0, SolverKind::dense, 0, std::vector<double>(d, 0.0)};
    const double entry = 1.0 / std::sqrt(static_cast<double>(sizes[c]));
    for (std::size_t i = 0; i < d; ++i)
      if (comps.label[i] == c) out.vector[i] = entry;
    out.residual = residual_norm(sys, 0.0, out.vector);
    return out;
  }

  EigenResult out;
  if (comps.count == 1) {
    out = solve_block({sys.diagonal(), sys.interior().offsets(), sys.interior().adjacency()}, options, tol_abs);
  } else {
    std::vector<OwnedBlock> blocks(comps.count);
    std::vector<std::size_t> local(d);
    for (std::size_t i = 0; i < d; ++i) {
      auto& blk = blocks[comps.label[i]];
      local[i] = blk.members.size();
      blk.members.push_back(i);
    }
    for (auto& blk : blocks) {
      blk.offsets.push_back(0);
      for (std::size_t g : blk.members) {
        blk.diag.push_back(sys.diagonal(g));
        for (Vertex nb : sys.interior().neighbors(static_cast<Vertex>(g)))
          blk.adjacency.push_back(static_cast<Vertex>(local[nb]));
        blk.offsets.push_back(blk.adjacency.size());
      }
    }
    out.value = std::numeric_limits<double>::infinity();
    std::size_t total_iterations = 0;
    for (const auto& blk : blocks) {
      EigenResult part = solve_block(blk.view(), options, tol_abs);
      total_iterations += part.iterations;
      if (part.value < out.value) {
        out.value = part.value;
        out.solver = part.solver;
        out.vector.assign(d, 0.0);
        for (std::size_t k = 0; k < blk.members.size(); ++k) out.vector[blk.members[k]] = part.vector[k];
      }
    }
    out.iterations = total_iterations;
  }
  // L is positive semidefinite; negative values are rounding.
  out.value = std::max(0.0, out.value);
  out.residual = residual_norm(sys, out.value, out.vector);
  return out;
}

SpectralBounds bounds(const DirichletSystem& sys) {
  return {static_cast<double>(sys.zeta()), sys.theta()};
}

std::pair<double, double> adjacency_spectral_radius(const Graph& g, const PowerOptions& options) {
  const std::size_t n = g.num_vertices();
  if (g.num_edges() == 0) return {0.0, 0.0};
  // Iterate with A + I so that bipartite components do not oscillate. Any
  // strictly positive x gives rho(A) <= max_i (A x)_i / x_i.
  std::vector<double> x(n, 1.0);
  std::vector<double> ax(n);
  constexpr double kFloor = 1e-200;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    double xax = 0.0;
    double xx = 0.0;
    double cw = 0.0;
    for (Vertex i = 0; i < n; ++i) {
      double sum = 0.0;
      for (Vertex j : g.neighbors(i)) sum += x[j];
      ax[i] = sum;
      xax += x[i] * sum;
      xx += x[i] * x[i];
      cw = std::max(cw, sum / x[i]);
    }
    lower = std::max(lower, xax / xx);
    upper = std::min(upper, cw);
    if (upper - lower <= options.tol * std::max(1.0, upper)) return {lower, upper};
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += ax[i];
      scale = std::max(scale, x[i]);
    }
    for (auto& v : x) v = std::max(v / scale, kFloor);
  }
  throw std::runtime_error("power iteration did not converge: lambda_max in [" + std::to_string(lower) + ", " +
                           std::to_string(upper) + "]");
}

double weyl_lower_bound(const DirichletSystem& sys, const PowerOptions& options) {
  if (sys.dim() == 0) throw std::invalid_argument("weyl_lower_bound: empty system");
  const auto [lower, upper] = adjacency_spectral_radius(sys.interior(), options);
  (void)lower;
  return static_cast<double>(sys.min_degree()) - upper;
}

bool is_positive_definite(const Habitat& h, double tol, const SolverOptions& options) {
  if (h.sinks() == 0) throw std::invalid_argument("is_positive_definite: habitat needs at least one sink");
  return min_eigenvalue(DirichletSystem(h), options).value > tol;
}

}  // namespace patchsize
