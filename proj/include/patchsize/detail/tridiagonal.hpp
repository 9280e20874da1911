#pragma once

// Dense symmetric kernels behind the spectral solvers. Not part of the
// stable API; exposed for tests.

#include <cstddef>
#include <span>
#include <vector>

namespace patchsize::detail {

/// Symmetric tridiagonal matrix: diag has k entries, off has k-1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// Number of eigenvalues strictly below x (Sturm sequence via LDL^T).
std::size_t sturm_count(const Tridiagonal& t, double x);

/// Smallest / largest eigenvalue by bisection on the Sturm count, to full
/// working precision.
double tridiagonal_min_eigenvalue(const Tridiagonal& t);
double tridiagonal_max_eigenvalue(const Tridiagonal& t);

/// Unit eigenvector for a (converged) eigenvalue by inverse iteration, using
/// Gaussian elimination with partial pivoting on T - lambda I.
std::vector<double> tridiagonal_eigenvector(const Tridiagonal& t, double lambda);

/// Householder reduction Q^T A Q = T of a dense symmetric matrix.
class HouseholderReduction {
 public:
  /// `a` is row-major n x n and is overwritten.
  HouseholderReduction(std::vector<double> a, std::size_t n);

  const Tridiagonal& tridiagonal() const { return t_; }

  /// x <- Q x, mapping an eigenvector of T to one of A.
  void back_transform(std::span<double> x) const;

 private:
  struct Reflector {
    std::size_t offset;  // acts on entries offset..n-1
    double beta;
    std::vector<double> v;
  };
  std::size_t n_;
  Tridiagonal t_;
  std::vector<Reflector> reflectors_;
};

}  // namespace patchsize::detail
