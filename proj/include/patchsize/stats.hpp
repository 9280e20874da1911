#pragma once

#include <cstddef>
#include <span>

namespace patchsize {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  /// Population standard deviation (divides by count).
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  double right_tail = 0.0;

  /// std / sqrt(count)
  double standard_error() const;
};

/// Nearest-rank right-tail percentile: the smallest sample value v such that
/// at most a fraction `level` of the samples exceed v.
double right_tail_percentile(std::span<const double> values, double level);

/// Order-independent given the same sequence of values in the same order.
Summary summarize(std::span<const double> values, double tail_level);

}  // namespace patchsize
