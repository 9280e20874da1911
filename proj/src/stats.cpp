#include "patchsize/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace patchsize {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double Summary::standard_error() const {
  return count == 0 ? 0.0 : std / std::sqrt(static_cast<double>(count));
}

double right_tail_percentile(std::span<const double> values, double level) {
  if (values.empty()) throw std::invalid_argument("right_tail_percentile: no samples");
  if (!(level >= 0.0 && level < 1.0)) throw std::invalid_argument("right_tail_percentile: level must lie in [0,1)");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - level) * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

Summary summarize(std::span<const double> values, double tail_level) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  CompensatedSum total;
  for (double v : values) total.add(v);
  s.mean = total.value() / static_cast<double>(s.count);
  CompensatedSum squares;
  for (double v : values) squares.add((v - s.mean) * (v - s.mean));
  s.std = std::sqrt(squares.value() / static_cast<double>(s.count));
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  // Guard min <= mean <= max against the last bit of rounding.
  s.mean = std::clamp(s.mean, s.min, s.max);
  s.right_tail = right_tail_percentile(values, tail_level);
  return s;
}

}  // namespace patchsize
