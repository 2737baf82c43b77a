#pragma once

// Exact sign-flip permutation p-value over all 2^n sign patterns,
// statistic |mean(d)|, ">=" counting. Practical for n <= 20.

#include <cmath>
#include <cstdint>
#include <vector>

namespace zebra::oracle {

inline double exact_signflip_p(const std::vector<double>& d) {
  const std::size_t n = d.size();
  long double observed = 0;
  for (double v : d) observed += v;
  observed = std::fabs(observed) / n;
  const std::uint64_t patterns = std::uint64_t{1} << n;
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    long double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += ((mask >> i) & 1u) ? -d[i] : d[i];
    if (std::fabs(s) / n >= observed - 1e-12L) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(patterns);
}

}  // namespace zebra::oracle
