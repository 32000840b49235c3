#include "siwire/defect_array.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace siwire {

namespace {

// p_1 = 1 prepended to the primes; 25 entries support N = 24 positions and
// the N+1 box-length sums.
constexpr std::array<int, 25> kPaperPrimes = {1,  2,  3,  5,  7,  11, 13, 17, 19,
                                              23, 29, 31, 37, 41, 43, 47, 53, 59,
                                              61, 67, 71, 73, 79, 83, 89};

}  // namespace

DefectArray::DefectArray(std::vector<double> positions) : positions_(std::move(positions)) {
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!std::isfinite(positions_[i]))
      throw std::invalid_argument("DefectArray: positions must be finite");
    if (i > 0 && !(positions_[i - 1] < positions_[i]))
      throw std::invalid_argument("DefectArray: positions must be strictly increasing");
  }
}

std::vector<double> DefectArray::reversed() const {
  return {positions_.rbegin(), positions_.rend()};
}

DefectArray sqrt_prime_positions(int n) {
  if (n < 0 || n > 24)
    throw std::invalid_argument("sqrt_prime_positions: n must be in [0, 24], got " +
                                std::to_string(n));
  std::vector<double> s(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += std::sqrt(static_cast<double>(kPaperPrimes[static_cast<std::size_t>(i)]));
    s[static_cast<std::size_t>(i)] = acc;
  }
  return DefectArray(std::move(s));
}

double fig3_box_halflength(int n) {
  if (n < 1 || n > 24)
    throw std::invalid_argument("fig3_box_halflength: n must be in [1, 24], got " +
                                std::to_string(n));
  long sum = 0;
  for (int i = 0; i <= n; ++i) sum += kPaperPrimes[static_cast<std::size_t>(i)];
  return 0.5 * static_cast<double>(sum);
}

}  // namespace siwire
