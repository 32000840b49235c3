#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace siwire {

/// Strictly increasing defect positions s_1 < ... < s_N on the line. N may
/// be zero (free line).
class DefectArray {
 public:
  DefectArray() = default;
  explicit DefectArray(std::vector<double> positions);

  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  const std::vector<double>& positions() const { return positions_; }
  double operator[](std::size_t i) const { return positions_[i]; }

  std::vector<double> reversed() const;

 private:
  std::vector<double> positions_;
};

/// Positions s_i = sum_{j<=i} sqrt(p_j) with the convention p_1 = 1,
/// p_2 = 2, p_3 = 3, p_4 = 5, ... (1 prepended to the primes). These sums of
/// square roots are pairwise incommensurate, which keeps the 2^{N-1}
/// oscillation frequencies distinct. n = 0 gives the free line.
DefectArray sqrt_prime_positions(int n);

/// Box half-length for the level-statistics presets: s_1 : 2L = 1 :
/// sum_{i=1}^{n+1} p_i with s_1 = 1, so L = (p_1 + ... + p_{n+1}) / 2.
/// For n = 7 this is (1+2+3+5+7+11+13+17)/2 = 29.5.
double fig3_box_halflength(int n);

}  // namespace siwire
