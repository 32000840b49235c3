#pragma once

#include <cmath>
#include <complex>

namespace siwire {

/// Neumaier (improved Kahan) compensated accumulator. Used wherever the
/// 2^N-term exponential sums are folded, so that agreement between the
/// closed-form and transfer-matrix routes survives to N = 12 and beyond.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }

  double value() const { return sum + comp; }
};

struct ComplexNeumaierSum {
  NeumaierSum re, im;

  void add(const std::complex<double>& z) {
    re.add(z.real());
    im.add(z.imag());
  }

  std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace siwire
