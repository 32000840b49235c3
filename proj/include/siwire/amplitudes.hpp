#pragma once

#include <complex>

namespace siwire {

/// Scattering amplitudes of the defect chain at momentum k > 0.
///
/// Sign convention: a wave incident from the left is written
///   psi = e^{ikx} - R e^{-ikx}   (x < s_1),   psi = T e^{ikx}   (x > s_N),
/// so R carries a minus sign relative to the usual S-matrix entry. Tp/Rp are
/// the right-incident (x > s_N) amplitudes under the mirrored convention.
struct ScatteringAmplitudes {
  double k = 0.0;
  std::complex<double> T{1.0, 0.0};
  std::complex<double> R{0.0, 0.0};
  std::complex<double> Tp{1.0, 0.0};
  std::complex<double> Rp{0.0, 0.0};

  /// Max deviation from |T|^2+|R|^2 = 1, |Tp|^2+|Rp|^2 = 1 and |T| = |Tp|.
  double unitarity_defect() const;
};

/// Largest magnitude difference between corresponding amplitudes.
double max_amplitude_difference(const ScatteringAmplitudes& a,
                                const ScatteringAmplitudes& b);

}  // namespace siwire
