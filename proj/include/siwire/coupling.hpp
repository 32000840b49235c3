#pragma once

#include <complex>

namespace siwire {

/// Strength/phase pair (alpha, phi) of a scale-invariant point defect,
/// with the derived constants
///
///   beta  = (1 - alpha^2) / (1 + alpha^2)
///   gamma = 2 alpha / (1 + alpha^2) * e^{i phi}
///
/// satisfying beta^2 + |gamma|^2 = 1. alpha ranges over all nonzero reals
/// (alpha = 0 is a perfect wall and is rejected; probe that limit with large
/// |alpha| instead). phi is stored wrapped into [0, 2*pi).
class Coupling {
 public:
  explicit Coupling(double alpha, double phi = 0.0);

  /// Equivalent vertex angle, alpha = -cot(theta/2); theta in (-pi, pi).
  static Coupling from_theta(double theta, double phi = 0.0);
  double theta() const;

  double alpha() const { return alpha_; }
  double phi() const { return phi_; }

  double beta() const { return beta_; }
  std::complex<double> gamma() const { return gamma_; }
  /// Signed real transmission factor 2 alpha / (1 + alpha^2); gamma without
  /// the phase.
  double gamma0() const { return gamma0_; }

 private:
  double alpha_;
  double phi_;
  double beta_;
  double gamma0_;
  std::complex<double> gamma_;
};

}  // namespace siwire
