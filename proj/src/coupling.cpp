#include "siwire/coupling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace siwire {

namespace {

double wrap_phase(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w == two_pi) w = 0.0;  // fmod can land on the boundary after the add
  return w;
}

}  // namespace

Coupling::Coupling(double alpha, double phi) : alpha_(alpha) {
  if (!std::isfinite(alpha) || !std::isfinite(phi))
    throw std::invalid_argument("Coupling: alpha and phi must be finite");
  if (alpha == 0.0)
    throw std::invalid_argument(
        "Coupling: alpha = 0 is a perfect wall; use a large |alpha| to probe that limit");
  phi_ = wrap_phase(phi);

  // u = 2/(1+a^2) keeps beta^2 + gamma0^2 = 1 exact and survives huge alpha:
  // beta = u - 1, gamma0 = alpha * u.
  const double u = 2.0 / (1.0 + alpha * alpha);
  beta_ = u - 1.0;
  gamma0_ = alpha * u;
  gamma_ = gamma0_ * std::complex<double>(std::cos(phi_), std::sin(phi_));
}

Coupling Coupling::from_theta(double theta, double phi) {
  const double t = std::tan(0.5 * theta);
  if (t == 0.0 || !std::isfinite(t))
    throw std::invalid_argument("Coupling::from_theta: theta must avoid 0 (wall) and +/-pi");
  return Coupling(-1.0 / t, phi);
}

double Coupling::theta() const { return 2.0 * std::atan(-1.0 / alpha_); }

}  // namespace siwire
