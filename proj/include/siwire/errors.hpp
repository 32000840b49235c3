#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace siwire {

/// Amplitude denominator (or D_N) collapsed below the representable floor.
/// Cannot occur for |beta| < 1 - 1e-14; reachable only in near-wall limits.
class degeneracy_error : public std::runtime_error {
 public:
  explicit degeneracy_error(const std::string& what) : std::runtime_error(what) {}
};

/// Autocorrelation input has (numerically) zero variance.
class degenerate_signal_error : public std::runtime_error {
 public:
  explicit degenerate_signal_error(const std::string& what) : std::runtime_error(what) {}
};

/// Root search could not reconcile the level count with the Weyl estimate
/// after the allotted refinement rounds. Carries what was found so far and
/// the k-windows that still look short of roots.
class incomplete_spectrum_error : public std::runtime_error {
 public:
  incomplete_spectrum_error(const std::string& what,
                            std::vector<std::pair<double, double>> windows,
                            std::vector<double> roots, std::vector<double> residuals)
      : std::runtime_error(what),
        suspect_windows(std::move(windows)),
        partial_roots(std::move(roots)),
        partial_residuals(std::move(residuals)) {}

  std::vector<std::pair<double, double>> suspect_windows;
  std::vector<double> partial_roots;
  std::vector<double> partial_residuals;
};

}  // namespace siwire
