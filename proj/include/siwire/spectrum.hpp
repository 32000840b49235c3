#pragma once

#include <complex>
#include <vector>

#include "siwire/coupling.hpp"
#include "siwire/defect_array.hpp"
#include "siwire/errors.hpp"

namespace siwire {

/// Spectral-function table cap: F is a direct 2^N-term sine sum.
inline constexpr int kSpectralMaxDefects = 20;
/// Dense matching-system oracle stays at toy sizes.
inline constexpr int kOracleMaxDefects = 8;

/// Dirichlet box [-L, L] containing the defect chain. The eigenvalue
/// equation used here requires phi = 0, and every defect must lie strictly
/// inside the box.
struct SpectralProblem {
  SpectralProblem(Coupling coupling, DefectArray defects, double half_length);

  Coupling coupling;
  DefectArray defects;
  double half_length;
};

struct Spectrum {
  std::vector<double> roots;      // strictly increasing, in (0, k_max]
  double k_max = 0.0;             // scan ceiling
  std::vector<double> residuals;  // |F(k_n)| (or |det| for the oracle route)
};

/// F(k) = sin 2kL + beta * sum_i sin 2k s_i
///      + beta^2 * sum_{i>j} sin 2k(s_j - s_i + L) + ...:
/// even-length chains carry argument L - A, odd-length chains carry A, with
/// A the alternating position sum of the chain. Eigenvalues are the k > 0
/// roots. Terms are tabulated once and summed with compensation.
class SpectralFunction {
 public:
  explicit SpectralFunction(const SpectralProblem& p);

  double operator()(double k) const;

  std::size_t term_count() const { return coef_.size(); }

 private:
  std::vector<double> coef_;
  std::vector<double> arg_;
};

/// One-shot convenience wrapper around SpectralFunction.
double spectral_function(const SpectralProblem& p, double k);

/// LHS - RHS of the resolvent form of the eigenvalue condition,
///   (R_N - e^{-2ikL})(R'_N - e^{-2ikL}) - T_N T'_N,
/// with the amplitudes taken from the transfer-matrix route. Vanishes at
/// eigenvalues; used as an independent check on the roots of F.
std::complex<double> residual_eq19(const SpectralProblem& p, double k);

struct FindSpectrumOptions {
  int grid_per_mean_spacing = 8;  // bracket-grid oversampling of pi/(2L)
  bool parallel = true;           // OpenMP over grid points and brackets
  int max_weyl_rounds = 4;        // halvings before giving up
};

/// Brackets sign changes of F on a uniform grid, bisects each bracket to
/// machine precision, chases same-sign dips that hide root pairs, and
/// re-scans any window where the root count drifts from the Weyl estimate
/// 2Lk/pi by more than N + 2. Throws incomplete_spectrum_error when the
/// count cannot be reconciled.
Spectrum find_spectrum(const SpectralProblem& p, double k_max,
                       const FindSpectrumOptions& opts = {});

/// Brute-force oracle: the (2N+2)x(2N+2) real matching system (two basis
/// amplitudes per interval, Dirichlet rows at the walls, two connection rows
/// per defect) has zero determinant exactly at the eigenvalues. Same root
/// harness, applied to the determinant. N <= 8.
Spectrum oracle_spectrum(const SpectralProblem& p, double k_max,
                         const FindSpectrumOptions& opts = {.grid_per_mean_spacing = 16});

}  // namespace siwire
