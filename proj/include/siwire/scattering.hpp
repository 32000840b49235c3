#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "siwire/amplitudes.hpp"
#include "siwire/coupling.hpp"
#include "siwire/defect_array.hpp"

namespace siwire {

/// Hard cap on N for the closed-form route (2^{N-1} terms per sum).
inline constexpr int kClosedFormMaxDefects = 24;
/// Cap for the frequency table (stored explicitly).
inline constexpr int kFrequencyMaxDefects = 20;
/// Below this magnitude an amplitude denominator counts as degenerate.
inline constexpr double kDenominatorFloor = 1e-14;

/// Amplitudes of one defect at position s. |T| = |gamma| independent of both
/// k and s; only the phase of R sees the position.
ScatteringAmplitudes single_defect_amplitudes(const Coupling& c, double s, double k);

/// Composes amplitudes defect by defect,
///   T_N = T_1(s_1) T_{N-1} / (1 + R_1*(s_1) R_{N-1}),
///   R_N = (R_1(s_1) + R_{N-1}) / (1 + R_1*(s_1) R_{N-1}),
/// peeling the leftmost defect; right-incident amplitudes come from the same
/// composition over the reversed ordering, conjugated. O(N) per call.
ScatteringAmplitudes recursive_amplitudes(const Coupling& c, const DefectArray& d,
                                          double k);

/// Evaluates T_N = gamma^N / D_N, R_N = B_N / D_N with B_N, D_N the sums of
/// beta^l e^{2ik(s_i - s_j + s_m - ...)} over strictly decreasing index
/// chains of odd (B) and even (D) length. O(2^N) per call; N <= 24.
ScatteringAmplitudes closed_form_amplitudes(const Coupling& c, const DefectArray& d,
                                            double k);

/// Independent O(N) route: per-defect 2x2 transfer matrices acting on the
/// plane-wave coefficients (A, B) of A e^{ikx} + B e^{-ikx}, multiplied
/// across the chain, amplitudes read off the total matrix.
ScatteringAmplitudes transfer_matrix_amplitudes(const Coupling& c, const DefectArray& d,
                                                double k);

/// Precomputed (coefficient, frequency) tables for the B/D sums of one
/// position sequence, reusable across k. Positions are taken as given (the
/// reversed ordering is a valid formal input; that is how the right-incident
/// amplitudes are produced). For N > 20 the table is not stored and each
/// evaluation streams the 2^N chains instead.
class ClosedFormEvaluator {
 public:
  ClosedFormEvaluator(const Coupling& c, std::span<const double> positions);

  /// Returns {B(k), D(k)}.
  std::pair<std::complex<double>, std::complex<double>> evaluate(double k) const;

  int defect_count() const { return n_; }

 private:
  int n_;
  std::vector<double> beta_pow_;
  std::vector<double> positions_;
  bool tabulated_;
  // mask-order chain tables, split by parity
  std::vector<double> b_coef_, b_arg_;
  std::vector<double> d_coef_, d_arg_;
};

/// Forward + reversed evaluator pair assembling all four amplitudes; the
/// table-backed equivalent of closed_form_amplitudes for k scans.
class ClosedFormAmplitudeEvaluator {
 public:
  ClosedFormAmplitudeEvaluator(const Coupling& c, const DefectArray& d);

  ScatteringAmplitudes operator()(double k) const;

 private:
  Coupling coupling_;
  ClosedFormEvaluator forward_;
  ClosedFormEvaluator backward_;
};

struct FrequencyTerm {
  double frequency;    // 2 * (s_i - s_j + s_m - ...)
  double coefficient;  // beta^l, summed over merged duplicates
};

struct ClosedFormTerms {
  std::vector<FrequencyTerm> b_terms;  // odd chains  (numerator of R_N)
  std::vector<FrequencyTerm> d_terms;  // even chains (shared denominator)
};

/// All oscillation frequencies of B_N and D_N, sorted ascending, duplicates
/// within 1e-12 merged by coefficient addition. Generic (incommensurate)
/// positions give exactly 2^{N-1} entries in each table. 1 <= N <= 20.
ClosedFormTerms enumerate_frequencies(const Coupling& c, const DefectArray& d);

}  // namespace siwire
