#pragma once

#include <string>
#include <vector>

#include "siwire/amplitudes.hpp"
#include "siwire/coupling.hpp"
#include "siwire/defect_array.hpp"

namespace siwire {

enum class Method { transfer, recursion, closed_form, all };

Method parse_method(const std::string& name);  // "transfer" | "recursion" | "closedform" | "all"
std::string method_name(Method m);

/// Uniform momentum grid, k_min > 0 (amplitudes are defined for propagating
/// waves only). points == 1 collapses to the single momentum k_min == k_max.
struct KGrid {
  double k_min = 0.0;
  double k_max = 0.0;
  int points = 0;

  void validate() const;
  double step() const;
  double at(int i) const;
};

struct ScanPoint {
  double k = 0.0;
  ScatteringAmplitudes amps;
  /// Max pairwise amplitude difference across the three routes; only filled
  /// by Method::all, NaN otherwise.
  double method_disagreement = 0.0;
};

struct ScanResult {
  KGrid grid;
  Method method = Method::transfer;
  std::vector<ScanPoint> points;

  std::vector<double> momenta() const;
  std::vector<double> transmission_probabilities() const;  // |T|^2
};

/// Evaluates the amplitudes over the grid. Points are independent, so the
/// OpenMP version partitions the grid and the output is identical to the
/// serial reference bit for bit. Method::all computes all three routes per
/// point, reports the transfer-matrix amplitudes and the max disagreement.
ScanResult scan_amplitudes(const Coupling& c, const DefectArray& d, const KGrid& grid,
                           Method method = Method::transfer, bool parallel = true);

/// Serial reference for the kernel above; kept for testing and benchmarks.
ScanResult scan_amplitudes_serial(const Coupling& c, const DefectArray& d,
                                  const KGrid& grid, Method method = Method::transfer);

}  // namespace siwire
