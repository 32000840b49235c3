#include "siwire/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "siwire/errors.hpp"
#include "siwire/scattering.hpp"

namespace siwire {

Method parse_method(const std::string& name) {
  if (name == "transfer") return Method::transfer;
  if (name == "recursion") return Method::recursion;
  if (name == "closedform") return Method::closed_form;
  if (name == "all") return Method::all;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected recursion|closedform|transfer|all)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::transfer: return "transfer";
    case Method::recursion: return "recursion";
    case Method::closed_form: return "closedform";
    case Method::all: return "all";
  }
  return "?";
}

void KGrid::validate() const {
  if (!(k_min > 0.0) || !std::isfinite(k_max))
    throw std::invalid_argument("KGrid: k_min must be > 0 and the grid finite");
  if (points < 1) throw std::invalid_argument("KGrid: need at least one point");
  if (points == 1) {
    if (k_max != k_min)
      throw std::invalid_argument("KGrid: a single-point grid needs k_min == k_max");
  } else if (!(k_max > k_min)) {
    throw std::invalid_argument("KGrid: k_max must exceed k_min");
  }
}

double KGrid::step() const {
  return points > 1 ? (k_max - k_min) / static_cast<double>(points - 1) : 0.0;
}

double KGrid::at(int i) const {
  return points > 1
             ? k_min + (k_max - k_min) * (static_cast<double>(i) / static_cast<double>(points - 1))
             : k_min;
}

std::vector<double> ScanResult::momenta() const {
  std::vector<double> ks(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) ks[i] = points[i].k;
  return ks;
}

std::vector<double> ScanResult::transmission_probabilities() const {
  std::vector<double> t2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) t2[i] = std::norm(points[i].amps.T);
  return t2;
}

namespace {

ScanPoint evaluate_point(const Coupling& c, const DefectArray& d,
                         const ClosedFormAmplitudeEvaluator* closed, double k,
                         Method method) {
  ScanPoint pt;
  pt.k = k;
  pt.method_disagreement = std::numeric_limits<double>::quiet_NaN();

  switch (method) {
    case Method::transfer:
      pt.amps = transfer_matrix_amplitudes(c, d, k);
      break;
    case Method::recursion:
      pt.amps = recursive_amplitudes(c, d, k);
      break;
    case Method::closed_form:
      pt.amps = (*closed)(k);
      break;
    case Method::all: {
      const auto t = transfer_matrix_amplitudes(c, d, k);
      const auto r = recursive_amplitudes(c, d, k);
      const auto f = (*closed)(k);
      pt.amps = t;
      pt.method_disagreement = std::max({max_amplitude_difference(t, r),
                                         max_amplitude_difference(t, f),
                                         max_amplitude_difference(r, f)});
      break;
    }
  }
  return pt;
}

}  // namespace

ScanResult scan_amplitudes(const Coupling& c, const DefectArray& d, const KGrid& grid,
                           Method method, bool parallel) {
  grid.validate();

  // term tables are shared across the grid; building them per point would
  // dominate the whole scan
  std::unique_ptr<ClosedFormAmplitudeEvaluator> closed;
  if (method == Method::closed_form || method == Method::all)
    closed = std::make_unique<ClosedFormAmplitudeEvaluator>(c, d);

  ScanResult out;
  out.grid = grid;
  out.method = method;
  out.points.resize(static_cast<std::size_t>(grid.points));

  // exceptions may not cross the parallel region; remember the first one
  std::string error;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < grid.points; ++i) {
    try {
      out.points[static_cast<std::size_t>(i)] =
          evaluate_point(c, d, closed.get(), grid.at(i), method);
    } catch (const std::exception& e) {
#pragma omp critical
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw degeneracy_error(error);
  return out;
}

ScanResult scan_amplitudes_serial(const Coupling& c, const DefectArray& d,
                                  const KGrid& grid, Method method) {
  grid.validate();
  std::unique_ptr<ClosedFormAmplitudeEvaluator> closed;
  if (method == Method::closed_form || method == Method::all)
    closed = std::make_unique<ClosedFormAmplitudeEvaluator>(c, d);

  ScanResult out;
  out.grid = grid;
  out.method = method;
  out.points.reserve(static_cast<std::size_t>(grid.points));
  for (int i = 0; i < grid.points; ++i)
    out.points.push_back(evaluate_point(c, d, closed.get(), grid.at(i), method));
  return out;
}

}  // namespace siwire
