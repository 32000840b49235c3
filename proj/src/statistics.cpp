#include "siwire/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "siwire/compensated.hpp"
#include "siwire/errors.hpp"

namespace siwire {

namespace {

constexpr double kPi = std::numbers::pi;

double mean(std::span<const double> xs) {
  NeumaierSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

}  // namespace

SpacingSample unfold(const Spectrum& spectrum, int discard_low) {
  if (discard_low < 0) throw std::invalid_argument("unfold: discard_low must be >= 0");
  const auto& roots = spectrum.roots;
  if (roots.size() < static_cast<std::size_t>(discard_low) + 100)
    throw std::invalid_argument("unfold: need at least discard_low + 100 roots, have " +
                                std::to_string(roots.size()));

  SpacingSample out;
  out.n_discarded_low = discard_low;
  out.n_levels_used = static_cast<int>(roots.size()) - discard_low;
  out.spacings.resize(static_cast<std::size_t>(out.n_levels_used) - 1);
  for (std::size_t i = 0; i < out.spacings.size(); ++i)
    out.spacings[i] = roots[static_cast<std::size_t>(discard_low) + i + 1] -
                      roots[static_cast<std::size_t>(discard_low) + i];
  const double m = mean(out.spacings);
  for (double& s : out.spacings) s /= m;
  return out;
}

double wigner_pdf(double s) {
  if (s < 0.0) throw std::invalid_argument("wigner_pdf: s must be >= 0");
  return 0.5 * kPi * s * std::exp(-0.25 * kPi * s * s);
}

double poisson_pdf(double s) {
  if (s < 0.0) throw std::invalid_argument("poisson_pdf: s must be >= 0");
  return std::exp(-s);
}

double wigner_cdf(double s) {
  if (s < 0.0) throw std::invalid_argument("wigner_cdf: s must be >= 0");
  return -std::expm1(-0.25 * kPi * s * s);
}

double poisson_cdf(double s) {
  if (s < 0.0) throw std::invalid_argument("poisson_cdf: s must be >= 0");
  return -std::expm1(-s);
}

double ks_distance(const SpacingSample& sample, Reference ref) {
  if (sample.spacings.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> xs = sample.spacings;
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = ref == Reference::wigner ? wigner_cdf(xs[i]) : poisson_cdf(xs[i]);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
  }
  return d;
}

Histogram spacing_histogram(const SpacingSample& sample, double bin_width, double min_range) {
  if (sample.spacings.empty())
    throw std::invalid_argument("spacing_histogram: empty sample");
  if (!(bin_width > 0.0)) throw std::invalid_argument("spacing_histogram: bin_width must be > 0");

  const double s_max = *std::max_element(sample.spacings.begin(), sample.spacings.end());
  // whole bins up to at least min_range; extend so every sample lands in a bin
  // and the density integrates to 1
  std::size_t bins = static_cast<std::size_t>(std::ceil(std::max(min_range, 0.0) / bin_width));
  while (static_cast<double>(bins) * bin_width <= s_max) ++bins;
  bins = std::max<std::size_t>(bins, 1);

  Histogram h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.bin_edges[i] = static_cast<double>(i) * bin_width;
  h.densities.assign(bins, 0.0);
  for (double s : sample.spacings) {
    auto idx = static_cast<std::size_t>(s / bin_width);
    if (idx >= bins) idx = bins - 1;
    h.densities[idx] += 1.0;
  }
  const double norm = static_cast<double>(sample.spacings.size()) * bin_width;
  for (double& d : h.densities) d /= norm;
  return h;
}

DistributionComparison compare_to_references(const SpacingSample& sample) {
  return {spacing_histogram(sample), ks_distance(sample, Reference::wigner),
          ks_distance(sample, Reference::poisson)};
}

Autocorrelation transmission_autocorrelation(std::span<const double> k,
                                             std::span<const double> t_squared,
                                             double max_lag) {
  if (k.size() != t_squared.size())
    throw std::invalid_argument("autocorrelation: k and |T|^2 lengths differ");
  if (k.size() < 512)
    throw std::invalid_argument("autocorrelation: need at least 512 grid points, have " +
                                std::to_string(k.size()));
  if (!(max_lag > 0.0)) throw std::invalid_argument("autocorrelation: max_lag must be > 0");

  const std::size_t n = k.size();
  const double h = (k.back() - k.front()) / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw std::invalid_argument("autocorrelation: grid must be increasing");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (std::abs((k[i + 1] - k[i]) - h) > 1e-9 * h)
      throw std::invalid_argument("autocorrelation: grid must be uniform");

  const double m = mean(t_squared);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = t_squared[i] - m;

  NeumaierSum var_sum;
  for (double d : dev) var_sum.add(d * d);
  const double variance = var_sum.value() / static_cast<double>(n);
  const double scale = std::max(1.0, m * m);
  if (variance <= 1e-24 * scale)
    throw degenerate_signal_error("autocorrelation: signal variance is numerically zero");

  std::size_t max_shift = static_cast<std::size_t>(std::floor(max_lag / h + 1e-9));
  max_shift = std::min(max_shift, n - 2);

  Autocorrelation out;
  out.lags.resize(max_shift + 1);
  out.values.resize(max_shift + 1);
  for (std::size_t j = 0; j <= max_shift; ++j) {
    NeumaierSum acc;
    for (std::size_t i = 0; i + j < n; ++i) acc.add(dev[i] * dev[i + j]);
    out.lags[j] = static_cast<double>(j) * h;
    out.values[j] = acc.value() / static_cast<double>(n - j) / variance;
  }

  out.half_width = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 1; j <= max_shift; ++j) {
    if (out.values[j] < 0.5 && out.values[j - 1] >= 0.5) {
      const double frac = (out.values[j - 1] - 0.5) / (out.values[j - 1] - out.values[j]);
      out.half_width = (static_cast<double>(j - 1) + frac) * h;
      break;
    }
  }
  return out;
}

}  // namespace siwire
