#pragma once

#include <span>
#include <vector>

#include "siwire/spectrum.hpp"

namespace siwire {

/// Nearest-neighbor spacings rescaled to unit mean.
struct SpacingSample {
  std::vector<double> spacings;  // >= 0, sample mean 1
  int n_levels_used = 0;
  int n_discarded_low = 0;
};

/// Drops the first discard_low roots (non-asymptotic edge), takes
/// consecutive differences in k and divides by their mean. A single global
/// mean is the right unfolding here: the smooth counting function is linear
/// in k (density 2L/pi). Requires at least discard_low + 100 roots.
SpacingSample unfold(const Spectrum& spectrum, int discard_low = 50);

/// Wigner surmise (pi/2) s exp(-pi s^2 / 4); unit mass and unit mean.
double wigner_pdf(double s);
/// exp(-s); unit mass and unit mean.
double poisson_pdf(double s);

double wigner_cdf(double s);
double poisson_cdf(double s);

enum class Reference { wigner, poisson };

/// Sup distance between the sample's empirical CDF and the reference CDF.
double ks_distance(const SpacingSample& sample, Reference ref);

struct Histogram {
  std::vector<double> bin_edges;  // size = densities.size() + 1
  std::vector<double> densities;  // integrates to 1
};

/// Density histogram with fixed-width bins from 0. The edge list always
/// covers at least [0, min_range] and is extended by whole bins until the
/// largest sample fits, so the density integrates to 1 exactly.
Histogram spacing_histogram(const SpacingSample& sample, double bin_width = 0.2,
                            double min_range = 4.0);

struct DistributionComparison {
  Histogram histogram;
  double ks_wigner = 0.0;
  double ks_poisson = 0.0;
};

DistributionComparison compare_to_references(const SpacingSample& sample);

struct Autocorrelation {
  std::vector<double> lags;    // 0, h, 2h, ... up to max_lag
  std::vector<double> values;  // C(0) = 1
  double half_width = 0.0;     // first crossing of C = 1/2; NaN if none
};

/// Normalized autocorrelation of the mean-subtracted |T|^2 signal over a
/// uniform k grid (>= 512 points). Throws degenerate_signal_error when the
/// signal variance is numerically zero.
Autocorrelation transmission_autocorrelation(std::span<const double> k,
                                             std::span<const double> t_squared,
                                             double max_lag);

}  // namespace siwire
