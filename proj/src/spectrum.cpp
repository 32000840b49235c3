#include "siwire/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "siwire/compensated.hpp"
#include "siwire/scattering.hpp"

namespace siwire {

namespace {

constexpr double kPi = std::numbers::pi;

// Smooth counting estimate: N(k) ~ 2Lk/pi for a Dirichlet box of length 2L;
// scale-invariant defects shift it by O(1) each.
double weyl_count(double half_length, double k) { return 2.0 * half_length * k / kPi; }

struct Bracket {
  double lo, hi;
  double f_lo, f_hi;
};

// Midpoint bisection run to the floating-point floor; the interval collapses
// once the midpoint stops being distinct from both ends (~52 steps). Returns
// the endpoint with the smaller |f|.
double bisect_to_machine(const std::function<double(double)>& f, Bracket br) {
  double a = br.lo, b = br.hi, fa = br.f_lo, fb = br.f_hi;
  while (true) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

// Brent-style scalar minimization of sign*f on [lo, hi] (golden section with
// parabolic steps). Used on same-sign dips: a pair of roots hiding inside a
// grid cell shows up as a dip whose true minimum is negative, which a plain
// sign-change scan cannot see. Bails out as soon as any iterate goes
// negative, which is all the caller needs.
std::pair<double, double> minimize_dip(const std::function<double(double)>& f, double lo,
                                       double hi, double sign) {
  constexpr double golden = 0.3819660112501051;
  constexpr int max_iter = 120;
  const double eps = 1e-13;

  double a = lo, b = hi;
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = sign * f(x);
  if (fx < 0.0) return {x, fx};
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;

  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    const double tol = eps * std::abs(x) + 1e-300;
    const double tol2 = 2.0 * tol;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool use_golden = true;
    if (std::abs(e) > tol) {
      // parabola through x, v, w
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_old = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m > x) ? tol : -tol;
        use_golden = false;
      }
    }
    if (use_golden) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }

    const double u = (std::abs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
    const double fu = sign * f(u);
    if (fu < 0.0) return {u, fu};

    if (fu <= fx) {
      if (u < x)
        b = x;
      else
        a = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, fx};
}

// One bracketing pass over [lo, hi] with the requested step: samples the
// function, bisects every sign change, and chases same-sign dips.
std::vector<double> scan_segment(const std::function<double(double)>& f, double lo,
                                 double hi, double step, bool parallel) {
  std::vector<double> roots;
  if (!(hi > lo)) return roots;

  const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
  const int n = cells + 1;
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> fs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / cells;
  xs.back() = hi;

#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < n; ++i)
    fs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);

  std::vector<Bracket> brackets;
  for (int i = 0; i + 1 < n; ++i) {
    const double fa = fs[static_cast<std::size_t>(i)];
    const double fb = fs[static_cast<std::size_t>(i + 1)];
    if (fa == 0.0) {
      roots.push_back(xs[static_cast<std::size_t>(i)]);
      continue;
    }
    if (fb == 0.0) continue;  // handled as the next cell's left edge
    if ((fa < 0.0) != (fb < 0.0))
      brackets.push_back({xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(i + 1)], fa, fb});
  }

  // Same-sign dip: |f| has an interior minimum without a crossing on the
  // grid. Minimize into it; a negative minimum splits into two brackets.
  for (int i = 1; i + 1 < n; ++i) {
    const double fa = fs[static_cast<std::size_t>(i - 1)];
    const double fb = fs[static_cast<std::size_t>(i)];
    const double fc = fs[static_cast<std::size_t>(i + 1)];
    if (fa == 0.0 || fb == 0.0 || fc == 0.0) continue;
    const bool same_sign = ((fa < 0.0) == (fb < 0.0)) && ((fb < 0.0) == (fc < 0.0));
    if (!same_sign) continue;
    if (!(std::abs(fb) <= std::abs(fa) && std::abs(fb) <= std::abs(fc))) continue;
    const double sign = (fb < 0.0) ? -1.0 : 1.0;
    const auto [k_dip, f_dip] =
        minimize_dip(f, xs[static_cast<std::size_t>(i - 1)], xs[static_cast<std::size_t>(i + 1)], sign);
    if (f_dip < 0.0) {
      const double fd = sign * f_dip;
      brackets.push_back({xs[static_cast<std::size_t>(i - 1)], k_dip, fa, fd});
      brackets.push_back({k_dip, xs[static_cast<std::size_t>(i + 1)], fd, fc});
    }
  }

  std::vector<double> bracket_roots(brackets.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(brackets.size()); ++i)
    bracket_roots[static_cast<std::size_t>(i)] =
        bisect_to_machine(f, brackets[static_cast<std::size_t>(i)]);

  roots.insert(roots.end(), bracket_roots.begin(), bracket_roots.end());
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

// Cumulative count vs Weyl estimate, checked on both sides of every root and
// at the ceiling. Returns the k past which the count first goes irreconcilable
// (so the caller rescans the whole prefix: the check is cumulative and the
// deficit may have accumulated anywhere below), or +inf when consistent.
double first_weyl_violation(const std::vector<double>& roots, double half_length,
                            double k_max, double slack) {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double nu = weyl_count(half_length, roots[i]);
    if (std::abs(static_cast<double>(i) - nu) > slack ||
        std::abs(static_cast<double>(i + 1) - nu) > slack)
      return roots[i];
  }
  const double nu_end = weyl_count(half_length, k_max);
  if (std::abs(static_cast<double>(roots.size()) - nu_end) > slack) return k_max;
  return std::numeric_limits<double>::infinity();
}

// Sign parity between consecutive roots: f evaluated halfway between
// neighbors must alternate, otherwise an even number of roots is hiding
// there. Returns the offending midpoint windows.
std::vector<std::pair<double, double>> parity_violation_windows(
    const std::function<double(double)>& f, const std::vector<double>& roots,
    double keep_degenerate_gap) {
  std::vector<std::pair<double, double>> windows;
  if (roots.size() < 3) return windows;
  std::vector<double> mids(roots.size() - 1);
  std::vector<double> fmids(roots.size() - 1);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    mids[i] = 0.5 * (roots[i] + roots[i + 1]);
    fmids[i] = f(mids[i]);
  }
  for (std::size_t i = 0; i + 1 < mids.size(); ++i) {
    if (fmids[i] == 0.0 || fmids[i + 1] == 0.0) continue;
    // a kept near-degenerate pair leaves no headroom for a meaningful sign
    if (roots[i + 1] - roots[i] < keep_degenerate_gap ||
        roots[i + 2] - roots[i + 1] < keep_degenerate_gap)
      continue;
    if ((fmids[i] < 0.0) == (fmids[i + 1] < 0.0)) windows.emplace_back(mids[i], mids[i + 1]);
  }
  return windows;
}

Spectrum run_root_search(const std::function<double(double)>& f, double half_length,
                         int n_defects, double k_max, const FindSpectrumOptions& opts) {
  if (!(k_max > 0.0) || !std::isfinite(k_max))
    throw std::invalid_argument("find_spectrum: k_max must be positive and finite");
  if (opts.grid_per_mean_spacing < 1)
    throw std::invalid_argument("find_spectrum: grid_per_mean_spacing must be >= 1");

  const double mean_spacing = kPi / (2.0 * half_length);
  double step = mean_spacing / opts.grid_per_mean_spacing;
  const double k_start = std::min(step, k_max) * 1e-6;
  const double slack = static_cast<double>(n_defects) + 2.0;
  const double degenerate_gap = 1e-6 * mean_spacing;

  std::vector<double> roots = scan_segment(f, k_start, k_max, step, opts.parallel);

  std::vector<std::pair<double, double>> pending;
  for (int round = 0; round <= opts.max_weyl_rounds; ++round) {
    pending.clear();
    const double weyl_at = first_weyl_violation(roots, half_length, k_max, slack);
    if (std::isfinite(weyl_at))
      pending.emplace_back(k_start, std::min(k_max, weyl_at + 4.0 * mean_spacing));
    auto parity = parity_violation_windows(f, roots, degenerate_gap);
    pending.insert(pending.end(), parity.begin(), parity.end());
    if (pending.empty()) break;
    if (round == opts.max_weyl_rounds) {
      std::vector<double> residuals(roots.size());
      for (std::size_t i = 0; i < roots.size(); ++i) residuals[i] = std::abs(f(roots[i]));
      throw incomplete_spectrum_error(
          "find_spectrum: level count still inconsistent after " +
              std::to_string(opts.max_weyl_rounds) + " refinement rounds",
          std::move(pending), std::move(roots), std::move(residuals));
    }
    step *= 0.5;
    for (const auto& [a, b] : pending) {
      auto found = scan_segment(f, a, b, step, opts.parallel);
      const auto lo = std::lower_bound(roots.begin(), roots.end(), a);
      const auto hi = std::upper_bound(roots.begin(), roots.end(), b);
      const auto at = roots.erase(lo, hi);
      roots.insert(at, found.begin(), found.end());
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  }

  Spectrum out;
  out.k_max = k_max;
  out.roots = std::move(roots);
  out.residuals.resize(out.roots.size());
  for (std::size_t i = 0; i < out.roots.size(); ++i)
    out.residuals[i] = std::abs(f(out.roots[i]));
  return out;
}

// Real (2N+2)x(2N+2) matching system in the sin/cos interval basis
// psi_j = a_j sin(kx) + b_j cos(kx): Dirichlet rows at the walls, one value
// row (scaled by alpha) and one slope row per defect. The basis change from
// complex exponentials multiplies the determinant by a nonzero constant, so
// this is the phase normalization that makes it real with sign changes at
// the eigenvalues.
double matching_determinant(const SpectralProblem& p, double k) {
  const auto& s = p.defects.positions();
  const int n = static_cast<int>(s.size());
  const int dim = 2 * n + 2;
  const double alpha = p.coupling.alpha();
  const double L = p.half_length;

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  m(0, 0) = std::sin(-k * L);
  m(0, 1) = std::cos(-k * L);
  for (int i = 0; i < n; ++i) {
    const double sn = std::sin(k * s[static_cast<std::size_t>(i)]);
    const double cs = std::cos(k * s[static_cast<std::size_t>(i)]);
    const int row_val = 2 * i + 1;
    const int row_der = 2 * i + 2;
    const int left = 2 * i;
    const int right = 2 * i + 2;
    // alpha * psi_+ - psi_- = 0
    m(row_val, right) = alpha * sn;
    m(row_val, right + 1) = alpha * cs;
    m(row_val, left) = -sn;
    m(row_val, left + 1) = -cs;
    // psi'_+ - alpha * psi'_- = 0 (common factor k dropped)
    m(row_der, right) = cs;
    m(row_der, right + 1) = -sn;
    m(row_der, left) = -alpha * cs;
    m(row_der, left + 1) = alpha * sn;
  }
  m(dim - 1, 2 * n) = std::sin(k * L);
  m(dim - 1, 2 * n + 1) = std::cos(k * L);
  return m.partialPivLu().determinant();
}

}  // namespace

SpectralProblem::SpectralProblem(Coupling coupling_, DefectArray defects_, double half_length_)
    : coupling(std::move(coupling_)), defects(std::move(defects_)), half_length(half_length_) {
  if (coupling.phi() != 0.0)
    throw std::invalid_argument("SpectralProblem: the eigenvalue equation holds for phi = 0 only");
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw std::invalid_argument("SpectralProblem: half_length must be positive and finite");
  if (!defects.empty() &&
      (defects.positions().front() <= -half_length || defects.positions().back() >= half_length))
    throw std::invalid_argument("SpectralProblem: defects must lie strictly inside (-L, L)");
}

SpectralFunction::SpectralFunction(const SpectralProblem& p) {
  const int n = static_cast<int>(p.defects.size());
  if (n > kSpectralMaxDefects)
    throw std::invalid_argument("SpectralFunction: capacity is N <= 20, got N = " +
                                std::to_string(n));
  const double beta = p.coupling.beta();
  const double L = p.half_length;

  std::vector<double> beta_pow(static_cast<std::size_t>(n) + 1, 1.0);
  for (int l = 1; l <= n; ++l)
    beta_pow[static_cast<std::size_t>(l)] = beta_pow[static_cast<std::size_t>(l - 1)] * beta;

  coef_.reserve(1ull << n);
  arg_.reserve(1ull << n);
  const auto& s = p.defects.positions();
  const int total = 1 << n;
  for (int mask = 0; mask < total; ++mask) {
    double a = 0.0;
    double sign = 1.0;
    int len = 0;
    for (int b = n - 1; b >= 0; --b) {
      if (mask & (1 << b)) {
        a += sign * s[static_cast<std::size_t>(b)];
        sign = -sign;
        ++len;
      }
    }
    coef_.push_back(beta_pow[static_cast<std::size_t>(len)]);
    arg_.push_back(len % 2 == 0 ? L - a : a);
  }
}

double SpectralFunction::operator()(double k) const {
  NeumaierSum sum;
  for (std::size_t i = 0; i < coef_.size(); ++i)
    sum.add(coef_[i] * std::sin(2.0 * k * arg_[i]));
  return sum.value();
}

double spectral_function(const SpectralProblem& p, double k) {
  if (!(k >= 0.0))
    throw std::invalid_argument("spectral_function: k must be non-negative");
  return SpectralFunction(p)(k);
}

std::complex<double> residual_eq19(const SpectralProblem& p, double k) {
  if (!(k > 0.0))
    throw std::invalid_argument("residual_eq19: k must be positive");
  const auto amps = transfer_matrix_amplitudes(p.coupling, p.defects, k);
  const std::complex<double> wall(std::cos(2.0 * k * p.half_length),
                                  -std::sin(2.0 * k * p.half_length));
  return (amps.R - wall) * (amps.Rp - wall) - amps.T * amps.Tp;
}

Spectrum find_spectrum(const SpectralProblem& p, double k_max,
                       const FindSpectrumOptions& opts) {
  const SpectralFunction f(p);
  return run_root_search([&f](double k) { return f(k); }, p.half_length,
                         static_cast<int>(p.defects.size()), k_max, opts);
}

Spectrum oracle_spectrum(const SpectralProblem& p, double k_max,
                         const FindSpectrumOptions& opts) {
  if (static_cast<int>(p.defects.size()) > kOracleMaxDefects)
    throw std::invalid_argument("oracle_spectrum: dense oracle is limited to N <= 8");
  return run_root_search([&p](double k) { return matching_determinant(p, k); },
                         p.half_length, static_cast<int>(p.defects.size()), k_max, opts);
}

}  // namespace siwire
