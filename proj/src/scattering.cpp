#include "siwire/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "siwire/compensated.hpp"
#include "siwire/errors.hpp"

namespace siwire {

using cplx = std::complex<double>;

namespace {

void require_positive_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("momentum k must be positive and finite");
}

cplx unit_phase(double arg) { return {std::cos(arg), std::sin(arg)}; }

// gamma^n as |gamma0|-signed real power times the accumulated phase.
cplx gamma_pow(const Coupling& c, int n) {
  return std::pow(c.gamma0(), n) * unit_phase(static_cast<double>(n) * c.phi());
}

// Applies fn(length, alternating_sum) to every strictly decreasing index
// chain over s, the empty chain included. Bit b of the mask selects s[b];
// visiting bits high to low walks the chain in decreasing order, signs
// alternating from +. Mask order is fixed, which keeps every sum over these
// chains reproducible.
template <typename F>
void for_each_chain(std::span<const double> s, F&& fn) {
  const int n = static_cast<int>(s.size());
  const std::uint32_t end = 1u << n;
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    double a = 0.0;
    double sign = 1.0;
    int len = 0;
    for (int b = n - 1; b >= 0; --b) {
      if (mask & (1u << b)) {
        a += sign * s[static_cast<std::size_t>(b)];
        sign = -sign;
        ++len;
      }
    }
    fn(len, a);
  }
}

// Left-incident (T, R) by composing one defect at a time from the right.
std::pair<cplx, cplx> compose_left_right(const Coupling& c, std::span<const double> pos,
                                         double k) {
  const double beta = c.beta();
  const cplx gamma = c.gamma();
  cplx t = 1.0;
  cplx r = 0.0;
  for (std::size_t i = pos.size(); i-- > 0;) {
    const cplx r1 = beta * unit_phase(2.0 * k * pos[i]);
    const cplx denom = 1.0 + std::conj(r1) * r;
    if (std::abs(denom) < kDenominatorFloor)
      throw degeneracy_error("recursive composition: denominator below " +
                             std::to_string(kDenominatorFloor) + " at k = " +
                             std::to_string(k));
    t = gamma * t / denom;
    r = (r1 + r) / denom;
  }
  return {t, r};
}

struct Mat2 {
  cplx a11{1.0}, a12{0.0}, a21{0.0}, a22{1.0};
};

Mat2 multiply(const Mat2& l, const Mat2& r) {
  return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
          l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
}

}  // namespace

double ScatteringAmplitudes::unitarity_defect() const {
  const double left = std::abs(std::norm(T) + std::norm(R) - 1.0);
  const double right = std::abs(std::norm(Tp) + std::norm(Rp) - 1.0);
  const double sym = std::abs(std::abs(T) - std::abs(Tp));
  return std::max({left, right, sym});
}

double max_amplitude_difference(const ScatteringAmplitudes& a,
                                const ScatteringAmplitudes& b) {
  return std::max({std::abs(a.T - b.T), std::abs(a.R - b.R), std::abs(a.Tp - b.Tp),
                   std::abs(a.Rp - b.Rp)});
}

ScatteringAmplitudes single_defect_amplitudes(const Coupling& c, double s, double k) {
  require_positive_k(k);
  const cplx t = c.gamma();
  const cplx r = c.beta() * unit_phase(2.0 * k * s);
  return {k, t, r, std::conj(t), -std::conj(r)};
}

ScatteringAmplitudes recursive_amplitudes(const Coupling& c, const DefectArray& d,
                                          double k) {
  require_positive_k(k);
  const auto [t, r] = compose_left_right(c, d.positions(), k);
  const auto rev = d.reversed();
  const auto [tr, rr] = compose_left_right(c, rev, k);
  return {k, t, r, std::conj(tr), -std::conj(rr)};
}

ClosedFormEvaluator::ClosedFormEvaluator(const Coupling& c,
                                         std::span<const double> positions)
    : n_(static_cast<int>(positions.size())),
      positions_(positions.begin(), positions.end()),
      tabulated_(n_ <= kFrequencyMaxDefects) {
  if (n_ > kClosedFormMaxDefects)
    throw std::invalid_argument("closed form: capacity is N <= 24, got N = " +
                                std::to_string(n_));
  beta_pow_.resize(static_cast<std::size_t>(n_) + 1);
  beta_pow_[0] = 1.0;
  for (int l = 1; l <= n_; ++l)
    beta_pow_[static_cast<std::size_t>(l)] = beta_pow_[static_cast<std::size_t>(l - 1)] * c.beta();

  if (!tabulated_) return;
  const std::size_t half = n_ == 0 ? 1 : (1ull << (n_ - 1));
  d_coef_.reserve(half);
  d_arg_.reserve(half);
  b_coef_.reserve(half);
  b_arg_.reserve(half);
  for_each_chain(positions_, [&](int len, double a) {
    const double coef = beta_pow_[static_cast<std::size_t>(len)];
    if (len % 2 == 0) {
      d_coef_.push_back(coef);
      d_arg_.push_back(a);
    } else {
      b_coef_.push_back(coef);
      b_arg_.push_back(a);
    }
  });
}

std::pair<cplx, cplx> ClosedFormEvaluator::evaluate(double k) const {
  ComplexNeumaierSum b, d;
  if (tabulated_) {
    for (std::size_t i = 0; i < b_coef_.size(); ++i)
      b.add(b_coef_[i] * unit_phase(2.0 * k * b_arg_[i]));
    for (std::size_t i = 0; i < d_coef_.size(); ++i)
      d.add(d_coef_[i] * unit_phase(2.0 * k * d_arg_[i]));
  } else {
    for_each_chain(positions_, [&](int len, double a) {
      const cplx term = beta_pow_[static_cast<std::size_t>(len)] * unit_phase(2.0 * k * a);
      if (len % 2 == 0)
        d.add(term);
      else
        b.add(term);
    });
  }
  return {b.value(), d.value()};
}

ClosedFormAmplitudeEvaluator::ClosedFormAmplitudeEvaluator(const Coupling& c,
                                                           const DefectArray& d)
    : coupling_(c),
      forward_(c, d.positions()),
      backward_(c, d.reversed()) {}

ScatteringAmplitudes ClosedFormAmplitudeEvaluator::operator()(double k) const {
  require_positive_k(k);
  const auto [b_fwd, d_fwd] = forward_.evaluate(k);
  const auto [b_rev, d_rev] = backward_.evaluate(k);
  if (std::abs(d_fwd) < kDenominatorFloor || std::abs(d_rev) < kDenominatorFloor)
    throw degeneracy_error("closed form: |D_N| below " + std::to_string(kDenominatorFloor) +
                           " at k = " + std::to_string(k));
  const cplx gn = gamma_pow(coupling_, forward_.defect_count());
  return {k, gn / d_fwd, b_fwd / d_fwd, std::conj(gn / d_rev), -std::conj(b_rev / d_rev)};
}

ScatteringAmplitudes closed_form_amplitudes(const Coupling& c, const DefectArray& d,
                                            double k) {
  return ClosedFormAmplitudeEvaluator(c, d)(k);
}

ScatteringAmplitudes transfer_matrix_amplitudes(const Coupling& c, const DefectArray& d,
                                                double k) {
  require_positive_k(k);
  const double alpha = c.alpha();
  const double u = 0.5 * (1.0 / alpha + alpha);
  const double v = 0.5 * (1.0 / alpha - alpha);
  const cplx phase = unit_phase(c.phi());

  // Right-to-left product: the defect hit last by a left-moving wave is the
  // leftmost factor applied first, so total = M(s_N) ... M(s_1).
  Mat2 total;
  for (double s : d.positions()) {
    const cplx e = unit_phase(2.0 * k * s);
    const Mat2 m{phase * u, phase * v / e, phase * v * e, phase * u};
    total = multiply(m, total);
  }

  // Left incidence (A,B)_left = (1, -R), (A,B)_right = (T, 0); right
  // incidence (0, T') -> (-R', 1). |T'| = 1/|M22| <= 1 keeps M22 away from 0.
  const cplx t = total.a11 - total.a12 * total.a21 / total.a22;
  const cplx r = total.a21 / total.a22;
  const cplx tp = 1.0 / total.a22;
  const cplx rp = -total.a12 / total.a22;
  return {k, t, r, tp, rp};
}

ClosedFormTerms enumerate_frequencies(const Coupling& c, const DefectArray& d) {
  const int n = static_cast<int>(d.size());
  if (n < 1 || n > kFrequencyMaxDefects)
    throw std::invalid_argument("enumerate_frequencies: capacity is 1 <= N <= 20, got N = " +
                                std::to_string(n));

  std::vector<double> beta_pow(static_cast<std::size_t>(n) + 1, 1.0);
  for (int l = 1; l <= n; ++l)
    beta_pow[static_cast<std::size_t>(l)] = beta_pow[static_cast<std::size_t>(l - 1)] * c.beta();

  std::vector<FrequencyTerm> b_raw, d_raw;
  b_raw.reserve(1ull << (n - 1));
  d_raw.reserve(1ull << (n - 1));
  for_each_chain(d.positions(), [&](int len, double a) {
    const FrequencyTerm term{2.0 * a, beta_pow[static_cast<std::size_t>(len)]};
    (len % 2 == 0 ? d_raw : b_raw).push_back(term);
  });

  const auto merged = [](std::vector<FrequencyTerm> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const FrequencyTerm& x, const FrequencyTerm& y) {
                return x.frequency < y.frequency;
              });
    std::vector<FrequencyTerm> out;
    out.reserve(terms.size());
    for (const auto& t : terms) {
      if (!out.empty() && t.frequency - out.back().frequency <= 1e-12)
        out.back().coefficient += t.coefficient;
      else
        out.push_back(t);
    }
    return out;
  };

  return {merged(std::move(b_raw)), merged(std::move(d_raw))};
}

}  // namespace siwire
