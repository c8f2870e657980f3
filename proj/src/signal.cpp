// src/signal.cpp

// Copyright 2026  The eegctc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "eegctc/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eegctc/error.hpp"

namespace eegctc {

namespace {

using Complex = std::complex<double>;

VectorXd convolve(const VectorXd& a, const VectorXd& b) {
  VectorXd out = VectorXd::Zero(a.size() + b.size() - 1);
  for (Index i = 0; i < a.size(); ++i) out.segment(i, b.size()) += a[i] * b;
  return out;
}

std::vector<Complex> polynomial_roots(const VectorXd& coeffs) {
  // coeffs in powers of z^-1 with coeffs[0] == 1; roots in z.
  const Index degree = coeffs.size() - 1;
  if (degree <= 0) return {};
  if (degree == 1) return {Complex(-coeffs[1], 0.0)};
  MatrixXd companion = MatrixXd::Zero(degree, degree);
  companion.row(0) = -coeffs.tail(degree).transpose();
  companion.diagonal(-1).setOnes();
  Eigen::EigenSolver<MatrixXd> solver(companion, false);
  const auto& ev = solver.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

// Evaluates sum_k c_k w^k with w = e^{-j omega} by Horner's rule.
Complex evaluate_polynomial(const VectorXd& coeffs, Complex w) {
  Complex acc(0.0, 0.0);
  for (Index k = coeffs.size() - 1; k >= 0; --k) acc = acc * w + coeffs[k];
  return acc;
}

// Steady-state initial conditions of a transposed direct-form II section
// for a unit step input.
VectorXd section_initial_state(const FilterSection& s) {
  const Index n = std::max(s.numerator.size(), s.denominator.size()) - 1;
  if (n == 0) return VectorXd();
  VectorXd b = VectorXd::Zero(n + 1), a = VectorXd::Zero(n + 1);
  b.head(s.numerator.size()) = s.numerator;
  a.head(s.denominator.size()) = s.denominator;
  MatrixXd companion = MatrixXd::Zero(n, n);
  companion.row(0) = -a.tail(n).transpose();
  if (n > 1) companion.diagonal(-1).setOnes();
  const MatrixXd i_minus_a = MatrixXd::Identity(n, n) - companion.transpose();
  const VectorXd rhs = b.tail(n) - a.tail(n) * b[0];
  return i_minus_a.partialPivLu().solve(rhs);
}

// In-place transposed direct-form II filtering of x with state z.
void filter_section(const FilterSection& s, VectorXd& state, Eigen::Ref<VectorXd> x) {
  const Index n = state.size();
  VectorXd b = VectorXd::Zero(n + 1), a = VectorXd::Zero(n + 1);
  b.head(s.numerator.size()) = s.numerator;
  a.head(s.denominator.size()) = s.denominator;
  for (Index t = 0; t < x.size(); ++t) {
    const double in = x[t];
    if (n == 0) {
      x[t] = b[0] * in;
      continue;
    }
    const double out = b[0] * in + state[0];
    for (Index i = 0; i + 1 < n; ++i)
      state[i] = b[i + 1] * in + state[i + 1] - a[i + 1] * out;
    state[n - 1] = b[n] * in - a[n] * out;
    x[t] = out;
  }
}

void cascade(const IirFilter& filter, const std::vector<VectorXd>& zi,
             Eigen::Ref<VectorXd> x) {
  const double x0 = x.size() > 0 ? x[0] : 0.0;
  const auto& sections = filter.sections();
  for (std::size_t i = 0; i < sections.size(); ++i) {
    VectorXd state = zi[i] * x0;
    filter_section(sections[i], state, x);
  }
}

}  // namespace

MultiChannelSignal::MultiChannelSignal(FramesXd samples, double sample_rate_hz,
                                       std::vector<std::string> channel_names)
    : samples_(std::move(samples)),
      sample_rate_hz_(sample_rate_hz),
      channel_names_(std::move(channel_names)) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_))
    fail(ErrorKind::kConfig, "sample rate must be positive");
  if (static_cast<Index>(channel_names_.size()) != samples_.rows())
    fail(ErrorKind::kShape, "channel name count " +
                                std::to_string(channel_names_.size()) +
                                " does not match channel count " +
                                std::to_string(samples_.rows()));
}

bool operator==(const MultiChannelSignal& a, const MultiChannelSignal& b) {
  return a.sample_rate_hz_ == b.sample_rate_hz_ &&
         a.channel_names_ == b.channel_names_ &&
         a.samples_.rows() == b.samples_.rows() &&
         a.samples_.cols() == b.samples_.cols() &&
         (a.samples_.array() == b.samples_.array()).all();
}

IirFilter::IirFilter(std::vector<FilterSection> sections, std::string descriptor)
    : sections_(std::move(sections)), descriptor_(std::move(descriptor)) {
  if (sections_.empty()) fail(ErrorKind::kDesign, "filter has no sections");
  for (auto& s : sections_) {
    if (s.numerator.size() == 0 || s.denominator.size() == 0)
      fail(ErrorKind::kDesign, "empty coefficient list");
    const double lead = s.denominator[0];
    if (lead == 0.0) fail(ErrorKind::kDesign, "leading denominator coefficient is 0");
    s.numerator /= lead;
    s.denominator /= lead;
    for (const Complex& p : polynomial_roots(s.denominator))
      if (!(std::abs(p) < 1.0))
        fail(ErrorKind::kDesign, "unstable filter: pole modulus " +
                                     std::to_string(std::abs(p)));
  }
}

IirFilter IirFilter::from_coefficients(VectorXd numerator, VectorXd denominator,
                                       std::string descriptor) {
  return IirFilter({FilterSection{std::move(numerator), std::move(denominator)}},
                   std::move(descriptor));
}

VectorXd IirFilter::numerator() const {
  VectorXd acc = VectorXd::Ones(1);
  for (const auto& s : sections_) acc = convolve(acc, s.numerator);
  return acc;
}

VectorXd IirFilter::denominator() const {
  VectorXd acc = VectorXd::Ones(1);
  for (const auto& s : sections_) acc = convolve(acc, s.denominator);
  return acc;
}

std::vector<Complex> IirFilter::poles() const {
  std::vector<Complex> out;
  for (const auto& s : sections_) {
    const auto roots = polynomial_roots(s.denominator);
    out.insert(out.end(), roots.begin(), roots.end());
  }
  return out;
}

Index IirFilter::order() const {
  Index total = 0;
  for (const auto& s : sections_)
    total += std::max(s.numerator.size(), s.denominator.size()) - 1;
  return total;
}

IirFilter design_bandpass(double low_hz, double high_hz, int order,
                          double sample_rate_hz) {
  const double nyquist = sample_rate_hz / 2.0;
  if (!(sample_rate_hz > 0.0))
    fail(ErrorKind::kDesign, "sample rate must be positive");
  if (order < 1) fail(ErrorKind::kDesign, "band-pass order must be >= 1");
  if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < nyquist)) {
    std::ostringstream msg;
    msg << "band-pass cutoffs must satisfy 0 < low < high < " << nyquist
        << " Hz, got " << low_hz << " and " << high_hz;
    fail(ErrorKind::kDesign, msg.str());
  }

  const double pi = std::numbers::pi;
  const double k = 2.0 * sample_rate_hz;
  const double warped_low = k * std::tan(pi * low_hz / sample_rate_hz);
  const double warped_high = k * std::tan(pi * high_hz / sample_rate_hz);
  const double bandwidth = warped_high - warped_low;
  const double center_sq = warped_low * warped_high;

  auto bilinear = [k](Complex s) { return (k + s) / (k - s); };
  auto section_from = [](Complex z1, Complex z2) {
    FilterSection s;
    s.numerator = VectorXd(3);
    s.numerator << 1.0, 0.0, -1.0;
    s.denominator = VectorXd(3);
    s.denominator << 1.0, -(z1 + z2).real(), (z1 * z2).real();
    return s;
  };

  std::vector<FilterSection> sections;
  for (int i = 0; i < (order + 1) / 2; ++i) {
    const double theta = (2.0 * i + 1.0) * pi / (2.0 * order);
    const Complex proto(-std::sin(theta), std::cos(theta));
    // Low-pass to band-pass: each prototype pole splits into two.
    const Complex half = proto * bandwidth / 2.0;
    const Complex root = std::sqrt(half * half - center_sq);
    const Complex z1 = bilinear(half + root);
    const Complex z2 = bilinear(half - root);
    if (2 * i + 1 == order) {
      // Real prototype pole: its two band-pass poles form one real section.
      sections.push_back(section_from(z1, z2));
    } else {
      sections.push_back(section_from(z1, std::conj(z1)));
      sections.push_back(section_from(z2, std::conj(z2)));
    }
  }

  // Unit gain at the digital image of the geometric center frequency.
  const double center_hz =
      sample_rate_hz / pi * std::atan(std::sqrt(center_sq) / k);
  const Complex w = std::polar(1.0, -2.0 * pi * center_hz / sample_rate_hz);
  Complex response(1.0, 0.0);
  for (const auto& s : sections)
    response *= evaluate_polynomial(s.numerator, w) /
                evaluate_polynomial(s.denominator, w);
  const double gain = std::pow(1.0 / std::abs(response),
                               1.0 / static_cast<double>(sections.size()));
  for (auto& s : sections) s.numerator *= gain;

  std::ostringstream descriptor;
  descriptor << "butterworth-bandpass order=" << order << " low_hz=" << low_hz
             << " high_hz=" << high_hz << " fs=" << sample_rate_hz;
  return IirFilter(std::move(sections), descriptor.str());
}

IirFilter design_notch(double center_hz, double quality, double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0))
    fail(ErrorKind::kDesign, "sample rate must be positive");
  if (!(center_hz > 0.0 && center_hz < sample_rate_hz / 2.0)) {
    std::ostringstream msg;
    msg << "notch center " << center_hz << " Hz must lie in (0, "
        << sample_rate_hz / 2.0 << ") Hz";
    fail(ErrorKind::kDesign, msg.str());
  }
  if (!(quality > 0.0)) fail(ErrorKind::kDesign, "notch quality must be positive");

  const double omega = 2.0 * std::numbers::pi * center_hz / sample_rate_hz;
  const double beta = std::tan(omega / quality / 2.0);
  const double gain = 1.0 / (1.0 + beta);
  FilterSection s;
  s.numerator = VectorXd(3);
  s.numerator << gain, -2.0 * gain * std::cos(omega), gain;
  s.denominator = VectorXd(3);
  s.denominator << 1.0, -2.0 * gain * std::cos(omega), 2.0 * gain - 1.0;

  std::ostringstream descriptor;
  descriptor << "notch center_hz=" << center_hz << " q=" << quality
             << " fs=" << sample_rate_hz;
  return IirFilter({s}, descriptor.str());
}

MultiChannelSignal apply_filter(const MultiChannelSignal& signal,
                                const IirFilter& filter) {
  const Index pad = 3 * filter.order();
  const Index n = signal.length();
  if (n <= pad)
    fail(ErrorKind::kLength, "signal of " + std::to_string(n) +
                                 " samples is too short for edge padding of " +
                                 std::to_string(pad));

  std::vector<VectorXd> zi;
  double scale = 1.0;
  for (const auto& s : filter.sections()) {
    zi.push_back(section_initial_state(s) * scale);
    scale *= s.numerator.sum() / s.denominator.sum();
  }

  FramesXd out(signal.channels(), n);
  VectorXd work(n + 2 * pad);
  for (Index c = 0; c < signal.channels(); ++c) {
    const auto x = signal.samples().row(c);
    // Odd reflection about the end samples.
    for (Index i = 0; i < pad; ++i) {
      work[i] = 2.0 * x[0] - x[pad - i];
      work[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
    }
    work.segment(pad, n) = x.transpose();
    cascade(filter, zi, work);
    work.reverseInPlace();
    cascade(filter, zi, work);
    work.reverseInPlace();
    out.row(c) = work.segment(pad, n).transpose();
  }
  return MultiChannelSignal(std::move(out), signal.sample_rate_hz(),
                            signal.channel_names());
}

std::vector<Complex> frequency_response(const IirFilter& filter,
                                        const std::vector<double>& freqs_hz,
                                        double sample_rate_hz) {
  std::vector<Complex> out;
  out.reserve(freqs_hz.size());
  for (double f : freqs_hz) {
    if (!(f >= 0.0 && f <= sample_rate_hz / 2.0))
      fail(ErrorKind::kDomain, "frequency " + std::to_string(f) +
                                   " Hz outside [0, Nyquist]");
    const Complex w = f == 0.0 ? Complex(1.0, 0.0)
                               : std::polar(1.0, -2.0 * std::numbers::pi * f /
                                                     sample_rate_hz);
    Complex h(1.0, 0.0);
    for (const auto& s : filter.sections())
      h *= evaluate_polynomial(s.numerator, w) /
           evaluate_polynomial(s.denominator, w);
    out.push_back(h);
  }
  return out;
}

ArtifactHooks::ArtifactHooks() {
  hooks_["none"] = [](const MultiChannelSignal& s) { return s; };
}

void ArtifactHooks::register_hook(const std::string& name, ArtifactHook hook) {
  if (name == "none") fail(ErrorKind::kConfig, "hook 'none' is reserved");
  hooks_[name] = std::move(hook);
}

bool ArtifactHooks::contains(const std::string& name) const {
  return hooks_.count(name) > 0;
}

MultiChannelSignal ArtifactHooks::apply(const MultiChannelSignal& signal,
                                        const std::string& name) const {
  const auto it = hooks_.find(name);
  if (it == hooks_.end())
    fail(ErrorKind::kConfig, "no artifact-removal hook named '" + name + "'");
  return it->second(signal);
}

MultiChannelSignal remove_artifacts(const MultiChannelSignal& signal,
                                    const std::string& method,
                                    const ArtifactHooks& hooks) {
  return hooks.apply(signal, method);
}

MultiChannelSignal preprocess_eeg(const MultiChannelSignal& signal,
                                  const PreprocessOptions& options,
                                  const ArtifactHooks& hooks) {
  const double fs = signal.sample_rate_hz();
  auto out = apply_filter(signal, design_bandpass(options.bandpass_low_hz,
                                                  options.bandpass_high_hz,
                                                  options.bandpass_order, fs));
  out = apply_filter(out, design_notch(options.notch_hz, options.notch_quality, fs));
  return remove_artifacts(out, options.artifact_method, hooks);
}

}  // namespace eegctc
