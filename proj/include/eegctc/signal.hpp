// eegctc/signal.hpp

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

#ifndef EEGCTC_SIGNAL_HPP_
#define EEGCTC_SIGNAL_HPP_

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "eegctc/types.hpp"

namespace eegctc {

/// Uniformly sampled multichannel recording, [channels x time].
class MultiChannelSignal {
 public:
  MultiChannelSignal() = default;
  MultiChannelSignal(FramesXd samples, double sample_rate_hz,
                     std::vector<std::string> channel_names);

  const FramesXd& samples() const { return samples_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  const std::vector<std::string>& channel_names() const { return channel_names_; }
  Index channels() const { return samples_.rows(); }
  Index length() const { return samples_.cols(); }
  double duration_s() const { return static_cast<double>(length()) / sample_rate_hz_; }

  // Bitwise comparison of samples, rate and names.
  friend bool operator==(const MultiChannelSignal& a, const MultiChannelSignal& b);

 private:
  FramesXd samples_;
  double sample_rate_hz_ = 1.0;
  std::vector<std::string> channel_names_;
};

/// One rational factor of a filter: numerator b and denominator a with a[0] == 1.
struct FilterSection {
  VectorXd numerator;
  VectorXd denominator;
};

/// IIR filter kept as a cascade of sections. Designed filters use
/// second-order sections; expanding them into a single polynomial pair is
/// available but only for inspection.
class IirFilter {
 public:
  /// Normalizes each denominator to a leading 1 and rejects unstable sections.
  IirFilter(std::vector<FilterSection> sections, std::string descriptor);

  /// A single-section filter from transfer-function coefficients.
  static IirFilter from_coefficients(VectorXd numerator, VectorXd denominator,
                                     std::string descriptor = "custom");

  const std::vector<FilterSection>& sections() const { return sections_; }
  const std::string& descriptor() const { return descriptor_; }

  VectorXd numerator() const;
  VectorXd denominator() const;
  std::vector<std::complex<double>> poles() const;
  /// Sum over sections of max(numerator degree, denominator degree).
  Index order() const;

 private:
  std::vector<FilterSection> sections_;
  std::string descriptor_;
};

/// Butterworth band-pass from an analog prototype of `order` poles, giving
/// 2*order digital poles. Cutoffs are pre-warped for the bilinear map.
IirFilter design_bandpass(double low_hz, double high_hz, int order,
                          double sample_rate_hz);

/// Second-order notch, -3 dB bandwidth center_hz / quality.
IirFilter design_notch(double center_hz, double quality, double sample_rate_hz);

/// Zero-phase (forward-backward) filtering of every channel with odd
/// reflection padding of 3 * order samples at both ends.
MultiChannelSignal apply_filter(const MultiChannelSignal& signal,
                                const IirFilter& filter);

/// H(e^{j 2 pi f / fs}) for each f in [0, fs/2].
std::vector<std::complex<double>> frequency_response(
    const IirFilter& filter, const std::vector<double>& freqs_hz,
    double sample_rate_hz);

using ArtifactHook = std::function<MultiChannelSignal(const MultiChannelSignal&)>;

/// Named artifact-removal hooks. "none" is always present and is the identity.
class ArtifactHooks {
 public:
  ArtifactHooks();
  void register_hook(const std::string& name, ArtifactHook hook);
  bool contains(const std::string& name) const;
  MultiChannelSignal apply(const MultiChannelSignal& signal,
                           const std::string& name) const;

 private:
  std::map<std::string, ArtifactHook> hooks_;
};

MultiChannelSignal remove_artifacts(const MultiChannelSignal& signal,
                                    const std::string& method,
                                    const ArtifactHooks& hooks = ArtifactHooks());

/// Band-pass (0.1-70 Hz, order 4) then 60 Hz notch (Q 30), then the
/// artifact hook: the default EEG cleanup chain.
struct PreprocessOptions {
  double bandpass_low_hz = 0.1;
  double bandpass_high_hz = 70.0;
  int bandpass_order = 4;
  double notch_hz = 60.0;
  double notch_quality = 30.0;
  std::string artifact_method = "none";
};

MultiChannelSignal preprocess_eeg(const MultiChannelSignal& signal,
                                  const PreprocessOptions& options = {},
                                  const ArtifactHooks& hooks = ArtifactHooks());

}  // namespace eegctc

#endif  // EEGCTC_SIGNAL_HPP_
