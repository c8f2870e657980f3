// eegctc/features.hpp

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

#ifndef EEGCTC_FEATURES_HPP_
#define EEGCTC_FEATURES_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "eegctc/signal.hpp"
#include "eegctc/types.hpp"

namespace eegctc {

/// Frames [time x dim] at a fixed frame rate. Entries are always finite.
class FeatureSequence {
 public:
  FeatureSequence() = default;
  FeatureSequence(FramesXd frames, double frame_rate_hz, std::string descriptor);

  const FramesXd& frames() const { return frames_; }
  double frame_rate_hz() const { return frame_rate_hz_; }
  const std::string& descriptor() const { return descriptor_; }
  Index length() const { return frames_.rows(); }
  Index dim() const { return frames_.cols(); }

 private:
  FramesXd frames_;
  double frame_rate_hz_ = 100.0;
  std::string descriptor_;
};

enum class WindowFeature {
  kRms,
  kZeroCrossingRate,
  kMovingWindowAverage,
  kKurtosis,
  kSpectralEntropy,
};

std::string to_string(WindowFeature feature);
WindowFeature window_feature_from_string(const std::string& name);

struct FeatureBankSpec {
  std::vector<WindowFeature> per_channel_features;
  double window_ms = 50.0;
  double hop_ms = 10.0;

  void validate() const;
};

/// Named banks: 1 is all five features per channel, 2 and 3 the first three.
FeatureBankSpec feature_set(int index);

/// Column layout is channel-major: column c * F + f is feature f of channel c.
FeatureSequence extract_eeg_features(const MultiChannelSignal& signal,
                                     const FeatureBankSpec& spec);

struct MfccOptions {
  double pre_emphasis = 0.97;
  Index fft_size = 512;
  Index mel_bands = 26;
  double low_hz = 0.0;
  double high_hz = 8000.0;
  double log_floor = 1e-10;
  double required_sample_rate_hz = 16000.0;
};

FeatureSequence extract_mfcc(const MultiChannelSignal& audio, Index num_coeffs,
                             double window_ms = 25.0, double hop_ms = 10.0,
                             const MfccOptions& options = {});

/// [static | delta | delta-delta] with regression half-window `half_window`
/// and edge replication.
FeatureSequence append_deltas(const FeatureSequence& features, Index half_window = 2);

/// Frame-wise [a | b], truncated to the shorter sequence.
FeatureSequence concat_features(const FeatureSequence& a, const FeatureSequence& b);

MultiChannelSignal select_channels(const MultiChannelSignal& signal,
                                   const std::vector<std::string>& names);

/// Block-average decimation of a (preprocessed) recording to frames at
/// `frame_rate_hz`; the input for the raw-signal front end.
FeatureSequence raw_frames(const MultiChannelSignal& signal, double frame_rate_hz = 100.0);

// Feature file: u64 frames, u64 dim, f64 frame rate, u64 descriptor length,
// descriptor bytes, then frame-major f64 values; all little-endian.
void write_features(const std::filesystem::path& path, const FeatureSequence& features);
FeatureSequence read_features(const std::filesystem::path& path);

}  // namespace eegctc

#endif  // EEGCTC_FEATURES_HPP_
