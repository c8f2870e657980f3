// src/features.cpp

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

#include "eegctc/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <unordered_map>

#include <unsupported/Eigen/FFT>

#include "eegctc/binary_io.hpp"
#include "eegctc/error.hpp"

namespace eegctc {

namespace {

Index samples_for_ms(double ms, double rate_hz) {
  return static_cast<Index>(std::lround(ms * rate_hz / 1000.0));
}

double mean_of(const Eigen::Ref<const VectorXd>& x) { return x.mean(); }

double rms_of(const Eigen::Ref<const VectorXd>& x) {
  return std::sqrt(x.squaredNorm() / static_cast<double>(x.size()));
}

double zero_crossing_rate(const Eigen::Ref<const VectorXd>& x) {
  if (x.size() < 2) return 0.0;
  Index crossings = 0;
  for (Index i = 0; i + 1 < x.size(); ++i)
    if (x[i] * x[i + 1] < 0.0) ++crossings;
  return static_cast<double>(crossings) / static_cast<double>(x.size() - 1);
}

// Excess kurtosis; 0 for (numerically) constant windows.
double kurtosis(const Eigen::Ref<const VectorXd>& x) {
  const double mu = x.mean();
  const auto centered = (x.array() - mu);
  const double m2 = centered.square().mean();
  if (m2 <= 1e-24 * x.array().square().mean()) return 0.0;
  const double m4 = centered.square().square().mean();
  return m4 / (m2 * m2) - 3.0;
}

// Shannon entropy of the normalized one-sided power spectrum, scaled to [0, 1].
double spectral_entropy(const Eigen::Ref<const VectorXd>& x, Eigen::FFT<double>& fft,
                        std::vector<double>& in,
                        std::vector<std::complex<double>>& spectrum) {
  in.assign(x.data(), x.data() + x.size());
  fft.fwd(spectrum, in);
  const std::size_t bins = in.size() / 2 + 1;
  if (bins < 2) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < bins; ++k) total += std::norm(spectrum[k]);
  if (!(total > 0.0)) return 0.0;
  double entropy = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double p = std::norm(spectrum[k]) / total;
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return entropy / std::log(static_cast<double>(bins));
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular filters [bands x (fft_size/2 + 1)] over linear bin frequencies.
MatrixXd mel_filterbank(Index bands, Index fft_size, double rate_hz, double low_hz,
                        double high_hz) {
  const Index bins = fft_size / 2 + 1;
  VectorXd edges(bands + 2);
  const double mel_low = hz_to_mel(low_hz), mel_high = hz_to_mel(high_hz);
  for (Index i = 0; i < bands + 2; ++i)
    edges[i] = mel_to_hz(mel_low + (mel_high - mel_low) * i / (bands + 1));
  MatrixXd bank = MatrixXd::Zero(bands, bins);
  for (Index m = 0; m < bands; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (Index k = 0; k < bins; ++k) {
      const double f = k * rate_hz / static_cast<double>(fft_size);
      if (f > left && f < center)
        bank(m, k) = (f - left) / (center - left);
      else if (f >= center && f < right)
        bank(m, k) = (right - f) / (right - center);
    }
  }
  return bank;
}

void check_finite(const FramesXd& frames, const std::string& what) {
  if (!frames.allFinite()) fail(ErrorKind::kNumeric, what + " produced non-finite values");
}

}  // namespace

FeatureSequence::FeatureSequence(FramesXd frames, double frame_rate_hz,
                                 std::string descriptor)
    : frames_(std::move(frames)),
      frame_rate_hz_(frame_rate_hz),
      descriptor_(std::move(descriptor)) {
  if (!(frame_rate_hz_ > 0.0) || !std::isfinite(frame_rate_hz_))
    fail(ErrorKind::kConfig, "frame rate must be positive");
  check_finite(frames_, "feature sequence '" + descriptor_ + "'");
}

std::string to_string(WindowFeature feature) {
  switch (feature) {
    case WindowFeature::kRms: return "rms";
    case WindowFeature::kZeroCrossingRate: return "zero_crossing_rate";
    case WindowFeature::kMovingWindowAverage: return "moving_window_average";
    case WindowFeature::kKurtosis: return "kurtosis";
    case WindowFeature::kSpectralEntropy: return "spectral_entropy";
  }
  return "unknown";
}

WindowFeature window_feature_from_string(const std::string& name) {
  static const std::unordered_map<std::string, WindowFeature> kByName = {
      {"rms", WindowFeature::kRms},
      {"zero_crossing_rate", WindowFeature::kZeroCrossingRate},
      {"moving_window_average", WindowFeature::kMovingWindowAverage},
      {"kurtosis", WindowFeature::kKurtosis},
      {"spectral_entropy", WindowFeature::kSpectralEntropy},
  };
  const auto it = kByName.find(name);
  if (it == kByName.end()) fail(ErrorKind::kConfig, "unknown window feature '" + name + "'");
  return it->second;
}

void FeatureBankSpec::validate() const {
  if (per_channel_features.empty())
    fail(ErrorKind::kConfig, "feature bank needs at least one feature");
  if (!(window_ms > 0.0) || !(hop_ms > 0.0))
    fail(ErrorKind::kConfig, "window and hop must be positive");
  if (hop_ms > window_ms) fail(ErrorKind::kConfig, "hop must not exceed the window");
}

FeatureBankSpec feature_set(int index) {
  FeatureBankSpec spec;
  spec.per_channel_features = {WindowFeature::kRms, WindowFeature::kZeroCrossingRate,
                               WindowFeature::kMovingWindowAverage};
  switch (index) {
    case 1:
      spec.per_channel_features.push_back(WindowFeature::kKurtosis);
      spec.per_channel_features.push_back(WindowFeature::kSpectralEntropy);
      break;
    case 2:
    case 3:
      break;
    default:
      fail(ErrorKind::kConfig, "feature set must be 1, 2 or 3");
  }
  return spec;
}

FeatureSequence extract_eeg_features(const MultiChannelSignal& signal,
                                     const FeatureBankSpec& spec) {
  spec.validate();
  const double fs = signal.sample_rate_hz();
  const Index window = samples_for_ms(spec.window_ms, fs);
  const Index hop = samples_for_ms(spec.hop_ms, fs);
  if (window < 1 || hop < 1)
    fail(ErrorKind::kConfig, "window/hop shorter than one sample at this rate");
  if (signal.length() < window)
    fail(ErrorKind::kLength, "signal of " + std::to_string(signal.length()) +
                                 " samples is shorter than one " +
                                 std::to_string(window) + "-sample window");

  const Index frames = (signal.length() - window) / hop + 1;
  const auto& features = spec.per_channel_features;
  const Index per_channel = static_cast<Index>(features.size());
  FramesXd out(frames, signal.channels() * per_channel);

  Eigen::FFT<double> fft;
  std::vector<double> fft_in;
  std::vector<std::complex<double>> fft_out;
  VectorXd x(window);
  for (Index c = 0; c < signal.channels(); ++c) {
    for (Index t = 0; t < frames; ++t) {
      x = signal.samples().row(c).segment(t * hop, window).transpose();
      for (Index f = 0; f < per_channel; ++f) {
        double value = 0.0;
        switch (features[f]) {
          case WindowFeature::kRms: value = rms_of(x); break;
          case WindowFeature::kZeroCrossingRate: value = zero_crossing_rate(x); break;
          case WindowFeature::kMovingWindowAverage: value = mean_of(x); break;
          case WindowFeature::kKurtosis: value = kurtosis(x); break;
          case WindowFeature::kSpectralEntropy:
            value = spectral_entropy(x, fft, fft_in, fft_out);
            break;
        }
        out(t, c * per_channel + f) = value;
      }
    }
  }

  std::string descriptor = "eeg-features";
  for (auto f : features) descriptor += " " + to_string(f);
  descriptor += " window_ms=" + std::to_string(spec.window_ms) +
                " hop_ms=" + std::to_string(spec.hop_ms);
  return FeatureSequence(std::move(out), 1000.0 / spec.hop_ms, descriptor);
}

FeatureSequence extract_mfcc(const MultiChannelSignal& audio, Index num_coeffs,
                             double window_ms, double hop_ms,
                             const MfccOptions& options) {
  if (audio.channels() != 1)
    fail(ErrorKind::kConfig, "MFCC input must be single-channel");
  if (audio.sample_rate_hz() != options.required_sample_rate_hz)
    fail(ErrorKind::kConfig, "MFCC input must be sampled at " +
                                 std::to_string(options.required_sample_rate_hz) +
                                 " Hz, got " + std::to_string(audio.sample_rate_hz()));
  if (num_coeffs < 1 || num_coeffs > options.mel_bands)
    fail(ErrorKind::kConfig, "num_coeffs must lie in [1, mel_bands]");
  if (audio.length() == 0) fail(ErrorKind::kLength, "empty audio");

  const double fs = audio.sample_rate_hz();
  const Index window = samples_for_ms(window_ms, fs);
  const Index hop = samples_for_ms(hop_ms, fs);
  if (window < 1 || hop < 1) fail(ErrorKind::kConfig, "window/hop must be positive");
  if (audio.length() < window)
    fail(ErrorKind::kLength, "audio shorter than one analysis window");
  Index fft_size = options.fft_size;
  while (fft_size < window) fft_size *= 2;

  const auto x = audio.samples().row(0);
  VectorXd emphasized(audio.length());
  emphasized[0] = x[0];
  for (Index i = 1; i < x.size(); ++i) emphasized[i] = x[i] - options.pre_emphasis * x[i - 1];

  VectorXd hann(window);
  for (Index n = 0; n < window; ++n)
    hann[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / window);

  const MatrixXd bank = mel_filterbank(options.mel_bands, fft_size, fs, options.low_hz,
                                       options.high_hz);
  const Index bands = options.mel_bands;
  MatrixXd dct(num_coeffs, bands);
  for (Index k = 0; k < num_coeffs; ++k)
    for (Index m = 0; m < bands; ++m)
      dct(k, m) = std::sqrt((k == 0 ? 1.0 : 2.0) / bands) *
                  std::cos(std::numbers::pi * k * (m + 0.5) / bands);

  const Index frames = (audio.length() - window) / hop + 1;
  FramesXd out(frames, num_coeffs);
  Eigen::FFT<double> fft;
  std::vector<double> buffer(fft_size, 0.0);
  std::vector<std::complex<double>> spectrum;
  VectorXd magnitude(fft_size / 2 + 1);
  for (Index t = 0; t < frames; ++t) {
    std::fill(buffer.begin(), buffer.end(), 0.0);
    for (Index n = 0; n < window; ++n) buffer[n] = emphasized[t * hop + n] * hann[n];
    fft.fwd(spectrum, buffer);
    for (Index k = 0; k < magnitude.size(); ++k) magnitude[k] = std::abs(spectrum[k]);
    const VectorXd log_energy =
        (bank * magnitude).array().max(options.log_floor).log().matrix();
    out.row(t) = (dct * log_energy).transpose();
  }
  return FeatureSequence(std::move(out), 1000.0 / hop_ms,
                         "mfcc coeffs=" + std::to_string(num_coeffs));
}

FeatureSequence append_deltas(const FeatureSequence& features, Index half_window) {
  if (half_window < 1) fail(ErrorKind::kConfig, "delta half-window must be >= 1");
  const Index frames = features.length();
  if (frames < 2 * half_window + 1)
    fail(ErrorKind::kLength, "deltas need at least " +
                                 std::to_string(2 * half_window + 1) + " frames, got " +
                                 std::to_string(frames));

  double denom = 0.0;
  for (Index n = 1; n <= half_window; ++n) denom += static_cast<double>(n * n);
  denom *= 2.0;

  auto delta = [&](const FramesXd& x) {
    FramesXd d = FramesXd::Zero(x.rows(), x.cols());
    for (Index t = 0; t < x.rows(); ++t) {
      for (Index n = 1; n <= half_window; ++n) {
        const Index ahead = std::min(t + n, x.rows() - 1);
        const Index behind = std::max(t - n, Index{0});
        d.row(t) += static_cast<double>(n) * (x.row(ahead) - x.row(behind));
      }
    }
    return FramesXd(d / denom);
  };

  const Index dim = features.dim();
  const FramesXd first = delta(features.frames());
  const FramesXd second = delta(first);
  FramesXd out(frames, 3 * dim);
  out.leftCols(dim) = features.frames();
  out.middleCols(dim, dim) = first;
  out.rightCols(dim) = second;
  return FeatureSequence(std::move(out), features.frame_rate_hz(),
                         features.descriptor() + " +deltas");
}

FeatureSequence concat_features(const FeatureSequence& a, const FeatureSequence& b) {
  const double ra = a.frame_rate_hz(), rb = b.frame_rate_hz();
  if (std::abs(ra - rb) > 1e-9 * std::max(ra, rb))
    fail(ErrorKind::kAlignment, "cannot concatenate streams at " + std::to_string(ra) +
                                    " Hz and " + std::to_string(rb) + " Hz");
  const Index frames = std::min(a.length(), b.length());
  FramesXd out(frames, a.dim() + b.dim());
  out.leftCols(a.dim()) = a.frames().topRows(frames);
  out.rightCols(b.dim()) = b.frames().topRows(frames);
  return FeatureSequence(std::move(out), ra, a.descriptor() + " | " + b.descriptor());
}

MultiChannelSignal select_channels(const MultiChannelSignal& signal,
                                   const std::vector<std::string>& names) {
  const auto& available = signal.channel_names();
  FramesXd out(static_cast<Index>(names.size()), signal.length());
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = std::find(available.begin(), available.end(), names[i]);
    if (it == available.end())
      fail(ErrorKind::kLookup, "channel '" + names[i] + "' not present in recording");
    out.row(static_cast<Index>(i)) = signal.samples().row(it - available.begin());
  }
  return MultiChannelSignal(std::move(out), signal.sample_rate_hz(), names);
}

FeatureSequence raw_frames(const MultiChannelSignal& signal, double frame_rate_hz) {
  const double ratio = signal.sample_rate_hz() / frame_rate_hz;
  const auto factor = static_cast<Index>(std::lround(ratio));
  if (factor < 1 || std::abs(ratio - static_cast<double>(factor)) > 1e-9)
    fail(ErrorKind::kConfig, "sample rate must be an integer multiple of the frame rate");
  const Index frames = signal.length() / factor;
  if (frames < 1) fail(ErrorKind::kLength, "recording shorter than one frame");
  FramesXd out(frames, signal.channels());
  for (Index t = 0; t < frames; ++t)
    out.row(t) = signal.samples().middleCols(t * factor, factor).rowwise().mean().transpose();
  return FeatureSequence(std::move(out), frame_rate_hz,
                         "raw decimated x" + std::to_string(factor));
}

void write_features(const std::filesystem::path& path, const FeatureSequence& features) {
  BinaryWriter writer(path);
  writer.put_u64(static_cast<std::uint64_t>(features.length()));
  writer.put_u64(static_cast<std::uint64_t>(features.dim()));
  writer.put_f64(features.frame_rate_hz());
  writer.put_string(features.descriptor());
  writer.put_values(features.frames());
  writer.close();
}

FeatureSequence read_features(const std::filesystem::path& path) {
  BinaryReader reader(path);
  const auto frames = static_cast<Index>(reader.get_u64());
  const auto dim = static_cast<Index>(reader.get_u64());
  const double rate = reader.get_f64();
  std::string descriptor = reader.get_string();
  if (frames < 0 || dim < 0 || (frames > 0 && dim > (Index{1} << 36) / frames))
    fail(ErrorKind::kIo, "implausible feature header in '" + path.string() + "'");
  FramesXd values(frames, dim);
  reader.get_values(values);
  reader.expect_end();
  return FeatureSequence(std::move(values), rate, std::move(descriptor));
}

}  // namespace eegctc
