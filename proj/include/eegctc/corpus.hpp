// eegctc/corpus.hpp

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

#ifndef EEGCTC_CORPUS_HPP_
#define EEGCTC_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "eegctc/ctc.hpp"
#include "eegctc/signal.hpp"

namespace eegctc {

/// Ordered, duplicate-free characters (code points). Character i has id
/// i + 1; id 0 is the CTC blank and never a member.
class Charset {
 public:
  Charset() = default;
  explicit Charset(std::u32string characters);

  const std::u32string& characters() const { return characters_; }
  Index size() const { return static_cast<Index>(characters_.size()); }
  /// Output layer width: characters plus the blank.
  Index vocab_size_with_blank() const { return size() + 1; }

  bool contains(char32_t c) const;
  int id_of(char32_t c) const;
  char32_t char_of(int id) const;

  LabelSequence encode(std::string_view utf8_text) const;
  std::string decode(const LabelSequence& ids) const;

  bool operator==(const Charset&) const = default;

 private:
  std::u32string characters_;
};

/// Union in first-seen order across the list; ids renumbered 1..N.
Charset union_charset(const std::vector<Charset>& charsets);

/// Distinct characters of the transcripts in first-seen order.
Charset charset_of(const std::vector<std::string>& transcripts);

enum class Language { kEnglish, kChinese };

std::string to_string(Language language);
Language language_from_string(const std::string& name);
/// Chinese when the text contains any CJK ideograph, else English.
Language detect_language(std::string_view utf8_text);

struct Utterance {
  std::string id;
  std::string subject_id;
  Language language = Language::kEnglish;
  int sentence_index = 1;
  int session = 1;
  std::string transcript;
  std::filesystem::path eeg_path;  // relative to the manifest directory
  Index eeg_samples = 0;
  std::filesystem::path audio_path;
  Index audio_samples = 0;

  bool operator==(const Utterance&) const = default;
};

struct CorpusManifest {
  double eeg_rate_hz = 1000.0;
  std::vector<std::string> eeg_channels;
  double audio_rate_hz = 16000.0;
  std::vector<Utterance> entries;
  std::filesystem::path root;  // directory the relative paths resolve against

  /// Sorted, unique.
  std::vector<std::string> subjects() const;
  std::vector<std::string> transcripts() const;
};

// Manifest file: line-oriented "key value" text. A header block with
// eeg_rate_hz, audio_rate_hz and eeg_channels (comma separated) is followed
// by one block per utterance opened by the line "[utterance]". Values run to
// the end of the line. Lines starting with '#' are comments.
void write_manifest(const std::filesystem::path& path, const CorpusManifest& manifest);
CorpusManifest read_manifest(const std::filesystem::path& path);

MultiChannelSignal load_eeg(const CorpusManifest& manifest, const Utterance& utterance);
MultiChannelSignal load_audio(const CorpusManifest& manifest, const Utterance& utterance);

struct SplitManifests {
  CorpusManifest train;
  CorpusManifest validation;
  CorpusManifest test;
};

/// The three lists must be non-empty, disjoint, and cover every subject.
SplitManifests split_by_subject(const CorpusManifest& manifest,
                                const std::vector<std::string>& train,
                                const std::vector<std::string>& validation,
                                const std::vector<std::string>& test);

/// Keeps sentence indices 1..n, with 1 <= n <= 10.
CorpusManifest take_first_sentences(const CorpusManifest& manifest, int n);

CorpusManifest filter_language(const CorpusManifest& manifest, Language language);

/// 31 positions of the 10-20 system (a 32-electrode cap minus reference),
/// including T7 and T8.
std::vector<std::string> default_channel_names();
std::vector<std::string> channel_names(Index channels);

std::vector<std::string> default_sentences();

struct SyntheticCorpusOptions {
  std::uint64_t seed = 0;
  int subjects = 12;
  std::vector<std::string> sentences = default_sentences();
  int sessions = 3;
  Index channels = 31;
  double snr_db = 20.0;
  double subject_gain_spread = 0.2;  // per-subject gain drawn from 1 +- spread
  double eeg_rate_hz = 1000.0;
  double audio_rate_hz = 16000.0;
  double char_ms = 120.0;
  double lead_ms = 200.0;
  double tail_ms = 200.0;
  bool write_audio = true;

  void validate() const;
};

/// Writes eeg/<id>.f64, audio/<id>.f64 and manifest.txt under `directory`.
/// Each character maps through a seeded hash to a fixed oscillatory
/// signature per channel group; Gaussian noise is added at `snr_db`.
CorpusManifest generate_synthetic_corpus(const std::filesystem::path& directory,
                                         const SyntheticCorpusOptions& options);

/// Utterance ids and transcripts as "id<TAB>text" lines, manifest order.
void write_transcripts(const std::filesystem::path& path, const CorpusManifest& manifest);

}  // namespace eegctc

#endif  // EEGCTC_CORPUS_HPP_
