// src/corpus.cpp

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

#include "eegctc/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "eegctc/binary_io.hpp"
#include "eegctc/error.hpp"
#include "eegctc/utf8.hpp"

namespace eegctc {

namespace {

constexpr int kChannelGroups = 4;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

// Uniform in [lo, hi) from a hash.
double hashed_uniform(std::uint64_t h, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

bool is_han(char32_t c) {
  return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF) ||
         (c >= 0x20000 && c <= 0x2A6DF) || (c >= 0xF900 && c <= 0xFAFF);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::string join_commas(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

[[noreturn]] void manifest_error(const std::filesystem::path& path, int line,
                                 const std::string& why) {
  fail(ErrorKind::kIo, path.string() + ":" + std::to_string(line) + ": " + why);
}

CorpusManifest with_entries(const CorpusManifest& manifest, std::vector<Utterance> entries) {
  CorpusManifest out = manifest;
  out.entries = std::move(entries);
  return out;
}

MultiChannelSignal load_recording(const CorpusManifest& manifest,
                                  const std::filesystem::path& relative, Index channels,
                                  Index samples, double rate,
                                  std::vector<std::string> names) {
  const auto path = manifest.root / relative;
  return MultiChannelSignal(read_f64_matrix(path, channels, samples), rate, std::move(names));
}

}  // namespace

Charset::Charset(std::u32string characters) : characters_(std::move(characters)) {
  std::set<char32_t> seen;
  for (char32_t c : characters_)
    if (!seen.insert(c).second)
      fail(ErrorKind::kData, "duplicate character '" + utf8_encode(c) + "' in charset");
}

bool Charset::contains(char32_t c) const {
  return characters_.find(c) != std::u32string::npos;
}

int Charset::id_of(char32_t c) const {
  const auto pos = characters_.find(c);
  if (pos == std::u32string::npos)
    fail(ErrorKind::kLookup, "character '" + utf8_encode(c) + "' (U+" + [&] {
      std::ostringstream hex;
      hex << std::hex << std::uppercase << static_cast<std::uint32_t>(c);
      return hex.str();
    }() + ") is not in the charset");
  return static_cast<int>(pos) + 1;
}

char32_t Charset::char_of(int id) const {
  if (id < 1 || id > size())
    fail(ErrorKind::kLookup, "id " + std::to_string(id) + " is not a character id");
  return characters_[static_cast<std::size_t>(id - 1)];
}

LabelSequence Charset::encode(std::string_view utf8_text) const {
  LabelSequence ids;
  for (char32_t c : utf8_decode(utf8_text)) ids.push_back(id_of(c));
  return ids;
}

std::string Charset::decode(const LabelSequence& ids) const {
  std::u32string text;
  for (int id : ids) text.push_back(char_of(id));
  return utf8_encode(text);
}

Charset union_charset(const std::vector<Charset>& charsets) {
  if (charsets.empty()) fail(ErrorKind::kConfig, "union of zero charsets");
  std::u32string out;
  for (const Charset& c : charsets)
    for (char32_t ch : c.characters())
      if (out.find(ch) == std::u32string::npos) out.push_back(ch);
  return Charset(std::move(out));
}

Charset charset_of(const std::vector<std::string>& transcripts) {
  if (transcripts.empty()) fail(ErrorKind::kData, "no transcripts to build a charset from");
  std::u32string out;
  for (const std::string& t : transcripts) {
    if (t.empty()) fail(ErrorKind::kData, "empty transcript");
    for (char32_t ch : utf8_decode(t))
      if (out.find(ch) == std::u32string::npos) out.push_back(ch);
  }
  return Charset(std::move(out));
}

std::string to_string(Language language) {
  return language == Language::kChinese ? "chinese" : "english";
}

Language language_from_string(const std::string& name) {
  if (name == "english") return Language::kEnglish;
  if (name == "chinese") return Language::kChinese;
  fail(ErrorKind::kConfig, "unknown language '" + name + "' (expected english or chinese)");
}

Language detect_language(std::string_view utf8_text) {
  for (char32_t c : utf8_decode(utf8_text))
    if (is_han(c)) return Language::kChinese;
  return Language::kEnglish;
}

std::vector<std::string> CorpusManifest::subjects() const {
  std::set<std::string> unique;
  for (const Utterance& u : entries) unique.insert(u.subject_id);
  return {unique.begin(), unique.end()};
}

std::vector<std::string> CorpusManifest::transcripts() const {
  std::vector<std::string> out;
  for (const Utterance& u : entries) out.push_back(u.transcript);
  return out;
}

void write_manifest(const std::filesystem::path& path, const CorpusManifest& manifest) {
  std::ostringstream out;
  out << "# eegctc corpus manifest 1\n";
  out << "eeg_rate_hz " << format_double(manifest.eeg_rate_hz) << '\n';
  out << "audio_rate_hz " << format_double(manifest.audio_rate_hz) << '\n';
  out << "eeg_channels " << join_commas(manifest.eeg_channels) << '\n';
  for (const Utterance& u : manifest.entries) {
    if (u.transcript.empty() || u.transcript.find('\n') != std::string::npos ||
        u.transcript.front() == ' ' || u.transcript.back() == ' ')
      fail(ErrorKind::kData, "transcript of '" + u.id +
                                 "' must be non-empty, single-line and trimmed");
    out << "\n[utterance]\n";
    out << "id " << u.id << '\n';
    out << "subject " << u.subject_id << '\n';
    out << "language " << to_string(u.language) << '\n';
    out << "sentence " << u.sentence_index << '\n';
    out << "session " << u.session << '\n';
    out << "transcript " << u.transcript << '\n';
    out << "eeg " << u.eeg_path.generic_string() << '\n';
    out << "eeg_samples " << u.eeg_samples << '\n';
    if (!u.audio_path.empty()) {
      out << "audio " << u.audio_path.generic_string() << '\n';
      out << "audio_samples " << u.audio_samples << '\n';
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::kIo, "cannot write manifest '" + path.string() + "'");
  file << out.str();
  if (!file) fail(ErrorKind::kIo, "failed writing manifest '" + path.string() + "'");
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::kIo, "cannot open manifest '" + path.string() + "'");
  CorpusManifest manifest;
  manifest.root = path.parent_path();

  const auto bad = [&](int line, const std::string& why) { manifest_error(path, line, why); };
  const auto to_int = [&](int line, const std::string& v) -> long long {
    try {
      std::size_t used = 0;
      const long long n = std::stoll(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return n;
    } catch (const std::exception&) {
      manifest_error(path, line, "expected an integer, got '" + v + "'");
    }
  };
  const auto to_real = [&](int line, const std::string& v) {
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      manifest_error(path, line, "expected a number, got '" + v + "'");
    }
  };

  std::string text;
  int line_no = 0;
  Utterance* current = nullptr;
  while (std::getline(file, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty() || text.front() == '#') continue;
    if (text == "[utterance]") {
      manifest.entries.emplace_back();
      current = &manifest.entries.back();
      continue;
    }
    const auto space = text.find(' ');
    const std::string key = text.substr(0, space);
    const std::string value = space == std::string::npos ? "" : text.substr(space + 1);
    if (!current) {
      if (key == "eeg_rate_hz")
        manifest.eeg_rate_hz = to_real(line_no, value);
      else if (key == "audio_rate_hz")
        manifest.audio_rate_hz = to_real(line_no, value);
      else if (key == "eeg_channels")
        manifest.eeg_channels = split_commas(value);
      else
        bad(line_no, "unknown header key '" + key + "'");
      continue;
    }
    if (key == "id")
      current->id = value;
    else if (key == "subject")
      current->subject_id = value;
    else if (key == "language")
      current->language = language_from_string(value);
    else if (key == "sentence")
      current->sentence_index = static_cast<int>(to_int(line_no, value));
    else if (key == "session")
      current->session = static_cast<int>(to_int(line_no, value));
    else if (key == "transcript")
      current->transcript = value;
    else if (key == "eeg")
      current->eeg_path = value;
    else if (key == "eeg_samples")
      current->eeg_samples = static_cast<Index>(to_int(line_no, value));
    else if (key == "audio")
      current->audio_path = value;
    else if (key == "audio_samples")
      current->audio_samples = static_cast<Index>(to_int(line_no, value));
    else
      bad(line_no, "unknown utterance key '" + key + "'");
  }
  if (manifest.eeg_channels.empty()) bad(line_no, "manifest lists no EEG channels");
  std::set<std::string> ids;
  for (const Utterance& u : manifest.entries) {
    if (u.id.empty() || u.subject_id.empty() || u.transcript.empty() || u.eeg_path.empty())
      bad(line_no, "utterance '" + u.id + "' lacks id, subject, transcript or eeg");
    if (!ids.insert(u.id).second) bad(line_no, "duplicate utterance id '" + u.id + "'");
  }
  return manifest;
}

MultiChannelSignal load_eeg(const CorpusManifest& manifest, const Utterance& utterance) {
  return load_recording(manifest, utterance.eeg_path,
                        static_cast<Index>(manifest.eeg_channels.size()),
                        utterance.eeg_samples, manifest.eeg_rate_hz, manifest.eeg_channels);
}

MultiChannelSignal load_audio(const CorpusManifest& manifest, const Utterance& utterance) {
  if (utterance.audio_path.empty())
    fail(ErrorKind::kIo, "utterance '" + utterance.id + "' has no audio recording");
  return load_recording(manifest, utterance.audio_path, 1, utterance.audio_samples,
                        manifest.audio_rate_hz, {"audio"});
}

SplitManifests split_by_subject(const CorpusManifest& manifest,
                                const std::vector<std::string>& train,
                                const std::vector<std::string>& validation,
                                const std::vector<std::string>& test) {
  std::map<std::string, int> assignment;
  const std::vector<const std::vector<std::string>*> lists{&train, &validation, &test};
  const char* names[] = {"train", "validation", "test"};
  for (int i = 0; i < 3; ++i) {
    if (lists[i]->empty())
      fail(ErrorKind::kSplit, std::string(names[i]) + " subject list is empty");
    for (const std::string& s : *lists[i])
      if (!assignment.emplace(s, i).second)
        fail(ErrorKind::kSplit, "subject '" + s + "' appears in more than one split");
  }
  const std::vector<std::string> present = manifest.subjects();
  for (const std::string& s : present)
    if (!assignment.count(s))
      fail(ErrorKind::kSplit, "subject '" + s + "' is not assigned to any split");
  for (const auto& [s, i] : assignment)
    if (!std::binary_search(present.begin(), present.end(), s))
      fail(ErrorKind::kSplit, "subject '" + s + "' does not occur in the corpus");

  std::vector<Utterance> parts[3];
  for (const Utterance& u : manifest.entries) parts[assignment.at(u.subject_id)].push_back(u);
  return {with_entries(manifest, std::move(parts[0])),
          with_entries(manifest, std::move(parts[1])),
          with_entries(manifest, std::move(parts[2]))};
}

CorpusManifest take_first_sentences(const CorpusManifest& manifest, int n) {
  if (n < 1 || n > 10)
    fail(ErrorKind::kRange, "sentence count " + std::to_string(n) + " outside 1..10");
  std::vector<Utterance> kept;
  for (const Utterance& u : manifest.entries)
    if (u.sentence_index <= n) kept.push_back(u);
  return with_entries(manifest, std::move(kept));
}

CorpusManifest filter_language(const CorpusManifest& manifest, Language language) {
  std::vector<Utterance> kept;
  for (const Utterance& u : manifest.entries)
    if (u.language == language) kept.push_back(u);
  return with_entries(manifest, std::move(kept));
}

std::vector<std::string> default_channel_names() {
  return {"Fp1", "Fp2", "F7",  "F3",  "Fz",  "F4",  "F8",   "FC5", "FC1", "FC2", "FC6",
          "T7",  "C3",  "Cz",  "C4",  "T8",  "TP9", "CP5",  "CP1", "CP2", "CP6", "TP10",
          "P7",  "P3",  "Pz",  "P4",  "P8",  "PO9", "O1",   "Oz",  "O2"};
}

std::vector<std::string> channel_names(Index channels) {
  std::vector<std::string> names = default_channel_names();
  if (channels <= static_cast<Index>(names.size())) {
    names.resize(static_cast<std::size_t>(channels));
    return names;
  }
  names.clear();
  for (Index c = 0; c < channels; ++c) names.push_back("E" + std::to_string(c + 1));
  return names;
}

std::vector<std::string> default_sentences() {
  return {"open the door",        "it is cold",         "the sun is up",
          "we walk home",         "give me a cup",      "birds fly south",
          "a quiet night",        "jump over logs",     "keep your voice low",
          "pack six boxes"};
}

void SyntheticCorpusOptions::validate() const {
  if (sentences.empty()) fail(ErrorKind::kConfig, "at least one sentence is required");
  if (sentences.size() > 10) fail(ErrorKind::kConfig, "at most 10 sentences per language");
  for (const std::string& s : sentences)
    if (s.empty()) fail(ErrorKind::kData, "empty sentence");
  if (subjects < 1 || subjects > 99) fail(ErrorKind::kConfig, "subjects must be in 1..99");
  if (sessions < 1) fail(ErrorKind::kConfig, "sessions must be >= 1");
  if (channels < 1) fail(ErrorKind::kConfig, "channels must be >= 1");
  if (!(eeg_rate_hz > 0.0) || !(audio_rate_hz > 0.0) || !(char_ms > 0.0) ||
      !(lead_ms >= 0.0) || !(tail_ms >= 0.0))
    fail(ErrorKind::kConfig, "rates and durations must be positive");
  if (!std::isfinite(snr_db)) fail(ErrorKind::kConfig, "snr_db must be finite");
  if (!(subject_gain_spread >= 0.0 && subject_gain_spread < 1.0))
    fail(ErrorKind::kConfig, "subject_gain_spread must be in [0, 1)");
}

namespace {

// Hann-enveloped sum of per-character sinusoids, one row per channel.
FramesXd synthesize(const std::u32string& text, Index channels, double rate, double char_s,
                    double lead_s, double tail_s, const std::function<double(Index, char32_t,
                                                                             double)>& wave) {
  const auto char_len = static_cast<Index>(std::lround(char_s * rate));
  const auto lead = static_cast<Index>(std::lround(lead_s * rate));
  const auto tail = static_cast<Index>(std::lround(tail_s * rate));
  const Index total = lead + char_len * static_cast<Index>(text.size()) + tail;
  FramesXd out = FramesXd::Zero(channels, total);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const Index start = lead + char_len * static_cast<Index>(i);
    for (Index k = 0; k < char_len; ++k) {
      const double envelope =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (k + 0.5) / static_cast<double>(char_len));
      const double tau = static_cast<double>(k) / rate;
      for (Index c = 0; c < channels; ++c) out(c, start + k) = envelope * wave(c, text[i], tau);
    }
  }
  return out;
}

void add_noise(FramesXd& signal, double snr_db, std::mt19937_64& rng) {
  const double power = signal.squaredNorm() / static_cast<double>(signal.size());
  const double sigma = std::sqrt(power) * std::pow(10.0, -snr_db / 20.0);
  std::normal_distribution<double> normal(0.0, sigma);
  for (Index r = 0; r < signal.rows(); ++r)
    for (Index c = 0; c < signal.cols(); ++c) signal(r, c) += normal(rng);
}

}  // namespace

CorpusManifest generate_synthetic_corpus(const std::filesystem::path& directory,
                                         const SyntheticCorpusOptions& options) {
  options.validate();
  std::error_code ec;
  std::filesystem::create_directories(directory / "eeg", ec);
  if (!ec && options.write_audio) std::filesystem::create_directories(directory / "audio", ec);
  if (ec)
    fail(ErrorKind::kIo, "cannot create corpus directory '" + directory.string() +
                             "': " + ec.message());

  const std::uint64_t seed = splitmix64(options.seed);
  CorpusManifest manifest;
  manifest.root = directory;
  manifest.eeg_rate_hz = options.eeg_rate_hz;
  manifest.audio_rate_hz = options.audio_rate_hz;
  manifest.eeg_channels = channel_names(options.channels);

  // Channel weights spread each group's signature unevenly over its members.
  std::vector<double> channel_weight(static_cast<std::size_t>(options.channels));
  for (Index c = 0; c < options.channels; ++c)
    channel_weight[c] = hashed_uniform(mix(seed, 0xC0000 + c), 0.7, 1.3);

  const auto eeg_wave = [&](double gain) {
    return [&, gain](Index channel, char32_t ch, double tau) {
      const std::uint64_t h = mix(mix(seed, ch), channel % kChannelGroups);
      const double freq = hashed_uniform(splitmix64(h), 4.0, 40.0);
      const double amplitude = hashed_uniform(splitmix64(h + 1), 0.5, 1.5);
      const double phase = hashed_uniform(splitmix64(h + 2), 0.0, 2.0 * std::numbers::pi);
      return gain * channel_weight[channel] * amplitude *
             std::sin(2.0 * std::numbers::pi * freq * tau + phase);
    };
  };
  const auto audio_wave = [&](Index, char32_t ch, double tau) {
    const double freq = hashed_uniform(mix(seed ^ 0xA0D10ULL, ch), 150.0, 1500.0);
    return 0.3 * std::sin(2.0 * std::numbers::pi * freq * tau);
  };

  std::map<Language, int> per_language;
  std::vector<std::pair<int, Language>> sentence_keys;
  for (const std::string& s : options.sentences) {
    const Language lang = detect_language(s);
    sentence_keys.emplace_back(++per_language[lang], lang);
  }

  std::uint64_t counter = 0;
  for (int subject = 1; subject <= options.subjects; ++subject) {
    std::ostringstream sid;
    sid << 'S' << std::setw(2) << std::setfill('0') << subject;
    const double gain = hashed_uniform(mix(seed, 0x50000 + subject),
                                       1.0 - options.subject_gain_spread,
                                       1.0 + options.subject_gain_spread);
    for (int session = 1; session <= options.sessions; ++session) {
      for (std::size_t k = 0; k < options.sentences.size(); ++k) {
        const auto [index, language] = sentence_keys[k];
        Utterance u;
        u.subject_id = sid.str();
        u.language = language;
        u.sentence_index = index;
        u.session = session;
        u.transcript = options.sentences[k];
        std::ostringstream id;
        id << u.subject_id << '_' << (language == Language::kChinese ? "zh" : "en") << "_s"
           << session << "_n" << std::setw(2) << std::setfill('0') << index;
        u.id = id.str();

        const std::u32string text = utf8_decode(u.transcript);
        std::mt19937_64 rng(mix(seed, 0xE0000000ULL + counter++));
        // Speaking onset varies by up to 50 ms between takes.
        const double jitter_s = hashed_uniform(rng(), 0.0, 0.05);
        const double lead_s = options.lead_ms / 1000.0 + jitter_s;
        const double tail_s = options.tail_ms / 1000.0 + 0.05 - jitter_s;
        FramesXd eeg = synthesize(text, options.channels, options.eeg_rate_hz,
                                  options.char_ms / 1000.0, lead_s, tail_s, eeg_wave(gain));
        add_noise(eeg, options.snr_db, rng);
        u.eeg_path = std::filesystem::path("eeg") / (u.id + ".f64");
        u.eeg_samples = eeg.cols();
        write_f64_matrix(directory / u.eeg_path, eeg);

        if (options.write_audio) {
          FramesXd audio = synthesize(text, 1, options.audio_rate_hz, options.char_ms / 1000.0,
                                      lead_s, tail_s, audio_wave);
          add_noise(audio, options.snr_db, rng);
          u.audio_path = std::filesystem::path("audio") / (u.id + ".f64");
          u.audio_samples = audio.cols();
          write_f64_matrix(directory / u.audio_path, audio);
        }
        manifest.entries.push_back(std::move(u));
      }
    }
  }
  write_manifest(directory / "manifest.txt", manifest);
  write_transcripts(directory / "transcripts.tsv", manifest);
  return manifest;
}

void write_transcripts(const std::filesystem::path& path, const CorpusManifest& manifest) {
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  for (const Utterance& u : manifest.entries) file << u.id << '\t' << u.transcript << '\n';
  if (!file) fail(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

}  // namespace eegctc
