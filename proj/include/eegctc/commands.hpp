// eegctc/commands.hpp

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

#ifndef EEGCTC_COMMANDS_HPP_
#define EEGCTC_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "eegctc/corpus.hpp"
#include "eegctc/features.hpp"
#include "eegctc/kpca.hpp"
#include "eegctc/metrics.hpp"
#include "eegctc/net.hpp"
#include "eegctc/signal.hpp"
#include "eegctc/trainer.hpp"

// Library form of the eegctc subcommands. Each takes a fully populated
// argument record, writes its artifacts under the given paths, prints a
// short summary to `out` and progress to `log`.

namespace eegctc {

/// Subject lists and corpus restrictions shared by fit-kpca, train, decode.
/// With all lists empty the sorted subjects are split as: all but the last
/// two train, then one validation and one test subject.
struct SplitArgs {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  int sentences = 10;
  std::string language = "all";  // all, english, chinese
};

SplitManifests resolve_split(const CorpusManifest& manifest, const SplitArgs& args);

/// Utterances of one named split: train, validation, test, or all.
CorpusManifest select_subset(const CorpusManifest& manifest, const SplitArgs& split,
                             const std::string& subset);

struct GenerateCorpusArgs {
  std::filesystem::path out_dir;
  SyntheticCorpusOptions corpus;
};
void cmd_generate_corpus(const GenerateCorpusArgs& args, std::ostream& out, std::ostream& log);

/// Front ends: set1, set2, set3 (EEG feature banks), raw (decimated EEG),
/// mfcc (13 MFCC + deltas from audio), and set1+mfcc style concatenations.
struct ExtractFeaturesArgs {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::string front_end = "set1";
  std::vector<std::string> channels;  // empty: all
  PreprocessOptions preprocess;
  double window_ms = 50.0;
  double hop_ms = 10.0;
  Index mfcc_coeffs = 13;
};
void cmd_extract_features(const ExtractFeaturesArgs& args, std::ostream& out, std::ostream& log);

struct FitKpcaArgs {
  std::filesystem::path manifest;
  std::filesystem::path features_dir;
  std::filesystem::path out_dir;
  SplitArgs split;
  Index target_dim = 30;
  int degree = 3;
  double scale = 0.0;  // 0 selects 1 / input dimension
  double offset = 1.0;
  Index max_fit_frames = 2000;
  std::uint64_t seed = 0;
};
/// Fits on the training split, writes kpca.model, explained_variance.csv and
/// reduced (projected + deltas) features for every utterance.
void cmd_fit_kpca(const FitKpcaArgs& args, std::ostream& out, std::ostream& log);

struct TrainArgs {
  std::filesystem::path manifest;
  std::filesystem::path features_dir;
  std::filesystem::path out_dir;
  SplitArgs split;
  NetworkConfig network;  // input_dim and vocabulary are filled from the data
  int epochs = 400;
  std::uint64_t seed = 0;
  AdamOptions adam;
};
/// Writes final.ckpt, best.ckpt and loss.csv (epoch,mean_loss).
void cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& log);

struct DecodeArgs {
  std::filesystem::path checkpoint;
  std::filesystem::path manifest;
  std::filesystem::path features_dir;
  std::filesystem::path output;
  SplitArgs split;
  std::string subset = "test";
  int beam_width = kDefaultBeamWidth;
};
/// One "id<TAB>hypothesis" line per utterance.
void cmd_decode(const DecodeArgs& args, std::ostream& out, std::ostream& log);

struct EvaluateRun {
  std::filesystem::path hypotheses;
  int corpus_size = 0;
  std::string config;
  std::string feature_set;
};

struct EvaluateArgs {
  std::filesystem::path references;  // "id<TAB>text" lines
  std::vector<EvaluateRun> runs;
  std::filesystem::path csv;    // optional
  std::filesystem::path table;  // optional
};
std::vector<EvalReport> cmd_evaluate(const EvaluateArgs& args, std::ostream& out,
                                     std::ostream& log);

struct InspectFeaturesArgs {
  std::filesystem::path file;
};
void cmd_inspect_features(const InspectFeaturesArgs& args, std::ostream& out);

/// "id<TAB>text" lines in file order; duplicate ids are an evaluation error.
std::vector<std::pair<std::string, std::string>> read_tsv(const std::filesystem::path& path);

std::filesystem::path feature_path(const std::filesystem::path& dir, const std::string& id);

}  // namespace eegctc

#endif  // EEGCTC_COMMANDS_HPP_
