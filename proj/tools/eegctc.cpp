// tools/eegctc.cpp

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

// Command-line driver: generate-corpus, extract-features, fit-kpca, train,
// decode, evaluate, inspect-features. Options may also come from an INI
// file given with --config; keys go in a section named after the subcommand.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eegctc/commands.hpp"
#include "eegctc/error.hpp"

using namespace eegctc;

namespace {

void add_split_options(CLI::App* cmd, SplitArgs& split) {
  cmd->add_option("--train-subjects", split.train, "Training subject ids")->delimiter(',');
  cmd->add_option("--validation-subjects", split.validation, "Validation subject ids")
      ->delimiter(',');
  cmd->add_option("--test-subjects", split.test, "Test subject ids")->delimiter(',');
  cmd->add_option("--sentences", split.sentences, "Keep sentences 1..N")
      ->check(CLI::Range(1, 10));
  cmd->add_option("--language", split.language, "all, english or chinese")
      ->check(CLI::IsMember({"all", "english", "chinese"}));
}

// "hyp.tsv:corpus_size:config:feature_set"
EvaluateRun parse_run(const std::string& spec) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(spec);
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 4)
    fail(ErrorKind::kConfig, "--run expects hyp.tsv:corpus_size:config:feature_set, got '" +
                                 spec + "'");
  EvaluateRun run;
  run.hypotheses = parts[0];
  try {
    run.corpus_size = std::stoi(parts[1]);
  } catch (const std::exception&) {
    fail(ErrorKind::kConfig, "bad corpus size in --run '" + spec + "'");
  }
  run.config = parts[2];
  run.feature_set = parts[3];
  return run;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EEG and speech to text with CTC"};
  app.set_config("--config", "", "INI file with options, one section per subcommand");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  GenerateCorpusArgs generate;
  auto* gen = app.add_subcommand("generate-corpus", "Write a synthetic speech-EEG corpus");
  gen->add_option("--out", generate.out_dir, "Output directory")->required();
  gen->add_option("--seed", generate.corpus.seed);
  gen->add_option("--subjects", generate.corpus.subjects)->check(CLI::Range(1, 99));
  gen->add_option("--sessions", generate.corpus.sessions)->check(CLI::PositiveNumber);
  gen->add_option("--sentence", generate.corpus.sentences,
                  "Sentence text, repeatable (default: 10 built-in sentences)");
  gen->add_option("--channels", generate.corpus.channels)->check(CLI::PositiveNumber);
  gen->add_option("--snr-db", generate.corpus.snr_db);
  gen->add_option("--char-ms", generate.corpus.char_ms);
  gen->add_option("--gain-spread", generate.corpus.subject_gain_spread,
                  "Per-subject gain drawn from 1 +- spread");
  gen->add_flag("!--no-audio", generate.corpus.write_audio, "Skip the audio tracks");

  ExtractFeaturesArgs extract;
  auto* ext = app.add_subcommand("extract-features", "Compute per-utterance feature files");
  ext->add_option("--manifest", extract.manifest)->required();
  ext->add_option("--out", extract.out_dir)->required();
  ext->add_option("--front-end", extract.front_end,
                  "set1, set2, set3, raw, mfcc, or a '+' concatenation such as set1+mfcc");
  ext->add_option("--channels", extract.channels, "Channel subset, e.g. T7,T8")->delimiter(',');
  ext->add_option("--bandpass-low-hz", extract.preprocess.bandpass_low_hz);
  ext->add_option("--bandpass-high-hz", extract.preprocess.bandpass_high_hz);
  ext->add_option("--bandpass-order", extract.preprocess.bandpass_order);
  ext->add_option("--notch-hz", extract.preprocess.notch_hz);
  ext->add_option("--notch-quality", extract.preprocess.notch_quality);
  ext->add_option("--artifact-method", extract.preprocess.artifact_method);
  ext->add_option("--window-ms", extract.window_ms);
  ext->add_option("--hop-ms", extract.hop_ms);
  ext->add_option("--mfcc-coeffs", extract.mfcc_coeffs);

  FitKpcaArgs kpca;
  auto* fit = app.add_subcommand("fit-kpca", "Fit kernel PCA on the training split");
  fit->add_option("--manifest", kpca.manifest)->required();
  fit->add_option("--features", kpca.features_dir)->required();
  fit->add_option("--out", kpca.out_dir)->required();
  add_split_options(fit, kpca.split);
  fit->add_option("--target-dim", kpca.target_dim)->check(CLI::PositiveNumber);
  fit->add_option("--degree", kpca.degree)->check(CLI::PositiveNumber);
  fit->add_option("--scale", kpca.scale, "Kernel scale (0: 1/input dim)");
  fit->add_option("--offset", kpca.offset);
  fit->add_option("--max-fit-frames", kpca.max_fit_frames);
  fit->add_option("--seed", kpca.seed);

  TrainArgs training;
  auto* trn = app.add_subcommand("train", "Train the CTC model");
  trn->add_option("--manifest", training.manifest)->required();
  trn->add_option("--features", training.features_dir)->required();
  trn->add_option("--out", training.out_dir)->required();
  add_split_options(trn, training.split);
  trn->add_option("--epochs", training.epochs)->check(CLI::NonNegativeNumber);
  trn->add_option("--seed", training.seed);
  trn->add_option("--gru-hidden", training.network.gru_hidden)->check(CLI::PositiveNumber);
  trn->add_option("--gru-layers", training.network.gru_layers)->check(CLI::PositiveNumber);
  trn->add_flag("--raw-front-end", training.network.use_raw_front_end,
                "Add the conv/max-pool front end");
  trn->add_option("--conv-filters", training.network.conv_filters);
  trn->add_option("--conv-kernel", training.network.conv_kernel);
  trn->add_option("--pool-size", training.network.pool_size);
  trn->add_option("--pool-stride", training.network.pool_stride);
  trn->add_option("--learning-rate", training.adam.learning_rate);
  trn->add_option("--max-grad-norm", training.adam.max_grad_norm, "0 disables clipping");

  DecodeArgs decode;
  auto* dec = app.add_subcommand("decode", "Beam-search decode a split");
  dec->add_option("--checkpoint", decode.checkpoint)->required();
  dec->add_option("--manifest", decode.manifest)->required();
  dec->add_option("--features", decode.features_dir)->required();
  dec->add_option("--out", decode.output)->required();
  add_split_options(dec, decode.split);
  dec->add_option("--subset", decode.subset)
      ->check(CLI::IsMember({"train", "validation", "test", "all"}));
  dec->add_option("--beam-width", decode.beam_width)->check(CLI::PositiveNumber);

  EvaluateArgs evaluate;
  std::vector<std::string> run_specs;
  EvaluateRun single;
  auto* eva = app.add_subcommand("evaluate", "Score hypotheses and tabulate CER");
  eva->add_option("--ref", evaluate.references, "Reference id<TAB>text file")->required();
  eva->add_option("--hyp", single.hypotheses, "Hypothesis file of a single run");
  eva->add_option("--corpus-size", single.corpus_size);
  eva->add_option("--model-config", single.config);
  eva->add_option("--feature-set", single.feature_set);
  eva->add_option("--run", run_specs, "hyp.tsv:corpus_size:config:feature_set, repeatable");
  eva->add_option("--csv", evaluate.csv);
  eva->add_option("--table", evaluate.table);

  InspectFeaturesArgs inspect;
  auto* ins = app.add_subcommand("inspect-features", "Print a feature file summary");
  ins->add_option("file", inspect.file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*gen) cmd_generate_corpus(generate, std::cout, std::cerr);
    if (*ext) cmd_extract_features(extract, std::cout, std::cerr);
    if (*fit) cmd_fit_kpca(kpca, std::cout, std::cerr);
    if (*trn) cmd_train(training, std::cout, std::cerr);
    if (*dec) cmd_decode(decode, std::cout, std::cerr);
    if (*eva) {
      if (!single.hypotheses.empty()) evaluate.runs.push_back(single);
      for (const std::string& spec : run_specs) evaluate.runs.push_back(parse_run(spec));
      cmd_evaluate(evaluate, std::cout, std::cerr);
    }
    if (*ins) cmd_inspect_features(inspect, std::cout);
  } catch (const Error& e) {
    std::cerr << "eegctc: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "eegctc: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
