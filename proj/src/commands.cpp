// src/commands.cpp

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

#include "eegctc/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "eegctc/error.hpp"
#include "eegctc/utf8.hpp"

namespace eegctc {

namespace fs = std::filesystem;

namespace {

std::string format_g(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  return buffer;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  file << text;
  if (!file) fail(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

std::vector<std::string> split_plus(const std::string& text) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, '+')) parts.push_back(part);
  return parts;
}

FeatureSequence front_end_features(const CorpusManifest& manifest, const Utterance& u,
                                   const std::string& name, const ExtractFeaturesArgs& args) {
  if (name == "mfcc") {
    const FeatureSequence mfcc = extract_mfcc(load_audio(manifest, u), args.mfcc_coeffs);
    return append_deltas(mfcc);
  }
  MultiChannelSignal eeg = load_eeg(manifest, u);
  if (!args.channels.empty()) eeg = select_channels(eeg, args.channels);
  eeg = preprocess_eeg(eeg, args.preprocess);
  if (name == "raw") return raw_frames(eeg, 1000.0 / args.hop_ms);
  if (name == "set1" || name == "set2" || name == "set3") {
    FeatureBankSpec spec = feature_set(name.back() - '0');
    spec.window_ms = args.window_ms;
    spec.hop_ms = args.hop_ms;
    return extract_eeg_features(eeg, spec);
  }
  fail(ErrorKind::kConfig, "unknown front end '" + name +
                               "' (expected set1, set2, set3, raw, mfcc or a '+' combination)");
}

std::vector<TrainingExample> load_examples(const CorpusManifest& manifest,
                                           const fs::path& features_dir,
                                           const Charset& charset) {
  std::vector<TrainingExample> out;
  for (const Utterance& u : manifest.entries) {
    TrainingExample ex;
    ex.id = u.id;
    ex.features = read_features(feature_path(features_dir, u.id)).frames();
    for (char32_t c : utf8_decode(u.transcript))
      if (!charset.contains(c))
        fail(ErrorKind::kConfig, "utterance '" + u.id + "' contains character '" +
                                     utf8_encode(c) + "' outside the model charset");
    ex.labels = charset.encode(u.transcript);
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace

fs::path feature_path(const fs::path& dir, const std::string& id) { return dir / (id + ".feat"); }

SplitManifests resolve_split(const CorpusManifest& manifest, const SplitArgs& args) {
  CorpusManifest scoped = take_first_sentences(manifest, args.sentences);
  if (args.language != "all") scoped = filter_language(scoped, language_from_string(args.language));
  if (args.train.empty() && args.validation.empty() && args.test.empty()) {
    const std::vector<std::string> subjects = scoped.subjects();
    if (subjects.size() < 3)
      fail(ErrorKind::kSplit, "the default split needs at least 3 subjects, corpus has " +
                                  std::to_string(subjects.size()));
    const std::vector<std::string> train(subjects.begin(), subjects.end() - 2);
    return split_by_subject(scoped, train, {subjects[subjects.size() - 2]},
                            {subjects.back()});
  }
  return split_by_subject(scoped, args.train, args.validation, args.test);
}

CorpusManifest select_subset(const CorpusManifest& manifest, const SplitArgs& split,
                             const std::string& subset) {
  if (subset == "all") {
    CorpusManifest scoped = take_first_sentences(manifest, split.sentences);
    if (split.language != "all")
      scoped = filter_language(scoped, language_from_string(split.language));
    return scoped;
  }
  const SplitManifests parts = resolve_split(manifest, split);
  if (subset == "train") return parts.train;
  if (subset == "validation") return parts.validation;
  if (subset == "test") return parts.test;
  fail(ErrorKind::kConfig, "unknown subset '" + subset +
                               "' (expected train, validation, test or all)");
}

void cmd_generate_corpus(const GenerateCorpusArgs& args, std::ostream& out, std::ostream& log) {
  log << "generating " << args.corpus.subjects << " subjects x " << args.corpus.sessions
      << " sessions x " << args.corpus.sentences.size() << " sentences, seed "
      << args.corpus.seed << '\n';
  const CorpusManifest m = generate_synthetic_corpus(args.out_dir, args.corpus);
  out << (args.out_dir / "manifest.txt").string() << '\t' << m.entries.size()
      << " utterances\n";
}

void cmd_extract_features(const ExtractFeaturesArgs& args, std::ostream& out, std::ostream& log) {
  const CorpusManifest manifest = read_manifest(args.manifest);
  ensure_dir(args.out_dir);
  const std::vector<std::string> parts = split_plus(args.front_end);
  Index dim = 0;
  for (const Utterance& u : manifest.entries) {
    FeatureSequence features = front_end_features(manifest, u, parts.front(), args);
    for (std::size_t i = 1; i < parts.size(); ++i)
      features = concat_features(features, front_end_features(manifest, u, parts[i], args));
    write_features(feature_path(args.out_dir, u.id), features);
    dim = features.dim();
  }
  log << "extracted '" << args.front_end << "' features for " << manifest.entries.size()
      << " utterances\n";
  out << args.out_dir.string() << '\t' << manifest.entries.size() << " utterances\tdim "
      << dim << '\n';
}

void cmd_fit_kpca(const FitKpcaArgs& args, std::ostream& out, std::ostream& log) {
  const CorpusManifest manifest = read_manifest(args.manifest);
  const SplitManifests split = resolve_split(manifest, args.split);
  ensure_dir(args.out_dir);

  std::vector<FramesXd> train_frames;
  Index rows = 0, dim = -1;
  for (const Utterance& u : split.train.entries) {
    train_frames.push_back(read_features(feature_path(args.features_dir, u.id)).frames());
    if (dim >= 0 && train_frames.back().cols() != dim)
      fail(ErrorKind::kShape, "feature dimensions differ across utterances");
    dim = train_frames.back().cols();
    rows += train_frames.back().rows();
  }
  if (train_frames.empty()) fail(ErrorKind::kData, "the training split is empty");
  FramesXd stacked(rows, dim);
  Index at = 0;
  for (const FramesXd& f : train_frames) {
    stacked.middleRows(at, f.rows()) = f;
    at += f.rows();
  }

  PolyKernel kernel = default_kernel(dim);
  kernel.degree = args.degree;
  if (args.scale > 0.0) kernel.scale = args.scale;
  kernel.offset = args.offset;
  const KpcaModel model =
      fit_kpca(stacked, kernel, args.target_dim, KpcaOptions{args.max_fit_frames, args.seed});
  if (model.rank_limited)
    log << "warning: kernel rank limits KPCA to " << model.target_dim << " of "
        << args.target_dim << " components\n";
  save_kpca(args.out_dir / "kpca.model", model);

  std::ostringstream curve;
  curve << "components,cumulative_fraction\n";
  for (const auto& [k, fraction] : explained_variance_curve(model))
    curve << k << ',' << format_g(fraction) << '\n';
  write_text(args.out_dir / "explained_variance.csv", curve.str());

  const CorpusManifest every = select_subset(manifest, args.split, "all");
  for (const Utterance& u : every.entries)
    write_features(feature_path(args.out_dir, u.id),
                   reduce_features(model, read_features(feature_path(args.features_dir, u.id))));
  log << "fitted KPCA on " << model.training_frames.rows() << " of " << rows
      << " training frames\n";
  out << (args.out_dir / "kpca.model").string() << "\tdim " << dim << " -> "
      << model.target_dim << " -> " << 3 * model.target_dim << '\n';
}

void cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& log) {
  const CorpusManifest manifest = read_manifest(args.manifest);
  const SplitManifests split = resolve_split(manifest, args.split);
  if (split.train.entries.empty()) fail(ErrorKind::kData, "the training split is empty");
  const Charset charset = charset_of(split.train.transcripts());
  const std::vector<TrainingExample> train_set =
      load_examples(split.train, args.features_dir, charset);
  const std::vector<TrainingExample> validation_set =
      load_examples(split.validation, args.features_dir, charset);

  std::vector<const FramesXd*> frames;
  for (const TrainingExample& ex : train_set) frames.push_back(&ex.features);
  const InputNormalizer normalizer = InputNormalizer::fit(frames);

  NetworkConfig config = args.network;
  config.input_dim = normalizer.dim();
  config.vocab_size_with_blank = charset.vocab_size_with_blank();
  const Model initial = init_model(config, charset, normalizer, args.seed);

  ensure_dir(args.out_dir);
  TrainOptions options;
  options.epochs = args.epochs;
  options.seed = args.seed;
  options.adam = args.adam;
  options.on_epoch = [&](const EpochLog& e) {
    if (e.epoch == 1 || e.epoch % 25 == 0 || e.epoch == args.epochs) {
      log << "epoch " << e.epoch << " train " << format_g(e.train_loss);
      if (!std::isnan(e.validation_loss)) log << " validation " << format_g(e.validation_loss);
      log << '\n';
    }
  };
  const TrainResult result = train(initial, train_set, validation_set, options);
  if (result.skipped > 0)
    log << "warning: skipped " << result.skipped
        << " training utterances too short for their transcripts\n";

  std::ostringstream csv;
  csv << "epoch,mean_loss\n";
  for (const EpochLog& e : result.log) csv << e.epoch << ',' << format_g(e.train_loss) << '\n';
  write_text(args.out_dir / "loss.csv", csv.str());
  save_checkpoint(args.out_dir / "final.ckpt", result.final_model);
  save_checkpoint(args.out_dir / "best.ckpt", result.best_model);
  out << (args.out_dir / "final.ckpt").string() << '\t' << train_set.size() << " utterances\t"
      << charset.size() << " characters\t";
  if (result.log.empty())
    out << "no epochs\n";
  else
    out << "final loss " << format_g(result.log.back().train_loss) << " (best epoch "
        << result.best_epoch << ")\n";
}

void cmd_decode(const DecodeArgs& args, std::ostream& out, std::ostream& log) {
  const Model model = load_checkpoint(args.checkpoint);
  const CorpusManifest manifest = read_manifest(args.manifest);
  const CorpusManifest subset = select_subset(manifest, args.split, args.subset);
  std::ostringstream hyps;
  for (const Utterance& u : subset.entries) {
    for (char32_t c : utf8_decode(u.transcript))
      if (!model.charset.contains(c))
        fail(ErrorKind::kConfig, "transcript of '" + u.id + "' uses character '" +
                                     utf8_encode(c) + "' missing from the checkpoint charset");
    const FramesXd logits =
        model_logits(model, read_features(feature_path(args.features_dir, u.id)).frames());
    const LabelSequence ids = beam_search_decode(logits, kBlankId, args.beam_width);
    hyps << u.id << '\t' << model.charset.decode(ids) << '\n';
  }
  if (!args.output.parent_path().empty()) ensure_dir(args.output.parent_path());
  write_text(args.output, hyps.str());
  log << "decoded " << subset.entries.size() << " '" << args.subset << "' utterances\n";
  out << args.output.string() << '\t' << subset.entries.size() << " hypotheses\n";
}

std::vector<std::pair<std::string, std::string>> read_tsv(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::vector<std::pair<std::string, std::string>> rows;
  std::set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      fail(ErrorKind::kIo, path.string() + ":" + std::to_string(line_no) + ": missing tab");
    std::string id = line.substr(0, tab);
    if (!ids.insert(id).second)
      fail(ErrorKind::kEvaluation, path.string() + ": duplicate utterance id '" + id + "'");
    rows.emplace_back(std::move(id), line.substr(tab + 1));
  }
  return rows;
}

std::vector<EvalReport> cmd_evaluate(const EvaluateArgs& args, std::ostream& out,
                                     std::ostream& log) {
  if (args.runs.empty()) fail(ErrorKind::kConfig, "no hypothesis files to evaluate");
  const auto references = read_tsv(args.references);
  const std::map<std::string, std::string> by_id(references.begin(), references.end());

  std::vector<EvalReport> reports;
  for (const EvaluateRun& run : args.runs) {
    const auto hyps = read_tsv(run.hypotheses);
    std::vector<std::string> unknown;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> ids;
    for (const auto& [id, text] : hyps) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        unknown.push_back(id);
        continue;
      }
      pairs.emplace_back(it->second, text);
      ids.push_back(id);
    }
    if (!unknown.empty()) {
      std::string list;
      for (std::size_t i = 0; i < unknown.size(); ++i) list += (i ? ", " : "") + unknown[i];
      fail(ErrorKind::kEvaluation, "hypotheses in '" + run.hypotheses.string() +
                                       "' have no reference: " + list);
    }
    if (pairs.empty())
      fail(ErrorKind::kEvaluation, "'" + run.hypotheses.string() + "' has no hypotheses");
    reports.push_back(make_report(run.corpus_size, run.config, run.feature_set, pairs, ids));
    log << run.hypotheses.string() << ": CER " << format_g(reports.back().cer_percent())
        << "% over " << pairs.size() << " utterances\n";
  }
  const Tabulation tab = tabulate(reports);
  if (!args.csv.empty()) write_text(args.csv, tab.csv);
  if (!args.table.empty()) write_text(args.table, tab.table);
  out << tab.table;
  return reports;
}

void cmd_inspect_features(const InspectFeaturesArgs& args, std::ostream& out) {
  const FeatureSequence f = read_features(args.file);
  out << "file        " << args.file.string() << '\n';
  out << "frames      " << f.length() << '\n';
  out << "dim         " << f.dim() << '\n';
  out << "frame_rate  " << format_g(f.frame_rate_hz()) << " Hz\n";
  out << "descriptor  " << f.descriptor() << '\n';
  if (f.length() > 0 && f.dim() > 0) {
    const FramesXd& x = f.frames();
    out << "min         " << format_g(x.minCoeff()) << '\n';
    out << "max         " << format_g(x.maxCoeff()) << '\n';
    out << "mean        " << format_g(x.mean()) << '\n';
  }
}

}  // namespace eegctc
