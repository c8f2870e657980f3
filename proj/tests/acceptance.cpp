// tests/acceptance.cpp

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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. An optional argument names the scratch directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "eegctc/commands.hpp"

using namespace eegctc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

FramesXd gaussian(Index rows, Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  FramesXd out(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) out(r, c) = normal(rng);
  return out;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

LabelSequence random_labels(std::mt19937_64& rng, int max_len, int vocab) {
  LabelSequence labels(static_cast<std::size_t>(uniform_int(rng, 0, max_len)));
  for (int& l : labels) l = uniform_int(rng, 1, vocab - 1);
  return labels;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// ---------------------------------------------------------------------------

Outcome ctc_oracle() {
  std::mt19937_64 rng(101);
  const auto start = std::chrono::steady_clock::now();
  int compared = 0, infeasible = 0;
  double worst = 0.0;
  while (compared < 1200) {
    const int t = uniform_int(rng, 1, 6);
    const int vocab = uniform_int(rng, 2, 4);
    const LabelSequence labels = random_labels(rng, 3, vocab);
    const FramesXd logits = gaussian(t, vocab, rng, 2.0);
    if (required_length(labels) > t) {
      ++infeasible;
      try {
        ctc_loss(logits, labels);
        return {false, "infeasible instance did not raise"};
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kInfeasible) return {false, e.what()};
      }
      continue;
    }
    worst = std::max(worst, std::abs(ctc_loss(logits, labels).loss -
                                     ctc_loss_bruteforce(logits, labels)));
    ++compared;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-9 && seconds < 10.0,
          std::to_string(compared) + " instances (" + std::to_string(infeasible) +
              " infeasible rejected), max |diff| " + fmt("%.2e", worst) + ", " +
              fmt("%.2f", seconds) + " s"};
}

Outcome ctc_gradient() {
  std::mt19937_64 rng(202);
  const double h = 1e-6;
  double worst_rel = 0.0, worst_row = 0.0;
  for (int n = 0; n < 100;) {
    const int t = uniform_int(rng, 1, 6);
    const int vocab = uniform_int(rng, 2, 5);
    const LabelSequence labels = random_labels(rng, 3, vocab);
    if (required_length(labels) > t) continue;
    ++n;
    FramesXd logits = gaussian(t, vocab, rng);
    const CtcResult exact = ctc_loss(logits, labels);
    FramesXd numeric(t, vocab);
    for (Index r = 0; r < t; ++r)
      for (Index c = 0; c < vocab; ++c) {
        const double saved = logits(r, c);
        logits(r, c) = saved + h;
        const double plus = ctc_loss(logits, labels).loss;
        logits(r, c) = saved - h;
        const double minus = ctc_loss(logits, labels).loss;
        logits(r, c) = saved;
        numeric(r, c) = (plus - minus) / (2.0 * h);
      }
    const double scale = std::max({exact.logit_grad.norm(), numeric.norm(), 1e-8});
    worst_rel = std::max(worst_rel, (numeric - exact.logit_grad).norm() / scale);
    worst_row = std::max(worst_row, exact.logit_grad.rowwise().sum().cwiseAbs().maxCoeff());
  }
  return {worst_rel < 1e-5 && worst_row <= 1e-9,
          "100 instances, max relative error " + fmt("%.2e", worst_rel) +
              ", max |row sum| " + fmt("%.2e", worst_row)};
}

Outcome network_gradient() {
  std::mt19937_64 rng(303);
  const double h = 1e-6;
  double worst = 0.0;
  std::string worst_name;
  int tensors_checked = 0;
  for (const Index layers : {1, 2}) {
    NetworkConfig config;
    config.use_raw_front_end = true;
    config.conv_filters = 3;
    config.conv_kernel = 3;
    config.gru_layers = layers;
    config.gru_hidden = 3;
    config.input_dim = 2;
    config.vocab_size_with_blank = 4;
    NetworkParams params = init_params(config, 7 + layers);
    for (auto& [name, tensor] : named_tensors(params.weights))
      *tensor += gaussian(tensor->rows(), tensor->cols(), rng, 0.3);
    const FramesXd x = gaussian(4, 2, rng);
    const LabelSequence labels{1, 3};
    auto loss = [&](const Weights& w) {
      return ctc_loss(forward(w, config, x).logits, labels).loss;
    };

    const ForwardTrace trace = forward(params.weights, config, x);
    const Weights grad =
        backward(params.weights, config, trace, ctc_loss(trace.logits, labels).logit_grad);
    Weights probe = params.weights;
    auto tensors = named_tensors(probe);
    const auto exact = named_tensors(grad);
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      MatrixXd& w = *tensors[i].second;
      MatrixXd numeric(w.rows(), w.cols());
      for (Index k = 0; k < w.size(); ++k) {
        const double saved = w(k);
        w(k) = saved + h;
        const double plus = loss(probe);
        w(k) = saved - h;
        const double minus = loss(probe);
        w(k) = saved;
        numeric(k) = (plus - minus) / (2.0 * h);
      }
      const MatrixXd& g = *exact[i].second;
      if (g.norm() == 0.0) return {false, tensors[i].first + " has an all-zero gradient"};
      const double rel = (numeric - g).norm() / std::max(g.norm(), numeric.norm());
      if (rel > worst) {
        worst = rel;
        worst_name = "gru_layers=" + std::to_string(layers) + " " + tensors[i].first;
      }
      ++tensors_checked;
    }
  }
  return {worst < 1e-5, std::to_string(tensors_checked) +
                            " tensors (conv, pool, GRU, dense), max relative error " +
                            fmt("%.2e", worst) + " at " + worst_name};
}

// Most probable collapsed sequence by enumerating every path.
std::pair<LabelSequence, double> exhaustive_best(const FramesXd& logits) {
  const FramesXd logp = log_softmax(logits);
  const Index t = logp.rows(), v = logp.cols();
  std::map<LabelSequence, double> mass;
  std::vector<int> path(static_cast<std::size_t>(t), 0);
  while (true) {
    double lp = 0.0;
    for (Index i = 0; i < t; ++i) lp += logp(i, path[static_cast<std::size_t>(i)]);
    mass[collapse_alignment(path)] += std::exp(lp);
    // Odometer increment over the path digits.
    Index i = t - 1;
    for (; i >= 0; --i) {
      int& digit = path[static_cast<std::size_t>(i)];
      if (++digit < v) break;
      digit = 0;
    }
    if (i < 0) break;
  }
  auto best = mass.begin();
  for (auto it = mass.begin(); it != mass.end(); ++it)
    if (it->second > best->second) best = it;
  return {best->first, best->second};
}

Outcome decoder_exactness() {
  std::mt19937_64 rng(404);
  int exact = 0, total = 0;
  for (int t = 1; t <= 5; ++t)
    for (int vocab = 2; vocab <= 3; ++vocab)
      for (int n = 0; n < 200; ++n, ++total) {
        const FramesXd logits = gaussian(t, vocab, rng, 1.5);
        const auto [best, prob] = exhaustive_best(logits);
        if (beam_search_decode(logits, kBlankId, 1000) == best) ++exact;
      }
  int peaked_agree = 0, peaked = 0;
  for (int n = 0; n < 500; ++n, ++peaked) {
    const int t = uniform_int(rng, 1, 12), vocab = uniform_int(rng, 2, 6);
    FramesXd logits = gaussian(t, vocab, rng, 0.5);
    for (Index i = 0; i < t; ++i) logits(i, uniform_int(rng, 0, vocab - 1)) += 12.0;
    if (beam_search_decode(logits, kBlankId, 1) == greedy_decode(logits)) ++peaked_agree;
  }
  return {exact == total && peaked_agree == peaked,
          "exhaustive " + std::to_string(exact) + "/" + std::to_string(total) +
              ", width 1 vs greedy on peaked " + std::to_string(peaked_agree) + "/" +
              std::to_string(peaked)};
}

double db(double magnitude) { return 20.0 * std::log10(magnitude); }

Outcome filter_contracts() {
  const double fs = 1000.0;
  const PreprocessOptions pre;
  const IirFilter notch = design_notch(pre.notch_hz, pre.notch_quality, fs);
  const double stop_half_width = 3.0 * pre.notch_hz / pre.notch_quality;
  const double notch_gain = std::abs(frequency_response(notch, {pre.notch_hz}, fs)[0]);
  std::vector<double> pass;
  for (double f = 0.0; f <= fs / 2.0; f += 0.25)
    if (std::abs(f - pre.notch_hz) > stop_half_width) pass.push_back(f);
  double ripple = 0.0;
  for (const auto& h : frequency_response(notch, pass, fs))
    ripple = std::max(ripple, std::abs(db(std::abs(h))));

  const IirFilter bp =
      design_bandpass(pre.bandpass_low_hz, pre.bandpass_high_hz, pre.bandpass_order, fs);
  const auto h = frequency_response(bp, {0.0, 10.0}, fs);
  const double dc = std::abs(h[0]);
  const double at10 = std::abs(db(std::abs(h[1])));

  const Index n = 10000, edge = 1000;
  FramesXd tone(1, n);
  for (Index i = 0; i < n; ++i) tone(0, i) = std::sin(2.0 * std::numbers::pi * 60.0 * i / fs);
  const MultiChannelSignal filtered = apply_filter(MultiChannelSignal(tone, fs, {"x"}), notch);
  const auto mid = [&](const FramesXd& s) { return s.block(0, edge, 1, n - 2 * edge); };
  const double attenuation =
      db(std::sqrt(mid(tone).squaredNorm() / mid(filtered.samples()).squaredNorm()));

  return {notch_gain <= 0.01 && ripple <= 1.0 && dc <= 1e-12 && at10 <= 1.0 &&
              attenuation >= 34.0,
          "notch |H(60)| " + fmt("%.2e", notch_gain) + ", ripple " + fmt("%.3f", ripple) +
              " dB; band-pass |H(0)| " + fmt("%.1e", dc) + ", |H(10)| off by " +
              fmt("%.4f", at10) + " dB; 60 Hz attenuation " + fmt("%.1f", attenuation) + " dB"};
}

Outcome kpca_oracle() {
  std::mt19937_64 rng(606);
  const FramesXd x = gaussian(20, 5, rng) * gaussian(5, 5, rng);
  const KpcaModel model = fit_kpca(x, PolyKernel{1, 1.0, 0.0}, 5);
  const FramesXd kpca = transform(model, x);

  const MatrixXd centered = x.rowwise() - x.colwise().mean();
  Eigen::JacobiSVD<MatrixXd> svd(centered, Eigen::ComputeThinU);
  const MatrixXd pca = svd.matrixU() * svd.singularValues().asDiagonal();
  double worst = 0.0;
  for (Index j = 0; j < 5; ++j) {
    const double sign = kpca.col(j).dot(pca.col(j)) < 0.0 ? -1.0 : 1.0;
    worst = std::max(worst, (sign * kpca.col(j) - pca.col(j)).cwiseAbs().maxCoeff());
  }

  bool monotone = true;
  double terminal_error = 0.0;
  for (const KpcaModel& m : {model, fit_kpca(x, default_kernel(5), 10)}) {
    const auto curve = explained_variance_curve(m);
    for (std::size_t i = 1; i < curve.size(); ++i)
      monotone = monotone && curve[i].second >= curve[i - 1].second;
    terminal_error = std::max(terminal_error, std::abs(curve.back().second - 1.0));
  }
  return {model.target_dim == 5 && worst <= 1e-8 && monotone && terminal_error <= 1e-9,
          "max |score diff| " + fmt("%.2e", worst) + ", curve " +
              (monotone ? "non-decreasing" : "DECREASING") + ", |end - 1| " +
              fmt("%.1e", terminal_error)};
}

Outcome dimension_pipeline() {
  std::mt19937_64 rng(707);
  const MultiChannelSignal eeg(gaussian(31, 3000, rng), 1000.0, channel_names(31));
  const MultiChannelSignal clean = preprocess_eeg(eeg, {});
  struct Case {
    int set;
    Index base, target, reduced;
  };
  std::string detail;
  bool ok = true;
  for (const Case c : {Case{1, 155, 30, 90}, Case{2, 93, 50, 150}, Case{3, 93, 93, 279}}) {
    const FeatureSequence features = extract_eeg_features(clean, feature_set(c.set));
    const FeatureSequence reduced =
        reduce_pipeline(features, default_kernel(features.dim()), c.target);
    ok = ok && features.dim() == c.base && reduced.dim() == c.reduced &&
         features.frames().rows() == reduced.frames().rows();
    detail += (detail.empty() ? "" : "; ") + std::string("set") + std::to_string(c.set) + " " +
              std::to_string(features.dim()) + " -> " + std::to_string(c.target) + " -> " +
              std::to_string(reduced.dim());
  }
  return {ok, "31 channels: " + detail};
}

// ---------------------------------------------------------------------------
// End-to-end recipe on a near-noiseless synthetic corpus.

constexpr int kCorpusSizes[] = {3, 5, 7, 10};

struct RecipeResult {
  std::map<int, double> train_cer, test_cer, final_loss, first_loss;
  double seconds = 0.0;
};

SplitArgs recipe_split(int sentences) {
  SplitArgs split;
  split.sentences = sentences;
  split.train = {"S01", "S02"};
  split.validation = {"S03"};
  split.test = {"S04", "S05", "S06"};
  return split;
}

RecipeResult run_recipe(const fs::path& root, const std::vector<int>& sizes, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  RecipeResult result;
  std::ostringstream quiet;

  GenerateCorpusArgs gen;
  gen.out_dir = root / "corpus";
  gen.corpus.seed = 1;
  gen.corpus.subjects = 6;
  gen.corpus.sessions = 1;
  gen.corpus.snr_db = 60.0;
  gen.corpus.subject_gain_spread = 0.0;
  gen.corpus.write_audio = false;
  cmd_generate_corpus(gen, quiet, quiet);

  ExtractFeaturesArgs extract;
  extract.manifest = gen.out_dir / "manifest.txt";
  extract.out_dir = root / "set1";
  extract.front_end = "set1";
  cmd_extract_features(extract, quiet, quiet);

  for (const int n : sizes) {
    const std::string tag = std::to_string(n);
    FitKpcaArgs kpca;
    kpca.manifest = extract.manifest;
    kpca.features_dir = extract.out_dir;
    kpca.out_dir = root / ("kpca" + tag);
    kpca.split = recipe_split(n);
    kpca.target_dim = 30;
    kpca.max_fit_frames = 1000;
    cmd_fit_kpca(kpca, quiet, quiet);

    TrainArgs train;
    train.manifest = extract.manifest;
    train.features_dir = kpca.out_dir;
    train.out_dir = root / ("model" + tag);
    train.split = kpca.split;
    train.network.gru_hidden = 64;
    train.epochs = 400;
    train.seed = 1;
    std::ostringstream train_log;
    cmd_train(train, quiet, train_log);
    const std::string curve = slurp(train.out_dir / "loss.csv");
    std::istringstream lines(curve);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
      const double loss = std::stod(line.substr(line.find(',') + 1));
      if (!result.first_loss.count(n)) result.first_loss[n] = loss;
      result.final_loss[n] = loss;
    }

    for (const std::string subset : {"train", "test"}) {
      DecodeArgs decode;
      decode.checkpoint = train.out_dir / "final.ckpt";
      decode.manifest = extract.manifest;
      decode.features_dir = kpca.out_dir;
      decode.output = root / ("hyp_" + subset + tag + ".tsv");
      decode.split = kpca.split;
      decode.subset = subset;
      cmd_decode(decode, quiet, quiet);

      EvaluateArgs eval;
      eval.references = gen.out_dir / "transcripts.tsv";
      eval.runs = {{decode.output, n, "gru64", "set1-kpca30"}};
      eval.csv = root / ("cer_" + subset + tag + ".csv");
      const double cer = cmd_evaluate(eval, quiet, quiet).front().cer_percent();
      (subset == "train" ? result.train_cer : result.test_cer)[n] = cer;
    }
    log << "    " << n << " sentences: train CER " << fmt("%.2f", result.train_cer[n])
        << "%, test CER " << fmt("%.2f", result.test_cer[n]) << "%, final loss "
        << fmt("%.4g", result.final_loss[n]) << '\n';
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

fs::path g_work;
RecipeResult g_first;

Outcome end_to_end() {
  fs::remove_all(g_work / "run1");
  g_first = run_recipe(g_work / "run1", {std::begin(kCorpusSizes), std::end(kCorpusSizes)},
                       std::cout);
  // Largest fall of test CER below its running maximum.
  double peak = -1.0, worst_drop = 0.0;
  std::string trend;
  for (const int n : kCorpusSizes) {
    const double cer = g_first.test_cer.at(n);
    worst_drop = std::max(worst_drop, peak - cer);
    peak = std::max(peak, cer);
    trend += (trend.empty() ? "" : " ") + fmt("%.1f", cer);
  }
  const double train3 = g_first.train_cer.at(3);
  const double loss3 = g_first.final_loss.at(3);
  return {train3 <= 5.0 && loss3 < 0.1 && g_first.final_loss.at(3) < g_first.first_loss.at(3) &&
              worst_drop <= 5.0 && g_first.seconds <= 600.0,
          "3-sentence train CER " + fmt("%.2f", train3) + "%, final loss " +
              fmt("%.4f", loss3) + "; test CER by size " + trend + " (max drop " +
              fmt("%.1f", worst_drop) + " pp); " + fmt("%.0f", g_first.seconds) + " s"};
}

Outcome cer_suite() {
  bool ok = edit_distance_utf8("kitten", "sitting") == 3 &&
            edit_distance_utf8("", "abc") == 3 && edit_distance_utf8("abc", "abc") == 0;
  const std::vector<std::pair<std::string, std::string>> same{{"open the door", "open the door"},
                                                              {"你好", "你好"}};
  ok = ok && cer(same) == 0.0;

  std::mt19937_64 rng(909);
  auto word = [&] {
    std::string s(static_cast<std::size_t>(uniform_int(rng, 0, 8)), 'a');
    for (char& c : s) c = static_cast<char>('a' + uniform_int(rng, 0, 3));
    return s;
  };
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string a = word(), b = word(), c = word();
    const Index ab = edit_distance(a, b), ba = edit_distance(b, a);
    const Index ac = edit_distance(a, c), cb = edit_distance(c, b);
    if (edit_distance(a, a) != 0) ++violations;
    if ((ab == 0) != (a == b)) ++violations;
    if (ab != ba) ++violations;
    if (ab > ac + cb) ++violations;
    if (ab > static_cast<Index>(std::max(a.size(), b.size()))) ++violations;
  }
  return {ok && violations == 0,
          "kitten/sitting 3, identity CER 0, " + std::to_string(violations) +
              " axiom violations over 1000 random triples"};
}

Outcome determinism() {
  const fs::path again = g_work / "run2";
  fs::remove_all(again);
  std::ostringstream quiet;
  const RecipeResult second = run_recipe(again, {3}, quiet);
  int compared = 0;
  std::vector<std::string> differing;
  for (const auto& entry : fs::recursive_directory_iterator(again)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), again);
    ++compared;
    if (!fs::exists(g_work / "run1" / rel) || slurp(entry.path()) != slurp(g_work / "run1" / rel))
      differing.push_back(rel.generic_string());
  }
  std::string detail = std::to_string(compared) +
                       " artifacts (corpus, features, KPCA model, loss CSV, checkpoints, "
                       "hypotheses, CER CSVs) compared byte for byte";
  if (!differing.empty()) detail += "; differing: " + differing.front();
  return {differing.empty() && compared > 0 && second.test_cer.at(3) == g_first.test_cer.at(3),
          detail};
}

}  // namespace

int main(int argc, char** argv) {
  g_work = argc > 1 ? fs::path(argv[1]) : fs::current_path() / "acceptance_work";
  fs::create_directories(g_work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"CTC loss equals brute-force alignment enumeration", ctc_oracle},
      {"CTC logit gradient matches finite differences", ctc_gradient},
      {"network gradients match finite differences", network_gradient},
      {"beam search is exact and width 1 is greedy", decoder_exactness},
      {"notch and band-pass filter contracts", filter_contracts},
      {"linear KPCA equals PCA, variance curve", kpca_oracle},
      {"feature and KPCA dimensions", dimension_pipeline},
      {"end-to-end synthetic corpus-size trend", end_to_end},
      {"CER metric suite", cer_suite},
      {"recipe determinism", determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ' '
              << criteria[i].first << ": " << outcome.detail << " [" << fmt("%.1f", seconds)
              << " s]" << std::endl;
  }
  std::cout << (criteria.size() - failures) << '/' << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
