// Copyright 2026 The WOI Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// k-fold evaluation harness and report formatting.

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "woi/intent.h"

namespace woi {
namespace {

// Softmax outputs of one stream for one fold's test utterances.
struct StreamScores {
  std::vector<Vector> utterance;          // per test utterance
  std::vector<std::vector<Vector>> word;  // per test utterance, per keyword
};

struct FoldScores {
  std::vector<std::size_t> test;    // record indices
  std::vector<StreamScores> streams;  // parallel to the requested streams
};

std::vector<std::vector<std::size_t>> condition_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) out.push_back({s});
  if (n < 2) return out;
  std::vector<std::vector<std::size_t>> multi;
  const std::size_t min_size = std::min<std::size_t>(3, n);
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t s = 0; s < n; ++s) {
      if (mask & (std::size_t{1} << s)) subset.push_back(s);
    }
    if (subset.size() >= min_size) multi.push_back(std::move(subset));
  }
  std::sort(multi.begin(), multi.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  out.insert(out.end(), multi.begin(), multi.end());
  return out;
}

void finish(ConditionResult& row) {
  row.utterance_accuracy = row.utterance.accuracy();
  row.word_accuracy = row.word.accuracy();
  row.utterance_f1 = macro_f1(row.utterance);
  row.word_f1 = macro_f1(row.word);
}

std::vector<Vector> pick(const std::vector<StreamScores>& streams,
                         const std::vector<std::size_t>& subset, std::size_t u) {
  std::vector<Vector> out;
  out.reserve(subset.size());
  for (std::size_t s : subset) out.push_back(streams[s].utterance[u]);
  return out;
}

std::vector<Vector> pick_word(const std::vector<StreamScores>& streams,
                              const std::vector<std::size_t>& subset, std::size_t u,
                              std::size_t w) {
  std::vector<Vector> out;
  out.reserve(subset.size());
  for (std::size_t s : subset) out.push_back(streams[s].word[u][w]);
  return out;
}

void score_condition(ConditionResult& row, const FoldScores& fold,
                     const std::vector<std::size_t>& subset, const FusionPolicy& policy,
                     const std::vector<UtteranceRecord>& records) {
  for (std::size_t u = 0; u < fold.test.size(); ++u) {
    const int truth = static_cast<int>(records[fold.test[u]].intent);
    row.utterance.add(truth, fuse(pick(fold.streams, subset, u), policy).label);
    const std::size_t n_words = fold.streams[subset.front()].word[u].size();
    for (std::size_t w = 0; w < n_words; ++w) {
      row.word.add(truth, fuse(pick_word(fold.streams, subset, u, w), policy).label);
    }
  }
}

nlohmann::json confusion_json(const Confusion& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int t = 0; t < m.num_classes(); ++t) {
    std::vector<long> row;
    for (int p = 0; p < m.num_classes(); ++p) row.push_back(m.at(t, p));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string subset_name(std::span<const StreamKind> streams) {
  std::string out;
  for (StreamKind s : streams) {
    if (!out.empty()) out += ',';
    out += std::to_string(stream_number(s));
  }
  return out;
}

const ConditionResult& EvalReport::row(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw ValidationError("report has no row '" + name + "'");
}

EvalReport evaluate_kfold(const Corpus& corpus, const EvalOptions& options,
                          FeatureResources base) {
  if (options.streams.empty()) throw ValidationError("eval: no streams requested");
  std::set<StreamKind> unique(options.streams.begin(), options.streams.end());
  if (unique.size() != options.streams.size()) {
    throw ValidationError("eval: duplicate stream in request");
  }
  std::vector<StreamKind> streams(unique.begin(), unique.end());
  const auto& records = corpus.records();
  const auto folds = stratified_kfold(records, options.k, options.seed);

  std::vector<std::vector<KeywordInput>> inputs;
  inputs.reserve(records.size());
  std::vector<int> labels;
  for (const auto& r : records) {
    inputs.push_back(keyword_inputs(r, corpus.load_audio(r), base.mfcc));
    labels.push_back(static_cast<int>(r.intent));
  }

  // Per-keyword features for streams that do not depend on the fold.
  std::vector<std::vector<std::vector<FeatureSequence>>> fixed(streams.size());
  for (std::size_t s = 0; s < streams.size(); ++s) {
    if (streams[s] == StreamKind::kSpeech2Vec) continue;
    fixed[s].resize(records.size());
    for (std::size_t u = 0; u < records.size(); ++u) {
      for (const auto& k : inputs[u]) fixed[s][u].push_back(featurize_keyword(k, streams[s], base));
    }
  }

  std::vector<FoldScores> fold_scores;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const Fold& fold = folds[f];
    const std::string fold_tag = "fold/" + std::to_string(f) + "/";
    FeatureResources resources = base;
    std::vector<std::vector<std::vector<FeatureSequence>>> fold_features = fixed;

    for (std::size_t s = 0; s < streams.size(); ++s) {
      if (streams[s] != StreamKind::kSpeech2Vec) continue;
      // Autoencoder sees this fold's training keywords only.
      std::vector<FeatureSequence> segments;
      for (std::size_t u : fold.train) {
        for (const auto& k : inputs[u]) segments.push_back(k.mfcc);
      }
      Speech2VecConfig cfg = options.speech2vec;
      cfg.seed = derive_seed(options.seed, fold_tag + "speech2vec");
      resources.speech2vec =
          std::make_shared<const Speech2VecModel>(train_speech2vec(segments, cfg).model);
      fold_features[s].assign(records.size(), {});
      for (std::size_t u = 0; u < records.size(); ++u) {
        for (const auto& k : inputs[u]) {
          fold_features[s][u].push_back(featurize_keyword(k, streams[s], resources));
        }
      }
    }

    FoldScores scores;
    scores.test = fold.test;
    for (std::size_t s = 0; s < streams.size(); ++s) {
      const StreamKind kind = streams[s];
      std::vector<FeatureSequence> train_x;
      std::vector<int> train_y;
      for (std::size_t u : fold.train) {
        train_x.push_back(concatenate(fold_features[s][u]));
        train_y.push_back(labels[u]);
      }
      TrainConfig cfg = default_train_config(
          kind, derive_seed(options.seed, fold_tag + "stream/" + std::string(stream_name(kind))));
      const auto it = options.epochs.find(kind);
      if (it != options.epochs.end()) cfg.epochs = it->second;
      cfg.dropout_p = options.dropout_p;
      cfg.lr = options.lr;
      const StreamModel model =
          train_stream_model(kind, train_x, train_y, cfg, options.hidden_units).model;

      StreamScores ss;
      for (std::size_t u : fold.test) {
        ss.utterance.push_back(model.predict(concatenate(fold_features[s][u])));
        std::vector<Vector> words;
        for (const auto& seq : fold_features[s][u]) words.push_back(model.predict(seq));
        ss.word.push_back(std::move(words));
      }
      scores.streams.push_back(std::move(ss));
    }
    fold_scores.push_back(std::move(scores));
  }

  EvalReport report;
  report.folds = static_cast<int>(folds.size());
  report.utterances = static_cast<int>(records.size());
  for (const auto& subset : condition_subsets(streams.size())) {
    ConditionResult row;
    for (std::size_t s : subset) row.streams.push_back(streams[s]);
    row.name = subset_name(row.streams);
    const FusionPolicy policy = FusionPolicy::uniform(subset.size());
    for (const auto& fs : fold_scores) score_condition(row, fs, subset, policy, records);
    finish(row);
    report.rows.push_back(std::move(row));
  }

  if (streams.size() > 1) {
    // Single-stream confusions per fold, used to cross-fit the weights.
    std::vector<std::vector<Confusion>> per_fold(fold_scores.size(),
                                                 std::vector<Confusion>(streams.size()));
    for (std::size_t f = 0; f < fold_scores.size(); ++f) {
      for (std::size_t s = 0; s < streams.size(); ++s) {
        const auto& fs = fold_scores[f];
        for (std::size_t u = 0; u < fs.test.size(); ++u) {
          per_fold[f][s].add(static_cast<int>(records[fs.test[u]].intent),
                             fuse(pick(fs.streams, {s}, u), FusionPolicy::uniform(1)).label);
        }
      }
    }
    ConditionResult row;
    row.name = "new weights";
    row.streams = streams;
    row.weighted = true;
    std::vector<std::size_t> all(streams.size());
    for (std::size_t s = 0; s < all.size(); ++s) all[s] = s;
    for (std::size_t f = 0; f < fold_scores.size(); ++f) {
      std::vector<double> f1(streams.size());
      for (std::size_t s = 0; s < streams.size(); ++s) {
        Confusion others;
        for (std::size_t g = 0; g < fold_scores.size(); ++g) {
          if (g != f) others += per_fold[g][s];
        }
        f1[s] = macro_f1(others);
      }
      const FusionPolicy policy = derive_weights(f1);
      report.fold_weights.push_back(policy.weights);
      score_condition(row, fold_scores[f], all, policy, records);
    }
    finish(row);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string report_json(const EvalReport& report) {
  nlohmann::json j;
  j["folds"] = report.folds;
  j["utterances"] = report.utterances;
  j["classes"] = nlohmann::json::array();
  for (Intent c : all_intents()) j["classes"].push_back(intent_name(c));
  j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row;
    row["name"] = r.name;
    row["streams"] = nlohmann::json::array();
    for (StreamKind s : r.streams) row["streams"].push_back(stream_name(s));
    row["weighted"] = r.weighted;
    row["utterance"] = {{"accuracy", r.utterance_accuracy},
                        {"macro_f1", r.utterance_f1},
                        {"confusion", confusion_json(r.utterance)}};
    row["word"] = {{"accuracy", r.word_accuracy},
                   {"macro_f1", r.word_f1},
                   {"confusion", confusion_json(r.word)}};
    j["rows"].push_back(std::move(row));
  }
  j["fold_weights"] = report.fold_weights;
  return j.dump(2) + "\n";
}

std::string report_table(const EvalReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %-38s %9s %9s %9s %9s\n", "condition", "streams",
                "utt_acc", "word_acc", "utt_f1", "word_f1");
  out << line;
  for (const auto& r : report.rows) {
    std::string names;
    for (StreamKind s : r.streams) {
      if (!names.empty()) names += '+';
      names += stream_name(s);
    }
    std::snprintf(line, sizeof(line), "%-12s %-38s %9.4f %9.4f %9.4f %9.4f\n", r.name.c_str(),
                  names.c_str(), r.utterance_accuracy, r.word_accuracy, r.utterance_f1,
                  r.word_f1);
    out << line;
  }
  out << "folds: " << report.folds << "  utterances: " << report.utterances << '\n';
  return out.str();
}

}  // namespace woi
