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

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "woi/audio.h"
#include "woi/corpus.h"
#include "woi/embeddings.h"
#include "woi/intent.h"
#include "woi/wake.h"

namespace woi::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Output directory bookkeeping: every file a command writes is recorded and
// listed in artifacts.json at the end.
class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw IoError("cannot create " + root_.string() + ": " + ec.message());
  }

  const fs::path& root() const { return root_; }

  void write(const std::string& name, const std::string& text) {
    const fs::path path = root_ / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw IoError("cannot write " + path.string());
    record(path);
  }

  void record(const fs::path& path) {
    files_.insert(fs::relative(path, root_).generic_string());
  }

  void finish(const std::string& command, std::uint64_t seed, const json& params) {
    json j;
    j["command"] = command;
    j["seed"] = seed;
    j["params"] = params;
    j["outputs"] = json::array();
    for (const auto& f : files_) {
      j["outputs"].push_back({{"path", f}, {"bytes", fs::file_size(root_ / f)}});
    }
    std::ofstream out(root_ / "artifacts.json", std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("cannot write artifacts.json");
  }

 private:
  fs::path root_;
  std::set<std::string> files_;
};

std::vector<StreamKind> parse_streams(const std::string& text) {
  std::vector<StreamKind> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    StreamKind kind;
    try {
      kind = parse_stream(item);
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
    if (std::find(out.begin(), out.end(), kind) != out.end()) {
      throw ConfigError("stream listed twice: " + item);
    }
    out.push_back(kind);
  }
  if (out.empty()) throw ConfigError("no streams given");
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad weight '" + item + "'");
    }
  }
  return out;
}

std::string stream_list(std::span<const StreamKind> streams) {
  std::string out;
  for (StreamKind s : streams) {
    if (!out.empty()) out += ',';
    out += stream_name(s);
  }
  return out;
}

FeatureResources base_resources(const std::string& embeddings_path) {
  FeatureResources res = FeatureResources::bundled();
  if (!embeddings_path.empty()) {
    res.embeddings = std::make_shared<const EmbeddingTable>(
        load_embedding_table(embeddings_path, 0).table);
  }
  return res;
}

// Flags shared by train and eval.
struct ModelFlags {
  std::string streams = "acoustic,phone,word2vec,speech2vec";
  std::map<StreamKind, int> epochs;
  int hidden = kHiddenUnits;
  double lr = kLearningRate;
  double dropout = kDropout;
  int s2v_epochs = Speech2VecConfig{}.epochs;
  int s2v_dim = kDefaultEmbeddingDim;
  double s2v_lr = Speech2VecConfig{}.lr;
  std::string embeddings;

  void attach(CLI::App* app) {
    app->add_option("--streams", streams, "Comma-separated stream names or numbers 1-4")
        ->capture_default_str();
    for (StreamKind kind : all_streams()) {
      const std::string name(stream_name(kind));
      app->add_option_function<int>(
             "--epochs-" + name, [this, kind](int e) { epochs[kind] = e; },
             "Epochs for the " + name + " stream (default " +
                 std::to_string(default_epochs(kind)) + ")")
          ->check(CLI::PositiveNumber);
    }
    app->add_option("--hidden", hidden, "LSTM hidden units")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--lr", lr, "Adam learning rate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--dropout", dropout, "Dropout on the final hidden state")
        ->check(CLI::Range(0.0, 0.99))
        ->capture_default_str();
    app->add_option("--s2v-epochs", s2v_epochs, "Speech2vec autoencoder epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--s2v-dim", s2v_dim, "Speech2vec embedding size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--s2v-lr", s2v_lr, "Speech2vec learning rate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--embeddings", embeddings,
                    "GloVe-format word vectors (default: bundled fixture)")
        ->check(CLI::ExistingFile);
  }

  Speech2VecConfig speech2vec() const {
    Speech2VecConfig cfg;
    cfg.epochs = s2v_epochs;
    cfg.dim = s2v_dim;
    cfg.lr = s2v_lr;
    return cfg;
  }

  json params() const {
    json j;
    j["streams"] = stream_list(parse_streams(streams));
    j["epochs"] = json::object();
    for (StreamKind kind : parse_streams(streams)) {
      const auto it = epochs.find(kind);
      j["epochs"][std::string(stream_name(kind))] =
          it == epochs.end() ? default_epochs(kind) : it->second;
    }
    j["hidden"] = hidden;
    j["lr"] = lr;
    j["dropout"] = dropout;
    j["s2v_epochs"] = s2v_epochs;
    j["s2v_dim"] = s2v_dim;
    j["s2v_lr"] = s2v_lr;
    j["embeddings"] = embeddings.empty() ? "bundled" : fs::path(embeddings).filename().string();
    return j;
  }
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", "Flat key=value file; flags override it")->check(CLI::ExistingFile);
  return sub;
}

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

// Splices `--key value` pairs from a `--config` file into the arguments,
// skipping keys already given as flags. Lines are `key = value`; blank lines
// and lines starting with '#' or ';' are ignored.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(key);
    if (key != "config") continue;
    if (eq != std::string::npos) {
      path = a.substr(eq + 1);
    } else if (i + 1 < args.size()) {
      path = args[i + 1];
    }
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot read config file " + *path);
  std::vector<std::string> out = args;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(*path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty() || key == "config") {
      throw ConfigError(*path + ":" + std::to_string(line_no) + ": bad key");
    }
    if (given.count(key)) continue;
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

// ---- corpus-gen -------------------------------------------------------------

struct CorpusGenFlags {
  std::uint64_t seed = 0;
  int n = 450;
  std::string out;
  std::string domain = CorpusOptions{}.domain_tag;
};

void cmd_corpus_gen(const CorpusGenFlags& f, std::ostream& log) {
  OutputDir dir(f.out);
  CorpusOptions opts;
  opts.seed = f.seed;
  opts.n_utterances = f.n;
  opts.domain_tag = f.domain;
  const CorpusManifest m = generate_corpus(opts, dir.root());
  dir.record(m.manifest_path);
  for (const auto& r : m.records) dir.record(m.root / r.audio_path);
  dir.finish("corpus-gen", f.seed, {{"n", f.n}, {"domain", f.domain}});
  log << "wrote " << m.records.size() << " utterances to " << m.manifest_path.string() << '\n';
}

// ---- train ------------------------------------------------------------------

struct TrainFlags {
  std::uint64_t seed = 0;
  std::string corpus;
  std::string out;
  ModelFlags model;
  std::string weights;
};

void cmd_train(const TrainFlags& f, std::ostream& log) {
  const Corpus corpus = Corpus::open(f.corpus);
  TrainOptions opts;
  opts.seed = f.seed;
  opts.streams = parse_streams(f.model.streams);
  opts.epochs = f.model.epochs;
  opts.hidden_units = f.model.hidden;
  opts.lr = f.model.lr;
  opts.dropout_p = f.model.dropout;
  opts.speech2vec = f.model.speech2vec();
  if (!f.weights.empty()) {
    opts.fusion_weights = parse_weights(f.weights);
    if (opts.fusion_weights.size() != opts.streams.size()) {
      throw ConfigError("--weights needs one value per stream");
    }
  }
  OutputDir dir(f.out);
  TrainReport report;
  const IntentModels models =
      train_intent_models(corpus, opts, base_resources(f.model.embeddings), &report);
  for (const auto& p : save_intent_models(models, dir.root())) dir.record(p);

  json j;
  j["utterances"] = corpus.records().size();
  j["streams"] = json::object();
  for (const auto& [kind, loss] : report.stream_loss) {
    j["streams"][std::string(stream_name(kind))] = {{"epochs", loss.size()},
                                                    {"epoch_loss", loss}};
  }
  if (!report.speech2vec_loss.empty()) j["speech2vec_loss"] = report.speech2vec_loss;
  j["fusion_weights"] = models.policy.weights;
  dir.write("train_report.json", j.dump(2) + "\n");

  json params = f.model.params();
  params["weights"] = f.weights.empty() ? "uniform" : f.weights;
  dir.finish("train", f.seed, params);
  for (const auto& [kind, loss] : report.stream_loss) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-10s epochs=%zu final_loss=%.4f\n",
                  std::string(stream_name(kind)).c_str(), loss.size(),
                  loss.empty() ? 0.0 : loss.back());
    log << line;
  }
}

// ---- eval -------------------------------------------------------------------

struct EvalFlags {
  std::uint64_t seed = 0;
  std::string corpus;
  std::string out;
  int k = 5;
  ModelFlags model;
};

void cmd_eval(const EvalFlags& f, std::ostream& log) {
  const Corpus corpus = Corpus::open(f.corpus);
  EvalOptions opts;
  opts.k = f.k;
  opts.seed = f.seed;
  opts.streams = parse_streams(f.model.streams);
  opts.epochs = f.model.epochs;
  opts.hidden_units = f.model.hidden;
  opts.lr = f.model.lr;
  opts.dropout_p = f.model.dropout;
  opts.speech2vec = f.model.speech2vec();
  OutputDir dir(f.out);
  const EvalReport report = evaluate_kfold(corpus, opts, base_resources(f.model.embeddings));
  const std::string table = report_table(report);
  dir.write("report.json", report_json(report));
  dir.write("report.txt", table);
  json params = f.model.params();
  params["k"] = f.k;
  dir.finish("eval", f.seed, params);
  log << table;
}

// ---- stream -----------------------------------------------------------------

struct StreamFlags {
  std::uint64_t seed = 0;
  std::string corpus;
  std::string models;
  std::string out;
  std::string audio;
  std::string spotter = "oracle";
  double tau = WakeConfig{}.tau;
  double eou_ms = WakeConfig{}.eou_silence_ms;
  int chunk = StreamOptions{}.chunk_samples;
  double gap_s = 0.8;
  double jitter_ms = 0.0;
  int max_utterances = 0;
  int split_k = 5;
  int per_word = 3;
  double accept = kDtwAcceptThreshold;
  double margin = kDtwMargin;
  double vad_window_s = VadConfig{}.window_s;
  std::string embeddings;
};

json stats_json(const StreamStats& s) {
  return {{"utterances", s.utterances},
          {"truth_keywords", s.truth_keywords},
          {"detected_keywords", s.detected_keywords},
          {"hits", s.hits},
          {"false_alarms", s.false_alarms},
          {"recall", s.recall},
          {"false_alarms_per_utterance", s.false_alarms_per_utterance},
          {"mean_endpoint_error_s", s.mean_endpoint_error_s},
          {"endpoint_errors", s.endpoint_errors_s.size()},
          {"mean_latency_s", s.mean_latency_s},
          {"latencies", s.latencies_s.size()},
          {"decisions_matched", s.decisions_matched},
          {"decisions_correct", s.decisions_correct}};
}

void cmd_stream(const StreamFlags& f, std::ostream& log) {
  if (f.spotter != "oracle" && f.spotter != "dtw") {
    throw ConfigError("--spotter must be oracle or dtw");
  }
  if (!f.audio.empty() && f.spotter == "oracle") {
    throw ConfigError("--audio has no ground truth; use --spotter dtw");
  }
  const Corpus corpus = Corpus::open(f.corpus);
  const IntentModels models = load_intent_models(f.models, base_resources(f.embeddings));

  // Fold 0 of a stratified split is streamed; the rest supplies DTW templates.
  const auto folds = stratified_kfold(corpus.records(), f.split_k,
                                      derive_seed(f.seed, "stream/split"));
  std::vector<std::size_t> stream_set = folds.front().test;
  if (f.max_utterances > 0 && stream_set.size() > static_cast<std::size_t>(f.max_utterances)) {
    stream_set.resize(static_cast<std::size_t>(f.max_utterances));
  }

  StreamOptions opts;
  opts.wake.tau = f.tau;
  opts.wake.eou_silence_ms = f.eou_ms;
  opts.chunk_samples = f.chunk;
  opts.vad.window_s = f.vad_window_s;
  opts.wake.validate();

  StreamInput input;
  if (f.audio.empty()) {
    input = concatenate_utterances(corpus, stream_set, f.gap_s, derive_seed(f.seed, "stream/gaps"));
  } else {
    input.audio = read_wav(f.audio);
  }

  std::unique_ptr<KeywordSpotter> spotter;
  if (f.spotter == "oracle") {
    spotter = std::make_unique<OracleSpotter>(input.truth_segments(), f.jitter_ms / 1000.0,
                                              derive_seed(f.seed, "stream/jitter"),
                                              input.audio.sample_rate_hz);
  } else {
    DtwSpotterConfig cfg = build_dtw_templates(corpus, folds.front().train,
                                               MfccExtractor(opts.mfcc), f.per_word);
    cfg.accept_threshold = f.accept;
    cfg.margin = f.margin;
    spotter = std::make_unique<DtwSpotter>(std::move(cfg));
  }

  const StreamResult result = run_stream(input, *spotter, models, opts);
  OutputDir dir(f.out);
  std::string lines;
  const auto kinds = models.kinds();
  for (const auto& d : result.decisions) lines += decision_log_line(d, kinds) + "\n";
  dir.write("decisions.jsonl", lines);

  json stats = stats_json(result.stats);
  stats["decisions"] = result.decisions.size();
  stats["woke"] = std::count_if(result.decisions.begin(), result.decisions.end(),
                                [](const WakeDecision& d) { return d.woke; });
  stats["stream_seconds"] = static_cast<double>(input.audio.samples.size()) /
                            input.audio.sample_rate_hz;
  dir.write("stream_stats.json", stats.dump(2) + "\n");

  dir.finish("stream", f.seed,
             {{"spotter", f.spotter},
              {"tau", f.tau},
              {"eou_ms", f.eou_ms},
              {"chunk", f.chunk},
              {"gap_s", f.gap_s},
              {"jitter_ms", f.jitter_ms},
              {"utterances", stream_set.size()},
              {"accept", f.accept},
              {"margin", f.margin},
              {"vad_window_s", f.vad_window_s},
              {"audio", f.audio.empty() ? "corpus" : fs::path(f.audio).filename().string()}});
  char line[256];
  std::snprintf(line, sizeof(line),
                "decisions=%zu recall=%.4f fa/utt=%.4f endpoint_err=%.4fs latency=%.4fs\n",
                result.decisions.size(), result.stats.recall,
                result.stats.false_alarms_per_utterance, result.stats.mean_endpoint_error_s,
                result.stats.mean_latency_s);
  log << line;
}

// ---- glove-fixture ----------------------------------------------------------

struct GloveFlags {
  std::string out;
  int dim = kDefaultEmbeddingDim;
  std::uint64_t seed = kFixtureEmbeddingSeed;
};

void cmd_glove_fixture(const GloveFlags& f, std::ostream& log) {
  const auto words = vocabulary(default_keyword_map());
  const EmbeddingTable table = make_fixture_embeddings(words, f.dim, f.seed);
  std::ofstream out(f.out, std::ios::binary);
  write_embedding_table(out, table);
  if (!out) throw IoError("cannot write " + f.out);
  log << "wrote " << words.size() << " vectors of dim " << f.dim << " to " << f.out << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Wake-on-intent toolkit", "woi");
  app.require_subcommand(1);

  CorpusGenFlags gen;
  CLI::App* gen_cmd = add_command(app, "corpus-gen", "Synthesize a labeled keyword corpus");
  gen_cmd->add_option("--seed", gen.seed, "Root seed")->required();
  gen_cmd->add_option("--n", gen.n, "Number of utterances")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--domain", gen.domain, "Domain tag")->capture_default_str();

  TrainFlags train;
  CLI::App* train_cmd = add_command(app, "train", "Train stream classifiers on a corpus");
  train_cmd->add_option("--seed", train.seed, "Root seed")->required();
  train_cmd->add_option("--corpus", train.corpus, "Corpus directory or manifest")
      ->required()
      ->check(CLI::ExistingPath);
  train_cmd->add_option("--out", train.out, "Output directory")->required();
  train_cmd->add_option("--weights", train.weights, "Fusion weights, one per stream");
  train.model.attach(train_cmd);

  EvalFlags eval;
  CLI::App* eval_cmd = add_command(app, "eval", "k-fold evaluation with fusion ablations");
  eval_cmd->add_option("--seed", eval.seed, "Root seed")->required();
  eval_cmd->add_option("--corpus", eval.corpus, "Corpus directory or manifest")
      ->required()
      ->check(CLI::ExistingPath);
  eval_cmd->add_option("--out", eval.out, "Output directory")->required();
  eval_cmd->add_option("--k", eval.k, "Folds")->check(CLI::Range(2, 100))->capture_default_str();
  eval.model.attach(eval_cmd);

  StreamFlags stream;
  CLI::App* stream_cmd = add_command(app, "stream", "Simulate always-on wake-on-intent");
  stream_cmd->add_option("--seed", stream.seed, "Root seed")->required();
  stream_cmd->add_option("--corpus", stream.corpus, "Corpus directory or manifest")
      ->required()
      ->check(CLI::ExistingPath);
  stream_cmd->add_option("--models", stream.models, "Directory written by train")
      ->required()
      ->check(CLI::ExistingDirectory);
  stream_cmd->add_option("--out", stream.out, "Output directory")->required();
  stream_cmd->add_option("--audio", stream.audio, "Stream this WAV instead of the corpus")
      ->check(CLI::ExistingFile);
  stream_cmd->add_option("--spotter", stream.spotter, "oracle or dtw")
      ->check(CLI::IsMember({"oracle", "dtw"}))
      ->capture_default_str();
  stream_cmd->add_option("--tau", stream.tau, "Wake confidence threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  stream_cmd->add_option("--eou-ms", stream.eou_ms, "End-of-utterance silence")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stream_cmd->add_option("--chunk", stream.chunk, "Samples per chunk")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stream_cmd->add_option("--gap-s", stream.gap_s, "Noise between utterances")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  stream_cmd->add_option("--jitter-ms", stream.jitter_ms, "Oracle endpoint jitter")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  stream_cmd->add_option("--utterances", stream.max_utterances, "Cap on streamed utterances")
      ->check(CLI::NonNegativeNumber);
  stream_cmd->add_option("--split-k", stream.split_k, "Template/stream split folds")
      ->check(CLI::Range(2, 100))
      ->capture_default_str();
  stream_cmd->add_option("--per-word", stream.per_word, "DTW templates per word")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stream_cmd->add_option("--accept", stream.accept, "DTW acceptance threshold")
      ->capture_default_str();
  stream_cmd->add_option("--margin", stream.margin, "DTW margin to the background score")
      ->capture_default_str();
  stream_cmd->add_option("--vad-window-s", stream.vad_window_s, "VAD noise-floor window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stream_cmd->add_option("--embeddings", stream.embeddings, "GloVe-format word vectors")
      ->check(CLI::ExistingFile);

  GloveFlags glove;
  CLI::App* glove_cmd =
      add_command(app, "glove-fixture", "Write the seeded word-vector fixture");
  glove_cmd->add_option("--out", glove.out, "Output file")->required();
  glove_cmd->add_option("--dim", glove.dim, "Vector size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  glove_cmd->add_option("--seed", glove.seed, "Seed")->capture_default_str();

  try {
    const std::vector<std::string> expanded = expand_config(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "woi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << e.what() << '\n';
      return kExitOk;
    }
    err << "woi: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) {
      err << "run 'woi " << app.get_subcommands().front()->get_name() << " --help' for usage\n";
    }
    return kExitUsage;
  }

  try {
    if (*gen_cmd) cmd_corpus_gen(gen, out);
    if (*train_cmd) cmd_train(train, out);
    if (*eval_cmd) cmd_eval(eval, out);
    if (*stream_cmd) cmd_stream(stream, out);
    if (*glove_cmd) cmd_glove_fixture(glove, out);
  } catch (const ConfigError& e) {
    err << "woi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "woi: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace woi::cli
