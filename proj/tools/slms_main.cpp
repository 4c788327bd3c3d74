// Copyright 2026 The slms Authors. All Rights Reserved.
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

// slms: command-line front end for the SpeechLMScore toolkit.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slms/audio_io.hpp"
#include "slms/binary_io.hpp"
#include "slms/demo.hpp"
#include "slms/error.hpp"
#include "slms/evaluation.hpp"
#include "slms/features.hpp"
#include "slms/manifest.hpp"
#include "slms/parallel.hpp"
#include "slms/quantizer.hpp"
#include "slms/rnn.hpp"
#include "slms/scoring.hpp"
#include "slms/tokenizer.hpp"
#include "slms/ulm.hpp"

namespace fs = std::filesystem;
using namespace slms;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t default_workers() {
  const char* env = std::getenv("SLMS_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const long v = std::stol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("SLMS_WORKERS must be a positive integer, got '") + env + "'");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// `key = value` lines; '#' starts a comment line.
std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path.string() + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return out;
}

struct Input {
  std::string id;
  fs::path path;
};

bool is_input_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".wav" || ext == ".slmf";
}

// A manifest (.csv) lists utterances by utt_id; a directory contributes every
// .wav/.slmf file by stem; anything else is a single input.
std::vector<Input> collect_inputs(const fs::path& in) {
  std::vector<Input> out;
  if (fs::is_directory(in)) {
    for (const auto& entry : fs::directory_iterator(in)) {
      if (entry.is_regular_file() && is_input_file(entry.path())) {
        out.push_back({entry.path().stem().string(), entry.path()});
      }
    }
    std::sort(out.begin(), out.end(), [](const Input& a, const Input& b) { return a.id < b.id; });
  } else if (in.extension() == ".csv") {
    const EvalManifest m = read_manifest(in);
    for (const auto& row : m.rows) out.push_back({row.utt_id, m.resolve(row)});
  } else {
    if (!fs::exists(in)) fail(ErrorKind::FileNotFound, in.string() + ": no such file or directory");
    out.push_back({in.stem().string(), in});
  }
  if (out.empty()) fail(ErrorKind::EmptyInput, in.string() + ": no .wav or .slmf inputs");
  std::set<std::string> seen;
  for (const auto& i : out) {
    if (!seen.insert(i.id).second) {
      fail(ErrorKind::InvariantViolation, in.string() + ": duplicate input id '" + i.id + "'");
    }
  }
  return out;
}

// Every long option of the subcommand except the run-control ones, in
// declaration order.
ConfigEcho resolved_config(const CLI::App& sub) {
  static const std::set<std::string> skip = {"help", "config", "workers"};
  ConfigEcho out;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (skip.count(name) || opt->get_lnames().empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      const auto res = opt->reduced_results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
    } else {
      value = opt->get_default_str();
      if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
    }
    if (value.empty() && opt->get_expected_max() == 0) value = "false";
    out.emplace_back(name, value);
  }
  return out;
}

void print_config(std::ostream& os, const std::string& command, const ConfigEcho& config,
                  std::size_t workers) {
  os << "# slms " << command << "\n";
  for (const auto& [k, v] : config) os << k << " = " << v << "\n";
  os << "workers = " << workers << "\n";
}

struct FrontEndFlags {
  FrontEndConfig cfg;
  std::string resample = "on";

  void add(CLI::App* sub) {
    sub->add_option("--n-mels", cfg.logmel.n_mels, "Mel bands");
    sub->add_option("--window", cfg.logmel.window, "Analysis window in seconds");
    sub->add_option("--hop", cfg.logmel.hop, "Frame hop in seconds");
    sub->add_option("--fft-size", cfg.logmel.fft_size, "FFT length in samples");
    sub->add_option("--mel-low", cfg.logmel.mel_low, "Lowest filter edge in Hz");
    sub->add_option("--mel-high", cfg.logmel.mel_high, "Highest filter edge in Hz");
    sub->add_option("--resample", resample, "Sample-rate mismatch handling")
        ->check(CLI::IsMember({"on", "error"}));
    sub->add_flag("--peak-normalize", cfg.peak_normalize, "Scale each waveform to unit peak");
  }

  FrontEndConfig resolve() const {
    FrontEndConfig out = cfg;
    out.resample = resample == "on";
    out.logmel.validate(out.target_rate);
    return out;
  }
};

std::string policy_help() { return "Token policy: dedup or keep-repeats"; }

void print_kv(const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) std::cout << k << ": " << v << "\n";
}

// Text artifacts are recognised by their leading bytes or header line.
void run_info(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  ByteReader probe(bytes, path.string());
  std::cout << "file: " << path.string() << "\n";
  if (probe.has_magic("SLMF")) {
    const FeatureSequence fs = decode_features(bytes, path.string());
    print_kv({{"type", "features"},
              {"version", std::to_string(kFeatureFileVersion)},
              {"T", std::to_string(fs.num_frames)},
              {"D", std::to_string(fs.dim)}});
    return;
  }
  if (probe.has_magic("SLMC")) {
    const Codebook cb = decode_codebook(bytes, path.string());
    print_kv({{"type", "codebook"},
              {"version", std::to_string(kCodebookFileVersion)},
              {"V", std::to_string(cb.vocab_size)},
              {"D", std::to_string(cb.dim)},
              {"standardize", cb.standardize ? "true" : "false"}});
    return;
  }
  const std::string text(bytes.begin(), bytes.end());
  if (probe.has_magic("SLMR") || text.find("\\data\\") != std::string::npos) {
    const auto lm = load_lm(path);
    std::cout << "type: unit-lm\n";
    if (lm->backend() == "rnn") std::cout << "version: " << kRnnFileVersion << "\n";
    print_kv(lm->describe());
    return;
  }
  if (text.rfind("utt_id,score,num_tokens,status", 0) == 0) {
    const auto scores = parse_scores_csv(text, path.string());
    const auto ok = std::count_if(scores.begin(), scores.end(), [](const auto& s) { return s.ok(); });
    print_kv({{"type", "scores"},
              {"rows", std::to_string(scores.size())},
              {"ok", std::to_string(ok)}});
    return;
  }
  if (text.rfind("utt_id,system_id,path,mos", 0) == 0) {
    const EvalManifest m = parse_manifest(text, path.string());
    std::set<std::string> systems;
    for (const auto& r : m.rows) systems.insert(r.system_id);
    print_kv({{"type", "manifest"},
              {"rows", std::to_string(m.rows.size())},
              {"systems", std::to_string(systems.size())}});
    return;
  }
  if (!text.empty() && text.front() == '{') {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_object() && j.contains("format_version")) {
      std::cout << "type: " << (j.contains("points") ? "corruption-report" : "eval-report") << "\n";
      std::cout << "version: " << j["format_version"].dump() << "\n";
      for (const char* level : {"utterance", "system"}) {
        if (!j.contains(level)) continue;
        for (const char* key : {"lcc", "srcc", "ktau", "n"}) {
          std::cout << level << "." << key << ": " << j[level][key].dump() << "\n";
        }
      }
      return;
    }
  }
  if (text.find('\t') != std::string::npos) {
    std::size_t lines = 0, tokens = 0;
    Token max_token = 0;
    for (const auto& ts : parse_token_corpus(text, std::numeric_limits<std::uint32_t>::max(),
                                             TokenPolicy::KeepRepeats, path.string())) {
      ++lines;
      tokens += ts.tokens.size();
      for (Token t : ts.tokens) max_token = std::max(max_token, t);
    }
    print_kv({{"type", "token-corpus"},
              {"utterances", std::to_string(lines)},
              {"tokens", std::to_string(tokens)},
              {"max_token", std::to_string(max_token)}});
    return;
  }
  fail(ErrorKind::UnsupportedFormat, path.string() + ": unrecognised artifact");
}

// Places `--key=value` pairs from --config right after the subcommand so that
// flags given on the command line (parsed later, last one wins) override them.
std::vector<std::string> expand_config(std::vector<std::string> args, CLI::App& app) {
  std::size_t sub_pos = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (!args[i].empty() && args[i][0] != '-') {
      sub_pos = i;
      break;
    }
  }
  if (sub_pos == 0) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[sub_pos]);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::optional<fs::path> config_path;
  for (std::size_t i = sub_pos + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (!config_path) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : read_config_file(*config_path)) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config" || key == "help") {
      throw UsageError(config_path->string() + ": unknown key '" + key + "' for '" + args[sub_pos] + "'");
    }
    injected.push_back("--" + key + "=" + value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SpeechLMScore toolkit: tokenize speech, train unit LMs, score and evaluate", "slms"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::size_t workers = 1;
  std::string config_file;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--workers", workers, "Parallel workers (default: $SLMS_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--config", config_file, "File of 'key = value' lines mirroring the flags");
  };

  // features
  std::string feat_in, feat_out;
  FrontEndFlags feat_fe;
  auto* features = app.add_subcommand("features", "Extract log-mel feature files");
  features->add_option("--in", feat_in, "Audio file, directory or manifest")->required();
  features->add_option("--out", feat_out, "Output directory for .slmf files")->required();
  feat_fe.add(features);
  common(features);

  // train-quantizer
  std::string tq_in, tq_out;
  std::size_t tq_vocab = 50;
  KMeansConfig tq_cfg;
  FrontEndFlags tq_fe;
  auto* train_q = app.add_subcommand("train-quantizer", "Fit the k-means codebook");
  train_q->add_option("--in", tq_in, "Feature/audio file, directory or manifest")->required();
  train_q->add_option("--out", tq_out, "Codebook output path")->required();
  train_q->add_option("--vocab-size", tq_vocab, "Number of units V")->check(CLI::PositiveNumber);
  train_q->add_option("--max-iters", tq_cfg.max_iters, "Lloyd iterations per restart");
  train_q->add_option("--tol", tq_cfg.rel_tol, "Relative inertia improvement to stop");
  train_q->add_option("--seed", tq_cfg.seed, "Seed; restart r uses seed + r");
  train_q->add_option("--n-init", tq_cfg.n_init, "k-means++ restarts");
  train_q->add_option("--max-frames", tq_cfg.max_frames, "Reservoir-sample larger corpora");
  train_q->add_flag("--standardize", tq_cfg.standardize, "Per-dimension standardization");
  tq_fe.add(train_q);
  common(train_q);

  // tokenize
  std::string tok_in, tok_out, tok_codebook, tok_policy = "dedup";
  FrontEndFlags tok_fe;
  auto* tokenize_cmd = app.add_subcommand("tokenize", "Map utterances to unit sequences");
  tokenize_cmd->add_option("--codebook", tok_codebook, "Codebook path")->required();
  tokenize_cmd->add_option("--policy", tok_policy, policy_help())
      ->check(CLI::IsMember({"dedup", "keep-repeats"}));
  tokenize_cmd->add_option("--in", tok_in, "Manifest, directory or single file")->required();
  tokenize_cmd->add_option("--out", tok_out, "Token corpus output")->required();
  tok_fe.add(tokenize_cmd);
  common(tokenize_cmd);

  // train-ulm
  std::string lm_tokens, lm_out, lm_codebook, lm_policy = "dedup", lm_backend = "ngram";
  std::size_t lm_vocab = 0;
  TrainConfig lm_cfg;
  auto* train_ulm = app.add_subcommand("train-ulm", "Train a unit language model");
  train_ulm->add_option("--tokens", lm_tokens, "Token corpus")->required();
  train_ulm->add_option("--out", lm_out, "Model output (ARPA for ngram, SLMR for rnn)")->required();
  auto* vocab_opt = train_ulm->add_option("--vocab-size", lm_vocab, "Number of units V");
  auto* cb_opt = train_ulm->add_option("--codebook", lm_codebook, "Take V from this codebook");
  vocab_opt->excludes(cb_opt);
  train_ulm->add_option("--policy", lm_policy, policy_help())
      ->check(CLI::IsMember({"dedup", "keep-repeats"}));
  train_ulm->add_option("--backend", lm_backend, "ngram or rnn")->check(CLI::IsMember({"ngram", "rnn"}));
  train_ulm->add_option("--order", lm_cfg.order, "n-gram order");
  train_ulm->add_option("--discount", lm_cfg.discount, "Absolute discount");
  train_ulm->add_option("--embed", lm_cfg.embed, "Embedding size");
  train_ulm->add_option("--hidden", lm_cfg.hidden, "LSTM hidden units");
  train_ulm->add_option("--layers", lm_cfg.layers, "LSTM layers");
  train_ulm->add_option("--lr", lm_cfg.lr, "Adam learning rate");
  train_ulm->add_option("--dropout", lm_cfg.dropout, "Dropout rate");
  train_ulm->add_option("--epochs", lm_cfg.epochs, "Training epochs");
  train_ulm->add_option("--bptt", lm_cfg.bptt_len, "Truncated BPTT length");
  train_ulm->add_option("--clip", lm_cfg.grad_clip, "Global gradient-norm clip");
  train_ulm->add_option("--batch-size", lm_cfg.batch_size, "Sequences per batch");
  train_ulm->add_option("--seed", lm_cfg.seed, "Initialization and shuffling seed");
  common(train_ulm);

  // score
  std::string sc_codebook, sc_ulm, sc_policy = "dedup", sc_manifest, sc_out;
  double sc_temperature = 1.0;
  bool sc_include_eos = false;
  FrontEndFlags sc_fe;
  auto* score = app.add_subcommand("score", "Compute SpeechLMScore per utterance");
  score->add_option("--codebook", sc_codebook, "Codebook path")->required();
  score->add_option("--ulm", sc_ulm, "Unit LM (ARPA or SLMR)")->required();
  score->add_option("--policy", sc_policy, policy_help())->check(CLI::IsMember({"dedup", "keep-repeats"}));
  score->add_option("--temperature", sc_temperature, "Softmax temperature")->check(CLI::PositiveNumber);
  score->add_flag("--include-eos", sc_include_eos, "Count the end-of-sequence term");
  score->add_option("--manifest", sc_manifest, "Manifest CSV")->required();
  score->add_option("--out", sc_out, "Scores CSV output")->required();
  sc_fe.add(score);
  common(score);

  // evaluate
  std::string ev_manifest, ev_scores, ev_out;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Correlate scores with MOS");
  evaluate_cmd->add_option("--manifest", ev_manifest, "Manifest CSV with MOS")->required();
  evaluate_cmd->add_option("--scores", ev_scores, "Scores CSV")->required();
  evaluate_cmd->add_option("--out", ev_out, "Report JSON output")->required();
  common(evaluate_cmd);

  // corruption-bench
  std::vector<double> cb_rates = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::uint64_t cb_seed = 0;
  std::string cb_ulm, cb_tokens, cb_out;
  std::size_t cb_vocab = 50;
  auto* corruption = app.add_subcommand("corruption-bench", "Mean score under random token substitution");
  corruption->add_option("--rates", cb_rates, "Substitution rates")->delimiter(',')->check(CLI::Range(0.0, 1.0));
  corruption->add_option("--seed", cb_seed, "Seed; rate i uses seed + i");
  auto* cb_ulm_opt = corruption->add_option("--ulm", cb_ulm, "Unit LM; omit for the synthetic setup");
  auto* cb_tok_opt = corruption->add_option("--tokens", cb_tokens, "Clean token corpus for --ulm");
  cb_ulm_opt->needs(cb_tok_opt);
  cb_tok_opt->needs(cb_ulm_opt);
  corruption->add_option("--vocab-size", cb_vocab, "V of the synthetic setup")->check(CLI::Range(2, 100000));
  corruption->add_option("--out", cb_out, "Report JSON output (default: stdout)");
  common(corruption);
  // --rates takes all values; TakeLast would keep only one.
  corruption->get_option("--rates")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  // info
  std::string info_path;
  auto* info = app.add_subcommand("info", "Print metadata of any slms artifact");
  info->add_option("path", info_path, "Artifact file")->required();

  // demo-corpus
  std::string demo_out;
  DemoCorpusConfig demo_cfg;
  auto* demo = app.add_subcommand("demo-corpus", "Write the synthetic demo corpus");
  demo->add_option("--out", demo_out, "Output directory")->required();
  demo->add_option("--seed", demo_cfg.seed, "Seed");
  demo->add_option("--train-files", demo_cfg.num_train_files, "Clean training files");
  demo->add_option("--systems", demo_cfg.num_systems, "Evaluated systems")->check(CLI::PositiveNumber);
  demo->add_option("--files-per-system", demo_cfg.files_per_system, "Files per system")
      ->check(CLI::PositiveNumber);
  common(demo);

  std::vector<std::string> args(argv, argv + argc);
  try {
    workers = default_workers();
    args = expand_config(args, app);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "slms: " << e.what() << "\n";
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    // corruption-bench without --out writes its JSON to stdout.
    std::ostream& echo = (sub == corruption && cb_out.empty()) ? std::cerr : std::cout;
    if (name != "info") print_config(echo, name, resolved_config(*sub), workers);

    if (sub == features) {
      const FrontEndConfig fe = feat_fe.resolve();
      const auto inputs = collect_inputs(feat_in);
      fs::create_directories(feat_out);
      parallel_for(inputs.size(), workers, [&](std::size_t i) {
        write_features(load_input_features(inputs[i].path, fe), fs::path(feat_out) / (inputs[i].id + ".slmf"));
      });
      std::cout << "wrote " << inputs.size() << " feature files to " << feat_out << "\n";
    } else if (sub == train_q) {
      const FrontEndConfig fe = tq_fe.resolve();
      const auto inputs = collect_inputs(tq_in);
      std::vector<FeatureSequence> corpus(inputs.size());
      parallel_for(inputs.size(), workers,
                   [&](std::size_t i) { corpus[i] = load_input_features(inputs[i].path, fe); });
      KMeansConfig cfg = tq_cfg;
      cfg.workers = workers;
      const KMeansResult res = fit_kmeans(corpus, tq_vocab, cfg);
      save_codebook(res.codebook, tq_out);
      for (std::size_t r = 0; r < res.restart_inertias.size(); ++r) {
        std::printf("restart %zu inertia %.9g\n", r, res.restart_inertias[r]);
      }
      std::printf("best restart %zu after %zu iterations\n", res.best_restart, res.inertia_trace.size());
    } else if (sub == tokenize_cmd) {
      const FrontEndConfig fe = tok_fe.resolve();
      const Codebook cb = load_codebook(tok_codebook);
      const TokenPolicy policy = parse_policy(tok_policy);
      auto inputs = collect_inputs(tok_in);
      std::sort(inputs.begin(), inputs.end(), [](const Input& a, const Input& b) { return a.id < b.id; });
      std::vector<TokenSequence> corpus(inputs.size());
      parallel_for(inputs.size(), workers, [&](std::size_t i) {
        corpus[i] = tokenize(load_input_features(inputs[i].path, fe), cb, policy, inputs[i].id);
      });
      write_token_corpus(tok_out, corpus);
      std::cout << "wrote " << corpus.size() << " token sequences to " << tok_out << "\n";
    } else if (sub == train_ulm) {
      std::size_t vocab = lm_vocab;
      if (!lm_codebook.empty()) vocab = load_codebook(lm_codebook).vocab_size;
      if (vocab == 0) throw UsageError("train-ulm: one of --vocab-size or --codebook is required");
      TrainConfig cfg = lm_cfg;
      cfg.backend = parse_backend(lm_backend);
      const TokenPolicy policy = parse_policy(lm_policy);
      const auto corpus = read_token_corpus(lm_tokens, vocab, policy);
      std::vector<double> trace;
      const auto lm = train_lm(corpus, vocab, policy, cfg, &trace);
      save_lm(*lm, lm_out);
      for (std::size_t e = 0; e < trace.size(); ++e) std::printf("epoch %zu loss %.6f\n", e + 1, trace[e]);
      print_kv(lm->describe());
    } else if (sub == score) {
      ScoringPipeline pipeline;
      pipeline.codebook = std::make_shared<const Codebook>(load_codebook(sc_codebook));
      pipeline.lm = load_lm(sc_ulm);
      pipeline.policy = parse_policy(sc_policy);
      pipeline.temperature = sc_temperature;
      pipeline.include_eos = sc_include_eos;
      pipeline.frontend = sc_fe.resolve();
      check_components(pipeline);
      const auto reports = score_corpus(read_manifest(sc_manifest), pipeline, workers);
      write_scores_csv(reports, sc_out);
      const auto ok = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.ok(); });
      std::cout << "scored " << ok << "/" << reports.size() << " utterances to " << sc_out << "\n";
    } else if (sub == evaluate_cmd) {
      const EvalReport report = evaluate(read_manifest(ev_manifest), read_scores_csv(ev_scores));
      write_file_text(ev_out, format_report_json(report, resolved_config(*sub)));
      std::cout << "wrote " << ev_out << "\n";
    } else if (sub == corruption) {
      std::shared_ptr<const UnitLM> lm;
      std::vector<TokenSequence> clean;
      if (cb_ulm.empty()) {
        auto setup = synthetic_corruption_setup(cb_vocab, 500, 100, 3, cb_seed);
        lm = setup.lm;
        clean = std::move(setup.clean);
      } else {
        lm = load_lm(cb_ulm);
        clean = read_token_corpus(cb_tokens, lm->vocab().units, lm->policy());
      }
      const auto points = corruption_benchmark(*lm, clean, cb_rates, cb_seed, workers);
      const std::string json = format_corruption_json(points, resolved_config(*sub));
      if (cb_out.empty()) {
        std::cout << json;
      } else {
        write_file_text(cb_out, json);
        std::cout << "wrote " << cb_out << "\n";
      }
    } else if (sub == info) {
      run_info(info_path);
    } else if (sub == demo) {
      write_demo_corpus(demo_out, demo_cfg);
      std::cout << "wrote demo corpus to " << demo_out << "\n";
    }
  } catch (const UsageError& e) {
    std::cerr << "slms " << name << ": " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "slms " << name << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidArgument ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "slms " << name << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
