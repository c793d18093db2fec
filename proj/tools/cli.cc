// Copyright 2026 The Nextword Authors.
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

#include <omp.h>
#include <signal.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nextword/error.h"
#include "nextword/eval.h"
#include "nextword/ngram_model.h"
#include "nextword/normalize.h"
#include "nextword/persistence.h"
#include "nextword/predictor.h"
#include "nextword/service.h"
#include "nextword/utf8.h"

namespace nextword {
namespace {

struct NormalizationFlags {
  std::string script_mode = "mixed";
  std::string map_file;
  bool no_map = false;
  bool keep_digits = false;
  bool keep_punctuation = false;
  bool keep_case = false;

  void Register(CLI::App* app) {
    app->add_option("--script-mode", script_mode,
                    "Token filter: arabic, latin or mixed")
        ->check(CLI::IsMember({"arabic", "latin", "mixed"}));
    app->add_option("--map", map_file,
                    "Codepoint map file (default: built-in Sorani map)");
    app->add_flag("--no-map", no_map, "Disable codepoint mapping");
    app->add_flag("--keep-digits", keep_digits, "Do not strip digits");
    app->add_flag("--keep-punctuation", keep_punctuation,
                  "Do not strip punctuation and symbols");
    app->add_flag("--keep-case", keep_case, "Do not lowercase Latin letters");
  }

  NormalizationConfig Build() const {
    NormalizationConfig config;
    config.script_mode = ParseScriptMode(script_mode);
    if (!map_file.empty()) {
      config.codepoint_map = CodepointMap::LoadFile(map_file);
    } else if (!no_map) {
      config.codepoint_map = CodepointMap::SoraniDefault();
    }
    config.strip_digits = !keep_digits;
    config.strip_punctuation = !keep_punctuation;
    config.lowercase_latin = !keep_case;
    return config;
  }
};

// Reads a UTF-8 text file, reporting the first malformed line.
std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open", path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read failed", path);
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    if (!utf8::IsValid(std::string_view(text).substr(pos, nl - pos))) {
      throw Error(ErrorCode::kInvalidEncoding, "invalid UTF-8", path, line);
    }
    pos = nl + 1;
    ++line;
  }
  return text;
}

void WriteText(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open for writing", path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed", path);
}

LoadedModel Load(const std::string& dir) {
  LoadedModel loaded = LoadModel(dir);
  for (const std::string& w : loaded.warnings) {
    std::cerr << "nextword: warning: " << w << "\n";
  }
  return loaded;
}

std::string FormatScore(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", score);
  return buf;
}

void PrintSuggestions(const std::vector<Suggestion>& suggestions) {
  std::size_t rank = 0;
  for (const Suggestion& s : suggestions) {
    std::cout << ++rank << '\t' << s.word << '\t' << FormatScore(s.score)
              << '\t' << s.matched_order << '\n';
  }
}

std::string JoinWords(const std::vector<std::string>& words) {
  std::string out;
  for (const std::string& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// --- subcommands --------------------------------------------------------------

struct CleanArgs {
  std::string input;
  std::string output;
  bool transliterate = false;
  NormalizationFlags norm;
};

int RunClean(const CleanArgs& args) {
  const NormalizationConfig config = args.norm.Build();
  CleanStats stats;
  std::vector<Sentence> sentences =
      NormalizeText(ReadText(args.input), config, &stats);
  if (args.transliterate) {
    for (Sentence& s : sentences) s.tokens = TransliterateSoraniToLatin(s.tokens);
  }
  const std::string text = RenderSentences(sentences);
  if (args.output.empty() || args.output == "-") {
    std::cout << text;
  } else {
    WriteText(args.output, text);
  }
  std::cerr << "sentences\t" << stats.sentences << "\n"
            << "tokens\t" << stats.tokens << "\n"
            << "dropped_tokens\t" << stats.dropped_tokens << "\n"
            << "removed_codepoints\t" << stats.removed_codepoints << "\n";
  return kExitOk;
}

struct BuildArgs {
  std::string corpus;
  std::string model;
  int max_order = kMaxOrder;
  uint64_t min_count = 1;
  double lambda = 0.4;
  bool overwrite = false;
  std::size_t top = 10;
  std::string plot_data;
  NormalizationFlags norm;
};

int RunBuild(const BuildArgs& args) {
  const NormalizationConfig config = args.norm.Build();
  BackoffConfig backoff;
  backoff.lambda = args.lambda;
  backoff.Validate();
  if (args.max_order < 1 || args.max_order > kMaxOrder) {
    throw Error(ErrorCode::kOrderOutOfRange,
                "--max-order must lie in 1.." + std::to_string(kMaxOrder));
  }
  if (args.min_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "--min-count must be at least 1");
  }
  const std::vector<Sentence> sentences =
      NormalizeText(ReadText(args.corpus), config);
  BuildOptions options;
  options.max_order = args.max_order;
  options.min_count = args.min_count;
  options.fingerprint = Fingerprint(config);
  const LanguageModel model = BuildModel(sentences, options);
  SaveOptions save;
  save.overwrite = args.overwrite;
  save.min_count = args.min_count;
  SaveModel(model, config, backoff, args.model, save);

  std::string report = "order\trank\tngram\tcount\n";
  std::string plot = "order\trank\tngram\tcount\tshare\n";
  for (int n = 1; n <= model.max_order(); ++n) {
    const NGramTable& table = model.table(n);
    const std::vector<NGramTable::Row> rows = table.SortedRows();
    std::size_t rank = 0;
    for (const NGramTable::Row& row : rows) {
      if (rank == args.top) break;
      ++rank;
      const std::string prefix = std::to_string(n) + "\t" +
                                 std::to_string(rank) + "\t" + row.key + "\t" +
                                 std::to_string(row.count);
      report += prefix + "\n";
      char share[32];
      std::snprintf(share, sizeof(share), "%.6f",
                    static_cast<double>(row.count) /
                        static_cast<double>(table.total()));
      plot += prefix + "\t" + share + "\n";
    }
    std::cerr << n << "-gram: " << table.size() << " rows, total "
              << table.total() << "\n";
  }
  std::cout << report;
  if (!args.plot_data.empty()) WriteText(args.plot_data, plot);
  std::cerr << "sentences\t" << sentences.size() << "\nN\t"
            << model.corpus_size() << "\nvocab\t" << model.vocab_size()
            << "\nsaved\t" << args.model << "\n";
  return kExitOk;
}

struct PredictArgs {
  std::string model;
  std::vector<std::string> context;
  std::optional<std::size_t> k;
  std::optional<double> lambda;
  std::optional<std::string> prefix;
};

int RunPredict(const PredictArgs& args) {
  LoadedModel loaded = Load(args.model);
  if (args.lambda) loaded.engine.backoff.lambda = *args.lambda;
  loaded.engine.backoff.Validate();
  PredictionRequest request;
  request.context_text = JoinWords(args.context);
  request.k = args.k;
  request.prefix = args.prefix;
  PrintSuggestions(Predict(loaded.engine, request));
  return kExitOk;
}

struct CompleteArgs {
  std::string model;
  std::string prefix;
  std::size_t k = 5;
};

int RunComplete(const CompleteArgs& args) {
  const LoadedModel loaded = Load(args.model);
  const std::string prefix =
      NormalizePrefix(args.prefix, loaded.engine.normalization);
  PrintSuggestions(CompletePrefix(loaded.engine.model, prefix, args.k));
  return kExitOk;
}

struct EvalArgs {
  std::string model;
  std::string corpus;
  std::string test;
  std::optional<std::string> split;
  std::size_t k = 5;
  int max_order = 0;
  double lambda = 0.4;
  double holdout = 0.1;
  uint64_t seed = 42;
  bool no_backoff = false;
  std::string json;
  NormalizationFlags norm;
};

int RunEval(const EvalArgs& args) {
  EvalConfig config;
  config.k = args.k;
  config.max_order = args.max_order;
  config.lambda = args.lambda;
  config.holdout_fraction = args.holdout;
  config.seed = args.seed;
  config.backoff = !args.no_backoff;
  if (args.split) {
    config.split = ParseSplitMode(*args.split);
  } else {
    config.split = args.test.empty() ? SplitMode::kHeldOut : SplitMode::kFile;
  }
  config.Validate();
  if (args.model.empty() == args.corpus.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "give exactly one of --model or --corpus");
  }
  if ((config.split == SplitMode::kFile) == args.test.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "--test is required with, and only with, --split file");
  }
  if (!args.model.empty() && config.split != SplitMode::kFile) {
    throw Error(ErrorCode::kInvalidArgument,
                "a saved model can only be evaluated against --test");
  }

  std::optional<LanguageModel> model;
  NormalizationConfig norm;
  std::vector<Sentence> test;
  std::string train_id;
  if (!args.model.empty()) {
    LoadedModel loaded = Load(args.model);
    norm = loaded.engine.normalization;
    model.emplace(std::move(loaded.engine.model));
    train_id = args.model;
  } else {
    norm = args.norm.Build();
    std::vector<Sentence> sentences = NormalizeText(ReadText(args.corpus), norm);
    std::vector<Sentence> train;
    switch (config.split) {
      case SplitMode::kHeldOut: {
        SplitSentences split = HoldOut(sentences, config.holdout_fraction,
                                       config.seed);
        train = std::move(split.train);
        test = std::move(split.test);
        break;
      }
      case SplitMode::kResubstitution:
        train = sentences;
        test = std::move(sentences);
        break;
      case SplitMode::kFile:
        train = std::move(sentences);
        break;
    }
    BuildOptions build;
    build.max_order = config.max_order == 0 ? kMaxOrder : config.max_order;
    build.fingerprint = Fingerprint(norm);
    model.emplace(BuildModel(train, build));
    train_id = args.corpus;
  }
  std::string test_id;
  if (config.split == SplitMode::kFile) {
    test = NormalizeText(ReadText(args.test), norm);
    test_id = args.test;
  } else if (config.split == SplitMode::kHeldOut) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), " (held out %.3g, seed %llu)",
                  config.holdout_fraction,
                  static_cast<unsigned long long>(config.seed));
    test_id = args.corpus + buf;
  } else {
    test_id = args.corpus;
  }

  EvalReport report = EvaluateTopK(*model, test, config);
  report.train_id = train_id;
  report.test_id = test_id;
  std::cout << RenderReportTsv(report);
  if (!args.json.empty()) WriteText(args.json, RenderReportJson(report));
  return kExitOk;
}

struct BenchArgs {
  std::string mode = "scaling";
  std::string corpus;
  std::vector<std::size_t> sizes;
  std::size_t k = 5;
  int max_order = kMaxOrder;
  bool no_backoff = false;
  std::string model;
  std::size_t clients = 32;
  std::size_t requests = 2000;
  std::string text;
  NormalizationFlags norm;
};

int RunBench(const BenchArgs& args) {
  if (args.mode == "scaling") {
    if (args.corpus.empty() || args.sizes.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "scaling mode needs --corpus and --sizes");
    }
    EvalConfig config;
    config.k = args.k;
    config.max_order = args.max_order;
    config.backoff = !args.no_backoff;
    const std::vector<Sentence> sentences =
        NormalizeText(ReadText(args.corpus), args.norm.Build());
    const std::vector<ScalingRow> rows =
        BenchmarkScaling(sentences, args.sizes, config);
    std::cout << RenderScalingTsv(rows, config);
    return kExitOk;
  }

  if (args.model.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "service mode needs --model");
  }
  LoadedModel loaded = Load(args.model);
  PredictionService service(
      std::make_shared<const Engine>(std::move(loaded.engine)));
  ServerOptions server_options;
  server_options.port = 0;
  HttpServer server(service, server_options);
  const int port = server.Bind();
  std::thread serving([&server] { server.Serve(); });
  server.WaitUntilReady();

  LoadTestOptions load;
  load.port = port;
  load.clients = args.clients;
  load.requests = args.requests;
  nlohmann::json body;
  body["text"] = args.text;
  load.body = body.dump();
  const LoadTestResult result = RunLoadTest(load);
  server.Stop();
  serving.join();

  char line[256];
  std::snprintf(line, sizeof(line), "%zu\t%zu\t%zu\t%zu\t%.3f\t%.3f\t%.3f\n",
                args.clients, result.requests, result.failures,
                result.distinct_bodies, result.mean_ms, result.p95_ms,
                result.max_ms);
  std::cout << "clients\trequests\tfailures\tdistinct_bodies\tmean_ms\tp95_ms"
               "\tmax_ms\n"
            << line;
  return result.failures == 0 ? kExitOk : kExitIo;
}

struct ServeArgs {
  std::string model;
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::size_t threads = 64;
};

int RunServe(const ServeArgs& args) {
  // Block termination signals before any thread starts so that only the
  // watcher below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  LoadedModel loaded = Load(args.model);
  PredictionService service(
      std::make_shared<const Engine>(std::move(loaded.engine)));
  ServerOptions options;
  options.bind = args.bind;
  options.port = args.port;
  options.threads = args.threads;
  HttpServer server(service, options);
  const int port = server.Bind();
  std::cerr << "nextword: serving " << args.model << " on http://" << args.bind
            << ":" << port << "\n";

  std::thread watcher([&server, signals] {
    int received = 0;
    sigwait(&signals, &received);
    server.Stop();
  });
  server.Serve();
  // Serve() also returns if the listener fails; wake the watcher then.
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  return kExitOk;
}

int ExitCodeFor(const Error& e) {
  switch (KindOf(e.code())) {
    case ErrorKind::kUsage: return kExitUsage;
    case ErrorKind::kData: return kExitData;
    case ErrorKind::kIo: return kExitIo;
  }
  return kExitData;
}

}  // namespace

int RunCli(int argc, char** argv) {
  CLI::App app{"N-gram next-word prediction with Stupid Backoff", "nextword"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads for counting and evaluation (0 = default)")
      ->check(CLI::NonNegativeNumber);

  CleanArgs clean;
  CLI::App* clean_cmd =
      app.add_subcommand("clean", "Normalize a corpus to one sentence per line");
  clean_cmd->add_option("input", clean.input, "Raw UTF-8 corpus")->required();
  clean_cmd->add_option("-o,--output", clean.output, "Output file (default stdout)");
  clean_cmd->add_flag("--transliterate", clean.transliterate,
                      "Convert Sorani tokens to Latin script");
  clean.norm.Register(clean_cmd);

  BuildArgs build;
  CLI::App* build_cmd =
      app.add_subcommand("build", "Count n-grams and save a model directory");
  build_cmd->add_option("corpus", build.corpus, "UTF-8 corpus")->required();
  build_cmd->add_option("--model", build.model, "Output model directory")
      ->required();
  build_cmd->add_option("--max-order", build.max_order, "Highest n-gram order");
  build_cmd->add_option("--min-count", build.min_count,
                        "Drop n-grams seen fewer times");
  build_cmd->add_option("--lambda", build.lambda, "Backoff factor stored");
  build_cmd->add_flag("--overwrite", build.overwrite,
                      "Replace an existing model");
  build_cmd->add_option("--top", build.top, "Entries per order in the report");
  build_cmd->add_option("--plot-data", build.plot_data,
                        "Write per-order frequency tables for plotting");
  build.norm.Register(build_cmd);

  PredictArgs predict;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "Rank next-word suggestions for a context");
  predict_cmd->add_option("context", predict.context, "Context words");
  predict_cmd->add_option("--model", predict.model, "Model directory")
      ->required();
  predict_cmd->add_option("--k", predict.k, "Number of suggestions")
      ->check(CLI::PositiveNumber);
  predict_cmd->add_option("--lambda", predict.lambda, "Backoff factor");
  predict_cmd->add_option("--prefix", predict.prefix,
                          "Only words starting with this");

  CompleteArgs complete;
  CLI::App* complete_cmd =
      app.add_subcommand("complete", "Complete a word prefix");
  complete_cmd->add_option("prefix", complete.prefix, "Prefix")->required();
  complete_cmd->add_option("--model", complete.model, "Model directory")
      ->required();
  complete_cmd->add_option("--k", complete.k, "Number of completions")
      ->check(CLI::PositiveNumber);

  EvalArgs eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Top-k next-word accuracy per order");
  eval_cmd->add_option("--model", eval.model, "Saved model directory");
  eval_cmd->add_option("--corpus", eval.corpus, "Corpus to build from");
  eval_cmd->add_option("--test", eval.test, "Separate test file");
  eval_cmd->add_option("--split", eval.split, "heldout, file or resub")
      ->check(CLI::IsMember({"heldout", "file", "resub"}));
  eval_cmd->add_option("--k", eval.k, "Suggestions per prediction");
  eval_cmd->add_option("--max-order", eval.max_order,
                       "Highest order evaluated (default: all)");
  eval_cmd->add_option("--lambda", eval.lambda, "Backoff factor");
  eval_cmd->add_option("--holdout", eval.holdout, "Held-out fraction");
  eval_cmd->add_option("--seed", eval.seed, "Seed for the held-out split");
  eval_cmd->add_flag("--no-backoff", eval.no_backoff,
                     "Score each order in isolation");
  eval_cmd->add_option("--json", eval.json, "Also write the report as JSON");
  eval.norm.Register(eval_cmd);

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Corpus-size scaling or service latency benchmark");
  bench_cmd->add_option("--mode", bench.mode, "scaling or service")
      ->check(CLI::IsMember({"scaling", "service"}));
  bench_cmd->add_option("--corpus", bench.corpus, "Corpus (scaling)");
  bench_cmd->add_option("--sizes", bench.sizes,
                        "Training token counts, ascending (scaling)")
      ->delimiter(',');
  bench_cmd->add_option("--k", bench.k, "Suggestions per prediction");
  bench_cmd->add_option("--max-order", bench.max_order, "Model order");
  bench_cmd->add_flag("--no-backoff", bench.no_backoff,
                      "Score each order in isolation");
  bench_cmd->add_option("--model", bench.model, "Model directory (service)");
  bench_cmd->add_option("--clients", bench.clients,
                        "Concurrent clients (service)");
  bench_cmd->add_option("--requests", bench.requests,
                        "Total requests (service)");
  bench_cmd->add_option("--text", bench.text, "Request context (service)");
  bench.norm.Register(bench_cmd);

  ServeArgs serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--model", serve.model, "Model directory")->required();
  serve_cmd->add_option("--bind", serve.bind, "Bind address");
  serve_cmd->add_option("--port", serve.port, "Port")
      ->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--threads", serve.threads, "Request worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (threads > 0) omp_set_num_threads(threads);
    if (clean_cmd->parsed()) return RunClean(clean);
    if (build_cmd->parsed()) return RunBuild(build);
    if (predict_cmd->parsed()) return RunPredict(predict);
    if (complete_cmd->parsed()) return RunComplete(complete);
    if (eval_cmd->parsed()) return RunEval(eval);
    if (bench_cmd->parsed()) return RunBench(bench);
    if (serve_cmd->parsed()) return RunServe(serve);
  } catch (const Error& e) {
    std::cerr << "nextword: error: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "nextword: error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "nextword: error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace nextword
