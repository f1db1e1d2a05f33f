// Copyright 2026 The Retrieval Lab Authors.
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


#include "rlab/cli.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "rlab/config.h"
#include "rlab/evalsuite.h"
#include "rlab/experiment.h"
#include "rlab/io.h"
#include "rlab/lexindex.h"
#include "rlab/meqfilter.h"
#include "rlab/parallel.h"
#include "rlab/synthgen.h"
#include "rlab/trainer.h"

namespace rlab {
namespace {

namespace fs = std::filesystem;

std::string UtcNow() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string HashFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(bytes)));
  return buf;
}

std::string KebabCase(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

// Flags shared by every subcommand.
struct CommonFlags {
  std::string config_path;
  std::string workdir = ".";
  int threads = 0;
  std::map<std::string, std::string> overrides;  // config key -> value
};

// Resolved state for one subcommand invocation.
class Run {
 public:
  Run(std::string command, const CommonFlags& flags) : command_(std::move(command)) {
    started_at_ = UtcNow();
    workdir_ = flags.workdir;
    // The config path is taken as given (relative to the current directory).
    if (!flags.config_path.empty()) config_ = RunConfig::Load(flags.config_path);
    for (const auto& [key, value] : flags.overrides) config_.Set(key, value);

    int threads = config_.GetInt("threads", 1);
    if (const char* env = std::getenv("RETRIEVAL_LAB_THREADS"); env && *env) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception&) {
        throw ConfigError(std::string("RETRIEVAL_LAB_THREADS is not an integer: ") + env);
      }
    }
    if (flags.threads > 0) threads = flags.threads;
    if (threads < 1) throw ConfigError("threads must be >= 1");
    SetMaxThreads(threads);
  }

  const RunConfig& config() const { return config_; }
  fs::path Path(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : workdir_ / path;
  }
  fs::path Input(const std::string& p) {
    inputs_.push_back(p);
    return Path(p);
  }
  fs::path Output(const std::string& p) {
    outputs_.push_back(p);
    return Path(p);
  }
  void set_seed(uint64_t seed) { seed_ = seed; }

  // Writes <manifest_path> describing the run, hashing every output.
  void Finish(const std::string& manifest_path) {
    Json outputs = Json::array();
    for (const std::string& o : outputs_) {
      const fs::path p = Path(o);
      Json entry = {{"path", o}};
      if (fs::is_regular_file(p)) entry["fnv1a64"] = HashFile(p);
      outputs.push_back(entry);
    }
    Json manifest = {{"command", command_},
                     {"config", config_.ToJson()},
                     {"inputs", inputs_},
                     {"outputs", outputs},
                     {"seed", seed_},
                     {"started_at", started_at_},
                     {"finished_at", UtcNow()}};
    WriteJsonFile(Path(manifest_path), manifest);
  }

 private:
  std::string command_;
  fs::path workdir_;
  RunConfig config_;
  std::string started_at_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  uint64_t seed_ = 0;
};

std::string ManifestFor(const std::string& output) { return output + ".manifest.json"; }

std::string DirManifest(const std::string& dir, const std::string& command) {
  return (fs::path(dir) / (command + ".manifest.json")).string();
}

Json Report(const std::string& command, const std::vector<Json>& records) {
  return {{"command", command}, {"records", records}};
}

Bm25Index IndexFromConfig(const Corpus& corpus, const RunConfig& cfg) {
  return Bm25Index::Build(corpus.passages(), cfg.GetDouble("k1", 1.2),
                          cfg.GetDouble("b", 0.75));
}

QuestionBank LoadBank(const fs::path& path) {
  QuestionBank bank;
  for (Question& q : ReadQuestions(path)) bank.Add(std::move(q));
  return bank;
}

// ---- subcommands ----

void GenWorld(Run& run, const std::string& out_dir, std::ostream& out) {
  const WorldConfig cfg = WorldConfigFrom(run.config());
  run.set_seed(cfg.seed);
  const World world = GenerateWorld(cfg);
  fs::create_directories(run.Path(out_dir));
  for (const std::string& name : WriteWorld(world, run.Path(out_dir))) {
    run.Output((fs::path(out_dir) / name).string());
  }
  out << "passages            " << world.corpus.size() << "\n"
      << "questions           " << world.questions.size() << "\n"
      << "train examples      " << world.train.size() << "\n"
      << "contrast pairs      " << world.contrast_pairs.size() << "\n"
      << "eval triples        " << world.triples.size() << "\n"
      << "semantic pass rate  " << FormatDouble(world.self_check.semantic_pass_rate())
      << "\n";
  run.Finish(DirManifest(out_dir, "gen-world"));
}

void BuildIndex(Run& run, const std::string& corpus_path, const std::string& out_path,
                std::ostream& out) {
  const Corpus corpus(ReadPassages(run.Input(corpus_path)));
  const Bm25Index index = IndexFromConfig(corpus, run.config());
  index.Save(run.Output(out_path));
  out << "documents   " << index.size() << "\n"
      << "vocabulary  " << index.vocabulary_size() << "\n"
      << "avgdl       " << FormatDouble(index.avg_doc_length()) << "\n";
  run.Finish(ManifestFor(out_path));
}

struct FilterPaths {
  std::string questions, candidates, checkpoint, out, out_questions;
};

void FilterMeq(Run& run, const FilterPaths& paths, std::ostream& out) {
  const RunConfig& cfg = run.config();
  const FilterConfig filter = FilterConfigFrom(cfg);
  const QuestionBank bank = LoadBank(run.Input(paths.questions));
  const DualEncoder model = paths.checkpoint.empty()
                                ? DualEncoder(EncoderConfigFrom(cfg))
                                : DualEncoder::Load(run.Input(paths.checkpoint));
  const std::string detector_name = cfg.GetString("paraphrase_detector", "content");
  ParaphraseDetector detector;
  if (detector_name == "content") {
    detector = ContentMultisetParaphrase;
  } else if (detector_name == "synonym") {
    detector = SynonymAwareParaphrase;
  } else {
    throw ConfigError("paraphrase_detector must be 'content' or 'synonym'");
  }
  QuestionEmbedder embed = [&model](const Question& q) {
    return model.Encode(Side::kQuestion, q.tokens);
  };

  // Group candidates by original, keeping first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<MeqCandidate>> groups;
  ForEachJsonl(run.Input(paths.candidates), [&](const Json& j) {
    const std::string original = j.at("original_id").get<std::string>();
    if (!bank.Contains(original)) throw DataError("unknown original_id " + original);
    auto [it, inserted] = groups.try_emplace(original);
    if (inserted) order.push_back(original);
    const int frequency = j.value("frequency", 1);
    if (frequency < 1) throw DataError("frequency must be >= 1");
    const std::string id = original + ":c" + std::to_string(it->second.size());
    it->second.push_back(
        {MakeQuestion(id, j.at("candidate_text").get<std::string>(),
                      j.at("candidate_answers").get<std::vector<std::string>>()),
         frequency});
  });

  std::vector<Json> pair_records;
  std::vector<Question> variants;
  std::map<std::string, int> failures;
  int selected = 0;
  for (const std::string& original : order) {
    const std::vector<MeqCandidate>& cands = groups[original];
    const FilterOutcome outcome =
        FilterCandidates(bank.at(original), cands, filter, detector, embed);
    for (size_t i = 0; i < cands.size(); ++i) {
      Json j = ToJson(outcome.reports[i]);
      j["selected"] = outcome.selected == i;
      pair_records.push_back(std::move(j));
      variants.push_back(cands[i].question);
      for (const FilterVerdict& v : outcome.reports[i].filter_report) {
        if (!v.passed) ++failures[std::string(StageName(v.stage))];
      }
    }
    if (outcome.selected) ++selected;
  }
  WriteJsonl(run.Output(paths.out), pair_records);
  WriteQuestions(run.Output(paths.out_questions), variants);

  out << "originals       " << order.size() << "\n"
      << "candidates      " << variants.size() << "\n"
      << "selected        " << selected << "\n";
  for (const auto& [stage, n] : failures) {
    out << "failed " << stage << std::string(9 - std::min<size_t>(8, stage.size()), ' ')
        << n << "\n";
  }
  run.Finish(ManifestFor(paths.out));
}

struct CandidatePaths {
  std::string corpus, questions, examples, index, out;
};

void BuildCandidates(Run& run, const CandidatePaths& paths, std::ostream& out) {
  const Corpus corpus(ReadPassages(run.Input(paths.corpus)));
  const QuestionBank bank = LoadBank(run.Input(paths.questions));
  const std::vector<TrainingExample> examples =
      ReadTrainingExamples(run.Input(paths.examples));
  const Bm25Index index = fs::exists(run.Path(paths.index))
                              ? Bm25Index::Load(run.Input(paths.index))
                              : IndexFromConfig(corpus, run.config());
  const uint64_t seed = run.config().GetUint("seed", 0);
  run.set_seed(seed);
  const std::vector<CandidateSet> sets =
      BuildCandidateSets(examples, bank, index, corpus, seed);
  WriteCandidateSets(run.Output(paths.out), sets);
  out << "candidate sets  " << sets.size() << "\n";
  run.Finish(ManifestFor(paths.out));
}

struct TrainPaths {
  std::string corpus, questions, train, pools, dev, dev_candidates, contrast,
      contrast_candidates, index, out_dir;
};

void TrainCommand(Run& run, const TrainPaths& paths, std::ostream& out) {
  const TrainConfig config = TrainConfigFrom(run.config());
  run.set_seed(config.seed);
  TrainingData data;
  data.corpus = Corpus(ReadPassages(run.Input(paths.corpus)));
  data.questions = LoadBank(run.Input(paths.questions));
  data.examples = ReadTrainingExamples(run.Input(paths.train));
  if (!paths.pools.empty() && fs::exists(run.Path(paths.pools))) {
    data.pools = ReadPools(run.Input(paths.pools));
  }

  std::optional<Bm25Index> index;
  auto sets_for = [&](const std::string& cand_path, const std::string& examples_path,
                      uint64_t stream) -> std::vector<CandidateSet> {
    if (!cand_path.empty()) return ReadCandidateSets(run.Input(cand_path));
    if (examples_path.empty() || !fs::exists(run.Path(examples_path))) return {};
    if (!index) {
      index = fs::exists(run.Path(paths.index))
                  ? Bm25Index::Load(run.Input(paths.index))
                  : IndexFromConfig(data.corpus, run.config());
    }
    return BuildCandidateSets(ReadTrainingExamples(run.Input(examples_path)),
                              data.questions, *index, data.corpus,
                              DeriveSeed(config.seed, 11, stream));
  };
  data.dev_sets = sets_for(paths.dev_candidates, paths.dev, 0);
  data.contrast_sets = sets_for(paths.contrast_candidates, paths.contrast, 2);
  if (data.dev_sets.empty()) throw DataError("training needs dev candidate sets");

  const fs::path out_dir = run.Path(paths.out_dir);
  fs::create_directories(out_dir);
  const TrainResult result = Train(config, data, out_dir);
  result.selected_model.Save(out_dir / "selected.ckpt");
  for (const EpochReport& e : result.epochs) {
    run.Output((fs::path(paths.out_dir) / e.checkpoint).string());
  }
  run.Output((fs::path(paths.out_dir) / "metrics.csv").string());
  run.Output((fs::path(paths.out_dir) / "selection.json").string());
  run.Output((fs::path(paths.out_dir) / "selected.ckpt").string());

  char line[128];
  out << "epoch  l_qp        l_qq        dev_mrr     contrast_mrr\n";
  for (const EpochReport& e : result.epochs) {
    char contrast[32] = "-";
    if (e.contrast_mrr) std::snprintf(contrast, sizeof(contrast), "%.6f", *e.contrast_mrr);
    std::snprintf(line, sizeof(line), "%5d  %-10.6f  %-10.6f  %-10.6f  %s\n",
                  e.metrics.epoch, e.metrics.l_qp, e.metrics.l_qq, e.dev_mrr, contrast);
    out << line;
  }
  out << "selected epoch " << result.selected_epoch << "\n";
  run.Finish(DirManifest(paths.out_dir, "train"));
}

struct EvalPaths {
  std::string checkpoint, corpus, questions, candidates, examples, pairs, triples, out;
};

std::string DatasetName(const RunConfig& cfg, const std::string& fallback_path) {
  return cfg.GetString("dataset", fs::path(fallback_path).stem().string());
}

void FinishReport(Run& run, const std::string& command, const std::string& out_path,
                  const std::vector<Json>& records, std::ostream& out) {
  WriteJsonFile(run.Output(out_path), Report(command, records));
  out << FormatMetricTable(records);
  run.Finish(ManifestFor(out_path));
}

void EvalRank(Run& run, const EvalPaths& paths, std::ostream& out) {
  const DualEncoder model = DualEncoder::Load(run.Input(paths.checkpoint));
  const Corpus corpus(ReadPassages(run.Input(paths.corpus)));
  const QuestionBank bank = LoadBank(run.Input(paths.questions));
  const std::vector<CandidateSet> sets = ReadCandidateSets(run.Input(paths.candidates));
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, corpus);
  const RankingResult r = RankingEval(model, bank, sets, passages);
  const std::string dataset = DatasetName(run.config(), paths.candidates);
  FinishReport(run, "eval-rank", paths.out,
               {MetricRecord("mean_rank", r.mean_rank, std::nullopt, dataset,
                             paths.checkpoint),
                MetricRecord("mrr", r.mrr, std::nullopt, dataset, paths.checkpoint)},
               out);
}

void EvalRetrieve(Run& run, const EvalPaths& paths, std::ostream& out) {
  const DualEncoder model = DualEncoder::Load(run.Input(paths.checkpoint));
  const Corpus corpus(ReadPassages(run.Input(paths.corpus)));
  const QuestionBank bank = LoadBank(run.Input(paths.questions));
  std::vector<Question> questions;
  for (const TrainingExample& e : ReadTrainingExamples(run.Input(paths.examples))) {
    const Question* q = bank.Find(e.question_id);
    if (q == nullptr) throw DataError("unknown question id " + e.question_id);
    questions.push_back(*q);
  }
  const std::vector<int> ks = run.config().GetIntList("ks", {1, 5, 20, 100});
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, corpus);
  const RetrievalResult r = RetrievalEval(model, corpus, passages, questions, ks);
  const std::string dataset = DatasetName(run.config(), paths.examples);
  std::vector<Json> records;
  for (size_t i = 0; i < r.ks.size(); ++i) {
    records.push_back(
        MetricRecord("recall", r.recall[i], r.ks[i], dataset, paths.checkpoint));
  }
  FinishReport(run, "eval-retrieve", paths.out, records, out);
}

void AnalyzeOverlap(Run& run, const EvalPaths& paths, std::ostream& out) {
  const DualEncoder model = DualEncoder::Load(run.Input(paths.checkpoint));
  const Corpus corpus(ReadPassages(run.Input(paths.corpus)));
  const QuestionBank bank = LoadBank(run.Input(paths.questions));
  const std::vector<QuestionPair> pairs = ReadPairs(run.Input(paths.pairs));
  const int k = run.config().GetInt("overlap_k", 5);
  if (k < 1) throw ConfigError("overlap_k must be >= 1");
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, corpus);
  const double overlap = PassageOverlap(model, pairs, bank, passages, k);
  FinishReport(run, "analyze-overlap", paths.out,
               {MetricRecord("passage_overlap", overlap, k,
                             DatasetName(run.config(), paths.pairs), paths.checkpoint)},
               out);
}

void AnalyzeIdentify(Run& run, const EvalPaths& paths, std::ostream& out) {
  const DualEncoder model = DualEncoder::Load(run.Input(paths.checkpoint));
  const QuestionBank bank = LoadBank(run.Input(paths.questions));
  const std::vector<EvalTriple> triples = ReadTriples(run.Input(paths.triples));
  const double rate = IdentificationRate(model, triples, bank);
  FinishReport(run, "analyze-identify", paths.out,
               {MetricRecord("identification_rate", rate, std::nullopt,
                             DatasetName(run.config(), paths.triples),
                             paths.checkpoint)},
               out);
}

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Flat key=value config file");
  cmd->add_option("--workdir", flags.workdir, "Base directory for relative paths");
  cmd->add_option("--threads", flags.threads, "Worker thread cap")
      ->check(CLI::PositiveNumber);
  for (const std::string& key : RunConfig::KnownKeys()) {
    if (key == "threads") continue;
    cmd->add_option_function<std::string>(
        "--" + KebabCase(key),
        [&flags, key](const std::string& v) { flags.overrides[key] = v; },
        "Overrides config key " + key);
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Dense retrieval lab: synthetic data, BM25, dual-encoder training "
               "and evaluation"};
  app.name(args.empty() ? "retrieval_lab" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  CommonFlags flags;
  std::function<void(Run&)> action;
  std::string command;

  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    AddCommonFlags(cmd, flags);
    cmd->callback([&command, name] { command = name; });
    return cmd;
  };

  std::string world_dir = ".";
  CLI::App* gen = add("gen-world", "Generate the synthetic world");
  gen->add_option("--out-dir", world_dir, "Output directory");

  std::string corpus = "corpus.jsonl", index_out = "index.json";
  CLI::App* bidx = add("build-index", "Build a BM25 index");
  bidx->add_option("--corpus", corpus, "Passage JSONL");
  bidx->add_option("--out", index_out, "Index file");

  FilterPaths fp{"questions.jsonl", "", "", "meq_pairs.jsonl", "meq_questions.jsonl"};
  CLI::App* filt = add("filter-meq", "Filter minimally edited question candidates");
  filt->add_option("--questions", fp.questions, "Original questions JSONL");
  filt->add_option("--candidates", fp.candidates, "Candidate JSONL")->required();
  filt->add_option("--checkpoint", fp.checkpoint, "Encoder for the semantic stage");
  filt->add_option("--out", fp.out, "Pair records JSONL");
  filt->add_option("--out-questions", fp.out_questions, "Candidate questions JSONL");

  CandidatePaths cp{"corpus.jsonl", "questions.jsonl", "", "index.json", ""};
  CLI::App* bcand = add("build-candidates", "Build 50-passage ranking candidate sets");
  bcand->add_option("--corpus", cp.corpus, "Passage JSONL");
  bcand->add_option("--questions", cp.questions, "Question JSONL");
  bcand->add_option("--examples", cp.examples, "Examples JSONL (question + gold)")
      ->required();
  bcand->add_option("--index", cp.index, "BM25 index (built when missing)");
  bcand->add_option("--out", cp.out, "Candidate set JSONL")->required();

  TrainPaths tp{"corpus.jsonl", "questions.jsonl", "train.jsonl", "pools.jsonl",
                "dev.jsonl",    "",                "contrast.jsonl", "",
                "index.json",   "run"};
  CLI::App* train = add("train", "Train the dual encoder");
  train->add_option("--corpus", tp.corpus, "Passage JSONL");
  train->add_option("--questions", tp.questions, "Question JSONL");
  train->add_option("--train", tp.train, "Training examples JSONL");
  train->add_option("--pools", tp.pools, "Augmentation pools JSONL");
  train->add_option("--dev", tp.dev, "Dev examples JSONL");
  train->add_option("--dev-candidates", tp.dev_candidates, "Dev candidate sets");
  train->add_option("--contrast", tp.contrast, "Contrast examples JSONL");
  train->add_option("--contrast-candidates", tp.contrast_candidates,
                    "Contrast candidate sets");
  train->add_option("--index", tp.index, "BM25 index (built when missing)");
  train->add_option("--out-dir", tp.out_dir, "Checkpoint directory");

  EvalPaths ep{"",   "corpus.jsonl",         "questions.jsonl", "",
               "test.jsonl", "contrast_pairs.jsonl", "triples.jsonl", ""};
  auto eval_flags = [&](CLI::App* cmd, const std::string& default_out) {
    cmd->add_option("--checkpoint", ep.checkpoint, "Model checkpoint")->required();
    cmd->add_option("--corpus", ep.corpus, "Passage JSONL");
    cmd->add_option("--questions", ep.questions, "Question JSONL");
    cmd->add_option("--out", ep.out, "Report JSON")->default_str(default_out);
  };
  CLI::App* rank = add("eval-rank", "Mean rank and MRR over candidate sets");
  eval_flags(rank, "report_rank.json");
  rank->add_option("--candidates", ep.candidates, "Candidate set JSONL")->required();
  CLI::App* retr = add("eval-retrieve", "Recall@k over the full corpus");
  eval_flags(retr, "report_retrieve.json");
  retr->add_option("--examples", ep.examples, "Examples JSONL selecting questions");
  CLI::App* ovl = add("analyze-overlap", "Top-k overlap of question pairs");
  eval_flags(ovl, "report_overlap.json");
  ovl->add_option("--pairs", ep.pairs, "Question pair JSONL");
  CLI::App* ident = add("analyze-identify", "Paraphrase-vs-edit identification rate");
  eval_flags(ident, "report_identify.json");
  ident->add_option("--triples", ep.triples, "Triple JSONL");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  if (args.empty()) argv.push_back("retrieval_lab");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const std::vector<CLI::App*> chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return kExitUsage;
  }
  if (ep.out.empty()) {
    static const std::map<std::string, std::string> kDefaults = {
        {"eval-rank", "report_rank.json"},
        {"eval-retrieve", "report_retrieve.json"},
        {"analyze-overlap", "report_overlap.json"},
        {"analyze-identify", "report_identify.json"}};
    if (auto it = kDefaults.find(command); it != kDefaults.end()) ep.out = it->second;
  }

  try {
    Run run(command, flags);
    if (command == "gen-world") {
      GenWorld(run, world_dir, out);
    } else if (command == "build-index") {
      BuildIndex(run, corpus, index_out, out);
    } else if (command == "filter-meq") {
      FilterMeq(run, fp, out);
    } else if (command == "build-candidates") {
      BuildCandidates(run, cp, out);
    } else if (command == "train") {
      TrainCommand(run, tp, out);
    } else if (command == "eval-rank") {
      EvalRank(run, ep, out);
    } else if (command == "eval-retrieve") {
      EvalRetrieve(run, ep, out);
    } else if (command == "analyze-overlap") {
      AnalyzeOverlap(run, ep, out);
    } else if (command == "analyze-identify") {
      AnalyzeIdentify(run, ep, out);
    }
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    // Data, cache, generation and training failures, plus malformed inputs.
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace rlab
