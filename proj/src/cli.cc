/* Copyright 2026 The OpenTopic Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "opentopic/cli.h"

#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "opentopic/classifier.h"
#include "opentopic/corpus.h"
#include "opentopic/crowd.h"
#include "opentopic/dataset_builder.h"
#include "opentopic/errors.h"
#include "opentopic/evaluation.h"
#include "opentopic/scoring.h"
#include "opentopic/service.h"

namespace opentopic {
namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kFormats = R"(File formats:
  edges     TSV   parent_id<TAB>child_id
  members   TSV   category_id<TAB>article_id
  roots     TSV   category_id<TAB>display_name
  articles  JSONL {"id": ..., "title": ..., "text": ...}
  pairs     JSONL {"article_id": ..., "premise": ..., "hypothesis": ..., "label": 1|-1}
  dataset   JSONL {"text": ..., "gold": [...]} with <stem>.header.json
                  {"name": ..., "labels": [...], "multi_label": bool}
  crowd     JSONL {"text": ..., "gold": ..., "votes": [5 labels], "anchor": bool}
  vectors   text  token v1 v2 ... vd
Exit codes: 0 ok, 1 invalid input or usage, 2 I/O failure.)";

struct BackendFlags {
  std::string backend = "mock";
  std::string esa_index;
  std::string embeddings;
  std::string endpoint;
  std::uint64_t seed = 17;
  int timeout_ms = 10000;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--backend", backend, "Scorer: esa | embed | remote | mock")
        ->check(CLI::IsMember({"esa", "embed", "remote", "mock"}));
    cmd->add_option("--esa-index", esa_index, "ESA index built by esa-index");
    cmd->add_option("--embeddings", embeddings, "Word-vector text file");
    cmd->add_option("--endpoint", endpoint, "Remote entailment server base URL");
    cmd->add_option("--seed", seed, "Seed for the mock backend");
    cmd->add_option("--timeout-ms", timeout_ms, "Remote request timeout");
  }

  std::shared_ptr<Scorer> make() const {
    BackendConfig c;
    c.name = backend;
    c.type = backend;
    c.seed = seed;
    c.timeout = std::chrono::milliseconds(timeout_ms);
    if (backend == "esa") {
      if (esa_index.empty()) throw ValidationError("--backend esa needs --esa-index");
      c.path = esa_index;
    } else if (backend == "embed") {
      if (embeddings.empty()) throw ValidationError("--backend embed needs --embeddings");
      c.path = embeddings;
    } else if (backend == "remote") {
      if (endpoint.empty()) throw ValidationError("--backend remote needs --endpoint");
      c.endpoint = endpoint;
    }
    return make_scorer(c);
  }
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

ojson stats_json(const BuildStats& s) {
  return ojson{{"articles_paired", s.articles_paired},
               {"positive_pairs", s.positive_pairs},
               {"negative_pairs", s.negative_pairs},
               {"argmin_ties", s.argmin_ties},
               {"articles_all_roots", s.articles_all_roots}};
}

void print_stats(std::ostream& out, const BuildStats& s) {
  out << "articles paired     " << s.articles_paired << '\n'
      << "positive pairs      " << s.positive_pairs << '\n'
      << "negative pairs      " << s.negative_pairs << '\n'
      << "argmin ties         " << s.argmin_ties << '\n'
      << "paired with all S   " << s.articles_all_roots << '\n';
}

ojson metrics_json(const MetricsReport& r) {
  ojson per_class = ojson::array();
  for (const ClassMetrics& m : r.per_class) {
    per_class.push_back(ojson{{"label", m.label},
                              {"support", m.support},
                              {"precision", m.precision},
                              {"recall", m.recall},
                              {"f1", m.f1}});
  }
  return ojson{{"metric", r.metric},     {"value", r.value},
               {"accuracy", r.accuracy}, {"weighted_f1", r.weighted_f1},
               {"examples", r.examples}, {"per_class", per_class}};
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  void ingest();
  void build();
  void esa_index();
  void classify();
  void eval();
  void overlap();
  void crowd();
  void serve();

  std::ostream& out_;
  std::ostream& err_;
  bool json_ = false;

  struct {
    CorpusPaths paths;
    bool lenient = false;
    std::string out;
  } ingest_;
  struct {
    std::string corpus;
    std::string out;
    std::string exclude_labels;
    std::vector<std::string> exclude_prefixes{"List of"};
    std::size_t premise_cap = 2000;
    BuildConfig config;
  } build_;
  struct {
    std::string corpus;
    std::string out;
    std::string idf = "smoothed";
    std::size_t max_concepts = 1000;
  } esa_;
  struct {
    BackendFlags backend;
    std::string text;
    std::string labels;
    std::string mode = "single";
    double threshold = 0.5;
    bool fallback_top1 = false;
  } classify_;
  struct {
    BackendFlags backend;
    std::string dataset;
    std::string header;
    double threshold = 0.5;
  } eval_;
  struct {
    std::string dataset;
    std::string header;
    std::string corpus;
    BuildConfig config;
  } overlap_;
  struct {
    std::string annotations;
    int worker = -1;
    BackendFlags backend;
    std::string labels;
  } crowd_;
  struct {
    std::string config;
    std::string host = "0.0.0.0";
    int port = 8080;
  } serve_;
};

int Cli::run(const std::vector<std::string>& args) {
  CLI::App app{"Zero-shot topic classification toolkit", "opentopic"};
  app.footer(kFormats);
  app.require_subcommand(1);
  app.add_flag("--json", json_, "Machine-readable output");

  auto* ingest = app.add_subcommand("ingest", "Validate TSV/JSONL inputs into a corpus cache");
  ingest->add_option("--edges", ingest_.paths.edges, "Subcategory edges TSV")->required();
  ingest->add_option("--members", ingest_.paths.members, "Category members TSV")->required();
  ingest->add_option("--articles", ingest_.paths.articles, "Articles JSONL")->required();
  ingest->add_option("--roots", ingest_.paths.roots, "Top-level categories TSV")->required();
  ingest->add_flag("--lenient", ingest_.lenient, "Drop dangling references with a warning");
  ingest->add_option("--out", ingest_.out, "Corpus cache to write")->required();

  auto* build = app.add_subcommand("build", "Emit entailment training pairs");
  build->add_option("--corpus", build_.corpus, "Corpus cache")->required();
  build->add_option("--max-depth", build_.config.max_depth, "Traversal depth bound");
  build->add_option("--seed", build_.config.rng_seed, "Negative sampling seed");
  build->add_option("--negatives", build_.config.negatives_per_article,
                    "Negatives per article")
      ->check(CLI::PositiveNumber);
  build->add_option("--premise-cap", build_.premise_cap,
                    "Premise length cap in characters, 0 for none");
  build->add_option("--exclude-prefix", build_.exclude_prefixes,
                    "Drop roots whose name starts with this (repeatable)");
  build->add_option("--exclude-labels", build_.exclude_labels,
                    "Test labels, one per line; overlapping roots are removed");
  build->add_option("--out", build_.out, "Pairs JSONL to write")->required();

  auto* esa = app.add_subcommand("esa-index", "Build the ESA concept index");
  esa->add_option("--corpus", esa_.corpus, "Corpus cache")->required();
  esa->add_option("--out", esa_.out, "Index file to write")->required();
  esa->add_option("--idf", esa_.idf, "smoothed | plain")
      ->check(CLI::IsMember({"smoothed", "plain"}));
  esa->add_option("--max-concepts", esa_.max_concepts, "Projection pruning, 0 for none");

  auto* classify = app.add_subcommand("classify", "Score one text against labels");
  classify_.backend.add_to(classify);
  classify->add_option("--text", classify_.text, "Text to classify")->required();
  classify->add_option("--labels", classify_.labels, "Comma-separated labels")->required();
  classify->add_option("--mode", classify_.mode, "single | multi")
      ->check(CLI::IsMember({"single", "multi"}));
  classify->add_option("--threshold", classify_.threshold, "Multi-label threshold");
  classify->add_flag("--fallback-top1", classify_.fallback_top1,
                     "Multi-label: pick the top label when none passes");

  auto* eval = app.add_subcommand("eval", "Evaluate a backend on a labeled dataset");
  eval_.backend.add_to(eval);
  eval->add_option("--dataset", eval_.dataset, "Dataset JSONL")->required();
  eval->add_option("--header", eval_.header, "Header JSON (default <stem>.header.json)");
  eval->add_option("--threshold", eval_.threshold, "Multi-label threshold");

  auto* overlap = app.add_subcommand("overlap", "Training/test category overlap report");
  overlap->add_option("--dataset", overlap_.dataset, "Dataset JSONL")->required();
  overlap->add_option("--header", overlap_.header, "Header JSON (default <stem>.header.json)");
  overlap->add_option("--corpus", overlap_.corpus, "Corpus cache")->required();
  overlap->add_option("--max-depth", overlap_.config.max_depth, "Traversal depth bound");
  overlap->add_option("--seed", overlap_.config.rng_seed, "Negative sampling seed");

  auto* crowd = app.add_subcommand("crowd", "Analyse five-vote crowd annotations");
  crowd->add_option("--annotations", crowd_.annotations, "Annotations JSONL")->required();
  crowd->add_option("--worker", crowd_.worker, "Screen the submission in vote slot 0-4")
      ->check(CLI::Range(0, 4));
  crowd_.backend.backend.clear();
  crowd_.backend.add_to(crowd);
  crowd->add_option("--labels", crowd_.labels, "Taxonomy for --backend, comma-separated");

  auto* serve = app.add_subcommand("serve", "Run the HTTP classification service");
  serve->add_option("--config", serve_.config, "Backend configuration JSON")->required();
  serve->add_option("--host", serve_.host, "Bind address");
  serve->add_option("--port", serve_.port, "Port")->check(CLI::Range(0, 65535));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_, err_);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*ingest) this->ingest();
    else if (*build) this->build();
    else if (*esa) esa_index();
    else if (*classify) this->classify();
    else if (*eval) this->eval();
    else if (*overlap) this->overlap();
    else if (*crowd) this->crowd();
    else if (*serve) this->serve();
  } catch (const IoError& e) {
    err_ << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ScorerUnavailable& e) {
    err_ << "error: scorer unavailable: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    err_ << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

void Cli::ingest() {
  LoadReport report;
  Corpus corpus = load_corpus(ingest_.paths, LoadOptions{ingest_.lenient}, &report);
  save_corpus(corpus, ingest_.out);
  for (const std::string& w : report.warnings) err_ << "warning: " << w << '\n';
  if (json_) {
    out_ << ojson{{"roots", corpus.graph.roots().size()},
                  {"categories", corpus.graph.category_count()},
                  {"edges", corpus.graph.edge_count()},
                  {"memberships", corpus.graph.membership_count()},
                  {"articles", corpus.articles.size()},
                  {"dropped_memberships", report.dropped_memberships},
                  {"dropped_articles", report.dropped_articles}}
                .dump()
         << '\n';
    return;
  }
  out_ << "roots        " << corpus.graph.roots().size() << '\n'
       << "categories   " << corpus.graph.category_count() << '\n'
       << "edges        " << corpus.graph.edge_count() << '\n'
       << "memberships  " << corpus.graph.membership_count() << '\n'
       << "articles     " << corpus.articles.size() << '\n';
  if (ingest_.lenient) {
    out_ << "dropped " << report.dropped_memberships << " memberships, "
         << report.dropped_articles << " articles\n";
  }
}

void Cli::build() {
  Corpus corpus = read_corpus(build_.corpus);
  BuildConfig config = build_.config;
  config.premise_char_cap =
      build_.premise_cap ? std::optional<std::size_t>(build_.premise_cap) : std::nullopt;

  CategoryGraph graph = corpus.graph.filter_roots(build_.exclude_prefixes);
  DedupResult dedup;
  if (!build_.exclude_labels.empty()) {
    graph = exclude_overlapping_roots(graph, read_lines(build_.exclude_labels), &dedup);
  }
  const DistanceTable table = compute_distances(graph, config);
  BuildResult result = build_training_pairs(graph, corpus.articles, table, config);

  std::ofstream file(build_.out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + build_.out);
  write_pairs_jsonl(result.pairs, file);
  file.flush();
  if (!file) throw IoError("write error on " + build_.out);

  if (json_) {
    ojson removed = ojson::array();
    for (const DedupMatch& m : dedup.report) {
      removed.push_back(ojson{{"root", m.root}, {"labels", m.labels}});
    }
    out_ << ojson{{"roots", graph.roots().size()},
                  {"stats", stats_json(result.stats)},
                  {"removed_roots", removed}}
                .dump()
         << '\n';
    return;
  }
  for (const DedupMatch& m : dedup.report) {
    out_ << "removed root '" << m.root << "' (matches";
    for (const std::string& l : m.labels) out_ << " '" << l << "'";
    out_ << ")\n";
  }
  out_ << "roots               " << graph.roots().size() << '\n';
  print_stats(out_, result.stats);
}

void Cli::esa_index() {
  Corpus corpus = read_corpus(esa_.corpus);
  EsaOptions options;
  options.idf = esa_.idf == "plain" ? IdfMode::kPlain : IdfMode::kSmoothed;
  options.max_concepts = esa_.max_concepts;
  EsaIndex index = EsaIndex::build(corpus.articles, options);
  index.save(esa_.out);
  if (json_) {
    out_ << ojson{{"concepts", index.concept_count()},
                  {"terms", index.vocabulary_size()}}
                .dump()
         << '\n';
  } else {
    out_ << "concepts  " << index.concept_count() << '\n'
         << "terms     " << index.vocabulary_size() << '\n';
  }
}

void Cli::classify() {
  const std::vector<std::string> labels = split_csv(classify_.labels);
  if (labels.empty()) throw ValidationError("--labels is empty");
  auto scorer = classify_.backend.make();
  const LabelScores scores = scorer->score(classify_.text, labels);
  const Decision d = classify_.mode == "multi"
                         ? decide_multi(scores, classify_.threshold, classify_.fallback_top1)
                         : decide_single(scores);
  if (json_) {
    ojson list = ojson::array();
    for (const auto& [label, s] : scores.entries()) {
      list.push_back(ojson{{"label", label}, {"score", s}});
    }
    out_ << ojson{{"backend", classify_.backend.backend},
                  {"scores", list},
                  {"decision", ojson{{"mode", to_string(d.mode)},
                                     {"chosen", d.chosen},
                                     {"tie", d.tie}}}}
                .dump()
         << '\n';
    return;
  }
  for (const auto& [label, s] : scores.entries()) {
    const bool chosen = std::find(d.chosen.begin(), d.chosen.end(), label) != d.chosen.end();
    out_ << (chosen ? "* " : "  ") << label << '\t' << s << '\n';
  }
  if (d.tie) out_ << "(tie broken by label order)\n";
}

void Cli::eval() {
  const std::string header =
      eval_.header.empty() ? default_header_path(eval_.dataset) : eval_.header;
  const EvalDataset dataset = load_eval_dataset(eval_.dataset, header);
  auto scorer = eval_.backend.make();
  const MetricsReport report = evaluate(dataset, *scorer, EvalOptions{eval_.threshold});
  if (json_) {
    ojson j = metrics_json(report);
    j["dataset"] = dataset.name;
    j["backend"] = eval_.backend.backend;
    out_ << j.dump() << '\n';
    return;
  }
  out_ << dataset.name << " (" << report.examples << " examples, "
       << (dataset.multi_label ? "multi-label" : "single-label") << ")\n"
       << report.metric << "  " << report.value << '\n';
  for (const ClassMetrics& m : report.per_class) {
    out_ << "  " << m.label << "\tsupport " << m.support << "\tP " << m.precision
         << "\tR " << m.recall << "\tF1 " << m.f1 << '\n';
  }
}

void Cli::overlap() {
  const std::string header =
      overlap_.header.empty() ? default_header_path(overlap_.dataset) : overlap_.header;
  const EvalDataset dataset = load_eval_dataset(overlap_.dataset, header);
  const Corpus corpus = read_corpus(overlap_.corpus);
  const OverlapReport r = overlap_experiment(dataset, corpus, overlap_.config);
  if (json_) {
    ojson removed = ojson::array();
    for (const DedupMatch& m : r.dedup.report) {
      removed.push_back(ojson{{"root", m.root}, {"labels", m.labels}});
    }
    out_ << ojson{{"dataset", dataset.name},
                  {"removed_roots", removed},
                  {"removed_count", r.dedup.removed.size()},
                  {"overlapping_labels", r.overlapping_labels},
                  {"overlapping_examples", r.overlapping_examples},
                  {"total_examples", r.total_examples},
                  {"overlapping_percent", r.overlapping_percent},
                  {"before", stats_json(r.before)},
                  {"after", stats_json(r.after)}}
                .dump()
         << '\n';
    return;
  }
  out_ << "removed training categories  " << r.dedup.removed.size() << '\n';
  for (const DedupMatch& m : r.dedup.report) out_ << "  " << m.root << '\n';
  out_ << "overlapping test examples    " << r.overlapping_examples << "/"
       << r.total_examples << " (" << r.overlapping_percent << "%)\n"
       << "pairs before                 "
       << r.before.positive_pairs + r.before.negative_pairs << '\n'
       << "pairs after                  "
       << r.after.positive_pairs + r.after.negative_pairs << '\n';
}

void Cli::crowd() {
  const std::vector<AnnotationRecord> records = load_annotations(crowd_.annotations);
  const CrowdReport report = aggregate_annotations(records);
  ojson j{{"documents", report.documents},
          {"human_correct", report.correct},
          {"human_accuracy", report.human_accuracy},
          {"unanimous", report.unanimous},
          {"unanimous_accuracy", report.unanimous_accuracy},
          {"agreement_histogram", report.agreement_histogram}};
  if (crowd_.worker >= 0) {
    const SubmissionVerdict v =
        validate_submission(records, static_cast<std::size_t>(crowd_.worker));
    j["submission"] = ojson{{"worker", crowd_.worker},
                            {"accepted", v.accepted},
                            {"reason", v.reason},
                            {"accuracy", v.accuracy},
                            {"anchors_wrong", v.anchors_wrong}};
  }
  if (!crowd_.backend.backend.empty()) {
    const std::vector<std::string> taxonomy = split_csv(crowd_.labels);
    if (taxonomy.empty()) throw ValidationError("--backend needs --labels");
    const ModelOnCrowd m = evaluate_on_crowd(records, taxonomy, *crowd_.backend.make());
    j["model"] = ojson{{"backend", crowd_.backend.backend},
                       {"accuracy", m.accuracy},
                       {"unanimous_accuracy", m.unanimous_accuracy}};
  }
  if (json_) {
    out_ << j.dump() << '\n';
    return;
  }
  out_ << "documents            " << report.documents << '\n'
       << "human accuracy       " << report.human_accuracy << " (" << report.correct
       << " with >= 3 gold votes)\n"
       << "unanimous subset     " << report.unanimous << '\n'
       << "unanimous accuracy   " << report.unanimous_accuracy << '\n';
  for (std::size_t k = 1; k <= kVotesPerDocument; ++k) {
    out_ << "  agreement " << k << "/5     " << report.agreement_histogram[k] << '\n';
  }
  if (j.contains("submission")) {
    const auto& s = j["submission"];
    out_ << "worker " << crowd_.worker << ": "
         << (s["accepted"].get<bool>() ? "accepted" : "rejected, " + s["reason"].get<std::string>())
         << '\n';
  }
  if (j.contains("model")) {
    out_ << "model accuracy       " << j["model"]["accuracy"].get<double>() << '\n'
         << "model on unanimous   " << j["model"]["unanimous_accuracy"].get<double>() << '\n';
  }
}

void Cli::serve() {
  ServiceConfig config = load_service_config(serve_.config);
  std::vector<Backend> backends;
  for (const BackendConfig& b : config.backends) {
    backends.push_back({b.name, b.description, make_scorer(b)});
  }
  auto service = std::make_shared<const ClassifyService>(std::move(backends));
  Server server(service, config);
  const int port = server.bind(serve_.host, serve_.port);
  if (port < 0) {
    throw IoError("cannot bind " + serve_.host + ":" + std::to_string(serve_.port));
  }
  if (json_) {
    out_ << ojson{{"host", serve_.host}, {"port", port}}.dump() << std::endl;
  } else {
    out_ << "listening on " << serve_.host << ":" << port << std::endl;
  }
  server.run();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.run(args);
}

}  // namespace opentopic
