// modtag: command-line driver for the modality tagging pipeline.
//
// Exit codes: 0 success, 1 no defined overall F, 2 usage or input error.

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modtag/annotation.hpp"
#include "modtag/corpus.hpp"
#include "modtag/evaluation.hpp"
#include "modtag/features.hpp"
#include "modtag/io.hpp"
#include "modtag/seq_tagger.hpp"
#include "modtag/svm.hpp"
#include "modtag/synthetic.hpp"
#include "modtag/trigger_tagger.hpp"

namespace fs = std::filesystem;
using namespace modtag;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoF = 1;
constexpr int kExitInput = 2;

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

// Inputs read and outputs written by one run, for the manifest.
struct RunLog {
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  std::optional<std::string> stdin_cache;

  std::string read(const std::string& path) {
    std::string data;
    if (path == "-") {
      if (!stdin_cache)
        stdin_cache.emplace(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
      data = *stdin_cache;
    } else {
      data = read_file(path);
    }
    inputs.push_back({{"path", path}, {"sha256", sha256_hex(data)}});
    return data;
  }

  void write(const std::string& path, std::string_view data) {
    if (path == "-") {
      std::cout << data;
      std::cout.flush();
    } else {
      write_file_atomic(path, data);
    }
    outputs.push_back({{"path", path}, {"sha256", sha256_hex(data)}});
  }
};

Corpus read_corpus(RunLog& log, const std::string& path) {
  std::istringstream in(log.read(path));
  return parse_column_stream(in, path == "-" ? "<stdin>" : path);
}

std::string corpus_text(const Corpus& corpus) {
  std::ostringstream out;
  write_column_stream(corpus, out);
  return out.str();
}

// Loads through a path-taking loader after recording the file's digest.
template <typename Loader>
auto load_logged(RunLog& log, const std::string& path, Loader loader) {
  log.read(path);
  return loader(fs::path(path));
}

struct ModelOptions {
  std::string templates = "wordStem,POS,whichModal";
  int width = 2;
  bool no_dynamic = false;
  std::string setup = "Tr23";
  std::optional<double> cost_agr2;
  std::optional<double> cost_agr3;
  double C = 1.0;
  std::string kernel = "polynomial";
  int degree = 2;
  double scale = 1.0;
  double offset = 1.0;
  double tolerance = 1e-3;
  std::size_t cache_mb = 256;
  std::string lemmas;

  void add_to(CLI::App* app, bool with_setup = true) {
    app->add_option("--features", templates, "Comma-separated feature templates")
        ->capture_default_str();
    app->add_option("--width", width, "Context width w")->capture_default_str()->check(CLI::Range(1, 5));
    app->add_flag("--no-dynamic", no_dynamic, "Disable previous-tag features");
    if (with_setup) {
      app->add_option("--setup", setup, "Tr23, Tr2, Tr3 or Tr23_W")->capture_default_str();
      app->add_option("--cost-agr2", cost_agr2, "Instance cost for Agr2 sentences");
      app->add_option("--cost-agr3", cost_agr3, "Instance cost for Agr3 sentences");
    }
    app->add_option("--C", C, "SVM regularization constant")->capture_default_str();
    app->add_option("--kernel", kernel, "linear or polynomial")
        ->capture_default_str()
        ->check(CLI::IsMember({"linear", "polynomial"}));
    app->add_option("--degree", degree, "Polynomial degree")->capture_default_str();
    app->add_option("--scale", scale, "Polynomial scale")->capture_default_str();
    app->add_option("--offset", offset, "Polynomial offset")->capture_default_str();
    app->add_option("--tolerance", tolerance, "KKT stopping tolerance")->capture_default_str();
    app->add_option("--cache-mb", cache_mb, "Kernel cache size")->capture_default_str();
    app->add_option("--lemmas", lemmas, "Lemma table TSV");
  }

  FeatureConfig feature_config() const {
    return parse_feature_config(templates, width, !no_dynamic);
  }

  TrainParams train_params(int jobs) const {
    TrainParams p;
    p.C = C;
    p.kernel.kind = kernel == "linear" ? KernelKind::kLinear : KernelKind::kPolynomial;
    p.kernel.degree = degree;
    p.kernel.scale = scale;
    p.kernel.offset = offset;
    p.kkt_tolerance = tolerance;
    p.cache_megabytes = cache_mb;
    p.jobs = jobs;
    p.validate();
    return p;
  }

  TrainingSetup training_setup() const {
    auto name = parse_setup_name(setup);
    if (!name) throw Error("unknown setup '" + setup + "'");
    TrainingSetup s = make_setup(*name);
    if (cost_agr2) s.cost_agr2 = *cost_agr2;
    if (cost_agr3) s.cost_agr3 = *cost_agr3;
    if (!(s.cost_agr2 > 0) || !(s.cost_agr3 > 0)) throw Error("instance costs must be positive");
    return s;
  }

  LemmaTable lemma_table(RunLog& log) const {
    if (lemmas.empty()) return {};
    return load_logged(log, lemmas, load_lemma_table);
  }
};

// INI text of the global options and the chosen subcommand's options,
// loadable again with --config.
std::string resolved_config(const CLI::App& app, const std::string& command) {
  std::istringstream all(app.config_to_str(true, false));
  std::string out;
  std::string line;
  const std::string prefix = command + ".";
  while (std::getline(all, line)) {
    const auto eq = line.find('=');
    const std::string key = line.substr(0, eq);
    if (key.rfind(prefix, 0) == 0) {
      out += line + "\n";
    } else if (key.find('.') == std::string::npos && key != "manifest") {
      out += line + "\n";
    }
  }
  return out;
}

int exit_for(const ClassCounts& overall) { return overall.f() ? kExitOk : kExitNoF; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modality tagging pipeline"};
  app.require_subcommand(1);
  // Global options are also accepted after the subcommand name.
  app.fallthrough();
  app.set_config("--config", "", "INI config file; flags override it");
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string manifest_path;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1, 64));
  app.add_option("--manifest", manifest_path,
                 "Run manifest path (default: <output>.manifest.json)");

  RunLog log;
  std::string primary_output;
  std::function<int()> action;

  // harvest
  auto* harvest = app.add_subcommand("harvest", "Select candidate sentences with the trigger lexicon");
  std::string h_input, h_lexicon, h_filters, h_out_dir;
  std::size_t h_cap = 50;
  bool h_raw = false, h_stem = false;
  harvest->add_option("--input", h_input, "Column corpus, or raw text with --raw")->required();
  harvest->add_flag("--raw", h_raw, "Input is one raw sentence per line");
  harvest->add_option("--lexicon", h_lexicon, "Trigger lexicon TSV")->required();
  harvest->add_option("--filters", h_filters, "Filter phrases TSV");
  harvest->add_flag("--stem-match", h_stem, "Match triggers by Porter stem");
  harvest->add_option("--cap", h_cap, "Sentences kept per trigger")->capture_default_str();
  harvest->add_option("--out-dir", h_out_dir, "Output directory")->required();
  harvest->callback([&] {
    action = [&] {
      Corpus corpus;
      if (h_raw) {
        std::istringstream in(log.read(h_input));
        std::string line;
        while (std::getline(in, line)) {
          auto words = tokenize_raw(line);
          if (words.empty()) continue;
          Sentence s;
          s.id = default_sentence_id(corpus.size() + 1);
          for (std::string& w : words) s.tokens.push_back(Token{std::move(w), "UNK", {}, {}});
          corpus.sentences.push_back(std::move(s));
        }
        validate(corpus);
      } else {
        corpus = read_corpus(log, h_input);
      }
      Lexicon lexicon = load_logged(log, h_lexicon, load_lexicon);
      lexicon.set_stem_matching(h_stem);
      FilterSet filters;
      if (!h_filters.empty()) filters = load_logged(log, h_filters, load_filters);
      validate_filters(filters, lexicon);
      auto selected = select_candidates(corpus, lexicon, filters, h_cap, seed);
      fs::create_directories(h_out_dir);
      std::ostringstream summary;
      summary << "modality\ttriggers\tsentences\n";
      for (ModalityTag m : kModalities) {
        Corpus out;
        std::map<std::string, std::size_t> per_trigger;
        for (const Candidate& c : selected[m]) {
          out.sentences.push_back(*c.sentence);
          ++per_trigger[c.match.trigger];
        }
        log.write((fs::path(h_out_dir) / (std::string(to_string(m)) + ".txt")).string(),
                  corpus_text(out));
        summary << to_string(m) << '\t' << per_trigger.size() << '\t' << out.size() << '\n';
      }
      primary_output = (fs::path(h_out_dir) / "summary.tsv").string();
      log.write(primary_output, summary.str());
      return kExitOk;
    };
  });

  // aggregate
  auto* aggregate_cmd = app.add_subcommand("aggregate", "Turn annotator judgments into training data");
  std::string a_annotations, a_sentences, a_output, a_stats;
  aggregate_cmd->add_option("--annotations", a_annotations, "Annotations JSONL")->required();
  aggregate_cmd->add_option("--sentences", a_sentences, "Column corpus of the annotated sentences")->required();
  aggregate_cmd->add_option("--output", a_output, "Training column file")->required();
  aggregate_cmd->add_option("--stats", a_stats, "Stats JSON (default: <output>.stats.json)");
  aggregate_cmd->callback([&] {
    action = [&] {
      std::istringstream ain(log.read(a_annotations));
      auto sets = read_annotations(ain, a_annotations);
      Corpus sentences = read_corpus(log, a_sentences);
      std::vector<std::string> unknown;
      for (const AnnotationSet& s : sets)
        if (!sentences.find(s.sentence_id)) unknown.push_back(s.sentence_id);
      if (!unknown.empty()) {
        std::string msg = "annotations reference unknown sentence ids:";
        for (const std::string& id : unknown) msg += " " + id;
        throw Error(msg);
      }
      AggregationResult result = aggregate_corpus(sets);
      Corpus training;
      for (const AggregatedExample& ex : result.examples)
        training.sentences.push_back(to_training(ex, *sentences.find(ex.sentence_id)));
      primary_output = a_output;
      log.write(a_output, corpus_text(training));
      log.write(a_stats.empty() ? a_output + ".stats.json" : a_stats,
                stats_to_json(result.stats));
      return kExitOk;
    };
  });

  // train
  auto* train = app.add_subcommand("train", "Train the sequence tagger");
  std::string t_input, t_model;
  ModelOptions t_opts;
  train->add_option("--train", t_input, "Gold column corpus")->required();
  train->add_option("--model", t_model, "Output model file")->required();
  t_opts.add_to(train);
  train->callback([&] {
    action = [&] {
      Corpus corpus = read_corpus(log, t_input);
      TaggerModel model = train_tagger(corpus, t_opts.feature_config(), t_opts.train_params(jobs),
                                       t_opts.training_setup(), t_opts.lemma_table(log));
      std::ostringstream out;
      write_model(model, out);
      primary_output = t_model;
      log.write(t_model, out.str());
      return kExitOk;
    };
  });

  // tag
  auto* tag = app.add_subcommand("tag", "Tag a corpus with a trained model");
  std::string g_model, g_input, g_output;
  tag->add_option("--model", g_model, "Model file")->required();
  tag->add_option("--input", g_input, "Column corpus")->required();
  tag->add_option("--output", g_output, "Tagged corpus")->capture_default_str();
  g_output = "-";
  tag->callback([&] {
    action = [&] {
      std::istringstream min(log.read(g_model));
      TaggerModel model = read_model(min);
      Corpus corpus = read_corpus(log, g_input);
      primary_output = g_output;
      log.write(g_output, corpus_text(tag_corpus(corpus, model, jobs)));
      return kExitOk;
    };
  });

  // eval
  auto* eval = app.add_subcommand("eval", "Score predictions against gold tags");
  std::string e_gold, e_pred, e_output = "-", e_json;
  eval->add_option("--gold", e_gold, "Gold column corpus")->required();
  eval->add_option("--pred", e_pred, "Tagged corpus")->required();
  eval->add_option("--output", e_output, "Text report")->capture_default_str();
  eval->add_option("--json", e_json, "JSON report");
  eval->callback([&] {
    action = [&] {
      Corpus gold = read_corpus(log, e_gold);
      Corpus pred = read_corpus(log, e_pred);
      PrfReport report = score(gold, pred);
      primary_output = e_output;
      log.write(e_output, format_report(report));
      if (!e_json.empty()) log.write(e_json, report_to_json(report));
      return exit_for(report.overall());
    };
  });

  // cv
  auto* cv = app.add_subcommand("cv", "k-fold cross-validation");
  std::string c_corpus, c_output = "-", c_json, c_filter = "all";
  int c_k = 4;
  ModelOptions c_opts;
  cv->add_option("--corpus", c_corpus, "Gold column corpus")->required();
  cv->add_option("--k", c_k, "Folds")->capture_default_str();
  cv->add_option("--test-filter", c_filter, "all or agr3")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "agr3"}));
  cv->add_option("--output", c_output, "Text report")->capture_default_str();
  cv->add_option("--json", c_json, "JSON report");
  c_opts.add_to(cv);
  cv->callback([&] {
    action = [&] {
      Corpus corpus = read_corpus(log, c_corpus);
      FoldPlan plan = kfold_plan(corpus, c_k, seed);
      CvOptions o;
      o.lemmas = c_opts.lemma_table(log);
      o.jobs = jobs;
      o.test_filter = c_filter == "agr3" ? TestFilter::kAgr3Only : TestFilter::kAll;
      CvResult r = cross_validate(corpus, plan, c_opts.feature_config(),
                                  c_opts.train_params(jobs), c_opts.training_setup(), o);
      primary_output = c_output;
      log.write(c_output, format_report(r.pooled));
      if (!c_json.empty()) log.write(c_json, report_to_json(r.pooled));
      return exit_for(r.pooled.overall());
    };
  });

  // search
  auto* search = app.add_subcommand("search", "Feature-set and window search under cross-validation");
  std::string s_corpus, s_output = "-", s_strategy = "greedy";
  std::string s_templates = "wordStem,wordLemma,POS,isNumeric,verbType,whichModal";
  std::vector<int> s_widths = {1, 2, 3, 4, 5};
  int s_k = 4;
  ModelOptions s_opts;
  search->add_option("--corpus", s_corpus, "Gold column corpus")->required();
  search->add_option("--k", s_k, "Folds")->capture_default_str();
  search->add_option("--templates", s_templates, "Candidate templates")->capture_default_str();
  search->add_option("--widths", s_widths, "Candidate widths")
      ->capture_default_str()
      ->delimiter(',')
      ->check(CLI::Range(1, 5));
  search->add_option("--strategy", s_strategy, "exhaustive or greedy")
      ->capture_default_str()
      ->check(CLI::IsMember({"exhaustive", "greedy"}));
  search->add_option("--output", s_output, "Ranked configurations")->capture_default_str();
  s_opts.add_to(search);
  search->callback([&] {
    action = [&] {
      Corpus corpus = read_corpus(log, s_corpus);
      FoldPlan plan = kfold_plan(corpus, s_k, seed);
      CvOptions o;
      o.lemmas = s_opts.lemma_table(log);
      o.jobs = jobs;
      std::vector<FeatureTemplate> templates = parse_feature_config(s_templates, 1).active();
      auto ranked = feature_search(
          corpus, plan, templates, s_widths, s_opts.train_params(jobs),
          s_strategy == "exhaustive" ? SearchStrategy::kExhaustive : SearchStrategy::kGreedyPrune,
          s_opts.training_setup(), o);
      std::ostringstream out;
      out << "rank\tF\twidth\ttemplates\n";
      for (std::size_t i = 0; i < ranked.size(); ++i)
        out << i + 1 << '\t' << format_percent(ranked[i].f) << '\t'
            << ranked[i].config.context_width << '\t' << ranked[i].config.templates_string()
            << '\n';
      primary_output = s_output;
      log.write(s_output, out.str());
      return ranked.empty() || !ranked.front().f ? kExitNoF : kExitOk;
    };
  });

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Annotator-confidence grid over training setups");
  std::string x_corpus, x_gold, x_output = "-", x_cells;
  int x_k = 4;
  ModelOptions x_opts;
  experiment->add_option("--corpus", x_corpus, "Gold column corpus with agreement levels")->required();
  experiment->add_option("--gold", x_gold, "External gold corpus");
  experiment->add_option("--k", x_k, "Folds")->capture_default_str();
  experiment->add_option("--output", x_output, "Summary table")->capture_default_str();
  experiment->add_option("--cells", x_cells, "JSON lines, one per cell");
  x_opts.add_to(experiment, false);
  experiment->callback([&] {
    action = [&] {
      Corpus corpus = read_corpus(log, x_corpus);
      std::optional<Corpus> gold;
      if (!x_gold.empty()) gold = read_corpus(log, x_gold);
      FoldPlan plan = kfold_plan(corpus, x_k, seed);
      CvOptions o;
      o.lemmas = x_opts.lemma_table(log);
      o.jobs = jobs;
      ExperimentTable table =
          confidence_experiment(corpus, plan, x_opts.feature_config(), x_opts.train_params(jobs),
                                gold ? &*gold : nullptr, o);
      primary_output = x_output;
      log.write(x_output, format_experiment(table));
      if (!x_cells.empty()) {
        std::string lines;
        for (const ExperimentCell& c : table.cells) lines += experiment_cell_json(c);
        log.write(x_cells, lines);
      }
      return kExitOk;
    };
  });

  // synth
  auto* synth = app.add_subcommand("synth", "Generate synthetic fixtures");
  std::string y_kind = "tagging", y_output = "-", y_annotations;
  std::size_t y_sentences = 500;
  synth->add_option("--kind", y_kind, "tagging, trigger or annotations")
      ->capture_default_str()
      ->check(CLI::IsMember({"tagging", "trigger", "annotations"}));
  synth->add_option("--sentences", y_sentences, "Sentence count (tagging, trigger)")->capture_default_str();
  synth->add_option("--output", y_output, "Column corpus")->capture_default_str();
  synth->add_option("--annotations", y_annotations, "Annotations JSONL (kind annotations)");
  synth->callback([&] {
    action = [&] {
      primary_output = y_output;
      if (y_kind == "tagging") {
        SyntheticCorpusOptions o;
        o.sentences = y_sentences;
        o.seed = seed;
        log.write(y_output, corpus_text(synthetic_tagging_corpus(o)));
      } else if (y_kind == "trigger") {
        log.write(y_output, corpus_text(synthetic_trigger_corpus(y_sentences, seed)));
      } else {
        if (y_annotations.empty()) throw Error("--annotations is required for kind annotations");
        AnnotationFixtureOptions o;
        o.seed = seed;
        AnnotationFixture f = synthetic_annotation_fixture(o);
        log.write(y_output, corpus_text(f.sentences));
        std::ostringstream out;
        write_annotations(f.sets, out);
        log.write(y_annotations, out.str());
      }
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  CLI::App* command = app.get_subcommands().front();
  int code = kExitInput;
  try {
    code = action();
  } catch (const std::exception& e) {
    std::cerr << "modtag " << command->get_name() << ": " << e.what() << '\n';
    return kExitInput;
  }

  try {
    nlohmann::ordered_json manifest = {
        {"command", command->get_name()},
        {"seed", seed},
        {"jobs", jobs},
        {"config", resolved_config(app, command->get_name())},
        {"inputs", log.inputs},
        {"outputs", log.outputs},
        {"exit_code", code}};
    std::string path = manifest_path;
    if (path.empty())
      path = primary_output.empty() || primary_output == "-" ? "modtag.manifest.json"
                                                             : primary_output + ".manifest.json";
    write_file_atomic(path, manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "modtag: cannot write manifest: " << e.what() << '\n';
    return kExitInput;
  }
  return code;
}
