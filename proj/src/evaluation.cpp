#include "modtag/evaluation.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace modtag {

std::string format_percent(const Ratio& r) {
  // Tenths of a percent, half-up: floor((1000 num / den) + 1/2).
  const std::uint64_t tenths = (r.num * 2000 + r.den) / (2 * r.den);
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::string format_percent(const std::optional<Ratio>& r) {
  return r ? format_percent(*r) : std::string("NA");
}

std::optional<Ratio> ClassCounts::precision() const {
  if (tp + fp == 0) return std::nullopt;
  return Ratio{tp, tp + fp};
}

std::optional<Ratio> ClassCounts::recall() const {
  if (tp + fn == 0) return std::nullopt;
  return Ratio{tp, tp + fn};
}

std::optional<Ratio> ClassCounts::f() const {
  if (!precision() || !recall() || tp == 0) return std::nullopt;
  return Ratio{2 * tp, 2 * tp + fp + fn};
}

ClassCounts& ClassCounts::operator+=(const ClassCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

std::optional<double> f_measure(std::optional<double> precision, std::optional<double> recall) {
  if (!precision || !recall || *precision + *recall <= 0.0) return std::nullopt;
  return 2.0 * *precision * *recall / (*precision + *recall);
}

ClassCounts PrfReport::overall() const {
  ClassCounts sum;
  for (const ClassCounts& c : per_class) sum += c;
  return sum;
}

PrfReport& PrfReport::operator+=(const PrfReport& o) {
  for (std::size_t i = 0; i < per_class.size(); ++i) per_class[i] += o.per_class[i];
  return *this;
}

namespace {

void count_token(PrfReport& report, ModalityTag gold, ModalityTag pred) {
  if (gold == pred) {
    if (is_modality(gold)) ++report.at(gold).tp;
    return;
  }
  if (is_modality(pred)) ++report.at(pred).fp;
  if (is_modality(gold)) ++report.at(gold).fn;
}

}  // namespace

void accumulate(PrfReport& report, const Sentence& sentence) {
  for (const Token& t : sentence.tokens) {
    if (!t.gold || !t.predicted)
      throw Error("sentence " + sentence.id + " has a token without gold and predicted tags");
    count_token(report, *t.gold, *t.predicted);
  }
}

PrfReport score(const Corpus& gold, const Corpus& predicted) {
  if (gold.size() != predicted.size())
    throw Error("corpora are misaligned: " + std::to_string(gold.size()) + " vs " +
                std::to_string(predicted.size()) + " sentences");
  PrfReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const Sentence& g = gold.sentences[i];
    const Sentence& p = predicted.sentences[i];
    if (g.id != p.id)
      throw Error("corpora are misaligned at sentence " + std::to_string(i) + ": '" + g.id +
                  "' vs '" + p.id + "'");
    if (g.size() != p.size())
      throw Error("corpora are misaligned: sentence " + g.id + " has " +
                  std::to_string(g.size()) + " vs " + std::to_string(p.size()) + " tokens");
    for (std::size_t t = 0; t < g.size(); ++t) {
      const Token& gt = g.tokens[t];
      const Token& pt = p.tokens[t];
      if (!gt.gold) throw Error("gold sentence " + g.id + " has an untagged token");
      std::optional<ModalityTag> pred = pt.predicted ? pt.predicted : pt.gold;
      if (!pred) throw Error("predicted sentence " + p.id + " has an untagged token");
      count_token(report, *gt.gold, *pred);
    }
  }
  return report;
}

std::string format_report(const PrfReport& report) {
  std::ostringstream out;
  auto row = [&](std::string_view name, const ClassCounts& c) {
    std::string n(name);
    n.resize(10, ' ');
    std::string p = format_percent(c.precision());
    std::string r = format_percent(c.recall());
    std::string f = format_percent(c.f());
    out << n << ' ' << std::string(6 - std::min<std::size_t>(6, p.size()), ' ') << p << ' '
        << std::string(6 - std::min<std::size_t>(6, r.size()), ' ') << r << ' '
        << std::string(6 - std::min<std::size_t>(6, f.size()), ' ') << f << '\n';
  };
  out << "Class           P      R      F\n";
  for (ModalityTag m : kModalities) row(to_string(m), report.at(m));
  row("Overall", report.overall());
  return out.str();
}

namespace {

nlohmann::ordered_json rate_json(const std::optional<Ratio>& r) {
  if (!r) return nullptr;
  return r->percent();
}

nlohmann::ordered_json prf_json(const ClassCounts& c) {
  return {{"precision", rate_json(c.precision())},
          {"recall", rate_json(c.recall())},
          {"f", rate_json(c.f())}};
}

nlohmann::ordered_json counts_json(const ClassCounts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
}

nlohmann::ordered_json report_json_value(const PrfReport& report) {
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (ModalityTag m : kModalities) {
    per_class[std::string(to_string(m))] = prf_json(report.at(m));
    counts[std::string(to_string(m))] = counts_json(report.at(m));
  }
  counts["overall"] = counts_json(report.overall());
  return {{"per_class", per_class}, {"overall", prf_json(report.overall())}, {"counts", counts}};
}

}  // namespace

std::string report_to_json(const PrfReport& report) {
  return report_json_value(report).dump(2) + "\n";
}

std::vector<std::size_t> FoldPlan::members(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i)
    if (fold[i] == f) out.push_back(i);
  return out;
}

FoldPlan kfold_plan(const Corpus& corpus, int k, std::uint64_t seed) {
  if (k < 2) throw Error("k-fold plan needs k >= 2, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) > corpus.size())
    throw Error("k-fold plan needs at least k sentences: k=" + std::to_string(k) + ", " +
                std::to_string(corpus.size()) + " sentences");
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  plan.fold.assign(corpus.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r)
    plan.fold[order[r]] = static_cast<int>(r % static_cast<std::size_t>(k));
  for (const Sentence& s : corpus.sentences) plan.ids.push_back(s.id);
  return plan;
}

std::string_view to_string(TestFilter f) {
  return f == TestFilter::kAll ? "Agr2+Agr3" : "Agr3";
}

namespace {

void check_plan(const Corpus& corpus, const FoldPlan& plan) {
  if (plan.k < 2 || plan.ids.size() != corpus.size() || plan.fold.size() != corpus.size())
    throw Error("fold plan does not cover the corpus");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (plan.ids[i] != corpus.sentences[i].id)
      throw Error("fold plan does not match corpus at sentence " + corpus.sentences[i].id);
    if (plan.fold[i] < 0 || plan.fold[i] >= plan.k)
      throw Error("fold plan has an out-of-range fold index");
  }
}

// Runs body(i) for i in [0, n) on up to `jobs` threads, rethrowing the
// first failure by index.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

CvResult cross_validate(const Corpus& corpus, const FoldPlan& plan,
                        const FeatureConfig& config, const TrainParams& params,
                        const TrainingSetup& setup, const CvOptions& options) {
  check_plan(corpus, plan);
  CvResult result;
  result.folds.resize(static_cast<std::size_t>(plan.k));
  TrainParams fold_params = params;
  if (options.jobs > 1) fold_params.jobs = 1;

  parallel_for(result.folds.size(), options.jobs, [&](std::size_t f) {
    Corpus train;
    Corpus test;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const Sentence& s = corpus.sentences[i];
      if (plan.fold[i] != static_cast<int>(f)) {
        train.sentences.push_back(s);
      } else if (options.test_filter == TestFilter::kAll ||
                 sentence_level(s) == AgreementLevel::kAgr3) {
        test.sentences.push_back(s);
      }
    }
    TaggerModel model = train_tagger(train, config, fold_params, setup, options.lemmas);
    Corpus tagged = tag_corpus(test, model);
    PrfReport report;
    for (const Sentence& s : tagged.sentences) accumulate(report, s);
    result.folds[f] = report;
  });
  for (const PrfReport& r : result.folds) result.pooled += r;
  return result;
}

namespace {

bool ratio_less(const Ratio& a, const Ratio& b) { return a.num * b.den < b.num * a.den; }

// true when a ranks before b.
bool ranks_before(const SearchResult& a, const SearchResult& b) {
  if (a.f.has_value() != b.f.has_value()) return a.f.has_value();
  if (a.f && b.f) {
    if (ratio_less(*b.f, *a.f)) return true;
    if (ratio_less(*a.f, *b.f)) return false;
  }
  if (a.config.active_count() != b.config.active_count())
    return a.config.active_count() < b.config.active_count();
  if (a.config.context_width != b.config.context_width)
    return a.config.context_width < b.config.context_width;
  return a.config.active() < b.config.active();
}

double f_value(const std::optional<Ratio>& f) { return f ? f->percent() : -1.0; }

}  // namespace

std::vector<SearchResult> search_configs(const std::vector<FeatureTemplate>& templates,
                                         const std::vector<int>& widths,
                                         SearchStrategy strategy,
                                         const ConfigEvaluator& evaluate,
                                         bool use_dynamic_tags, double threshold) {
  if (templates.empty()) throw Error("feature search needs at least one candidate template");
  if (widths.empty()) throw Error("feature search needs at least one context width");
  std::uint8_t all_mask = 0;
  for (FeatureTemplate t : templates) all_mask |= std::uint8_t(1u << static_cast<int>(t));
  std::vector<int> ws = widths;
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());

  std::map<std::pair<std::uint8_t, int>, SearchResult> memo;
  auto eval = [&](std::uint8_t mask, int w) -> const SearchResult& {
    auto key = std::make_pair(mask, w);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    FeatureConfig config{mask, w, use_dynamic_tags};
    config.validate();
    return memo.emplace(key, SearchResult{config, evaluate(config)}).first->second;
  };
  // Best F over all widths for a template set.
  auto best_over_widths = [&](std::uint8_t mask) {
    std::optional<Ratio> best;
    for (int w : ws) {
      const SearchResult& r = eval(mask, w);
      if (r.f && (!best || ratio_less(*best, *r.f))) best = r.f;
    }
    return best;
  };

  if (strategy == SearchStrategy::kExhaustive) {
    for (unsigned mask = 1; mask < 64u; ++mask) {
      if ((mask & ~unsigned{all_mask}) != 0) continue;
      for (int w : ws) eval(static_cast<std::uint8_t>(mask), w);
    }
  } else {
    std::uint8_t current = all_mask;
    std::optional<Ratio> current_f = best_over_widths(current);
    while (std::popcount(current) > 1) {
      std::optional<std::uint8_t> best_mask;
      std::optional<Ratio> best_f;
      for (FeatureTemplate t : kAllTemplates) {
        const std::uint8_t bit = std::uint8_t(1u << static_cast<int>(t));
        if (!(current & bit)) continue;
        const std::uint8_t candidate = current & std::uint8_t(~bit);
        std::optional<Ratio> f = best_over_widths(candidate);
        if (!best_mask || f_value(f) > f_value(best_f)) {
          best_mask = candidate;
          best_f = f;
        }
      }
      if (f_value(current_f) - f_value(best_f) > threshold) break;
      current = *best_mask;
      current_f = best_f;
    }
  }

  std::vector<SearchResult> ranked;
  ranked.reserve(memo.size());
  for (const auto& [key, r] : memo) ranked.push_back(r);
  std::sort(ranked.begin(), ranked.end(), ranks_before);
  return ranked;
}

std::vector<SearchResult> feature_search(const Corpus& corpus, const FoldPlan& plan,
                                         const std::vector<FeatureTemplate>& templates,
                                         const std::vector<int>& widths,
                                         const TrainParams& params, SearchStrategy strategy,
                                         const TrainingSetup& setup, const CvOptions& options) {
  return search_configs(
      templates, widths, strategy,
      [&](const FeatureConfig& config) {
        return cross_validate(corpus, plan, config, params, setup, options).pooled.overall().f();
      });
}

std::string_view to_string(TestCondition c) {
  switch (c) {
    case TestCondition::kAgr23: return "Agr2+Agr3";
    case TestCondition::kAgr3Only: return "Agr3";
    case TestCondition::kGold: return "Gold";
  }
  return "Agr2+Agr3";
}

const PrfReport& ExperimentTable::at(SetupName s, TestCondition c) const {
  for (const ExperimentCell& cell : cells)
    if (cell.setup == s && cell.condition == c) return cell.report;
  throw Error("experiment has no cell for " + std::string(to_string(s)) + " / " +
              std::string(to_string(c)));
}

ExperimentTable confidence_experiment(const Corpus& corpus, const FoldPlan& plan,
                                      const FeatureConfig& config, const TrainParams& params,
                                      const Corpus* gold, const CvOptions& options,
                                      const std::vector<TrainingSetup>& setups) {
  check_plan(corpus, plan);
  ExperimentTable table;
  table.setups = setups;
  table.conditions = {TestCondition::kAgr23, TestCondition::kAgr3Only};
  if (gold) table.conditions.push_back(TestCondition::kGold);

  for (const TrainingSetup& setup : setups) {
    for (TestCondition c : table.conditions) {
      ExperimentCell cell{setup.name, c, {}};
      if (c == TestCondition::kGold) {
        TaggerModel model = train_tagger(corpus, config, params, setup, options.lemmas);
        cell.report = score(*gold, tag_corpus(*gold, model, options.jobs));
      } else {
        CvOptions o = options;
        o.test_filter = c == TestCondition::kAgr23 ? TestFilter::kAll : TestFilter::kAgr3Only;
        cell.report = cross_validate(corpus, plan, config, params, setup, o).pooled;
      }
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

std::string format_experiment(const ExperimentTable& table) {
  auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
  };
  std::ostringstream out;
  out << "Setup   ";
  for (TestCondition c : table.conditions) {
    std::string head = "Tested on " + std::string(to_string(c));
    head.resize(22, ' ');
    out << " | " << head;
  }
  out << '\n' << "        ";
  for (std::size_t i = 0; i < table.conditions.size(); ++i)
    out << " | " << pad("P", 6) << ' ' << pad("R", 6) << ' ' << pad("F", 6) << ' ';
  out << '\n';
  for (const TrainingSetup& setup : table.setups) {
    std::string name(to_string(setup.name));
    name.resize(8, ' ');
    out << name;
    for (TestCondition c : table.conditions) {
      ClassCounts o = table.at(setup.name, c).overall();
      out << " | " << pad(format_percent(o.precision()), 6) << ' '
          << pad(format_percent(o.recall()), 6) << ' ' << pad(format_percent(o.f()), 6) << ' ';
    }
    out << '\n';
  }
  return out.str();
}

std::string experiment_cell_json(const ExperimentCell& cell) {
  nlohmann::ordered_json j = {{"setup", std::string(to_string(cell.setup))},
                              {"condition", std::string(to_string(cell.condition))}};
  nlohmann::ordered_json report = report_json_value(cell.report);
  for (auto it = report.begin(); it != report.end(); ++it) j[it.key()] = it.value();
  return j.dump() + "\n";
}

}  // namespace modtag
