// Token-level precision/recall/F per modality, k-fold cross-validation,
// feature-set search and the annotator-confidence grid.
//
// Rates are kept as exact count ratios and only turned into percentages at
// the edges; "Overall" is the micro sum over the five modalities.

#ifndef MODTAG_EVALUATION_HPP_
#define MODTAG_EVALUATION_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modtag/corpus.hpp"
#include "modtag/features.hpp"
#include "modtag/seq_tagger.hpp"
#include "modtag/svm.hpp"

namespace modtag {

// num / den as a percentage. den == 0 never escapes: such rates are absent.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double percent() const { return 100.0 * static_cast<double>(num) / static_cast<double>(den); }
};

// Percentage with one decimal, rounded half-up on the exact ratio.
std::string format_percent(const Ratio& r);
std::string format_percent(const std::optional<Ratio>& r);  // "NA" when absent

struct ClassCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::optional<Ratio> precision() const;
  std::optional<Ratio> recall() const;
  // 2PR/(P+R) == 2tp/(2tp+fp+fn); absent when P or R is, or P+R == 0.
  std::optional<Ratio> f() const;

  ClassCounts& operator+=(const ClassCounts& o);
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

// Harmonic mean of two percentages, for checking transcribed table rows.
std::optional<double> f_measure(std::optional<double> precision, std::optional<double> recall);

struct PrfReport {
  std::array<ClassCounts, kNumModalities> per_class{};

  const ClassCounts& at(ModalityTag m) const { return per_class[tag_index(m)]; }
  ClassCounts& at(ModalityTag m) { return per_class[tag_index(m)]; }
  ClassCounts overall() const;

  PrfReport& operator+=(const PrfReport& o);
  friend bool operator==(const PrfReport&, const PrfReport&) = default;
};

// Adds one sentence whose tokens carry both gold and predicted tags.
void accumulate(PrfReport& report, const Sentence& sentence);

// Tokens of `predicted` are read from their predicted tag when set, else
// from their gold column. Throws Error unless the corpora have the same
// sentence ids and lengths and every gold token has a gold tag.
PrfReport score(const Corpus& gold, const Corpus& predicted);

std::string format_report(const PrfReport& report);
std::string report_to_json(const PrfReport& report);

struct FoldPlan {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> ids;  // corpus order
  std::vector<int> fold;         // fold[i] for ids[i]

  std::vector<std::size_t> members(int f) const;
};

// Shuffles sentence positions with the seed and deals them round-robin.
// Throws Error for k < 2 or k > corpus size.
FoldPlan kfold_plan(const Corpus& corpus, int k, std::uint64_t seed);

enum class TestFilter { kAll, kAgr3Only };
std::string_view to_string(TestFilter f);

struct CvResult {
  PrfReport pooled;
  std::vector<PrfReport> folds;
};

struct CvOptions {
  TestFilter test_filter = TestFilter::kAll;
  LemmaTable lemmas;
  // Folds run on up to this many threads.
  int jobs = 1;
};

// Throws Error when the plan does not match the corpus or a fold's training
// side is emptied by the setup.
CvResult cross_validate(const Corpus& corpus, const FoldPlan& plan,
                        const FeatureConfig& config, const TrainParams& params,
                        const TrainingSetup& setup, const CvOptions& options = {});

enum class SearchStrategy { kExhaustive, kGreedyPrune };

struct SearchResult {
  FeatureConfig config;
  std::optional<Ratio> f;
};

using ConfigEvaluator = std::function<std::optional<Ratio>(const FeatureConfig&)>;

// Ranked best first: F descending (absent last), then fewer templates,
// smaller width, canonical template order. Each config is evaluated once.
std::vector<SearchResult> search_configs(const std::vector<FeatureTemplate>& templates,
                                         const std::vector<int>& widths,
                                         SearchStrategy strategy,
                                         const ConfigEvaluator& evaluate,
                                         bool use_dynamic_tags = true,
                                         double threshold = 0.0);

std::vector<SearchResult> feature_search(const Corpus& corpus, const FoldPlan& plan,
                                         const std::vector<FeatureTemplate>& templates,
                                         const std::vector<int>& widths,
                                         const TrainParams& params, SearchStrategy strategy,
                                         const TrainingSetup& setup = {},
                                         const CvOptions& options = {});

enum class TestCondition { kAgr23, kAgr3Only, kGold };
std::string_view to_string(TestCondition c);

struct ExperimentCell {
  SetupName setup;
  TestCondition condition;
  PrfReport report;
};

struct ExperimentTable {
  std::vector<TrainingSetup> setups;
  std::vector<TestCondition> conditions;
  std::vector<ExperimentCell> cells;  // setup-major

  const PrfReport& at(SetupName s, TestCondition c) const;
};

ExperimentTable confidence_experiment(const Corpus& corpus, const FoldPlan& plan,
                                      const FeatureConfig& config, const TrainParams& params,
                                      const Corpus* gold = nullptr,
                                      const CvOptions& options = {},
                                      const std::vector<TrainingSetup>& setups = default_setups());

// Overall P/R/F per setup row, one P R F column group per condition.
std::string format_experiment(const ExperimentTable& table);
std::string experiment_cell_json(const ExperimentCell& cell);

}  // namespace modtag

#endif  // MODTAG_EVALUATION_HPP_
