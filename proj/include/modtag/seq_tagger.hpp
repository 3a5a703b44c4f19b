// Windowed one-vs-all SVM sequence tagger with greedy left-to-right
// decoding. Training uses gold previous tags as the dynamic features;
// decoding feeds back its own predictions.

#ifndef MODTAG_SEQ_TAGGER_HPP_
#define MODTAG_SEQ_TAGGER_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modtag/annotation.hpp"
#include "modtag/corpus.hpp"
#include "modtag/features.hpp"
#include "modtag/svm.hpp"

namespace modtag {

// The SVM model carries the feature config, vocabulary and lemma table
// used at training time.
using TaggerModel = SvmModel;

enum class SetupName { kTr23, kTr2, kTr3, kTr23W };
std::string_view to_string(SetupName name);
std::optional<SetupName> parse_setup_name(std::string_view s);

// Which agreement levels train, and with what instance cost.
struct TrainingSetup {
  SetupName name = SetupName::kTr23;
  double cost_agr2 = 1.0;
  double cost_agr3 = 1.0;

  bool uses_agr2() const { return name != SetupName::kTr3; }
  bool uses_agr3() const { return name != SetupName::kTr2; }
};

// Defaults: Tr23 (1, 1); Tr2 and Tr3 (1, 1) on their subset; Tr23_W (20, 30).
TrainingSetup make_setup(SetupName name);
std::vector<TrainingSetup> default_setups();

// Sentence agreement: 3 -> Agr3, 2 -> Agr2, anything else unknown.
std::optional<AgreementLevel> sentence_level(const Sentence& s);

struct TrainingData {
  std::vector<TaggedVector> vectors;
  std::vector<double> costs;
  FeatureVocabulary vocabulary;
  std::size_t sentences = 0;
};

// Filters and weights sentences per setup, then vectorizes every token.
// Throws Error when the corpus is empty, a token lacks a gold tag, a
// sentence needed for filtering/weighting has no agreement level, or the
// setup leaves no data ("no training data after filtering").
TrainingData build_training_data(const Corpus& corpus, const FeatureConfig& config,
                                 const TrainingSetup& setup, const LemmaTable& lemmas);

TaggerModel train_tagger(const Corpus& corpus, const FeatureConfig& config,
                         const TrainParams& params, const TrainingSetup& setup,
                         const LemmaTable& lemmas = {});

// Precompiled model for repeated decoding.
class Decoder {
 public:
  explicit Decoder(const TaggerModel& model) : model_(&model), scorer_(model) {}

  std::vector<ModalityTag> decode(const Sentence& sentence) const;
  // Decodes right to left; only valid without dynamic tags, where it must
  // agree with decode().
  std::vector<ModalityTag> decode_reverse(const Sentence& sentence) const;

 private:
  const TaggerModel* model_;
  SvmScorer scorer_;
};

std::vector<ModalityTag> decode(const Sentence& sentence, const TaggerModel& model);

// Copy of the corpus with every token's predicted tag set. jobs > 1 decodes
// sentences on worker threads; the result does not depend on jobs.
Corpus tag_corpus(const Corpus& corpus, const TaggerModel& model, int jobs = 1);

}  // namespace modtag

#endif  // MODTAG_SEQ_TAGGER_HPP_
