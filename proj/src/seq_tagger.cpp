#include "modtag/seq_tagger.hpp"

#include <algorithm>
#include <thread>

namespace modtag {

std::string_view to_string(SetupName name) {
  switch (name) {
    case SetupName::kTr23: return "Tr23";
    case SetupName::kTr2: return "Tr2";
    case SetupName::kTr3: return "Tr3";
    case SetupName::kTr23W: return "Tr23_W";
  }
  return "Tr23";
}

std::optional<SetupName> parse_setup_name(std::string_view s) {
  for (SetupName n : {SetupName::kTr23, SetupName::kTr2, SetupName::kTr3, SetupName::kTr23W}) {
    if (to_string(n) == s) return n;
  }
  return std::nullopt;
}

TrainingSetup make_setup(SetupName name) {
  TrainingSetup setup;
  setup.name = name;
  if (name == SetupName::kTr23W) {
    setup.cost_agr2 = 20.0;
    setup.cost_agr3 = 30.0;
  }
  return setup;
}

std::vector<TrainingSetup> default_setups() {
  return {make_setup(SetupName::kTr23), make_setup(SetupName::kTr2),
          make_setup(SetupName::kTr3), make_setup(SetupName::kTr23W)};
}

std::optional<AgreementLevel> sentence_level(const Sentence& s) {
  if (!s.agreement) return std::nullopt;
  if (*s.agreement == 3) return AgreementLevel::kAgr3;
  if (*s.agreement == 2) return AgreementLevel::kAgr2;
  return std::nullopt;
}

TrainingData build_training_data(const Corpus& corpus, const FeatureConfig& config,
                                 const TrainingSetup& setup, const LemmaTable& lemmas) {
  config.validate();
  if (corpus.empty()) throw Error("cannot train on an empty corpus");
  const bool needs_level = setup.name != SetupName::kTr23 ||
                           setup.cost_agr2 != setup.cost_agr3;

  std::vector<std::vector<std::string>> strings;
  std::vector<ModalityTag> tags;
  TrainingData data;
  for (const Sentence& s : corpus.sentences) {
    double cost = setup.cost_agr2;
    if (needs_level) {
      auto level = sentence_level(s);
      if (!level)
        throw Error("sentence " + s.id + " has no agreement level; setup " +
                    std::string(to_string(setup.name)) + " needs one");
      if (*level == AgreementLevel::kAgr2 && !setup.uses_agr2()) continue;
      if (*level == AgreementLevel::kAgr3 && !setup.uses_agr3()) continue;
      cost = *level == AgreementLevel::kAgr3 ? setup.cost_agr3 : setup.cost_agr2;
    }
    std::vector<ModalityTag> gold;
    gold.reserve(s.size());
    for (const Token& t : s.tokens) {
      if (!t.gold) throw Error("token '" + t.surface + "' in " + s.id + " has no gold tag");
      gold.push_back(*t.gold);
    }
    auto feats = extract_sentence_features(s, config, lemmas);
    for (std::size_t t = 0; t < s.size(); ++t) {
      strings.push_back(window_feature_strings(
          feats, t, std::span<const ModalityTag>(gold.data(), t), config));
      tags.push_back(gold[t]);
      data.costs.push_back(cost);
    }
    ++data.sentences;
  }
  if (strings.empty()) throw Error("no training data after filtering");

  data.vocabulary = fit_vocabulary(strings);
  data.vectors.reserve(strings.size());
  for (std::size_t i = 0; i < strings.size(); ++i)
    data.vectors.push_back(TaggedVector{vectorize(strings[i], data.vocabulary), tags[i]});
  return data;
}

TaggerModel train_tagger(const Corpus& corpus, const FeatureConfig& config,
                         const TrainParams& params, const TrainingSetup& setup,
                         const LemmaTable& lemmas) {
  TrainingData data = build_training_data(corpus, config, setup, lemmas);
  TaggerModel model = train_multiclass(data.vectors, params, data.costs);
  model.vocabulary = std::move(data.vocabulary);
  model.config = config;
  model.lemmas = lemmas;
  return model;
}

std::vector<ModalityTag> Decoder::decode(const Sentence& sentence) const {
  const FeatureConfig& config = model_->config;
  auto feats = extract_sentence_features(sentence, config, model_->lemmas);
  std::vector<ModalityTag> out;
  out.reserve(sentence.size());
  for (std::size_t t = 0; t < sentence.size(); ++t) {
    auto strings = window_feature_strings(feats, t, out, config);
    out.push_back(scorer_.predict(vectorize(strings, model_->vocabulary)));
  }
  return out;
}

std::vector<ModalityTag> Decoder::decode_reverse(const Sentence& sentence) const {
  const FeatureConfig& config = model_->config;
  if (config.use_dynamic_tags)
    throw Error("right-to-left decoding requires dynamic tags to be off");
  auto feats = extract_sentence_features(sentence, config, model_->lemmas);
  std::vector<ModalityTag> out(sentence.size(), ModalityTag::kO);
  for (std::size_t t = sentence.size(); t-- > 0;) {
    auto strings = window_feature_strings(feats, t, {}, config);
    out[t] = scorer_.predict(vectorize(strings, model_->vocabulary));
  }
  return out;
}

std::vector<ModalityTag> decode(const Sentence& sentence, const TaggerModel& model) {
  return Decoder(model).decode(sentence);
}

Corpus tag_corpus(const Corpus& corpus, const TaggerModel& model, int jobs) {
  Corpus out = corpus;
  Decoder decoder(model);
  auto run = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < out.size(); i += step) {
      Sentence& s = out.sentences[i];
      std::vector<ModalityTag> tags = decoder.decode(s);
      for (std::size_t t = 0; t < s.size(); ++t) s.tokens[t].predicted = tags[t];
    }
  };
  const std::size_t workers =
      static_cast<std::size_t>(std::clamp(jobs, 1, 64));
  if (workers == 1 || out.size() < 2) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
    for (std::thread& t : pool) t.join();
  }
  return out;
}

}  // namespace modtag
