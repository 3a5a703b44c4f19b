#include "modtag/trigger_tagger.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "modtag/io.hpp"
#include "modtag/porter.hpp"

namespace modtag {

void Lexicon::add(std::string_view trigger, ModalityTag modality) {
  if (!is_modality(modality)) throw Error("lexicon entries cannot map to O");
  std::string key = to_lower(trim(trigger));
  if (key.empty()) throw Error("empty lexicon trigger");
  auto [it, inserted] = entries_.emplace(key, modality);
  if (!inserted && it->second != modality)
    throw Error("trigger '" + key + "' mapped to both " +
                std::string(to_string(it->second)) + " and " +
                std::string(to_string(modality)));
  std::string stem = porter_stem(key);
  auto [sit, sinserted] = stem_to_trigger_.emplace(stem, key);
  if (!sinserted && entries_.at(sit->second) != modality)
    throw Error("triggers '" + sit->second + "' and '" + key +
                "' share stem '" + stem + "' but differ in modality");
}

std::optional<std::pair<std::string_view, ModalityTag>> Lexicon::match(
    std::string_view surface) const {
  std::string lower = to_lower(surface);
  if (auto it = entries_.find(lower); it != entries_.end())
    return std::pair<std::string_view, ModalityTag>(it->first, it->second);
  if (stem_matching_) {
    auto sit = stem_to_trigger_.find(porter_stem(lower));
    if (sit != stem_to_trigger_.end()) {
      auto it = entries_.find(sit->second);
      return std::pair<std::string_view, ModalityTag>(it->first, it->second);
    }
  }
  return std::nullopt;
}

bool Lexicon::contains(std::string_view lower_word) const {
  return entries_.count(std::string(lower_word)) > 0;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path.string());
  Lexicon lexicon;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2)
      throw ParseError(path.string(), line_no, "expected trigger<TAB>Modality");
    auto tag = parse_tag(trim(cols[1]));
    if (!tag || !is_modality(*tag))
      throw ParseError(path.string(), line_no,
                       "unknown modality '" + std::string(cols[1]) + "'");
    try {
      lexicon.add(cols[0], *tag);
    } catch (const Error& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
  return lexicon;
}

FilterSet load_filters(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open filter file " + path.string());
  FilterSet filters;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2)
      throw ParseError(path.string(), line_no, "expected Modality<TAB>phrase");
    auto tag = parse_tag(trim(cols[0]));
    if (!tag || !is_modality(*tag))
      throw ParseError(path.string(), line_no,
                       "unknown modality '" + std::string(cols[0]) + "'");
    FilterPattern pattern{*tag, {}};
    for (std::string_view w : split(cols[1], ' ')) {
      if (!w.empty()) pattern.phrase.push_back(to_lower(w));
    }
    if (pattern.phrase.empty())
      throw ParseError(path.string(), line_no, "empty filter phrase");
    filters.patterns.push_back(std::move(pattern));
  }
  return filters;
}

void validate_filters(const FilterSet& filters, const Lexicon& lexicon) {
  for (const FilterPattern& p : filters.patterns) {
    if (p.phrase.size() == 1 && lexicon.contains(p.phrase[0]))
      throw Error("filter '" + p.phrase[0] +
                  "' is a bare trigger; a filter must name a context");
  }
}

std::vector<TriggerMatch> tag_triggers(const Sentence& sentence,
                                       const Lexicon& lexicon,
                                       const FilterSet& filters) {
  const std::size_t n = sentence.size();
  std::vector<std::string> lower(n);
  for (std::size_t i = 0; i < n; ++i) lower[i] = to_lower(sentence.tokens[i].surface);

  // suppressed[i] has bit m set when token i sits inside an occurrence of a
  // filter phrase for modality m.
  std::vector<std::uint8_t> suppressed(n, 0);
  for (const FilterPattern& p : filters.patterns) {
    const std::size_t len = p.phrase.size();
    if (len == 0 || len > n) continue;
    for (std::size_t start = 0; start + len <= n; ++start) {
      if (!std::equal(p.phrase.begin(), p.phrase.end(), lower.begin() + static_cast<long>(start)))
        continue;
      for (std::size_t k = start; k < start + len; ++k)
        suppressed[k] |= std::uint8_t(1u << tag_index(p.modality));
    }
  }

  std::vector<TriggerMatch> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto m = lexicon.match(lower[i]);
    if (!m) continue;
    if (suppressed[i] & (1u << tag_index(m->second))) continue;
    out.push_back(TriggerMatch{sentence.id, i, std::string(m->first), m->second});
  }
  return out;
}

std::map<ModalityTag, std::vector<Candidate>> select_candidates(
    const Corpus& corpus, const Lexicon& lexicon, const FilterSet& filters,
    std::size_t cap, std::uint64_t seed) {
  if (cap < 1) throw Error("candidate cap must be >= 1");

  struct Hit {
    std::size_t sentence_ordinal;
    TriggerMatch match;
  };
  // (modality, trigger) -> hits in corpus order.
  std::map<std::pair<ModalityTag, std::string>, std::vector<Hit>> groups;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    std::uint8_t seen = 0;
    for (TriggerMatch& m : tag_triggers(corpus.sentences[s], lexicon, filters)) {
      std::uint8_t bit = std::uint8_t(1u << tag_index(m.modality));
      if (seen & bit) continue;
      seen |= bit;
      auto key = std::make_pair(m.modality, m.trigger);
      groups[key].push_back(Hit{s, std::move(m)});
    }
  }

  std::mt19937_64 rng(seed);
  std::map<ModalityTag, std::vector<Hit>> kept;
  for (auto& [key, hits] : groups) {
    std::vector<Hit>& dest = kept[key.first];
    if (hits.size() <= cap) {
      for (Hit& h : hits) dest.push_back(std::move(h));
    } else {
      std::vector<Hit> sample;
      sample.reserve(cap);
      // std::sample keeps the relative order of the selected elements.
      std::sample(std::make_move_iterator(hits.begin()),
                  std::make_move_iterator(hits.end()), std::back_inserter(sample),
                  static_cast<std::ptrdiff_t>(cap), rng);
      for (Hit& h : sample) dest.push_back(std::move(h));
    }
  }

  std::map<ModalityTag, std::vector<Candidate>> out;
  for (auto& [modality, hits] : kept) {
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
      return a.sentence_ordinal < b.sentence_ordinal;
    });
    auto& dest = out[modality];
    for (Hit& h : hits)
      dest.push_back(Candidate{&corpus.sentences[h.sentence_ordinal], std::move(h.match)});
  }
  return out;
}

}  // namespace modtag
