#include "modtag/features.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "modtag/io.hpp"
#include "modtag/porter.hpp"

namespace modtag {

std::string_view template_name(FeatureTemplate t) {
  switch (t) {
    case FeatureTemplate::kWordStem: return "wordStem";
    case FeatureTemplate::kWordLemma: return "wordLemma";
    case FeatureTemplate::kPos: return "POS";
    case FeatureTemplate::kIsNumeric: return "isNumeric";
    case FeatureTemplate::kVerbType: return "verbType";
    case FeatureTemplate::kWhichModal: return "whichModal";
  }
  return "";
}

std::optional<FeatureTemplate> parse_template(std::string_view name) {
  for (FeatureTemplate t : kAllTemplates) {
    if (template_name(t) == name) return t;
  }
  return std::nullopt;
}

std::size_t FeatureConfig::active_count() const {
  std::size_t n = 0;
  for (FeatureTemplate t : kAllTemplates) n += has(t) ? 1 : 0;
  return n;
}

std::vector<FeatureTemplate> FeatureConfig::active() const {
  std::vector<FeatureTemplate> out;
  for (FeatureTemplate t : kAllTemplates) {
    if (has(t)) out.push_back(t);
  }
  return out;
}

void FeatureConfig::validate() const {
  if (active_count() == 0) throw Error("feature config has no active templates");
  if (active_mask >> kNumTemplates) throw Error("feature config has unknown template bits");
  if (context_width < 1 || context_width > 5)
    throw Error("context width must be in [1, 5], got " +
                std::to_string(context_width));
}

std::string FeatureConfig::templates_string() const {
  std::string out;
  for (FeatureTemplate t : active()) {
    if (!out.empty()) out += ',';
    out += template_name(t);
  }
  return out;
}

FeatureConfig parse_feature_config(std::string_view templates, int width,
                                   bool use_dynamic_tags) {
  FeatureConfig config;
  config.context_width = width;
  config.use_dynamic_tags = use_dynamic_tags;
  for (std::string_view name : split(templates, ',')) {
    name = trim(name);
    if (name.empty()) continue;
    auto t = parse_template(name);
    if (!t) throw Error("unknown feature template '" + std::string(name) + "'");
    config.set(*t);
  }
  config.validate();
  return config;
}

FeatureConfig default_feature_config() {
  FeatureConfig config;
  config.set(FeatureTemplate::kWordStem);
  config.set(FeatureTemplate::kPos);
  config.set(FeatureTemplate::kWhichModal);
  config.context_width = 2;
  config.use_dynamic_tags = true;
  return config;
}

// ---------------------------------------------------------------------------
// Lemmatizer

LemmaTable::LemmaTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    entries_[i].word = to_lower(entries_[i].word);
    entries_[i].lemma = to_lower(entries_[i].lemma);
    by_word_.emplace(entries_[i].word, i);
  }
}

std::optional<std::string_view> LemmaTable::lookup(std::string_view lower_word,
                                                   std::string_view pos) const {
  auto [lo, hi] = by_word_.equal_range(std::string(lower_word));
  const Entry* best = nullptr;
  for (auto it = lo; it != hi; ++it) {
    const Entry& e = entries_[it->second];
    if (pos.substr(0, e.pos_prefix.size()) != e.pos_prefix) continue;
    // Longest prefix wins; file order breaks ties.
    if (!best || e.pos_prefix.size() > best->pos_prefix.size() ||
        (e.pos_prefix.size() == best->pos_prefix.size() &&
         it->second < static_cast<std::size_t>(best - entries_.data()))) {
      best = &e;
    }
  }
  if (!best) return std::nullopt;
  return std::string_view(best->lemma);
}

LemmaTable load_lemma_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lemma table " + path.string());
  std::vector<LemmaTable::Entry> entries;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 3 || cols[0].empty() || cols[2].empty())
      throw ParseError(path.string(), line_no,
                       "expected word<TAB>POS-prefix<TAB>lemma");
    entries.push_back({std::string(cols[0]), std::string(cols[1]),
                       std::string(cols[2])});
  }
  return LemmaTable(std::move(entries));
}

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool is_consonant_at(std::string_view w, std::size_t i) {
  char c = w[i];
  if (!std::isalpha(static_cast<unsigned char>(c))) return false;
  if (is_vowel(c)) return false;
  if (c == 'y') return i == 0 || is_vowel(w[i - 1]);
  return true;
}

// Count of vowel-consonant transitions, as in the Porter measure.
int measure(std::string_view w) {
  int n = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    bool cons = is_consonant_at(w, i);
    if (cons && prev_vowel) ++n;
    prev_vowel = !cons;
  }
  return n;
}

// Short stem needing a restored final e: "hop" -> "hope", "manag" -> "manage".
bool is_vowel_at(std::string_view w, std::size_t i) { return !is_consonant_at(w, i); }

bool wants_final_e(std::string_view stem) {
  std::size_t n = stem.size();
  if (n < 3) return false;
  // Stems English never ends bare: receiv, forc, manag, continu, amaz, caus.
  const char last = stem[n - 1];
  if (last == 'v' || last == 'c' || last == 'u') return true;
  if ((last == 'g' || last == 'z') && is_vowel_at(stem, n - 2)) return true;
  if (last == 's' && is_vowel_at(stem, n - 2) && is_vowel_at(stem, n - 3)) return true;
  if (!is_consonant_at(stem, n - 1) || is_consonant_at(stem, n - 2) ||
      !is_consonant_at(stem, n - 3))
    return false;
  if (last == 'w' || last == 'x' || last == 'y') return false;
  return measure(stem) == 1;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.substr(w.size() - suffix.size()) == suffix;
}

// Undo consonant doubling ("stopp" -> "stop"); l, s and z stay doubled.
std::string undouble(std::string stem) {
  std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && is_consonant_at(stem, n - 1)) {
    char c = stem[n - 1];
    if (c != 'l' && c != 's' && c != 'z') stem.pop_back();
  }
  return stem;
}

bool has_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (std::isalpha(static_cast<unsigned char>(w[i])) && !is_consonant_at(w, i))
      return true;
  }
  return false;
}

std::string strip_plural(const std::string& w) {
  if (w.size() <= 3) {
    if (w.size() == 3 && ends_with(w, "s") && !ends_with(w, "ss") &&
        !ends_with(w, "us") && !ends_with(w, "is"))
      return w.substr(0, 2);
    return w;
  }
  if (ends_with(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  for (std::string_view sib : {"sses", "shes", "ches", "xes", "zes", "oes"}) {
    if (ends_with(w, sib)) return w.substr(0, w.size() - 2);
  }
  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
  if (ends_with(w, "s")) return w.substr(0, w.size() - 1);
  return w;
}

std::string strip_verbal(const std::string& w, std::string_view suffix) {
  if (!ends_with(w, suffix)) return w;
  std::string stem = w.substr(0, w.size() - suffix.size());
  if (stem.size() < 2 || !has_vowel(stem)) return w;
  if (suffix == "ed" && ends_with(stem, "i")) {
    if (stem.size() == 2) return stem + "e";  // "tied"
    if (is_consonant_at(stem, stem.size() - 2)) {
      stem.back() = 'y';  // "tried"
      return stem;
    }
  }
  if (suffix == "ed" && ends_with(stem, "e")) return stem + "e";  // "agreed"
  std::string undoubled = undouble(stem);
  if (undoubled != stem) return undoubled;
  if (wants_final_e(stem)) return stem + "e";
  return stem;
}

}  // namespace

std::string lemmatize(std::string_view word, std::string_view pos,
                      const LemmaTable& table) {
  std::string lower = to_lower(word);
  if (auto hit = table.lookup(lower, pos)) return std::string(*hit);
  if (pos == "NNS" || pos == "NNPS" || pos == "VBZ") return strip_plural(lower);
  if (pos == "VBD" || pos == "VBN") return strip_verbal(lower, "ed");
  if (pos == "VBG") return strip_verbal(lower, "ing");
  return lower;
}

bool is_numeric(std::string_view word) {
  if (word.empty()) return false;
  return std::all_of(word.begin(), word.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view to_string(VerbType v) {
  switch (v) {
    case VerbType::kModal: return "Modal";
    case VerbType::kAuxiliary: return "Auxiliary";
    case VerbType::kRegular: return "Regular";
    case VerbType::kNil: return "Nil";
  }
  return "Nil";
}

VerbType verb_type(std::string_view word, std::string_view pos) {
  static constexpr std::string_view kAuxiliaries[] = {
      "be", "am", "is", "are", "was", "were", "been", "being",
      "have", "has", "had", "having", "do", "does", "did", "done"};
  if (pos == "MD") return VerbType::kModal;
  if (pos.substr(0, 2) != "VB") return VerbType::kNil;
  std::string lower = to_lower(word);
  for (std::string_view aux : kAuxiliaries) {
    if (lower == aux) return VerbType::kAuxiliary;
  }
  return VerbType::kRegular;
}

std::string which_modal(std::string_view word, std::string_view pos) {
  if (pos == "MD") return to_lower(word);
  return "Nil";
}

std::vector<std::string> extract_token_features(const Token& token,
                                                const FeatureConfig& config,
                                                const LemmaTable& lemmas) {
  std::vector<std::string> out;
  out.reserve(config.active_count());
  for (FeatureTemplate t : kAllTemplates) {
    if (!config.has(t)) continue;
    switch (t) {
      case FeatureTemplate::kWordStem:
        out.push_back("stem=" + porter_stem(to_lower(token.surface)));
        break;
      case FeatureTemplate::kWordLemma:
        out.push_back("lemma=" + lemmatize(token.surface, token.pos, lemmas));
        break;
      case FeatureTemplate::kPos:
        out.push_back("pos=" + token.pos);
        break;
      case FeatureTemplate::kIsNumeric:
        out.push_back(is_numeric(token.surface) ? "isNumeric=true"
                                                : "isNumeric=false");
        break;
      case FeatureTemplate::kVerbType:
        out.push_back("verbType=" +
                      std::string(to_string(verb_type(token.surface, token.pos))));
        break;
      case FeatureTemplate::kWhichModal:
        out.push_back("whichModal=" + which_modal(token.surface, token.pos));
        break;
    }
  }
  return out;
}

std::vector<std::vector<std::string>> extract_sentence_features(
    const Sentence& sentence, const FeatureConfig& config,
    const LemmaTable& lemmas) {
  std::vector<std::vector<std::string>> out;
  out.reserve(sentence.size());
  for (const Token& t : sentence.tokens)
    out.push_back(extract_token_features(t, config, lemmas));
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary and vectors

std::optional<std::uint32_t> FeatureVocabulary::find(std::string_view feature) const {
  auto it = index_.find(std::string(feature));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> FeatureVocabulary::intern(std::string_view feature) {
  std::string key(feature);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  if (frozen_) return std::nullopt;
  auto idx = static_cast<std::uint32_t>(strings_.size());
  strings_.push_back(key);
  index_.emplace(std::move(key), idx);
  return idx;
}

FeatureVocabulary FeatureVocabulary::from_strings(std::vector<std::string> strings) {
  FeatureVocabulary v;
  for (const std::string& s : strings) {
    if (!v.index_.emplace(s, static_cast<std::uint32_t>(v.strings_.size())).second)
      throw Error("duplicate vocabulary entry '" + s + "'");
    v.strings_.push_back(s);
  }
  v.frozen_ = true;
  return v;
}

SparseVector SparseVector::from_unsorted(std::vector<std::uint32_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return SparseVector{std::move(indices)};
}

double dot(const SparseVector& x, const SparseVector& y) {
  std::size_t i = 0, j = 0, n = 0;
  const auto& a = x.indices;
  const auto& b = y.indices;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(n);
}

namespace {

std::string offset_prefix(int offset) {
  std::string p = "o:";
  if (offset > 0) p += '+';
  p += std::to_string(offset);
  p += '|';
  return p;
}

}  // namespace

std::vector<std::string> window_feature_strings(
    std::span<const std::vector<std::string>> sentence_features,
    std::size_t position, std::span<const ModalityTag> previous_tags,
    const FeatureConfig& config) {
  const auto n = static_cast<long>(sentence_features.size());
  const int w = config.context_width;
  if (static_cast<long>(position) >= n)
    throw Error("window position " + std::to_string(position) +
                " out of range for sentence of length " + std::to_string(n));

  std::vector<std::string> out;
  for (int o = -w; o <= w; ++o) {
    long p = static_cast<long>(position) + o;
    std::string prefix = offset_prefix(o);
    if (p < 0) {
      out.push_back(prefix + "PAD=BOS");
    } else if (p >= n) {
      out.push_back(prefix + "PAD=EOS");
    } else {
      for (const std::string& f : sentence_features[static_cast<std::size_t>(p)])
        out.push_back(prefix + f);
    }
  }
  if (config.use_dynamic_tags) {
    std::size_t needed = std::min<std::size_t>(position, static_cast<std::size_t>(w));
    if (previous_tags.size() < needed)
      throw Error("window at position " + std::to_string(position) +
                  " needs " + std::to_string(needed) + " previous tags");
    for (int k = 1; k <= w; ++k) {
      std::string f = "tag:-" + std::to_string(k) + "=";
      if (static_cast<std::size_t>(k) > position ||
          static_cast<std::size_t>(k) > previous_tags.size()) {
        f += "PAD";
      } else {
        f += to_string(previous_tags[previous_tags.size() - static_cast<std::size_t>(k)]);
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

SparseVector vectorize(std::span<const std::string> features,
                       const FeatureVocabulary& vocab) {
  std::vector<std::uint32_t> idx;
  idx.reserve(features.size());
  for (const std::string& f : features) {
    if (auto i = vocab.find(f)) idx.push_back(*i);
  }
  return SparseVector::from_unsorted(std::move(idx));
}

SparseVector build_window_vector(
    std::span<const std::vector<std::string>> sentence_features,
    std::size_t position, std::span<const ModalityTag> previous_tags,
    const FeatureConfig& config, FeatureVocabulary& vocab) {
  std::vector<std::string> strings =
      window_feature_strings(sentence_features, position, previous_tags, config);
  std::vector<std::uint32_t> idx;
  idx.reserve(strings.size());
  for (const std::string& f : strings) {
    if (auto i = vocab.intern(f)) idx.push_back(*i);
  }
  return SparseVector::from_unsorted(std::move(idx));
}

FeatureVocabulary fit_vocabulary(
    std::span<const std::vector<std::string>> feature_lists) {
  FeatureVocabulary vocab;
  for (const auto& list : feature_lists) {
    for (const std::string& f : list) vocab.intern(f);
  }
  if (vocab.size() == 0) throw Error("cannot fit a vocabulary on no features");
  vocab.freeze();
  return vocab;
}

}  // namespace modtag
