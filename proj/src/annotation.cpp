#include "modtag/annotation.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include <json.hpp>

namespace modtag {

using nlohmann::json;

std::string_view to_string(AgreementLevel level) {
  return level == AgreementLevel::kAgr3 ? "Agr3" : "Agr2";
}

std::string_view to_string(RejectionReason reason) {
  switch (reason) {
    case RejectionReason::kNoMajority: return "NO_MAJORITY";
    case RejectionReason::kMajorityAbsent: return "MAJORITY_ABSENT";
    case RejectionReason::kSpanDisagreement: return "SPAN_DISAGREEMENT";
  }
  return "NO_MAJORITY";
}

void validate(const AnnotationSet& set) {
  if (set.judgments.size() < 2)
    throw Error("annotation set " + set.sentence_id + " needs at least two judgments");
  std::unordered_set<std::string_view> ids;
  for (const AnnotatorJudgment& j : set.judgments) {
    if (!ids.insert(j.annotator_id).second)
      throw Error("annotator " + j.annotator_id + " appears twice in " + set.sentence_id);
    if (j.present) {
      if (!j.modality || !j.target_span)
        throw Error("present judgment without modality/span in " + set.sentence_id);
      if (!is_modality(*j.modality))
        throw Error("judgment modality O in " + set.sentence_id);
      if (j.target_span->start >= j.target_span->end)
        throw Error("empty target span in " + set.sentence_id);
    } else if (j.modality || j.target_span) {
      throw Error("absent judgment carries modality/span in " + set.sentence_id);
    }
  }
}

AggregationOutcome aggregate(const AnnotationSet& set) {
  validate(set);
  // Ordered keys make the winner independent of judgment order.
  std::map<std::pair<ModalityTag, TokenSpan>, int> present_groups;
  std::map<ModalityTag, std::set<TokenSpan>> spans_by_modality;
  std::map<ModalityTag, int> count_by_modality;
  int absent = 0;
  for (const AnnotatorJudgment& j : set.judgments) {
    if (!j.present) {
      ++absent;
      continue;
    }
    ++present_groups[{*j.modality, *j.target_span}];
    spans_by_modality[*j.modality].insert(*j.target_span);
    ++count_by_modality[*j.modality];
  }

  const std::pair<ModalityTag, TokenSpan>* best = nullptr;
  int best_size = 0;
  int runner_up = absent;
  for (const auto& [key, size] : present_groups) {
    if (size > best_size) {
      runner_up = std::max(runner_up, best_size);
      best = &key;
      best_size = size;
    } else {
      runner_up = std::max(runner_up, size);
    }
  }

  if (best && best_size >= 2 && best_size > runner_up) {
    AggregatedExample ex;
    ex.sentence_id = set.sentence_id;
    ex.modality = best->first;
    ex.target_span = best->second;
    ex.agreement = best_size;
    ex.annotators = static_cast<int>(set.judgments.size());
    return ex;
  }
  if (absent >= 2 && absent > best_size)
    return Rejection{set.sentence_id, RejectionReason::kMajorityAbsent};
  for (const auto& [modality, count] : count_by_modality) {
    if (count >= 2 && spans_by_modality[modality].size() >= 2)
      return Rejection{set.sentence_id, RejectionReason::kSpanDisagreement};
  }
  return Rejection{set.sentence_id, RejectionReason::kNoMajority};
}

AggregationStats& AggregationStats::operator+=(const AggregationStats& o) {
  total += o.total;
  accepted += o.accepted;
  agr2 += o.agr2;
  agr3 += o.agr3;
  no_majority += o.no_majority;
  majority_absent += o.majority_absent;
  span_disagreement += o.span_disagreement;
  return *this;
}

AggregationResult aggregate_corpus(const std::vector<AnnotationSet>& sets) {
  AggregationResult result;
  std::unordered_set<std::string_view> ids;
  for (const AnnotationSet& set : sets) {
    if (!ids.insert(set.sentence_id).second)
      throw Error("duplicate sentence id " + set.sentence_id + " in annotations");
  }
  for (const AnnotationSet& set : sets) {
    ++result.stats.total;
    AggregationOutcome outcome = aggregate(set);
    if (auto* ex = std::get_if<AggregatedExample>(&outcome)) {
      ++result.stats.accepted;
      if (ex->level() == AgreementLevel::kAgr3) {
        ++result.stats.agr3;
      } else {
        ++result.stats.agr2;
      }
      result.examples.push_back(std::move(*ex));
    } else {
      auto& rej = std::get<Rejection>(outcome);
      switch (rej.reason) {
        case RejectionReason::kNoMajority: ++result.stats.no_majority; break;
        case RejectionReason::kMajorityAbsent: ++result.stats.majority_absent; break;
        case RejectionReason::kSpanDisagreement: ++result.stats.span_disagreement; break;
      }
      result.rejections.push_back(std::move(rej));
    }
  }
  return result;
}

Sentence to_training(const AggregatedExample& example, const Sentence& sentence) {
  if (example.sentence_id != sentence.id)
    throw Error("example " + example.sentence_id + " does not match sentence " +
                sentence.id);
  if (example.target_span.start >= example.target_span.end ||
      example.target_span.end > sentence.size())
    throw Error("target span [" + std::to_string(example.target_span.start) + "," +
                std::to_string(example.target_span.end) + ") out of bounds for " +
                sentence.id + " of length " + std::to_string(sentence.size()));
  Sentence out = sentence;
  for (std::size_t i = 0; i < out.size(); ++i) {
    bool inside = i >= example.target_span.start && i < example.target_span.end;
    out.tokens[i].gold = inside ? example.modality : ModalityTag::kO;
    out.tokens[i].predicted.reset();
  }
  out.agreement = example.level() == AgreementLevel::kAgr3 ? 3 : 2;
  return out;
}

double estimate_screen_precision(long marked_positive, long confirmed) {
  if (marked_positive <= 0) throw Error("marked_positive must be > 0");
  if (confirmed < 0 || confirmed > marked_positive)
    throw Error("confirmed must lie in [0, marked_positive]");
  // Integer half-up rounding of confirmed * 10000 / marked, in hundredths.
  long long scaled = (static_cast<long long>(confirmed) * 20000 + marked_positive) /
                     (2LL * marked_positive);
  return static_cast<double>(scaled) / 100.0;
}

namespace {

AnnotationSet set_from_json(const json& j) {
  AnnotationSet set;
  set.sentence_id = j.at("sentence_id").get<std::string>();
  for (const json& jj : j.at("judgments")) {
    AnnotatorJudgment judgment;
    judgment.annotator_id = jj.at("annotator_id").get<std::string>();
    judgment.present = jj.at("present").get<bool>();
    if (auto it = jj.find("modality"); it != jj.end() && !it->is_null()) {
      auto tag = parse_tag(it->get<std::string>());
      if (!tag) throw Error("unknown modality '" + it->get<std::string>() + "'");
      judgment.modality = tag;
    }
    if (auto it = jj.find("span"); it != jj.end() && !it->is_null()) {
      if (!it->is_array() || it->size() != 2) throw Error("span must be [start, end]");
      long s = (*it)[0].get<long>();
      long e = (*it)[1].get<long>();
      if (s < 0 || e < 0) throw Error("negative span bound");
      judgment.target_span = TokenSpan{static_cast<std::size_t>(s),
                                       static_cast<std::size_t>(e)};
    }
    set.judgments.push_back(std::move(judgment));
  }
  validate(set);
  return set;
}

}  // namespace

std::vector<AnnotationSet> read_annotations(std::istream& in,
                                            const std::string& source_name) {
  std::vector<AnnotationSet> sets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      sets.push_back(set_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError(source_name, line_no, e.what());
    } catch (const Error& e) {
      throw ParseError(source_name, line_no, e.what());
    }
  }
  return sets;
}

std::vector<AnnotationSet> load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open annotations " + path.string());
  return read_annotations(in, path.string());
}

void write_annotations(const std::vector<AnnotationSet>& sets, std::ostream& out) {
  for (const AnnotationSet& set : sets) {
    json j;
    j["sentence_id"] = set.sentence_id;
    j["judgments"] = json::array();
    for (const AnnotatorJudgment& jd : set.judgments) {
      json o;
      o["annotator_id"] = jd.annotator_id;
      o["present"] = jd.present;
      if (jd.modality) o["modality"] = std::string(to_string(*jd.modality));
      if (jd.target_span) o["span"] = {jd.target_span->start, jd.target_span->end};
      j["judgments"].push_back(std::move(o));
    }
    out << j.dump() << '\n';
  }
}

std::string stats_to_json(const AggregationStats& s) {
  json j;
  j["total"] = s.total;
  j["accepted"] = s.accepted;
  j["Agr2"] = s.agr2;
  j["Agr3"] = s.agr3;
  j["rejected"] = {{"NO_MAJORITY", s.no_majority},
                   {"MAJORITY_ABSENT", s.majority_absent},
                   {"SPAN_DISAGREEMENT", s.span_disagreement}};
  return j.dump(2);
}

}  // namespace modtag
