#include "modtag/corpus.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "modtag/io.hpp"

namespace modtag {

ParseError::ParseError(std::string source, std::size_t line,
                       const std::string& what)
    : Error(source + ":" + std::to_string(line) + ": " + what),
      source_(std::move(source)),
      line_(line) {}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const Sentence& s : sentences) n += s.size();
  return n;
}

const Sentence* Corpus::find(std::string_view id) const {
  for (const Sentence& s : sentences) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

namespace {

bool has_space(std::string_view s) {
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return true;
  }
  return false;
}

std::optional<std::string_view> strip_directive(std::string_view line,
                                                std::string_view key) {
  // Accepts "#key:" and "# key:".
  if (line.empty() || line[0] != '#') return std::nullopt;
  line.remove_prefix(1);
  if (!line.empty() && line[0] == ' ') line.remove_prefix(1);
  if (line.substr(0, key.size()) != key) return std::nullopt;
  return line.substr(key.size());
}

}  // namespace

std::string default_sentence_id(std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%04zu", ordinal);
  return buf;
}

void validate(const Corpus& corpus) {
  std::unordered_set<std::string_view> ids;
  for (const Sentence& s : corpus.sentences) {
    if (s.tokens.empty()) throw Error("sentence " + s.id + " has no tokens");
    if (s.id.empty() || has_space(s.id))
      throw Error("invalid sentence id '" + s.id + "'");
    if (!ids.insert(s.id).second)
      throw Error("duplicate sentence id " + s.id);
    for (const Token& t : s.tokens) {
      if (t.surface.empty() || has_space(t.surface))
        throw Error("invalid surface '" + t.surface + "' in " + s.id);
      if (t.pos.empty() || has_space(t.pos))
        throw Error("invalid POS '" + t.pos + "' in " + s.id);
    }
  }
}

Corpus parse_column_stream(std::istream& in, const std::string& source_name) {
  Corpus corpus;
  Sentence current;
  std::optional<std::string> pending_id;
  std::optional<int> pending_agr;
  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 0;
  std::size_t block_start = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) return;
    current.id = pending_id ? *pending_id
                            : default_sentence_id(corpus.sentences.size() + 1);
    current.agreement = pending_agr;
    if (!seen_ids.insert(current.id).second)
      throw ParseError(source_name, block_start,
                       "duplicate sentence id " + current.id);
    corpus.sentences.push_back(std::move(current));
    current = Sentence{};
    pending_id.reset();
    pending_agr.reset();
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#' && line.find('\t') == std::string_view::npos) {
      if (!current.tokens.empty())
        throw ParseError(source_name, line_no,
                         "directive inside a sentence block");
      if (auto id = strip_directive(line, "id:")) {
        std::string_view v = trim(*id);
        if (v.empty() || has_space(v))
          throw ParseError(source_name, line_no, "invalid sentence id");
        pending_id = std::string(v);
      } else if (auto agr = strip_directive(line, "agr:")) {
        std::string_view v = trim(*agr);
        int n = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
        if (ec != std::errc() || p != v.data() + v.size() || n < 1)
          throw ParseError(source_name, line_no, "invalid agreement value");
        pending_agr = n;
      }
      continue;
    }

    std::vector<std::string_view> cols = split(line, '\t');
    if (cols.size() < 2 || cols.size() > 4)
      throw ParseError(source_name, line_no,
                       "expected 2-4 tab-separated columns, got " +
                           std::to_string(cols.size()));
    Token tok;
    if (cols[0].empty()) throw ParseError(source_name, line_no, "empty surface");
    if (has_space(cols[0]))
      throw ParseError(source_name, line_no, "whitespace in surface");
    if (cols[1].empty() || has_space(cols[1]))
      throw ParseError(source_name, line_no, "empty or invalid POS");
    tok.surface = std::string(cols[0]);
    tok.pos = std::string(cols[1]);
    if (cols.size() >= 3 && !(cols.size() == 4 && cols[2] == "_")) {
      tok.gold = parse_tag(cols[2]);
      if (!tok.gold)
        throw ParseError(source_name, line_no,
                         "unknown tag '" + std::string(cols[2]) + "'");
    }
    if (cols.size() == 4) {
      tok.predicted = parse_tag(cols[3]);
      if (!tok.predicted)
        throw ParseError(source_name, line_no,
                         "unknown tag '" + std::string(cols[3]) + "'");
    }
    if (current.tokens.empty()) block_start = line_no;
    current.tokens.push_back(std::move(tok));
  }
  flush();
  if (corpus.sentences.empty()) throw ParseError(source_name, 0, "no sentences");
  return corpus;
}

Corpus parse_column_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return parse_column_stream(in, path.string());
}

void write_column_stream(const Corpus& corpus, std::ostream& out) {
  validate(corpus);
  bool first = true;
  for (const Sentence& s : corpus.sentences) {
    if (!first) out << '\n';
    first = false;
    out << "# id:" << s.id << '\n';
    if (s.agreement) out << "#agr:" << *s.agreement << '\n';
    for (const Token& t : s.tokens) {
      out << t.surface << '\t' << t.pos;
      if (t.predicted) {
        out << '\t' << (t.gold ? to_string(*t.gold) : std::string_view("_"))
            << '\t' << to_string(*t.predicted);
      } else if (t.gold) {
        out << '\t' << to_string(*t.gold);
      }
      out << '\n';
    }
  }
}

void write_column_file(const Corpus& corpus, const std::filesystem::path& path) {
  if (corpus.empty()) throw Error("refusing to write empty corpus to " + path.string());
  std::ostringstream ss;
  write_column_stream(corpus, ss);
  write_file_atomic(path, ss.str());
}

std::vector<std::string> tokenize_raw(std::string_view text) {
  std::vector<std::string> out;
  auto is_punct = [](char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
  };
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string_view word = text.substr(i, j - i);
    i = j;
    if (word.empty()) continue;

    std::size_t lead = 0;
    while (lead < word.size() && is_punct(word[lead])) ++lead;
    std::size_t trail = word.size();
    while (trail > lead && is_punct(word[trail - 1])) --trail;

    for (std::size_t k = 0; k < lead; ++k) out.emplace_back(1, word[k]);
    if (trail > lead) out.emplace_back(word.substr(lead, trail - lead));
    for (std::size_t k = std::max(trail, lead); k < word.size(); ++k)
      out.emplace_back(1, word[k]);
  }
  return out;
}

}  // namespace modtag
