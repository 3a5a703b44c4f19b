// Tokenized, POS-tagged, optionally modality-labeled text and its column
// file format.
//
// Column file layout (UTF-8):
//
//   # id:<sentence id>        optional, applies to the next sentence
//   #agr:<n>                  optional agreement count for the next sentence
//   surface<TAB>POS[<TAB>GOLD[<TAB>PREDICTED]]
//   <blank line>              sentence boundary
//
// In the four-column form an absent gold tag is written as "_". Any other
// line starting with '#' and containing no tab is a comment.

#ifndef MODTAG_CORPUS_HPP_
#define MODTAG_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modtag/modality.hpp"

namespace modtag {

class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what);

  const std::string& source() const { return source_; }
  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

struct Token {
  std::string surface;
  std::string pos;
  std::optional<ModalityTag> gold;
  std::optional<ModalityTag> predicted;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::string id;
  std::vector<Token> tokens;
  // Agreement level code (2 or 3) from aggregation, when known.
  std::optional<int> agreement;

  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Corpus {
  std::vector<Sentence> sentences;

  bool empty() const { return sentences.empty(); }
  std::size_t size() const { return sentences.size(); }
  std::size_t token_count() const;
  // Returns nullptr when no sentence has this id.
  const Sentence* find(std::string_view id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Throws Error when a token or sentence violates the data-model invariants
// (empty surface/POS, whitespace in surface, empty sentence, duplicate id).
void validate(const Corpus& corpus);

Corpus parse_column_stream(std::istream& in, const std::string& source_name);
Corpus parse_column_file(const std::filesystem::path& path);

void write_column_stream(const Corpus& corpus, std::ostream& out);
// Writes via a temporary file and rename. Refuses an empty corpus.
void write_column_file(const Corpus& corpus, const std::filesystem::path& path);

// Whitespace split with leading/trailing ASCII punctuation detached, one
// character per punctuation token.
std::vector<std::string> tokenize_raw(std::string_view text);

// Sequential sentence id: 1 -> "s0001".
std::string default_sentence_id(std::size_t ordinal);

}  // namespace modtag

#endif  // MODTAG_CORPUS_HPP_
