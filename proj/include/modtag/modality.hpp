// Modality label set shared by every stage of the pipeline.

#ifndef MODTAG_MODALITY_HPP_
#define MODTAG_MODALITY_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace modtag {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumerator order is the canonical order: modalities alphabetically, O last.
// Tie-breaking everywhere relies on this.
enum class ModalityTag : std::uint8_t {
  kAbility = 0,
  kEffort,
  kIntention,
  kSuccess,
  kWant,
  kO,
};

inline constexpr std::size_t kNumTags = 6;
inline constexpr std::size_t kNumModalities = 5;

inline constexpr std::array<ModalityTag, kNumTags> kAllTags = {
    ModalityTag::kAbility, ModalityTag::kEffort, ModalityTag::kIntention,
    ModalityTag::kSuccess, ModalityTag::kWant,   ModalityTag::kO};

inline constexpr std::array<ModalityTag, kNumModalities> kModalities = {
    ModalityTag::kAbility, ModalityTag::kEffort, ModalityTag::kIntention,
    ModalityTag::kSuccess, ModalityTag::kWant};

constexpr std::size_t tag_index(ModalityTag t) {
  return static_cast<std::size_t>(t);
}

constexpr bool is_modality(ModalityTag t) { return t != ModalityTag::kO; }

constexpr std::string_view to_string(ModalityTag t) {
  switch (t) {
    case ModalityTag::kAbility: return "Ability";
    case ModalityTag::kEffort: return "Effort";
    case ModalityTag::kIntention: return "Intention";
    case ModalityTag::kSuccess: return "Success";
    case ModalityTag::kWant: return "Want";
    case ModalityTag::kO: return "O";
  }
  return "O";
}

// Exact, case-sensitive match against the six tag names.
inline std::optional<ModalityTag> parse_tag(std::string_view s) {
  for (ModalityTag t : kAllTags) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

}  // namespace modtag

#endif  // MODTAG_MODALITY_HPP_
