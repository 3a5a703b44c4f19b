// Porter (1980) suffix-stripping stemmer, steps 1a through 5b.
//
// Follows the author's published reference implementation, including its
// two departures from the 1980 text (step 2 maps "bli" -> "ble" and
// "logi" -> "log") and its rule that words of length <= 2 are returned
// unchanged. Input is expected to be lowercase ASCII; other bytes are
// treated as consonants.

#ifndef MODTAG_PORTER_HPP_
#define MODTAG_PORTER_HPP_

#include <string>
#include <string_view>

namespace modtag {

std::string porter_stem(std::string_view word);

}  // namespace modtag

#endif  // MODTAG_PORTER_HPP_
