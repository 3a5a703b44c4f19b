// Small file helpers shared by the loaders and writers.

#ifndef MODTAG_IO_HPP_
#define MODTAG_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace modtag {

// Reads the whole file; throws Error naming the path on failure.
std::string read_file(const std::filesystem::path& path);

// Writes to "<path>.tmp.<pid>" then renames over path.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

}  // namespace modtag

#endif  // MODTAG_IO_HPP_
