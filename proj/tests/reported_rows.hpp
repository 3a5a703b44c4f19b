// Published precision/recall/F rows, transcribed as printed. Each row's F
// should be the harmonic mean of its P and R to within a rounding step.

#ifndef MODTAG_REPORTED_ROWS_HPP_
#define MODTAG_REPORTED_ROWS_HPP_

#include <array>
#include <optional>
#include <ostream>
#include <string_view>

namespace modtag::testing {

struct ReportedRow {
  std::string_view group;
  std::string_view label;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f;
};

inline std::ostream& operator<<(std::ostream& os, const ReportedRow& r) {
  auto v = [&](const std::optional<double>& x) -> std::ostream& {
    return x ? (os << *x) : (os << "NA");
  };
  os << r.group << " / " << r.label << ": P=";
  v(r.precision) << " R=";
  v(r.recall) << " F=";
  return v(r.f);
}

inline constexpr double kReportedTolerance = 0.1;

inline constexpr std::string_view kCvAll = "cross-validation, all data";
inline constexpr std::string_view kGoldBest = "gold corpus";
inline constexpr std::string_view kCvAgr23 = "setups, tested on Agr2+Agr3";
inline constexpr std::string_view kCvAgr3 = "setups, tested on Agr3 only";
inline constexpr std::string_view kGoldSetups = "setups, gold corpus";

inline constexpr std::optional<double> kNA = std::nullopt;

inline const std::array<ReportedRow, 24> kReportedRows = {{
    {kCvAll, "Ability", 82.4, 55.5, 65.5},
    {kCvAll, "Effort", 95.1, 82.8, 88.5},
    {kCvAll, "Intention", 84.3, 61.3, 70.7},
    {kCvAll, "Success", 93.2, 76.6, 83.8},
    {kCvAll, "Want", 88.4, 64.3, 74.3},
    {kCvAll, "Overall", 90.1, 70.6, 79.1},
    {kGoldBest, "Ability", 78.6, 22.0, 34.4},
    {kGoldBest, "Effort", 85.7, 60.0, 70.6},
    {kGoldBest, "Intention", 66.7, 16.7, 26.7},
    {kGoldBest, "Success", kNA, 0.0, kNA},
    {kGoldBest, "Want", 92.3, 50.0, 64.9},
    {kGoldBest, "Overall", 72.1, 29.5, 41.9},
    {kCvAgr23, "Tr23", 90.1, 70.6, 79.1},
    {kCvAgr23, "Tr2", 91.0, 66.1, 76.5},
    {kCvAgr23, "Tr3", 88.1, 52.3, 65.6},
    {kCvAgr23, "Tr23_W", 89.9, 70.5, 79.0},
    {kCvAgr3, "Tr23", 95.9, 86.8, 91.1},
    {kCvAgr3, "Tr2", 95.6, 81.8, 88.2},
    {kCvAgr3, "Tr3", 96.8, 71.7, 82.3},
    {kCvAgr3, "Tr23_W", 95.8, 86.5, 90.9},
    {kGoldSetups, "Tr23", 72.1, 29.5, 41.9},
    {kGoldSetups, "Tr2", 67.4, 27.6, 39.2},
    {kGoldSetups, "Tr3", 74.1, 19.1, 30.3},
    {kGoldSetups, "Tr23_W", 73.3, 31.4, 44.0},
}};

}  // namespace modtag::testing

#endif  // MODTAG_REPORTED_ROWS_HPP_
