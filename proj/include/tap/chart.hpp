#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tap/core.hpp"

namespace tap {

struct QuantityValue {
  double magnitude = 0.0;
  std::string unit;  // "%", "$", "marks", ... or empty
  std::string raw;

  bool operator==(const QuantityValue&) const = default;
};

/// First numeric literal of `text` (digit-grouping commas, decimals, optional
/// sign) and its unit: a currency symbol prefix wins over a "%" suffix, which
/// wins over the following alphabetic word. "percent" reads as "%".
/// Throws NoNumberFound.
QuantityValue parse_value(std::string_view text);

struct ChartSeries {
  std::string unit;
  std::vector<std::optional<double>> values;  // one per category

  bool operator==(const ChartSeries&) const = default;
};

struct ChartSpec {
  std::string title;
  std::string x_role;
  std::vector<std::string> categories;
  std::vector<ChartSeries> series;

  bool operator==(const ChartSpec&) const = default;
};

/// Title separator between shared-content texts.
inline constexpr std::string_view kTitleSeparator = " — ";
/// Category text for a fact without a filler of the x role.
inline constexpr std::string_view kMissingCategory = "?";

/// Plots the frame's VALUEs against one compared role. Without `x_role`, the
/// compared non-VALUE role with the most distinct fillers is used (ties by
/// inventory order). Units within the frame must agree; an empty unit agrees
/// with anything. Throws NoComparedRole, NoNumberFound, UnitMismatchWithinSeries.
ChartSpec frame_to_chart(const TapFrame& frame, const Sentence& sentence,
                         const RoleInventory& inventory, std::optional<RoleId> x_role = std::nullopt);

/// One chart per frame, except that frames with identical x role and
/// categories become series of a single chart.
std::vector<ChartSpec> frames_to_charts(std::span<const TapFrame> frames, const Sentence& sentence,
                                        const RoleInventory& inventory);

std::string emit_chart_json(const ChartSpec& c);
/// Grouped bar chart, viewBox 640x400.
std::string emit_svg(const ChartSpec& c);

}  // namespace tap
