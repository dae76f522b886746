#include "tap/chart.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <regex>
#include <set>

#include "json_util.hpp"

namespace tap {

namespace {

constexpr std::string_view kCurrency[] = {"$", "\xE2\x82\xAC", "\xC2\xA3", "\xC2\xA5"};  // $ € £ ¥

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

QuantityValue parse_value(std::string_view text) {
  static const std::regex number(R"(([+-]?)(\d{1,3}(?:,\d{3})+|\d+)?(\.\d+)?)");
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), number); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (!m[2].matched && !m[3].matched) continue;
    std::string digits = m[2].str() + m[3].str();
    digits.erase(std::remove(digits.begin(), digits.end(), ','), digits.end());
    QuantityValue q;
    q.raw = s;
    q.magnitude = std::stod(digits);
    if (m[1].str() == "-") q.magnitude = -q.magnitude;

    // Currency prefix, either side of a sign ("-$3", "$-3", "$ 3").
    std::string_view before(s.data(), static_cast<std::size_t>(m.position(0)));
    while (!before.empty() && before.back() == ' ') before.remove_suffix(1);
    for (auto sym : kCurrency) {
      if (!ends_with(before, sym)) continue;
      q.unit = sym;
      auto rest = before.substr(0, before.size() - sym.size());
      while (!rest.empty() && rest.back() == ' ') rest.remove_suffix(1);
      if (m[1].str().empty() && !rest.empty() && rest.back() == '-') q.magnitude = -q.magnitude;
      return q;
    }

    std::size_t pos = static_cast<std::size_t>(m.position(0) + m.length(0));
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos < s.size() && s[pos] == '%') {
      q.unit = "%";
      return q;
    }
    std::size_t end = pos;
    while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
    q.unit = s.substr(pos, end - pos);
    if (lower(q.unit) == "percent") q.unit = "%";
    return q;
  }
  throw Error(ErrorCode::NoNumberFound, "no number in '" + s + "'");
}

namespace {

std::size_t distinct_fillers(const ComparedContent& c) {
  std::set<std::vector<Vertex>> seen;
  for (const auto& slot : c.slots)
    if (!slot.empty()) seen.insert(slot);
  return seen.size();
}

}  // namespace

ChartSpec frame_to_chart(const TapFrame& frame, const Sentence& sentence,
                         const RoleInventory& inventory, std::optional<RoleId> x_role) {
  const ComparedContent* axis = nullptr;
  for (const auto& c : frame.compared) {
    if (inventory.is_value(c.role) || (x_role && c.role != *x_role)) continue;
    if (!axis || distinct_fillers(c) > distinct_fillers(*axis) ||
        (distinct_fillers(c) == distinct_fillers(*axis) && c.role < axis->role))
      axis = &c;
  }
  if (!axis)
    throw Error(ErrorCode::NoComparedRole,
                x_role ? "frame has no compared " + inventory.name(*x_role)
                       : std::string("frame has no compared role besides the value role"));

  ChartSpec chart;
  chart.x_role = inventory.name(axis->role);
  for (const auto& slot : axis->slots)
    chart.categories.emplace_back(slot.empty() ? std::string(kMissingCategory)
                                               : sentence.text(slot.front().start, slot.front().end));

  ChartSeries series;
  for (const auto& fact : frame.facts) {
    const auto q = parse_value(sentence.text(fact.value.start, fact.value.end));
    if (!q.unit.empty()) {
      if (!series.unit.empty() && series.unit != q.unit)
        throw Error(ErrorCode::UnitMismatchWithinSeries,
                    "units '" + series.unit + "' and '" + q.unit + "' in one series");
      series.unit = q.unit;
    }
    series.values.emplace_back(q.magnitude);
  }
  chart.series.push_back(std::move(series));

  std::vector<const SharedContent*> shared;
  for (const auto& s : frame.shared) shared.push_back(&s);
  std::stable_sort(shared.begin(), shared.end(),
                   [](const SharedContent* a, const SharedContent* b) { return a->role < b->role; });
  for (const auto* s : shared) {
    if (s->cluster.empty()) continue;
    if (!chart.title.empty()) chart.title += kTitleSeparator;
    chart.title += sentence.text(s->cluster.front().start, s->cluster.front().end);
  }
  return chart;
}

std::vector<ChartSpec> frames_to_charts(std::span<const TapFrame> frames, const Sentence& sentence,
                                        const RoleInventory& inventory) {
  std::vector<ChartSpec> charts;
  for (const auto& f : frames) {
    auto c = frame_to_chart(f, sentence, inventory);
    auto same_axis = std::find_if(charts.begin(), charts.end(), [&](const ChartSpec& other) {
      return other.x_role == c.x_role && other.categories == c.categories;
    });
    if (same_axis == charts.end()) {
      charts.push_back(std::move(c));
      continue;
    }
    for (auto& s : c.series) same_axis->series.push_back(std::move(s));
    if (!c.title.empty() && same_axis->title.find(c.title) == std::string::npos)
      same_axis->title += same_axis->title.empty() ? c.title : std::string(kTitleSeparator) + c.title;
  }
  return charts;
}

std::string emit_chart_json(const ChartSpec& c) {
  detail::json series = detail::json::array();
  for (const auto& s : c.series) {
    detail::json values = detail::json::array();
    for (const auto& v : s.values) values.push_back(v ? detail::json(*v) : detail::json(nullptr));
    series.push_back({{"unit", s.unit}, {"values", values}});
  }
  return detail::dump({{"title", c.title},
                       {"x_role", c.x_role},
                       {"categories", c.categories},
                       {"series", series}});
}

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948"};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::string px(double x) { return fmt("%.3f", x); }

// "$12", "-$3", "17%", "529 marks".
std::string value_label(double v, const std::string& unit) {
  if (std::find(std::begin(kCurrency), std::end(kCurrency), unit) != std::end(kCurrency))
    return (v < 0 ? "-" : "") + unit + fmt("%g", std::abs(v));
  if (unit.empty() || unit == "%") return fmt("%g", v) + unit;
  return fmt("%g", v) + " " + unit;
}

}  // namespace

std::string emit_svg(const ChartSpec& c) {
  double lo = 0.0, hi = 0.0;
  for (const auto& s : c.series)
    for (const auto& v : s.values)
      if (v) {
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
  hi *= 1.1;
  if (hi == lo) hi = lo + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double scale = plot_h / (hi - lo);
  const double baseline = kTop + hi * scale;
  const auto n_cat = std::max<std::size_t>(c.categories.size(), 1);
  const double group_w = plot_w / static_cast<double>(n_cat);
  const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(c.series.size(), 1));

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 400\" width=\"640\" height=\"400\">\n";
  if (!c.title.empty())
    out += "<text class=\"title\" x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
           xml_escape(c.title) + "</text>\n";
  out += "<line class=\"axis\" x1=\"" + px(kLeft) + "\" y1=\"" + px(kTop) + "\" x2=\"" + px(kLeft) +
         "\" y2=\"" + px(kTop + plot_h) + "\" stroke=\"#000\"/>\n";
  out += "<line class=\"axis\" x1=\"" + px(kLeft) + "\" y1=\"" + px(baseline) + "\" x2=\"" +
         px(kLeft + plot_w) + "\" y2=\"" + px(baseline) + "\" stroke=\"#000\"/>\n";
  for (double tick : {lo, hi}) {
    out += "<text class=\"tick\" x=\"" + px(kLeft - 6) + "\" y=\"" + px(kTop + (hi - tick) * scale + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + fmt("%g", tick) + "</text>\n";
  }

  for (std::size_t k = 0; k < c.categories.size(); ++k) {
    const double group_x = kLeft + group_w * static_cast<double>(k);
    for (std::size_t s = 0; s < c.series.size(); ++s) {
      const auto& v = c.series[s].values.at(k);
      if (!v) continue;
      const double x = group_x + group_w * 0.1 + bar_w * static_cast<double>(s);
      const double h = std::abs(*v) * scale;
      const double y = *v >= 0 ? baseline - h : baseline;
      out += "<rect class=\"bar\" data-series=\"" + std::to_string(s) + "\" x=\"" + px(x) + "\" y=\"" +
             px(y) + "\" width=\"" + px(bar_w) + "\" height=\"" + px(h) + "\" fill=\"" +
             kPalette[s % std::size(kPalette)] + "\"/>\n";
      out += "<text class=\"value\" x=\"" + px(x + bar_w / 2) + "\" y=\"" +
             px(*v >= 0 ? y - 4 : y + h + 12) + "\" text-anchor=\"middle\" font-size=\"11\">" +
             xml_escape(value_label(*v, c.series[s].unit)) + "</text>\n";
    }
    out += "<text class=\"category\" x=\"" + px(group_x + group_w / 2) + "\" y=\"" +
           px(kHeight - kBottom + 20) + "\" text-anchor=\"middle\" font-size=\"12\">" +
           xml_escape(c.categories[k]) + "</text>\n";
  }

  if (c.series.size() > 1) {
    for (std::size_t s = 0; s < c.series.size(); ++s) {
      const double y = kHeight - 18;
      const double x = kLeft + 120 * static_cast<double>(s);
      out += "<rect class=\"legend\" x=\"" + px(x) + "\" y=\"" + px(y - 10) +
             "\" width=\"10\" height=\"10\" fill=\"" + kPalette[s % std::size(kPalette)] + "\"/>\n";
      out += "<text class=\"legend\" x=\"" + px(x + 14) + "\" y=\"" + px(y) + "\" font-size=\"11\">" +
             xml_escape("series " + std::to_string(s + 1) +
                        (c.series[s].unit.empty() ? "" : " (" + c.series[s].unit + ")")) +
             "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace tap
