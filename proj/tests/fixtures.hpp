#pragma once

// Hand-encoded graphs shared by the unit and acceptance tests.

#include <utility>
#include <vector>

#include "tap/core.hpp"

namespace tap::fixtures {

// "According to the U.S. Census, whereas only 10% of White Americans live at
// or below the poverty line today, 28% of African Americans do."
inline AnalogyGraph e1_graph() {
  const auto inv = RoleInventory::default_inventory();
  Sentence s{"E1",
             {"According", "to", "the", "U.S.", "Census", ",", "whereas", "only", "10%", "of",
              "White", "Americans", "live", "at", "or", "below", "the", "poverty", "line", "today",
              ",", "28%", "of", "African", "Americans", "do", "."},
             {}};
  const std::vector<Vertex> vertices = {
      {3, 5, inv.at("SOURCE")},     // 0 U.S. Census
      {8, 9, inv.at("VALUE")},      // 1 10%
      {10, 12, inv.at("WHOLE")},    // 2 White Americans
      {12, 19, inv.at("QUANTITY")}, // 3 live at or below the poverty line
      {19, 20, inv.at("TIME")},     // 4 today
      {21, 22, inv.at("VALUE")},    // 5 28%
      {23, 25, inv.at("WHOLE")},    // 6 African Americans
  };
  const std::vector<Edge> edges = {
      {1, 0, EdgeLabel::Fact},    {1, 2, EdgeLabel::Fact},    {1, 3, EdgeLabel::Fact},
      {1, 4, EdgeLabel::Fact},    {5, 0, EdgeLabel::Fact},    {5, 3, EdgeLabel::Fact},
      {5, 4, EdgeLabel::Fact},    {5, 6, EdgeLabel::Fact},    {1, 5, EdgeLabel::Analogy},
      {2, 6, EdgeLabel::Analogy},
  };
  return build_graph(s, vertices, edges, inv);
}

// "Vicker's PLC ... raised its stake in the company Friday to 15.02% from
// about 14.6% Thursday and from 13.6% the previous week."
inline AnalogyGraph stake_graph() {
  const auto inv = RoleInventory::default_inventory();
  Sentence s{"stake",
             {"Vicker's", "PLC", "raised", "its", "stake", "in", "the", "company", "Friday", "to", "15.02%",
              "from", "about", "14.6%", "Thursday", "and", "from", "13.6%", "the", "previous", "week", "."},
             {}};
  const auto agent = inv.at("AGENT"), theme = inv.at("THEME"), time = inv.at("TIME"), value = inv.at("VALUE");
  const std::vector<Vertex> vertices = {
      {0, 2, agent},   // 0 Vicker's PLC
      {3, 8, theme},   // 1 its stake in the company
      {8, 9, time},    // 2 Friday
      {10, 11, value}, // 3 15.02%
      {13, 14, value}, // 4 14.6%
      {14, 15, time},  // 5 Thursday
      {17, 18, value}, // 6 13.6%
      {18, 21, time},  // 7 the previous week
  };
  std::vector<Edge> edges;
  for (VertexId v : {3, 4, 6}) {
    edges.push_back({v, 0, EdgeLabel::Fact});
    edges.push_back({v, 1, EdgeLabel::Fact});
  }
  edges.push_back({3, 2, EdgeLabel::Fact});
  edges.push_back({4, 5, EdgeLabel::Fact});
  edges.push_back({6, 7, EdgeLabel::Fact});
  for (auto [a, b] : {std::pair<VertexId, VertexId>{3, 4}, {3, 6}, {4, 6}, {2, 5}, {2, 7}, {5, 7}})
    edges.push_back({a, b, EdgeLabel::Analogy});
  return build_graph(s, vertices, edges, inv);
}

// "In the auto sector, Bayerische Motoren Werke plunged 14.5 marks to 529
// marks, Daimler-Benz dropped 10.5 to 700, and Volkswagen slumped 9 to 435.5."
// Changes and absolute prices form two frames over the same THEME spans.
inline AnalogyGraph marks_graph() {
  const auto inv = RoleInventory::default_inventory();
  Sentence s{"marks",
             {"In", "the", "auto", "sector", ",", "Bayerische", "Motoren", "Werke", "plunged", "14.5",
              "marks", "to", "529", "marks", ",", "Daimler-Benz", "dropped", "10.5", "to", "700", ",",
              "and", "Volkswagen", "slumped", "9", "to", "435.5", "."},
             {}};
  const auto whole = inv.at("WHOLE"), theme = inv.at("THEME"), value = inv.at("VALUE");
  const std::vector<Vertex> vertices = {
      {1, 4, whole},   // 0 the auto sector
      {5, 8, theme},   // 1 Bayerische Motoren Werke
      {9, 11, value},  // 2 14.5 marks
      {12, 14, value}, // 3 529 marks
      {15, 16, theme}, // 4 Daimler-Benz
      {17, 18, value}, // 5 10.5
      {19, 20, value}, // 6 700
      {22, 23, theme}, // 7 Volkswagen
      {24, 25, value}, // 8 9
      {26, 27, value}, // 9 435.5
  };
  std::vector<Edge> edges;
  const std::pair<VertexId, VertexId> attachments[] = {{2, 1}, {3, 1}, {5, 4}, {6, 4}, {8, 7}, {9, 7}};
  for (auto [v, w] : attachments) {
    edges.push_back({v, 0, EdgeLabel::Fact});
    edges.push_back({v, w, EdgeLabel::Fact});
  }
  for (auto [a, b] : {std::pair<VertexId, VertexId>{2, 5}, {2, 8}, {5, 8}, {3, 6}, {3, 9}, {6, 9}, {1, 4},
                      {1, 7}, {4, 7}})
    edges.push_back({a, b, EdgeLabel::Analogy});
  return build_graph(s, vertices, edges, inv);
}

}  // namespace tap::fixtures
