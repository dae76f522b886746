#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tap/core.hpp"

namespace tap {

/// Graph file: one JSON object per graph (one line in a dataset file).
/// Throws MalformedInput naming the offending field; structural errors from
/// build_graph propagate with their own codes.
AnalogyGraph parse_graph(std::string_view text);
/// Compact, sorted-key JSON without a trailing newline.
std::string emit_graph(const AnalogyGraph& g);

/// Frames of one sentence, as written by `tap frames` and read by `tap chart`.
struct FrameSet {
  Sentence sentence;
  RoleInventory inventory = RoleInventory::default_inventory();
  std::vector<TapFrame> frames;

  bool operator==(const FrameSet&) const = default;
};

FrameSet parse_frames(std::string_view text);
std::string emit_frames(const FrameSet& fs);

/// {"roles": [...], "value_role": "VALUE"}
RoleInventory parse_inventory(std::string_view text);
std::string emit_inventory(const RoleInventory& inventory);

}  // namespace tap
