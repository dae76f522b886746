#include "tap/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json_util.hpp"

namespace tap {
namespace detail {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput,
                "invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

const json& as_object(const json& v, const std::string& path) {
  if (!v.is_object()) malformed(path, "expected an object");
  return v;
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) malformed(path, "expected an array");
  return v;
}

const json& field(const json& obj, const std::string& path, const char* key) {
  as_object(obj, path);
  auto it = obj.find(key);
  if (it == obj.end()) malformed(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

const json* optional_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

std::size_t as_index(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::size_t>(v.get<long long>());
  malformed(path, "expected a non-negative integer");
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) malformed(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) malformed(path, "expected a finite number");
  return d;
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) malformed(path, "expected a string");
  return v.get<std::string>();
}

Sentence sentence_from_json(const json& j, const std::string& path) {
  Sentence s;
  s.id = as_string(field(j, path, "id"), path + ".id");
  const auto& tokens = as_array(field(j, path, "tokens"), path + ".tokens");
  for (std::size_t i = 0; i < tokens.size(); ++i)
    s.tokens.push_back(as_string(tokens[i], path + ".tokens[" + std::to_string(i) + "]"));
  if (const auto* meta = optional_field(j, "meta")) {
    as_object(*meta, path + ".meta");
    for (const auto& [key, values] : meta->items()) {
      const auto p = path + ".meta." + key;
      as_array(values, p);
      auto& out = s.meta[key];
      for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& x = values[i];
        // Dependency heads often arrive as integers; metadata is opaque text.
        if (x.is_number_integer()) out.push_back(std::to_string(x.get<long long>()));
        else out.push_back(as_string(x, p + "[" + std::to_string(i) + "]"));
      }
    }
  }
  try {
    s.check();
  } catch (const Error& e) {
    malformed(path, e.what());
  }
  return s;
}

json sentence_to_json(const Sentence& s) {
  json j = {{"id", s.id}, {"tokens", s.tokens}};
  if (!s.meta.empty()) j["meta"] = s.meta;
  return j;
}

RoleInventory inventory_from_json(const json& j, const std::string& path) {
  std::vector<std::string> roles;
  const auto& arr = as_array(field(j, path, "roles"), path + ".roles");
  for (std::size_t i = 0; i < arr.size(); ++i)
    roles.push_back(as_string(arr[i], path + ".roles[" + std::to_string(i) + "]"));
  std::string value = "VALUE";
  if (const auto* v = optional_field(j, "value_role")) value = as_string(*v, path + ".value_role");
  return RoleInventory(std::move(roles), value);
}

json inventory_to_json(const RoleInventory& inv) {
  return {{"roles", inv.roles()}, {"value_role", inv.name(inv.value_role())}};
}

Vertex vertex_from_json(const json& j, const std::string& path, const RoleInventory& inv,
                        std::size_t n_tokens) {
  Vertex v;
  v.start = as_index(field(j, path, "start"), path + ".start");
  v.end = as_index(field(j, path, "end"), path + ".end");
  const auto role = as_string(field(j, path, "role"), path + ".role");
  auto r = inv.find(role);
  if (!r) throw Error(ErrorCode::UnknownRole, "field '" + path + ".role': unknown role '" + role + "'");
  v.role = *r;
  if (!(v.start < v.end && v.end <= n_tokens))
    throw Error(ErrorCode::SpanOutOfBounds, "field '" + path + "': span [" +
                                                std::to_string(v.start) + ", " +
                                                std::to_string(v.end) + ") outside sentence of " +
                                                std::to_string(n_tokens) + " tokens");
  return v;
}

json vertex_to_json(const Vertex& v, const RoleInventory& inv) {
  return {{"start", v.start}, {"end", v.end}, {"role", inv.name(v.role)}};
}

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::strict); }

}  // namespace detail

using namespace detail;

RoleInventory parse_inventory(std::string_view text) {
  return inventory_from_json(parse_json(text), "inventory");
}

std::string emit_inventory(const RoleInventory& inventory) {
  return dump(inventory_to_json(inventory));
}

AnalogyGraph parse_graph(std::string_view text) {
  const json j = parse_json(text);
  as_object(j, "<root>");
  Sentence sentence = sentence_from_json(field(j, "", "sentence"), "sentence");
  RoleInventory inventory = RoleInventory::default_inventory();
  if (const auto* inv = optional_field(j, "inventory")) inventory = inventory_from_json(*inv, "inventory");

  std::vector<Vertex> vertices;
  std::map<std::string, std::size_t> ids;
  const auto& vs = as_array(field(j, "", "vertices"), "vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto path = "vertices[" + std::to_string(i) + "]";
    const auto& id = field(vs[i], path, "id");
    if (!id.is_string() && !id.is_number_integer()) malformed(path + ".id", "expected a string or integer");
    if (!ids.emplace(id.dump(), i).second) malformed(path + ".id", "duplicate vertex id " + id.dump());
    vertices.push_back(vertex_from_json(vs[i], path, inventory, sentence.size()));
  }

  std::vector<Edge> edges;
  const auto& es = as_array(field(j, "", "edges"), "edges");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto path = "edges[" + std::to_string(i) + "]";
    auto endpoint = [&](const char* key) {
      const auto& ref = field(es[i], path, key);
      auto it = ids.find(ref.dump());
      if (it == ids.end())
        throw Error(ErrorCode::EdgeEndpointMissing,
                    "field '" + path + "." + key + "': no vertex with id " + ref.dump());
      return it->second;
    };
    const auto label_name = as_string(field(es[i], path, "label"), path + ".label");
    const auto label = parse_edge_label(label_name);
    if (!label) malformed(path + ".label", "unknown edge label '" + label_name + "'");
    edges.push_back({endpoint("a"), endpoint("b"), *label});
  }
  return build_graph(std::move(sentence), vertices, edges, std::move(inventory));
}

std::string emit_graph(const AnalogyGraph& g) {
  json vertices = json::array();
  for (VertexId v = 0; v < g.vertices().size(); ++v) {
    auto jv = vertex_to_json(g.vertex(v), g.inventory());
    jv["id"] = v;
    vertices.push_back(std::move(jv));
  }
  json edges = json::array();
  for (const auto& e : g.edges())
    edges.push_back({{"a", e.a}, {"b", e.b}, {"label", std::string(to_string(e.label))}});
  return dump({{"sentence", sentence_to_json(g.sentence())},
               {"inventory", inventory_to_json(g.inventory())},
               {"vertices", std::move(vertices)},
               {"edges", std::move(edges)}});
}

namespace {

std::vector<Vertex> vertex_list(const json& arr, const std::string& path, const FrameSet& fs) {
  std::vector<Vertex> out;
  as_array(arr, path);
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(vertex_from_json(arr[i], path + "[" + std::to_string(i) + "]", fs.inventory,
                                   fs.sentence.size()));
  return out;
}

json vertex_list_json(const std::vector<Vertex>& vs, const RoleInventory& inv) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(vertex_to_json(v, inv));
  return out;
}

}  // namespace

FrameSet parse_frames(std::string_view text) {
  const json j = parse_json(text);
  as_object(j, "<root>");
  FrameSet fs;
  fs.sentence = sentence_from_json(field(j, "", "sentence"), "sentence");
  if (const auto* inv = optional_field(j, "inventory")) fs.inventory = inventory_from_json(*inv, "inventory");
  const auto& frames = as_array(field(j, "", "frames"), "frames");
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto fp = "frames[" + std::to_string(f) + "]";
    TapFrame frame;
    const auto& facts = as_array(field(frames[f], fp, "facts"), fp + ".facts");
    for (std::size_t i = 0; i < facts.size(); ++i) {
      const auto p = fp + ".facts[" + std::to_string(i) + "]";
      Fact fact;
      fact.value = vertex_from_json(field(facts[i], p, "value"), p + ".value", fs.inventory,
                                    fs.sentence.size());
      for (const auto& a : vertex_list(field(facts[i], p, "arguments"), p + ".arguments", fs))
        fact.arguments[a.role].push_back(a);
      frame.facts.push_back(std::move(fact));
    }
    const auto& shared = as_array(field(frames[f], fp, "shared"), fp + ".shared");
    for (std::size_t i = 0; i < shared.size(); ++i) {
      const auto p = fp + ".shared[" + std::to_string(i) + "]";
      SharedContent sc;
      sc.role = fs.inventory.at(as_string(field(shared[i], p, "role"), p + ".role"));
      sc.cluster = vertex_list(field(shared[i], p, "cluster"), p + ".cluster", fs);
      frame.shared.push_back(std::move(sc));
    }
    const auto& compared = as_array(field(frames[f], fp, "compared"), fp + ".compared");
    for (std::size_t i = 0; i < compared.size(); ++i) {
      const auto p = fp + ".compared[" + std::to_string(i) + "]";
      ComparedContent cc;
      cc.role = fs.inventory.at(as_string(field(compared[i], p, "role"), p + ".role"));
      const auto& slots = as_array(field(compared[i], p, "slots"), p + ".slots");
      for (std::size_t k = 0; k < slots.size(); ++k)
        cc.slots.push_back(vertex_list(slots[k], p + ".slots[" + std::to_string(k) + "]", fs));
      frame.compared.push_back(std::move(cc));
    }
    fs.frames.push_back(std::move(frame));
  }
  return fs;
}

std::string emit_frames(const FrameSet& fs) {
  const auto& inv = fs.inventory;
  json frames = json::array();
  for (const auto& frame : fs.frames) {
    json facts = json::array();
    for (const auto& fact : frame.facts) {
      std::vector<Vertex> args;
      for (const auto& [role, vs] : fact.arguments) args.insert(args.end(), vs.begin(), vs.end());
      std::sort(args.begin(), args.end());
      facts.push_back({{"value", vertex_to_json(fact.value, inv)},
                       {"arguments", vertex_list_json(args, inv)}});
    }
    json shared = json::array();
    for (const auto& sc : frame.shared)
      shared.push_back({{"role", inv.name(sc.role)}, {"cluster", vertex_list_json(sc.cluster, inv)}});
    json compared = json::array();
    for (const auto& cc : frame.compared) {
      json slots = json::array();
      for (const auto& slot : cc.slots) slots.push_back(vertex_list_json(slot, inv));
      compared.push_back({{"role", inv.name(cc.role)}, {"slots", std::move(slots)}});
    }
    frames.push_back({{"facts", std::move(facts)},
                      {"shared", std::move(shared)},
                      {"compared", std::move(compared)}});
  }
  return dump({{"sentence", sentence_to_json(fs.sentence)},
               {"inventory", inventory_to_json(inv)},
               {"frames", std::move(frames)}});
}

}  // namespace tap
