#include "kdbench/chain_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kdbench {
namespace {

using json = nlohmann::json;
using Kind = ChainParseError::Kind;

[[noreturn]] void semantic(const std::string& field, const std::string& what) {
  throw ChainParseError(Kind::semantic, field, field + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) semantic(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) semantic(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

double read_number(const json& v, const std::string& path) {
  if (!v.is_number()) semantic(path, "expected a number");
  return v.get<double>();
}

Eigen::Vector3d read_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) semantic(path, "expected an array of 3 numbers");
  Eigen::Vector3d out;
  for (int i = 0; i < 3; ++i) out[i] = read_number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

std::string read_string(const json& v, const std::string& path) {
  if (!v.is_string()) semantic(path, "expected a string");
  return v.get<std::string>();
}

Posed read_transform(const json& v, const std::string& path) {
  Posed pose;
  pose.translation = read_vec3(require(v, "translation", path), join(path, "translation"));
  if (auto it = v.find("rotation_rpy"); it != v.end()) {
    const Eigen::Vector3d rpy = read_vec3(*it, join(path, "rotation_rpy"));
    pose.rotation = rotation_from_rpy(rpy[0], rpy[1], rpy[2]);
  }
  return pose;
}

json write_vec3(const Eigen::Vector3d& v) { return json::array({v[0], v[1], v[2]}); }

json write_transform(const Posed& pose) {
  return {{"translation", write_vec3(pose.translation)},
          {"rotation_rpy", write_vec3(rpy_from_rotation(pose.rotation))}};
}

void throw_if_invalid(const KinematicChain& chain) {
  auto diags = validate_chain(chain);
  if (diags.empty()) return;
  std::string message;
  for (const auto& d : diags) {
    if (!message.empty()) message += "; ";
    message += d.field + ": " + d.message;
  }
  std::string field = diags.front().field;
  throw ChainParseError(Kind::semantic, std::move(field), message, std::move(diags));
}

}  // namespace

KinematicChain parse_chain_unchecked(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ChainParseError(Kind::syntax, "", std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) semantic("<document>", "expected a JSON object");

  const json& version = require(doc, "format_version", "");
  if (!version.is_number_integer() || version.get<int>() != kChainFormatVersion) {
    semantic("format_version", "unsupported format version (expected 1)");
  }

  KinematicChain chain;
  chain.name = read_string(require(doc, "name", ""), "name");

  const json& joints = require(doc, "joints", "");
  if (!joints.is_array()) semantic("joints", "expected an array");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const std::string path = "joints[" + std::to_string(i) + "]";
    const json& j = joints[i];
    JointSpec spec;
    spec.name = read_string(require(j, "name", path), join(path, "name"));
    spec.axis = read_vec3(require(j, "axis", path), join(path, "axis"));
    spec.origin = read_transform(require(j, "origin", path), join(path, "origin"));
    const json& limits = require(j, "limits", path);
    if (!limits.is_array() || limits.size() != 2) {
      semantic(join(path, "limits"), "expected [lower, upper]");
    }
    spec.lower = read_number(limits[0], join(path, "limits") + "[0]");
    spec.upper = read_number(limits[1], join(path, "limits") + "[1]");
    chain.joints.push_back(std::move(spec));
  }

  if (auto it = doc.find("tip_offset"); it != doc.end()) {
    chain.tip_offset = read_transform(*it, "tip_offset");
  }

  if (auto it = doc.find("capsules"); it != doc.end()) {
    if (!it->is_array()) semantic("capsules", "expected an array");
    for (std::size_t c = 0; c < it->size(); ++c) {
      const std::string path = "capsules[" + std::to_string(c) + "]";
      const json& cj = (*it)[c];
      CapsuleSpec cap;
      cap.attached_joint = read_string(require(cj, "joint", path), join(path, "joint"));
      cap.a = read_vec3(require(cj, "a", path), join(path, "a"));
      cap.b = read_vec3(require(cj, "b", path), join(path, "b"));
      cap.radius = read_number(require(cj, "radius", path), join(path, "radius"));
      chain.capsules.push_back(std::move(cap));
    }
  }

  if (auto it = doc.find("collision_exemptions"); it != doc.end()) {
    if (!it->is_array()) semantic("collision_exemptions", "expected an array");
    for (std::size_t e = 0; e < it->size(); ++e) {
      const std::string path = "collision_exemptions[" + std::to_string(e) + "]";
      const json& pair = (*it)[e];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() ||
          !pair[1].is_number_unsigned()) {
        semantic(path, "expected a pair of non-negative capsule indices");
      }
      chain.collision_exemptions.emplace_back(pair[0].get<std::size_t>(), pair[1].get<std::size_t>());
    }
  }
  chain.normalize_exemptions();
  return chain;
}

KinematicChain parse_chain(std::string_view text) {
  KinematicChain chain = parse_chain_unchecked(text);
  throw_if_invalid(chain);
  return chain;
}

std::string serialize_chain(const KinematicChain& chain) {
  json doc;
  doc["format_version"] = kChainFormatVersion;
  doc["name"] = chain.name;
  doc["joints"] = json::array();
  for (const auto& j : chain.joints) {
    doc["joints"].push_back({{"name", j.name},
                             {"axis", write_vec3(j.axis)},
                             {"origin", write_transform(j.origin)},
                             {"limits", json::array({j.lower, j.upper})}});
  }
  doc["tip_offset"] = write_transform(chain.tip_offset);
  doc["capsules"] = json::array();
  for (const auto& c : chain.capsules) {
    doc["capsules"].push_back({{"joint", c.attached_joint},
                               {"a", write_vec3(c.a)},
                               {"b", write_vec3(c.b)},
                               {"radius", c.radius}});
  }
  doc["collision_exemptions"] = json::array();
  for (const auto& [i, j] : chain.collision_exemptions) {
    doc["collision_exemptions"].push_back(json::array({i, j}));
  }
  return doc.dump(2) + "\n";
}

KinematicChain load_chain_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ChainParseError(Kind::io, "", "cannot read chain file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_chain(buf.str());
}

}  // namespace kdbench
