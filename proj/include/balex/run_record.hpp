#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "instance.hpp"

// Machine-readable run records for the CLI. The instance digest is a
// content hash over the canonicalized JSON (parsed and re-serialized with
// sorted keys), so it is stable under field reordering.

namespace balex {

inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string digest_json_text(const std::string& text) {
  return fnv1a_hex(json::parse(text).dump());
}

inline std::string digest_text(const std::string& text) { return fnv1a_hex(text); }

struct RunRecord {
  std::string command;
  std::string instance_digest;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> samples_cap;
  json result;
  std::int64_t wall_time_ms = 0;
};

inline json to_json(const RunRecord& r) {
  return json{{"command", r.command},
              {"instance_digest", r.instance_digest},
              {"config",
               {{"epsilon", r.epsilon},
                {"delta", r.delta},
                {"seed", r.seed},
                {"samples_cap", r.samples_cap ? json(*r.samples_cap) : json(nullptr)}}},
              {"result", r.result},
              {"wall_time_ms", r.wall_time_ms}};
}

}  // namespace balex
