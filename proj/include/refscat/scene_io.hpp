#ifndef REFSCAT_SCENE_IO_HPP
#define REFSCAT_SCENE_IO_HPP

#include <string>

#include <json.hpp>

#include "refscat/geom.hpp"

namespace refscat {

// Scene <-> JSON; from-JSON rejects unknown keys with path-qualified messages.
nlohmann::json scene_to_json(const Scene& s);
Scene scene_from_json(const nlohmann::json& j);

// FNV-1a 64-bit hash of the canonical serialization, as fixed-width hex.
std::string fnv1a_hex(const std::string& bytes);
std::string scene_fingerprint(const Scene& s);

} // namespace refscat

#endif
