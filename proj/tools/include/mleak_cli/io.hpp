#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "json.hpp"
#include "mleak/cipher.hpp"
#include "mleak/dist.hpp"
#include "mleak/mechanism.hpp"

namespace mleak::cli {

using nlohmann::json;

// Malformed input text or structure; maps to exit code 2.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
json parse_json_text(const std::string& text, const std::string& what);
json load_json(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

// JSON text with every float written at 17 significant digits.
std::string dump17(const json& j, int indent = 2);

// {"kind": "joint" | "channel" | "cond_joint", ...}
using Distribution = std::variant<JointPmf, CondJointPmf>;
Distribution parse_distribution(const json& j);
JointPmf parse_joint_only(const json& j);

// {"hamming": n} or {"d": [[...]]}; level comes from the caller.
DistortionSpec parse_distortion(const json& j, double level);

CipherParams parse_cipher_params(const json& j);
json cipher_params_to_json(const CipherParams& c);

json scheme_to_json(const CipherScheme& s);
CipherScheme scheme_from_json(const json& j);

}  // namespace mleak::cli
