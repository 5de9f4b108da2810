#pragma once

// Network documents (JSON):
//
//   {
//     "format": "pae-network", "version": 1,
//     "kind": "pseudo-autoencoder" | "line-demo",
//     "spec": {"n": 3, "m": 3, "radix": 2, "precision": 10, "rounding": "trunc"},
//     "code_layer_index": 1,
//     "layers": [
//       {"in": 3, "out": 1, "activation": "identity",
//        "weights": [[{"coefficient": "1", "exponent": 0}, ...], ...],
//        "biases": [{"coefficient": "0", "exponent": 0}]},
//       ...
//     ]
//   }
//
// Every weight and bias is coefficient * radix^exponent with the coefficient
// written as a decimal integer string, so no value passes through a binary
// float and documents round-trip exactly.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pae/netcore.hpp"

namespace pae {

nlohmann::json to_json(const NetworkSpec& spec);
nlohmann::json to_json(const Network& net);

// Throws ParseError on malformed documents and InvalidSpec/InvalidFormat
// on well-formed documents that describe an invalid network.
NetworkSpec spec_from_json(const nlohmann::json& doc);
Network network_from_json(const nlohmann::json& doc);

std::string serialize_network(const Network& net);
Network parse_network(const std::string& text);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace pae
