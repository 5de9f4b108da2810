#include "pae/network_io.hpp"

#include <fstream>
#include <sstream>

namespace pae {

using nlohmann::json;

namespace {

constexpr const char* kDocumentFormat = "pae-network";
constexpr int kDocumentVersion = 1;

const char* kind_name(NetworkKind kind) {
  return kind == NetworkKind::LineDemo ? "line-demo" : "pseudo-autoencoder";
}

json scaled_to_json(const ScaledInteger& s) {
  return {{"coefficient", s.coefficient.str()}, {"exponent", s.exponent}};
}

ScaledInteger scaled_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coefficient") || !j.contains("exponent")) {
    throw ParseError("weight entry must be {\"coefficient\", \"exponent\"}");
  }
  const json& c = j.at("coefficient");
  const json& e = j.at("exponent");
  if (!c.is_string() || !e.is_number_integer()) {
    throw ParseError("coefficient must be a decimal string and exponent an integer");
  }
  const std::string& digits = c.get_ref<const std::string&>();
  const std::size_t start = (!digits.empty() && digits[0] == '-') ? 1 : 0;
  if (digits.size() == start ||
      digits.find_first_not_of("0123456789", start) != std::string::npos) {
    throw ParseError("coefficient '" + digits + "' is not a decimal integer");
  }
  return {BigInt(digits), e.get<std::int64_t>()};
}

template <typename T>
T require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

json to_json(const NetworkSpec& spec) {
  return {{"n", spec.n},
          {"m", spec.m},
          {"radix", spec.radix()},
          {"precision", spec.precision()},
          {"rounding", std::string(rounding_name(spec.format.rounding()))}};
}

json to_json(const Network& net) {
  json layers = json::array();
  for (const Layer& layer : net.layers) {
    json weights = json::array();
    for (std::size_t out = 0; out < layer.out_size(); ++out) {
      json row = json::array();
      for (std::size_t in = 0; in < layer.in_size(); ++in) {
        row.push_back(scaled_to_json(layer.weight(out, in)));
      }
      weights.push_back(std::move(row));
    }
    json biases = json::array();
    for (std::size_t out = 0; out < layer.out_size(); ++out) {
      biases.push_back(scaled_to_json(layer.bias(out)));
    }
    layers.push_back({{"in", layer.in_size()},
                      {"out", layer.out_size()},
                      {"activation", "identity"},
                      {"weights", std::move(weights)},
                      {"biases", std::move(biases)}});
  }
  return {{"format", kDocumentFormat},
          {"version", kDocumentVersion},
          {"kind", kind_name(net.kind)},
          {"spec", to_json(net.spec)},
          {"code_layer_index", net.code_layer_index},
          {"layers", std::move(layers)}};
}

NetworkSpec spec_from_json(const json& doc) {
  const auto rounding_text = require<std::string>(doc, "rounding");
  const auto rounding = parse_rounding(rounding_text);
  if (!rounding) throw ParseError("unknown rounding mode '" + rounding_text + "'");
  NetworkSpec spec{require<int>(doc, "n"), require<int>(doc, "m"),
                   FloatFormat(require<int>(doc, "radix"),
                               require<int>(doc, "precision"), *rounding)};
  spec.validate();
  return spec;
}

Network network_from_json(const json& doc) {
  if (require<std::string>(doc, "format") != kDocumentFormat) {
    throw ParseError("not a pae-network document");
  }
  if (require<int>(doc, "version") != kDocumentVersion) {
    throw ParseError("unsupported document version");
  }
  Network net;
  const auto kind = require<std::string>(doc, "kind");
  if (kind == "pseudo-autoencoder") {
    net.kind = NetworkKind::PseudoAutoencoder;
  } else if (kind == "line-demo") {
    net.kind = NetworkKind::LineDemo;
  } else {
    throw ParseError("unknown network kind '" + kind + "'");
  }
  if (!doc.contains("spec")) throw ParseError("missing field 'spec'");
  net.spec = spec_from_json(doc.at("spec"));
  net.code_layer_index = require<std::size_t>(doc, "code_layer_index");

  if (!doc.contains("layers") || !doc.at("layers").is_array()) {
    throw ParseError("'layers' must be an array");
  }
  for (const json& jl : doc.at("layers")) {
    const auto in = require<std::size_t>(jl, "in");
    const auto out = require<std::size_t>(jl, "out");
    if (require<std::string>(jl, "activation") != "identity") {
      throw ParseError("only identity activations are supported");
    }
    const json& weights = jl.contains("weights") ? jl.at("weights") : json();
    const json& biases = jl.contains("biases") ? jl.at("biases") : json();
    if (!weights.is_array() || weights.size() != out || !biases.is_array() ||
        biases.size() != out) {
      throw ParseError("layer weights/biases do not match its declared shape");
    }
    Layer layer(in, out);
    for (std::size_t o = 0; o < out; ++o) {
      const json& row = weights.at(o);
      if (!row.is_array() || row.size() != in) {
        throw ParseError("weight row length does not match the layer input size");
      }
      for (std::size_t i = 0; i < in; ++i) layer.weight(o, i) = scaled_from_json(row.at(i));
      layer.bias(o) = scaled_from_json(biases.at(o));
    }
    net.layers.push_back(std::move(layer));
  }
  net.check_shapes();
  return net;
}

std::string serialize_network(const Network& net) { return to_json(net).dump(2) + "\n"; }

Network parse_network(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return network_from_json(doc);
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << serialize_network(net);
  if (!out) throw Error("failed writing " + path.string());
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

}  // namespace pae
