#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "pae/network_io.hpp"

using namespace pae;

TEST_CASE("network document round trip") {
  for (Rounding rounding : {Rounding::TruncateTowardZero, Rounding::RoundNearestEven}) {
    Network net = synthesize(NetworkSpec{3, 3, FloatFormat::binary(9, rounding)});
    Network back = parse_network(serialize_network(net));
    CHECK(back == net);
  }
  Network dec = synthesize(NetworkSpec{4, 3, FloatFormat(10, 12, Rounding::TruncateTowardZero)});
  CHECK(parse_network(serialize_network(dec)) == dec);

  Network line = synthesize_line_demo({-3, 0}, {7, 2}, FloatFormat::binary(9, Rounding::TruncateTowardZero));
  Network line_back = parse_network(serialize_network(line));
  CHECK(line_back == line);
  CHECK(line_back.kind == NetworkKind::LineDemo);
}

TEST_CASE("document layout") {
  nlohmann::json doc = to_json(synthesize(NetworkSpec{2, 3, FloatFormat::binary(9, Rounding::TruncateTowardZero)}));
  CHECK(doc["format"] == "pae-network");
  CHECK(doc["kind"] == "pseudo-autoencoder");
  CHECK(doc["spec"]["precision"] == 10);
  CHECK(doc["spec"]["rounding"] == "trunc");
  CHECK(doc["code_layer_index"] == 1);
  REQUIRE(doc["layers"].size() == 5);
  CHECK(doc["layers"][0]["weights"][0][1]["coefficient"] == "1");
  CHECK(doc["layers"][0]["weights"][0][1]["exponent"] == 3);
  CHECK(doc["layers"][2]["biases"][1]["coefficient"] == "-1");
  CHECK(doc["layers"][2]["biases"][1]["exponent"] == 12);
}

TEST_CASE("huge coefficients survive as decimal strings") {
  Network net = synthesize(NetworkSpec{2, 2, FloatFormat::binary(200, Rounding::TruncateTowardZero)});
  net.layers[0].bias(0) = {BigInt("123456789012345678901234567890123456789"), -77};
  CHECK(parse_network(serialize_network(net)) == net);
}

TEST_CASE("malformed documents") {
  CHECK_THROWS_AS(parse_network("not json"), ParseError);
  CHECK_THROWS_AS(parse_network("{}"), ParseError);
  nlohmann::json doc = to_json(synthesize(NetworkSpec{2, 3, FloatFormat::binary(9, Rounding::TruncateTowardZero)}));
  auto broken = doc;
  broken["layers"][1]["weights"].erase(0);
  CHECK_THROWS(network_from_json(broken));
  broken = doc;
  broken["spec"]["rounding"] = "up";
  CHECK_THROWS(network_from_json(broken));
  broken = doc;
  broken["layers"][0]["weights"][0][0]["coefficient"] = "1.5";
  CHECK_THROWS(network_from_json(broken));
  CHECK_THROWS_AS(load_network("/nonexistent/net.json"), Error);
}

TEST_CASE("save and load") {
  auto path = std::filesystem::temp_directory_path() / "pae_io_test.json";
  Network net = synthesize(NetworkSpec{3, 3, FloatFormat::binary(9, Rounding::TruncateTowardZero)});
  save_network(net, path);
  CHECK(load_network(path) == net);
  std::filesystem::remove(path);
}
