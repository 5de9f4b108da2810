#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "pae/netcore.hpp"
#include "pae/verify.hpp"

using namespace pae;

namespace {

NetworkSpec make_spec(int n, int m, int z, Rounding rounding = Rounding::TruncateTowardZero) {
  return NetworkSpec{n, m, FloatFormat::binary(z, rounding)};
}

std::vector<BigInt> ints(std::initializer_list<long long> xs) {
  return {xs.begin(), xs.end()};
}

std::vector<BigInt> as_ints(const std::vector<FloatValue>& vs, const FloatFormat& fmt) {
  std::vector<BigInt> out;
  for (const auto& v : vs) out.push_back(to_integer(v, fmt));
  return out;
}

}  // namespace

TEST_CASE("spec validation and capacity") {
  CHECK_THROWS_AS(make_spec(0, 3, 9).validate(), InvalidSpec);
  CHECK_THROWS_AS(make_spec(2, 1, 9).validate(), InvalidSpec);
  CHECK(make_spec(3, 3, 9).capacity_safe());
  CHECK_FALSE(make_spec(3, 4, 9).capacity_safe());
  CHECK_FALSE(make_spec(8, 4, 23).capacity_safe());
  CHECK(make_spec(6, 4, 23).capacity_safe());
}

TEST_CASE("synthesized weights") {
  Network net = synthesize(make_spec(3, 3, 9));
  REQUIRE(net.layers.size() == 5);
  CHECK(net.code_layer_index == 1);
  CHECK(net.input_size() == 3);
  net.check_shapes();

  const Layer& enc = net.layers[0];
  CHECK(enc.in_size() == 3);
  CHECK(enc.out_size() == 1);
  for (int k = 0; k < 3; ++k) CHECK(enc.weight(0, k) == ScaledInteger::power(3 * k));
  CHECK(enc.bias(0).is_zero());

  const Layer& split = net.layers[1];
  for (int k = 0; k < 3; ++k) {
    CHECK(split.weight(k, 0) == ScaledInteger::power(0));
    CHECK(split.bias(k) == ScaledInteger::power(9 + 3 * k));
  }
  const Layer& clear = net.layers[2];
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) CHECK(clear.weight(k, j).is_zero() == (k != j));
    CHECK(clear.bias(k) == ScaledInteger::power(9 + 3 * k, true));
  }
  const Layer& isolate = net.layers[3];
  CHECK(isolate.weight(0, 0) == ScaledInteger::power(0));
  CHECK(isolate.weight(0, 1) == ScaledInteger::power(0, true));
  CHECK(isolate.weight(0, 2).is_zero());
  CHECK(isolate.weight(2, 2) == ScaledInteger::power(0));
  CHECK(isolate.weight(2, 1).is_zero());
  const Layer& shift = net.layers[4];
  for (int k = 0; k < 3; ++k) CHECK(shift.weight(k, k) == ScaledInteger::power(-3 * k));

  CHECK(synthesize(make_spec(8, 4, 23)).layers.size() == 5);
  CHECK_THROWS_AS(synthesize(make_spec(0, 4, 23)), InvalidSpec);
}

TEST_CASE("3x3 worked example forward pass") {
  NetworkSpec spec = make_spec(3, 3, 9);
  ForwardResult r = forward(synthesize(spec), ints({3, 2, 3}));
  const auto& fmt = spec.format;
  REQUIRE(r.trace.values.size() == 6);
  CHECK(as_ints(r.outputs, fmt) == ints({3, 2, 3}));
  CHECK(as_ints(r.trace.values[1], fmt) == ints({211}));
  CHECK(as_ints(r.trace.values[2], fmt) == ints({723, 4304, 32960}));
  CHECK(as_ints(r.trace.values[3], fmt) == ints({211, 208, 192}));
  CHECK(as_ints(r.trace.values[4], fmt) == ints({3, 16, 192}));
  CHECK(as_ints(r.trace.values[5], fmt) == ints({3, 2, 3}));
  CHECK(r.trace.rendered[1][0] == "011 010 011");
  CHECK(r.trace.rendered[2][1] == "001 000 011 010 000");
}

TEST_CASE("encode and decode") {
  NetworkSpec two = make_spec(2, 3, 9);
  CHECK(to_integer(encode(synthesize(two), ints({3, 3})), two.format) == 27);
  CHECK(oracle::pack(ints({3, 3}), 2, 3) == 27);

  NetworkSpec spec = make_spec(3, 3, 9);
  Network net = synthesize(spec);
  CHECK(oracle::pack(ints({4, 4, 1}), 2, 3) == 100);
  CHECK(as_ints(decode(net, from_integer(100, spec.format)), spec.format) == ints({4, 4, 1}));
  CHECK_THROWS_AS(encode(net, ints({1, 2})), ShapeMismatch);
  CHECK_THROWS_AS(forward(net, ints({1, 2, 3, 4})), ShapeMismatch);
}

TEST_CASE("round-nearest-even breaks full-range inputs") {
  NetworkSpec spec = make_spec(3, 3, 9, Rounding::RoundNearestEven);
  ForwardResult r = forward(synthesize(spec), ints({5, 2, 3}));
  oracle::Simulation sim = oracle::simulate(ints({5, 2, 3}), 2, 3, 10, true);
  CHECK(as_ints(r.outputs, spec.format) == sim.layers[5]);
  CHECK(as_ints(r.outputs, spec.format) != ints({5, 2, 3}));
}

TEST_CASE("invariant: executor agrees with the integer simulation") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 400; ++i) {
    int n = 1 + static_cast<int>(rng() % 5);
    int m = 2 + static_cast<int>(rng() % 6);
    int z = 4 + static_cast<int>(rng() % 30);
    Rounding rounding = (rng() & 1) ? Rounding::RoundNearestEven : Rounding::TruncateTowardZero;
    NetworkSpec spec = make_spec(n, m, z, rounding);
    Network net = synthesize(spec);
    std::vector<BigInt> xs;
    for (int k = 0; k < n; ++k) xs.push_back(BigInt(rng() % (1u << m)));
    oracle::Simulation sim =
        oracle::simulate(xs, 2, m, z + 1, rounding == Rounding::RoundNearestEven);
    REQUIRE(sim.integral);
    ForwardResult r = forward(net, xs);
    for (std::size_t l = 0; l < 6; ++l) CHECK(as_ints(r.trace.values[l], spec.format) == sim.layers[l]);
  }
}

TEST_CASE("invariant: capacity-safe specs reconstruct exactly") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 400; ++i) {
    int radix = 2 + static_cast<int>(rng() % 9);
    int n = 1 + static_cast<int>(rng() % 4);
    int m = 2 + static_cast<int>(rng() % 4);
    int p = n * m + static_cast<int>(rng() % 3);
    Rounding rounding = (radix == 2 && (rng() & 1)) ? Rounding::RoundNearestEven
                                                     : Rounding::TruncateTowardZero;
    NetworkSpec spec{n, m, FloatFormat(radix, p, rounding)};
    Network net = synthesize(spec);
    BigInt limit = oracle::power(radix, m - 1);
    std::vector<BigInt> xs;
    for (int k = 0; k < n; ++k) xs.push_back(BigInt(rng()) % limit);
    ForwardResult r = forward(net, xs);
    CHECK(as_ints(r.outputs, spec.format) == xs);
    CHECK(to_integer(r.trace.values[1][0], spec.format) == oracle::pack(xs, radix, m));
  }
}

TEST_CASE("line demo") {
  FloatFormat fmt = FloatFormat::binary(9, Rounding::TruncateTowardZero);
  Network net = synthesize_line_demo({2, 0}, {5, 0}, fmt);
  CHECK(net.kind == NetworkKind::LineDemo);
  CHECK(net.input_size() == 2);
  CHECK(net.layers.size() == 2);
  for (long long x : {-100LL, -3LL, 0LL, 1LL, 100LL}) {
    ForwardResult r = forward(net, ints({x, 2 * x + 5}));
    CHECK(r.trace.values[1].size() == 1);
    CHECK(as_ints(r.outputs, fmt) == ints({x, 2 * x + 5}));
  }
  // A point off the line comes back projected onto it.
  ForwardResult off = forward(net, ints({1, 0}));
  CHECK(as_ints(off.outputs, fmt) == ints({1, 7}));
  CHECK_THROWS_AS(synthesize_line_demo({2049, 0}, {5, 0}, fmt), InvalidSpec);
}

TEST_CASE("scaled integers") {
  FloatFormat fmt = FloatFormat::binary(9, Rounding::TruncateTowardZero);
  CHECK(representable({1023, 0}, fmt));
  CHECK_FALSE(representable({1025, 0}, fmt));
  CHECK(representable({1024, 40}, fmt));
  ScaledInteger s{-96, -3};
  CHECK(to_scaled(to_float(s, fmt)) == ScaledInteger{-3, 2});
}
