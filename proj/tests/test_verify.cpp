#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "oracle.hpp"
#include "pae/verify.hpp"

using namespace pae;

namespace {

NetworkSpec make_spec(int n, int m, int z, Rounding rounding = Rounding::TruncateTowardZero) {
  return NetworkSpec{n, m, FloatFormat::binary(z, rounding)};
}

std::vector<BigInt> ints(std::initializer_list<long long> xs) {
  return {xs.begin(), xs.end()};
}

// Passing tuples of the whole domain according to the integer simulation.
std::uint64_t simulated_passes(const NetworkSpec& spec, InputDomain domain) {
  long long limit = domain == InputDomain::LeadingZero ? 1LL << (spec.m - 1) : 1LL << spec.m;
  bool rne = spec.format.rounding() == Rounding::RoundNearestEven;
  std::uint64_t passes = 0;
  std::vector<BigInt> xs(spec.n, 0);
  while (true) {
    oracle::Simulation sim = oracle::simulate(xs, 2, spec.m, spec.precision(), rne);
    if (sim.layers[5] == xs && sim.layers[1][0] == oracle::pack(xs, 2, spec.m)) ++passes;
    int k = 0;
    while (k < spec.n && ++xs[k] == limit) xs[k++] = 0;
    if (k == spec.n) break;
  }
  return passes;
}

}  // namespace

TEST_CASE("oracle pack and unpack") {
  NetworkSpec fig2 = make_spec(3, 3, 9);
  CHECK(oracle_pack(ints({3, 2, 3}), fig2) == 211);
  CHECK(oracle_unpack(211, fig2) == ints({3, 2, 3}));
  CHECK(oracle_unpack(0, fig2) == ints({0, 0, 0}));
  NetworkSpec four = make_spec(4, 2, 9);
  CHECK(oracle::pack(ints({1, 1, 1, 1}), 2, 2) == 85);
  CHECK(oracle_pack(ints({1, 1, 1, 1}), four) == 85);
  CHECK(oracle_unpack(85, four) == ints({1, 1, 1, 1}));
  CHECK(oracle_pack(ints({3}), make_spec(1, 5, 9)) == 3);
  NetworkSpec dec{3, 2, FloatFormat(10, 8, Rounding::TruncateTowardZero)};
  CHECK(oracle_pack(ints({12, 34, 56}), dec) == 563412);
  CHECK(oracle_unpack(563412, dec) == ints({12, 34, 56}));
}

TEST_CASE("oracle layers for the 3x3 worked example") {
  auto layers = oracle_layers(ints({3, 2, 3}), make_spec(3, 3, 9));
  REQUIRE(layers.size() == 6);
  CHECK(layers[1] == ints({211}));
  CHECK(layers[3] == ints({211, 208, 192}));
  CHECK(layers[4] == ints({3, 16, 192}));
  CHECK(layers[5] == ints({3, 2, 3}));
  CHECK(zero_low(211, 2, 3) == 208);
}

TEST_CASE("enumeration order and domains") {
  NetworkSpec spec = make_spec(3, 3, 9);
  CHECK(domain_limit(spec, InputDomain::LeadingZero) == 4);
  CHECK(domain_limit(spec, InputDomain::FullRange) == 8);
  CHECK(domain_size(spec, InputDomain::LeadingZero) == 64);
  CHECK(domain_size(spec, InputDomain::FullRange) == 512);
  CHECK(tuple_at(0, 8, 3) == ints({0, 0, 0}));
  CHECK(tuple_at(1, 8, 3) == ints({1, 0, 0}));
  CHECK(tuple_at(5 + 2 * 8 + 3 * 64, 8, 3) == ints({5, 2, 3}));
}

TEST_CASE("exhaustive verification") {
  VerifyReport fig2 = verify_exhaustive(make_spec(3, 3, 9), InputDomain::LeadingZero);
  CHECK(fig2.total_cases == 64);
  CHECK(fig2.failures == 0);
  CHECK(fig2.passed());
  CHECK_FALSE(fig2.first_counterexample.has_value());
  CHECK(summary_text(fig2).find("64/64") != std::string::npos);

  VerifyReport tiny = verify_exhaustive(make_spec(1, 2, 23), InputDomain::LeadingZero);
  CHECK(tiny.total_cases == 2);
  CHECK(tiny.failures == 0);

  NetworkSpec unsafe = make_spec(3, 4, 9);
  VerifyReport bad = verify_exhaustive(unsafe, InputDomain::LeadingZero);
  CHECK(bad.total_cases == 512);
  CHECK(bad.failures == 512 - simulated_passes(unsafe, InputDomain::LeadingZero));
  REQUIRE(bad.first_counterexample.has_value());
  const Counterexample& cx = *bad.first_counterexample;
  CHECK(cx.inputs == ints({1, 0, 2}));
  CHECK(cx.expected == cx.inputs);
  REQUIRE(cx.diverging_layer.has_value());
  CHECK(*cx.diverging_layer == 2);
  CHECK(*cx.diverging_neuron == 0);
  // 513 occupies bit 9, so the L3 bias 2^9 carries past ten digits and bit 0 is lost.
  oracle::Simulation sim = oracle::simulate(cx.inputs, 2, 4, 10, false);
  CHECK(sim.layers[2][0] == 1024);
  CHECK(oracle_layers(cx.inputs, unsafe)[2][0] == 513 + 512);

  // Every earlier tuple passes.
  for (std::uint64_t i = 0; i < 1 + 2 * 64; ++i) {
    auto xs = tuple_at(i, 8, 3);
    oracle::Simulation s = oracle::simulate(xs, 2, 4, 10, false);
    CHECK(s.layers[5] == xs);
  }

  VerifyOptions small;
  small.budget = 100;
  CHECK_THROWS_AS(verify_exhaustive(unsafe, InputDomain::LeadingZero, small), BudgetExceeded);
}

TEST_CASE("exhaustive results do not depend on the thread count") {
  NetworkSpec spec = make_spec(3, 4, 9, Rounding::RoundNearestEven);
  VerifyOptions one, four;
  one.threads = 1;
  four.threads = 4;
  VerifyReport a = verify_exhaustive(spec, InputDomain::FullRange, one);
  VerifyReport b = verify_exhaustive(spec, InputDomain::FullRange, four);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(a.failures == 4096 - simulated_passes(spec, InputDomain::FullRange));
}

TEST_CASE("sampled verification") {
  VerifyReport r = verify_sampled(make_spec(4, 6, 23), 10000, 42, InputDomain::LeadingZero);
  CHECK(r.total_cases == 10000);
  CHECK(r.failures == 0);
  CHECK(r.mode.kind == VerifyMode::Kind::Sampled);
  CHECK(r.mode.count == 10000);
  CHECK(r.mode.seed == 42);

  NetworkSpec spec = make_spec(1, 2, 9);
  std::uint64_t seed = 0;
  while (TupleSampler(seed, 2, 1).next() != ints({0})) ++seed;
  VerifyReport zero = verify_sampled(spec, 1, seed, InputDomain::LeadingZero);
  CHECK(zero.total_cases == 1);
  CHECK(zero.failures == 0);

  NetworkSpec unsafe = make_spec(3, 4, 9);
  std::string first = to_json(verify_sampled(unsafe, 500, 9, InputDomain::FullRange)).dump();
  std::string second = to_json(verify_sampled(unsafe, 500, 9, InputDomain::FullRange)).dump();
  CHECK(first == second);
  CHECK(first != to_json(verify_sampled(unsafe, 500, 10, InputDomain::FullRange)).dump());
}

TEST_CASE("sampler stays in range and is reproducible") {
  BigInt limit = oracle::power(10, 30) + 7;
  TupleSampler a(5, limit, 4), b(5, limit, 4);
  for (int i = 0; i < 1000; ++i) {
    auto xs = a.next();
    CHECK(xs == b.next());
    for (const auto& x : xs) CHECK((x >= 0 && x < limit));
  }
  // Small limits see every value.
  TupleSampler c(3, 3, 1);
  std::array<int, 3> seen{};
  for (int i = 0; i < 300; ++i) ++seen[static_cast<int>(c.next()[0])];
  for (int s : seen) CHECK(s > 50);
}

TEST_CASE("rounding divergence") {
  NetworkSpec spec = make_spec(3, 3, 9);
  auto found = rounding_divergence(spec, InputDomain::FullRange);
  REQUIRE(found.has_value());
  CHECK(found->inputs == ints({5, 0, 0}));
  CHECK(found->layer == 2);
  CHECK(found->neuron == 1);
  oracle::Simulation t = oracle::simulate(found->inputs, 2, 3, 10, false);
  oracle::Simulation e = oracle::simulate(found->inputs, 2, 3, 10, true);
  CHECK(to_integer(found->truncated, spec.format) == t.layers[2][1]);
  CHECK(to_integer(found->nearest_even, spec.format.with_rounding(Rounding::RoundNearestEven)) ==
        e.layers[2][1]);
  CHECK(t.layers[2][1] == 4096);
  CHECK(e.layers[2][1] == 4104);
  CHECK(t.layers[1] == e.layers[1]);

  // Tuples before [5,0,0] agree on every layer.
  for (std::uint64_t i = 0; i < 5; ++i) {
    auto xs = tuple_at(i, 8, 3);
    CHECK(oracle::simulate(xs, 2, 3, 10, false).layers ==
          oracle::simulate(xs, 2, 3, 10, true).layers);
  }
  // [5,2,3] also diverges at L3, k=2: 213 + 4096 = 4309.
  auto t523 = oracle::simulate(ints({5, 2, 3}), 2, 3, 10, false);
  auto e523 = oracle::simulate(ints({5, 2, 3}), 2, 3, 10, true);
  CHECK(t523.layers[2][1] == 4304);
  CHECK(e523.layers[2][1] == 4312);

  CHECK_FALSE(rounding_divergence(spec, InputDomain::LeadingZero).has_value());
  CHECK(rounding_divergence(make_spec(2, 2, 3), InputDomain::FullRange).has_value());
  CHECK_THROWS_AS(rounding_divergence(NetworkSpec{2, 2, FloatFormat(3, 6, Rounding::TruncateTowardZero)},
                                      InputDomain::FullRange),
                  InvalidSpec);
}

TEST_CASE("capacity sweep") {
  SweepConfig cfg;
  cfg.n_values = {1, 2, 3};
  cfg.m_values = {2, 3, 4};
  cfg.precisions = {10};
  cfg.roundings = {Rounding::TruncateTowardZero, Rounding::RoundNearestEven};
  auto rows = capacity_sweep(cfg);
  REQUIRE(rows.size() == 18);
  for (const SweepRow& row : rows) {
    CAPTURE(row.n);
    CAPTURE(row.m);
    NetworkSpec spec = make_spec(row.n, row.m, row.precision - 1, row.rounding);
    CHECK(row.capacity_safe == (row.n * row.m <= 10));
    CHECK(row.method == VerifyMode::Kind::Exhaustive);
    CHECK(row.passes == simulated_passes(spec, InputDomain::LeadingZero));
    if (row.capacity_safe) CHECK(row.pass_fraction() == "1.0");
    if (row.n == 1) CHECK(row.all_pass());
  }
  auto it = std::find_if(rows.begin(), rows.end(), [](const SweepRow& r) {
    return r.n == 3 && r.m == 4 && r.rounding == Rounding::TruncateTowardZero;
  });
  REQUIRE(it != rows.end());
  CHECK_FALSE(it->capacity_safe);
  CHECK(it->passes == 288);
  CHECK(it->pass_fraction() == "0.5625");

  cfg.budget = 10;
  cfg.sample_count = 50;
  auto sampled = capacity_sweep(cfg);
  CHECK(std::any_of(sampled.begin(), sampled.end(),
                    [](const SweepRow& r) { return r.method == VerifyMode::Kind::Sampled; }));

  std::ostringstream csv;
  write_sweep_csv(rows, csv);
  std::string text = csv.str();
  CHECK(text.rfind("n,m,radix,precision,rounding,capacity_safe,method,cases,pass_fraction\n", 0) == 0);
  CHECK(text.find("3,4,2,10,trunc,false,exhaustive,512,0.5625\n") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 19);
}
