#pragma once

// Exact-integer oracles for the pseudo-autoencoder and the verification
// drivers built on them: exhaustive and sampled round-trip checks, the
// truncation/round-to-nearest divergence search, and capacity sweeps.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pae/netcore.hpp"
#include "pae/network_io.hpp"

namespace pae {

enum class InputDomain {
  LeadingZero,  // 0 <= x < r^(m-1)
  FullRange,    // 0 <= x < r^m
};

std::string_view domain_name(InputDomain domain);  // "leading-zero" / "full"
std::optional<InputDomain> parse_domain(std::string_view name);

inline constexpr std::uint64_t kDefaultCaseBudget = 10'000'000;

// sum_k xs[k] * r^(k*m), exact.
BigInt oracle_pack(const std::vector<BigInt>& xs, const NetworkSpec& spec);
// [floor(c / r^(k*m)) mod r^m for k = 0..n-1]
std::vector<BigInt> oracle_unpack(const BigInt& c, const NetworkSpec& spec);

// c with its lowest `digits` radix digits cleared.
BigInt zero_low(const BigInt& c, int radix, std::int64_t digits);

// The integer every neuron should hold for inputs `xs`, layer by layer
// (inputs, packed code, code plus bias, low blocks cleared, block isolated,
// block shifted down), computed without any rounding.
std::vector<std::vector<BigInt>> oracle_layers(const std::vector<BigInt>& xs,
                                               const NetworkSpec& spec);

// Exclusive upper bound on each input in the domain.
BigInt domain_limit(const NetworkSpec& spec, InputDomain domain);
// limit^n, the size of the exhaustive enumeration.
BigInt domain_size(const NetworkSpec& spec, InputDomain domain);

// Tuple number `index` of the enumeration order: x_1 varies fastest, so the
// index is the tuple read as a base-`limit` numeral with x_1 lowest.
std::vector<BigInt> tuple_at(std::uint64_t index, const BigInt& limit, int n);

// Deterministic tuple source for sampled runs. Each component draws
// ceil((bits(limit) + 64) / 64) words from std::mt19937_64(seed), joins them
// most significant first and reduces modulo the limit. mt19937_64's output
// sequence is fixed by the C++ standard, so samples are identical everywhere.
class TupleSampler {
 public:
  TupleSampler(std::uint64_t seed, BigInt limit, int n);
  std::vector<BigInt> next();

 private:
  std::mt19937_64 engine_;
  BigInt limit_;
  int n_;
  unsigned words_;
};

struct VerifyMode {
  enum class Kind { Exhaustive, Sampled };
  Kind kind = Kind::Exhaustive;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const VerifyMode&, const VerifyMode&) = default;
};

struct Counterexample {
  std::vector<BigInt> inputs;
  std::vector<BigInt> expected;
  std::vector<FloatValue> actual;
  // First activation layer (0 = L1) and neuron where the trace departs from
  // oracle_layers. Layer is absent only if the trace matches everywhere
  // (which a failing case cannot do).
  std::optional<std::size_t> diverging_layer;
  std::optional<std::size_t> diverging_neuron;
};

struct VerifyReport {
  NetworkSpec spec;
  InputDomain domain = InputDomain::LeadingZero;
  VerifyMode mode;
  std::uint64_t total_cases = 0;
  std::uint64_t failures = 0;
  std::optional<Counterexample> first_counterexample;

  bool passed() const { return failures == 0; }
};

struct VerifyOptions {
  std::uint64_t budget = kDefaultCaseBudget;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Throws BudgetExceeded if the domain holds more than `options.budget` tuples.
VerifyReport verify_exhaustive(const NetworkSpec& spec, InputDomain domain,
                               const VerifyOptions& options = {});
VerifyReport verify_sampled(const NetworkSpec& spec, std::uint64_t count,
                            std::uint64_t seed, InputDomain domain);

// Failure localization shared by both drivers; `actual` is the full trace.
Counterexample make_counterexample(const std::vector<BigInt>& inputs,
                                   const std::vector<std::vector<FloatValue>>& trace,
                                   const NetworkSpec& spec);

struct DivergenceCase {
  std::vector<BigInt> inputs;
  std::size_t layer = 0;   // activation index, 0 = L1
  std::size_t neuron = 0;  // 0-based
  FloatValue truncated;
  FloatValue nearest_even;
  std::vector<FloatValue> truncated_outputs;
  std::vector<FloatValue> nearest_even_outputs;
};

// First tuple, in enumeration order, whose truncating and round-to-nearest-
// even traces differ anywhere. Radix 2 only (InvalidSpec otherwise); the
// spec's own rounding mode is ignored. Throws BudgetExceeded like
// verify_exhaustive.
std::optional<DivergenceCase> rounding_divergence(const NetworkSpec& spec,
                                                  InputDomain domain,
                                                  std::uint64_t budget = kDefaultCaseBudget);

struct SweepConfig {
  std::vector<int> n_values;
  std::vector<int> m_values;
  std::vector<int> precisions;  // significant digits P
  std::vector<Rounding> roundings;
  int radix = 2;
  std::uint64_t budget = kDefaultCaseBudget;
  // Cells over budget fall back to this many sampled cases.
  std::uint64_t sample_count = 100'000;
  std::uint64_t seed = 1;
};

struct SweepRow {
  int n = 0;
  int m = 0;
  int radix = 2;
  int precision = 0;
  Rounding rounding = Rounding::TruncateTowardZero;
  bool capacity_safe = false;
  VerifyMode::Kind method = VerifyMode::Kind::Exhaustive;
  std::uint64_t cases = 0;
  std::uint64_t passes = 0;

  bool all_pass() const { return passes == cases; }
  // Shortest decimal that reads back as passes/cases, e.g. "1.0", "0.75".
  std::string pass_fraction() const;
};

// One row per (n, m, precision, rounding), in that nesting order, measured
// over the leading-zero domain. Throws InvalidSpec for empty ranges.
std::vector<SweepRow> capacity_sweep(const SweepConfig& config);

inline constexpr std::string_view kSweepCsvHeader =
    "n,m,radix,precision,rounding,capacity_safe,method,cases,pass_fraction";
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

std::string_view method_name(VerifyMode::Kind kind);  // "exhaustive" / "sampled"
std::string layer_label(std::size_t activation_index);  // 0 -> "L1"

nlohmann::json to_json(const VerifyReport& report);
nlohmann::json to_json(const SweepRow& row);
nlohmann::json to_json(const DivergenceCase& c, const FloatFormat& fmt);
std::string summary_text(const VerifyReport& report);

}  // namespace pae
