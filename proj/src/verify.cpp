#include "pae/verify.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace pae {

namespace mp = boost::multiprecision;
using nlohmann::json;

std::string_view domain_name(InputDomain domain) {
  return domain == InputDomain::LeadingZero ? "leading-zero" : "full";
}

std::optional<InputDomain> parse_domain(std::string_view name) {
  if (name == "leading-zero") return InputDomain::LeadingZero;
  if (name == "full") return InputDomain::FullRange;
  return std::nullopt;
}

std::string_view method_name(VerifyMode::Kind kind) {
  return kind == VerifyMode::Kind::Exhaustive ? "exhaustive" : "sampled";
}

std::string layer_label(std::size_t activation_index) {
  return "L" + std::to_string(activation_index + 1);
}

BigInt oracle_pack(const std::vector<BigInt>& xs, const NetworkSpec& spec) {
  BigInt c = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    c += xs[k] * radix_pow(spec.radix(), static_cast<std::int64_t>(k) * spec.m);
  }
  return c;
}

std::vector<BigInt> oracle_unpack(const BigInt& c, const NetworkSpec& spec) {
  const BigInt block = radix_pow(spec.radix(), spec.m);
  std::vector<BigInt> xs;
  xs.reserve(spec.n);
  BigInt rest = c;
  for (int k = 0; k < spec.n; ++k) {
    BigInt q, r;
    mp::divide_qr(rest, block, q, r);
    xs.push_back(std::move(r));
    rest = std::move(q);
  }
  return xs;
}

BigInt zero_low(const BigInt& c, int radix, std::int64_t digits) {
  const BigInt unit = radix_pow(radix, digits);
  return c / unit * unit;
}

std::vector<std::vector<BigInt>> oracle_layers(const std::vector<BigInt>& xs,
                                               const NetworkSpec& spec) {
  const int r = spec.radix();
  const auto n = static_cast<std::size_t>(spec.n);
  auto block = [&](std::size_t k) { return static_cast<std::int64_t>(k) * spec.m; };

  const BigInt c = oracle_pack(xs, spec);
  std::vector<BigInt> with_bias(n), cleared(n), isolated(n), shifted(n);
  for (std::size_t k = 0; k < n; ++k) {
    cleared[k] = zero_low(c, r, block(k));
    with_bias[k] = radix_pow(r, spec.precision() - 1 + block(k)) + cleared[k];
  }
  for (std::size_t k = 0; k < n; ++k) {
    isolated[k] = k + 1 < n ? cleared[k] - cleared[k + 1] : cleared[k];
    shifted[k] = isolated[k] / radix_pow(r, block(k));
  }
  return {xs, {c}, with_bias, cleared, isolated, shifted};
}

BigInt domain_limit(const NetworkSpec& spec, InputDomain domain) {
  return radix_pow(spec.radix(), domain == InputDomain::LeadingZero ? spec.m - 1 : spec.m);
}

BigInt domain_size(const NetworkSpec& spec, InputDomain domain) {
  return mp::pow(domain_limit(spec, domain), static_cast<unsigned>(spec.n));
}

std::vector<BigInt> tuple_at(std::uint64_t index, const BigInt& limit, int n) {
  std::vector<BigInt> xs;
  xs.reserve(n);
  BigInt rest = index;
  for (int k = 0; k < n; ++k) {
    BigInt q, r;
    mp::divide_qr(rest, limit, q, r);
    xs.push_back(std::move(r));
    rest = std::move(q);
  }
  return xs;
}

TupleSampler::TupleSampler(std::uint64_t seed, BigInt limit, int n)
    : engine_(seed), limit_(std::move(limit)), n_(n) {
  const auto bits = static_cast<unsigned>(mp::msb(limit_)) + 1;
  words_ = (bits + 64 + 63) / 64;
}

std::vector<BigInt> TupleSampler::next() {
  std::vector<BigInt> xs;
  xs.reserve(n_);
  for (int k = 0; k < n_; ++k) {
    BigInt acc = 0;
    for (unsigned w = 0; w < words_; ++w) {
      acc <<= 64;
      acc += engine_();
    }
    xs.push_back(acc % limit_);
  }
  return xs;
}

namespace {

std::uint64_t checked_size(const NetworkSpec& spec, InputDomain domain,
                           std::uint64_t budget) {
  const BigInt size = domain_size(spec, domain);
  if (size > budget) throw BudgetExceeded(size.str(), budget);
  return size.convert_to<std::uint64_t>();
}

bool matches(const FloatValue& v, const BigInt& expected, const FloatFormat& fmt) {
  return is_integer(v, fmt) && to_integer(v, fmt) == expected;
}

// The code neuron equals the exact pack and its decoding reproduces the
// inputs. Encoding then decoding runs exactly the layers of one forward pass.
bool case_passes(const Executor& ex, const std::vector<BigInt>& inputs) {
  const Network& net = ex.network();
  const FloatFormat& fmt = net.spec.format;
  const FloatValue code = ex.encode(inputs);
  const auto outputs = ex.decode(code);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (!matches(outputs[k], inputs[k], fmt)) return false;
  }
  return matches(code, oracle_pack(inputs, net.spec), fmt);
}

}  // namespace

Counterexample make_counterexample(const std::vector<BigInt>& inputs,
                                   const std::vector<std::vector<FloatValue>>& trace,
                                   const NetworkSpec& spec) {
  Counterexample cx;
  cx.inputs = inputs;
  cx.expected = inputs;
  cx.actual = trace.back();
  const auto oracle = oracle_layers(inputs, spec);
  for (std::size_t layer = 0; layer < trace.size() && layer < oracle.size(); ++layer) {
    for (std::size_t k = 0; k < trace[layer].size(); ++k) {
      if (!matches(trace[layer][k], oracle[layer][k], spec.format)) {
        cx.diverging_layer = layer;
        cx.diverging_neuron = k;
        return cx;
      }
    }
  }
  return cx;
}

VerifyReport verify_exhaustive(const NetworkSpec& spec, InputDomain domain,
                               const VerifyOptions& options) {
  const std::uint64_t total = checked_size(spec, domain, options.budget);
  const Network net = synthesize(spec);
  const Executor ex(net);
  const BigInt limit = domain_limit(spec, domain);

  unsigned threads = options.threads ? options.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, total / 4096)));

  struct Partial {
    std::uint64_t failures = 0;
    std::uint64_t first = std::numeric_limits<std::uint64_t>::max();
  };
  std::vector<Partial> partials(threads);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = total * w / threads;
    const std::uint64_t end = total * (w + 1) / threads;
    Partial& p = partials[w];
    for (std::uint64_t i = begin; i < end; ++i) {
      if (!case_passes(ex, tuple_at(i, limit, spec.n))) {
        ++p.failures;
        p.first = std::min(p.first, i);
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  VerifyReport report{spec, domain, {VerifyMode::Kind::Exhaustive, 0, 0}, total, 0, {}};
  std::uint64_t first = std::numeric_limits<std::uint64_t>::max();
  for (const Partial& p : partials) {
    report.failures += p.failures;
    first = std::min(first, p.first);
  }
  if (report.failures > 0) {
    const auto inputs = tuple_at(first, limit, spec.n);
    report.first_counterexample = make_counterexample(inputs, ex.activations(inputs), spec);
  }
  return report;
}

VerifyReport verify_sampled(const NetworkSpec& spec, std::uint64_t count,
                            std::uint64_t seed, InputDomain domain) {
  if (count < 1) throw InvalidSpec("sample count must be at least 1");
  const Network net = synthesize(spec);
  const Executor ex(net);
  TupleSampler sampler(seed, domain_limit(spec, domain), spec.n);

  VerifyReport report{spec, domain, {VerifyMode::Kind::Sampled, count, seed}, count, 0, {}};
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto inputs = sampler.next();
    if (case_passes(ex, inputs)) continue;
    if (report.failures++ == 0) {
      report.first_counterexample = make_counterexample(inputs, ex.activations(inputs), spec);
    }
  }
  return report;
}

std::optional<DivergenceCase> rounding_divergence(const NetworkSpec& spec,
                                                  InputDomain domain,
                                                  std::uint64_t budget) {
  if (spec.radix() != 2) {
    throw InvalidSpec("rounding divergence search needs radix 2");
  }
  const std::uint64_t total = checked_size(spec, domain, budget);
  NetworkSpec trunc_spec = spec;
  trunc_spec.format = spec.format.with_rounding(Rounding::TruncateTowardZero);
  NetworkSpec rne_spec = spec;
  rne_spec.format = spec.format.with_rounding(Rounding::RoundNearestEven);
  const Network trunc_net = synthesize(trunc_spec);
  const Network rne_net = synthesize(rne_spec);
  const Executor trunc_ex(trunc_net);
  const Executor rne_ex(rne_net);
  const BigInt limit = domain_limit(spec, domain);

  for (std::uint64_t i = 0; i < total; ++i) {
    auto inputs = tuple_at(i, limit, spec.n);
    const auto a = trunc_ex.activations(inputs);
    const auto b = rne_ex.activations(inputs);
    for (std::size_t layer = 0; layer < a.size(); ++layer) {
      for (std::size_t k = 0; k < a[layer].size(); ++k) {
        if (a[layer][k] != b[layer][k]) {
          return DivergenceCase{std::move(inputs), layer,      k,
                                a[layer][k],       b[layer][k], a.back(),
                                b.back()};
        }
      }
    }
  }
  return std::nullopt;
}

std::string SweepRow::pass_fraction() const {
  if (cases == 0) return "0.0";
  const double f = static_cast<double>(passes) / static_cast<double>(cases);
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, f);
  std::string out(buf, end);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::vector<SweepRow> capacity_sweep(const SweepConfig& config) {
  if (config.n_values.empty() || config.m_values.empty() || config.precisions.empty() ||
      config.roundings.empty()) {
    throw InvalidSpec("sweep ranges must be nonempty");
  }
  std::vector<SweepRow> rows;
  for (int n : config.n_values) {
    for (int m : config.m_values) {
      for (int p : config.precisions) {
        for (Rounding rounding : config.roundings) {
          const NetworkSpec spec{n, m, FloatFormat(config.radix, p, rounding)};
          spec.validate();
          const bool exhaustive =
              domain_size(spec, InputDomain::LeadingZero) <= config.budget;
          const VerifyReport report =
              exhaustive
                  ? verify_exhaustive(spec, InputDomain::LeadingZero, {config.budget, 0})
                  : verify_sampled(spec, config.sample_count, config.seed,
                                   InputDomain::LeadingZero);
          rows.push_back({n, m, config.radix, p, rounding, spec.capacity_safe(),
                          report.mode.kind, report.total_cases,
                          report.total_cases - report.failures});
        }
      }
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : rows) {
    out << row.n << ',' << row.m << ',' << row.radix << ',' << row.precision << ','
        << rounding_name(row.rounding) << ',' << (row.capacity_safe ? "true" : "false")
        << ',' << method_name(row.method) << ',' << row.cases << ','
        << row.pass_fraction() << '\n';
  }
}

namespace {

json integers_to_json(const std::vector<BigInt>& xs) {
  json out = json::array();
  for (const BigInt& x : xs) out.push_back(x.str());
  return out;
}

json values_to_json(const std::vector<FloatValue>& vs, const FloatFormat& fmt) {
  json out = json::array();
  for (const FloatValue& v : vs) out.push_back(describe(v, fmt));
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

std::vector<std::string> integer_strings(const std::vector<BigInt>& xs) {
  std::vector<std::string> out;
  for (const BigInt& x : xs) out.push_back(x.str());
  return out;
}

}  // namespace

json to_json(const VerifyReport& report) {
  json mode = {{"kind", method_name(report.mode.kind)}};
  if (report.mode.kind == VerifyMode::Kind::Sampled) {
    mode["count"] = report.mode.count;
    mode["seed"] = report.mode.seed;
  }
  json cx = nullptr;
  if (report.first_counterexample) {
    const Counterexample& c = *report.first_counterexample;
    cx = {{"inputs", integers_to_json(c.inputs)},
          {"expected", integers_to_json(c.expected)},
          {"actual", values_to_json(c.actual, report.spec.format)},
          {"diverging_layer",
           c.diverging_layer ? json(layer_label(*c.diverging_layer)) : json(nullptr)},
          {"diverging_neuron",
           c.diverging_neuron ? json(*c.diverging_neuron + 1) : json(nullptr)}};
  }
  return {{"spec", to_json(report.spec)},
          {"capacity_safe", report.spec.capacity_safe()},
          {"domain", domain_name(report.domain)},
          {"mode", std::move(mode)},
          {"total_cases", report.total_cases},
          {"failures", report.failures},
          {"passed", report.passed()},
          {"first_counterexample", std::move(cx)}};
}

json to_json(const SweepRow& row) {
  return {{"n", row.n},
          {"m", row.m},
          {"radix", row.radix},
          {"precision", row.precision},
          {"rounding", rounding_name(row.rounding)},
          {"capacity_safe", row.capacity_safe},
          {"method", method_name(row.method)},
          {"cases", row.cases},
          {"passes", row.passes},
          {"pass_fraction", row.pass_fraction()}};
}

json to_json(const DivergenceCase& c, const FloatFormat& fmt) {
  return {{"inputs", integers_to_json(c.inputs)},
          {"layer", layer_label(c.layer)},
          {"neuron", c.neuron + 1},
          {"trunc", describe(c.truncated, fmt)},
          {"rne", describe(c.nearest_even, fmt)},
          {"trunc_outputs", values_to_json(c.truncated_outputs, fmt)},
          {"rne_outputs", values_to_json(c.nearest_even_outputs, fmt)}};
}

std::string summary_text(const VerifyReport& report) {
  const NetworkSpec& s = report.spec;
  std::ostringstream out;
  out << "spec: n=" << s.n << " m=" << s.m << " radix=" << s.radix()
      << " precision=" << s.precision() << " rounding=" << rounding_name(s.format.rounding())
      << " capacity-safe=" << (s.capacity_safe() ? "yes" : "no") << '\n';
  out << "domain: " << domain_name(report.domain) << "  mode: " << method_name(report.mode.kind);
  if (report.mode.kind == VerifyMode::Kind::Sampled) {
    out << " (count=" << report.mode.count << ", seed=" << report.mode.seed << ')';
  }
  out << '\n';
  out << (report.total_cases - report.failures) << '/' << report.total_cases << " pass";
  if (report.failures > 0) out << ", " << report.failures << " failing";
  out << '\n';
  if (report.first_counterexample) {
    const Counterexample& c = *report.first_counterexample;
    std::vector<std::string> actual;
    for (const FloatValue& v : c.actual) actual.push_back(describe(v, s.format));
    out << "first counterexample: inputs " << join(integer_strings(c.inputs))
        << " expected " << join(integer_strings(c.expected)) << " actual " << join(actual)
        << '\n';
    if (c.diverging_layer) {
      out << "diverging layer: " << layer_label(*c.diverging_layer) << " (k="
          << *c.diverging_neuron + 1 << ")\n";
    }
  }
  return out.str();
}

}  // namespace pae
