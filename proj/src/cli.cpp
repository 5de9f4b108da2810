#include "pae/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pae/network_io.hpp"
#include "pae/verify.hpp"

namespace pae::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flags shared by every command that builds a format or a spec.
struct SpecFlags {
  CLI::Option* n_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* z_opt = nullptr;
  CLI::Option* precision_opt = nullptr;
  int n = 0;
  int m = 0;
  int radix = 2;
  int z = 0;
  int precision = 0;
  std::string rounding = "trunc";

  bool any_spec_flag() const {
    return n_opt->count() || m_opt->count() || z_opt->count() || precision_opt->count();
  }
};

void add_format_flags(CLI::App* cmd, SpecFlags& f) {
  cmd->add_option("--radix", f.radix, "Radix of the float format and the inputs")
      ->capture_default_str();
  f.z_opt = cmd->add_option("--z", f.z, "Stored mantissa bits (radix 2 only); precision = z + 1");
  f.precision_opt = cmd->add_option("--precision", f.precision, "Significant radix digits P");
  f.z_opt->excludes(f.precision_opt);
  cmd->add_option("--rounding", f.rounding, "Rounding mode")
      ->check(CLI::IsMember({"trunc", "rne"}))
      ->capture_default_str();
}

void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
  f.n_opt = cmd->add_option("--n", f.n, "Number of inputs");
  f.m_opt = cmd->add_option("--m", f.m, "Digits per input, including the leading zero");
  add_format_flags(cmd, f);
}

void add_output_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
}

Rounding rounding_from(const std::string& text) {
  auto r = parse_rounding(text);
  if (!r) throw UsageError("unknown rounding mode '" + text + "'");
  return *r;
}

// Default is binary32's 23 stored bits for radix 2; other radices must say P.
int resolve_precision(const SpecFlags& f) {
  if (f.z_opt->count()) {
    if (f.radix != 2) throw UsageError("--z is only valid with --radix 2; use --precision");
    if (f.z < 0) throw UsageError("--z must be nonnegative");
    return f.z + 1;
  }
  if (f.precision_opt->count()) return f.precision;
  if (f.radix == 2) return kBinary32MantissaBits + 1;
  throw UsageError("--precision is required when --radix is not 2");
}

FloatFormat format_from(const SpecFlags& f) {
  return FloatFormat(f.radix, resolve_precision(f), rounding_from(f.rounding));
}

NetworkSpec spec_from(const SpecFlags& f) {
  if (!f.n_opt->count() || !f.m_opt->count()) throw UsageError("--n and --m are required");
  NetworkSpec spec{f.n, f.m, format_from(f)};
  spec.validate();
  return spec;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(trim(part));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

BigInt parse_integer(const std::string& text, bool allow_negative) {
  const std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  if (text.size() == start || text.find_first_not_of("0123456789", start) != std::string::npos) {
    throw UsageError("'" + text + "' is not a decimal integer");
  }
  BigInt value(text.substr(start));
  if (text[0] == '-') value = -value;
  if (value < 0 && !allow_negative) throw UsageError("inputs must be nonnegative");
  return value;
}

std::vector<BigInt> parse_integer_list(const std::string& text, bool allow_negative) {
  std::vector<BigInt> out;
  for (const std::string& part : split(text, ',')) out.push_back(parse_integer(part, allow_negative));
  return out;
}

int parse_small_int(const std::string& text) {
  const BigInt v = parse_integer(text, true);
  if (v > 1'000'000 || v < -1'000'000) throw UsageError("'" + text + "' is out of range");
  return v.convert_to<int>();
}

// "1..4", "9,23" or a mix such as "1..3,6".
std::vector<int> parse_int_ranges(const std::string& text, const std::string& flag) {
  std::vector<int> values;
  try {
    for (const std::string& item : split(text, ',')) {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        values.push_back(parse_small_int(item));
        continue;
      }
      const int lo = parse_small_int(trim(item.substr(0, dots)));
      const int hi = parse_small_int(trim(item.substr(dots + 2)));
      if (lo > hi) throw UsageError("empty range");
      for (int v = lo; v <= hi; ++v) values.push_back(v);
    }
  } catch (const UsageError& e) {
    throw UsageError("malformed " + flag + " value '" + text + "': " + e.what());
  }
  if (values.empty()) throw UsageError("malformed " + flag + " value '" + text + "'");
  return values;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> describe_all(const std::vector<FloatValue>& vs, const FloatFormat& fmt) {
  std::vector<std::string> out;
  for (const FloatValue& v : vs) out.push_back(describe(v, fmt));
  return out;
}

std::vector<std::string> integer_strings(const std::vector<BigInt>& xs) {
  std::vector<std::string> out;
  for (const BigInt& x : xs) out.push_back(x.str());
  return out;
}

std::string format_line(const NetworkSpec& spec) {
  std::ostringstream out;
  out << "radix=" << spec.radix() << " precision=" << spec.precision();
  if (spec.radix() == 2) out << " (z=" << spec.precision() - 1 << ")";
  out << " rounding=" << rounding_name(spec.format.rounding());
  return out.str();
}

std::string spec_line(const NetworkSpec& spec) {
  return "n=" + std::to_string(spec.n) + " m=" + std::to_string(spec.m) + " " + format_line(spec);
}

std::string capacity_line(const NetworkSpec& spec) {
  const std::int64_t used = static_cast<std::int64_t>(spec.n) * spec.m;
  return spec.capacity_safe()
             ? "capacity-safe: yes (" + std::to_string(used) + " ≤ " +
                   std::to_string(spec.precision()) + ")"
             : "capacity-safe: no (" + std::to_string(used) + " > " +
                   std::to_string(spec.precision()) + ")";
}

std::vector<std::string> spec_warnings(const NetworkSpec& spec) {
  std::vector<std::string> out;
  if (spec.m > spec.precision()) {
    out.push_back("m=" + std::to_string(spec.m) + " exceeds the precision P=" +
                  std::to_string(spec.precision()) + "; single inputs are not held exactly");
  }
  if (!spec.capacity_safe()) {
    out.push_back("n*m exceeds the precision; reconstruction is not guaranteed");
  }
  return out;
}

std::string scaled_text(const ScaledInteger& s, int radix) {
  const std::string r = std::to_string(radix);
  if (s.exponent == 0) return s.coefficient.str();
  const std::string power = r + "^" + std::to_string(s.exponent);
  if (s.coefficient == 1) return power;
  if (s.coefficient == -1) return "-" + power;
  return s.coefficient.str() + "*" + power;
}

std::string kind_name(NetworkKind kind) {
  return kind == NetworkKind::LineDemo ? "line-demo" : "pseudo-autoencoder";
}

std::vector<std::string> layer_captions(const Network& net) {
  if (net.kind == NetworkKind::LineDemo) {
    return {"inputs (x, y)", "code: x", "outputs (x, a*x + b)"};
  }
  const std::string r = std::to_string(net.spec.radix());
  return {"inputs",
          "code: inputs packed with w=" + r + "^((k-1)m)",
          "add bias " + r + "^(P-1+(k-1)m), truncating the low blocks",
          "subtract the same bias",
          "isolate: neuron k minus neuron k+1",
          "shift right with w=" + r + "^(-(k-1)m)"};
}

// Non-unit weights and nonzero bias of one neuron.
std::string neuron_annotation(const Layer& layer, std::size_t out, int radix) {
  std::vector<std::string> weights;
  bool any_non_unit = false;
  for (std::size_t in = 0; in < layer.in_size(); ++in) {
    const ScaledInteger& w = layer.weight(out, in);
    if (w.is_zero()) continue;
    weights.push_back(scaled_text(w, radix));
    if (!(w.exponent == 0 && (w.coefficient == 1 || w.coefficient == -1))) any_non_unit = true;
  }
  std::string text;
  if (any_non_unit) text += "w=" + join(weights);
  if (!layer.bias(out).is_zero()) {
    if (!text.empty()) text += "  ";
    text += "b=" + scaled_text(layer.bias(out), radix);
  }
  return text;
}

void write_trace_text(std::ostream& out, const Network& net, const ForwardResult& result) {
  const TraceReport& trace = result.trace;
  const auto captions = layer_captions(net);
  for (std::size_t li = 0; li < trace.rendered.size(); ++li) {
    out << layer_label(li) << "  " << (li < captions.size() ? captions[li] : "") << '\n';
    const auto& row = trace.rendered[li];
    std::size_t width = 0;
    for (const std::string& s : row) width = std::max(width, s.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::string label = row.size() == 1 && li > 0 ? "c" : "k=" + std::to_string(k + 1);
      std::string line = "  " + label + std::string(5 - std::min<std::size_t>(label.size(), 4), ' ') +
                         std::string(width - row[k].size(), ' ') + row[k];
      if (li > 0) {
        const std::string note = neuron_annotation(net.layers[li - 1], k, net.spec.radix());
        if (!note.empty()) line += "   " + note;
      }
      out << line << '\n';
    }
  }
}

bool outputs_match(const std::vector<FloatValue>& outputs, const std::vector<BigInt>& expected,
                   const FloatFormat& fmt) {
  if (outputs.size() != expected.size()) return false;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    if (!is_integer(outputs[k], fmt) || to_integer(outputs[k], fmt) != expected[k]) return false;
  }
  return true;
}

json trace_json(const Network& net, const ForwardResult& result) {
  json layers = json::array();
  const auto& fmt = net.spec.format;
  for (std::size_t li = 0; li < result.trace.values.size(); ++li) {
    layers.push_back({{"label", layer_label(li)},
                      {"values", describe_all(result.trace.values[li], fmt)},
                      {"digits", result.trace.rendered[li]}});
  }
  return layers;
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
  SpecFlags spec;
  std::string out_path;
  std::string format = "text";
};

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  const NetworkSpec spec = spec_from(a.spec);
  const Network net = synthesize(spec);
  if (!a.out_path.empty()) save_network(net, a.out_path);

  std::vector<std::string> shapes;
  for (const Layer& l : net.layers) {
    shapes.push_back(std::to_string(l.in_size()) + "->" + std::to_string(l.out_size()));
  }
  const auto warnings = spec_warnings(spec);

  if (a.format == "structured") {
    json shape_json = json::array();
    for (const Layer& l : net.layers) shape_json.push_back({l.in_size(), l.out_size()});
    json doc = {{"command", "synth"},
                {"spec", to_json(spec)},
                {"layer_shapes", shape_json},
                {"capacity_safe", spec.capacity_safe()},
                {"warnings", warnings},
                {"out", a.out_path.empty() ? json(nullptr) : json(a.out_path)}};
    if (a.out_path.empty()) doc["network"] = to_json(net);
    out << doc.dump(2) << '\n';
    return kExitOk;
  }

  // Without --out the document itself owns stdout.
  std::ostream& summary = a.out_path.empty() ? err : out;
  if (a.out_path.empty()) out << serialize_network(net);
  summary << "synthesized pseudo-autoencoder: " << spec_line(spec) << '\n'
          << "layers: " << join(shapes, ", ") << '\n'
          << capacity_line(spec) << '\n';
  for (const std::string& w : warnings) summary << "warning: " << w << '\n';
  if (!a.out_path.empty()) summary << "wrote " << a.out_path << '\n';
  return kExitOk;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  SpecFlags spec;
  std::string net_path;
  std::string inputs;
  bool trace = false;
  std::string format = "text";
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  Network net;
  if (!a.net_path.empty()) {
    if (a.spec.any_spec_flag()) throw UsageError("--net cannot be combined with spec flags");
    net = load_network(a.net_path);
  } else {
    net = synthesize(spec_from(a.spec));
  }
  const auto inputs = parse_integer_list(a.inputs, net.kind == NetworkKind::LineDemo);
  const ForwardResult result = forward(net, inputs);
  const FloatFormat& fmt = net.spec.format;
  const bool exact = outputs_match(result.outputs, inputs, fmt);

  if (a.format == "structured") {
    json doc = {{"command", "run"},
                {"kind", kind_name(net.kind)},
                {"spec", to_json(net.spec)},
                {"capacity_safe", net.spec.capacity_safe()},
                {"inputs", integer_strings(inputs)},
                {"outputs", describe_all(result.outputs, fmt)},
                {"exact", exact}};
    if (a.trace) doc["layers"] = trace_json(net, result);
    out << doc.dump(2) << '\n';
    return exact ? kExitOk : kExitFailure;
  }

  out << kind_name(net.kind) << ": " << spec_line(net.spec) << '\n';
  if (net.kind == NetworkKind::PseudoAutoencoder) out << capacity_line(net.spec) << '\n';
  if (a.trace) {
    out << '\n';
    write_trace_text(out, net, result);
    out << '\n';
  } else {
    const auto& code = result.trace.rendered.at(net.code_layer_index);
    out << "code: " << code.at(0) << " ("
        << describe(result.trace.values.at(net.code_layer_index).at(0), fmt) << ")\n";
  }
  out << "outputs: " << join(describe_all(result.outputs, fmt)) << '\n';
  if (exact) {
    out << "reconstruction: exact\n";
  } else {
    out << "reconstruction: MISMATCH (inputs " << join(integer_strings(inputs)) << ")\n";
  }
  return exact ? kExitOk : kExitFailure;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  SpecFlags spec;
  std::string net_path;
  std::string domain = "leading-zero";
  std::string mode = "exhaustive";
  std::uint64_t count = 10'000;
  std::uint64_t seed = 42;
  std::uint64_t budget = kDefaultCaseBudget;
  unsigned threads = 0;
  bool divergence = false;
  std::string format = "text";
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  NetworkSpec spec;
  if (!a.net_path.empty()) {
    if (a.spec.any_spec_flag()) throw UsageError("--net cannot be combined with spec flags");
    const Network net = load_network(a.net_path);
    if (net.kind != NetworkKind::PseudoAutoencoder) {
      throw UsageError("verify needs a pseudo-autoencoder network");
    }
    spec = net.spec;
  } else {
    spec = spec_from(a.spec);
  }
  const InputDomain domain = *parse_domain(a.domain);

  if (a.divergence) {
    const auto found = rounding_divergence(spec, domain, a.budget);
    if (a.format == "structured") {
      json doc = {{"command", "verify"},
                  {"search", "rounding-divergence"},
                  {"spec", to_json(spec)},
                  {"domain", domain_name(domain)},
                  {"divergence", found ? to_json(*found, spec.format) : json(nullptr)}};
      out << doc.dump(2) << '\n';
    } else {
      out << "rounding divergence search (trunc vs rne): n=" << spec.n << " m=" << spec.m
          << " precision=" << spec.precision() << " domain=" << domain_name(domain) << '\n';
      if (!found) {
        out << "no divergence\n";
      } else {
        const FloatFormat& fmt = spec.format;
        out << "first divergence: inputs " << join(integer_strings(found->inputs)) << " at "
            << layer_label(found->layer) << " (k=" << found->neuron + 1
            << "): trunc " << describe(found->truncated, fmt) << ", rne "
            << describe(found->nearest_even, fmt) << '\n'
            << "outputs: trunc " << join(describe_all(found->truncated_outputs, fmt))
            << "; rne " << join(describe_all(found->nearest_even_outputs, fmt)) << '\n';
      }
    }
    return found ? kExitFailure : kExitOk;
  }

  VerifyReport report;
  if (a.mode == "exhaustive") {
    report = verify_exhaustive(spec, domain, {a.budget, a.threads});
  } else {
    if (a.count < 1) throw UsageError("--count must be at least 1");
    report = verify_sampled(spec, a.count, a.seed, domain);
  }
  if (a.format == "structured") {
    json doc = to_json(report);
    doc["command"] = "verify";
    out << doc.dump(2) << '\n';
  } else {
    out << summary_text(report);
  }
  return report.passed() ? kExitOk : kExitFailure;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string n_range;
  std::string m_range;
  std::string z_list;
  std::string precision_list;
  std::string roundings = "trunc";
  int radix = 2;
  std::uint64_t budget = kDefaultCaseBudget;
  std::uint64_t count = 100'000;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "text";
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  SweepConfig config;
  config.radix = a.radix;
  config.n_values = parse_int_ranges(a.n_range, "--n");
  config.m_values = parse_int_ranges(a.m_range, "--m");
  if (!a.z_list.empty()) {
    if (a.radix != 2) throw UsageError("--z is only valid with --radix 2; use --precision");
    for (int z : parse_int_ranges(a.z_list, "--z")) config.precisions.push_back(z + 1);
  } else if (!a.precision_list.empty()) {
    config.precisions = parse_int_ranges(a.precision_list, "--precision");
  } else if (a.radix == 2) {
    config.precisions = {kBinary32MantissaBits + 1};
  } else {
    throw UsageError("--precision is required when --radix is not 2");
  }
  for (const std::string& r : split(a.roundings, ',')) config.roundings.push_back(rounding_from(r));
  config.budget = a.budget;
  config.sample_count = a.count;
  config.seed = a.seed;
  if (config.sample_count < 1) throw UsageError("--count must be at least 1");

  const auto rows = capacity_sweep(config);

  std::ostringstream body;
  if (a.format == "structured") {
    json doc = {{"command", "sweep"}, {"rows", json::array()}};
    for (const SweepRow& row : rows) doc["rows"].push_back(to_json(row));
    body << doc.dump(2) << '\n';
  } else {
    write_sweep_csv(rows, body);
  }
  if (a.out_path.empty()) {
    out << body.str();
  } else {
    std::ofstream file(a.out_path, std::ios::binary);
    if (!file) throw Error("cannot open " + a.out_path + " for writing");
    file << body.str();
  }
  return kExitOk;
}

// ---- demo-line -------------------------------------------------------------

struct DemoArgs {
  SpecFlags spec;
  std::string slope = "2";
  std::string intercept = "5";
  std::string point;
  std::string format = "text";
};

int cmd_demo_line(const DemoArgs& a, std::ostream& out) {
  const FloatFormat fmt = format_from(a.spec);
  const ScaledInteger slope{parse_integer(a.slope, true), 0};
  const ScaledInteger intercept{parse_integer(a.intercept, true), 0};
  const auto point = parse_integer_list(a.point, true);
  if (point.size() != 2) throw UsageError("--point takes exactly two values, x,y");

  const Network net = synthesize_line_demo(slope, intercept, fmt);
  const ForwardResult result = forward(net, point);
  const bool exact = outputs_match(result.outputs, point, fmt);
  const auto outputs = describe_all(result.outputs, fmt);

  if (a.format == "structured") {
    json doc = {{"command", "demo-line"},
                {"a", a.slope},
                {"b", a.intercept},
                {"point", integer_strings(point)},
                {"reconstruction", outputs},
                {"code", describe(result.trace.values.at(1).at(0), fmt)},
                {"exact", exact}};
    out << doc.dump(2) << '\n';
  } else {
    out << "line y = " << slope.coefficient << "*x + " << intercept.coefficient << '\n'
        << "(" << join(integer_strings(point)) << ") → (" << join(outputs) << ")\n";
    if (!exact) out << "reconstruction differs from the input point (not on the line)\n";
  }
  return exact ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesize, run and verify the digit-packing pseudo-autoencoder", "pae"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Synthesize a network and write its exact weights");
  add_spec_flags(synth, synth_args.spec);
  synth->add_option("--out", synth_args.out_path, "Network file to write (default: stdout)");
  add_output_format(synth, synth_args.format);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run one input tuple through the network");
  add_spec_flags(run_cmd, run_args.spec);
  run_cmd->add_option("--net", run_args.net_path, "Network file (instead of spec flags)");
  run_cmd->add_option("--inputs", run_args.inputs, "Comma-separated decimal inputs")->required();
  run_cmd->add_flag("--trace", run_args.trace, "Print every layer's neuron values");
  add_output_format(run_cmd, run_args.format);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Check reconstruction over an input domain");
  add_spec_flags(verify, verify_args.spec);
  verify->add_option("--net", verify_args.net_path, "Take the spec from a network file");
  verify->add_option("--domain", verify_args.domain, "Input domain")
      ->check(CLI::IsMember({"leading-zero", "full"}))
      ->capture_default_str();
  verify->add_option("--mode", verify_args.mode, "Enumeration mode")
      ->check(CLI::IsMember({"exhaustive", "sampled"}))
      ->capture_default_str();
  verify->add_option("--count", verify_args.count, "Sampled cases")->capture_default_str();
  verify->add_option("--seed", verify_args.seed, "Sampler seed")->capture_default_str();
  verify->add_option("--budget", verify_args.budget, "Maximum exhaustive cases")
      ->capture_default_str();
  verify->add_option("--threads", verify_args.threads, "Worker threads (0 = all cores)");
  verify->add_flag("--rounding-divergence", verify_args.divergence,
                   "Search for the first tuple where trunc and rne traces differ");
  add_output_format(verify, verify_args.format);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Capacity sweep over n, m, precision and rounding");
  sweep->add_option("--n", sweep_args.n_range, "n values, e.g. 1..4")->required();
  sweep->add_option("--m", sweep_args.m_range, "m values, e.g. 2..6")->required();
  auto* sweep_z = sweep->add_option("--z", sweep_args.z_list, "Mantissa bits, e.g. 9,23");
  auto* sweep_p = sweep->add_option("--precision", sweep_args.precision_list, "Significant digits");
  sweep_z->excludes(sweep_p);
  sweep->add_option("--rounding", sweep_args.roundings, "Rounding modes, e.g. trunc,rne")
      ->capture_default_str();
  sweep->add_option("--radix", sweep_args.radix, "Radix")->capture_default_str();
  sweep->add_option("--budget", sweep_args.budget, "Exhaustive case budget per cell")
      ->capture_default_str();
  sweep->add_option("--count", sweep_args.count, "Sampled cases for cells over budget")
      ->capture_default_str();
  sweep->add_option("--seed", sweep_args.seed, "Sampler seed")->capture_default_str();
  sweep->add_option("--out", sweep_args.out_path, "CSV file to write (default: stdout)");
  add_output_format(sweep, sweep_args.format);

  DemoArgs demo_args;
  auto* demo = app.add_subcommand("demo-line", "Line autoencoder: rebuild (x, a*x+b) from x");
  add_format_flags(demo, demo_args.spec);
  // The demo has no n/m; keep the counters valid for any_spec_flag().
  demo_args.spec.n_opt = demo_args.spec.z_opt;
  demo_args.spec.m_opt = demo_args.spec.z_opt;
  demo->add_option("--a", demo_args.slope, "Slope")->capture_default_str();
  demo->add_option("--b", demo_args.intercept, "Intercept")->capture_default_str();
  demo->add_option("--point", demo_args.point, "Point x,y")->required();
  add_output_format(demo, demo_args.format);

  std::vector<const char*> argv{"pae"};
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_args, out, err);
    if (run_cmd->parsed()) return cmd_run(run_args, out);
    if (verify->parsed()) return cmd_verify(verify_args, out);
    if (sweep->parsed()) return cmd_sweep(sweep_args, out);
    if (demo->parsed()) return cmd_demo_line(demo_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "; use --mode sampled or raise --budget\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace pae::cli
