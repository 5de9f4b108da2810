#include "pae/netcore.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace pae {

void NetworkSpec::validate() const {
  if (n < 1) throw InvalidSpec("n must be at least 1, got " + std::to_string(n));
  if (m < 2) throw InvalidSpec("m must be at least 2, got " + std::to_string(m));
}

FloatValue to_float(const ScaledInteger& s, const FloatFormat& fmt) {
  return round_to_format(s.coefficient, s.exponent, fmt);
}

ScaledInteger to_scaled(const FloatValue& v) {
  if (v.is_zero()) return {};
  return {v.negative() ? BigInt(-v.significand()) : v.significand(), v.exponent()};
}

bool representable(const ScaledInteger& s, const FloatFormat& fmt) {
  const int digits = std::max(1, digit_count(s.coefficient, fmt.radix()));
  const FloatFormat exact(fmt.radix(), digits, Rounding::TruncateTowardZero);
  return to_float(s, fmt) == to_float(s, exact);
}

Layer::Layer(std::size_t in_size, std::size_t out_size)
    : in_size_(in_size),
      out_size_(out_size),
      weights_(in_size * out_size),
      biases_(out_size) {}

void Network::check_shapes() const {
  if (layers.empty()) throw InvalidSpec("network has no layers");
  for (std::size_t i = 1; i < layers.size(); ++i) {
    if (layers[i].in_size() != layers[i - 1].out_size()) {
      throw InvalidSpec("layer " + std::to_string(i) + " expects " +
                        std::to_string(layers[i].in_size()) + " inputs but layer " +
                        std::to_string(i - 1) + " produces " +
                        std::to_string(layers[i - 1].out_size()));
    }
  }
  if (code_layer_index > layers.size()) {
    throw InvalidSpec("code layer index " + std::to_string(code_layer_index) +
                      " is past the output layer");
  }
}

Network synthesize(const NetworkSpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.n);
  const std::int64_t m = spec.m;
  const std::int64_t top = spec.precision() - 1;
  // Place value of input block k (0-based).
  auto block = [m](std::size_t k) { return static_cast<std::int64_t>(k) * m; };

  Network net;
  net.kind = NetworkKind::PseudoAutoencoder;
  net.spec = spec;
  net.code_layer_index = 1;

  Layer pack(n, 1);
  for (std::size_t k = 0; k < n; ++k) pack.weight(0, k) = ScaledInteger::power(block(k));

  Layer add_bias(1, n);
  Layer remove_bias(n, n);
  Layer isolate(n, n);
  Layer shift(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    add_bias.weight(k, 0) = ScaledInteger::power(0);
    add_bias.bias(k) = ScaledInteger::power(top + block(k));

    remove_bias.weight(k, k) = ScaledInteger::power(0);
    remove_bias.bias(k) = ScaledInteger::power(top + block(k), true);

    isolate.weight(k, k) = ScaledInteger::power(0);
    if (k + 1 < n) isolate.weight(k, k + 1) = ScaledInteger::power(0, true);

    shift.weight(k, k) = ScaledInteger::power(-block(k));
  }

  net.layers = {std::move(pack), std::move(add_bias), std::move(remove_bias),
                std::move(isolate), std::move(shift)};
  return net;
}

Network synthesize_line_demo(const ScaledInteger& slope,
                             const ScaledInteger& intercept,
                             const FloatFormat& fmt) {
  if (!representable(slope, fmt)) {
    throw InvalidSpec("slope is not exactly representable in the format");
  }
  if (!representable(intercept, fmt)) {
    throw InvalidSpec("intercept is not exactly representable in the format");
  }
  Network net;
  net.kind = NetworkKind::LineDemo;
  net.spec = NetworkSpec{2, 2, fmt};
  net.code_layer_index = 1;

  // The code neuron keeps x and ignores y.
  Layer encoder(2, 1);
  encoder.weight(0, 0) = ScaledInteger::power(0);

  Layer decoder(1, 2);
  decoder.weight(0, 0) = ScaledInteger::power(0);
  decoder.weight(1, 0) = to_scaled(to_float(slope, fmt));
  decoder.bias(1) = to_scaled(to_float(intercept, fmt));

  net.layers = {std::move(encoder), std::move(decoder)};
  return net;
}

Executor::Executor(const Network& net) : net_(&net) {
  net.check_shapes();
  const FloatFormat& fmt = net.spec.format;
  layers_.reserve(net.layers.size());
  for (const Layer& layer : net.layers) {
    std::vector<Neuron> neurons(layer.out_size());
    for (std::size_t out = 0; out < layer.out_size(); ++out) {
      for (std::size_t in = 0; in < layer.in_size(); ++in) {
        const ScaledInteger& w = layer.weight(out, in);
        if (!w.is_zero()) neurons[out].terms.push_back({in, to_float(w, fmt)});
      }
      neurons[out].bias = to_float(layer.bias(out), fmt);
    }
    layers_.push_back(std::move(neurons));
  }
}

std::vector<FloatValue> Executor::run(std::size_t first, std::size_t last,
                                      std::vector<FloatValue> activations,
                                      std::vector<std::vector<FloatValue>>* values) const {
  const FloatFormat& fmt = net_->spec.format;
  if (values) values->push_back(activations);
  for (std::size_t li = first; li < last; ++li) {
    std::vector<FloatValue> next;
    next.reserve(layers_[li].size());
    for (const Neuron& neuron : layers_[li]) {
      FloatValue acc;
      for (const Term& term : neuron.terms) {
        acc = add(acc, mul(term.weight, activations[term.input], fmt), fmt);
      }
      if (!neuron.bias.is_zero()) acc = add(acc, neuron.bias, fmt);
      next.push_back(std::move(acc));
    }
    activations = std::move(next);
    if (values) values->push_back(activations);
  }
  return activations;
}

std::vector<FloatValue> Executor::embed(const std::vector<BigInt>& inputs) const {
  if (inputs.size() != net_->input_size()) {
    throw ShapeMismatch("expected " + std::to_string(net_->input_size()) +
                        " inputs, got " + std::to_string(inputs.size()));
  }
  std::vector<FloatValue> out;
  out.reserve(inputs.size());
  for (const BigInt& x : inputs) out.push_back(from_integer(x, net_->spec.format));
  return out;
}

std::vector<std::vector<FloatValue>> Executor::activations(
    const std::vector<BigInt>& inputs) const {
  std::vector<std::vector<FloatValue>> values;
  run(0, layers_.size(), embed(inputs), &values);
  return values;
}

ForwardResult Executor::forward(const std::vector<BigInt>& inputs) const {
  auto values = activations(inputs);
  std::vector<FloatValue> outputs = values.back();
  return {std::move(outputs), render_trace(net_->spec, std::move(values))};
}

FloatValue Executor::encode(const std::vector<BigInt>& inputs) const {
  auto code = run(0, net_->code_layer_index, embed(inputs));
  return code.at(0);
}

std::vector<FloatValue> Executor::decode(const FloatValue& code) const {
  return run(net_->code_layer_index, layers_.size(), {code});
}

ForwardResult forward(const Network& net, const std::vector<BigInt>& inputs) {
  return Executor(net).forward(inputs);
}

FloatValue encode(const Network& net, const std::vector<BigInt>& inputs) {
  return Executor(net).encode(inputs);
}

std::vector<FloatValue> decode(const Network& net, const FloatValue& code) {
  return Executor(net).decode(code);
}

std::string render_trace_value(const FloatValue& v, const FloatFormat& fmt, int group) {
  return is_integer(v, fmt) ? render_digits(v, fmt, group) : describe(v, fmt);
}

TraceReport render_trace(const NetworkSpec& spec,
                         std::vector<std::vector<FloatValue>> values) {
  TraceReport trace{spec, std::move(values), {}};
  trace.rendered.reserve(trace.values.size());
  for (const auto& layer : trace.values) {
    std::vector<std::string> row;
    row.reserve(layer.size());
    for (const FloatValue& v : layer) {
      row.push_back(render_trace_value(v, spec.format, spec.m));
    }
    trace.rendered.push_back(std::move(row));
  }
  return trace;
}

}  // namespace pae
