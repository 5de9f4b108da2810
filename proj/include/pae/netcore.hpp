#pragma once

// The synthesized pseudo-autoencoder: n inputs are packed into one code
// neuron by radix-power weights, then separated again by adding and
// subtracting large radix-power biases so that the finite significand
// drops the low-order input blocks.
//
// Layer sizes are n -> 1 -> n -> n -> n -> n with identity activations.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pae/softfloat.hpp"

namespace pae {

struct NetworkSpec {
  int n = 1;
  int m = 2;
  FloatFormat format = FloatFormat::binary(kBinary32MantissaBits,
                                           Rounding::TruncateTowardZero);

  int radix() const { return format.radix(); }
  int precision() const { return format.precision(); }

  // n*m <= P: the packed code and every intermediate fit the significand.
  bool capacity_safe() const {
    return static_cast<std::int64_t>(n) * m <= format.precision();
  }

  // Throws InvalidSpec when n < 1 or m < 2.
  void validate() const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

// coefficient * radix^exponent, the exact storage form of weights and biases.
// Synthesized entries are canonical (coefficient not divisible by the radix,
// zero stored as {0, 0}), so field equality is value equality among them.
struct ScaledInteger {
  BigInt coefficient = 0;
  std::int64_t exponent = 0;

  static ScaledInteger power(std::int64_t e, bool negative = false) {
    return {negative ? BigInt(-1) : BigInt(1), e};
  }

  bool is_zero() const { return coefficient == 0; }

  friend bool operator==(const ScaledInteger&, const ScaledInteger&) = default;
};

// Rounds per the format; exact whenever the coefficient fits P digits.
FloatValue to_float(const ScaledInteger& s, const FloatFormat& fmt);
ScaledInteger to_scaled(const FloatValue& v);
// True when to_float is exact.
bool representable(const ScaledInteger& s, const FloatFormat& fmt);

enum class Activation { Identity };

class Layer {
 public:
  Layer(std::size_t in_size, std::size_t out_size);

  std::size_t in_size() const { return in_size_; }
  std::size_t out_size() const { return out_size_; }
  Activation activation() const { return Activation::Identity; }

  ScaledInteger& weight(std::size_t out, std::size_t in) {
    return weights_.at(out * in_size_ + in);
  }
  const ScaledInteger& weight(std::size_t out, std::size_t in) const {
    return weights_.at(out * in_size_ + in);
  }
  ScaledInteger& bias(std::size_t out) { return biases_.at(out); }
  const ScaledInteger& bias(std::size_t out) const { return biases_.at(out); }

  friend bool operator==(const Layer&, const Layer&) = default;

 private:
  std::size_t in_size_;
  std::size_t out_size_;
  std::vector<ScaledInteger> weights_;  // row-major, out x in
  std::vector<ScaledInteger> biases_;
};

enum class NetworkKind { PseudoAutoencoder, LineDemo };

struct Network {
  NetworkKind kind = NetworkKind::PseudoAutoencoder;
  NetworkSpec spec;
  std::vector<Layer> layers;
  // Index into the activation sequence (0 = input layer) of the bottleneck.
  std::size_t code_layer_index = 1;

  std::size_t input_size() const { return layers.empty() ? 0 : layers.front().in_size(); }

  // Throws InvalidSpec if consecutive layer shapes do not compose or the
  // code layer index is out of range.
  void check_shapes() const;

  friend bool operator==(const Network&, const Network&) = default;
};

struct TraceReport {
  NetworkSpec spec;
  // values[0] are the inputs (L1), values[i] the outputs of layers[i-1].
  std::vector<std::vector<FloatValue>> values;
  // Same shape as `values`; digit strings grouped by m, or describe() text
  // for values that are not integers.
  std::vector<std::vector<std::string>> rendered;
};

struct ForwardResult {
  std::vector<FloatValue> outputs;
  TraceReport trace;
};

// Throws InvalidSpec for n < 1 or m < 2. Capacity-unsafe specs are accepted.
Network synthesize(const NetworkSpec& spec);

// 2 -> 1 -> 2 network that keeps x in its single code neuron and rebuilds
// (x, slope*x + intercept). Throws InvalidSpec if either coefficient is not
// exactly representable in `fmt`.
Network synthesize_line_demo(const ScaledInteger& slope,
                             const ScaledInteger& intercept,
                             const FloatFormat& fmt);

// Throws ShapeMismatch when inputs.size() differs from the input layer.
ForwardResult forward(const Network& net, const std::vector<BigInt>& inputs);
FloatValue encode(const Network& net, const std::vector<BigInt>& inputs);
std::vector<FloatValue> decode(const Network& net, const FloatValue& code);

// Weights and biases converted once against the network's format, with zero
// weights dropped (adding an exact zero never changes a partial sum). Each
// neuron accumulates its terms in ascending input index, one rounded multiply
// and one rounded add per term, then adds its bias.
class Executor {
 public:
  explicit Executor(const Network& net);

  const Network& network() const { return *net_; }

  // Runs layers [first, last). When `values` is given, the activations of
  // every layer boundary crossed (including the starting one) are appended.
  std::vector<FloatValue> run(std::size_t first, std::size_t last,
                              std::vector<FloatValue> activations,
                              std::vector<std::vector<FloatValue>>* values = nullptr) const;

  std::vector<FloatValue> embed(const std::vector<BigInt>& inputs) const;
  ForwardResult forward(const std::vector<BigInt>& inputs) const;
  // All activations, L1 through the output layer, without rendering.
  std::vector<std::vector<FloatValue>> activations(const std::vector<BigInt>& inputs) const;
  FloatValue encode(const std::vector<BigInt>& inputs) const;
  std::vector<FloatValue> decode(const FloatValue& code) const;

 private:
  struct Term {
    std::size_t input;
    FloatValue weight;
  };
  struct Neuron {
    std::vector<Term> terms;
    FloatValue bias;
  };

  const Network* net_;
  std::vector<std::vector<Neuron>> layers_;
};

TraceReport render_trace(const NetworkSpec& spec,
                         std::vector<std::vector<FloatValue>> values);

std::string render_trace_value(const FloatValue& v, const FloatFormat& fmt, int group);

}  // namespace pae
