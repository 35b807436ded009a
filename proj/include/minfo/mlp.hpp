#pragma once

// The statistics network: a fully connected MLP with a scalar output, plus
// exact reverse-mode gradients.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "minfo/matrix.hpp"

namespace minfo {

enum class Activation { ReLU, ELU };

struct LayerShape {
  std::size_t in = 0;
  std::size_t out = 0;
  bool operator==(const LayerShape&) const = default;
};

// Flat storage for a stack of (weight[out x in], bias[out]) layers.
class ParamBlock {
 public:
  ParamBlock() = default;
  explicit ParamBlock(std::vector<LayerShape> shapes);

  std::size_t layer_count() const noexcept { return shapes_.size(); }
  const std::vector<LayerShape>& shapes() const noexcept { return shapes_; }
  const LayerShape& shape(std::size_t layer) const { return shapes_.at(layer); }

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  bool congruent(const ParamBlock& other) const noexcept { return shapes_ == other.shapes_; }

 private:
  std::vector<LayerShape> shapes_;
  std::vector<std::size_t> offsets_;  // weight offset of each layer; bias follows it
  std::vector<double> values_;
};

class MlpParams : public ParamBlock {
 public:
  MlpParams() = default;
  // Validates the dimension chain and the scalar output.
  MlpParams(std::vector<LayerShape> shapes, Activation activation);

  Activation activation() const noexcept { return activation_; }
  std::size_t input_dim() const noexcept { return shapes().front().in; }
  std::size_t output_dim() const noexcept { return shapes().back().out; }
  std::size_t parameter_count() const noexcept { return size(); }

 private:
  Activation activation_ = Activation::ReLU;
};

// d/dtheta of something, laid out like the MlpParams it was computed for.
class GradBuffer : public ParamBlock {
 public:
  GradBuffer() = default;
  explicit GradBuffer(const ParamBlock& like) : ParamBlock(like.shapes()) {}

  // Frobenius norm over all layers.
  double norm() const;
  void scale(double factor) noexcept;
  // this += factor * other
  void add_scaled(const GradBuffer& other, double factor);
};

MlpParams mlp_init(std::size_t input_dim, std::span<const std::size_t> hidden,
                   Activation activation, std::uint64_t seed);

// Activations retained for the backward pass. hidden[l] is the post-activation
// output of layer l; the final layer is linear and its output is `outputs`.
struct ForwardPass {
  std::vector<Matrix> hidden;
  std::vector<double> outputs;
};

ForwardPass mlp_forward_cached(const MlpParams& params, const Matrix& inputs);

// T(row) for every row of inputs.
std::vector<double> mlp_forward(const MlpParams& params, const Matrix& inputs);

// Gradient of sum_i cotangent[i] * T(inputs[i]) with respect to the parameters.
GradBuffer mlp_backward(const MlpParams& params, const Matrix& inputs,
                        std::span<const double> cotangent);
GradBuffer mlp_backward(const MlpParams& params, const Matrix& inputs, const ForwardPass& pass,
                        std::span<const double> cotangent);

}  // namespace minfo
