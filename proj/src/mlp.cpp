#include "minfo/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minfo/errors.hpp"
#include "minfo/kernels.hpp"
#include "minfo/rng.hpp"

namespace minfo {

ParamBlock::ParamBlock(std::vector<LayerShape> shapes) : shapes_(std::move(shapes)) {
  std::size_t total = 0;
  offsets_.reserve(shapes_.size());
  for (const auto& s : shapes_) {
    offsets_.push_back(total);
    total += s.out * s.in + s.out;
  }
  values_.assign(total, 0.0);
}

std::span<double> ParamBlock::weights(std::size_t layer) {
  const auto& s = shapes_.at(layer);
  return {values_.data() + offsets_[layer], s.out * s.in};
}

std::span<const double> ParamBlock::weights(std::size_t layer) const {
  const auto& s = shapes_.at(layer);
  return {values_.data() + offsets_[layer], s.out * s.in};
}

std::span<double> ParamBlock::bias(std::size_t layer) {
  const auto& s = shapes_.at(layer);
  return {values_.data() + offsets_[layer] + s.out * s.in, s.out};
}

std::span<const double> ParamBlock::bias(std::size_t layer) const {
  const auto& s = shapes_.at(layer);
  return {values_.data() + offsets_[layer] + s.out * s.in, s.out};
}

MlpParams::MlpParams(std::vector<LayerShape> shapes, Activation activation)
    : ParamBlock(std::move(shapes)), activation_(activation) {
  const auto& s = this->shapes();
  if (s.empty()) throw ShapeError("network needs at least one layer");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].in == 0 || s[i].out == 0) {
      throw ShapeError("layer " + std::to_string(i) + " has zero width");
    }
    if (i + 1 < s.size() && s[i].out != s[i + 1].in) {
      throw ShapeError("layer " + std::to_string(i) + " output " + std::to_string(s[i].out) +
                       " does not feed layer input " + std::to_string(s[i + 1].in));
    }
  }
  if (s.back().out != 1) throw ShapeError("statistics network must have a scalar output");
}

double GradBuffer::norm() const {
  const auto v = values();
  return std::sqrt(kernels::active().sum_squares(v.data(), v.size()));
}

void GradBuffer::scale(double factor) noexcept {
  for (double& g : values()) g *= factor;
}

void GradBuffer::add_scaled(const GradBuffer& other, double factor) {
  if (!congruent(other)) throw ShapeError("gradient buffers are not shape-congruent");
  auto dst = values();
  const auto src = other.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
}

MlpParams mlp_init(std::size_t input_dim, std::span<const std::size_t> hidden,
                   Activation activation, std::uint64_t seed) {
  if (input_dim == 0) throw ConfigError("input_dim", "must be at least 1");
  if (hidden.empty()) throw ConfigError("hidden", "at least one hidden layer is required");
  if (std::ranges::find(hidden, std::size_t{0}) != hidden.end()) {
    throw ConfigError("hidden", "zero-width layer");
  }

  std::vector<LayerShape> shapes;
  std::size_t in = input_dim;
  for (const std::size_t width : hidden) {
    shapes.push_back({in, width});
    in = width;
  }
  shapes.push_back({in, 1});

  MlpParams params(std::move(shapes), activation);
  Rng rng(seed);
  // Xavier-uniform weights, zero biases.
  for (std::size_t l = 0; l < params.layer_count(); ++l) {
    const auto& s = params.shape(l);
    const double limit = std::sqrt(6.0 / static_cast<double>(s.in + s.out));
    for (double& w : params.weights(l)) w = rng.uniform(-limit, limit);
  }
  return params;
}

namespace {

void activate(Activation act, std::span<double> v) {
  if (act == Activation::ReLU) {
    for (double& x : v) x = x > 0.0 ? x : 0.0;
  } else {
    for (double& x : v) x = x > 0.0 ? x : std::expm1(x);
  }
}

// delta *= act'(pre), expressed through the post-activation value.
void activation_backward(Activation act, std::span<const double> post, std::span<double> delta) {
  if (act == Activation::ReLU) {
    for (std::size_t i = 0; i < delta.size(); ++i) {
      if (post[i] <= 0.0) delta[i] = 0.0;
    }
  } else {
    for (std::size_t i = 0; i < delta.size(); ++i) {
      if (post[i] <= 0.0) delta[i] *= post[i] + 1.0;
    }
  }
}

void check_input(const MlpParams& params, const Matrix& inputs) {
  if (params.layer_count() == 0) throw ShapeError("uninitialized network");
  if (inputs.cols() != params.input_dim()) {
    throw ShapeError("network expects " + std::to_string(params.input_dim()) +
                     " input columns, got " + std::to_string(inputs.cols()));
  }
}

}  // namespace

ForwardPass mlp_forward_cached(const MlpParams& params, const Matrix& inputs) {
  check_input(params, inputs);
  const auto& k = kernels::active();
  const std::size_t rows = inputs.rows();
  const std::size_t n_layers = params.layer_count();

  ForwardPass pass;
  pass.hidden.reserve(n_layers - 1);
  const Matrix* current = &inputs;
  for (std::size_t l = 0; l + 1 < n_layers; ++l) {
    const auto& s = params.shape(l);
    Matrix out(rows, s.out);
    k.affine_forward(current->data().data(), rows, s.in, params.weights(l).data(),
                     params.bias(l).data(), s.out, out.data().data());
    activate(params.activation(), out.data());
    pass.hidden.push_back(std::move(out));
    current = &pass.hidden.back();
  }
  const auto& last = params.shape(n_layers - 1);
  pass.outputs.resize(rows);
  k.affine_forward(current->data().data(), rows, last.in, params.weights(n_layers - 1).data(),
                   params.bias(n_layers - 1).data(), 1, pass.outputs.data());
  if (!all_finite(pass.outputs)) throw NumericError("statistics network produced a non-finite output");
  return pass;
}

std::vector<double> mlp_forward(const MlpParams& params, const Matrix& inputs) {
  return mlp_forward_cached(params, inputs).outputs;
}

GradBuffer mlp_backward(const MlpParams& params, const Matrix& inputs,
                        std::span<const double> cotangent) {
  return mlp_backward(params, inputs, mlp_forward_cached(params, inputs), cotangent);
}

GradBuffer mlp_backward(const MlpParams& params, const Matrix& inputs, const ForwardPass& pass,
                        std::span<const double> cotangent) {
  check_input(params, inputs);
  const std::size_t rows = inputs.rows();
  if (cotangent.size() != rows) {
    throw ShapeError("cotangent length " + std::to_string(cotangent.size()) + " != batch rows " +
                     std::to_string(rows));
  }
  if (pass.outputs.size() != rows || pass.hidden.size() + 1 != params.layer_count()) {
    throw ShapeError("forward pass does not match network/batch");
  }

  const auto& k = kernels::active();
  GradBuffer grad(params);
  std::vector<double> delta(cotangent.begin(), cotangent.end());
  std::vector<double> upstream;
  for (std::size_t l = params.layer_count(); l-- > 0;) {
    const auto& s = params.shape(l);
    const Matrix& layer_in = l == 0 ? inputs : pass.hidden[l - 1];
    k.affine_weight_grad(delta.data(), layer_in.data().data(), rows, s.in, s.out,
                         grad.weights(l).data(), grad.bias(l).data());
    if (l == 0) break;
    upstream.resize(rows * s.in);
    k.affine_input_grad(delta.data(), params.weights(l).data(), rows, s.in, s.out,
                        upstream.data());
    activation_backward(params.activation(), pass.hidden[l - 1].data(), upstream);
    delta.swap(upstream);
  }
  return grad;
}

}  // namespace minfo
