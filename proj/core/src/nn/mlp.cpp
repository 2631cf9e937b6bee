#include "least/nn/mlp.hpp"

#include <cmath>
#include <string>

#include "least/errors.hpp"

namespace least::nn {

Mlp::Mlp(std::vector<int> layer_dims, OutputActivation output_activation)
    : dims_(std::move(layer_dims)), output_(output_activation) {
  if (dims_.size() < 2) {
    throw DimensionError("Mlp needs at least an input and an output dimension");
  }
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k + 1 < dims_.size(); ++k) {
    if (dims_[k] <= 0 || dims_[k + 1] <= 0) {
      throw DimensionError("Mlp layer dimensions must be positive");
    }
    weight_offset_.push_back(offset);
    offset += static_cast<Eigen::Index>(dims_[k]) * dims_[k + 1];
    bias_offset_.push_back(offset);
    offset += dims_[k + 1];
  }
  params_ = Vector::Zero(offset);
}

Mlp Mlp::uniform_init(std::vector<int> layer_dims, OutputActivation output_activation,
                      std::mt19937_64& rng) {
  Mlp net(std::move(layer_dims), output_activation);
  for (int k = 0; k < net.num_layers(); ++k) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.dims_[k]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    auto w = net.weight(k);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
    }
    auto b = net.bias(k);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = dist(rng);
  }
  return net;
}

void Mlp::check_layer(int layer) const {
  if (layer < 0 || layer >= num_layers()) {
    throw DimensionError("layer index " + std::to_string(layer) + " out of range");
  }
}

void Mlp::check_input(const Matrix& inputs) const {
  if (dims_.empty()) throw DimensionError("forward on an empty Mlp");
  if (inputs.rows() != input_dim()) {
    throw DimensionError("Mlp input has " + std::to_string(inputs.rows()) + " rows, expected " +
                         std::to_string(input_dim()));
  }
}

Eigen::Map<Matrix> Mlp::weight(int layer) {
  check_layer(layer);
  return {params_.data() + weight_offset_[layer], dims_[layer], dims_[layer + 1]};
}

Eigen::Map<const Matrix> Mlp::weight(int layer) const {
  check_layer(layer);
  return {params_.data() + weight_offset_[layer], dims_[layer], dims_[layer + 1]};
}

Eigen::Map<Vector> Mlp::bias(int layer) {
  check_layer(layer);
  return {params_.data() + bias_offset_[layer], dims_[layer + 1]};
}

Eigen::Map<const Vector> Mlp::bias(int layer) const {
  check_layer(layer);
  return {params_.data() + bias_offset_[layer], dims_[layer + 1]};
}

Vector Mlp::forward(const Vector& input) const {
  return forward_batch(input);
}

Matrix Mlp::forward_batch(const Matrix& inputs) const {
  check_input(inputs);
  Matrix a = inputs;
  for (int k = 0; k < num_layers(); ++k) {
    Matrix z = weight(k).transpose() * a;
    z.colwise() += bias(k);
    if (k + 1 < num_layers()) {
      a = z.cwiseMax(0.0);
    } else if (output_ == OutputActivation::kTanh) {
      a = z.array().tanh().matrix();
    } else {
      a = std::move(z);
    }
  }
  return a;
}

ForwardTrace Mlp::forward_trace(const Matrix& inputs) const {
  check_input(inputs);
  ForwardTrace trace;
  trace.input = inputs;
  trace.pre.reserve(num_layers());
  trace.post.reserve(num_layers());
  const Matrix* a = &trace.input;
  for (int k = 0; k < num_layers(); ++k) {
    Matrix z = weight(k).transpose() * (*a);
    z.colwise() += bias(k);
    trace.pre.push_back(std::move(z));
    const Matrix& pre = trace.pre.back();
    if (k + 1 < num_layers()) {
      trace.post.push_back(pre.cwiseMax(0.0));
    } else if (output_ == OutputActivation::kTanh) {
      trace.post.push_back(pre.array().tanh().matrix());
    } else {
      trace.post.push_back(pre);
    }
    a = &trace.post.back();
  }
  return trace;
}

Matrix Mlp::backward_impl(const ForwardTrace& trace, const Matrix& upstream,
                          Vector* param_grad) const {
  if (static_cast<int>(trace.post.size()) != num_layers()) {
    throw DimensionError("forward trace does not match this network");
  }
  const Matrix& out = trace.post.back();
  if (upstream.rows() != out.rows() || upstream.cols() != out.cols()) {
    throw DimensionError("upstream gradient shape does not match network output");
  }
  Matrix delta = upstream;
  if (output_ == OutputActivation::kTanh) {
    delta.array() *= (1.0 - out.array().square());
  }
  for (int k = num_layers() - 1; k >= 0; --k) {
    const Matrix& a_in = k == 0 ? trace.input : trace.post[k - 1];
    if (param_grad != nullptr) {
      Eigen::Map<Matrix> dw(param_grad->data() + weight_offset_[k], dims_[k], dims_[k + 1]);
      dw.noalias() = a_in * delta.transpose();
      Eigen::Map<Vector> db(param_grad->data() + bias_offset_[k], dims_[k + 1]);
      db = delta.rowwise().sum();
    }
    Matrix prev = weight(k) * delta;
    if (k > 0) {
      prev.array() *= (trace.pre[k - 1].array() > 0.0).cast<double>();
    }
    delta = std::move(prev);
  }
  return delta;
}

Gradients Mlp::backward(const ForwardTrace& trace, const Matrix& upstream) const {
  Gradients g;
  g.params = Vector::Zero(params_.size());
  g.input = backward_impl(trace, upstream, &g.params);
  return g;
}

Matrix Mlp::backward_input(const ForwardTrace& trace, const Matrix& upstream) const {
  return backward_impl(trace, upstream, nullptr);
}

std::vector<Matrix> Mlp::hidden_activations(const Matrix& inputs) const {
  ForwardTrace trace = forward_trace(inputs);
  trace.post.pop_back();
  return std::move(trace.post);
}

}  // namespace least::nn
