#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace least::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class OutputActivation { kNone, kTanh };

// Intermediate values of a batched forward pass. Column j of every matrix
// belongs to sample j.
struct ForwardTrace {
  Matrix input;
  std::vector<Matrix> pre;   // affine outputs per layer
  std::vector<Matrix> post;  // activations per layer; post.back() is the net output
};

struct Gradients {
  Vector params;  // same flat layout as Mlp::parameters()
  Matrix input;   // d loss / d input, one column per sample
};

/// Fully connected network with ReLU hidden layers.
///
/// Parameters live in one contiguous buffer so that optimizers, target-network
/// averaging and checkpointing can treat them as a flat vector. Layer k owns a
/// weight block of shape (dims[k], dims[k+1]) stored column-major, followed by
/// its bias of length dims[k+1]. The affine map is `W^T x + b`.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<int> layer_dims, OutputActivation output_activation);

  /// Weights and biases drawn uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static Mlp uniform_init(std::vector<int> layer_dims, OutputActivation output_activation,
                          std::mt19937_64& rng);

  const std::vector<int>& layer_dims() const { return dims_; }
  int num_layers() const { return static_cast<int>(dims_.size()) - 1; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  OutputActivation output_activation() const { return output_; }

  Eigen::Map<Matrix> weight(int layer);
  Eigen::Map<const Matrix> weight(int layer) const;
  Eigen::Map<Vector> bias(int layer);
  Eigen::Map<const Vector> bias(int layer) const;

  std::span<double> parameters() { return {params_.data(), static_cast<std::size_t>(params_.size())}; }
  std::span<const double> parameters() const {
    return {params_.data(), static_cast<std::size_t>(params_.size())};
  }
  std::size_t parameter_count() const { return static_cast<std::size_t>(params_.size()); }
  const Vector& parameter_vector() const { return params_; }
  Vector& parameter_vector() { return params_; }

  Vector forward(const Vector& input) const;
  Matrix forward_batch(const Matrix& inputs) const;
  ForwardTrace forward_trace(const Matrix& inputs) const;

  /// Reverse pass. `upstream` holds d loss / d output per sample; gradients
  /// are summed over the batch.
  Gradients backward(const ForwardTrace& trace, const Matrix& upstream) const;

  /// Same as backward() but skips the parameter gradient.
  Matrix backward_input(const ForwardTrace& trace, const Matrix& upstream) const;

  /// Post-ReLU activations of every hidden layer.
  std::vector<Matrix> hidden_activations(const Matrix& inputs) const;

  bool same_architecture(const Mlp& other) const {
    return dims_ == other.dims_ && output_ == other.output_;
  }

 private:
  void check_layer(int layer) const;
  void check_input(const Matrix& inputs) const;
  Matrix backward_impl(const ForwardTrace& trace, const Matrix& upstream, Vector* param_grad) const;

  std::vector<int> dims_;
  OutputActivation output_ = OutputActivation::kNone;
  Vector params_;
  std::vector<Eigen::Index> weight_offset_;
  std::vector<Eigen::Index> bias_offset_;
};

}  // namespace least::nn
