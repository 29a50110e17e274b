#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pavesat/model/tensor.hpp"

namespace pavesat::model {

/// 3x3 convolution (padding 1) + ReLU, optionally followed by 2x2 max-pool.
struct ConvBlockSpec {
  int filters = 8;
  int stride = 1;
  bool pool = true;
  bool trainable = true;
};

/// Hidden ReLU dense layer of the classification head.
struct DenseSpec {
  int units = 16;
  bool trainable = true;
};

/// Feature layers (conv blocks) -> global average pooling -> dense head
/// ending in a softmax over num_classes.
struct CompactNetConfig {
  int input_channels = 3;
  int input_height = 64;
  int input_width = 64;
  std::vector<ConvBlockSpec> conv_blocks;
  std::vector<DenseSpec> hidden;
  int num_classes = 5;
  bool output_trainable = true;
  /// Input carries one extra plane after the image channels: the 0/1
  /// section mask. Global average pooling then averages over section
  /// pixels only.
  bool mask_input = false;

  int input_planes() const { return input_channels + (mask_input ? 1 : 0); }
  void validate() const;
};

enum class LayerKind : std::uint8_t { Conv = 1, GlobalAvgPool = 2, Dense = 3 };

template <class T>
struct Layer {
  std::string name;
  LayerKind kind = LayerKind::Dense;
  bool trainable = true;
  bool relu = false;
  bool pool = false;
  int stride = 1;
  int in_c = 0, in_h = 0, in_w = 0;
  int conv_h = 0, conv_w = 0;  // conv output before pooling
  int out_c = 0, out_h = 0, out_w = 0;
  Tensor<T> weights;  // conv [F, C, 3, 3]; dense [out, in]
  Tensor<T> bias;

  bool has_parameters() const { return kind != LayerKind::GlobalAvgPool; }
  std::size_t input_size() const { return static_cast<std::size_t>(in_c) * in_h * in_w; }
  std::size_t output_size() const { return static_cast<std::size_t>(out_c) * out_h * out_w; }
};

template <class T>
struct LayerGradient {
  std::size_t layer = 0;
  Tensor<T> weights;
  Tensor<T> bias;
};

/// Gradients for trainable layers only; frozen layers have no entry.
template <class T>
struct Gradients {
  std::vector<LayerGradient<T>> layers;

  const LayerGradient<T>* find(std::size_t layer) const;
  T max_abs() const;
};

/// Activations kept by a training forward pass for backward().
template <class T>
struct ForwardCache {
  int batch = 0;
  std::vector<Tensor<T>> inputs;        // input of each layer
  std::vector<Tensor<T>> activations;   // conv: post-ReLU pre-pool; dense: output
  std::vector<std::vector<std::uint32_t>> pool_argmax;
  std::vector<T> pool_weights;          // per-sample averaging weights at the GAP input
  Tensor<T> probabilities;              // [N, classes]
};

template <class T>
class Network {
 public:
  Network() = default;
  /// Builds the layers and draws fan-in scaled uniform weights from `seed`.
  Network(const CompactNetConfig& config, std::uint64_t seed);

  const CompactNetConfig& config() const { return config_; }
  const std::vector<Layer<T>>& layers() const { return layers_; }
  std::vector<Layer<T>>& layers() { return layers_; }

  std::size_t input_size() const;
  int num_classes() const { return config_.num_classes; }

  /// Probabilities [N, classes] for a batch [N, C, H, W] (C + 1 planes with mask_input).
  Tensor<T> forward(const Tensor<T>& batch) const;
  Tensor<T> forward(const Tensor<T>& batch, ForwardCache<T>& cache) const;
  /// Pre-softmax scores [N, classes].
  Tensor<T> logits(const Tensor<T>& batch) const;

  /// Gradient of the mean cross-entropy of the cached batch.
  Gradients<T> backward(const ForwardCache<T>& cache, std::span<const int> labels) const;

  void set_all_trainable(bool trainable);
  /// Locks the convolutional feature layers; the head stays trainable.
  void freeze_features();
  std::size_t parameter_count() const;

  template <class U>
  Network<U> cast() const;

 private:
  template <class U>
  friend class Network;

  Tensor<T> run(const Tensor<T>& batch, ForwardCache<T>* cache) const;
  void sync_config_flags();

  CompactNetConfig config_;
  std::vector<Layer<T>> layers_;
};

/// Row-wise softmax of [N, classes] logits.
template <class T>
Tensor<T> softmax(const Tensor<T>& logits);

/// Mean over the batch of -log p_true with p clamped to [1e-12, 1].
template <class T>
T cross_entropy(const Tensor<T>& probabilities, std::span<const int> labels);

extern template class Network<float>;
extern template class Network<double>;

}  // namespace pavesat::model
