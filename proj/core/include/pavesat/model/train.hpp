#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pavesat/ensemble/prediction.hpp"
#include "pavesat/model/network.hpp"

namespace pavesat::model {

struct TrainConfig {
  int epochs = 50;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  double fine_tune_lr = 1e-5;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0;
  double val_loss = 0;
  double train_acc = 0;
  double val_acc = 0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainingHistory {
  std::vector<EpochRecord> epochs;

  friend bool operator==(const TrainingHistory&, const TrainingHistory&) = default;
};

/// Writes a network input (CHW floats) for sample `index`. `epoch` is set for
/// training draws, which may be augmented; validation and prediction pass nullopt.
using InputProvider =
    std::function<void(std::size_t index, std::optional<int> epoch, std::span<float> out)>;

struct TrainingData {
  std::vector<std::string> ids;  // duplicates allowed (oversampling)
  std::vector<int> labels;
  InputProvider input;
};

/// Adam with bias correction folded into the step size.
class Adam {
 public:
  Adam(double learning_rate, double beta1, double beta2, double epsilon);

  void step(Network<float>& net, const Gradients<float>& grads);
  long long iterations() const { return t_; }

 private:
  double lr_, beta1_, beta2_, epsilon_;
  long long t_ = 0;
  std::vector<std::vector<float>> m_, v_;  // indexed by parameter slot
  std::vector<std::size_t> slot_;          // layer index -> slot
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Minibatch training. A validation subset (a seeded fraction of the distinct
/// ids) is held out of the updates and scored after each epoch.
TrainingHistory train(Network<float>& net, const TrainingData& data, const TrainConfig& cfg,
                      const EpochCallback& on_epoch = {});

/// Unfreezes every layer and trains with cfg.fine_tune_lr.
TrainingHistory fine_tune(Network<float>& net, const TrainingData& data, const TrainConfig& cfg,
                          const EpochCallback& on_epoch = {});

/// Softmax rows computed in double from the network logits.
ensemble::ModelPrediction predict(const Network<float>& net, const std::string& model_id,
                                  const std::vector<std::string>& sample_ids,
                                  const InputProvider& input, int batch_size = 32);

void write_history(const TrainingHistory& history, const std::filesystem::path& path);
TrainingHistory read_history(const std::filesystem::path& path);

}  // namespace pavesat::model
