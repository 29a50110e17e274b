#include "pavesat/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "pavesat/csv.hpp"
#include "pavesat/error.hpp"
#include "pavesat/random.hpp"

namespace pavesat::model {
namespace {

double clamped_nll(double p) { return -std::log(std::clamp(p, 1e-12, 1.0)); }

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;  // one index per held-out id
};

Split hold_out(const TrainingData& data, double fraction, std::uint64_t seed) {
  std::vector<std::string> distinct;
  std::unordered_set<std::string> seen;
  for (const auto& id : data.ids) {
    if (seen.insert(id).second) distinct.push_back(id);
  }
  std::size_t n_val = 0;
  if (fraction > 0 && distinct.size() >= 2) {
    n_val = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(distinct.size())));
    n_val = std::clamp<std::size_t>(n_val, 1, distinct.size() - 1);
  }
  std::vector<std::string> order = distinct;
  Rng rng(derive_seed(seed, "validation"));
  rng.shuffle(order.begin(), order.end());
  const std::unordered_set<std::string> held(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));

  Split s;
  std::unordered_set<std::string> placed;
  for (std::size_t i = 0; i < data.ids.size(); ++i) {
    if (!held.count(data.ids[i])) {
      s.train.push_back(i);
    } else if (placed.insert(data.ids[i]).second) {
      s.validation.push_back(i);
    }
  }
  return s;
}

Tensor<float> gather(const Network<float>& net, const InputProvider& input,
                     std::span<const std::size_t> indices, std::optional<int> epoch) {
  const auto& cfg = net.config();
  Tensor<float> batch({static_cast<int>(indices.size()), cfg.input_planes(), cfg.input_height,
                       cfg.input_width});
  const std::size_t stride = net.input_size();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    input(indices[i], epoch, std::span<float>(batch.data() + i * stride, stride));
  }
  return batch;
}

int row_argmax(const float* row, int k) {
  int best = 0;
  for (int i = 1; i < k; ++i) {
    if (row[i] > row[best]) best = i;
  }
  return best;
}

bool all_finite(const Gradients<float>& g) {
  for (const auto& l : g.layers) {
    for (float v : l.weights.values) if (!std::isfinite(v)) return false;
    for (float v : l.bias.values) if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ParameterError("epochs must be >= 1");
  if (batch_size < 1) throw ParameterError("batch_size must be >= 1");
  if (!(learning_rate >= 0) || !(fine_tune_lr > 0)) throw ParameterError("step sizes must be positive");
  if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1)) throw ParameterError("Adam decays must lie in [0,1)");
  if (!(epsilon > 0)) throw ParameterError("Adam epsilon must be positive");
  if (!(validation_fraction >= 0 && validation_fraction < 1)) {
    throw ParameterError("validation_fraction must lie in [0,1)");
  }
}

Adam::Adam(double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

void Adam::step(Network<float>& net, const Gradients<float>& grads) {
  ++t_;
  const double lr_t = lr_ * std::sqrt(1.0 - std::pow(beta2_, static_cast<double>(t_))) /
                      (1.0 - std::pow(beta1_, static_cast<double>(t_)));
  auto& layers = net.layers();
  if (slot_.size() < layers.size()) slot_.resize(layers.size(), std::numeric_limits<std::size_t>::max());

  auto update = [&](std::size_t slot, std::vector<float>& params, const std::vector<float>& g) {
    if (slot >= m_.size()) {
      m_.resize(slot + 1);
      v_.resize(slot + 1);
    }
    auto& m = m_[slot];
    auto& v = v_[slot];
    if (m.empty()) {
      m.assign(params.size(), 0.0f);
      v.assign(params.size(), 0.0f);
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double gi = g[i];
      const double mi = beta1_ * m[i] + (1.0 - beta1_) * gi;
      const double vi = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
      m[i] = static_cast<float>(mi);
      v[i] = static_cast<float>(vi);
      params[i] = static_cast<float>(params[i] - lr_t * mi / (std::sqrt(vi) + epsilon_));
    }
  };

  for (const auto& lg : grads.layers) {
    auto& L = layers.at(lg.layer);
    if (!L.trainable) continue;
    if (slot_[lg.layer] == std::numeric_limits<std::size_t>::max()) {
      slot_[lg.layer] = m_.size();
      m_.resize(m_.size() + 2);
      v_.resize(v_.size() + 2);
    }
    update(slot_[lg.layer], L.weights.values, lg.weights.values);
    update(slot_[lg.layer] + 1, L.bias.values, lg.bias.values);
  }
}

TrainingHistory train(Network<float>& net, const TrainingData& data, const TrainConfig& cfg,
                      const EpochCallback& on_epoch) {
  cfg.validate();
  if (data.ids.size() != data.labels.size()) throw ShapeError("training ids and labels differ in length");
  if (!data.input) throw ParameterError("training data has no input provider");
  const Split split = hold_out(data, cfg.validation_fraction, cfg.seed);
  if (split.train.empty()) throw ParameterError("training split is empty");

  const int classes = net.num_classes();
  Adam adam(cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon);
  TrainingHistory history;
  std::vector<double> losses(data.ids.size());
  std::vector<char> correct(data.ids.size());

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<std::size_t> order = split.train;
    Rng rng(derive_seed(cfg.seed, "epoch", epoch));
    rng.shuffle(order.begin(), order.end());

    int batch_no = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      ++batch_no;
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const Tensor<float> batch = gather(net, data.input, idx, epoch);
      std::vector<int> labels(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = data.labels[idx[i]];

      ForwardCache<float> cache;
      const Tensor<float> probs = net.forward(batch, cache);
      bool finite = true;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const float* row = probs.data() + i * static_cast<std::size_t>(classes);
        const double l = clamped_nll(row[labels[i]]);
        finite = finite && std::isfinite(l) && std::isfinite(row[0]);
        losses[idx[i]] = l;
        correct[idx[i]] = row_argmax(row, classes) == labels[i];
      }
      const Gradients<float> grads = net.backward(cache, labels);
      if (!finite || !all_finite(grads)) {
        std::ostringstream msg;
        msg << "non-finite loss at epoch " << epoch << ", batch " << batch_no
            << " (max |grad| = " << grads.max_abs() << ")";
        throw NonFiniteLossError(msg.str());
      }
      adam.step(net, grads);
    }

    // Summed in index order so the value does not depend on the shuffle.
    EpochRecord rec;
    rec.epoch = epoch;
    double loss_sum = 0;
    std::size_t hits = 0;
    std::vector<std::size_t> sorted = split.train;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i : sorted) {
      loss_sum += losses[i];
      hits += correct[i] ? 1 : 0;
    }
    rec.train_loss = loss_sum / static_cast<double>(sorted.size());
    rec.train_acc = static_cast<double>(hits) / static_cast<double>(sorted.size());

    if (split.validation.empty()) {
      rec.val_loss = std::numeric_limits<double>::quiet_NaN();
      rec.val_acc = std::numeric_limits<double>::quiet_NaN();
    } else {
      double vloss = 0;
      std::size_t vhits = 0;
      for (std::size_t start = 0; start < split.validation.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
        const std::size_t end = std::min(split.validation.size(), start + static_cast<std::size_t>(cfg.batch_size));
        const std::span<const std::size_t> idx(split.validation.data() + start, end - start);
        const Tensor<float> probs = net.forward(gather(net, data.input, idx, std::nullopt));
        for (std::size_t i = 0; i < idx.size(); ++i) {
          const float* row = probs.data() + i * static_cast<std::size_t>(classes);
          vloss += clamped_nll(row[data.labels[idx[i]]]);
          vhits += row_argmax(row, classes) == data.labels[idx[i]] ? 1 : 0;
        }
      }
      rec.val_loss = vloss / static_cast<double>(split.validation.size());
      rec.val_acc = static_cast<double>(vhits) / static_cast<double>(split.validation.size());
    }
    history.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return history;
}

TrainingHistory fine_tune(Network<float>& net, const TrainingData& data, const TrainConfig& cfg,
                          const EpochCallback& on_epoch) {
  TrainConfig tuned = cfg;
  tuned.learning_rate = cfg.fine_tune_lr;
  net.set_all_trainable(true);
  return train(net, data, tuned, on_epoch);
}

ensemble::ModelPrediction predict(const Network<float>& net, const std::string& model_id,
                                  const std::vector<std::string>& sample_ids,
                                  const InputProvider& input, int batch_size) {
  if (net.num_classes() != ensemble::kClasses) throw ShapeError("network does not output 5 classes");
  if (batch_size < 1) throw ParameterError("batch_size must be >= 1");
  ensemble::ModelPrediction out;
  out.model_id = model_id;
  out.sample_ids = sample_ids;
  out.rows.reserve(sample_ids.size());
  std::vector<std::size_t> all(sample_ids.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (std::size_t start = 0; start < all.size(); start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end = std::min(all.size(), start + static_cast<std::size_t>(batch_size));
    const Tensor<float> logits =
        net.logits(gather(net, input, std::span<const std::size_t>(all.data() + start, end - start), std::nullopt));
    for (std::size_t i = 0; i < end - start; ++i) {
      ensemble::ProbabilityRow row{};
      double m = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < ensemble::kClasses; ++k) m = std::max(m, static_cast<double>(logits[i * ensemble::kClasses + k]));
      double sum = 0;
      for (int k = 0; k < ensemble::kClasses; ++k) {
        row[k] = std::exp(static_cast<double>(logits[i * ensemble::kClasses + k]) - m);
        sum += row[k];
      }
      for (auto& p : row) p /= sum;
      out.rows.push_back(row);
    }
  }
  return out;
}

void write_history(const TrainingHistory& history, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "epoch,train_loss,val_loss,train_acc,val_acc\n";
  for (const auto& e : history.epochs) {
    csv::write_row(out, {std::to_string(e.epoch), csv::format_number(e.train_loss),
                         csv::format_number(e.val_loss), csv::format_number(e.train_acc),
                         csv::format_number(e.val_acc)});
  }
  if (!out) throw Error("write failed: " + path.string());
}

TrainingHistory read_history(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t c_epoch = t.column("epoch"), c_tl = t.column("train_loss"), c_vl = t.column("val_loss"),
                    c_ta = t.column("train_acc"), c_va = t.column("val_acc");
  TrainingHistory h;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    EpochRecord e;
    e.epoch = static_cast<int>(t.number(r, c_epoch));
    e.train_loss = t.number(r, c_tl);
    e.val_loss = t.number(r, c_vl);
    e.train_acc = t.number(r, c_ta);
    e.val_acc = t.number(r, c_va);
    h.epochs.push_back(e);
  }
  return h;
}

}  // namespace pavesat::model
