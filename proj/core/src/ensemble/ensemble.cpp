#include "pavesat/ensemble/ensemble.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cmath>

#include "pavesat/error.hpp"

namespace pavesat::ensemble {
namespace {

__extension__ typedef unsigned __int128 u128;

// Exact sum of nonnegative doubles <= 1 in binary fixed point (bit 0 is
// 2^-1074), divided by an integer with round-to-nearest-even.
class ExactSum {
 public:
  void add(double p) {
    if (p == 0.0) return;
    int exp = 0;
    const double m = std::frexp(p, &exp);
    auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
    int pos = exp + 1021;
    if (pos < 0) {
      mant >>= -pos;
      pos = 0;
    }
    const auto v = static_cast<u128>(mant) << (pos % 64);
    std::size_t i = static_cast<std::size_t>(pos / 64);
    u128 carry = static_cast<std::uint64_t>(v);
    carry += limbs_[i];
    limbs_[i] = static_cast<std::uint64_t>(carry);
    carry = (carry >> 64) + static_cast<std::uint64_t>(v >> 64);
    for (++i; carry != 0; ++i) {
      carry += limbs_[i];
      limbs_[i] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
  }

  double divided_by(std::uint64_t k) const {
    auto q = limbs_;
    u128 rem = 0;
    for (std::size_t i = q.size(); i-- > 0;) {
      rem = (rem << 64) | q[i];
      q[i] = static_cast<std::uint64_t>(rem / k);
      rem %= k;
    }
    auto bit = [&](int b) { return (q[static_cast<std::size_t>(b) / 64] >> (b % 64)) & 1u; };
    int high = -1;
    for (int i = static_cast<int>(q.size()) - 1; i >= 0 && high < 0; --i) {
      if (q[static_cast<std::size_t>(i)] != 0) high = i * 64 + 63 - std::countl_zero(q[static_cast<std::size_t>(i)]);
    }
    if (high < 0 && rem == 0) return 0.0;
    const int cut = std::max(high - 52, 0);
    std::uint64_t mant = 0;
    for (int b = high; b >= cut; --b) mant = (mant << 1) | bit(b);
    bool up = false;
    if (cut == 0) {
      const u128 twice = rem * 2;
      up = twice > k || (twice == k && (mant & 1u));
    } else {
      bool lower = rem != 0;
      for (int b = cut - 2; b >= 0 && !lower; --b) lower = bit(b) != 0;
      up = bit(cut - 1) && (lower || (mant & 1u));
    }
    if (up) ++mant;
    return std::ldexp(static_cast<double>(mant), cut - 1074);
  }

 private:
  std::array<std::uint64_t, 18> limbs_{};
};

}  // namespace

void ModelPrediction::validate(double tolerance) const {
  if (sample_ids.size() != rows.size()) {
    throw FormatError("model '" + model_id + "': " + std::to_string(sample_ids.size()) + " ids but " +
                      std::to_string(rows.size()) + " rows");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double sum = 0;
    for (double p : rows[i]) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw FormatError("model '" + model_id + "', sample '" + sample_ids[i] + "': probability outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      throw FormatError("model '" + model_id + "', sample '" + sample_ids[i] + "': probabilities sum to " +
                        std::to_string(sum));
    }
  }
}

int argmax(const ProbabilityRow& row) {
  int best = 0;
  for (int i = 1; i < kClasses; ++i) {
    if (row[i] > row[best]) best = i;
  }
  return best;
}

EnsemblePrediction combine(const std::vector<ModelPrediction>& preds, const EnsembleConfig& cfg) {
  const std::size_t k = preds.size();
  if (k == 0) throw ParameterError("ensemble needs at least one model");
  const auto& ref = preds.front();
  for (const auto& p : preds) {
    if (p.rows.size() != p.sample_ids.size()) {
      throw AlignmentError("model '" + p.model_id + "' has mismatched ids and rows");
    }
    const std::size_t n = std::min(p.sample_ids.size(), ref.sample_ids.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (p.sample_ids[i] != ref.sample_ids[i]) {
        throw AlignmentError("model '" + p.model_id + "' diverges from '" + ref.model_id + "' at sample " +
                             std::to_string(i) + ": '" + p.sample_ids[i] + "' vs '" + ref.sample_ids[i] + "'");
      }
    }
    if (p.sample_ids.size() != ref.sample_ids.size()) {
      const auto& longer = p.sample_ids.size() > n ? p.sample_ids : ref.sample_ids;
      throw AlignmentError("model '" + p.model_id + "' and '" + ref.model_id + "' differ in length; first unmatched id '" +
                           longer[n] + "'");
    }
  }

  std::vector<double> weights;
  if (cfg.mode == CombineMode::AccuracyWeighted) {
    if (cfg.accuracies.size() != k) {
      throw ParameterError("accuracy weighting needs " + std::to_string(k) + " accuracies, got " +
                           std::to_string(cfg.accuracies.size()));
    }
    ExactSum total;
    for (std::size_t j = 0; j < k; ++j) {
      const double a = cfg.accuracies[j];
      if (!(a >= 0.0 && a <= 1.0)) {
        throw ParameterError("accuracy of model '" + preds[j].model_id + "' outside [0,1]");
      }
      total.add(a);
    }
    const double sum = total.divided_by(1);
    if (!(sum > 0)) throw ParameterError("accuracy weights sum to zero");
    for (std::size_t j = 0; j < k; ++j) weights.push_back(cfg.accuracies[j] / sum);
  }

  EnsemblePrediction out;
  out.sample_ids = ref.sample_ids;
  out.rows.resize(ref.rows.size());
  out.predicted.resize(ref.rows.size());
  for (std::size_t i = 0; i < ref.rows.size(); ++i) {
    for (int c = 0; c < kClasses; ++c) {
      ExactSum sum;
      for (std::size_t j = 0; j < k; ++j) {
        const double p = preds[j].rows[i][c];
        if (!(p >= 0.0 && p <= 1.0)) {
          throw ParameterError("model '" + preds[j].model_id + "', sample '" + ref.sample_ids[i] +
                               "': probability outside [0,1]");
        }
        sum.add(weights.empty() ? p : weights[j] * p);
      }
      out.rows[i][c] = sum.divided_by(weights.empty() ? k : 1);
    }
    out.predicted[i] = argmax(out.rows[i]);
  }
  return out;
}

std::vector<std::string> top_k_select(std::vector<ModelReport> reports, std::size_t k) {
  if (k == 0) throw ParameterError("k must be >= 1");
  if (k > reports.size()) {
    throw ParameterError("asked for " + std::to_string(k) + " models but only " + std::to_string(reports.size()) +
                         " are available");
  }
  std::sort(reports.begin(), reports.end(), [](const ModelReport& a, const ModelReport& b) {
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.model_id < b.model_id;
  });
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < k; ++i) ids.push_back(reports[i].model_id);
  return ids;
}

CombineMode parse_combine_mode(const std::string& text) {
  if (text == "uniform") return CombineMode::Uniform;
  if (text == "accuracy_weighted" || text == "weighted") return CombineMode::AccuracyWeighted;
  throw ParameterError("unknown ensemble mode '" + text + "' (expected uniform or accuracy_weighted)");
}

std::string to_string(CombineMode mode) {
  return mode == CombineMode::Uniform ? "uniform" : "accuracy_weighted";
}

}  // namespace pavesat::ensemble
