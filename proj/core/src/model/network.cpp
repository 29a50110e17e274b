#include "pavesat/model/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pavesat/error.hpp"
#include "pavesat/random.hpp"

namespace pavesat::model {
namespace {

// out[F, Ho, Wo] = bias + conv3x3(in[C, H, W]), padding 1.
template <class T>
void conv_forward(const T* in, int C, int H, int W, const T* weights, const T* bias, int F,
                  int stride, T* out, int Ho, int Wo) {
  for (int f = 0; f < F; ++f) {
    T* plane = out + static_cast<std::size_t>(f) * Ho * Wo;
    std::fill(plane, plane + static_cast<std::size_t>(Ho) * Wo, bias[f]);
    for (int c = 0; c < C; ++c) {
      const T* inp = in + static_cast<std::size_t>(c) * H * W;
      const T* wk = weights + (static_cast<std::size_t>(f) * C + c) * 9;
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          const T wv = wk[ky * 3 + kx];
          const int ox_lo = kx == 0 ? 1 : 0;
          const int ox_hi = std::min(Wo - 1, (W - kx) / stride);
          for (int oy = 0; oy < Ho; ++oy) {
            const int iy = oy * stride + ky - 1;
            if (iy < 0 || iy >= H) continue;
            const T* in_row = inp + static_cast<std::size_t>(iy) * W + (kx - 1);
            T* out_row = plane + static_cast<std::size_t>(oy) * Wo;
            if (stride == 1) {
              for (int ox = ox_lo; ox <= ox_hi; ++ox) out_row[ox] += wv * in_row[ox];
            } else {
              for (int ox = ox_lo; ox <= ox_hi; ++ox) out_row[ox] += wv * in_row[ox * stride];
            }
          }
        }
      }
    }
  }
}

// Accumulates dW, dB and (optionally) dIn for one sample.
template <class T>
void conv_backward(const T* in, int C, int H, int W, const T* weights, int F, int stride,
                   const T* dout, int Ho, int Wo, T* dweights, T* dbias, T* din) {
  for (int f = 0; f < F; ++f) {
    const T* gplane = dout + static_cast<std::size_t>(f) * Ho * Wo;
    T sum = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(Ho) * Wo; ++i) sum += gplane[i];
    dbias[f] += sum;
    for (int c = 0; c < C; ++c) {
      const T* inp = in + static_cast<std::size_t>(c) * H * W;
      T* dinp = din ? din + static_cast<std::size_t>(c) * H * W : nullptr;
      const std::size_t wbase = (static_cast<std::size_t>(f) * C + c) * 9;
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          const T wv = weights[wbase + ky * 3 + kx];
          const int ox_lo = kx == 0 ? 1 : 0;
          const int ox_hi = std::min(Wo - 1, (W - kx) / stride);
          T acc = 0;
          for (int oy = 0; oy < Ho; ++oy) {
            const int iy = oy * stride + ky - 1;
            if (iy < 0 || iy >= H) continue;
            const std::size_t row_off = static_cast<std::size_t>(iy) * W + (kx - 1);
            const T* in_row = inp + row_off;
            const T* g_row = gplane + static_cast<std::size_t>(oy) * Wo;
            if (stride == 1) {
              for (int ox = ox_lo; ox <= ox_hi; ++ox) acc += g_row[ox] * in_row[ox];
              if (dinp) {
                T* d_row = dinp + row_off;
                for (int ox = ox_lo; ox <= ox_hi; ++ox) d_row[ox] += wv * g_row[ox];
              }
            } else {
              for (int ox = ox_lo; ox <= ox_hi; ++ox) acc += g_row[ox] * in_row[ox * stride];
              if (dinp) {
                T* d_row = dinp + row_off;
                for (int ox = ox_lo; ox <= ox_hi; ++ox) d_row[ox * stride] += wv * g_row[ox];
              }
            }
          }
          dweights[wbase + ky * 3 + kx] += acc;
        }
      }
    }
  }
}

}  // namespace

void CompactNetConfig::validate() const {
  if (input_channels <= 0 || input_height <= 0 || input_width <= 0) {
    throw ParameterError("network input dimensions must be positive");
  }
  if (num_classes != 5) {
    throw ParameterError("final layer width must equal the number of condition classes (5), got " +
                         std::to_string(num_classes));
  }
  int h = input_height, w = input_width;
  for (std::size_t i = 0; i < conv_blocks.size(); ++i) {
    const auto& b = conv_blocks[i];
    if (b.filters <= 0 || b.stride <= 0) {
      throw ParameterError("conv block " + std::to_string(i) + " needs positive filters and stride");
    }
    h = (h - 1) / b.stride + 1;
    w = (w - 1) / b.stride + 1;
    if (b.pool) {
      h /= 2;
      w /= 2;
    }
    if (h <= 0 || w <= 0) {
      throw ShapeError("conv block " + std::to_string(i) + " reduces the feature map to nothing");
    }
  }
  for (const auto& d : hidden) {
    if (d.units <= 0) throw ParameterError("dense layer units must be positive");
  }
}

template <class T>
const LayerGradient<T>* Gradients<T>::find(std::size_t layer) const {
  for (const auto& g : layers) {
    if (g.layer == layer) return &g;
  }
  return nullptr;
}

template <class T>
T Gradients<T>::max_abs() const {
  T m = 0;
  for (const auto& g : layers) {
    for (T v : g.weights.values) m = std::max(m, std::abs(v));
    for (T v : g.bias.values) m = std::max(m, std::abs(v));
  }
  return m;
}

template <class T>
Network<T>::Network(const CompactNetConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  Rng rng(seed);
  auto init_uniform = [&](Tensor<T>& t, double limit) {
    for (auto& v : t.values) v = static_cast<T>(rng.uniform(-limit, limit));
  };

  int c = config_.input_channels, h = config_.input_height, w = config_.input_width;
  for (std::size_t i = 0; i < config_.conv_blocks.size(); ++i) {
    const auto& spec = config_.conv_blocks[i];
    Layer<T> L;
    L.name = "conv" + std::to_string(i + 1);
    L.kind = LayerKind::Conv;
    L.trainable = spec.trainable;
    L.relu = true;
    L.pool = spec.pool;
    L.stride = spec.stride;
    L.in_c = c;
    L.in_h = h;
    L.in_w = w;
    L.conv_h = (h - 1) / spec.stride + 1;
    L.conv_w = (w - 1) / spec.stride + 1;
    L.out_c = spec.filters;
    L.out_h = spec.pool ? L.conv_h / 2 : L.conv_h;
    L.out_w = spec.pool ? L.conv_w / 2 : L.conv_w;
    L.weights = Tensor<T>({spec.filters, c, 3, 3});
    L.bias = Tensor<T>({spec.filters});
    init_uniform(L.weights, std::sqrt(6.0 / (9.0 * c)));
    c = L.out_c;
    h = L.out_h;
    w = L.out_w;
    layers_.push_back(std::move(L));
  }

  Layer<T> gap;
  gap.name = "gap";
  gap.kind = LayerKind::GlobalAvgPool;
  gap.trainable = false;
  gap.in_c = c;
  gap.in_h = h;
  gap.in_w = w;
  gap.out_c = c;
  gap.out_h = gap.out_w = 1;
  layers_.push_back(std::move(gap));

  auto add_dense = [&](const std::string& name, int units, bool relu, bool trainable) {
    Layer<T> L;
    L.name = name;
    L.kind = LayerKind::Dense;
    L.trainable = trainable;
    L.relu = relu;
    L.in_c = c;
    L.in_h = L.in_w = 1;
    L.out_c = units;
    L.out_h = L.out_w = 1;
    L.weights = Tensor<T>({units, c});
    L.bias = Tensor<T>({units});
    init_uniform(L.weights, relu ? std::sqrt(6.0 / c) : std::sqrt(3.0 / c));
    c = units;
    layers_.push_back(std::move(L));
  };
  for (std::size_t i = 0; i < config_.hidden.size(); ++i) {
    add_dense("dense" + std::to_string(i + 1), config_.hidden[i].units, true,
              config_.hidden[i].trainable);
  }
  add_dense("output", config_.num_classes, false, config_.output_trainable);
}

template <class T>
std::size_t Network<T>::input_size() const {
  return static_cast<std::size_t>(config_.input_planes()) * config_.input_height * config_.input_width;
}

template <class T>
Tensor<T> Network<T>::run(const Tensor<T>& batch, ForwardCache<T>* cache) const {
  if (batch.shape.size() != 4 || batch.shape[1] != config_.input_planes() ||
      batch.shape[2] != config_.input_height || batch.shape[3] != config_.input_width) {
    throw ShapeError("layer '" + (layers_.empty() ? std::string("input") : layers_.front().name) +
                     "' expects input [N," + std::to_string(config_.input_planes()) + "," +
                     std::to_string(config_.input_height) + "," +
                     std::to_string(config_.input_width) + "], got " + batch.shape_text());
  }
  const int n = batch.shape[0];
  if (cache) {
    cache->batch = n;
    cache->inputs.assign(layers_.size(), {});
    cache->activations.assign(layers_.size(), {});
    cache->pool_argmax.assign(layers_.size(), {});
  }

  // Section mask, followed down to the pooling grid: a conv output keeps
  // the mask of its center pixel, a pool cell is inside if any input is.
  std::vector<std::uint8_t> mask;
  int mh = config_.input_height, mw = config_.input_width;
  Tensor<T> images;
  if (config_.mask_input) {
    const std::size_t hw = static_cast<std::size_t>(mh) * mw;
    const std::size_t planes = static_cast<std::size_t>(config_.input_planes());
    images = Tensor<T>({n, config_.input_channels, mh, mw});
    mask.resize(static_cast<std::size_t>(n) * hw);
    for (int s = 0; s < n; ++s) {
      const T* src = batch.data() + s * planes * hw;
      std::copy(src, src + (planes - 1) * hw, images.data() + s * (planes - 1) * hw);
      for (std::size_t i = 0; i < hw; ++i) mask[s * hw + i] = src[(planes - 1) * hw + i] > T(0.5);
    }
  }
  auto downsample = [&](int stride, bool pool, int oh, int ow) {
    std::vector<std::uint8_t> next(static_cast<std::size_t>(n) * oh * ow);
    for (int s = 0; s < n; ++s) {
      const std::uint8_t* m = mask.data() + static_cast<std::size_t>(s) * mh * mw;
      auto conv_at = [&](int y, int x) { return m[static_cast<std::size_t>(y * stride) * mw + x * stride]; };
      for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
          std::uint8_t v = 0;
          if (pool) {
            for (int dy = 0; dy < 2; ++dy) for (int dx = 0; dx < 2; ++dx) v |= conv_at(2 * y + dy, 2 * x + dx);
          } else {
            v = conv_at(y, x);
          }
          next[(static_cast<std::size_t>(s) * oh + y) * ow + x] = v;
        }
      }
    }
    mask.swap(next);
    mh = oh;
    mw = ow;
  };

  Tensor<T> x = config_.mask_input ? std::move(images) : batch;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const auto& L = layers_[li];
    Tensor<T> y({n, L.out_c, L.out_h, L.out_w});
    const std::size_t in_sz = L.input_size();
    const std::size_t out_sz = L.output_size();

    switch (L.kind) {
      case LayerKind::Conv: {
        const std::size_t conv_sz = static_cast<std::size_t>(L.out_c) * L.conv_h * L.conv_w;
        Tensor<T> act({n, L.out_c, L.conv_h, L.conv_w});
        std::vector<std::uint32_t> argmax;
        if (L.pool && cache) argmax.resize(static_cast<std::size_t>(n) * out_sz);
        for (int s = 0; s < n; ++s) {
          T* a = act.data() + s * conv_sz;
          conv_forward(x.data() + s * in_sz, L.in_c, L.in_h, L.in_w, L.weights.data(),
                       L.bias.data(), L.out_c, L.stride, a, L.conv_h, L.conv_w);
          for (std::size_t i = 0; i < conv_sz; ++i) a[i] = a[i] > T(0) ? a[i] : T(0);
          T* o = y.data() + s * out_sz;
          if (!L.pool) {
            std::copy(a, a + conv_sz, o);
            continue;
          }
          for (int f = 0; f < L.out_c; ++f) {
            const std::size_t plane = static_cast<std::size_t>(f) * L.conv_h * L.conv_w;
            for (int py = 0; py < L.out_h; ++py) {
              for (int px = 0; px < L.out_w; ++px) {
                std::size_t best = plane + static_cast<std::size_t>(2 * py) * L.conv_w + 2 * px;
                for (int dy = 0; dy < 2; ++dy) {
                  for (int dx = 0; dx < 2; ++dx) {
                    const std::size_t idx =
                        plane + static_cast<std::size_t>(2 * py + dy) * L.conv_w + 2 * px + dx;
                    if (a[idx] > a[best]) best = idx;
                  }
                }
                const std::size_t oi = (static_cast<std::size_t>(f) * L.out_h + py) * L.out_w + px;
                o[oi] = a[best];
                if (cache) argmax[s * out_sz + oi] = static_cast<std::uint32_t>(best);
              }
            }
          }
        }
        if (cache) {
          cache->activations[li] = std::move(act);
          cache->pool_argmax[li] = std::move(argmax);
        }
        if (config_.mask_input) downsample(L.stride, L.pool, L.out_h, L.out_w);
        break;
      }
      case LayerKind::GlobalAvgPool: {
        const std::size_t hw = static_cast<std::size_t>(L.in_h) * L.in_w;
        std::vector<T> weights(static_cast<std::size_t>(n) * hw, T(1) / static_cast<T>(hw));
        if (config_.mask_input) {
          for (int s = 0; s < n; ++s) {
            const std::uint8_t* m = mask.data() + s * hw;
            std::size_t inside = 0;
            for (std::size_t i = 0; i < hw; ++i) inside += m[i];
            // A sample with no surviving section cell falls back to the plain mean.
            if (inside == 0) continue;
            for (std::size_t i = 0; i < hw; ++i) {
              weights[s * hw + i] = m[i] ? T(1) / static_cast<T>(inside) : T(0);
            }
          }
        }
        for (int s = 0; s < n; ++s) {
          const T* w = weights.data() + s * hw;
          for (int ch = 0; ch < L.in_c; ++ch) {
            const T* p = x.data() + s * in_sz + ch * hw;
            T sum = 0;
            for (std::size_t i = 0; i < hw; ++i) sum += w[i] * p[i];
            y[s * out_sz + ch] = sum;
          }
        }
        if (cache) cache->pool_weights = std::move(weights);
        break;
      }
      case LayerKind::Dense: {
        for (int s = 0; s < n; ++s) {
          const T* xi = x.data() + s * in_sz;
          for (int o = 0; o < L.out_c; ++o) {
            const T* wrow = L.weights.data() + static_cast<std::size_t>(o) * L.in_c;
            T sum = L.bias[o];
            for (int i = 0; i < L.in_c; ++i) sum += wrow[i] * xi[i];
            if (L.relu && sum < T(0)) sum = T(0);
            y[s * out_sz + o] = sum;
          }
        }
        if (cache) cache->activations[li] = y;
        break;
      }
    }
    if (cache) cache->inputs[li] = std::move(x);
    x = std::move(y);
  }
  x.shape = {n, config_.num_classes};
  return x;
}

template <class T>
Tensor<T> Network<T>::logits(const Tensor<T>& batch) const {
  return run(batch, nullptr);
}

template <class T>
Tensor<T> Network<T>::forward(const Tensor<T>& batch) const {
  return softmax(run(batch, nullptr));
}

template <class T>
Tensor<T> Network<T>::forward(const Tensor<T>& batch, ForwardCache<T>& cache) const {
  cache.probabilities = softmax(run(batch, &cache));
  return cache.probabilities;
}

template <class T>
Gradients<T> Network<T>::backward(const ForwardCache<T>& cache, std::span<const int> labels) const {
  const int n = cache.batch;
  if (static_cast<int>(labels.size()) != n) {
    throw ShapeError("backward: " + std::to_string(labels.size()) + " labels for batch of " +
                     std::to_string(n));
  }
  Gradients<T> grads;
  // Backprop stops below the lowest trainable layer.
  std::size_t lowest = layers_.size();
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    if (layers_[li].trainable && layers_[li].has_parameters()) {
      lowest = li;
      break;
    }
  }
  if (lowest == layers_.size()) return grads;

  const int classes = config_.num_classes;
  Tensor<T> g({n, classes, 1, 1});
  for (int s = 0; s < n; ++s) {
    const int label = labels[s];
    if (label < 0 || label >= classes) throw ShapeError("label outside class range");
    for (int k = 0; k < classes; ++k) {
      const T p = cache.probabilities[static_cast<std::size_t>(s) * classes + k];
      g[static_cast<std::size_t>(s) * classes + k] = (p - (k == label ? T(1) : T(0))) / static_cast<T>(n);
    }
  }

  for (std::size_t li = layers_.size(); li-- > lowest;) {
    const auto& L = layers_[li];
    const Tensor<T>& x = cache.inputs[li];
    const std::size_t in_sz = L.input_size();
    const std::size_t out_sz = L.output_size();
    const bool need_input_grad = li > lowest;
    const bool want_params = L.trainable && L.has_parameters();
    Tensor<T> gin;
    if (need_input_grad) gin = Tensor<T>({n, L.in_c, L.in_h, L.in_w});
    LayerGradient<T> lg;
    if (want_params) {
      lg.layer = li;
      lg.weights = Tensor<T>(L.weights.shape);
      lg.bias = Tensor<T>(L.bias.shape);
    }

    switch (L.kind) {
      case LayerKind::Dense: {
        const Tensor<T>& yact = cache.activations[li];
        for (int s = 0; s < n; ++s) {
          const T* xi = x.data() + s * in_sz;
          for (int o = 0; o < L.out_c; ++o) {
            T go = g[s * out_sz + o];
            if (L.relu && !(yact[s * out_sz + o] > T(0))) go = T(0);
            if (go == T(0)) continue;
            const T* wrow = L.weights.data() + static_cast<std::size_t>(o) * L.in_c;
            if (want_params) {
              T* dw = lg.weights.data() + static_cast<std::size_t>(o) * L.in_c;
              for (int i = 0; i < L.in_c; ++i) dw[i] += go * xi[i];
              lg.bias[o] += go;
            }
            if (need_input_grad) {
              T* gi = gin.data() + s * in_sz;
              for (int i = 0; i < L.in_c; ++i) gi[i] += go * wrow[i];
            }
          }
        }
        break;
      }
      case LayerKind::GlobalAvgPool: {
        const std::size_t hw = static_cast<std::size_t>(L.in_h) * L.in_w;
        for (int s = 0; s < n; ++s) {
          const T* w = cache.pool_weights.data() + s * hw;
          for (int ch = 0; ch < L.in_c; ++ch) {
            const T v = g[s * out_sz + ch];
            T* p = gin.data() + s * in_sz + ch * hw;
            for (std::size_t i = 0; i < hw; ++i) p[i] = v * w[i];
          }
        }
        break;
      }
      case LayerKind::Conv: {
        const Tensor<T>& act = cache.activations[li];
        const std::size_t conv_sz = static_cast<std::size_t>(L.out_c) * L.conv_h * L.conv_w;
        std::vector<T> gconv(conv_sz);
        for (int s = 0; s < n; ++s) {
          std::fill(gconv.begin(), gconv.end(), T(0));
          const T* gs = g.data() + s * out_sz;
          if (L.pool) {
            const auto* am = cache.pool_argmax[li].data() + s * out_sz;
            for (std::size_t i = 0; i < out_sz; ++i) gconv[am[i]] += gs[i];
          } else {
            std::copy(gs, gs + out_sz, gconv.begin());
          }
          const T* a = act.data() + s * conv_sz;
          for (std::size_t i = 0; i < conv_sz; ++i) {
            if (!(a[i] > T(0))) gconv[i] = T(0);
          }
          // Frozen conv layers still pass gradient down when needed.
          std::vector<T> scratch_w, scratch_b;
          T* dw = lg.weights.data();
          T* db = lg.bias.data();
          if (!want_params) {
            scratch_w.assign(L.weights.size(), T(0));
            scratch_b.assign(L.bias.size(), T(0));
            dw = scratch_w.data();
            db = scratch_b.data();
          }
          conv_backward(x.data() + s * in_sz, L.in_c, L.in_h, L.in_w, L.weights.data(), L.out_c,
                        L.stride, gconv.data(), L.conv_h, L.conv_w, dw, db,
                        need_input_grad ? gin.data() + s * in_sz : nullptr);
        }
        break;
      }
    }
    if (want_params) grads.layers.push_back(std::move(lg));
    if (need_input_grad) g = std::move(gin);
  }
  std::reverse(grads.layers.begin(), grads.layers.end());
  return grads;
}

template <class T>
void Network<T>::sync_config_flags() {
  std::size_t conv = 0, dense = 0;
  for (const auto& L : layers_) {
    if (L.kind == LayerKind::Conv) config_.conv_blocks[conv++].trainable = L.trainable;
    if (L.kind == LayerKind::Dense) {
      if (L.name == "output") {
        config_.output_trainable = L.trainable;
      } else {
        config_.hidden[dense++].trainable = L.trainable;
      }
    }
  }
}

template <class T>
void Network<T>::set_all_trainable(bool trainable) {
  for (auto& L : layers_) {
    if (L.has_parameters()) L.trainable = trainable;
  }
  sync_config_flags();
}

template <class T>
void Network<T>::freeze_features() {
  for (auto& L : layers_) {
    if (L.kind == LayerKind::Conv) L.trainable = false;
  }
  sync_config_flags();
}

template <class T>
std::size_t Network<T>::parameter_count() const {
  std::size_t total = 0;
  for (const auto& L : layers_) total += L.weights.size() + L.bias.size();
  return total;
}

template <class T>
template <class U>
Network<U> Network<T>::cast() const {
  Network<U> out;
  out.config_ = config_;
  for (const auto& L : layers_) {
    Layer<U> M;
    M.name = L.name;
    M.kind = L.kind;
    M.trainable = L.trainable;
    M.relu = L.relu;
    M.pool = L.pool;
    M.stride = L.stride;
    M.in_c = L.in_c;
    M.in_h = L.in_h;
    M.in_w = L.in_w;
    M.conv_h = L.conv_h;
    M.conv_w = L.conv_w;
    M.out_c = L.out_c;
    M.out_h = L.out_h;
    M.out_w = L.out_w;
    M.weights.shape = L.weights.shape;
    M.weights.values.assign(L.weights.values.begin(), L.weights.values.end());
    M.bias.shape = L.bias.shape;
    M.bias.values.assign(L.bias.values.begin(), L.bias.values.end());
    out.layers_.push_back(std::move(M));
  }
  return out;
}

template <class T>
Tensor<T> softmax(const Tensor<T>& logits) {
  Tensor<T> p = logits;
  const int n = logits.shape.at(0);
  const int k = logits.shape.at(1);
  for (int s = 0; s < n; ++s) {
    T* row = p.data() + static_cast<std::size_t>(s) * k;
    const T m = *std::max_element(row, row + k);
    T sum = 0;
    for (int i = 0; i < k; ++i) {
      row[i] = std::exp(row[i] - m);
      sum += row[i];
    }
    for (int i = 0; i < k; ++i) row[i] /= sum;
  }
  return p;
}

template <class T>
T cross_entropy(const Tensor<T>& probabilities, std::span<const int> labels) {
  const int n = probabilities.shape.at(0);
  const int k = probabilities.shape.at(1);
  if (static_cast<int>(labels.size()) != n) throw ShapeError("cross_entropy: label count mismatch");
  T total = 0;
  for (int s = 0; s < n; ++s) {
    const T p = probabilities[static_cast<std::size_t>(s) * k + labels[s]];
    total -= std::log(std::clamp(p, T(1e-12), T(1)));
  }
  return total / static_cast<T>(n);
}

template struct Gradients<float>;
template struct Gradients<double>;
template class Network<float>;
template class Network<double>;
template Network<double> Network<float>::cast<double>() const;
template Network<float> Network<double>::cast<float>() const;
template Network<float> Network<float>::cast<float>() const;
template Network<double> Network<double>::cast<double>() const;
template Tensor<float> softmax(const Tensor<float>&);
template Tensor<double> softmax(const Tensor<double>&);
template float cross_entropy(const Tensor<float>&, std::span<const int>);
template double cross_entropy(const Tensor<double>&, std::span<const int>);

}  // namespace pavesat::model
