#pragma once

#include <filesystem>

#include "pavesat/model/network.hpp"

namespace pavesat::model {

/// Little-endian weights file:
///   "PVSW" u32 version u32 layer_count u32 channels u32 height u32 width u32 classes
///   u32 input flags (1 = trailing mask plane)
///   per layer: u32 name_len, name, u8 kind, u8 flags (1 trainable, 2 relu, 4 pool),
///              u32 stride, u32 ndim, u32 dims[ndim], f32 weights[...],
///              u32 bias_count, f32 bias[...]
void save_network(const Network<float>& net, const std::filesystem::path& path);
Network<float> load_network(const std::filesystem::path& path);

}  // namespace pavesat::model
