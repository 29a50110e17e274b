#pragma once

#include <filesystem>

#include "pavesat/metrics/metrics.hpp"

namespace pavesat::metrics {

/// Square CSV: header `true\predicted,<class names>`, one row per true class.
void write_confusion(const ConfusionMatrix& m, const std::filesystem::path& path);
ConfusionMatrix read_confusion(const std::filesystem::path& path);

void write_summary(const MetricsSummary& s, const std::filesystem::path& path);
MetricsSummary read_summary(const std::filesystem::path& path);

}  // namespace pavesat::metrics
