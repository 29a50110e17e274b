// Writes a synthetic textured pavement dataset into a working directory.
#include <CLI11.hpp>

#include <iostream>

#include "pavesat/error.hpp"
#include "pavesat/pipeline/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate synthetic pavement section images"};
  std::string out;
  pavesat::pipeline::SyntheticConfig cfg;
  std::vector<int> counts;
  app.add_option("--out", out, "Working directory to populate")->required();
  app.add_option("--seed", cfg.seed, "Generator seed");
  app.add_option("--size", cfg.size, "Image edge length in pixels")->check(CLI::Range(8, 4096));
  app.add_option("--counts", counts, "Images per class, VeryGood..VeryPoor")->expected(5);
  app.add_option("--route", cfg.route, "Route name used in section keys");
  CLI11_PARSE(app, argc, argv);

  if (!counts.empty()) std::copy(counts.begin(), counts.end(), cfg.class_counts.begin());
  try {
    const auto s = pavesat::pipeline::write_synthetic(out, cfg);
    std::cout << "wrote " << s.images << " images to " << out << "\n";
  } catch (const pavesat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
