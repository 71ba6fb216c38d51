// Compares the OpenMP gap-search and field-grid kernels against their serial
// reference paths on the two bundled synthetic datasets. Usage:
//   bench_kernels [repetitions]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "pcad/evaluation.hpp"
#include "pcad/field_grid.hpp"
#include "pcad/model_registry.hpp"
#include "pcad/scenarios.hpp"

namespace {

using namespace pcad;

double field_ms(bool parallel, const ModelConfig& config, const FieldScenario& scenario,
                const GridSpec& spec, int repetitions) {
  const auto begin = std::chrono::steady_clock::now();
  for (int rep = 0; rep < repetitions; ++rep) {
    const RiskFieldGrid grid = parallel
                                   ? risk_field(ModelId::kPcad, config, scenario, spec)
                                   : risk_field_serial(ModelId::kPcad, config, scenario, spec);
    if (grid.values.empty()) std::abort();  // keep the work observable
  }
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin)
             .count() /
         repetitions;
}

}  // namespace

int main(int argc, char** argv) {
  const int repetitions = argc > 1 ? std::atoi(argv[1]) : 3;

  std::printf("gap search, parallel coarse/fine passes vs serial reference\n");
  std::printf("%-10s %-12s %10s %14s\n", "dataset", "kernel", "steps", "ms/step");
  for (DatasetProfile profile : {DatasetProfile::kMerging, DatasetProfile::kObstacle}) {
    const std::vector<Event> events = profile == DatasetProfile::kMerging
                                          ? make_merging_dataset(1, MergingOptions{})
                                          : make_obstacle_dataset(1, ObstacleOptions{});
    const ModelConfig config = ModelConfig::defaults(profile);
    double parallel_ms = 0.0, serial_ms = 0.0;
    for (const BenchmarkRow& row : benchmark_all(events, config, repetitions)) {
      if (row.name != "pcad" && row.name != "pcad_serial") continue;
      if (row.name == "pcad") parallel_ms = row.ms_per_snapshot;
      else serial_ms = row.ms_per_snapshot;
      std::printf("%-10s %-12s %10zu %14.4f\n", to_string(profile).c_str(), row.name.c_str(),
                  row.snapshots, row.ms_per_snapshot);
    }
    std::printf("%-10s speedup x%.2f\n", to_string(profile).c_str(), serial_ms / parallel_ms);
  }

  std::printf("\nrisk field, parallel cells vs serial reference\n");
  GridSpec spec;
  spec.x_min = -10.0;
  spec.x_max = 80.0;
  spec.y_min = -10.0;
  spec.y_max = 10.0;
  spec.resolution = 0.5;
  const FieldScenario scenario;
  const ModelConfig config = ModelConfig::defaults(DatasetProfile::kMerging);
  const double parallel_ms = field_ms(true, config, scenario, spec, repetitions);
  const double serial_ms = field_ms(false, config, scenario, spec, repetitions);
  std::printf("%zu cells: parallel %.1f ms, serial %.1f ms, speedup x%.2f\n",
              static_cast<std::size_t>(((spec.x_max - spec.x_min) / spec.resolution + 1) *
                                       ((spec.y_max - spec.y_min) / spec.resolution + 1)),
              parallel_ms, serial_ms, serial_ms / parallel_ms);
  return 0;
}
