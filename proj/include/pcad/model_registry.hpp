#pragma once

#include <string>
#include <vector>

#include "pcad/baselines.hpp"
#include "pcad/pcad_model.hpp"
#include "pcad/vehicle.hpp"

namespace pcad {

enum class ModelId { kPcad, kRpr, kPpdrf, kDrf };

enum class DatasetProfile { kMerging, kObstacle };

constexpr ModelId kAllModels[] = {ModelId::kPcad, ModelId::kRpr, ModelId::kPpdrf, ModelId::kDrf};

std::string to_string(ModelId id);
std::string to_string(DatasetProfile profile);
ModelId model_from_string(const std::string& name);
DatasetProfile profile_from_string(const std::string& name);

// Parameter sets for all four models plus the PCAD search settings, so one
// object fully determines any model's output on a snapshot.
struct ModelConfig {
  PcadParams pcad;
  RprParams rpr;
  PpdrfParams ppdrf;
  DrfParams drf;
  SearchConfig pcad_search;

  static ModelConfig defaults(DatasetProfile profile);
};

double risk_value(ModelId id, const ModelConfig& config, const SceneSnapshot& s);

std::vector<double> risk_trace(ModelId id, const ModelConfig& config,
                               const std::vector<SceneSnapshot>& samples);

// RPR already predicts on the 0-10 rating scale; the other models produce
// arbitrary physical units and are min-max scaled before comparison with
// ratings.
inline bool native_rating_scale(ModelId id) { return id == ModelId::kRpr; }

}  // namespace pcad
