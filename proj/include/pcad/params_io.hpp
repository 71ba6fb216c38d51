#pragma once

#include <string>
#include <vector>

#include "pcad/model_registry.hpp"

namespace pcad {

// Model parameters for both dataset profiles; the unit a params file
// configures and a calibration result is saved as.
struct ProfileConfigs {
  ModelConfig merging = ModelConfig::defaults(DatasetProfile::kMerging);
  ModelConfig obstacle = ModelConfig::defaults(DatasetProfile::kObstacle);

  ModelConfig& by_profile(DatasetProfile profile) {
    return profile == DatasetProfile::kMerging ? merging : obstacle;
  }
  const ModelConfig& by_profile(DatasetProfile profile) const {
    return profile == DatasetProfile::kMerging ? merging : obstacle;
  }
};

struct ParamAccessor {
  std::string name;
  double (*get)(const ModelConfig&);
  void (*set)(ModelConfig&, double);
};

// Every numeric parameter of one model, as exposed in params files.
const std::vector<ParamAccessor>& parameter_accessors(ModelId id);

// Applies one "model.profile.param" key. Unknown keys are rejected.
void apply_param(const std::string& key, double value, ProfileConfigs& configs);

// Key/value file: one "model.profile.param = value" per line, '#' comments.
// Later lines override earlier ones. Errors carry path:line positions.
void apply_params_file(const std::string& path, ProfileConfigs& configs);

// Full dump of every parameter, reloadable by apply_params_file.
std::string params_to_text(const ProfileConfigs& configs);

}  // namespace pcad
