#include "pcad/model_registry.hpp"

#include <stdexcept>

namespace pcad {

std::string to_string(ModelId id) {
  switch (id) {
    case ModelId::kPcad:
      return "pcad";
    case ModelId::kRpr:
      return "rpr";
    case ModelId::kPpdrf:
      return "ppdrf";
    case ModelId::kDrf:
      return "drf";
  }
  throw std::invalid_argument("unknown model id");
}

std::string to_string(DatasetProfile profile) {
  return profile == DatasetProfile::kMerging ? "merging" : "obstacle";
}

ModelId model_from_string(const std::string& name) {
  for (ModelId id : kAllModels) {
    if (to_string(id) == name) return id;
  }
  throw std::invalid_argument("unknown model: " + name);
}

DatasetProfile profile_from_string(const std::string& name) {
  if (name == "merging") return DatasetProfile::kMerging;
  if (name == "obstacle") return DatasetProfile::kObstacle;
  throw std::invalid_argument("unknown profile: " + name);
}

ModelConfig ModelConfig::defaults(DatasetProfile profile) {
  ModelConfig config;
  if (profile == DatasetProfile::kMerging) {
    config.pcad = PcadParams::merging_defaults();
    config.rpr = RprParams::merging_defaults();
    config.drf = DrfParams::merging_defaults();
  } else {
    config.pcad = PcadParams::obstacle_defaults();
    config.rpr = RprParams::obstacle_defaults();
    config.drf = DrfParams::obstacle_defaults();
  }
  config.ppdrf = profile == DatasetProfile::kMerging ? PpdrfParams::merging_defaults()
                                                     : PpdrfParams::obstacle_defaults();
  config.pcad_search = SearchConfig::point_defaults();
  return config;
}

double risk_value(ModelId id, const ModelConfig& config, const SceneSnapshot& s) {
  switch (id) {
    case ModelId::kPcad:
      return pcad_risk(s, config.pcad, config.pcad_search);
    case ModelId::kRpr:
      return rpr_continuous(s, config.rpr);
    case ModelId::kPpdrf:
      return ppdrf_risk(s, config.ppdrf);
    case ModelId::kDrf:
      return drf_risk(s, config.drf);
  }
  throw std::invalid_argument("unknown model id");
}

std::vector<double> risk_trace(ModelId id, const ModelConfig& config,
                               const std::vector<SceneSnapshot>& samples) {
  std::vector<double> trace;
  trace.reserve(samples.size());
  for (const SceneSnapshot& s : samples) trace.push_back(risk_value(id, config, s));
  return trace;
}

}  // namespace pcad
