#include "pcad/params_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace pcad {
namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

#define PARAM(field) \
  [](const ModelConfig& c) { return c.field; }, [](ModelConfig& c, double v) { c.field = v; }

const std::vector<ParamAccessor> kPcadParams = {
    {"sigma_neighbour_x", PARAM(pcad.sigma_neighbour_x)},
    {"sigma_neighbour_y", PARAM(pcad.sigma_neighbour_y)},
    {"sigma_subject_x", PARAM(pcad.sigma_subject_x)},
    {"sigma_subject_y", PARAM(pcad.sigma_subject_y)},
    {"anticipation_subject", PARAM(pcad.anticipation_subject)},
    {"anticipation_neighbour", PARAM(pcad.anticipation_neighbour)},
    {"alpha", PARAM(pcad.alpha)},
    {"v_ref", PARAM(pcad.v_ref)},
    {"bound_forward", PARAM(pcad.bounds.forward)},
    {"bound_backward", PARAM(pcad.bounds.backward)},
    {"bound_left", PARAM(pcad.bounds.left)},
    {"bound_right", PARAM(pcad.bounds.right)},
    {"search_coarse_step", PARAM(pcad_search.coarse_step)},
    {"search_fine_step", PARAM(pcad_search.fine_step)},
};

const std::vector<ParamAccessor> kRprParams = {
    {"c0", PARAM(rpr.c0)},
    {"c1", PARAM(rpr.c1)},
    {"c2", PARAM(rpr.c2)},
    {"validity_gap", PARAM(rpr.validity_gap)},
};

const std::vector<ParamAccessor> kPpdrfParams = {
    {"sigma_acc_x", PARAM(ppdrf.sigma_acc_x)},
    {"sigma_acc_y", PARAM(ppdrf.sigma_acc_y)},
    {"potential_range", PARAM(ppdrf.potential_range)},
    {"k_potential", PARAM(ppdrf.k_potential)},
    {"min_exposure", PARAM(ppdrf.min_exposure)},
};

const std::vector<ParamAccessor> kDrfParams = {
    {"steepness", PARAM(drf.steepness)},
    {"preview_time", PARAM(drf.preview_time)},
    {"width_slope", PARAM(drf.width_slope)},
    {"width_offset", PARAM(drf.width_offset)},
    {"severity", PARAM(drf.severity)},
    {"cell_size", PARAM(drf.cell_size)},
};

#undef PARAM

}  // namespace

const std::vector<ParamAccessor>& parameter_accessors(ModelId id) {
  switch (id) {
    case ModelId::kPcad:
      return kPcadParams;
    case ModelId::kRpr:
      return kRprParams;
    case ModelId::kPpdrf:
      return kPpdrfParams;
    case ModelId::kDrf:
      return kDrfParams;
  }
  throw std::invalid_argument("unknown model id");
}

void apply_param(const std::string& key, double value, ProfileConfigs& configs) {
  const auto first_dot = key.find('.');
  const auto second_dot = first_dot == std::string::npos ? std::string::npos
                                                         : key.find('.', first_dot + 1);
  if (second_dot == std::string::npos)
    throw std::invalid_argument("expected model.profile.param, got '" + key + "'");
  const ModelId id = model_from_string(key.substr(0, first_dot));
  const DatasetProfile profile =
      profile_from_string(key.substr(first_dot + 1, second_dot - first_dot - 1));
  const std::string name = key.substr(second_dot + 1);
  for (const ParamAccessor& accessor : parameter_accessors(id)) {
    if (accessor.name == name) {
      accessor.set(configs.by_profile(profile), value);
      return;
    }
  }
  throw std::invalid_argument("unknown parameter '" + name + "' for model " + to_string(id));
}

void apply_params_file(const std::string& path, ProfileConfigs& configs) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value_text = trim(line.substr(eq + 1));
    const char* begin = value_text.c_str();
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad number '" +
                               value_text + "'");
    try {
      apply_param(key, value, configs);
    } catch (const std::invalid_argument& err) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + err.what());
    }
  }
}

std::string params_to_text(const ProfileConfigs& configs) {
  std::string out;
  for (ModelId id : kAllModels) {
    for (DatasetProfile profile : {DatasetProfile::kMerging, DatasetProfile::kObstacle}) {
      const ModelConfig& config = configs.by_profile(profile);
      for (const ParamAccessor& accessor : parameter_accessors(id))
        out += to_string(id) + "." + to_string(profile) + "." + accessor.name + " = " +
               fmt17(accessor.get(config)) + "\n";
    }
  }
  return out;
}

}  // namespace pcad
