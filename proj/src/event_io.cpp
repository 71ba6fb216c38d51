#include "pcad/event_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pcad {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kCsvHeader[] = "t,xs,ys,vxs,vys,axs,ays,xn,yn,vxn,vyn,axn,ayn,kind";

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string kind_name(NeighbourKind kind) {
  return kind == NeighbourKind::kMovingVehicle ? "moving_vehicle" : "static_object";
}

NeighbourKind kind_from_name(const std::string& name, const std::string& file, long line) {
  if (name == "moving_vehicle") return NeighbourKind::kMovingVehicle;
  if (name == "static_object") return NeighbourKind::kStaticObject;
  throw std::runtime_error(file + ":" + std::to_string(line) + ": unknown kind '" + name + "'");
}

std::string event_kind_name(EventKind kind) {
  return kind == EventKind::kMergingBrake ? "merging_brake" : "obstacle_pop";
}

EventKind event_kind_from_name(const std::string& name, const std::string& file) {
  if (name == "merging_brake") return EventKind::kMergingBrake;
  if (name == "obstacle_pop") return EventKind::kObstaclePop;
  throw std::runtime_error(file + ": unknown event kind '" + name + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& field, const std::string& file, long line) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw std::runtime_error(file + ":" + std::to_string(line) + ": bad number '" + field + "'");
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Samples parsed from a bare CSV; dims/masses/ratings come from elsewhere.
void parse_rows(const std::string& csv_path, Event& event) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error(csv_path + ": cannot open");
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error(csv_path + ":1: empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw std::runtime_error(csv_path + ":1: expected header '" + kCsvHeader + "'");
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 14)
      throw std::runtime_error(csv_path + ":" + std::to_string(line_no) + ": expected 14 fields, got " +
                               std::to_string(fields.size()));
    double v[13];
    for (int i = 0; i < 13; ++i) v[i] = parse_double(fields[i], csv_path, line_no);
    SceneSnapshot s;
    s.subject = {{v[1], v[2]}, {v[3], v[4]}, {v[5], v[6]}};
    s.neighbour = {{v[7], v[8]}, {v[9], v[10]}, {v[11], v[12]}};
    s.neighbour_kind = kind_from_name(fields[13], csv_path, line_no);
    event.times.push_back(v[0]);
    event.samples.push_back(s);
  }
  if (event.samples.empty()) throw std::runtime_error(csv_path + ": no samples");
}

}  // namespace

void atomic_write_file(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp.string() + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(tmp.string() + ": write failed");
  }
  fs::rename(tmp, target);
}

std::string event_to_csv(const Event& event) {
  if (event.samples.size() != event.times.size() || event.samples.empty())
    throw std::invalid_argument("event " + event.id + ": times/samples mismatch or empty");
  std::string out = kCsvHeader;
  out += '\n';
  for (std::size_t i = 0; i < event.samples.size(); ++i) {
    const SceneSnapshot& s = event.samples[i];
    const double row[13] = {event.times[i],
                            s.subject.position.x,
                            s.subject.position.y,
                            s.subject.velocity.x,
                            s.subject.velocity.y,
                            s.subject.acceleration.x,
                            s.subject.acceleration.y,
                            s.neighbour.position.x,
                            s.neighbour.position.y,
                            s.neighbour.velocity.x,
                            s.neighbour.velocity.y,
                            s.neighbour.acceleration.x,
                            s.neighbour.acceleration.y};
    for (double v : row) {
      out += fmt17(v);
      out += ',';
    }
    out += kind_name(s.neighbour_kind);
    out += '\n';
  }
  return out;
}

std::string event_sidecar_json(const Event& event) {
  if (event.samples.empty()) throw std::invalid_argument("event " + event.id + ": no samples");
  const SceneSnapshot& first = event.samples.front();
  json j;
  j["id"] = event.id;
  j["kind"] = event_kind_name(event.kind);
  j["design"] = event.design;
  j["subject_dims"] = {{"length", first.subject_dims.length}, {"width", first.subject_dims.width}};
  j["neighbour_dims"] = {{"length", first.neighbour_dims.length},
                         {"width", first.neighbour_dims.width}};
  j["subject_mass"] = first.subject_mass;
  j["neighbour_mass"] = first.neighbour_mass;
  if (event.event_rating >= 0) j["event_rating"] = event.event_rating;
  if (event.peak_rating >= 0) j["peak_rating"] = event.peak_rating;
  return j.dump(2) + "\n";
}

void write_event(const Event& event, const std::string& dir) {
  if (event.id.empty()) throw std::invalid_argument("event without id");
  const fs::path base = fs::path(dir) / event.id;
  atomic_write_file(base.string() + ".csv", event_to_csv(event));
  atomic_write_file(base.string() + ".json", event_sidecar_json(event));
}

Event read_event(const std::string& csv_path, const std::string& sidecar_path) {
  json j;
  try {
    j = json::parse(read_file(sidecar_path));
  } catch (const json::parse_error& err) {
    throw std::runtime_error(sidecar_path + ": " + err.what());
  }

  Event event;
  try {
    event.id = j.at("id").get<std::string>();
    event.kind = event_kind_from_name(j.at("kind").get<std::string>(), sidecar_path);
    event.design = j.at("design").get<std::map<std::string, double>>();
    event.event_rating = j.value("event_rating", -1.0);
    event.peak_rating = j.value("peak_rating", -1.0);
    parse_rows(csv_path, event);
    const BodyDims subject_dims{j.at("subject_dims").at("length").get<double>(),
                                j.at("subject_dims").at("width").get<double>()};
    const BodyDims neighbour_dims{j.at("neighbour_dims").at("length").get<double>(),
                                  j.at("neighbour_dims").at("width").get<double>()};
    const double subject_mass = j.at("subject_mass").get<double>();
    const double neighbour_mass = j.at("neighbour_mass").get<double>();
    for (SceneSnapshot& s : event.samples) {
      s.subject_dims = subject_dims;
      s.neighbour_dims = neighbour_dims;
      s.subject_mass = subject_mass;
      s.neighbour_mass = neighbour_mass;
    }
  } catch (const json::exception& err) {
    throw std::runtime_error(sidecar_path + ": " + err.what());
  }
  return event;
}

Event read_trajectory_csv(const std::string& csv_path) {
  Event event;
  event.id = fs::path(csv_path).stem().string();
  parse_rows(csv_path, event);
  event.kind = EventKind::kObstaclePop;
  for (const SceneSnapshot& s : event.samples)
    if (s.neighbour_kind == NeighbourKind::kMovingVehicle) {
      event.kind = EventKind::kMergingBrake;
      break;
    }
  return event;
}

void write_dataset(const std::vector<Event>& events, const std::string& dir) {
  for (const Event& event : events) write_event(event, dir);
}

std::vector<Event> load_dataset(const std::string& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error(dir + ": not a directory");
  std::vector<fs::path> csv_files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      csv_files.push_back(entry.path());
  std::sort(csv_files.begin(), csv_files.end());

  std::vector<Event> events;
  for (const fs::path& csv : csv_files) {
    fs::path sidecar = csv;
    sidecar.replace_extension(".json");
    if (!fs::exists(sidecar))
      throw std::runtime_error(csv.string() + ": missing sidecar " + sidecar.string());
    events.push_back(read_event(csv.string(), sidecar.string()));
  }
  if (events.empty()) throw std::runtime_error(dir + ": no event files");
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.id < b.id; });
  return events;
}

}  // namespace pcad
