#pragma once

#include <string>
#include <vector>

#include "pcad/scenarios.hpp"

namespace pcad {

// Writes content via a temporary file in the same directory plus rename, so
// readers never observe a partial file.
void atomic_write_file(const std::string& path, const std::string& content);

// One row per sample: t,xs,ys,vxs,vys,axs,ays,xn,yn,vxn,vyn,axn,ayn,kind.
// Floats print with 17 significant digits, so a write/read cycle is
// bit-exact. The kind column is the neighbour kind of that sample.
std::string event_to_csv(const Event& event);

// Design parameters, body dimensions, masses, and ratings (rating keys are
// omitted while unrated).
std::string event_sidecar_json(const Event& event);

// dir/<id>.csv and dir/<id>.json.
void write_event(const Event& event, const std::string& dir);

Event read_event(const std::string& csv_path, const std::string& sidecar_path);

// Reader for a bare trajectory CSV without a sidecar: body dimensions and
// masses take defaults, the event kind is inferred from the rows (any moving
// neighbour sample makes it a merging event).
Event read_trajectory_csv(const std::string& csv_path);

void write_dataset(const std::vector<Event>& events, const std::string& dir);

// Loads every <name>.csv + <name>.json pair in dir, sorted by event id.
std::vector<Event> load_dataset(const std::string& dir);

}  // namespace pcad
