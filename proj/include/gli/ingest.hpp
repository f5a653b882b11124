#pragma once

// Timestamped contact streams (one "t u v" line per contact) aggregated into
// node-aligned hourly multiplex snapshots.

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "gli/core.hpp"

namespace gli {

struct ContactEvent {
  long long t = 0;  // seconds
  std::string u, v;
};

struct SnapshotSpec {
  long long window = 3600;    // seconds per layer
  int min_events = 1;         // contacts required for an edge
  bool keep_empty = false;    // retain windows with no events
};

// Whitespace-separated "t u v" with optional trailing columns; '#' lines are
// comments. In strict mode the first malformed line throws ParseError;
// otherwise malformed lines are collected into *errors with line numbers.
std::vector<ContactEvent> parse_contacts(std::istream& in, bool strict = false,
                                         std::vector<std::string>* errors = nullptr);

// One layer per window holding >= 1 event (all windows when keep_empty);
// node universe is the sorted union of labels over all events, identical in
// every layer. window_starts, when given, receives each layer's start time.
MultiplexGraph aggregate_snapshots(const std::vector<ContactEvent>& events, const SnapshotSpec& spec,
                                   std::vector<long long>* window_starts = nullptr);

}  // namespace gli
