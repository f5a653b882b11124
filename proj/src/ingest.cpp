#include "gli/ingest.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace gli {

std::vector<ContactEvent> parse_contacts(std::istream& in, bool strict, std::vector<std::string>* errors) {
  std::vector<ContactEvent> events;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    ContactEvent e;
    std::string tstr;
    if (!(ls >> tstr >> e.u >> e.v)) {
      std::string msg = "line " + std::to_string(lineno) + ": expected 't u v'";
      if (strict) fail(Errc::parse_error, msg);
      if (errors) errors->push_back(msg);
      continue;
    }
    try {
      std::size_t used = 0;
      e.t = std::stoll(tstr, &used);
      if (used != tstr.size()) throw std::invalid_argument(tstr);
    } catch (const std::exception&) {
      std::string msg = "line " + std::to_string(lineno) + ": bad timestamp '" + tstr + "'";
      if (strict) fail(Errc::parse_error, msg);
      if (errors) errors->push_back(msg);
      continue;
    }
    if (e.t < 0 || e.u == e.v) {
      std::string msg = "line " + std::to_string(lineno) + ": invalid event";
      if (strict) fail(Errc::parse_error, msg);
      if (errors) errors->push_back(msg);
      continue;
    }
    events.push_back(std::move(e));
  }
  return events;
}

MultiplexGraph aggregate_snapshots(const std::vector<ContactEvent>& events, const SnapshotSpec& spec,
                                   std::vector<long long>* window_starts) {
  if (spec.window <= 0) fail(Errc::invalid_argument, "window must be positive");
  if (spec.min_events < 1) fail(Errc::invalid_argument, "min_events must be >= 1");
  if (events.empty()) fail(Errc::invalid_argument, "no events to aggregate");

  // Global node universe, sorted, shared by every layer.
  std::set<std::string> labels;
  for (const auto& e : events) {
    labels.insert(e.u);
    labels.insert(e.v);
  }
  std::vector<std::string> ids(labels.begin(), labels.end());
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);

  // window start -> (pair -> contact count)
  std::map<long long, std::map<std::pair<int, int>, int>> windows;
  long long min_w = 0, max_w = 0;
  bool first = true;
  for (const auto& e : events) {
    long long w = (e.t / spec.window) * spec.window;
    int i = index[e.u], j = index[e.v];
    if (i > j) std::swap(i, j);
    ++windows[w][{i, j}];
    min_w = first ? w : std::min(min_w, w);
    max_w = first ? w : std::max(max_w, w);
    first = false;
  }
  if (spec.keep_empty)
    for (long long w = min_w; w <= max_w; w += spec.window) windows.try_emplace(w);

  MultiplexGraph g;
  g.n = static_cast<int>(ids.size());
  g.node_ids = ids;
  if (window_starts) window_starts->clear();
  for (const auto& [start, pairs] : windows) {
    AdjacencyMatrix a(g.n);
    for (const auto& [pair, count] : pairs)
      if (count >= spec.min_events) a.set(pair.first, pair.second, true);
    g.layers.push_back(std::move(a));
    if (window_starts) window_starts->push_back(start);
  }
  return g;
}

}  // namespace gli
