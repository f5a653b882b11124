#include "gli/io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gli::io {

namespace fs = std::filesystem;

void write_text(const std::string& path, const std::string& content) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot open '" + path + "' for writing", false);
  out << content;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_text_auto(const std::string& path) {
  std::string raw = read_text(path);
  if (raw.size() < 2 || static_cast<unsigned char>(raw[0]) != 0x1f || static_cast<unsigned char>(raw[1]) != 0x8b)
    return raw;
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) fail(Errc::io_error, "zlib init failed", false);
  zs.next_in = reinterpret_cast<Bytef*>(raw.data());
  zs.avail_in = static_cast<uInt>(raw.size());
  std::string out;
  char buf[1 << 15];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      fail(Errc::parse_error, "gzip stream in '" + path + "' is corrupt");
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
  }
  inflateEnd(&zs);
  return out;
}

void write_adjacency(const std::string& path, const AdjacencyMatrix& a) {
  std::ostringstream out;
  out << "# gli-adj v1 n=" << a.n() << "\n";
  for (int i = 0; i < a.n(); ++i)
    for (int j = i + 1; j < a.n(); ++j)
      if (a.at(i, j)) out << i << " " << j << "\n";
  write_text(path, out.str());
}

AdjacencyMatrix read_adjacency(const std::string& path) {
  std::string text = read_text_auto(path);
  std::istringstream in(text);
  std::string first;
  std::getline(in, first);
  if (first.rfind("# gli-adj v1", 0) == 0) {
    auto pos = first.find("n=");
    if (pos == std::string::npos) fail(Errc::parse_error, "adjacency header missing n= in '" + path + "'");
    int n = std::atoi(first.c_str() + pos + 2);
    if (n <= 0) fail(Errc::parse_error, "bad node count in '" + path + "'");
    AdjacencyMatrix a(n);
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      int i, j;
      if (std::sscanf(line.c_str(), "%d %d", &i, &j) != 2 || i < 0 || j < 0 || i >= n || j >= n || i == j)
        fail(Errc::parse_error, "bad edge at " + path + ":" + std::to_string(lineno));
      a.set(i, j, true);
    }
    return a;
  }
  // Dense CSV fallback: rows of comma-separated 0/1.
  std::vector<std::vector<int>> rows;
  std::string line = first;
  do {
    if (line.empty()) continue;
    std::vector<int> row;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) row.push_back(std::atoi(tok.c_str()));
    if (!row.empty()) rows.push_back(std::move(row));
  } while (std::getline(in, line));
  int n = static_cast<int>(rows.size());
  if (n == 0) fail(Errc::parse_error, "empty adjacency file '" + path + "'");
  AdjacencyMatrix a(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) fail(Errc::parse_error, "non-square CSV matrix in '" + path + "'");
    for (int j = 0; j < n; ++j) {
      if (rows[i][j] != 0 && rows[i][j] != 1) fail(Errc::parse_error, "CSV entries must be 0/1 in '" + path + "'");
      if (rows[i][j] != rows[j][i]) fail(Errc::not_symmetric, "CSV matrix is not symmetric in '" + path + "'");
      if (i == j && rows[i][j] != 0) fail(Errc::parse_error, "CSV matrix has a self-loop in '" + path + "'");
      if (j > i && rows[i][j]) a.set(i, j, true);
    }
  }
  return a;
}

json graphon_to_json(const Graphon& g) {
  if (g.is_step()) return json{{"step", {{"edges", g.edges()}, {"values", g.values()}}}};
  static const char* registry[] = {"constant", "product", "scaled_product", "poly", "affine", "expdecay"};
  for (const char* name : registry)
    if (g.label() == name) return json{{"name", g.label()}, {"params", g.params()}};
  fail(Errc::io_error,
       "graphon '" + g.label() + "' is recipe-internal; serialize the owning system with its recipe");
}

Graphon graphon_from_json(const json& j) {
  if (j.contains("step")) {
    return Graphon::step(j.at("step").at("edges").get<std::vector<double>>(),
                         j.at("step").at("values").get<std::vector<double>>());
  }
  return Graphon::from_registry(j.at("name").get<std::string>(),
                                j.value("params", std::vector<double>{}));
}

json recipe_to_json(const GenRecipe& r) {
  json j;
  j["n"] = r.n;
  j["seed"] = r.seed;
  switch (r.kind) {
    case GenRecipe::Kind::independent:
    case GenRecipe::Kind::coupled: {
      j["kind"] = r.kind == GenRecipe::Kind::independent ? "independent" : "coupled";
      if (r.kind == GenRecipe::Kind::coupled) j["rho"] = r.rho;
      json gs = json::array();
      for (const auto& g : r.graphons) gs.push_back(graphon_to_json(g));
      j["graphons"] = gs;
      break;
    }
    case GenRecipe::Kind::percolation:
      j["kind"] = "percolation";
      j["base"] = graphon_to_json(r.base);
      j["keeps"] = r.keeps;
      break;
    case GenRecipe::Kind::input_output: {
      j["kind"] = "input_output";
      j["base"] = graphon_to_json(r.base);
      json links = json::array();
      for (const auto& l : r.links) links.push_back(json{{"name", l.name}, {"params", l.params}});
      j["links"] = links;
      break;
    }
    case GenRecipe::Kind::xor_pair: {
      j["kind"] = "xor_pair";
      j["rho"] = r.rho;
      json gs = json::array();
      for (const auto& g : r.graphons) gs.push_back(graphon_to_json(g));
      j["graphons"] = gs;
      break;
    }
    case GenRecipe::Kind::sbm_layers:
      j["kind"] = "sbm_layers";
      j["k"] = r.sbm_k;
      j["theta"] = r.sbm_theta;
      j["z"] = r.sbm_z;
      break;
  }
  return j;
}

GenRecipe recipe_from_json(const json& j) {
  GenRecipe r;
  r.n = j.value("n", 0);
  r.seed = j.value("seed", std::uint64_t{0});
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "independent" || kind == "coupled") {
    r.kind = kind == "independent" ? GenRecipe::Kind::independent : GenRecipe::Kind::coupled;
    r.rho = j.value("rho", 1.0);
    for (const auto& g : j.at("graphons")) r.graphons.push_back(graphon_from_json(g));
  } else if (kind == "percolation") {
    r.kind = GenRecipe::Kind::percolation;
    r.base = graphon_from_json(j.at("base"));
    r.keeps = j.at("keeps").get<std::vector<double>>();
  } else if (kind == "input_output") {
    r.kind = GenRecipe::Kind::input_output;
    r.base = graphon_from_json(j.at("base"));
    for (const auto& l : j.at("links")) {
      Link link;
      link.name = l.at("name").get<std::string>();
      link.params = l.value("params", std::vector<double>{});
      r.links.push_back(link);
    }
  } else if (kind == "xor_pair") {
    r.kind = GenRecipe::Kind::xor_pair;
    r.rho = j.value("rho", 1.0);
    for (const auto& g : j.at("graphons")) r.graphons.push_back(graphon_from_json(g));
  } else if (kind == "sbm_layers") {
    r.kind = GenRecipe::Kind::sbm_layers;
    r.sbm_k = j.at("k").get<int>();
    r.sbm_theta = j.at("theta").get<std::vector<double>>();
    r.sbm_z = j.at("z").get<std::vector<int>>();
  } else {
    fail(Errc::parse_error, "unknown recipe kind '" + kind + "'");
  }
  return r;
}

json system_to_json(const GraphonSystem& sys, const GenRecipe* provenance) {
  json j;
  j["format"] = "gli-system";
  j["version"] = 1;
  j["d"] = sys.dim();
  j["family"] = sys.family();
  if (sys.step_shared()) {
    j["representation"] = "step";
    json values;
    for (unsigned mask = 1; mask < (1u << sys.dim()); ++mask)
      values[subset_name(mask, sys.dim())] = sys.subset(mask).values();
    j["step"] = {{"edges", sys.shared_edges()}, {"values", values}};
    return j;
  }
  if (provenance) {
    j["representation"] = "recipe";
    j["recipe"] = recipe_to_json(*provenance);
    return j;
  }
  j["representation"] = "subsets";
  json subsets;
  for (unsigned mask = 1; mask < (1u << sys.dim()); ++mask)
    subsets[subset_name(mask, sys.dim())] = graphon_to_json(sys.subset(mask));
  j["subsets"] = subsets;
  return j;
}

GraphonSystem system_from_json(const json& j) {
  if (j.value("format", "") != "gli-system") fail(Errc::parse_error, "not a gli-system document");
  int d = j.at("d").get<int>();
  std::string rep = j.at("representation").get<std::string>();
  if (rep == "recipe") return recipe_from_json(j.at("recipe")).true_system();
  std::vector<Graphon> by_mask(std::size_t{1} << d);
  if (rep == "step") {
    auto edges = j.at("step").at("edges").get<std::vector<double>>();
    for (unsigned mask = 1; mask < by_mask.size(); ++mask) {
      auto values = j.at("step").at("values").at(subset_name(mask, d)).get<std::vector<double>>();
      by_mask[mask] = Graphon::step(edges, values);
    }
  } else if (rep == "subsets") {
    for (unsigned mask = 1; mask < by_mask.size(); ++mask)
      by_mask[mask] = graphon_from_json(j.at("subsets").at(subset_name(mask, d)));
  } else {
    fail(Errc::parse_error, "unknown system representation '" + rep + "'");
  }
  auto sys = GraphonSystem::from_subsets(d, std::move(by_mask));
  sys.set_family(j.value("family", ""));
  return sys;
}

std::string system_hash(const GraphonSystem& sys, const GenRecipe* provenance) {
  return fnv1a_hex(system_to_json(sys, provenance).dump());
}

std::string write_multiplex(const std::string& out_dir, const MultiplexGraph& g, const json& provenance,
                            const std::vector<std::string>& layer_labels) {
  g.check();
  fs::create_directories(out_dir);
  json manifest;
  manifest["format"] = "gli-manifest";
  manifest["version"] = 1;
  manifest["n"] = g.n;
  manifest["d"] = g.d();
  json layers = json::array();
  for (int l = 0; l < g.d(); ++l) {
    std::string name = "layer_" + std::to_string(l + 1) + ".adj";
    write_adjacency((fs::path(out_dir) / name).string(), g.layers[l]);
    layers.push_back(name);
  }
  manifest["layers"] = layers;
  if (g.node_ids) manifest["node_ids"] = *g.node_ids;
  if (!layer_labels.empty()) manifest["layer_labels"] = layer_labels;
  manifest["provenance"] = provenance;
  std::string path = (fs::path(out_dir) / "manifest.json").string();
  write_text(path, manifest.dump(2) + "\n");
  return path;
}

MultiplexGraph read_manifest(const std::string& manifest_path) {
  json j = json::parse(read_text(manifest_path));
  if (j.value("format", "") != "gli-manifest") fail(Errc::parse_error, "not a gli-manifest document");
  MultiplexGraph g;
  g.n = j.at("n").get<int>();
  fs::path dir = fs::path(manifest_path).parent_path();
  for (const auto& rel : j.at("layers")) {
    AdjacencyMatrix a = read_adjacency((dir / rel.get<std::string>()).string());
    if (a.n() != g.n) fail(Errc::layer_mismatch, "layer '" + rel.get<std::string>() + "' has wrong node count");
    g.layers.push_back(std::move(a));
  }
  if (j.contains("node_ids")) g.node_ids = j.at("node_ids").get<std::vector<std::string>>();
  g.check();
  return g;
}

json measure_to_json(const MeasureReport& r) {
  json j;
  j["name"] = r.name;
  j["value"] = r.value;
  if (r.normalized) j["normalized"] = *r.normalized;
  if (r.bounds) j["bounds"] = {r.bounds->first, r.bounds->second};
  if (r.clamped) j["clamped"] = true;
  return j;
}

json fit_to_json(const FitResult& fit) {
  json j;
  j["log_likelihood"] = fit.log_likelihood;
  j["assignment"] = {{"z", fit.assignment.z},
                     {"h", fit.assignment.h},
                     {"k", fit.assignment.k},
                     {"r", fit.assignment.r}};
  json means;
  for (const auto& [mask, avg] : fit.block_means)
    means[subset_name(mask, fit.system.dim())] = avg;
  j["block_means"] = means;
  j["pair_counts"] = fit.pair_counts;
  return j;
}

json mimatrix_to_json(const MiMatrix& mi, const VnEntropy* vn) {
  json j;
  j["d"] = mi.d;
  j["raw"] = mi.raw;
  j["normalized"] = mi.normalized;
  j["density"] = mi.density;
  if (mi.eigenvalues) j["eigenvalues"] = *mi.eigenvalues;
  if (vn) j["von_neumann"] = {{"value", vn->value}, {"normalized", vn->normalized}};
  return j;
}

std::string matrix_to_csv(const std::vector<double>& m, int d) {
  std::ostringstream out;
  out << "d=" << d << "\n";
  out.precision(17);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out << m[static_cast<std::size_t>(i) * d + j];
      out << (j + 1 < d ? ',' : '\n');
    }
  }
  return out.str();
}

std::string config_hash(const json& config) { return fnv1a_hex(config.dump()); }

json wrap_report(const std::string& command, const json& config, const json& results) {
  json j;
  j["format"] = "gli-report";
  j["version"] = kArtifactVersion;
  j["command"] = command;
  j["config"] = config;
  j["config_hash"] = config_hash(config);
  j["results"] = results;
  return j;
}

double log_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) fail(Errc::invalid_argument, "slope needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= 0 || ys[i] <= 0) continue;
    double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) fail(Errc::invalid_argument, "slope needs >= 2 positive points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string log_log_svg(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& title) {
  const int width = 560, height = 420, margin = 56;
  double min_lx = 1e300, max_lx = -1e300, min_ly = 1e300, max_ly = -1e300;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= 0 || ys[i] <= 0) continue;
    double lx = std::log10(xs[i]), ly = std::log10(ys[i]);
    pts.emplace_back(lx, ly);
    min_lx = std::min(min_lx, lx);
    max_lx = std::max(max_lx, lx);
    min_ly = std::min(min_ly, ly);
    max_ly = std::max(max_ly, ly);
  }
  if (pts.size() < 2) fail(Errc::invalid_argument, "plot needs >= 2 positive points");
  double pad_x = 0.05 * (max_lx - min_lx + 1e-9), pad_y = 0.10 * (max_ly - min_ly + 1e-9);
  min_lx -= pad_x;
  max_lx += pad_x;
  min_ly -= pad_y;
  max_ly += pad_y;
  auto sx = [&](double lx) { return margin + (lx - min_lx) / (max_lx - min_lx) * (width - 2 * margin); };
  auto sy = [&](double ly) { return height - margin - (ly - min_ly) / (max_ly - min_ly) * (height - 2 * margin); };

  double slope = log_log_slope(xs, ys);
  // least-squares line in log10 space
  double mx = 0, my = 0;
  for (auto& p : pts) {
    mx += p.first;
    my += p.second;
  }
  mx /= pts.size();
  my /= pts.size();

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << "log10 n</text>\n";
  double x0 = min_lx + pad_x, x1 = max_lx - pad_x;
  double y0 = my + slope * (x0 - mx) / 1.0, y1 = my + slope * (x1 - mx) / 1.0;
  // slope computed in natural log equals slope in log10 space
  svg << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(y0) << "\" x2=\"" << sx(x1) << "\" y2=\"" << sy(y1)
      << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  for (auto& p : pts)
    svg << "<circle cx=\"" << sx(p.first) << "\" cy=\"" << sy(p.second) << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
  char label[64];
  std::snprintf(label, sizeof(label), "ls slope %.3f", slope);
  svg << "<text x=\"" << width - margin << "\" y=\"" << margin << "\" text-anchor=\"end\" font-size=\"12\">"
      << label << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gli::io
