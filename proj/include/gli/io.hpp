#pragma once

// File formats: edge-list adjacency files, multiplex manifests, graphon
// system JSON, reports, and minimal SVG plots. Everything written here is
// byte-deterministic for fixed inputs.

#include <string>
#include <vector>

#include <json.hpp>

#include "gli/core.hpp"
#include "gli/estim.hpp"
#include "gli/infom.hpp"
#include "gli/mimat.hpp"
#include "gli/synth.hpp"

namespace gli::io {

using nlohmann::json;

// Adjacency format: header "# gli-adj v1 n=<n>", one "i j" edge per line,
// 0-based, i<j. Dense 0/1 CSV is accepted on input.
void write_adjacency(const std::string& path, const AdjacencyMatrix& a);
AdjacencyMatrix read_adjacency(const std::string& path);

json graphon_to_json(const Graphon& g);
Graphon graphon_from_json(const json& j);

json recipe_to_json(const GenRecipe& r);
GenRecipe recipe_from_json(const json& j);

// Systems serialize as shared-partition step values, registry subsets, or a
// generating recipe (rebuilt on load via its closed-form system).
json system_to_json(const GraphonSystem& sys, const GenRecipe* provenance = nullptr);
GraphonSystem system_from_json(const json& j);
std::string system_hash(const GraphonSystem& sys, const GenRecipe* provenance = nullptr);

// Manifest: layer file names are relative to the manifest directory.
std::string write_multiplex(const std::string& out_dir, const MultiplexGraph& g, const json& provenance,
                            const std::vector<std::string>& layer_labels = {});
MultiplexGraph read_manifest(const std::string& manifest_path);

json measure_to_json(const MeasureReport& r);
json fit_to_json(const FitResult& fit);
json mimatrix_to_json(const MiMatrix& mi, const VnEntropy* vn);
std::string matrix_to_csv(const std::vector<double>& m, int d);

// Report envelope with artifact version, config echo, and config hash.
json wrap_report(const std::string& command, const json& config, const json& results);
std::string config_hash(const json& config);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// Reads a file, transparently inflating gzip content (magic 1f 8b).
std::string read_text_auto(const std::string& path);

// Log-log scatter with a least-squares slope line.
std::string log_log_svg(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& title);

double log_log_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace gli::io
