#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssdo/config.hpp"
#include "ssdo/dense.hpp"
#include "ssdo/path_form.hpp"
#include "ssdo/topology.hpp"

namespace ssdo {

/// Topology plus the external node names it was ingested with; the library
/// itself only sees dense indices.
struct NamedTopology {
  Topology topology;
  std::vector<std::string> node_names;
};

nlohmann::json topology_to_json(const Topology& topology,
                                const std::vector<std::string>& node_names);
NamedTopology topology_from_json(const nlohmann::json& j);

/// Topology Zoo style GraphML: undirected edges become two directed edges,
/// parallel links sum, missing capacity attributes fall back to
/// default_capacity.
NamedTopology topology_from_graphml(const std::string& xml,
                                    double default_capacity);

nlohmann::json path_set_to_json(const PathSet& paths,
                                const std::vector<std::string>& node_names);
PathSet path_set_from_json(const nlohmann::json& j,
                           const std::vector<std::string>& node_names);

std::string demands_to_csv(const DemandMatrix& demands);
DemandMatrix demands_from_csv(const std::string& text);
nlohmann::json demands_to_json(const DemandMatrix& demands);
DemandMatrix demands_from_json(const nlohmann::json& j);

/// Sparse export of ratios above `tol`; import validates all invariants.
nlohmann::json split_tensor_to_json(const SplitTensor& split,
                                    const std::vector<std::string>& node_names,
                                    double tol = 1e-9);
SplitTensor split_tensor_from_json(const nlohmann::json& j,
                                   const Topology& topology,
                                   const PathSet& paths,
                                   const std::vector<std::string>& node_names);

nlohmann::json path_split_to_json(const PathSplit& split, const PathSet& paths,
                                  const std::vector<std::string>& node_names,
                                  double tol = 1e-9);
PathSplit path_split_from_json(const nlohmann::json& j,
                               const DemandMatrix& demands, const PathSet& paths,
                               const std::vector<std::string>& node_names);

nlohmann::json report_to_json(const SolveReport& report);

/// Whole-file atomic write: temp file in the same directory, then rename.
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace ssdo
