#include "ssdo/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace ssdo {

namespace {

std::unordered_map<std::string, NodeId> name_index(
    const std::vector<std::string>& names) {
  std::unordered_map<std::string, NodeId> idx;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!idx.emplace(names[i], static_cast<NodeId>(i)).second)
      throw InvariantViolation("duplicate node name: " + names[i]);
  }
  return idx;
}

NodeId lookup(const std::unordered_map<std::string, NodeId>& idx,
              const std::string& name) {
  auto it = idx.find(name);
  if (it == idx.end()) throw InvariantViolation("unknown node name: " + name);
  return it->second;
}

std::string format_demand(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json topology_to_json(const Topology& topology,
                                const std::vector<std::string>& node_names) {
  if (static_cast<int>(node_names.size()) != topology.node_count())
    throw InvariantViolation("node name count mismatch");
  nlohmann::json j;
  j["nodes"] = node_names;
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : topology.edges()) {
    nlohmann::json edge;
    edge["src"] = node_names[e.src];
    edge["dst"] = node_names[e.dst];
    if (topology.unbounded(e.src, e.dst))
      edge["capacity"] = "unbounded";
    else
      edge["capacity"] = topology.capacity(e.src, e.dst);
    edges.push_back(std::move(edge));
  }
  j["edges"] = std::move(edges);
  return j;
}

NamedTopology topology_from_json(const nlohmann::json& j) {
  if (!j.contains("nodes") || !j.contains("edges"))
    throw InvariantViolation("topology JSON needs 'nodes' and 'edges'");
  std::vector<std::string> names = j.at("nodes").get<std::vector<std::string>>();
  if (names.empty()) throw InvariantViolation("topology has no nodes");
  auto idx = name_index(names);
  Topology topology(static_cast<int>(names.size()));
  for (const auto& edge : j.at("edges")) {
    NodeId s = lookup(idx, edge.at("src").get<std::string>());
    NodeId d = lookup(idx, edge.at("dst").get<std::string>());
    const auto& cap = edge.at("capacity");
    if (cap.is_string()) {
      if (cap.get<std::string>() != "unbounded")
        throw InvariantViolation("capacity must be a number or \"unbounded\"");
      topology.set_unbounded_edge(s, d);
    } else {
      double c = cap.get<double>();
      if (!(c >= 0.0)) throw InvariantViolation("capacity must be nonnegative");
      topology.add_edge_capacity(s, d, c);
    }
  }
  return {std::move(topology), std::move(names)};
}

NamedTopology topology_from_graphml(const std::string& xml,
                                    double default_capacity) {
  // Minimal scan of Topology Zoo style GraphML: node ids, edge endpoints,
  // and a capacity-like data key when one is declared.
  auto find_attr = [](const std::string& tag, const std::string& attr)
      -> std::string {
    std::string pattern = attr + "=\"";
    auto pos = tag.find(pattern);
    if (pos == std::string::npos) return {};
    pos += pattern.size();
    auto end = tag.find('"', pos);
    if (end == std::string::npos) return {};
    return tag.substr(pos, end - pos);
  };

  // Which GraphML key ids carry capacity information.
  std::unordered_map<std::string, bool> capacity_key;
  std::size_t scan = 0;
  while (true) {
    auto open = xml.find("<key", scan);
    if (open == std::string::npos) break;
    auto close = xml.find('>', open);
    if (close == std::string::npos) break;
    std::string tag = xml.substr(open, close - open + 1);
    std::string attr_name = find_attr(tag, "attr.name");
    std::string id = find_attr(tag, "id");
    if (!id.empty() &&
        (attr_name == "capacity" || attr_name == "Capacity" ||
         attr_name == "LinkSpeedRaw" || attr_name == "bandwidth"))
      capacity_key[id] = true;
    scan = close + 1;
  }

  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> idx;
  scan = 0;
  while (true) {
    auto open = xml.find("<node", scan);
    if (open == std::string::npos) break;
    auto close = xml.find('>', open);
    if (close == std::string::npos) break;
    std::string tag = xml.substr(open, close - open + 1);
    std::string id = find_attr(tag, "id");
    if (id.empty()) throw InvariantViolation("GraphML node without id");
    if (idx.emplace(id, static_cast<NodeId>(names.size())).second)
      names.push_back(id);
    scan = close + 1;
  }
  if (names.empty()) throw InvariantViolation("GraphML has no nodes");

  Topology topology(static_cast<int>(names.size()));
  scan = 0;
  while (true) {
    auto open = xml.find("<edge", scan);
    if (open == std::string::npos) break;
    auto element_end = xml.find("</edge>", open);
    auto self_close = xml.find("/>", open);
    auto tag_close = xml.find('>', open);
    if (tag_close == std::string::npos) break;

    std::string tag = xml.substr(open, tag_close - open + 1);
    NodeId s = lookup(idx, find_attr(tag, "source"));
    NodeId d = lookup(idx, find_attr(tag, "target"));

    double capacity = default_capacity;
    bool self_closed = self_close != std::string::npos && self_close < tag_close;
    std::size_t body_end = tag_close;
    if (!self_closed && element_end != std::string::npos) {
      std::string body = xml.substr(tag_close + 1, element_end - tag_close - 1);
      std::size_t dscan = 0;
      while (true) {
        auto dopen = body.find("<data", dscan);
        if (dopen == std::string::npos) break;
        auto dtag_close = body.find('>', dopen);
        auto dclose = body.find("</data>", dopen);
        if (dtag_close == std::string::npos || dclose == std::string::npos) break;
        std::string dtag = body.substr(dopen, dtag_close - dopen + 1);
        std::string key = find_attr(dtag, "key");
        if (capacity_key.count(key)) {
          std::string value = body.substr(dtag_close + 1, dclose - dtag_close - 1);
          try {
            capacity = std::stod(value);
          } catch (const std::exception&) {
            throw InvariantViolation("GraphML capacity is not numeric: " + value);
          }
        }
        dscan = dclose + 7;
      }
      body_end = element_end + 7;
    }
    if (s != d) {
      topology.add_edge_capacity(s, d, capacity);
      topology.add_edge_capacity(d, s, capacity);
    }
    scan = body_end + 1;
  }
  return {std::move(topology), std::move(names)};
}

nlohmann::json path_set_to_json(const PathSet& paths,
                                const std::vector<std::string>& node_names) {
  nlohmann::json pairs = nlohmann::json::array();
  const int n = paths.node_count();
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      if (s == d || paths.paths(s, d).empty()) continue;
      nlohmann::json entry;
      entry["src"] = node_names[s];
      entry["dst"] = node_names[d];
      nlohmann::json plist = nlohmann::json::array();
      for (const Path& p : paths.paths(s, d)) {
        nlohmann::json nodes = nlohmann::json::array();
        for (NodeId v : p) nodes.push_back(node_names[v]);
        plist.push_back(std::move(nodes));
      }
      entry["paths"] = std::move(plist);
      pairs.push_back(std::move(entry));
    }
  nlohmann::json j;
  j["schema"] = "paths/1";
  j["pairs"] = std::move(pairs);
  return j;
}

PathSet path_set_from_json(const nlohmann::json& j,
                           const std::vector<std::string>& node_names) {
  auto idx = name_index(node_names);
  PathSet paths(static_cast<int>(node_names.size()));
  for (const auto& entry : j.at("pairs")) {
    NodeId s = lookup(idx, entry.at("src").get<std::string>());
    NodeId d = lookup(idx, entry.at("dst").get<std::string>());
    std::vector<Path> ps;
    for (const auto& nodes : entry.at("paths")) {
      Path p;
      for (const auto& name : nodes) p.push_back(lookup(idx, name.get<std::string>()));
      ps.push_back(std::move(p));
    }
    paths.set_paths(s, d, std::move(ps));
  }
  return paths;
}

std::string demands_to_csv(const DemandMatrix& demands) {
  std::ostringstream out;
  const int n = demands.node_count();
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (j) out << ',';
      out << format_demand(demands.at(i, j));
    }
    out << '\n';
  }
  return out.str();
}

DemandMatrix demands_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvariantViolation("demand CSV cell is not numeric: " + cell);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvariantViolation("demand CSV is empty");
  const int n = static_cast<int>(rows.size());
  DemandMatrix demands(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw InvariantViolation("demand CSV is not square");
    for (int j = 0; j < n; ++j)
      if (i != j || rows[i][j] != 0.0) demands.set(i, j, rows[i][j]);
  }
  return demands;
}

nlohmann::json demands_to_json(const DemandMatrix& demands) {
  nlohmann::json rows = nlohmann::json::array();
  const int n = demands.node_count();
  for (NodeId i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (NodeId j = 0; j < n; ++j) row.push_back(demands.at(i, j));
    rows.push_back(std::move(row));
  }
  nlohmann::json j;
  j["schema"] = "demands/1";
  j["demand"] = std::move(rows);
  return j;
}

DemandMatrix demands_from_json(const nlohmann::json& j) {
  const auto& rows = j.at("demand");
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw InvariantViolation("demand JSON is empty");
  DemandMatrix demands(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw InvariantViolation("demand JSON is not square");
    for (int j2 = 0; j2 < n; ++j2) {
      double v = rows[i][j2].get<double>();
      if (i != j2 || v != 0.0) demands.set(i, j2, v);
    }
  }
  return demands;
}

nlohmann::json split_tensor_to_json(const SplitTensor& split,
                                    const std::vector<std::string>& node_names,
                                    double tol) {
  nlohmann::json entries = nlohmann::json::array();
  const int n = split.node_count();
  for (NodeId i = 0; i < n; ++i)
    for (NodeId k = 0; k < n; ++k)
      for (NodeId j = 0; j < n; ++j) {
        double f = split.at(i, k, j);
        if (f <= tol) continue;
        nlohmann::json e;
        e["src"] = node_names[i];
        e["mid"] = node_names[k];
        e["dst"] = node_names[j];
        e["ratio"] = f;
        entries.push_back(std::move(e));
      }
  nlohmann::json j;
  j["schema"] = "split-tensor/1";
  j["entries"] = std::move(entries);
  return j;
}

SplitTensor split_tensor_from_json(const nlohmann::json& j,
                                   const Topology& topology,
                                   const PathSet& paths,
                                   const std::vector<std::string>& node_names) {
  auto idx = name_index(node_names);
  SplitTensor split(static_cast<int>(node_names.size()));
  for (const auto& e : j.at("entries")) {
    NodeId i = lookup(idx, e.at("src").get<std::string>());
    NodeId k = lookup(idx, e.at("mid").get<std::string>());
    NodeId j2 = lookup(idx, e.at("dst").get<std::string>());
    split.set(i, k, j2, e.at("ratio").get<double>());
  }
  // Exported ratios are truncated at the export tolerance; renormalize per
  // pair before validating.
  const int n = split.node_count();
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      if (s == d) continue;
      double sum = 0.0;
      for (NodeId k = 0; k < n; ++k) sum += split.at(s, k, d);
      if (sum > 0.0 && std::abs(sum - 1.0) <= 1e-6 && sum != 1.0)
        for (NodeId k = 0; k < n; ++k) {
          double f = split.at(s, k, d);
          if (f > 0.0) split.set(s, k, d, f / sum);
        }
    }
  validate_split_tensor(topology, paths, split);
  return split;
}

nlohmann::json path_split_to_json(const PathSplit& split, const PathSet& paths,
                                  const std::vector<std::string>& node_names,
                                  double tol) {
  nlohmann::json sds = nlohmann::json::array();
  const int n = split.node_count();
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d) {
      if (s == d || split.ratios(s, d).empty()) continue;
      const auto& ps = paths.paths(s, d);
      const auto& ratios = split.ratios(s, d);
      nlohmann::json entry;
      entry["src"] = node_names[s];
      entry["dst"] = node_names[d];
      nlohmann::json splits = nlohmann::json::array();
      for (std::size_t p = 0; p < ratios.size() && p < ps.size(); ++p) {
        if (ratios[p] <= tol) continue;
        nlohmann::json item;
        nlohmann::json nodes = nlohmann::json::array();
        for (NodeId v : ps[p]) nodes.push_back(node_names[v]);
        item["path"] = std::move(nodes);
        item["ratio"] = ratios[p];
        splits.push_back(std::move(item));
      }
      entry["splits"] = std::move(splits);
      sds.push_back(std::move(entry));
    }
  nlohmann::json j;
  j["schema"] = "path-split/1";
  j["sds"] = std::move(sds);
  return j;
}

PathSplit path_split_from_json(const nlohmann::json& j,
                               const DemandMatrix& demands, const PathSet& paths,
                               const std::vector<std::string>& node_names) {
  auto idx = name_index(node_names);
  const int n = static_cast<int>(node_names.size());
  PathSplit split(n);
  for (const auto& entry : j.at("sds")) {
    NodeId s = lookup(idx, entry.at("src").get<std::string>());
    NodeId d = lookup(idx, entry.at("dst").get<std::string>());
    const auto& ps = paths.paths(s, d);
    std::vector<double> ratios(ps.size(), 0.0);
    for (const auto& item : entry.at("splits")) {
      Path p;
      for (const auto& name : item.at("path"))
        p.push_back(lookup(idx, name.get<std::string>()));
      auto it = std::find(ps.begin(), ps.end(), p);
      if (it == ps.end())
        throw InvariantViolation("split references a path outside the path set");
      ratios[static_cast<std::size_t>(it - ps.begin())] =
          item.at("ratio").get<double>();
    }
    double sum = 0.0;
    for (double r : ratios) sum += r;
    if (sum > 0.0 && std::abs(sum - 1.0) <= 1e-6 && sum != 1.0)
      for (double& r : ratios) r /= sum;
    split.set_ratios(s, d, std::move(ratios));
  }
  validate_path_split(demands, paths, split);
  return split;
}

nlohmann::json report_to_json(const SolveReport& report) {
  nlohmann::json j;
  j["schema"] = "solve-report/1";
  j["final_mlu"] = report.final_mlu;
  j["iterations"] = report.iterations;
  j["sd_updates"] = report.sd_updates;
  j["termination"] = report.termination == Termination::converged
                         ? "converged"
                         : "budget_exhausted";
  nlohmann::json traj = nlohmann::json::array();
  for (const TrajectoryPoint& p : report.mlu_trajectory) {
    nlohmann::json point;
    point["seconds"] = std::round(p.seconds * 1000.0) / 1000.0;
    point["mlu"] = p.mlu;
    traj.push_back(std::move(point));
  }
  j["mlu_trajectory"] = std::move(traj);
  return j;
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace ssdo
