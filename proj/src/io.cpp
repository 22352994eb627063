#include "specising/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace specising {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::string format_weight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

SymmetricInteraction read_interaction_json(const std::string& path) {
  auto in = open_input(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.contains("n") || !doc.contains("entries"))
    throw ParseError(path, 0, "interaction JSON requires fields \"n\" and \"entries\"");
  const int n = doc["n"].get<int>();
  std::vector<MatrixEntry> entries;
  int k = 0;
  for (const auto& row : doc["entries"]) {
    ++k;
    if (!row.is_array() || row.size() != 3)
      throw ParseError(path, 0, "entry " + std::to_string(k) + " must be [i, j, w]");
    MatrixEntry e{row[0].get<int>(), row[1].get<int>(), row[2].get<double>()};
    if (e.i > e.j)
      throw ParseError(path, 0,
                       "entry " + std::to_string(k) + " is not upper-triangular (i > j); "
                       "symmetric mirrors must list each pair once with i <= j");
    entries.push_back(e);
  }
  try {
    return SymmetricInteraction(n, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, 0, e.what());
  }
}

}  // namespace

SymmetricInteraction read_interaction(const std::string& path) {
  if (has_suffix(path, ".json")) return read_interaction_json(path);

  auto in = open_input(path);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '#') return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(path, line_no, "missing header line \"N nnz\"");
  int n = 0;
  long nnz = -1;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> nnz) || n <= 0 || nnz < 0)
      throw ParseError(path, line_no, "malformed header, expected \"N nnz\"");
  }
  std::vector<MatrixEntry> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  std::set<std::pair<int, int>> seen;
  for (long k = 0; k < nnz; ++k) {
    if (!next_line())
      throw ParseError(path, line_no, "expected " + std::to_string(nnz) + " entries, got " +
                                          std::to_string(k));
    std::istringstream ls(line);
    MatrixEntry e{};
    if (!(ls >> e.i >> e.j >> e.w))
      throw ParseError(path, line_no, "malformed entry, expected \"i j w\"");
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
      throw ParseError(path, line_no, "index out of range for N=" + std::to_string(n));
    if (e.i > e.j) throw ParseError(path, line_no, "entries must satisfy i <= j");
    if (!seen.insert({e.i, e.j}).second)
      throw ParseError(path, line_no, "duplicate entry (" + std::to_string(e.i) + "," +
                                          std::to_string(e.j) + ")");
    entries.push_back(e);
  }
  if (next_line()) throw ParseError(path, line_no, "trailing content after declared entries");
  return SymmetricInteraction(n, std::move(entries));
}

void write_interaction(const std::string& path, const SymmetricInteraction& J) {
  if (has_suffix(path, ".json")) {
    nlohmann::json doc;
    doc["n"] = J.dimension();
    auto& arr = doc["entries"] = nlohmann::json::array();
    for (const auto& e : J.entries()) arr.push_back({e.i, e.j, e.w});
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << J.dimension() << " " << J.nnz() << "\n";
  for (const auto& e : J.entries())
    out << e.i << " " << e.j << " " << format_weight(e.w) << "\n";
}

GraphFile read_graph(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '#') return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(path, line_no, "missing header line \"n m\"");
  GraphFile g;
  long m = -1;
  {
    std::istringstream hs(line);
    if (!(hs >> g.n >> m) || g.n <= 0 || m < 0)
      throw ParseError(path, line_no, "malformed header, expected \"n m\"");
  }
  std::set<std::pair<int, int>> seen;
  for (long k = 0; k < m; ++k) {
    if (!next_line())
      throw ParseError(path, line_no,
                       "expected " + std::to_string(m) + " edges, got " + std::to_string(k));
    std::istringstream ls(line);
    int u = 0, v = 0;
    if (!(ls >> u >> v)) throw ParseError(path, line_no, "malformed edge, expected \"u v\"");
    if (u < 0 || v < 0 || u >= g.n || v >= g.n)
      throw ParseError(path, line_no, "vertex out of range for n=" + std::to_string(g.n));
    if (u == v) throw ParseError(path, line_no, "self-loop not allowed");
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second)
      throw ParseError(path, line_no,
                       "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    g.edges.emplace_back(key.first, key.second);
  }
  if (next_line()) throw ParseError(path, line_no, "trailing content after declared edges");
  return g;
}

void write_graph(const std::string& path, const GraphFile& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << g.n << " " << g.edges.size() << "\n";
  for (const auto& [u, v] : g.edges) out << u << " " << v << "\n";
}

}  // namespace specising
