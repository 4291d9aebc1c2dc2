#include "gossip/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace gossip::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    out.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, std::string_view what) {
  token = trim(token);
  T value{};
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || token.empty()) {
    throw FormatError("invalid " + std::string(what) + ": '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

WeightedGraph parse_grid(std::string_view text) {
  double resolution = 1.0;
  std::string body;
  bool header_allowed = true;
  for (std::string_view raw : lines_of(text)) {
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (header_allowed && line.starts_with("resolution")) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw FormatError("expected resolution=<meters>");
      resolution = parse_number<double>(line.substr(eq + 1), "resolution");
      header_allowed = false;
      continue;
    }
    header_allowed = false;
    body.append(line);
    body.push_back('\n');
  }
  return from_occupancy_grid(body, resolution);
}

WeightedGraph parse_edge_list(std::string_view text) {
  std::optional<std::size_t> count;
  std::vector<Edge> edges;
  for (std::string_view raw : lines_of(text)) {
    auto line = trim(raw);
    if (line.empty() || line.starts_with("//")) continue;
    if (!count) {
      if (line.starts_with("vertices")) {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw FormatError("expected vertices=<count>");
        line = line.substr(eq + 1);
      }
      count = parse_number<std::size_t>(line, "vertex count");
      continue;
    }
    const auto tokens = split_ws(line);
    if (tokens.size() != 3) throw FormatError("edge line must be 'u v w': '" + std::string(line) + "'");
    edges.push_back({parse_number<Vertex>(tokens[0], "vertex"), parse_number<Vertex>(tokens[1], "vertex"),
                     parse_number<double>(tokens[2], "weight")});
  }
  if (!count) throw FormatError("edge list is missing its vertex-count header");
  return WeightedGraph(*count, std::move(edges));
}

WeightedGraph load_environment(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".edges") return parse_edge_list(text);
  return parse_grid(text);
}

Partition parse_partition(std::string_view text, std::size_t vertex_count) {
  std::optional<std::size_t> robots;
  std::vector<std::int64_t> owner(vertex_count, -1);
  for (std::string_view raw : lines_of(text)) {
    const auto line = trim(raw);
    if (line.empty() || line.starts_with("//")) continue;
    if (!robots) {
      if (!line.starts_with("N=")) throw FormatError("partition file must start with N=<robots>");
      robots = parse_number<std::size_t>(line.substr(2), "robot count");
      continue;
    }
    const auto tokens = split_ws(line);
    if (tokens.size() != 2) throw FormatError("partition line must be 'vertex owner': '" + std::string(line) + "'");
    const auto v = parse_number<std::size_t>(tokens[0], "vertex");
    const auto o = parse_number<std::int64_t>(tokens[1], "owner");
    if (v >= vertex_count) throw FormatError("partition vertex " + std::to_string(v) + " outside graph");
    if (owner[v] >= 0) throw FormatError("vertex " + std::to_string(v) + " listed twice");
    owner[v] = o;
  }
  if (!robots) throw FormatError("partition file is empty");
  std::vector<RobotId> out(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (owner[v] < 0) throw FormatError("vertex " + std::to_string(v) + " has no owner");
    out[v] = static_cast<RobotId>(owner[v]);
  }
  return Partition(std::move(out), *robots);
}

std::string format_partition(const Partition& partition) {
  std::string out = "N=" + std::to_string(partition.robot_count()) + "\n";
  for (std::size_t v = 0; v < partition.vertex_count(); ++v) {
    out += std::to_string(v);
    out += ' ';
    out += std::to_string(partition.owner(static_cast<Vertex>(v)));
    out += '\n';
  }
  return out;
}

PhiWeights parse_phi(std::string_view text, std::size_t vertex_count) {
  std::vector<double> phi(vertex_count, 1.0);
  for (std::string_view raw : lines_of(text)) {
    const auto line = trim(raw);
    if (line.empty() || line.starts_with("//")) continue;
    const auto tokens = split_ws(line);
    if (tokens.size() != 2) throw FormatError("phi line must be 'vertex value': '" + std::string(line) + "'");
    const auto v = parse_number<std::size_t>(tokens[0], "vertex");
    if (v >= vertex_count) throw FormatError("phi vertex " + std::to_string(v) + " outside graph");
    phi[v] = parse_number<double>(tokens[1], "phi value");
  }
  return PhiWeights(std::move(phi));
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  for (std::string_view raw : lines_of(text)) {
    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError("expected key = value: '" + std::string(line) + "'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw FormatError("empty key in '" + std::string(line) + "'");
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

std::string render_partition(const WeightedGraph& graph, const Partition& partition) {
  if (graph.grid_cols() == 0) throw DomainError("graph was not built from a grid");
  static constexpr std::string_view kDigits = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  const auto& cells = graph.cell_to_vertex();
  for (std::size_t r = 0; r < graph.grid_rows(); ++r) {
    for (std::size_t c = 0; c < graph.grid_cols(); ++c) {
      const auto v = cells[r * graph.grid_cols() + c];
      if (v < 0) {
        out += '#';
      } else {
        const RobotId o = partition.owner(static_cast<Vertex>(v));
        out += o < kDigits.size() ? kDigits[o] : '*';
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace gossip::io
