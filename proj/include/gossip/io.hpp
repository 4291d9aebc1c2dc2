#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "gossip/graph.hpp"
#include "gossip/partition.hpp"

namespace gossip::io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Grid text with an optional first line `resolution=<meters>` (default 1.0).
WeightedGraph parse_grid(std::string_view text);

/// Edge list: a vertex-count header (`N` or `vertices=N`) followed by `u v w`
/// lines. Blank lines and lines starting with `//` are ignored.
WeightedGraph parse_edge_list(std::string_view text);

/// Loads a grid or an edge list; `.edges` files are edge lists, anything else
/// is read as a grid.
WeightedGraph load_environment(const std::filesystem::path& path);

/// `N=<robots>` header then one `vertex_id owner_id` line per vertex.
Partition parse_partition(std::string_view text, std::size_t vertex_count);
std::string format_partition(const Partition& partition);

/// Optional `vertex_id phi_value` lines; unlisted vertices keep phi = 1.
PhiWeights parse_phi(std::string_view text, std::size_t vertex_count);

/// Flat `key = value` lines; `#` starts a comment.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Grid rendering with one character per cell: robot index in base 36 for
/// free cells, '#' for obstacles. Only valid for grid-built graphs.
std::string render_partition(const WeightedGraph& graph, const Partition& partition);

}  // namespace gossip::io
