#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace circreg {

struct Point {
  int x = 0;
  int y = 0;
  auto operator<=>(const Point&) const = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }

enum class BoundaryCondition { Free, Wired };

std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& text);

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

// Endpoints are ordered: `a` is the left (x-edges) or lower (y-edges) end.
struct Edge {
  Point a;
  Point b;
  bool horizontal() const { return a.y == b.y; }
};

// The box {-N..N}^2 with its nearest-neighbour edges. Edge ids list the
// x-oriented edges first in row-major order, then the y-oriented ones.
class LatticeBox {
 public:
  explicit LatticeBox(int half_width);

  int half_width() const { return n_; }
  int side() const { return 2 * n_ + 1; }
  std::size_t vertex_count() const { return static_cast<std::size_t>(side()) * side(); }
  std::size_t edge_count() const { return 2 * horizontal_count(); }
  std::size_t horizontal_count() const { return static_cast<std::size_t>(side()) * (2 * n_); }

  bool contains(Point p) const { return p.x >= -n_ && p.x <= n_ && p.y >= -n_ && p.y <= n_; }
  bool on_interior_boundary(Point p) const {
    return contains(p) && (p.x == -n_ || p.x == n_ || p.y == -n_ || p.y == n_);
  }

  VertexId vertex_id(Point p) const {
    return static_cast<VertexId>((p.y + n_) * side() + (p.x + n_));
  }
  Point vertex(VertexId v) const {
    return {static_cast<int>(v % side()) - n_, static_cast<int>(v / side()) - n_};
  }

  Edge edge(EdgeId e) const;
  std::optional<EdgeId> find_edge(Point a, Point b) const;
  EdgeId edge_id(Point a, Point b) const;  // throws invalid-parameter

  // Up to four incident edges; returns the count written.
  int incident_edges(Point p, EdgeId out[4]) const;
  bool touches_interior_boundary(EdgeId e) const;

  std::vector<Point> interior_boundary() const;

  bool operator==(const LatticeBox&) const = default;

 private:
  int n_;
};

// Sorted, duplicate-free list of edge ids.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::vector<EdgeId> ids);

  const std::vector<EdgeId>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool contains(EdgeId e) const;
  void insert(EdgeId e);
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  std::vector<std::uint8_t> mask(std::size_t edge_count) const;
  bool operator==(const EdgeSet&) const = default;

 private:
  std::vector<EdgeId> ids_;
};

class BondConfig {
 public:
  explicit BondConfig(const LatticeBox& box);

  const LatticeBox& box() const { return box_; }
  std::size_t size() const { return bits_.size(); }
  bool is_open(EdgeId e) const { return bits_[e] != 0; }
  void set(EdgeId e, bool open) { bits_[e] = open ? 1 : 0; }
  void set(Point a, Point b, bool open) { set(box_.edge_id(a, b), open); }
  bool is_open(Point a, Point b) const;  // false when not an edge of the box
  std::size_t open_count() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  // Bit i of the mask is edge i; requires at most 64 edges.
  static BondConfig from_mask(const LatticeBox& box, std::uint64_t mask);
  std::uint64_t to_mask() const;

  bool operator==(const BondConfig&) const = default;

 private:
  LatticeBox box_;
  std::vector<std::uint8_t> bits_;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t v);
  bool unite(std::size_t a, std::size_t b);
  std::size_t size_of(std::size_t v) { return size_[find(v)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Number of open clusters, with the wired rule: a component is dropped when
// it has an edge touching the interior boundary. Isolated vertices count.
std::size_t cluster_count(const BondConfig& config, BoundaryCondition bc);

struct Cluster {
  std::vector<Point> vertices;  // sorted
  std::vector<EdgeId> edges;    // sorted
  bool contains(Point p) const;
};

Cluster open_component(const BondConfig& config, Point x);
// Restricts the search to open edges inside `region`.
Cluster open_component(const BondConfig& config, Point x, const EdgeSet& region);

// Plain-text serialization: a header line, then one hex bit-vector per line.
// Byte k of the vector holds edges 8k..8k+7, least significant bit first.
std::string encode_hex(const BondConfig& config);
BondConfig decode_hex(const LatticeBox& box, const std::string& hex);
void write_configs(std::ostream& os, BoundaryCondition bc, const std::vector<BondConfig>& configs);
struct ConfigFile {
  LatticeBox box{1};
  BoundaryCondition bc = BoundaryCondition::Free;
  std::vector<BondConfig> configs;
};
ConfigFile read_configs(std::istream& is);

}  // namespace circreg
