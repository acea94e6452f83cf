#include "circreg/lattice.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "circreg/error.hpp"

namespace circreg {

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Free ? "free" : "wired";
}

BoundaryCondition parse_boundary_condition(const std::string& text) {
  if (text == "free") return BoundaryCondition::Free;
  if (text == "wired") return BoundaryCondition::Wired;
  fail(ErrorKind::InvalidParameter, "unknown boundary condition '" + text + "'");
}

LatticeBox::LatticeBox(int half_width) : n_(half_width) {
  require(half_width >= 1, ErrorKind::InvalidParameter, "box half-width must be >= 1");
  require(half_width <= 4096, ErrorKind::TooLarge, "box half-width too large");
}

Edge LatticeBox::edge(EdgeId e) const {
  const std::size_t h = horizontal_count();
  if (e < h) {
    const int row = static_cast<int>(e / (2 * n_));
    const int col = static_cast<int>(e % (2 * n_));
    Point a{col - n_, row - n_};
    return {a, {a.x + 1, a.y}};
  }
  const std::size_t k = e - h;
  const int row = static_cast<int>(k / side());
  const int col = static_cast<int>(k % side());
  Point a{col - n_, row - n_};
  return {a, {a.x, a.y + 1}};
}

std::optional<EdgeId> LatticeBox::find_edge(Point a, Point b) const {
  if (b < a) std::swap(a, b);
  if (!contains(a) || !contains(b)) return std::nullopt;
  if (a.y == b.y && b.x == a.x + 1) {
    return static_cast<EdgeId>((a.y + n_) * (2 * n_) + (a.x + n_));
  }
  if (a.x == b.x && b.y == a.y + 1) {
    return static_cast<EdgeId>(horizontal_count() + (a.y + n_) * side() + (a.x + n_));
  }
  return std::nullopt;
}

EdgeId LatticeBox::edge_id(Point a, Point b) const {
  auto e = find_edge(a, b);
  if (!e) {
    std::ostringstream os;
    os << "(" << a.x << "," << a.y << ")-(" << b.x << "," << b.y << ") is not an edge of the box";
    fail(ErrorKind::InvalidParameter, os.str());
  }
  return *e;
}

int LatticeBox::incident_edges(Point p, EdgeId out[4]) const {
  int k = 0;
  if (p.x > -n_) out[k++] = static_cast<EdgeId>((p.y + n_) * (2 * n_) + (p.x - 1 + n_));
  if (p.x < n_) out[k++] = static_cast<EdgeId>((p.y + n_) * (2 * n_) + (p.x + n_));
  if (p.y > -n_) out[k++] = static_cast<EdgeId>(horizontal_count() + (p.y - 1 + n_) * side() + (p.x + n_));
  if (p.y < n_) out[k++] = static_cast<EdgeId>(horizontal_count() + (p.y + n_) * side() + (p.x + n_));
  return k;
}

bool LatticeBox::touches_interior_boundary(EdgeId e) const {
  Edge ed = edge(e);
  return on_interior_boundary(ed.a) || on_interior_boundary(ed.b);
}

std::vector<Point> LatticeBox::interior_boundary() const {
  std::vector<Point> out;
  for (int y = -n_; y <= n_; ++y)
    for (int x = -n_; x <= n_; ++x)
      if (on_interior_boundary({x, y})) out.push_back({x, y});
  return out;
}

EdgeSet::EdgeSet(std::vector<EdgeId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool EdgeSet::contains(EdgeId e) const { return std::binary_search(ids_.begin(), ids_.end(), e); }

void EdgeSet::insert(EdgeId e) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), e);
  if (it == ids_.end() || *it != e) ids_.insert(it, e);
}

std::vector<std::uint8_t> EdgeSet::mask(std::size_t edge_count) const {
  std::vector<std::uint8_t> m(edge_count, 0);
  for (EdgeId e : ids_) {
    require(e < edge_count, ErrorKind::InvalidParameter, "edge id outside the box");
    m[e] = 1;
  }
  return m;
}

BondConfig::BondConfig(const LatticeBox& box) : box_(box), bits_(box.edge_count(), 0) {}

bool BondConfig::is_open(Point a, Point b) const {
  auto e = box_.find_edge(a, b);
  return e && is_open(*e);
}

std::size_t BondConfig::open_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BondConfig BondConfig::from_mask(const LatticeBox& box, std::uint64_t mask) {
  require(box.edge_count() <= 64, ErrorKind::TooLarge, "mask form needs at most 64 edges");
  BondConfig c(box);
  for (std::size_t e = 0; e < c.bits_.size(); ++e) c.bits_[e] = (mask >> e) & 1u;
  return c;
}

std::uint64_t BondConfig::to_mask() const {
  require(bits_.size() <= 64, ErrorKind::TooLarge, "mask form needs at most 64 edges");
  std::uint64_t m = 0;
  for (std::size_t e = 0; e < bits_.size(); ++e)
    if (bits_[e]) m |= std::uint64_t{1} << e;
  return m;
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t v) {
  while (parent_[v] != v) {
    parent_[v] = parent_[parent_[v]];
    v = parent_[v];
  }
  return v;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

std::size_t cluster_count(const BondConfig& config, BoundaryCondition bc) {
  const LatticeBox& box = config.box();
  UnionFind uf(box.vertex_count());
  for (EdgeId e = 0; e < config.size(); ++e) {
    if (!config.is_open(e)) continue;
    Edge ed = box.edge(e);
    uf.unite(box.vertex_id(ed.a), box.vertex_id(ed.b));
  }
  std::vector<std::uint8_t> dropped(box.vertex_count(), 0);
  if (bc == BoundaryCondition::Wired) {
    for (EdgeId e = 0; e < config.size(); ++e) {
      if (config.is_open(e) && box.touches_interior_boundary(e)) {
        dropped[uf.find(box.vertex_id(box.edge(e).a))] = 1;
      }
    }
  }
  std::size_t count = 0;
  for (VertexId v = 0; v < box.vertex_count(); ++v)
    if (uf.find(v) == v && !dropped[v]) ++count;
  return count;
}

bool Cluster::contains(Point p) const {
  return std::binary_search(vertices.begin(), vertices.end(), p);
}

namespace {

Cluster bfs_component(const BondConfig& config, Point x, const std::vector<std::uint8_t>* allowed) {
  const LatticeBox& box = config.box();
  require(box.contains(x), ErrorKind::InvalidParameter, "start vertex outside the box");
  std::vector<std::uint8_t> seen(box.vertex_count(), 0);
  std::vector<std::uint8_t> edge_seen(box.edge_count(), 0);
  Cluster out;
  std::vector<Point> stack{x};
  seen[box.vertex_id(x)] = 1;
  while (!stack.empty()) {
    Point p = stack.back();
    stack.pop_back();
    out.vertices.push_back(p);
    EdgeId inc[4];
    int k = box.incident_edges(p, inc);
    for (int i = 0; i < k; ++i) {
      EdgeId e = inc[i];
      if (!config.is_open(e) || (allowed && !(*allowed)[e])) continue;
      if (!edge_seen[e]) {
        edge_seen[e] = 1;
        out.edges.push_back(e);
      }
      Edge ed = box.edge(e);
      Point q = ed.a == p ? ed.b : ed.a;
      if (!seen[box.vertex_id(q)]) {
        seen[box.vertex_id(q)] = 1;
        stack.push_back(q);
      }
    }
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

}  // namespace

Cluster open_component(const BondConfig& config, Point x) { return bfs_component(config, x, nullptr); }

Cluster open_component(const BondConfig& config, Point x, const EdgeSet& region) {
  auto mask = region.mask(config.size());
  return bfs_component(config, x, &mask);
}

std::string encode_hex(const BondConfig& config) {
  static const char* digits = "0123456789abcdef";
  const auto& bits = config.bits();
  std::string out;
  for (std::size_t base = 0; base < bits.size(); base += 8) {
    unsigned byte = 0;
    for (std::size_t j = 0; j < 8 && base + j < bits.size(); ++j)
      if (bits[base + j]) byte |= 1u << j;
    out.push_back(digits[byte >> 4]);
    out.push_back(digits[byte & 15]);
  }
  return out;
}

BondConfig decode_hex(const LatticeBox& box, const std::string& hex) {
  BondConfig c(box);
  const std::size_t bytes = (box.edge_count() + 7) / 8;
  require(hex.size() == 2 * bytes, ErrorKind::InvalidParameter, "hex line has wrong length for the box");
  auto nibble = [](char ch) -> unsigned {
    if (ch >= '0' && ch <= '9') return static_cast<unsigned>(ch - '0');
    if (ch >= 'a' && ch <= 'f') return static_cast<unsigned>(ch - 'a' + 10);
    if (ch >= 'A' && ch <= 'F') return static_cast<unsigned>(ch - 'A' + 10);
    fail(ErrorKind::InvalidParameter, "bad hex digit in configuration");
  };
  for (std::size_t k = 0; k < bytes; ++k) {
    unsigned byte = nibble(hex[2 * k]) << 4 | nibble(hex[2 * k + 1]);
    for (std::size_t j = 0; j < 8; ++j) {
      std::size_t e = 8 * k + j;
      if (e < box.edge_count()) {
        c.set(static_cast<EdgeId>(e), (byte >> j) & 1u);
      } else {
        require(((byte >> j) & 1u) == 0, ErrorKind::InvalidParameter, "padding bits must be zero");
      }
    }
  }
  return c;
}

void write_configs(std::ostream& os, BoundaryCondition bc, const std::vector<BondConfig>& configs) {
  require(!configs.empty(), ErrorKind::InvalidParameter, "no configurations to write");
  os << "# circreg-configs N=" << configs.front().box().half_width() << " bc=" << to_string(bc) << "\n";
  for (const auto& c : configs) {
    require(c.box() == configs.front().box(), ErrorKind::InvalidParameter, "mixed box sizes");
    os << encode_hex(c) << "\n";
  }
}

ConfigFile read_configs(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorKind::InvalidParameter, "missing header line");
  std::istringstream hs(line);
  std::string tag, ntok, bctok;
  hs >> tag >> ntok >> bctok;
  require(tag == "#" || tag == "#circreg-configs", ErrorKind::InvalidParameter, "bad header");
  if (tag == "#") {
    require(ntok == "circreg-configs", ErrorKind::InvalidParameter, "bad header");
    ntok = bctok;
    hs >> bctok;
  }
  require(ntok.rfind("N=", 0) == 0 && bctok.rfind("bc=", 0) == 0, ErrorKind::InvalidParameter,
          "header must carry N= and bc=");
  ConfigFile out{LatticeBox(std::stoi(ntok.substr(2))), parse_boundary_condition(bctok.substr(3)), {}};
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.configs.push_back(decode_hex(out.box, line));
  }
  return out;
}

}  // namespace circreg
