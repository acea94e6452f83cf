#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "circreg/circuits.hpp"
#include "circreg/fk.hpp"
#include "circreg/geometry.hpp"

namespace circreg {

inline constexpr std::size_t kDefaultAngularGrid = 720;

// Connection probabilities P(0 <-> k x) along one direction; distances are Euclidean.
struct DirectionalSeries {
  double theta = 0.0;
  std::vector<double> distance;
  std::vector<double> probability;
};

struct XiEstimate {
  double theta = 0.0;
  double xi = 0.0;
  double stderr_ = 0.0;
};

std::vector<XiEstimate> estimate_xi(const std::vector<DirectionalSeries>& series);

// Simulated series: for each angle and k, P(x <-> x + floor(k u)) averaged
// over base points at least `buffer` away from the box boundary.
std::vector<DirectionalSeries> measure_directional_series(const FKParams& params, const LatticeBox& box,
                                                          const std::vector<double>& angles,
                                                          const std::vector<int>& ks, int buffer,
                                                          const SamplingOptions& options);

// xi on M uniformly spaced angles theta_i = 2 pi i / M.
struct XiTable {
  std::vector<double> theta;
  std::vector<double> xi;
  std::vector<double> stderr_;
  static XiTable from_function(const std::function<double(double)>& f, std::size_t m = kDefaultAngularGrid);
};

// Periodic linear interpolation of the estimates, optionally after adding
// their images under the eight lattice symmetries.
XiTable make_xi_table(const std::vector<XiEstimate>& estimates, std::size_t m = kDefaultAngularGrid,
                      bool symmetrize = true);

class WulffShape {
 public:
  WulffShape(XiTable table, double lambda, std::vector<Vec2> polygon);

  const XiTable& xi_table() const { return table_; }
  double lambda() const { return lambda_; }
  const std::vector<Vec2>& polygon() const { return polygon_; }  // unit area, counterclockwise
  double area() const;
  double diameter() const;
  double min_radius() const;
  double max_radius() const;
  double support(Vec2 u) const;

  // Intersection of the ray from 0 at `angle` with the boundary, and the
  // index of the polygon edge hit (edge i joins vertex i and i + 1).
  struct Hit {
    Vec2 point;
    std::size_t edge = 0;
    double t = 0.0;  // position along the edge in [0, 1]
  };
  Hit boundary_hit(double angle) const;
  Vec2 boundary_point(double angle) const { return boundary_hit(angle).point; }

  // n * boundary + z as a closed polyline.
  std::vector<Vec2> dilated(double n, Vec2 z = {0, 0}) const;

 private:
  XiTable table_;
  double lambda_;
  std::vector<Vec2> polygon_;
  std::vector<double> vertex_args_;
};

WulffShape build_wulff(const XiTable& table);

struct ShapeConstants {
  double q0 = 0.0;
  double c0 = 0.0;
};

ShapeConstants choose_constants(const WulffShape& shape, std::size_t grid = kDefaultAngularGrid);

struct ConstantsCheck {
  double sup_angle = 0.0;       // sup over directions of angle(w_z, z_perp)
  double worst_chord = 0.0;     // max angle(x - y, -y_perp) over pairs with angle(x, y) <= 2 c0
  bool supang_ok = false;
  bool czercond_ok = false;
};
ConstantsCheck verify_constants(const WulffShape& shape, const ShapeConstants& k, std::size_t grid);

struct Distortion {
  double gd = 0.0;
  Point cen;
};

Distortion global_distortion(const Circuit& c, const WulffShape& shape, int n);
// Exact evaluation at every lattice point of the search window.
Distortion brute_force_global_distortion(const Circuit& c, const WulffShape& shape, int n);
double distortion_at(const Circuit& c, const WulffShape& shape, int n, Point z);

struct AreaEventRecord {
  CircuitStatus status = CircuitStatus::None;
  double area = 0.0;
  double gd = 0.0;
  Point cen;
  bool satisfies = false;
  bool has_circuit() const { return status == CircuitStatus::Found; }
  bool censored() const { return status == CircuitStatus::Censored; }
};

AreaEventRecord area_event(const BondConfig& cfg, const WulffShape& shape, int n);

}  // namespace circreg
