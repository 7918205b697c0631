#pragma once

// Conforming triangulations of the rescaled thin domains and of reference
// rectangles / cells.

#include "thinhom/combgeom.hpp"
#include "thinhom/geometry.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace thinhom {

enum class BoundaryTag { LateralLeft, LateralRight, Bottom, Top, Interface, Gamma0 };

std::string to_string(BoundaryTag tag);
BoundaryTag parse_boundary_tag(const std::string& name);

struct BoundaryEdge {
  int a, b;
  BoundaryTag tag;
};

/// Triangles are counterclockwise node index triples; `boundary` lists every
/// edge that belongs to exactly one triangle.
struct Mesh {
  Eigen::Matrix2Xd nodes;
  Eigen::Matrix3Xi triangles;
  std::vector<BoundaryEdge> boundary;

  int node_count() const { return static_cast<int>(nodes.cols()); }
  int triangle_count() const { return static_cast<int>(triangles.cols()); }

  double signed_area(int t) const;
  double area() const;
};

struct MeshParams {
  int cells_per_period = 8;
  int ny = 8;
  double h = 0.125;  ///< comb meshes: spacing in reference-cell units
  long triangle_cap = 200000;
};

/// Edges of a rectangle that receive the gamma0 tag.
enum Gamma0Edges : unsigned {
  kGammaNone = 0,
  kGammaBottom = 1u << 0,
  kGammaTop = 1u << 1,
  kGammaLeft = 1u << 2,
  kGammaRight = 1u << 3,
  kGammaAll = kGammaBottom | kGammaTop | kGammaLeft | kGammaRight,
};

/// Number of x-cells used by mesh_type1: cells_per_period times the number of
/// (possibly partial) oscillation periods in (0, 1); cells_per_period when the
/// boundary does not oscillate.
int type1_columns(const ProfileSpec& spec, double eps, int cells_per_period);

/// Boundary-fitted structured mesh of
///   { 0 < x1 < 1, -b(x1) < x2 < G_eps(x1) }.
/// Each column is split into ny cells uniformly between -b and G_eps.
/// Quadrilaterals are cut along the diagonal that is shorter in the metric
/// (x1, eps x2) of the physical thin domain.
Mesh mesh_type1(const ProfileSpec& spec, double eps, const MeshParams& params = {});

/// Mesh of the rescaled comb domain: structured base strip plus one
/// structured block per tooth, sharing nodes on {x2 = 0}. params.h is the
/// spacing in reference-cell units; physical x-spacing is h eps^alpha.
Mesh mesh_type2(const CombSpec& spec, double eps, const MeshParams& params = {});

/// Uniform mesh of [x0, x0 + width] x [y0, y0 + height].
Mesh mesh_rectangle(double width, double height, int nx, int ny, unsigned gamma0 = kGammaNone,
                    double x0 = 0.0, double y0 = 0.0);

/// Mesh of the reference cell Q0 with spacing about h; edges on {x2 = 0} are
/// tagged gamma0.
Mesh mesh_cell(const CombSpec& spec, double h);

struct MeshReport {
  std::vector<int> orientation_violations;
  int nonconforming_edges = 0;
  int duplicate_nodes = 0;
  double min_angle_deg = 0.0;

  /// No violations and minimum angle above one degree.
  bool valid() const;
  std::string summary() const;
};

/// Checks orientation, conformity (edge multiplicities, boundary list,
/// overlapping boundary segments), duplicate nodes and the minimum angle.
/// Angles are measured after scaling x2 by `vertical_scale`, so that rescaled
/// thin-domain meshes are judged in their physical metric.
MeshReport validate_mesh(const Mesh& m, double vertical_scale = 1.0);

/// Image of m under (x1, x2) -> (x1, scale * x2).
Mesh scale_vertical(const Mesh& m, double scale);

void write_mesh(std::ostream& os, const Mesh& m);
Mesh read_mesh(std::istream& is);

}  // namespace thinhom
