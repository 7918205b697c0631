#include "thinhom/mesh.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/io.hpp"
#include "thinhom/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace thinhom {

namespace {

struct Builder {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> tris;
  std::vector<BoundaryEdge> boundary;

  int add_node(double x, double y) {
    nodes.emplace_back(x, y);
    return static_cast<int>(nodes.size()) - 1;
  }

  // Splits quad (p00, p10, p11, p01), counterclockwise, along the diagonal
  // that is shorter once x2 is scaled by `metric`.
  void add_quad(int p00, int p10, int p11, int p01, double metric) {
    auto len2 = [&](int a, int b) {
      const Eigen::Vector2d d = nodes[b] - nodes[a];
      return d.x() * d.x() + metric * metric * d.y() * d.y();
    };
    if (len2(p00, p11) <= len2(p10, p01)) {
      tris.push_back({p00, p10, p11});
      tris.push_back({p00, p11, p01});
    } else {
      tris.push_back({p00, p10, p01});
      tris.push_back({p10, p11, p01});
    }
  }

  Mesh finish() && {
    Mesh m;
    m.nodes.resize(2, static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) m.nodes.col(static_cast<Eigen::Index>(i)) = nodes[i];
    m.triangles.resize(3, static_cast<Eigen::Index>(tris.size()));
    for (std::size_t t = 0; t < tris.size(); ++t)
      for (int k = 0; k < 3; ++k) m.triangles(k, static_cast<Eigen::Index>(t)) = tris[t][k];
    m.boundary = std::move(boundary);
    return m;
  }
};

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// Edges used by exactly one triangle, oriented as in their triangle, in
// triangle order.
std::vector<std::pair<int, int>> free_edges(const Mesh& m) {
  std::map<EdgeKey, int> count;
  for (int t = 0; t < m.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k) ++count[key(m.triangles(k, t), m.triangles((k + 1) % 3, t))];
  std::vector<std::pair<int, int>> out;
  for (int t = 0; t < m.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = m.triangles(k, t), b = m.triangles((k + 1) % 3, t);
      if (count[key(a, b)] == 1) out.emplace_back(a, b);
    }
  return out;
}

template <typename Classify>
void tag_boundary(Mesh& m, Classify&& classify) {
  m.boundary.clear();
  for (const auto& [a, b] : free_edges(m)) m.boundary.push_back({a, b, classify(a, b)});
}

// Subdivides each gap between consecutive sorted cuts into ceil(len / h)
// equal cells.
std::vector<double> subdivide(const std::vector<double>& cuts, double h) {
  std::vector<double> out{cuts.front()};
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    const int n = std::max(1, static_cast<int>(std::ceil(len / h - 1e-9)));
    for (int i = 1; i < n; ++i) out.push_back(cuts[k] + len * i / n);
    out.push_back(cuts[k + 1]);
  }
  return out;
}

std::vector<double> sorted_cuts(std::vector<double> v, double snap) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > snap) out.push_back(x);
  return out;
}

void check_cap(long triangles, long cap, double eps, double alpha) {
  if (triangles > cap) {
    std::ostringstream os;
    os << "triangle cap exceeded: " << triangles << " > " << cap << " at eps = " << eps
       << ", alpha = " << alpha;
    throw ResourceError("mesh", os.str());
  }
}

// Cells of the grid xs x ys whose centre lies in one of `rects` (given in the
// same coordinates after applying to_ref to x).
template <typename ToRef>
std::vector<std::vector<char>> inside_cells(const std::vector<double>& xs,
                                            const std::vector<double>& ys,
                                            const std::vector<Rect>& rects, ToRef&& to_ref) {
  std::vector<std::vector<char>> in(xs.size() - 1, std::vector<char>(ys.size() - 1, 0));
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double xc = to_ref(0.5 * (xs[i] + xs[i + 1]));
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double yc = 0.5 * (ys[j] + ys[j + 1]);
      for (const Rect& r : rects)
        if (xc > r.x_lo && xc < r.x_hi && yc > r.y_lo && yc < r.y_hi) {
          in[i][j] = 1;
          break;
        }
    }
  }
  return in;
}

}  // namespace

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::LateralLeft: return "lateral-left";
    case BoundaryTag::LateralRight: return "lateral-right";
    case BoundaryTag::Bottom: return "bottom";
    case BoundaryTag::Top: return "top";
    case BoundaryTag::Interface: return "interface";
    case BoundaryTag::Gamma0: return "gamma0";
  }
  return "?";
}

BoundaryTag parse_boundary_tag(const std::string& name) {
  for (auto t : {BoundaryTag::LateralLeft, BoundaryTag::LateralRight, BoundaryTag::Bottom,
                 BoundaryTag::Top, BoundaryTag::Interface, BoundaryTag::Gamma0})
    if (to_string(t) == name) return t;
  throw MeshError("mesh", "unknown boundary tag '" + name + "'");
}

double Mesh::signed_area(int t) const {
  const Eigen::Vector2d p0 = nodes.col(triangles(0, t));
  const Eigen::Vector2d e1 = nodes.col(triangles(1, t)) - p0;
  const Eigen::Vector2d e2 = nodes.col(triangles(2, t)) - p0;
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double Mesh::area() const {
  double a = 0.0;
  for (int t = 0; t < triangle_count(); ++t) a += signed_area(t);
  return a;
}

int type1_columns(const ProfileSpec& spec, double eps, int cells_per_period) {
  if (spec.flat()) return cells_per_period;
  const double scale = std::pow(eps, spec.alpha());
  static const GaussRule<double> rule = gauss_legendre<double>(8);
  const double periods = composite_gauss(
      [&](double x) { return 1.0 / (scale * spec.period(x)); }, 0.0, 1.0, 64, rule);
  const double whole = std::ceil(periods - 1e-9);
  if (whole * cells_per_period > 1e9)
    throw ResourceError("mesh", "oscillation too fine to mesh");
  return cells_per_period * std::max(1, static_cast<int>(whole));
}

Mesh mesh_type1(const ProfileSpec& spec, double eps, const MeshParams& params) {
  if (!(eps > 0.0)) throw DomainError("mesh", "epsilon must be > 0");
  if (params.cells_per_period < 4) throw ConfigError("mesh", "cells_per_period must be >= 4");
  if (params.ny < 1) throw ConfigError("mesh", "ny must be >= 1");
  const int ny = params.ny;
  const int nx = type1_columns(spec, eps, params.cells_per_period);
  check_cap(2L * nx * ny, params.triangle_cap, eps, spec.alpha());

  Builder bld;
  bld.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int i = 0; i <= nx; ++i) {
    const double x = static_cast<double>(i) / nx;
    const double lo = -spec.b(x);
    const double hi = eval_G_eps(spec, eps, x);
    for (int j = 0; j <= ny; ++j) {
      const double t = static_cast<double>(j) / ny;
      bld.add_node(x, lo + t * (hi - lo));
    }
  }
  auto id = [ny](int i, int j) { return i * (ny + 1) + j; };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) bld.add_quad(id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1), eps);
  for (int i = 0; i < nx; ++i) {
    bld.boundary.push_back({id(i, 0), id(i + 1, 0), BoundaryTag::Bottom});
    bld.boundary.push_back({id(i + 1, ny), id(i, ny), BoundaryTag::Top});
  }
  for (int j = 0; j < ny; ++j) {
    bld.boundary.push_back({id(nx, j), id(nx, j + 1), BoundaryTag::LateralRight});
    bld.boundary.push_back({id(0, j + 1), id(0, j), BoundaryTag::LateralLeft});
  }
  return std::move(bld).finish();
}

Mesh mesh_rectangle(double width, double height, int nx, int ny, unsigned gamma0, double x0,
                    double y0) {
  if (!(width > 0.0 && height > 0.0) || nx < 1 || ny < 1)
    throw ConfigError("mesh", "rectangle needs positive dimensions and counts");
  Builder bld;
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) bld.add_node(x0 + width * i / nx, y0 + height * j / ny);
  auto id = [ny](int i, int j) { return i * (ny + 1) + j; };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) bld.add_quad(id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1), 1.0);
  auto pick = [gamma0](unsigned side, BoundaryTag plain) {
    return (gamma0 & side) ? BoundaryTag::Gamma0 : plain;
  };
  for (int i = 0; i < nx; ++i) {
    bld.boundary.push_back({id(i, 0), id(i + 1, 0), pick(kGammaBottom, BoundaryTag::Bottom)});
    bld.boundary.push_back({id(i + 1, ny), id(i, ny), pick(kGammaTop, BoundaryTag::Top)});
  }
  for (int j = 0; j < ny; ++j) {
    bld.boundary.push_back({id(nx, j), id(nx, j + 1), pick(kGammaRight, BoundaryTag::LateralRight)});
    bld.boundary.push_back({id(0, j + 1), id(0, j), pick(kGammaLeft, BoundaryTag::LateralLeft)});
  }
  return std::move(bld).finish();
}

Mesh mesh_cell(const CombSpec& spec, double h) {
  if (!(h > 0.0)) throw ConfigError("mesh", "h must be > 0");
  std::vector<double> xc, yc;
  for (const Rect& r : spec.cell()) {
    xc.insert(xc.end(), {r.x_lo, r.x_hi});
    yc.insert(yc.end(), {r.y_lo, r.y_hi});
  }
  const auto xs = subdivide(sorted_cuts(xc, 1e-12), h);
  const auto ys = subdivide(sorted_cuts(yc, 1e-12), h);
  const auto in = inside_cells(xs, ys, spec.cell(), [](double x) { return x; });

  Builder bld;
  std::vector<int> ids(xs.size() * ys.size(), -1);
  auto node = [&](std::size_t i, std::size_t j) {
    int& slot = ids[i * ys.size() + j];
    if (slot < 0) slot = bld.add_node(xs[i], ys[j]);
    return slot;
  };
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < ys.size(); ++j)
      if (in[i][j]) bld.add_quad(node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1), 1.0);
  Mesh m = std::move(bld).finish();
  tag_boundary(m, [&](int a, int b) {
    return m.nodes(1, a) == 0.0 && m.nodes(1, b) == 0.0 ? BoundaryTag::Gamma0 : BoundaryTag::Top;
  });
  return m;
}

Mesh mesh_type2(const CombSpec& spec, double eps, const MeshParams& params) {
  if (!(params.h > 0.0)) throw ConfigError("mesh", "h must be > 0");
  const auto teeth = tooth_layout(spec, eps);
  const double scale = teeth.front().scale;
  const double h = params.h;

  // Global x-grid: tooth rectangle edges plus uniform fill of spacing h eps^alpha.
  std::vector<double> xcuts{0.0, 1.0};
  for (const Tooth& t : teeth)
    for (const Rect& r : spec.cell()) {
      xcuts.push_back(t.offset + r.x_lo * scale);
      xcuts.push_back(t.offset + r.x_hi * scale);
    }
  const double snap = 1e-12;
  const auto xs = subdivide(sorted_cuts(xcuts, snap), h * scale);
  const int nx = static_cast<int>(xs.size()) - 1;

  std::vector<double> ycuts{0.0, spec.cell_height()};
  for (const Rect& r : spec.cell()) ycuts.insert(ycuts.end(), {r.y_lo, r.y_hi});
  const auto ys = subdivide(sorted_cuts(ycuts, snap), h);

  const int nyb = std::max(1, static_cast<int>(std::ceil(spec.b_function().range().second / h - 1e-9)));
  long tooth_cells = 0;
  const auto ref_in = inside_cells(xs, ys, spec.cell(), [&](double x) {
    const auto k = static_cast<long long>(std::floor(x / (spec.cell_width() * scale)));
    return (x - k * spec.cell_width() * scale) / scale;
  });
  for (std::size_t i = 0; i < ref_in.size(); ++i) {
    const double xc = 0.5 * (xs[i] + xs[i + 1]);
    const auto k = static_cast<long long>(std::floor(xc / (spec.cell_width() * scale)));
    if (k < teeth.front().n || k > teeth.back().n) continue;
    for (char c : ref_in[i]) tooth_cells += c;
  }
  check_cap(2L * (nx * nyb + tooth_cells), params.triangle_cap, eps, spec.alpha());

  Builder bld;
  // Base strip, column-major; row nyb is x2 = 0.
  for (int i = 0; i <= nx; ++i) {
    const double b = spec.b(xs[i]);
    for (int j = 0; j <= nyb; ++j)
      bld.add_node(xs[i], j == nyb ? 0.0 : -b * (1.0 - static_cast<double>(j) / nyb));
  }
  auto base_id = [nyb](int i, int j) { return i * (nyb + 1) + j; };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nyb; ++j)
      bld.add_quad(base_id(i, j), base_id(i + 1, j), base_id(i + 1, j + 1), base_id(i, j + 1), eps);

  // Teeth share the base top row; higher rows are created on demand.
  std::map<std::pair<int, int>, int> tooth_nodes;
  auto tnode = [&](int i, std::size_t j) {
    if (j == 0) return base_id(i, nyb);
    auto [it, fresh] = tooth_nodes.try_emplace({i, static_cast<int>(j)}, -1);
    if (fresh) it->second = bld.add_node(xs[i], ys[j]);
    return it->second;
  };
  const double pitch = spec.cell_width() * scale;
  for (int i = 0; i < nx; ++i) {
    const double xc = 0.5 * (xs[i] + xs[i + 1]);
    const auto k = static_cast<long long>(std::floor(xc / pitch));
    if (k < teeth.front().n || k > teeth.back().n) continue;
    for (std::size_t j = 0; j + 1 < ys.size(); ++j)
      if (ref_in[i][j]) bld.add_quad(tnode(i, j), tnode(i + 1, j), tnode(i + 1, j + 1), tnode(i, j + 1), eps);
  }
  Mesh m = std::move(bld).finish();
  tag_boundary(m, [&](int a, int b) {
    const double xa = m.nodes(0, a), xb = m.nodes(0, b);
    if (xa == 0.0 && xb == 0.0) return BoundaryTag::LateralLeft;
    if (xa == 1.0 && xb == 1.0) return BoundaryTag::LateralRight;
    if (a % (nyb + 1) == 0 && b % (nyb + 1) == 0 && a < (nx + 1) * (nyb + 1) &&
        b < (nx + 1) * (nyb + 1))
      return BoundaryTag::Bottom;
    return BoundaryTag::Top;
  });
  const MeshReport rep = validate_mesh(m, eps);
  if (rep.nonconforming_edges > 0 || rep.duplicate_nodes > 0)
    throw MeshError("mesh", "comb mesh is not conforming: " + rep.summary());
  return m;
}

bool MeshReport::valid() const {
  return orientation_violations.empty() && nonconforming_edges == 0 && duplicate_nodes == 0 &&
         min_angle_deg > 1.0;
}

std::string MeshReport::summary() const {
  std::ostringstream os;
  os << "orientation_violations=" << orientation_violations.size()
     << " nonconforming_edges=" << nonconforming_edges << " duplicate_nodes=" << duplicate_nodes
     << " min_angle_deg=" << min_angle_deg << (valid() ? " valid" : " invalid");
  return os.str();
}

MeshReport validate_mesh(const Mesh& m, double vertical_scale) {
  MeshReport rep;
  const int nt = m.triangle_count();
  const int nn = m.node_count();

  // Orientation and angles.
  double min_angle = 180.0;
  for (int t = 0; t < nt; ++t) {
    if (!(m.signed_area(t) > 0.0)) rep.orientation_violations.push_back(t);
    std::array<Eigen::Vector2d, 3> p;
    for (int k = 0; k < 3; ++k) {
      p[k] = m.nodes.col(m.triangles(k, t));
      p[k].y() *= vertical_scale;
    }
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector2d u = p[(k + 1) % 3] - p[k];
      const Eigen::Vector2d v = p[(k + 2) % 3] - p[k];
      const double c = std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0);
      min_angle = std::min(min_angle, std::acos(c) * 180.0 / std::numbers::pi);
    }
  }
  rep.min_angle_deg = nt > 0 ? min_angle : 0.0;

  // Edge multiplicities against the boundary list.
  std::map<EdgeKey, std::pair<int, int>> uses;  // key -> (count, orientation sum)
  for (int t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = m.triangles(k, t), b = m.triangles((k + 1) % 3, t);
      auto& u = uses[key(a, b)];
      ++u.first;
      u.second += a < b ? 1 : -1;
    }
  std::map<EdgeKey, int> listed;
  for (const auto& e : m.boundary) ++listed[key(e.a, e.b)];
  for (const auto& [k, u] : uses) {
    const auto it = listed.find(k);
    const int in_list = it == listed.end() ? 0 : it->second;
    if (u.first > 2 || (u.first == 2 && u.second != 0) || (u.first == 2 && in_list > 0) ||
        (u.first == 1 && in_list != 1))
      ++rep.nonconforming_edges;
  }
  for (const auto& [k, n] : listed)
    if (!uses.contains(k)) rep.nonconforming_edges += n;

  // Boundary segments that overlap another boundary segment.
  struct Seg {
    Eigen::Vector2d p, q;
    double xmin, xmax;
  };
  std::vector<Seg> segs;
  for (const auto& [k, u] : uses)
    if (u.first == 1) {
      const Eigen::Vector2d p = m.nodes.col(k.first), q = m.nodes.col(k.second);
      segs.push_back({p, q, std::min(p.x(), q.x()), std::max(p.x(), q.x())});
    }
  std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.xmin < b.xmin; });
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Eigen::Vector2d d = segs[i].q - segs[i].p;
    const double len2 = d.squaredNorm();
    for (std::size_t j = i + 1; j < segs.size() && segs[j].xmin <= segs[i].xmax + 1e-14; ++j) {
      auto cross = [&](const Eigen::Vector2d& r) {
        const Eigen::Vector2d w = r - segs[i].p;
        return d.x() * w.y() - d.y() * w.x();
      };
      if (std::abs(cross(segs[j].p)) > 1e-12 * len2 || std::abs(cross(segs[j].q)) > 1e-12 * len2)
        continue;
      const double s0 = (segs[j].p - segs[i].p).dot(d) / len2;
      const double s1 = (segs[j].q - segs[i].p).dot(d) / len2;
      const double overlap = std::min(1.0, std::max(s0, s1)) - std::max(0.0, std::min(s0, s1));
      if (overlap > 1e-9) ++rep.nonconforming_edges;
    }
  }

  // Duplicate nodes.
  std::vector<int> order(nn);
  for (int i = 0; i < nn; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return m.nodes(0, a) < m.nodes(0, b); });
  for (int i = 0; i < nn; ++i)
    for (int j = i + 1; j < nn && m.nodes(0, order[j]) - m.nodes(0, order[i]) <= 1e-14; ++j)
      if (std::abs(m.nodes(1, order[j]) - m.nodes(1, order[i])) <= 1e-14) ++rep.duplicate_nodes;
  return rep;
}

Mesh scale_vertical(const Mesh& m, double scale) {
  Mesh out = m;
  out.nodes.row(1) *= scale;
  return out;
}

void write_mesh(std::ostream& os, const Mesh& m) {
  os << "nodes " << m.node_count() << '\n';
  for (int i = 0; i < m.node_count(); ++i)
    os << i << ' ' << format_double(m.nodes(0, i)) << ' ' << format_double(m.nodes(1, i)) << '\n';
  os << "triangles " << m.triangle_count() << '\n';
  for (int t = 0; t < m.triangle_count(); ++t)
    os << t << ' ' << m.triangles(0, t) << ' ' << m.triangles(1, t) << ' ' << m.triangles(2, t) << '\n';
  os << "boundary " << m.boundary.size() << '\n';
  for (const auto& e : m.boundary) os << e.a << ' ' << e.b << ' ' << to_string(e.tag) << '\n';
}

Mesh read_mesh(std::istream& is) {
  auto expect = [&](const char* word) {
    std::string w;
    long n = -1;
    if (!(is >> w >> n) || w != word || n < 0)
      throw MeshError("mesh", std::string("expected '") + word + " <count>'");
    return n;
  };
  Mesh m;
  const long nn = expect("nodes");
  m.nodes.resize(2, nn);
  for (long i = 0; i < nn; ++i) {
    long idx;
    if (!(is >> idx >> m.nodes(0, i) >> m.nodes(1, i)) || idx != i)
      throw MeshError("mesh", "malformed node line " + std::to_string(i));
  }
  const long nt = expect("triangles");
  m.triangles.resize(3, nt);
  for (long t = 0; t < nt; ++t) {
    long idx;
    if (!(is >> idx >> m.triangles(0, t) >> m.triangles(1, t) >> m.triangles(2, t)) || idx != t)
      throw MeshError("mesh", "malformed triangle line " + std::to_string(t));
    for (int k = 0; k < 3; ++k)
      if (m.triangles(k, t) < 0 || m.triangles(k, t) >= nn)
        throw MeshError("mesh", "triangle " + std::to_string(t) + " references a missing node");
  }
  const long nb = expect("boundary");
  for (long e = 0; e < nb; ++e) {
    BoundaryEdge be{};
    std::string tag;
    if (!(is >> be.a >> be.b >> tag)) throw MeshError("mesh", "malformed boundary line");
    be.tag = parse_boundary_tag(tag);
    m.boundary.push_back(be);
  }
  return m;
}

}  // namespace thinhom
