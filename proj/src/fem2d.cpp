#include "thinhom/fem2d.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

namespace thinhom {

namespace {

struct Element {
  double area;
  Eigen::Vector3d gx, gy;  // barycentric gradients
};

Element element(const Mesh& m, int t) {
  const Eigen::Vector2d p0 = m.nodes.col(m.triangles(0, t));
  const Eigen::Vector2d p1 = m.nodes.col(m.triangles(1, t));
  const Eigen::Vector2d p2 = m.nodes.col(m.triangles(2, t));
  const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
  Element e;
  e.area = 0.5 * det;
  e.gx << p1.y() - p2.y(), p2.y() - p0.y(), p0.y() - p1.y();
  e.gy << p2.x() - p1.x(), p0.x() - p2.x(), p1.x() - p0.x();
  e.gx /= det;
  e.gy /= det;
  return e;
}

void require_valid(const Mesh& m) {
  const MeshReport rep = validate_mesh(m);
  if (!rep.orientation_violations.empty() || rep.nonconforming_edges > 0 || rep.duplicate_nodes > 0)
    throw MeshError("fem2d", "invalid mesh rejected: " + rep.summary());
}

SparseMatrix from_triplets(Eigen::Index n, const std::vector<Eigen::Triplet<double>>& trip) {
  SparseMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

// Degree-5 seven-point rule on the reference triangle (barycentric, weights
// summing to 1).
struct TriPoint {
  double l0, l1, l2, w;
};

const std::array<TriPoint, 7>& seven_point_rule() {
  static const std::array<TriPoint, 7> rule = [] {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    return std::array<TriPoint, 7>{{{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
                                    {a1, b1, b1, w1},
                                    {b1, a1, b1, w1},
                                    {b1, b1, a1, w1},
                                    {a2, b2, b2, w2},
                                    {b2, a2, b2, w2},
                                    {b2, b2, a2, w2}}};
  }();
  return rule;
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& m, Anisotropy aniso) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * static_cast<std::size_t>(m.triangle_count()));
  for (int t = 0; t < m.triangle_count(); ++t) {
    const Element e = element(m, t);
    const Eigen::Matrix3d k =
        e.area * (aniso.d1 * e.gx * e.gx.transpose() + aniso.d2 * e.gy * e.gy.transpose());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trip.emplace_back(m.triangles(i, t), m.triangles(j, t), k(i, j));
  }
  return from_triplets(m.node_count(), trip);
}

SparseMatrix assemble_mass(const Mesh& m) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * static_cast<std::size_t>(m.triangle_count()));
  for (int t = 0; t < m.triangle_count(); ++t) {
    const double a = m.signed_area(t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(m.triangles(i, t), m.triangles(j, t), a * (i == j ? 2.0 : 1.0) / 12.0);
  }
  return from_triplets(m.node_count(), trip);
}

Eigen::VectorXd assemble_load(const Mesh& m, const Source2D& f) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(m.node_count());
  for (int t = 0; t < m.triangle_count(); ++t) {
    const double a = m.signed_area(t);
    std::array<double, 3> fm;  // fm[k]: midpoint of edge (k, k+1)
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector2d mid =
          0.5 * (m.nodes.col(m.triangles(k, t)) + m.nodes.col(m.triangles((k + 1) % 3, t)));
      fm[k] = f(mid.x(), mid.y());
    }
    // Node k touches the midpoints of edges (k, k+1) and (k-1, k), where its
    // hat function equals 1/2.
    for (int k = 0; k < 3; ++k) load(m.triangles(k, t)) += a / 3.0 * 0.5 * (fm[k] + fm[(k + 2) % 3]);
  }
  return load;
}

SparseSystem assemble(const Mesh& m, const Source2D& f, Anisotropy aniso, double reaction) {
  if (!(aniso.d1 > 0.0 && aniso.d2 > 0.0))
    throw PreconditionError("fem2d", "diffusion coefficients must be positive");
  require_valid(m);
  SparseSystem sys;
  sys.matrix = assemble_stiffness(m, aniso);
  if (reaction != 0.0) sys.matrix += reaction * assemble_mass(m);
  sys.rhs = assemble_load(m, f);
  return sys;
}

Eigen::VectorXd conjugate_gradient(const SparseMatrix& a, const Eigen::VectorXd& b,
                                   const SolverOptions& opts, SolveInfo* info) {
  const Eigen::Index n = b.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd inv_diag = a.diagonal().cwiseInverse();
  if (!inv_diag.allFinite() || (a.diagonal().array() <= 0.0).any())
    throw NumericError("fem2d", "matrix has a non-positive diagonal entry");

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd ap(n);
  double rz = r.dot(z);
  const double initial = std::sqrt(std::max(rz, 0.0));
  if (info) *info = {0, initial, initial};
  if (initial == 0.0) return x;

  double res = initial;
  for (int it = 1; it <= opts.max_iter; ++it) {
    ap.noalias() = a * p;
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) throw NumericError("fem2d", "matrix is not positive definite");
    const double step = rz / pap;
    x += step * p;
    r -= step * ap;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    res = std::sqrt(std::max(rz_next, 0.0));
    if (info) {
      info->iterations = it;
      info->final_residual = res;
    }
    if (res <= opts.tol * initial) return x;
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw ConvergenceError("fem2d",
                         "conjugate gradients did not converge in " +
                             std::to_string(opts.max_iter) + " iterations (residual " +
                             format_double(res) + ")",
                         res);
}

Field solve(const SparseSystem& sys, std::shared_ptr<const Mesh> mesh, const SolverOptions& opts,
            SolveInfo* info) {
  return {std::move(mesh), conjugate_gradient(sys.matrix, sys.rhs, opts, info)};
}

Field solve_with_dirichlet(const SparseSystem& sys, std::shared_ptr<const Mesh> mesh,
                           const std::vector<int>& fixed, const Eigen::VectorXd& values,
                           const SolverOptions& opts, SolveInfo* info) {
  const Eigen::Index n = sys.dofs();
  if (static_cast<Eigen::Index>(fixed.size()) != values.size())
    throw PreconditionError("fem2d", "one Dirichlet value per fixed node is required");
  std::vector<int> map(n, 0);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    map[fixed[k]] = -1;
    full(fixed[k]) = values(static_cast<Eigen::Index>(k));
  }
  int free = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (map[i] == 0) map[i] = free++;
    else map[i] = -1;

  Eigen::VectorXd rhs(free);
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (map[i] < 0) continue;
    double ri = sys.rhs(i);
    for (SparseMatrix::InnerIterator it(sys.matrix, i); it; ++it) {
      const int j = map[it.col()];
      if (j < 0) ri -= it.value() * full(it.col());
      else trip.emplace_back(map[i], j, it.value());
    }
    rhs(map[i]) = ri;
  }
  SparseMatrix reduced(free, free);
  reduced.setFromTriplets(trip.begin(), trip.end());
  const Eigen::VectorXd x = conjugate_gradient(reduced, rhs, opts, info);
  for (Eigen::Index i = 0; i < n; ++i)
    if (map[i] >= 0) full(i) = x(map[i]);
  return {std::move(mesh), full};
}

std::vector<int> tagged_nodes(const Mesh& m, BoundaryTag tag) {
  std::vector<int> out;
  for (const auto& e : m.boundary)
    if (e.tag == tag) out.insert(out.end(), {e.a, e.b});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FieldNorms norms(const Field& u, double eps) {
  const Mesh& m = *u.mesh;
  double l2 = 0.0, d1 = 0.0, d2 = 0.0;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const Element e = element(m, t);
    const Eigen::Vector3d v(u.values(m.triangles(0, t)), u.values(m.triangles(1, t)),
                            u.values(m.triangles(2, t)));
    // Exact P1 mass form: area / 12 * (v^T v + (sum v)^2).
    l2 += e.area / 12.0 * (v.squaredNorm() + v.sum() * v.sum());
    const double g1 = e.gx.dot(v), g2 = e.gy.dot(v);
    d1 += e.area * g1 * g1;
    d2 += e.area * g2 * g2;
  }
  FieldNorms n;
  n.l2 = std::sqrt(l2);
  n.dx1 = std::sqrt(d1);
  n.dx2 = std::sqrt(d2);
  n.dx2_over_eps = n.dx2 / eps;
  return n;
}

double energy(const Field& u, Anisotropy aniso) {
  const Mesh& m = *u.mesh;
  double sum = 0.0;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const Element e = element(m, t);
    const Eigen::Vector3d v(u.values(m.triangles(0, t)), u.values(m.triangles(1, t)),
                            u.values(m.triangles(2, t)));
    const double g1 = e.gx.dot(v), g2 = e.gy.dot(v);
    sum += e.area * (aniso.d1 * g1 * g1 + aniso.d2 * g2 * g2);
  }
  return sum;
}

double l2_distance_to_1d(const Field& u, const Function1D& u0) {
  const Mesh& m = *u.mesh;
  double sum = 0.0;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const double a = m.signed_area(t);
    for (int k = 0; k < 3; ++k) {
      const int i = m.triangles(k, t), j = m.triangles((k + 1) % 3, t);
      const double x1 = 0.5 * (m.nodes(0, i) + m.nodes(0, j));
      const double d = 0.5 * (u.values(i) + u.values(j)) - u0(x1);
      sum += a / 3.0 * d * d;
    }
  }
  return std::sqrt(sum);
}

double l2_distance(const Field& u, const Source2D& exact) {
  const Mesh& m = *u.mesh;
  double sum = 0.0;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const double a = m.signed_area(t);
    const int i0 = m.triangles(0, t), i1 = m.triangles(1, t), i2 = m.triangles(2, t);
    for (const TriPoint& q : seven_point_rule()) {
      const Eigen::Vector2d p = q.l0 * m.nodes.col(i0) + q.l1 * m.nodes.col(i1) + q.l2 * m.nodes.col(i2);
      const double uh = q.l0 * u.values(i0) + q.l1 * u.values(i1) + q.l2 * u.values(i2);
      const double d = uh - exact(p.x(), p.y());
      sum += a * q.w * d * d;
    }
  }
  return std::sqrt(sum);
}

Field solve_rescaled(const ProfileSpec& spec, double eps, const Source2D& f,
                     const MeshParams& mesh_params, const SolverOptions& opts, SolveInfo* info) {
  auto mesh = std::make_shared<const Mesh>(mesh_type1(spec, eps, mesh_params));
  const SparseSystem sys = assemble(*mesh, f, Anisotropy::rescaled(eps));
  return solve(sys, std::move(mesh), opts, info);
}

Field solve_thin_unscaled(const ProfileSpec& spec, double eps, const Source2D& f,
                          const MeshParams& mesh_params, const SolverOptions& opts,
                          SolveInfo* info) {
  auto mesh = std::make_shared<const Mesh>(scale_vertical(mesh_type1(spec, eps, mesh_params), eps));
  const Source2D h = [&f, eps](double x, double y) { return f(x, y / eps); };
  const SparseSystem sys = assemble(*mesh, h, Anisotropy{});
  return solve(sys, std::move(mesh), opts, info);
}

EigenResult eigen_first(std::shared_ptr<const Mesh> mesh, Anisotropy aniso,
                        const EigenOptions& opts) {
  const Mesh& m = *mesh;
  require_valid(m);
  const SparseMatrix k_full = assemble_stiffness(m, aniso);
  const SparseMatrix m_full = assemble_mass(m);
  const std::vector<int> fixed = tagged_nodes(m, BoundaryTag::Gamma0);
  const Eigen::Index n = m.node_count();

  EigenResult res;
  if (fixed.empty()) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    res.value = 0.0;
    res.vector = {mesh, ones / std::sqrt(ones.dot(m_full * ones))};
    return res;
  }

  std::vector<int> map(n, 0);
  for (int i : fixed) map[i] = -1;
  int free = 0;
  for (Eigen::Index i = 0; i < n; ++i) map[i] = map[i] < 0 ? -1 : free++;
  auto restrict = [&](const SparseMatrix& a) {
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (map[i] < 0) continue;
      for (SparseMatrix::InnerIterator it(a, i); it; ++it)
        if (map[it.col()] >= 0) trip.emplace_back(map[i], map[it.col()], it.value());
    }
    SparseMatrix r(free, free);
    r.setFromTriplets(trip.begin(), trip.end());
    return r;
  };
  const SparseMatrix kr = restrict(k_full);
  const SparseMatrix mr = restrict(m_full);

  Eigen::VectorXd x = Eigen::VectorXd::Ones(free);
  x /= std::sqrt(x.dot(mr * x));
  double lambda = x.dot(kr * x);
  const SolverOptions inner{opts.inner_tol, 100000};
  for (int it = 1; it <= opts.max_iter; ++it) {
    Eigen::VectorXd y = conjugate_gradient(kr, mr * x, inner);
    y /= std::sqrt(y.dot(mr * y));
    const double next = y.dot(kr * y);
    x = std::move(y);
    res.iterations = it;
    if (std::abs(next - lambda) <= opts.tol * std::abs(next)) {
      lambda = next;
      Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i)
        if (map[i] >= 0) full(i) = x(map[i]);
      res.value = lambda;
      res.vector = {mesh, full};
      return res;
    }
    lambda = next;
  }
  throw ConvergenceError("fem2d", "inverse iteration stagnated", lambda);
}

void write_field_csv(std::ostream& os, const Field& u) {
  const Mesh& m = *u.mesh;
  os << "node_id,x1,x2,value\n";
  for (int i = 0; i < m.node_count(); ++i)
    os << i << ',' << format_double(m.nodes(0, i)) << ',' << format_double(m.nodes(1, i)) << ','
       << format_double(u.values(i)) << '\n';
}

void write_system_triplets(std::ostream& os, const SparseSystem& sys) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << sys.matrix.rows() << ' ' << sys.matrix.cols() << ' ' << sys.matrix.nonZeros() << '\n';
  for (Eigen::Index i = 0; i < sys.matrix.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(sys.matrix, i); it; ++it)
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_double(it.value()) << '\n';
  os << "% rhs\n";
  for (Eigen::Index i = 0; i < sys.rhs.size(); ++i) os << format_double(sys.rhs(i)) << '\n';
}

}  // namespace thinhom
