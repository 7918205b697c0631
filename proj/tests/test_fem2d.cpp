#include "support.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/fem2d.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace thinhom;
using oracle::pi;

namespace {

Mesh reference_triangle() {
  Mesh m;
  m.nodes.resize(2, 3);
  m.nodes << 0, 1, 0,
             0, 0, 1;
  m.triangles.resize(3, 1);
  m.triangles << 0, 1, 2;
  m.boundary = {{0, 1, BoundaryTag::Bottom}, {1, 2, BoundaryTag::Top}, {2, 0, BoundaryTag::LateralLeft}};
  return m;
}

Field interpolate(std::shared_ptr<const Mesh> m, const Source2D& f) {
  Eigen::VectorXd v(m->node_count());
  for (int i = 0; i < m->node_count(); ++i) v(i) = f(m->nodes(0, i), m->nodes(1, i));
  return {std::move(m), std::move(v)};
}

/// Same mesh with node numbers permuted.
Mesh permuted(const Mesh& m, const std::vector<int>& perm) {
  Mesh p = m;
  for (int i = 0; i < m.node_count(); ++i) p.nodes.col(perm[i]) = m.nodes.col(i);
  for (int t = 0; t < m.triangle_count(); ++t)
    for (int k = 0; k < 3; ++k) p.triangles(k, t) = perm[m.triangles(k, t)];
  for (auto& e : p.boundary) e.a = perm[e.a], e.b = perm[e.b];
  return p;
}

}  // namespace

TEST_SUITE("fem2d") {

TEST_CASE("element matrices on the reference triangle") {
  const Mesh m = reference_triangle();
  Eigen::Matrix3d k_iso;
  k_iso << 1.0, -0.5, -0.5,
          -0.5,  0.5,  0.0,
          -0.5,  0.0,  0.5;
  CHECK((Eigen::MatrixXd(assemble_stiffness(m, {1.0, 1.0})) - k_iso).norm() < 1e-15);

  // d1 weights the x-gradients, d2 the y-gradients.
  Eigen::Matrix3d k_aniso;
  k_aniso << 0.5 * 3.0 + 0.5 * 7.0, -0.5 * 3.0, -0.5 * 7.0,
             -0.5 * 3.0,             0.5 * 3.0,  0.0,
             -0.5 * 7.0,             0.0,        0.5 * 7.0;
  CHECK((Eigen::MatrixXd(assemble_stiffness(m, {3.0, 7.0})) - k_aniso).norm() < 1e-14);

  Eigen::Matrix3d mass = Eigen::Matrix3d::Constant(1.0 / 24.0);
  mass.diagonal().setConstant(2.0 / 24.0);
  CHECK((Eigen::MatrixXd(assemble_mass(m)) - mass).norm() < 1e-15);

  // Edge-midpoint rule: each midpoint carries area / 3, shared by its two nodes.
  const Eigen::VectorXd load = assemble_load(m, [](double x, double y) { return 1.0 + x + 4.0 * y; });
  const double f01 = 1.5, f12 = 1.0 + 0.5 + 2.0, f20 = 1.0 + 2.0;
  const Eigen::Vector3d expect = (0.5 / 3.0) * 0.5 * Eigen::Vector3d(f01 + f20, f01 + f12, f12 + f20);
  CHECK((load - expect).norm() < 1e-15);
}

TEST_CASE("assembly properties") {
  const Mesh m = mesh_type1(oracle::one_minus_cos(1.0, {0.0}, 1.5), 0.2);
  const SparseMatrix k = assemble_stiffness(m, Anisotropy::rescaled(0.2));
  const Eigen::VectorXd rows = k * Eigen::VectorXd::Ones(m.node_count());
  CHECK(rows.cwiseAbs().maxCoeff() < 1e-9 * k.coeffs().cwiseAbs().maxCoeff());
  CHECK((Eigen::MatrixXd(k) - Eigen::MatrixXd(k).transpose()).norm() < 1e-12 * k.norm());

  const SparseSystem zero = assemble(m, [](double, double) { return 0.0; }, Anisotropy::rescaled(0.2));
  CHECK(zero.rhs.isZero(0.0));
  CHECK(zero.dofs() == m.node_count());

  Mesh broken = m;
  std::swap(broken.triangles(1, 0), broken.triangles(2, 0));
  CHECK_THROWS_AS(assemble(broken, [](double, double) { return 1.0; }, {}), MeshError);
}

TEST_CASE("constant source gives the constant solution") {
  const ProfileSpec s = oracle::one_minus_cos(1.0, {0.0, 1.0}, 1.5, {1.0, 0.5});
  for (Anisotropy d : {Anisotropy{1.0, 1.0}, Anisotropy::rescaled(0.1), Anisotropy{5.0, 0.3}}) {
    auto mesh = std::make_shared<const Mesh>(mesh_type1(s, 0.1));
    const Field u = solve(assemble(*mesh, [](double, double) { return 2.5; }, d), mesh);
    CHECK((u.values.array() - 2.5).abs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("conjugate gradients against a dense elimination oracle") {
  auto mesh = std::make_shared<const Mesh>(mesh_rectangle(1.0, 1.0, 1, 1));
  const SparseSystem sys = assemble(*mesh, [](double x, double y) { return 1.0 + 3.0 * x - y; }, {2.0, 0.5});
  SolveInfo info;
  const Field u = solve(sys, mesh, {1e-14, 100}, &info);
  const Eigen::VectorXd ref = oracle::dense_solve(Eigen::MatrixXd(sys.matrix), sys.rhs);
  CHECK((u.values - ref).norm() < 1e-12 * ref.norm());
  CHECK(info.final_residual <= 1e-14 * info.initial_residual);
}

TEST_CASE("termination contract and convergence failure") {
  const ProfileSpec s = oracle::one_minus_cos(1.0, {0.0}, 1.5);
  auto mesh = std::make_shared<const Mesh>(mesh_type1(s, 0.1));
  const SparseSystem sys = assemble(*mesh, [](double x, double y) { return std::cos(pi * x) + y; }, Anisotropy::rescaled(0.1));
  SolveInfo info;
  solve(sys, mesh, {1e-10, 50000}, &info);
  CHECK(info.iterations > 0);
  CHECK(info.final_residual <= 1e-10 * info.initial_residual);
  try {
    conjugate_gradient(sys.matrix, sys.rhs, {1e-10, 3});
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
    CHECK(std::string(e.what()).rfind("fem2d: ", 0) == 0);
  }
}

TEST_CASE("stability and Galerkin orthogonality") {
  const ProfileSpec s = oracle::one_minus_cos(1.0, {0.0}, 1.5);
  const double eps = 0.1;
  auto mesh = std::make_shared<const Mesh>(mesh_type1(s, eps));
  const Source2D f = [](double x, double y) { return std::sin(3.0 * x) + 0.5 * y; };
  const SparseSystem sys = assemble(*mesh, f, Anisotropy::rescaled(eps));
  const double tol = 1e-10;
  const Field u = solve(sys, mesh, {tol, 50000});
  const Field fi = interpolate(mesh, f);
  const double f_norm = l2_distance(fi, [](double, double) { return 0.0; });
  CHECK(norms(u, eps).l2 <= f_norm + 1e-8);
  const Eigen::VectorXd r = sys.matrix * u.values - sys.rhs;
  CHECK(r.cwiseAbs().maxCoeff() <= 10.0 * tol * sys.rhs.norm());
}

TEST_CASE("norms of interpolated fields") {
  auto sq = std::make_shared<const Mesh>(mesh_rectangle(1.0, 1.0, 8, 8));
  const FieldNorms c = norms(interpolate(sq, [](double, double) { return 3.0; }), 0.5);
  CHECK(c.l2 == doctest::Approx(3.0));
  CHECK(c.dx1 < 1e-14);
  CHECK(c.dx2 < 1e-14);
  CHECK(c.dx2_over_eps < 1e-14);

  auto rect = std::make_shared<const Mesh>(mesh_rectangle(2.0, 0.5, 5, 3));
  const FieldNorms r = norms(interpolate(rect, [](double, double) { return 2.0; }), 0.5);
  CHECK(r.l2 == doctest::Approx(2.0 * std::sqrt(1.0)));

  const FieldNorms x = norms(interpolate(sq, [](double x, double) { return x; }), 0.5);
  CHECK(x.dx1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x.dx2 < 1e-14);
  CHECK(x.l2 == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));

  const FieldNorms y = norms(interpolate(sq, [](double, double y) { return 2.0 * y; }), 0.25);
  CHECK(y.dx2 == doctest::Approx(2.0));
  CHECK(y.dx2_over_eps == doctest::Approx(8.0));
  CHECK(energy(interpolate(sq, [](double x, double y) { return x + 2.0 * y; }), {3.0, 0.5}) ==
        doctest::Approx(3.0 + 0.5 * 4.0));
}

TEST_CASE("distances to one-dimensional and exact functions") {
  const ProfileSpec s = oracle::one_minus_cos(1.0, {0.0}, 1.5);
  auto mesh = std::make_shared<const Mesh>(mesh_type1(s, 0.2));
  const Field one = interpolate(mesh, [](double, double) { return 1.0; });
  const Field zero = interpolate(mesh, [](double, double) { return 0.0; });
  CHECK(l2_distance_to_1d(one, [](double) { return 1.0; }) < 1e-15);
  CHECK(l2_distance_to_1d(zero, [](double) { return 1.0; }) == doctest::Approx(std::sqrt(mesh->area())).epsilon(1e-14));
  // Linear fields are reproduced, so only the quadrature of a quadratic matters.
  auto sq = std::make_shared<const Mesh>(mesh_rectangle(1.0, 1.0, 4, 4));
  const Field x = interpolate(sq, [](double x, double) { return x; });
  CHECK(l2_distance(x, [](double x, double) { return x; }) < 1e-15);
  CHECK(l2_distance_to_1d(x, [](double) { return 0.0; }) == doctest::Approx(std::sqrt(1.0 / 3.0)));
}

TEST_CASE("Dirichlet elimination reproduces a linear field") {
  auto mesh = std::make_shared<const Mesh>(mesh_rectangle(1.0, 1.0, 6, 6, kGammaAll));
  const SparseSystem sys = assemble(*mesh, [](double, double) { return 0.0; }, {1.0, 1.0}, 0.0);
  const std::vector<int> fixed = tagged_nodes(*mesh, BoundaryTag::Gamma0);
  CHECK(fixed.size() == 24);
  Eigen::VectorXd g(fixed.size());
  for (std::size_t i = 0; i < fixed.size(); ++i) g(i) = mesh->nodes(0, fixed[i]) + 2.0 * mesh->nodes(1, fixed[i]);
  const Field u = solve_with_dirichlet(sys, mesh, fixed, g, {1e-13, 1000});
  CHECK(l2_distance(u, [](double x, double y) { return x + 2.0 * y; }) < 1e-11);
}

TEST_CASE("rescaled and unscaled thin problems agree") {
  const ProfileSpec s = oracle::one_minus_cos(1.0, {0.0, 0.5}, 1.5, {1.0, 0.5});
  const double eps = 0.2;
  const Source2D f = [](double x, double y) { return std::cos(pi * x) + 0.3 * y; };
  const SolverOptions tight{1e-13, 100000};
  const Field u = solve_rescaled(s, eps, f, {}, tight);
  const Field w = solve_thin_unscaled(s, eps, f, {}, tight);
  REQUIRE(u.values.size() == w.values.size());
  CHECK((u.values - w.values).cwiseAbs().maxCoeff() < 1e-8);
  for (int i = 0; i < u.mesh->node_count(); i += 97) {
    CHECK(w.mesh->nodes(0, i) == u.mesh->nodes(0, i));
    CHECK(w.mesh->nodes(1, i) == doctest::Approx(eps * u.mesh->nodes(1, i)));
  }
  const double nu = norms(u, eps).l2, nw = norms(w, 1.0).l2;
  CHECK(nw * nw == doctest::Approx(eps * nu * nu).epsilon(1e-12));

  const Field c = solve_thin_unscaled(s, eps, [](double, double) { return 4.0; });
  CHECK((c.values.array() - 4.0).abs().maxCoeff() < 1e-8);
}

TEST_CASE("first mixed eigenvalue of the unit square") {
  auto bottom = std::make_shared<const Mesh>(mesh_rectangle(1.0, 1.0, 64, 64, kGammaBottom));
  const EigenResult e = eigen_first(bottom);
  CHECK(std::abs(e.value - pi * pi / 4.0) < 0.01 * pi * pi / 4.0);
  // The eigenvector is sin(pi y / 2) up to normalization and sign.
  const double scale = e.vector.values.maxCoeff() + e.vector.values.minCoeff();
  const Field v{e.vector.mesh, e.vector.values / scale};
  CHECK(l2_distance(v, [](double, double y) { return std::sin(pi * y / 2.0); }) < 2e-3);

  auto all = std::make_shared<const Mesh>(mesh_rectangle(1.0, 1.0, 64, 64, kGammaAll));
  CHECK(std::abs(eigen_first(all).value - 2.0 * pi * pi) < 0.02 * 2.0 * pi * pi);

  auto none = std::make_shared<const Mesh>(mesh_rectangle(1.0, 1.0, 8, 8));
  const EigenResult z = eigen_first(none);
  CHECK(z.value == 0.0);
  CHECK(z.vector.values.maxCoeff() - z.vector.values.minCoeff() < 1e-14);
  CHECK(z.vector.values(0) == doctest::Approx(1.0));  // unit mass
}

TEST_CASE("eigenvalue is invariant under node renumbering") {
  const Mesh m = mesh_rectangle(1.0, 1.0, 24, 24, kGammaBottom | kGammaLeft);
  std::vector<int> perm(m.node_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(7));
  const double a = eigen_first(std::make_shared<const Mesh>(m)).value;
  const double b = eigen_first(std::make_shared<const Mesh>(permuted(m, perm))).value;
  CHECK(std::abs(a - b) <= 1e-8 * a);
}

TEST_CASE("field and system export") {
  auto mesh = std::make_shared<const Mesh>(mesh_rectangle(1.0, 1.0, 1, 1));
  std::ostringstream os;
  write_field_csv(os, interpolate(mesh, [](double x, double y) { return x + 10 * y; }));
  CHECK(os.str() == "node_id,x1,x2,value\n0,0,0,0\n1,0,1,10\n2,1,0,1\n3,1,1,11\n");
  std::ostringstream ts;
  write_system_triplets(ts, assemble(*mesh, [](double, double) { return 1.0; }, {}));
  CHECK(ts.str().rfind("%%MatrixMarket", 0) == 0);
}

}  // TEST_SUITE
