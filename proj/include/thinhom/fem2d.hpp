#pragma once

// Piecewise-linear finite elements for the anisotropic Neumann problem
//   -d1 u_11 - d2 u_22 + r u = f   in the mesh domain,
// natural boundary conditions, plus the mixed Dirichlet/Neumann eigenproblem.

#include "thinhom/geometry.hpp"
#include "thinhom/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace thinhom {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Source2D = std::function<double(double, double)>;
using Function1D = std::function<double(double)>;

/// Diffusion pair (d1, d2); the rescaled thin problem uses (1, 1 / eps^2).
struct Anisotropy {
  double d1 = 1.0;
  double d2 = 1.0;

  static Anisotropy rescaled(double eps) { return {1.0, 1.0 / (eps * eps)}; }
};

struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;

  Eigen::Index dofs() const { return rhs.size(); }
};

/// Nodal P1 function on a mesh.
struct Field {
  std::shared_ptr<const Mesh> mesh;
  Eigen::VectorXd values;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 50000;
};

struct SolveInfo {
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
};

SparseMatrix assemble_stiffness(const Mesh& m, Anisotropy aniso);
SparseMatrix assemble_mass(const Mesh& m);
/// Load vector with the three-point edge-midpoint rule per triangle.
Eigen::VectorXd assemble_load(const Mesh& m, const Source2D& f);

/// Stiffness + reaction * mass, with the edge-midpoint load. Rejects meshes
/// with inverted triangles, non-conforming edges or duplicate nodes.
SparseSystem assemble(const Mesh& m, const Source2D& f, Anisotropy aniso, double reaction = 1.0);

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
/// Stops when the preconditioned residual norm drops to tol times its initial
/// value; throws ConvergenceError after max_iter iterations.
Eigen::VectorXd conjugate_gradient(const SparseMatrix& a, const Eigen::VectorXd& b,
                                   const SolverOptions& opts = {}, SolveInfo* info = nullptr);

Field solve(const SparseSystem& sys, std::shared_ptr<const Mesh> mesh,
            const SolverOptions& opts = {}, SolveInfo* info = nullptr);

/// Solves sys with u = values on `fixed` nodes, eliminating those rows and
/// columns so that the reduced system stays symmetric.
Field solve_with_dirichlet(const SparseSystem& sys, std::shared_ptr<const Mesh> mesh,
                           const std::vector<int>& fixed, const Eigen::VectorXd& values,
                           const SolverOptions& opts = {}, SolveInfo* info = nullptr);

/// Nodes lying on edges with the given tag, sorted.
std::vector<int> tagged_nodes(const Mesh& m, BoundaryTag tag);

struct FieldNorms {
  double l2 = 0.0;
  double dx1 = 0.0;
  double dx2 = 0.0;
  double dx2_over_eps = 0.0;
};

FieldNorms norms(const Field& u, double eps);

/// Integral of d1 |u_1|^2 + d2 |u_2|^2.
double energy(const Field& u, Anisotropy aniso);

/// L2 norm over the mesh of u(x1, x2) - u0(x1), three-point rule per triangle.
double l2_distance_to_1d(const Field& u, const Function1D& u0);

/// L2 norm of the difference between a field and an exact function, with a
/// seven-point rule per triangle.
double l2_distance(const Field& u, const Source2D& exact);

/// Rescaled thin problem on Omega^eps: mesh_type1, diffusion (1, 1/eps^2),
/// unit reaction.
Field solve_rescaled(const ProfileSpec& spec, double eps, const Source2D& f,
                     const MeshParams& mesh_params = {}, const SolverOptions& opts = {},
                     SolveInfo* info = nullptr);

/// Isotropic problem -Lap w + w = h on the unscaled thin domain R^eps, with
/// h(x, y) = f(x, y / eps). The mesh is the image of the Omega^eps mesh
/// under (x, y) -> (x, eps y).
Field solve_thin_unscaled(const ProfileSpec& spec, double eps, const Source2D& f,
                          const MeshParams& mesh_params = {}, const SolverOptions& opts = {},
                          SolveInfo* info = nullptr);

struct EigenOptions {
  double tol = 1e-8;
  int max_iter = 2000;
  double inner_tol = 1e-12;
};

struct EigenResult {
  double value = 0.0;
  Field vector;
  int iterations = 0;
};

/// Smallest eigenvalue of the stiffness form relative to the mass form on
/// functions vanishing at gamma0-tagged nodes, by inverse iteration. With no
/// gamma0 edges returns 0 and the constant mode.
EigenResult eigen_first(std::shared_ptr<const Mesh> mesh, Anisotropy aniso = {},
                        const EigenOptions& opts = {});

void write_field_csv(std::ostream& os, const Field& u);
void write_system_triplets(std::ostream& os, const SparseSystem& sys);

}  // namespace thinhom
