#pragma once

// Epsilon sweeps comparing the thin-domain solution with the solution of the
// homogenized one-dimensional problem.

#include "thinhom/combgeom.hpp"
#include "thinhom/fem1d.hpp"
#include "thinhom/fem2d.hpp"
#include "thinhom/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace thinhom {

/// Right-hand side f(x1, x2) of the rescaled problem. When f depends on x1
/// only, `x_only` is set and the limit right-hand side is c(x) f(x);
/// otherwise the section integral at the smallest epsilon of a sweep is used.
struct Source {
  Source2D f;
  Function1D x_only;

  static Source constant(double c);
  static Source of_x1(Function1D g);
  static Source general(Source2D f);
};

struct StudyParams {
  MeshParams mesh;
  SolverOptions solver;
  int grid_points = 1025;
  int threads = 1;
};

struct ConvergenceRow {
  double eps = 0.0;
  long dofs = 0;
  long triangles = 0;
  double l2_error = 0.0;
  double dx2_over_eps = 0.0;
  int iterations = 0;
  double wall_time = 0.0;
  // Diagnostics not written to the CSV.
  double u0_norm = 0.0;  ///< ||u0||_{L2(Omega^eps)}
  double l2 = 0.0;
  double dx1 = 0.0;
};

struct ConvergenceReport {
  std::string domain_type;  ///< "graph" or "comb"
  std::uint64_t spec_hash = 0;
  std::string resolution;
  std::vector<ConvergenceRow> rows;
};

/// Canonical text of a spec, used for hashing and logs.
std::string describe(const ProfileSpec& spec);
std::string describe(const CombSpec& spec);
std::uint64_t fnv1a(std::string_view text);

/// Limit solution u0 for a Type I domain.
Limit1DSolution limit_solution(const ProfileSpec& spec, const Source& f, int grid_points,
                               double fhat_eps = 0.0);
Limit1DSolution limit_solution(const CombSpec& spec, const Source& f, int grid_points,
                               double fhat_eps = 0.0);

ConvergenceReport run_study_type1(const ProfileSpec& spec, const Source& f,
                                  const std::vector<double>& eps_list, const StudyParams& params = {});

/// Checks the cell eigenvalue on mesh_cell(spec, h) first; throws PreconditionError
/// "hypothesis HQ violated" when e1(Q0) <= 1e-6.
ConvergenceReport run_study_type2(const CombSpec& spec, const Source& f,
                                  const std::vector<double>& eps_list, const StudyParams& params = {});

enum class ReportFormat { Csv, Gnuplot };

/// CSV with header "epsilon,dofs,triangles,l2_error,dx2_over_eps,iterations,wall_time",
/// or a gnuplot script plotting `csv_name` on a log-scaled epsilon axis.
std::string emit_report(const ConvergenceReport& r, ReportFormat format,
                        const std::string& csv_name = "report.csv");

}  // namespace thinhom
