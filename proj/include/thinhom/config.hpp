#pragma once

// Sectioned "key = value" run configuration.
//
//   [domain]   type = graph | comb, profile or comb keys
//   [source]   f = [c0, c1, ...] (polynomial in x1), f_x2 = [...] (added
//              polynomial in x2)
//   [mesh]     cells_per_period, ny, h, triangle_cap
//   [solver]   tol, max_iter
//   [study]    epsilons, eps, preset, grid_points
//   [cell]     eps, alpha, modes, trace, y_samples, epsilons
//   [eigen]    width, height, n, gamma0
//   [output]   directory, formats
//
// Lines starting with '#' or ';' are comments. One-dimensional functions are
// written "[c0, c1, ...]" or "poly [c0, ...]" (polynomial) or
// "table [[x, v], ...]" (piecewise linear).

#include "thinhom/combgeom.hpp"
#include "thinhom/experiments.hpp"
#include "thinhom/fem2d.hpp"
#include "thinhom/geometry.hpp"
#include "thinhom/mesh.hpp"

#include <optional>
#include <string>
#include <vector>

namespace thinhom {

struct DomainConfig {
  std::string type;  ///< "graph", "comb" or empty when absent
  std::optional<ProfileSpec> profile;
  std::optional<CombSpec> comb;
};

struct SourceConfig {
  std::vector<double> f_x1{1.0};
  std::vector<double> f_x2;

  Source source() const;
};

struct StudyConfig {
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  double eps = 0.1;
  std::string preset;
  int grid_points = 1025;
};

struct CellConfig {
  double eps = 0.1;
  double alpha = 2.0;
  int modes = 64;
  std::string trace = "cos";       ///< "cos" or "poly"
  std::vector<double> trace_poly;  ///< coefficients in x / eps^alpha
  int y_samples = 41;
  std::vector<double> epsilons{0.2, 0.1, 0.05};
};

struct EigenConfig {
  double width = 1.0;
  double height = 1.0;
  int n = 64;
  unsigned gamma0 = kGammaBottom;
};

struct OutputConfig {
  std::string directory = ".";
  std::vector<std::string> formats{"csv"};
};

struct RunConfig {
  DomainConfig domain;
  SourceConfig source;
  MeshParams mesh;
  SolverOptions solver;
  StudyConfig study;
  CellConfig cell;
  EigenConfig eigen;
  OutputConfig output;
  /// "section.key = value" for every optional key that took its default.
  std::vector<std::string> defaults;
};

/// Parses and validates a configuration. Syntax errors carry the line
/// number; semantic errors name the key and the violated constraint.
RunConfig parse_config(const std::string& text);

/// Epsilon ladder and exponent of a named preset ("alpha1.25", "alpha1.5",
/// "alpha2").
std::pair<double, std::vector<double>> study_preset(const std::string& name);

}  // namespace thinhom
