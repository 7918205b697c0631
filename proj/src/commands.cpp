#include "thinhom/commands.hpp"

#include "thinhom/cell.hpp"
#include "thinhom/errors.hpp"
#include "thinhom/fem1d.hpp"
#include "thinhom/homogenize.hpp"
#include "thinhom/io.hpp"

#include <cmath>
#include <filesystem>
#include <memory>
#include <numbers>
#include <ostream>
#include <iostream>
#include <map>
#include <sstream>

namespace thinhom {

namespace fs = std::filesystem;

namespace {

struct Context {
  const RunConfig& cfg;
  fs::path dir;
  std::vector<std::string> formats;
  int threads;
  std::ostream& log;

  void write(const std::string& name, const std::string& content) const {
    const fs::path p = dir / name;
    write_file_atomic(p, content);
    log << "wrote " << p.string() << '\n';
  }
};

void require_domain(const RunConfig& cfg, const std::string& command) {
  if (!cfg.domain.profile && !cfg.domain.comb)
    throw ConfigError("cli", command + " needs a [domain] section");
}

LimitCoefficients coefficients(const RunConfig& cfg) {
  const Eigen::VectorXd grid = uniform_grid(cfg.study.grid_points);
  const Source f = cfg.source.source();
  LimitCoefficients c = cfg.domain.profile ? coeffs_type1(*cfg.domain.profile, grid)
                                           : coeffs_type2(*cfg.domain.comb, grid);
  if (f.x_only) c.fhat_values = fhat_limit_for_x_only_f(f.x_only, c);
  else if (cfg.domain.profile) c.fhat_values = fhat_epsilon(f.f, *cfg.domain.profile, cfg.study.eps, grid);
  else c.fhat_values = fhat_epsilon(f.f, *cfg.domain.comb, cfg.study.eps, grid);
  return c;
}

void solve2d(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  require_domain(cfg, "solve2d");
  const double eps = cfg.study.eps;
  const Source f = cfg.source.source();
  SolveInfo info;
  Field u;
  if (cfg.domain.profile) {
    u = solve_rescaled(*cfg.domain.profile, eps, f.f, cfg.mesh, cfg.solver, &info);
  } else {
    auto mesh = std::make_shared<const Mesh>(mesh_type2(*cfg.domain.comb, eps, cfg.mesh));
    u = solve(assemble(*mesh, f.f, Anisotropy::rescaled(eps)), mesh, cfg.solver, &info);
  }
  std::ostringstream field, mesh;
  write_field_csv(field, u);
  write_mesh(mesh, *u.mesh);
  ctx.write("field.csv", field.str());
  ctx.write("mesh.txt", mesh.str());
  const FieldNorms n = norms(u, eps);
  ctx.log << "eps = " << format_double(eps) << ", nodes = " << u.mesh->node_count()
          << ", triangles = " << u.mesh->triangle_count() << ", iterations = " << info.iterations
          << ", dx2_over_eps = " << format_double(n.dx2_over_eps) << '\n';
}

void solve1d(const Context& ctx) {
  require_domain(ctx.cfg, "solve1d");
  const Limit1DSolution u0 = solve_limit(coefficients(ctx.cfg));
  std::ostringstream os;
  write_solution_csv(os, u0);
  ctx.write("u0.csv", os.str());
}

void homogenize(const Context& ctx) {
  require_domain(ctx.cfg, "homogenize");
  std::ostringstream os;
  write_coefficients_csv(os, coefficients(ctx.cfg));
  ctx.write("coefficients.csv", os.str());
}

Trace cell_trace(const CellConfig& c, double eps) {
  const double a = std::pow(eps, c.alpha);
  if (c.trace == "cos") return [a](double x) { return std::cos(std::numbers::pi * x / a); };
  const std::vector<double> p = c.trace_poly;
  return [a, p](double x) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * (x / a) + *it;
    return acc;
  };
}

void cell(const Context& ctx) {
  const CellConfig& c = ctx.cfg.cell;
  const FourierCellSolution sol = fourier_solution(cell_trace(c, c.eps), c.eps, c.alpha, c.modes);
  std::vector<double> y(c.y_samples);
  for (int i = 0; i < c.y_samples; ++i) y[i] = static_cast<double>(i) / (c.y_samples - 1);
  std::ostringstream decay;
  write_decay_csv(decay, y, decay_profile(sol, y));
  ctx.write("decay.csv", decay.str());

  std::ostringstream energy;
  energy << "epsilon,energy,trace_energy,ratio\n";
  for (double eps : c.epsilons) {
    const FourierCellSolution s = fourier_solution(cell_trace(c, eps), eps, c.alpha, c.modes);
    const double e = cell_energy(s);
    const double t = trace_energy(s);
    energy << format_double(eps) << ',' << format_double(e) << ',' << format_double(t) << ','
           << format_double(t > 0.0 ? e / t : 0.0) << '\n';
  }
  ctx.write("energy.csv", energy.str());
}

void eigen(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  std::shared_ptr<const Mesh> mesh;
  if (cfg.domain.comb) {
    mesh = std::make_shared<const Mesh>(mesh_cell(*cfg.domain.comb, cfg.mesh.h));
  } else {
    const EigenConfig& e = cfg.eigen;
    mesh = std::make_shared<const Mesh>(mesh_rectangle(e.width, e.height, e.n, e.n, e.gamma0));
  }
  const EigenResult r = eigen_first(mesh);
  ctx.log << "iterations = " << r.iterations << '\n';
  std::cout << "e1 = " << format_double(r.value) << '\n';
}

void converge(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  require_domain(cfg, "converge");
  StudyParams params{cfg.mesh, cfg.solver, cfg.study.grid_points, ctx.threads};
  const Source f = cfg.source.source();
  const ConvergenceReport r =
      cfg.domain.profile ? run_study_type1(*cfg.domain.profile, f, cfg.study.epsilons, params)
                         : run_study_type2(*cfg.domain.comb, f, cfg.study.epsilons, params);
  // The CSV is always written; the gnuplot script refers to it.
  ctx.write("report.csv", emit_report(r, ReportFormat::Csv));
  for (const auto& fmt : ctx.formats)
    if (fmt == "gnuplot") ctx.write("report.gp", emit_report(r, ReportFormat::Gnuplot, "report.csv"));
  for (const auto& row : r.rows)
    ctx.log << "eps = " << format_double(row.eps) << "  l2_error = " << format_double(row.l2_error)
            << "  dx2_over_eps = " << format_double(row.dx2_over_eps) << '\n';
}

}  // namespace

int dispatch(const std::string& command, const RunConfig& cfg, const CommandFlags& flags,
             std::ostream& log) {
  using Handler = void (*)(const Context&);
  static const std::map<std::string, Handler> handlers{
      {"solve2d", solve2d}, {"solve1d", solve1d}, {"homogenize", homogenize},
      {"cell", cell},       {"eigen", eigen},     {"converge", converge},
  };
  const auto it = handlers.find(command);
  if (it == handlers.end()) throw ConfigError("cli", "unknown command '" + command + "'");

  std::vector<std::string> formats = cfg.output.formats;
  if (flags.format) {
    if (*flags.format != "csv" && *flags.format != "gnuplot")
      throw ConfigError("cli", "--format must be csv or gnuplot");
    formats = {*flags.format};
  }
  const fs::path dir = flags.out.value_or(cfg.output.directory);
  fs::create_directories(dir);

  for (const auto& d : cfg.defaults) log << "default " << d << '\n';
  it->second(Context{cfg, dir, formats, std::max(1, flags.threads), log});
  return 0;
}

}  // namespace thinhom
