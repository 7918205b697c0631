#include "thinhom/experiments.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/homogenize.hpp"
#include "thinhom/io.hpp"
#include "thinhom/mesh.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace thinhom {

namespace {

void describe_function(std::ostringstream& os, const char* name, const ScalarFunction1D& f) {
  os << name << '=';
  if (const auto* p = std::get_if<Polynomial>(&f.representation())) {
    os << "poly[";
    for (double c : p->coefficients) os << format_double(c) << ',';
  } else {
    const auto& t = std::get<Table>(f.representation());
    os << "table[";
    for (std::size_t i = 0; i < t.x.size(); ++i) os << format_double(t.x[i]) << ':' << format_double(t.v[i]) << ',';
  }
  os << "];";
}

void check_ladder(const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw ConfigError("experiments", "epsilon list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ConfigError("experiments", "epsilons must be > 0");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw ConfigError("experiments", "epsilons must be strictly decreasing");
  }
}

template <typename RowFn>
std::vector<ConvergenceRow> run_rows(const std::vector<double>& eps_list, int threads, RowFn&& row) {
  std::vector<ConvergenceRow> rows(eps_list.size());
  std::vector<std::exception_ptr> errors(eps_list.size());
  auto work = [&](std::size_t i) {
    try {
      rows[i] = row(eps_list[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const auto n_threads = static_cast<std::size_t>(std::clamp(threads, 1, static_cast<int>(eps_list.size())));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < eps_list.size(); ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < eps_list.size(); i += n_threads) work(i);
      });
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (Error& e) {
      e.prepend("at eps = " + format_double(eps_list[i]) + ": ");
      throw;
    }
  }
  return rows;
}

template <typename Spec>
Limit1DSolution solve_limit_for(const Spec& spec, LimitCoefficients coeffs, const Source& f,
                                double fhat_eps) {
  if (f.x_only) {
    coeffs.fhat_values = fhat_limit_for_x_only_f(f.x_only, coeffs);
  } else {
    if (!(fhat_eps > 0.0))
      throw PreconditionError("experiments", "a source depending on x2 needs an epsilon for fhat");
    coeffs.fhat_values = fhat_epsilon(f.f, spec, fhat_eps, coeffs.grid);
  }
  return solve_limit(coeffs);
}

ConvergenceRow measure(const Field& u, const Limit1DSolution& u0, double eps, const SolveInfo& info) {
  ConvergenceRow row;
  row.eps = eps;
  row.dofs = u.mesh->node_count();
  row.triangles = u.mesh->triangle_count();
  row.l2_error = l2_distance_to_1d(u, [&](double x) { return u0(x); });
  row.u0_norm = l2_distance_to_1d(Field{u.mesh, Eigen::VectorXd::Zero(u.values.size())},
                                  [&](double x) { return u0(x); });
  const FieldNorms n = norms(u, eps);
  row.dx2_over_eps = n.dx2_over_eps;
  row.l2 = n.l2;
  row.dx1 = n.dx1;
  row.iterations = info.iterations;
  return row;
}

std::string resolution_text(const StudyParams& p, bool comb) {
  std::ostringstream os;
  if (comb) os << "h=" << format_double(p.mesh.h);
  else os << "cells_per_period=" << p.mesh.cells_per_period << ",ny=" << p.mesh.ny;
  os << ",tol=" << format_double(p.solver.tol) << ",grid=" << p.grid_points;
  return os.str();
}

}  // namespace

Source Source::constant(double c) {
  return {[c](double, double) { return c; }, [c](double) { return c; }};
}

Source Source::of_x1(Function1D g) {
  return {[g](double x, double) { return g(x); }, g};
}

Source Source::general(Source2D f) { return {std::move(f), {}}; }

std::string describe(const ProfileSpec& spec) {
  std::ostringstream os;
  os << "graph;";
  describe_function(os, "b", spec.b_function());
  os << "waveform=" << to_string(spec.waveform().kind()) << ";phase=" << format_double(spec.waveform().phase()) << ';';
  if (spec.waveform().kind() == WaveKind::Tabulated) {
    const auto& t = spec.waveform().table();
    os << "samples=[";
    for (std::size_t i = 0; i < t.x.size(); ++i) os << format_double(t.x[i]) << ':' << format_double(t.v[i]) << ',';
    os << "];";
  }
  describe_function(os, "base", spec.base());
  describe_function(os, "amp", spec.amp());
  describe_function(os, "period", spec.period_map());
  os << "alpha=" << format_double(spec.alpha());
  return os.str();
}

std::string describe(const CombSpec& spec) {
  std::ostringstream os;
  os << "comb;";
  describe_function(os, "b", spec.b_function());
  os << "L=" << format_double(spec.cell_width()) << ";G_height=" << format_double(spec.cell_height())
     << ";cell=[";
  for (const Rect& r : spec.cell())
    os << '[' << format_double(r.x_lo) << ',' << format_double(r.x_hi) << ',' << format_double(r.y_lo)
       << ',' << format_double(r.y_hi) << ']';
  os << "];alpha=" << format_double(spec.alpha());
  return os.str();
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Limit1DSolution limit_solution(const ProfileSpec& spec, const Source& f, int grid_points, double fhat_eps) {
  return solve_limit_for(spec, coeffs_type1(spec, uniform_grid(grid_points)), f, fhat_eps);
}

Limit1DSolution limit_solution(const CombSpec& spec, const Source& f, int grid_points, double fhat_eps) {
  return solve_limit_for(spec, coeffs_type2(spec, uniform_grid(grid_points)), f, fhat_eps);
}

ConvergenceReport run_study_type1(const ProfileSpec& spec, const Source& f,
                                  const std::vector<double>& eps_list, const StudyParams& params) {
  check_ladder(eps_list);
  const Limit1DSolution u0 = limit_solution(spec, f, params.grid_points, eps_list.back());
  ConvergenceReport report;
  report.domain_type = "graph";
  report.spec_hash = fnv1a(describe(spec));
  report.resolution = resolution_text(params, false);
  report.rows = run_rows(eps_list, params.threads, [&](double eps) {
    const auto start = std::chrono::steady_clock::now();
    SolveInfo info;
    const Field u = solve_rescaled(spec, eps, f.f, params.mesh, params.solver, &info);
    ConvergenceRow row = measure(u, u0, eps, info);
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
  });
  return report;
}

ConvergenceReport run_study_type2(const CombSpec& spec, const Source& f,
                                  const std::vector<double>& eps_list, const StudyParams& params) {
  check_ladder(eps_list);
  const auto cell = std::make_shared<const Mesh>(mesh_cell(spec, params.mesh.h));
  const EigenResult hq = eigen_first(cell);
  if (!(hq.value > 1e-6))
    throw PreconditionError("experiments", "hypothesis HQ violated (e1(Q0) = " + format_double(hq.value) + ")");

  const Limit1DSolution u0 = limit_solution(spec, f, params.grid_points, eps_list.back());
  ConvergenceReport report;
  report.domain_type = "comb";
  report.spec_hash = fnv1a(describe(spec));
  report.resolution = resolution_text(params, true);
  report.rows = run_rows(eps_list, params.threads, [&](double eps) {
    const auto start = std::chrono::steady_clock::now();
    auto mesh = std::make_shared<const Mesh>(mesh_type2(spec, eps, params.mesh));
    const SparseSystem sys = assemble(*mesh, f.f, Anisotropy::rescaled(eps));
    SolveInfo info;
    const Field u = solve(sys, mesh, params.solver, &info);
    ConvergenceRow row = measure(u, u0, eps, info);
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
  });
  return report;
}

std::string emit_report(const ConvergenceReport& r, ReportFormat format, const std::string& csv_name) {
  if (r.rows.empty()) throw ConfigError("experiments", "cannot emit an empty report");
  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    os << "epsilon,dofs,triangles,l2_error,dx2_over_eps,iterations,wall_time\n";
    for (const auto& row : r.rows)
      os << format_double(row.eps) << ',' << row.dofs << ',' << row.triangles << ','
         << format_double(row.l2_error) << ',' << format_double(row.dx2_over_eps) << ','
         << row.iterations << ',' << format_double(row.wall_time) << '\n';
    return os.str();
  }
  os << "# domain: " << r.domain_type << ", spec hash " << std::hex << r.spec_hash << std::dec << '\n'
     << "# resolution: " << r.resolution << '\n'
     << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set xlabel 'epsilon'\n"
     << "set ylabel '||u_eps - u_0||'\n"
     << "set key top left\n"
     << "plot '" << csv_name << "' using 1:4 skip 1 with linespoints title 'L2 error', \\\n"
     << "     '" << csv_name << "' using 1:5 skip 1 with linespoints title 'dx2 / eps'\n";
  return os.str();
}

}  // namespace thinhom
