#include "thinhom/config.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace thinhom {

namespace {

using json = nlohmann::json;

struct Entry {
  std::string value;
  int line;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void syntax(int line, const std::string& what) {
  throw ConfigError("cli", "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void semantic(const std::string& key, const std::string& what) {
  throw ConfigError("cli", key + ": " + what);
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"domain", {"type", "waveform", "phase", "samples", "base", "amp", "period", "alpha", "b", "L",
                  "G_height", "cell"}},
      {"source", {"f", "f_x2"}},
      {"mesh", {"cells_per_period", "ny", "h", "triangle_cap"}},
      {"solver", {"tol", "max_iter"}},
      {"study", {"epsilons", "eps", "preset", "grid_points"}},
      {"cell", {"eps", "alpha", "modes", "trace", "y_samples", "epsilons"}},
      {"eigen", {"width", "height", "n", "gamma0"}},
      {"output", {"directory", "formats"}},
  };
  return keys;
}

class Reader {
 public:
  Reader(std::map<std::string, Section>& sections, std::vector<std::string>& defaults)
      : sections_(sections), defaults_(defaults) {}

  bool has(const std::string& sec, const std::string& key) const {
    const auto it = sections_.find(sec);
    return it != sections_.end() && it->second.contains(key);
  }

  const Entry& raw(const std::string& sec, const std::string& key) const {
    return sections_.at(sec).at(key);
  }

  json parse_json(const std::string& sec, const std::string& key, const std::string& text) const {
    try {
      return json::parse(text);
    } catch (const json::parse_error&) {
      syntax(raw(sec, key).line, "cannot parse value of '" + key + "': " + text);
    }
  }

  double number(const std::string& sec, const std::string& key, double fallback, bool required = false) {
    if (!has(sec, key)) {
      if (required) semantic(sec + "." + key, "required key is missing");
      defaults_.push_back(sec + "." + key + " = " + format_double(fallback));
      return fallback;
    }
    const json j = parse_json(sec, key, raw(sec, key).value);
    if (!j.is_number()) semantic(sec + "." + key, "must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) semantic(sec + "." + key, "must be finite");
    return v;
  }

  int integer(const std::string& sec, const std::string& key, int fallback) {
    const double v = number(sec, key, fallback);
    if (v != std::floor(v) || std::abs(v) > 2e9) semantic(sec + "." + key, "must be an integer");
    return static_cast<int>(v);
  }

  std::string word(const std::string& sec, const std::string& key, const std::string& fallback,
                   bool required = false) {
    if (!has(sec, key)) {
      if (required) semantic(sec + "." + key, "required key is missing");
      defaults_.push_back(sec + "." + key + " = " + fallback);
      return fallback;
    }
    std::string v = raw(sec, key).value;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return v;
  }

  std::vector<double> numbers(const std::string& sec, const std::string& key,
                              const std::vector<double>& fallback, bool required = false) {
    if (!has(sec, key)) {
      if (required) semantic(sec + "." + key, "required key is missing");
      std::string d;
      for (double v : fallback) d += (d.empty() ? "" : ", ") + format_double(v);
      defaults_.push_back(sec + "." + key + " = [" + d + "]");
      return fallback;
    }
    const json j = parse_json(sec, key, raw(sec, key).value);
    if (!j.is_array()) semantic(sec + "." + key, "must be a list of numbers");
    std::vector<double> out;
    for (const auto& e : j) {
      if (!e.is_number()) semantic(sec + "." + key, "must be a list of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::vector<double>> rows(const std::string& sec, const std::string& key,
                                        const std::string& text, std::size_t width) const {
    const json j = parse_json(sec, key, text);
    if (!j.is_array() || j.empty()) semantic(sec + "." + key, "must be a non-empty list of lists");
    std::vector<std::vector<double>> out;
    for (const auto& r : j) {
      if (!r.is_array() || r.size() != width)
        semantic(sec + "." + key, "every entry must hold " + std::to_string(width) + " numbers");
      std::vector<double> row;
      for (const auto& e : r) {
        if (!e.is_number()) semantic(sec + "." + key, "entries must be numbers");
        row.push_back(e.get<double>());
      }
      out.push_back(std::move(row));
    }
    return out;
  }

  ScalarFunction1D function(const std::string& sec, const std::string& key,
                            std::optional<double> fallback = std::nullopt) {
    if (!has(sec, key)) {
      if (!fallback) semantic(sec + "." + key, "required key is missing");
      defaults_.push_back(sec + "." + key + " = [" + format_double(*fallback) + "]");
      return ScalarFunction1D::constant(*fallback);
    }
    std::string text = trim(raw(sec, key).value);
    try {
      if (text.rfind("table", 0) == 0) {
        Table t;
        for (const auto& r : rows(sec, key, text.substr(5), 2)) {
          t.x.push_back(r[0]);
          t.v.push_back(r[1]);
        }
        return ScalarFunction1D(std::move(t));
      }
      if (text.rfind("poly", 0) == 0) text = text.substr(4);
      std::vector<double> c;
      const json j = parse_json(sec, key, text);
      if (!j.is_array() || j.empty()) semantic(sec + "." + key, "must be '[c0, ...]', 'poly [...]' or 'table [[x, v], ...]'");
      for (const auto& e : j) {
        if (!e.is_number()) semantic(sec + "." + key, "polynomial coefficients must be numbers");
        c.push_back(e.get<double>());
      }
      return ScalarFunction1D(Polynomial{std::move(c)});
    } catch (const ConfigError& e) {
      if (e.module() == "cli") throw;
      semantic(sec + "." + key, e.detail());
    }
  }

 private:
  std::map<std::string, Section>& sections_;
  std::vector<std::string>& defaults_;
};

unsigned parse_gamma0(const std::string& text) {
  if (text == "none") return kGammaNone;
  if (text == "all") return kGammaAll;
  unsigned mask = 0;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part == "bottom") mask |= kGammaBottom;
    else if (part == "top") mask |= kGammaTop;
    else if (part == "left") mask |= kGammaLeft;
    else if (part == "right") mask |= kGammaRight;
    else semantic("eigen.gamma0", "unknown edge '" + part + "' (use bottom, top, left, right, all, none)");
  }
  return mask;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) semantic(key, what);
}

}  // namespace

Source SourceConfig::source() const {
  const std::vector<double> p = f_x1;
  auto poly = [](const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  if (f_x2.empty()) return Source::of_x1([p, poly](double x) { return poly(p, x); });
  const std::vector<double> q = f_x2;
  return Source::general([p, q, poly](double x, double y) { return poly(p, x) + poly(q, y); });
}

std::pair<double, std::vector<double>> study_preset(const std::string& name) {
  if (name == "alpha1.25") return {1.25, {0.2, 0.1, 0.05}};
  if (name == "alpha1.5") return {1.5, {0.2, 0.1, 0.05}};
  if (name == "alpha2") return {2.0, {0.2, 0.1, 0.05}};
  semantic("study.preset", "unknown preset '" + name + "' (use alpha1.25, alpha1.5 or alpha2)");
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  {
    std::istringstream is(text);
    std::string line;
    std::string current;
    int n = 0;
    while (std::getline(is, line)) {
      ++n;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[' && t.find('=') == std::string::npos) {
        if (t.back() != ']') syntax(n, "unterminated section header");
        current = trim(t.substr(1, t.size() - 2));
        if (!allowed_keys().contains(current)) syntax(n, "unknown section '" + current + "'");
        if (sections.contains(current)) syntax(n, "duplicate section '" + current + "'");
        sections[current];
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) syntax(n, "expected 'key = value'");
      if (current.empty()) syntax(n, "key outside of any section");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) syntax(n, "missing key");
      if (value.empty()) syntax(n, "missing value for '" + key + "'");
      if (!allowed_keys().at(current).contains(key))
        syntax(n, "unknown key '" + key + "' in section [" + current + "]");
      if (sections[current].contains(key)) syntax(n, "duplicate key '" + key + "'");
      sections[current][key] = {value, n};
    }
  }

  RunConfig cfg;
  Reader rd(sections, cfg.defaults);

  // Study first: a preset may override the domain exponent.
  std::optional<double> preset_alpha;
  if (sections.contains("study") || true) {
    cfg.study.preset = rd.has("study", "preset") ? rd.word("study", "preset", "") : "";
    if (!cfg.study.preset.empty()) {
      auto [a, ladder] = study_preset(cfg.study.preset);
      preset_alpha = a;
      cfg.study.epsilons = ladder;
    }
    if (rd.has("study", "epsilons") || cfg.study.preset.empty())
      cfg.study.epsilons = rd.numbers("study", "epsilons", cfg.study.epsilons);
    cfg.study.eps = rd.number("study", "eps", cfg.study.eps);
    cfg.study.grid_points = rd.integer("study", "grid_points", cfg.study.grid_points);
    require(!cfg.study.epsilons.empty(), "study.epsilons", "must not be empty");
    for (std::size_t i = 0; i < cfg.study.epsilons.size(); ++i) {
      require(cfg.study.epsilons[i] > 0.0, "study.epsilons", "must be > 0");
      if (i > 0) require(cfg.study.epsilons[i] < cfg.study.epsilons[i - 1], "study.epsilons", "must be strictly decreasing");
    }
    require(cfg.study.eps > 0.0, "study.eps", "must be > 0");
    require(cfg.study.grid_points >= 3, "study.grid_points", "must be >= 3");
  }

  if (sections.contains("domain")) {
    const std::string type = rd.word("domain", "type", "", true);
    cfg.domain.type = type;
    double alpha = rd.number("domain", "alpha", 0.0, true);
    if (preset_alpha) alpha = *preset_alpha;
    require(alpha > 1.0, "domain.alpha", "alpha must be > 1");
    const ScalarFunction1D b = rd.function("domain", "b");
    auto reject = [&](std::initializer_list<const char*> keys) {
      for (const char* k : keys)
        if (rd.has("domain", k)) semantic(std::string("domain.") + k, "not valid for type = " + type);
    };
    try {
      if (type == "graph") {
        reject({"L", "G_height", "cell"});
        const std::string wname = rd.word("domain", "waveform", "sine");
        const double phase = rd.number("domain", "phase", 0.0);
        Waveform w;
        if (parse_wave_kind(wname) == WaveKind::Tabulated) {
          require(rd.has("domain", "samples"), "domain.samples", "required for a tabulated waveform");
          Table t;
          for (const auto& r : rd.rows("domain", "samples", rd.raw("domain", "samples").value, 2)) {
            t.x.push_back(r[0]);
            t.v.push_back(r[1]);
          }
          w = Waveform(std::move(t), phase);
        } else {
          reject({"samples"});
          w = Waveform(parse_wave_kind(wname), phase);
        }
        cfg.domain.profile.emplace(b, w, rd.function("domain", "base"), rd.function("domain", "amp"),
                                   rd.function("domain", "period"), alpha);
      } else if (type == "comb") {
        reject({"waveform", "phase", "samples", "base", "amp", "period"});
        const double L = rd.number("domain", "L", 0.0, true);
        const double gh = rd.number("domain", "G_height", 0.0, true);
        require(rd.has("domain", "cell"), "domain.cell", "required key is missing");
        std::vector<Rect> rects;
        for (const auto& r : rd.rows("domain", "cell", rd.raw("domain", "cell").value, 4))
          rects.push_back({r[0], r[1], r[2], r[3]});
        cfg.domain.comb.emplace(b, L, gh, std::move(rects), alpha);
      } else {
        semantic("domain.type", "must be 'graph' or 'comb'");
      }
    } catch (const ConfigError& e) {
      if (e.module() == "cli") throw;
      semantic("domain", e.detail());
    }
  }

  cfg.source.f_x1 = rd.numbers("source", "f", cfg.source.f_x1);
  require(!cfg.source.f_x1.empty(), "source.f", "must hold at least one coefficient");
  if (rd.has("source", "f_x2")) cfg.source.f_x2 = rd.numbers("source", "f_x2", {});

  cfg.mesh.cells_per_period = rd.integer("mesh", "cells_per_period", cfg.mesh.cells_per_period);
  cfg.mesh.ny = rd.integer("mesh", "ny", cfg.mesh.ny);
  cfg.mesh.h = rd.number("mesh", "h", cfg.mesh.h);
  cfg.mesh.triangle_cap = static_cast<long>(rd.number("mesh", "triangle_cap", static_cast<double>(cfg.mesh.triangle_cap)));
  require(cfg.mesh.cells_per_period >= 4, "mesh.cells_per_period", "must be >= 4");
  require(cfg.mesh.ny >= 1, "mesh.ny", "must be >= 1");
  require(cfg.mesh.h > 0.0, "mesh.h", "must be > 0");
  require(cfg.mesh.triangle_cap > 0, "mesh.triangle_cap", "must be > 0");

  cfg.solver.tol = rd.number("solver", "tol", cfg.solver.tol);
  cfg.solver.max_iter = rd.integer("solver", "max_iter", cfg.solver.max_iter);
  require(cfg.solver.tol > 0.0 && cfg.solver.tol < 1.0, "solver.tol", "must lie in (0, 1)");
  require(cfg.solver.max_iter >= 1, "solver.max_iter", "must be >= 1");

  cfg.cell.eps = rd.number("cell", "eps", cfg.cell.eps);
  cfg.cell.alpha = rd.number("cell", "alpha", cfg.cell.alpha);
  cfg.cell.modes = rd.integer("cell", "modes", cfg.cell.modes);
  cfg.cell.y_samples = rd.integer("cell", "y_samples", cfg.cell.y_samples);
  cfg.cell.epsilons = rd.numbers("cell", "epsilons", cfg.cell.epsilons);
  if (rd.has("cell", "trace")) {
    const std::string t = trim(rd.raw("cell", "trace").value);
    if (t == "cos") {
      cfg.cell.trace = "cos";
    } else {
      cfg.cell.trace = "poly";
      cfg.cell.trace_poly = rd.numbers("cell", "trace", {});
      require(!cfg.cell.trace_poly.empty(), "cell.trace", "must be 'cos' or a coefficient list");
    }
  } else {
    cfg.defaults.push_back("cell.trace = cos");
  }
  require(cfg.cell.eps > 0.0, "cell.eps", "must be > 0");
  require(cfg.cell.alpha > 1.0, "cell.alpha", "alpha must be > 1");
  require(cfg.cell.modes >= 1, "cell.modes", "must be >= 1");
  require(cfg.cell.y_samples >= 2, "cell.y_samples", "must be >= 2");
  for (double e : cfg.cell.epsilons) require(e > 0.0, "cell.epsilons", "must be > 0");

  cfg.eigen.width = rd.number("eigen", "width", cfg.eigen.width);
  cfg.eigen.height = rd.number("eigen", "height", cfg.eigen.height);
  cfg.eigen.n = rd.integer("eigen", "n", cfg.eigen.n);
  cfg.eigen.gamma0 = parse_gamma0(rd.word("eigen", "gamma0", "bottom"));
  require(cfg.eigen.width > 0.0, "eigen.width", "must be > 0");
  require(cfg.eigen.height > 0.0, "eigen.height", "must be > 0");
  require(cfg.eigen.n >= 1, "eigen.n", "must be >= 1");

  cfg.output.directory = rd.word("output", "directory", cfg.output.directory);
  if (rd.has("output", "formats")) {
    const json j = rd.parse_json("output", "formats", rd.raw("output", "formats").value);
    require(j.is_array(), "output.formats", "must be a list such as [\"csv\", \"gnuplot\"]");
    cfg.output.formats.clear();
    for (const auto& e : j) {
      require(e.is_string() && (e == "csv" || e == "gnuplot"), "output.formats",
              "entries must be \"csv\" or \"gnuplot\"");
      cfg.output.formats.push_back(e.get<std::string>());
    }
  } else {
    cfg.defaults.push_back("output.formats = [\"csv\"]");
  }
  return cfg;
}

}  // namespace thinhom
