#include "riceband/cli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "riceband/ensembles.hpp"
#include "riceband/kac_rice.hpp"
#include "riceband/monte_carlo.hpp"
#include "riceband/rng.hpp"
#include "riceband/sphere.hpp"
#include "riceband/zero_set.hpp"

namespace riceband::cli {

namespace {

// One result table; cells keep their JSON types so CSV and JSON renderings
// share a single deterministic formatting path.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  void add_row(std::vector<nlohmann::json> row) { rows.push_back(std::move(row)); }
};

std::string render_cell(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

std::string render(const Table& table, OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::Csv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) os << ',';
      os << table.columns[c];
    }
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) os << ',';
        os << render_cell(row[c]);
      }
      os << '\n';
    }
  } else {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = row[c];
      out.push_back(obj);
    }
    os << out.dump(2) << '\n';
  }
  return os.str();
}

bool all_rows_pass(const Table& table) {
  const auto it = std::find(table.columns.begin(), table.columns.end(), "pass");
  if (it == table.columns.end()) return true;
  const std::size_t c = static_cast<std::size_t>(it - table.columns.begin());
  for (const auto& row : table.rows) {
    if (!row[c].get<bool>()) return false;
  }
  return true;
}

// --- config parsing -------------------------------------------------------

void require_known_keys(const nlohmann::json& j, const std::vector<std::string>& known,
                        const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw ConfigError(path + "." + it.key() + ": unknown key");
    }
  }
}

std::optional<DomainBox> parse_domain(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "line") return std::nullopt;
    throw ConfigError("config.domain: expected \"line\" or {lower, upper}");
  }
  if (!j.is_object()) throw ConfigError("config.domain: expected \"line\" or {lower, upper}");
  require_known_keys(j, {"lower", "upper"}, "config.domain");
  if (!j.contains("lower") || !j.contains("upper")) {
    throw ConfigError("config.domain: missing lower/upper");
  }
  try {
    return DomainBox(j.at("lower").get<std::vector<double>>(),
                     j.at("upper").get<std::vector<double>>());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config.domain: ") + e.what());
  }
}

ScalarField builtin_shape(const std::string& name, int& dim, double& reference,
                          const DomainBox* box) {
  if (name == "circle") {
    dim = 2;
    reference = 2.0 * std::numbers::pi;
    return [](std::span<const double> x, std::span<double> grad) {
      const double r2 = x[0] * x[0] + x[1] * x[1];
      if (!grad.empty()) {
        grad[0] = 2.0 * x[0];
        grad[1] = 2.0 * x[1];
      }
      return r2 - 1.0;
    };
  }
  if (name == "sphere") {
    dim = 3;
    reference = 4.0 * std::numbers::pi;
    return [](std::span<const double> x, std::span<double> grad) {
      const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      if (!grad.empty()) {
        for (int i = 0; i < 3; ++i) grad[static_cast<std::size_t>(i)] = 2.0 * x[static_cast<std::size_t>(i)];
      }
      return r2 - 1.0;
    };
  }
  if (name == "plane-slice") {
    if (!box) throw ConfigError("config.domain: plane-slice needs a box domain");
    dim = box->dim();
    reference = 1.0;
    for (int i = 0; i + 1 < box->dim(); ++i) reference *= box->side(i);
    const std::size_t last = static_cast<std::size_t>(box->dim() - 1);
    const double mid = 0.5 * (box->lower(static_cast<int>(last)) + box->upper(static_cast<int>(last)));
    return [last, mid](std::span<const double> x, std::span<double> grad) {
      if (!grad.empty()) {
        std::fill(grad.begin(), grad.end(), 0.0);
        grad[last] = 1.0;
      }
      return x[last] - mid;
    };
  }
  if (name == "cone") {
    dim = 2;
    reference = 0.0;  // coarea-check computes its own reference
    return [](std::span<const double> x, std::span<double> grad) {
      const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
      if (!grad.empty()) {
        if (r > 1e-300) {
          grad[0] = x[0] / r;
          grad[1] = x[1] / r;
        } else {
          grad[0] = grad[1] = 0.0;
        }
      }
      return r;
    };
  }
  throw ConfigError("config.shape: unknown shape \"" + name + "\"");
}

// --- commands -------------------------------------------------------------

Ensemble ensemble_from_config(const ExperimentConfig& cfg) {
  if (cfg.ensemble.empty()) throw ConfigError("config.ensemble: required for this command");
  try {
    return ensemble_from_json(cfg.ensemble);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config.ensemble: ") + e.what());
  }
}

const DomainBox& require_domain(const ExperimentConfig& cfg) {
  if (!cfg.domain) throw ConfigError("config.domain: required for this command");
  return *cfg.domain;
}

Table run_expected_area(const ExperimentConfig& cfg) {
  const Ensemble ensemble = ensemble_from_config(cfg);
  QuadSizes quad;
  quad.nodes_per_axis = cfg.quad_nodes;
  double value = 0.0;
  if (!cfg.domain) {
    if (ensemble.kind == EnsembleKind::Kac) {
      value = kac_expected_roots(ensemble.degree);
    } else if (ensemble.kind == EnsembleKind::Kostlan && ensemble.dim == 1) {
      const SphereRule rule = build_sphere_rule(1, 2);
      value = kostlan_expected_area(ensemble.degree, 1, nullptr, rule, quad);
    } else {
      throw ConfigError("config.domain: whole-line evaluation only for kac/kostlan d=1");
    }
  } else {
    const SphereRule rule = build_sphere_rule(ensemble.dim, cfg.sphere_resolution, cfg.seed);
    value = theory_expected_area(ensemble, *cfg.domain, rule, quad);
  }
  Table t;
  t.columns = {"kind", "d", "n", "value"};
  t.add_row({ensemble_kind_name(ensemble.kind), ensemble.dim, ensemble.degree, value});
  return t;
}

Table run_mc_verify(const ExperimentConfig& cfg) {
  const Ensemble ensemble = ensemble_from_config(cfg);
  const DomainBox& box = require_domain(cfg);
  QuadSizes quad;
  quad.nodes_per_axis = cfg.quad_nodes;
  const SphereRule rule = build_sphere_rule(ensemble.dim, cfg.sphere_resolution, cfg.seed);
  const double theory = theory_expected_area(ensemble, box, rule, quad);

  McConfig mc;
  mc.replicates = cfg.replicates;
  mc.base_seed = cfg.seed;
  mc.grid = cfg.grid.empty() ? GridSpec(ensemble.dim, ensemble.dim == 1 ? 4096 : 201)
                             : GridSpec(cfg.grid);
  const Estimate est = mc_expected_area(ensemble, box, mc);
  const ComparisonReport report = compare(theory, est);

  Table t;
  t.columns = {"kind", "d", "n", "theory", "mc", "stderr", "replicates", "z", "pass"};
  t.add_row({ensemble_kind_name(ensemble.kind), ensemble.dim, ensemble.degree, report.theory,
             report.mc.value, report.mc.stderr_value, report.mc.replicates, report.z_score,
             report.pass});
  return t;
}

Table run_coarea_check(const ExperimentConfig& cfg) {
  const DomainBox& box = require_domain(cfg);
  const std::string shape = cfg.shape.empty() ? "cone" : cfg.shape;
  int dim = 0;
  double reference = 0.0;
  const ScalarField g = builtin_shape(shape, dim, reference, &box);
  if (dim != box.dim()) throw ConfigError("config.domain: dimension does not match shape");

  CoareaParams params;
  params.sample_grid = cfg.grid.empty() ? GridSpec(dim, 64) : GridSpec(cfg.grid);
  params.sphere_resolution = cfg.sphere_resolution;
  params.lines_per_direction = cfg.lines_per_direction;
  params.samples_per_line = cfg.samples_per_line;
  QuadSizes quad;
  quad.nodes_per_axis = cfg.quad_nodes;
  const auto [lhs, rhs] = coarea_check(g, box, params, quad);
  const double gap = std::abs(lhs - rhs) / std::abs(rhs);

  Table t;
  t.columns = {"shape", "lhs", "rhs", "rel_gap", "pass"};
  t.add_row({shape, lhs, rhs, gap, gap <= 0.02});
  return t;
}

Table run_kac_asymptotic(const ExperimentConfig& cfg) {
  std::vector<int> sweep = cfg.n_values;
  if (sweep.empty()) sweep = {100, 1000, 10000};

  std::vector<double> logs, roots;
  for (int n : sweep) {
    if (n < 2) throw ConfigError("config.n_values: need n >= 2");
    logs.push_back(std::log(static_cast<double>(n)));
    roots.push_back(kac_expected_roots(n));
  }
  // least-squares slope of E(n) against log n
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    mx += logs[i];
    my += roots[i];
  }
  mx /= static_cast<double>(logs.size());
  my /= static_cast<double>(logs.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    sxx += (logs[i] - mx) * (logs[i] - mx);
    sxy += (logs[i] - mx) * (roots[i] - my);
  }
  const double slope = logs.size() > 1 ? sxy / sxx : 0.0;

  Table t;
  t.columns = {"n", "roots", "asymptote", "ratio", "slope", "pass"};
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const double asym = 2.0 / std::numbers::pi * logs[i];
    const double ratio = roots[i] / asym;
    t.add_row({sweep[i], roots[i], asym, ratio, slope, ratio >= 1.0 && ratio <= 1.2});
  }
  return t;
}

Table run_favard_measure(const ExperimentConfig& cfg) {
  if (cfg.shape.empty()) throw ConfigError("config.shape: required for favard-measure");
  int dim = 0;
  double reference = 0.0;
  const DomainBox* box_ptr = cfg.domain ? &*cfg.domain : nullptr;
  const ScalarField g = builtin_shape(cfg.shape, dim, reference, box_ptr);
  const DomainBox& box = require_domain(cfg);
  if (dim != box.dim()) throw ConfigError("config.domain: dimension does not match shape");

  const SphereRule rule = build_sphere_rule(dim, cfg.sphere_resolution, cfg.seed);
  const double area = favard_area(g, box, rule, cfg.lines_per_direction, cfg.samples_per_line);
  const double rel = std::abs(area - reference) / reference;
  const double tol = cfg.shape == "circle" ? 0.01 : 0.02;

  Table t;
  t.columns = {"shape", "area", "reference", "rel_error", "pass"};
  t.add_row({cfg.shape, area, reference, rel, rel <= tol});
  return t;
}

Table run_identities(const ExperimentConfig& cfg) {
  const int d = cfg.dim;
  if (d < 1) throw ConfigError("config.d: need d >= 1");
  const SphereRule rule = build_sphere_rule(d, cfg.sphere_resolution, cfg.seed);
  GaussianStream stream(mix_seed(cfg.seed, 0x1de17));

  Table t;
  t.columns = {"test", "value", "lower", "upper", "pass"};

  {
    const double omega = sphere_area(d);
    const double total = integrate_sphere(rule, [](std::span<const double>) { return 1.0; });
    const bool ok = std::abs(total - omega) <= rule.tol * std::max(1.0, omega);
    t.add_row({"normalization", total, omega, omega, ok});
  }

  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (double& xi : x) xi = stream.normal();
    const double exact = abs_inner_integral_exact(x);
    const double num = integrate_sphere(rule, [&](std::span<const double> s) {
      double ip = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) ip += x[i] * s[i];
      return std::abs(ip);
    });
    const bool ok = std::abs(num - exact) <= rule.tol * std::max(1.0, exact);
    t.add_row({"abs-inner-" + std::to_string(rep), num, exact, exact, ok});
  }

  {
    // random PSD covariance, closed form vs 1e5 sampled norms
    std::vector<double> a(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    for (double& v : a) v = stream.normal();
    std::vector<double> sigma(a.size(), 0.0);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
          s += a[static_cast<std::size_t>(i * d + k)] * a[static_cast<std::size_t>(j * d + k)];
        }
        sigma[static_cast<std::size_t>(i * d + j)] = s;
      }
    }
    const double closed = expected_norm_gaussian(sigma, rule);
    const int draws = 100000;
    std::vector<double> norms(static_cast<std::size_t>(draws));
    std::vector<double> z(static_cast<std::size_t>(d));
    for (auto& nv : norms) {
      for (double& zi : z) zi = stream.normal();
      double q = 0.0;
      for (int i = 0; i < d; ++i) {
        double xi = 0.0;
        for (int k = 0; k < d; ++k) xi += a[static_cast<std::size_t>(i * d + k)] * z[static_cast<std::size_t>(k)];
        q += xi * xi;
      }
      nv = std::sqrt(q);
    }
    const Estimate est = Estimate::from_samples(norms);
    const double lo = est.value - 3.0 * est.stderr_value;
    const double hi = est.value + 3.0 * est.stderr_value;
    t.add_row({"gaussian-norm", closed, lo, hi, closed >= lo && closed <= hi});
  }

  const DomainBox unit_box(std::vector<double>(static_cast<std::size_t>(d), 0.0),
                           std::vector<double>(static_cast<std::size_t>(d), 1.0));
  for (int rep = 0; rep < cfg.n_measures; ++rep) {
    SpectralMeasure nu;
    nu.dim = d;
    const int pairs = 1 + static_cast<int>(stream.uniform() * 3.0);
    std::vector<double> weights;
    for (int p = 0; p < pairs; ++p) {
      std::vector<double> zv(static_cast<std::size_t>(d));
      for (double& c : zv) c = 4.0 * stream.uniform() - 2.0;
      const double w = 0.1 + stream.uniform();
      nu.atom_points.insert(nu.atom_points.end(), zv.begin(), zv.end());
      for (double& c : zv) c = -c;
      nu.atom_points.insert(nu.atom_points.end(), zv.begin(), zv.end());
      weights.push_back(0.5 * w);
      weights.push_back(0.5 * w);
    }
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
    nu.atom_weights = std::move(weights);

    const double u = 2.0 * stream.uniform();
    const double value = homogeneous_expected_area(nu, u, unit_box, rule);
    auto [lo, hi] = gamma_bounds(nu, u, unit_box);
    // single-pair measures meet the lower bound exactly, so the check must
    // absorb the sphere rule's quadrature error
    const double slack = 2.0 * rule.tol * std::max(1.0, hi);
    t.add_row({"gamma-sandwich-" + std::to_string(rep), value, lo, hi,
               value >= lo - slack && value <= hi + slack});
  }
  return t;
}

}  // namespace

Command command_from_name(const std::string& name) {
  if (name == "expected-area") return Command::ExpectedArea;
  if (name == "mc-verify") return Command::McVerify;
  if (name == "coarea-check") return Command::CoareaCheck;
  if (name == "kac-asymptotic") return Command::KacAsymptotic;
  if (name == "favard-measure") return Command::FavardMeasure;
  if (name == "identities") return Command::Identities;
  throw ConfigError("config.command: unknown command \"" + name + "\"");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::ExpectedArea: return "expected-area";
    case Command::McVerify: return "mc-verify";
    case Command::CoareaCheck: return "coarea-check";
    case Command::KacAsymptotic: return "kac-asymptotic";
    case Command::FavardMeasure: return "favard-measure";
    case Command::Identities: return "identities";
  }
  return "?";
}

ExperimentConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  require_known_keys(j,
                     {"command", "ensemble", "domain", "R", "grid", "replicates",
                      "sphere_resolution", "lines_per_direction", "samples_per_line",
                      "quad_nodes", "seed", "shape", "n_values", "d", "n_measures"},
                     "config");
  if (!j.contains("command")) throw ConfigError("config.command: missing");

  ExperimentConfig cfg;
  try {
    cfg.command = command_from_name(j.at("command").get<std::string>());
    if (j.contains("ensemble")) cfg.ensemble = j.at("ensemble");
    if (j.contains("domain")) cfg.domain = parse_domain(j.at("domain"));
    if (j.contains("R")) cfg.truncation = j.at("R").get<double>();
    if (j.contains("grid")) cfg.grid = j.at("grid").get<std::vector<int>>();
    if (j.contains("replicates")) cfg.replicates = j.at("replicates").get<int>();
    if (j.contains("sphere_resolution")) cfg.sphere_resolution = j.at("sphere_resolution").get<int>();
    if (j.contains("lines_per_direction")) cfg.lines_per_direction = j.at("lines_per_direction").get<int>();
    if (j.contains("samples_per_line")) cfg.samples_per_line = j.at("samples_per_line").get<int>();
    if (j.contains("quad_nodes")) cfg.quad_nodes = j.at("quad_nodes").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("shape")) cfg.shape = j.at("shape").get<std::string>();
    if (j.contains("n_values")) cfg.n_values = j.at("n_values").get<std::vector<int>>();
    if (j.contains("d")) cfg.dim = j.at("d").get<int>();
    if (j.contains("n_measures")) cfg.n_measures = j.at("n_measures").get<int>();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (cfg.replicates < 1) throw ConfigError("config.replicates: must be >= 1");
  if (cfg.sphere_resolution < 1) throw ConfigError("config.sphere_resolution: must be >= 1");
  if (cfg.quad_nodes < 1) throw ConfigError("config.quad_nodes: must be >= 1");
  if (!(cfg.truncation > 0.0)) throw ConfigError("config.R: must be > 0");
  for (int g : cfg.grid) {
    if (g < 2) throw ConfigError("config.grid: entries must be >= 2");
  }
  return cfg;
}

RunResult run(const ExperimentConfig& config, OutputFormat format) {
  Table table;
  try {
    switch (config.command) {
      case Command::ExpectedArea: table = run_expected_area(config); break;
      case Command::McVerify: table = run_mc_verify(config); break;
      case Command::CoareaCheck: table = run_coarea_check(config); break;
      case Command::KacAsymptotic: table = run_kac_asymptotic(config); break;
      case Command::FavardMeasure: table = run_favard_measure(config); break;
      case Command::Identities: table = run_identities(config); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    return {1, std::string("error: ") + e.what() + "\n"};
  }
  RunResult result;
  result.output = render(table, format);
  result.exit_code = all_rows_pass(table) ? 0 : 1;
  return result;
}

}  // namespace riceband::cli
