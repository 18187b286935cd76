#include "riceband/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "riceband/box_quadrature.hpp"
#include "riceband/linalg.hpp"
#include "riceband/quadrature.hpp"
#include "riceband/rng.hpp"

namespace riceband {

namespace {

// Multi-indices over {0..degree}^dim (product) or with |alpha| <= degree
// (simplex), enumerated ascending with the last axis fastest.
std::vector<std::vector<int>> enumerate_indices(int dim, int degree, bool simplex) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(static_cast<std::size_t>(dim), 0);
  while (true) {
    int total = 0;
    for (int a : alpha) total += a;
    if (!simplex || total <= degree) out.push_back(alpha);
    int i = dim - 1;
    for (; i >= 0; --i) {
      if (++alpha[static_cast<std::size_t>(i)] <= degree) break;
      alpha[static_cast<std::size_t>(i)] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

double multinomial(int n, const std::vector<int>& alpha) {
  int rest = n;
  double result = 1.0;
  // n! / (alpha_1! ... alpha_d! (n - |alpha|)!) as a product of binomials
  for (int a : alpha) {
    for (int k = 1; k <= a; ++k) {
      result *= static_cast<double>(rest - a + k) / static_cast<double>(k);
    }
    rest -= a;
  }
  return result;
}

}  // namespace

LinearFieldModel LinearFieldModel::monomial_product(int dim, int degree) {
  if (dim < 1 || degree < 1) throw std::invalid_argument("monomial_product: need d, n >= 1");
  LinearFieldModel m;
  m.kind_ = BasisKind::MonomialProduct;
  m.dim_ = dim;
  m.degree_ = degree;
  m.multi_indices_ = enumerate_indices(dim, degree, false);
  m.basis_size_ = static_cast<int>(m.multi_indices_.size());
  return m;
}

LinearFieldModel LinearFieldModel::kostlan(int dim, int degree) {
  if (dim < 1 || degree < 1) throw std::invalid_argument("kostlan: need d, n >= 1");
  LinearFieldModel m;
  m.kind_ = BasisKind::Kostlan;
  m.dim_ = dim;
  m.degree_ = degree;
  m.multi_indices_ = enumerate_indices(dim, degree, true);
  m.basis_size_ = static_cast<int>(m.multi_indices_.size());
  m.lambda_diag_.reserve(m.multi_indices_.size());
  for (const auto& alpha : m.multi_indices_) m.lambda_diag_.push_back(multinomial(degree, alpha));
  return m;
}

LinearFieldModel LinearFieldModel::trigonometric(int dim, int degree) {
  if (dim < 1 || degree < 1) throw std::invalid_argument("trigonometric: need d, n >= 1");
  LinearFieldModel m;
  m.kind_ = BasisKind::Trigonometric;
  m.dim_ = dim;
  m.degree_ = degree;
  m.multi_indices_ = enumerate_indices(dim, degree, false);
  m.basis_size_ = 2 * static_cast<int>(m.multi_indices_.size());
  return m;
}

LinearFieldModel LinearFieldModel::custom(int dim, int basis_size, BasisFn basis) {
  LinearFieldModel m;
  m.kind_ = BasisKind::Custom;
  m.dim_ = dim;
  m.basis_size_ = basis_size;
  m.custom_basis_ = std::move(basis);
  return m;
}

void LinearFieldModel::set_lambda_diag(std::vector<double> diag) {
  if (!diag.empty() && static_cast<int>(diag.size()) != basis_size_) {
    throw std::invalid_argument("set_lambda_diag: size must match basis");
  }
  for (double v : diag) {
    if (!(v >= 0.0)) throw std::invalid_argument("set_lambda_diag: variances must be >= 0");
  }
  lambda_diag_ = std::move(diag);
}

void LinearFieldModel::eval_basis(std::span<const double> x, std::span<double> h,
                                  std::span<double> dh) const {
  const std::size_t d = static_cast<std::size_t>(dim_);
  if (x.size() != d || h.size() != static_cast<std::size_t>(basis_size_)) {
    throw std::invalid_argument("eval_basis: bad buffer sizes");
  }
  const bool want_dh = !dh.empty();
  if (want_dh && dh.size() != static_cast<std::size_t>(basis_size_) * d) {
    throw std::invalid_argument("eval_basis: gradient buffer must be N*d");
  }

  if (kind_ == BasisKind::Custom) {
    custom_basis_(x, h, dh);
    return;
  }

  if (kind_ == BasisKind::Trigonometric) {
    for (std::size_t a = 0; a < multi_indices_.size(); ++a) {
      const auto& alpha = multi_indices_[a];
      double phase = 0.0;
      for (std::size_t i = 0; i < d; ++i) phase += alpha[i] * x[i];
      const double c = std::cos(phase), s = std::sin(phase);
      h[2 * a] = c;
      h[2 * a + 1] = s;
      if (want_dh) {
        for (std::size_t i = 0; i < d; ++i) {
          dh[(2 * a) * d + i] = -alpha[i] * s;
          dh[(2 * a + 1) * d + i] = alpha[i] * c;
        }
      }
    }
    return;
  }

  // monomial bases: per-axis power tables
  const std::size_t np = static_cast<std::size_t>(degree_) + 1;
  std::vector<double> pw(d * np);
  for (std::size_t i = 0; i < d; ++i) {
    pw[i * np] = 1.0;
    for (std::size_t k = 1; k < np; ++k) pw[i * np + k] = pw[i * np + k - 1] * x[i];
  }
  for (std::size_t a = 0; a < multi_indices_.size(); ++a) {
    const auto& alpha = multi_indices_[a];
    double prod = 1.0;
    for (std::size_t i = 0; i < d; ++i) prod *= pw[i * np + static_cast<std::size_t>(alpha[i])];
    h[a] = prod;
    if (want_dh) {
      for (std::size_t i = 0; i < d; ++i) {
        if (alpha[i] == 0) {
          dh[a * d + i] = 0.0;
          continue;
        }
        double dp = alpha[i] * pw[i * np + static_cast<std::size_t>(alpha[i] - 1)];
        for (std::size_t j = 0; j < d; ++j) {
          if (j != i) dp *= pw[j * np + static_cast<std::size_t>(alpha[j])];
        }
        dh[a * d + i] = dp;
      }
    }
  }
}

double SpectralMeasure::total_weight() const {
  double s = 0.0;
  for (double w : atom_weights) s += w;
  return s;
}

bool SpectralMeasure::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_atoms(); ++i) {
    const std::span<const double> zi = atom(i);
    bool found = false;
    for (std::size_t j = 0; j < n_atoms() && !found; ++j) {
      if (std::abs(atom_weights[i] - atom_weights[j]) > tol) continue;
      bool mirror = true;
      for (int c = 0; c < dim && mirror; ++c) {
        if (std::abs(atom(j)[static_cast<std::size_t>(c)] + zi[static_cast<std::size_t>(c)]) > tol) mirror = false;
      }
      found = mirror;
    }
    if (!found) return false;
  }
  return true;
}

bool SpectralMeasure::is_unit_variance(double tol) const {
  return std::abs(total_weight() - 1.0) <= tol;
}

double SpectralMeasure::gamma(int k) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_atoms(); ++i) {
    s += atom_weights[i] * std::pow(norm(atom(i)), static_cast<double>(k));
  }
  return std::pow(s, 1.0 / k);
}

MomentField moment_field_linear(const LinearFieldModel& model) {
  const int d = model.dim();
  const std::size_t n = static_cast<std::size_t>(model.basis_size());

  // A diagonal coefficient covariance is folded into the basis up front:
  // G = <h, xi> with Var xi_k = lambda_k is the identity-covariance field of
  // sqrt(lambda_k) h_k.
  std::vector<double> scale(n, 1.0);
  if (!model.lambda_diag().empty()) {
    for (std::size_t k = 0; k < n; ++k) scale[k] = std::sqrt(model.lambda_diag()[k]);
  }

  auto eval_scaled = [model, scale, d, n](std::span<const double> x, std::vector<double>& h,
                                          std::vector<double>& dh, bool want_dh) {
    h.resize(n);
    dh.resize(want_dh ? n * static_cast<std::size_t>(d) : 0);
    model.eval_basis(x, h, dh);
    for (std::size_t k = 0; k < n; ++k) {
      h[k] *= scale[k];
      if (want_dh) {
        for (int i = 0; i < d; ++i) dh[k * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)] *= scale[k];
      }
    }
  };

  MomentField field;
  field.dim = d;
  field.mean = [](std::span<const double>) { return 0.0; };
  field.sigma = [eval_scaled](std::span<const double> x) {
    std::vector<double> h, dh;
    eval_scaled(x, h, dh, false);
    return norm(h);
  };
  field.sigma_matrix = [eval_scaled, d, n](std::span<const double> x, std::span<double> out) {
    std::vector<double> h, dh;
    eval_scaled(x, h, dh, true);
    const double h2 = dot(h, h);
    if (!(h2 > 0.0)) throw std::invalid_argument("moment_field_linear: degenerate basis, ||h(x)|| = 0");
    std::vector<double> hdh(static_cast<std::size_t>(d));  // <h, h_i'>
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += h[k] * dh[k * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)];
      hdh[static_cast<std::size_t>(i)] = s;
    }
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        double dd = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          dd += dh[k * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)] *
                dh[k * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
        }
        const double v = (h2 * dd - hdh[static_cast<std::size_t>(i)] * hdh[static_cast<std::size_t>(j)]) / (h2 * h2);
        out[static_cast<std::size_t>(i * d + j)] = v;
        out[static_cast<std::size_t>(j * d + i)] = v;
      }
    }
  };
  return field;
}

void kac_abc(double t, int n, double& a, double& b, double& c) {
  // direct sums, stable for |t| <= 1
  a = 1.0;
  b = 0.0;
  c = 0.0;
  const double t2 = t * t;
  double q = 1.0;  // t^{2j-2}
  for (int j = 1; j <= n; ++j) {
    a += q * t2;
    b += j * q * t;
    c += static_cast<double>(j) * j * q;
    q *= t2;
  }
}

double kac_delta(double t, int n) {
  if (std::abs(t) > 1.0) return kac_delta(1.0 / t, n) / (t * t * t * t);
  double a, b, c;
  kac_abc(t, n, a, b, c);
  return std::max(0.0, (a * c - b * b) / (a * a));
}

double kac_density(double t, int n) {
  if (n < 1) throw std::invalid_argument("kac_density: need n >= 1");
  return std::sqrt(kac_delta(t, n)) / std::numbers::pi;
}

double kac_expected_roots(int n, std::optional<std::pair<double, double>> interval, double tol) {
  if (n < 1) throw std::invalid_argument("kac_expected_roots: need n >= 1");
  auto density = [n](double t) { return kac_density(t, n); };
  if (!interval) {
    // |t| > 1 folds onto (0, 1) by the t -> 1/t symmetry of the density
    return 4.0 * integrate_adaptive(density, 0.0, 1.0, tol);
  }
  const auto [a, b] = *interval;
  if (!(a < b)) throw std::invalid_argument("kac_expected_roots: need a < b");
  return integrate_adaptive(density, a, b, tol);
}

double algebraic_surface_integrand(std::span<const double> x, std::span<const double> s, int n) {
  double q = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) q += s[i] * s[i] * kac_delta(x[i], n);
  return std::sqrt(q);
}

double kostlan_expected_area(int n, int d, const DomainBox* box, const SphereRule& rule,
                             const QuadSizes& quad) {
  if (n < 1 || d < 1) throw std::invalid_argument("kostlan_expected_area: need n, d >= 1");
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  if (box == nullptr) {
    // whole line, d = 1: x = tan(theta) turns dx/(pi (1+x^2)) into dtheta/pi,
    // a constant over an interval of length pi, so the integral is exactly 1
    if (d != 1) throw std::invalid_argument("kostlan_expected_area: whole line only for d = 1");
    return sqrt_n;
  }

  if (box->dim() != d || rule.dim != d) {
    throw std::invalid_argument("kostlan_expected_area: dimension mismatch");
  }
  const BoxRule xrule = box_rule(*box, quad.nodes_per_axis);
  std::vector<double> terms(xrule.size());
  for (std::size_t p = 0; p < xrule.size(); ++p) {
    const std::span<const double> x = xrule.node(p);
    const double x2 = dot(x, x);
    double sphere_int = 0.0;
    for (std::size_t si = 0; si < rule.size(); ++si) {
      const double xs = dot(x, rule.node(si));
      sphere_int += rule.weights[si] * std::sqrt(std::max(0.0, 1.0 + x2 - xs * xs));
    }
    terms[p] = xrule.weights[p] * sphere_int / (1.0 + x2);
  }
  const double c = std::tgamma(0.5 * (d + 1)) / (2.0 * std::pow(std::numbers::pi, 0.5 * (d + 1)));
  return sqrt_n * c * pairwise_sum(terms);
}

double trig_expected_area(int n, int d, const DomainBox& box, const SphereRule& rule) {
  if (n < 1 || d < 1) throw std::invalid_argument("trig_expected_area: need n, d >= 1");
  if (box.dim() != d || rule.dim != d) {
    throw std::invalid_argument("trig_expected_area: dimension mismatch");
  }
  const double shift = static_cast<double>(n + 2) / (3.0 * n);
  const double sphere_int = integrate_sphere(rule, [&](std::span<const double> s) {
    double sum = 0.0;
    for (double si : s) sum += si;
    return std::sqrt(sum * sum + shift);
  });
  const double c = std::tgamma(0.5 * (d + 1)) / (4.0 * std::pow(std::numbers::pi, 0.5 * (d + 1)));
  return n * c * box.volume() * sphere_int;
}

double homogeneous_expected_area(const SpectralMeasure& nu, double u, const DomainBox& box,
                                 const SphereRule& rule) {
  const int d = box.dim();
  if (nu.dim != d || rule.dim != d) {
    throw std::invalid_argument("homogeneous_expected_area: dimension mismatch");
  }
  if (!nu.is_unit_variance(1e-10)) {
    throw std::invalid_argument("homogeneous_expected_area: spectral measure must have unit mass");
  }
  if (!nu.is_symmetric(1e-10)) {
    throw std::invalid_argument("homogeneous_expected_area: spectral measure must be symmetric");
  }
  const double sphere_int = integrate_sphere(rule, [&](std::span<const double> s) {
    double q = 0.0;
    for (std::size_t i = 0; i < nu.n_atoms(); ++i) {
      const double sz = dot(s, nu.atom(i));
      q += nu.atom_weights[i] * sz * sz;
    }
    return std::sqrt(q);
  });
  const double c = std::tgamma(0.5 * (d + 1)) / (2.0 * std::pow(std::numbers::pi, 0.5 * (d + 1)));
  return c * box.volume() * std::exp(-0.5 * u * u) * sphere_int;
}

std::pair<double, double> gamma_bounds(const SpectralMeasure& nu, double u, const DomainBox& box) {
  const int d = box.dim();
  if (nu.dim != d) throw std::invalid_argument("gamma_bounds: dimension mismatch");
  if (!nu.is_unit_variance(1e-10) || !nu.is_symmetric(1e-10)) {
    throw std::invalid_argument("gamma_bounds: need a symmetric unit-mass spectral measure");
  }
  const double damping = std::exp(-0.5 * u * u) * box.volume();
  const double lower = nu.gamma(1) * damping / std::numbers::pi;
  const double upper = std::tgamma(0.5 * (d + 1)) /
                       (std::sqrt(std::numbers::pi) * std::tgamma(0.5 * d)) *
                       nu.gamma(2) * damping;
  return {lower, upper};
}

// ---------------------------------------------------------------------------

namespace {

// Canonical pair decomposition of a symmetric atomic measure: one entry per
// {z, -z} pair (z != 0, listed once) plus any atom at the origin.
struct SpectralPairs {
  std::vector<std::size_t> pair_rep;  // index of the representative atom
  std::vector<std::size_t> origin;    // atoms at z = 0
};

SpectralPairs decompose_pairs(const SpectralMeasure& nu) {
  SpectralPairs pairs;
  std::vector<bool> used(nu.n_atoms(), false);
  for (std::size_t i = 0; i < nu.n_atoms(); ++i) {
    if (used[i]) continue;
    const std::span<const double> zi = nu.atom(i);
    if (norm(zi) < 1e-14) {
      pairs.origin.push_back(i);
      used[i] = true;
      continue;
    }
    bool matched = false;
    for (std::size_t j = i + 1; j < nu.n_atoms() && !matched; ++j) {
      if (used[j] || std::abs(nu.atom_weights[i] - nu.atom_weights[j]) > 1e-12) continue;
      bool mirror = true;
      for (int c = 0; c < nu.dim && mirror; ++c) {
        if (std::abs(nu.atom(j)[static_cast<std::size_t>(c)] + zi[static_cast<std::size_t>(c)]) > 1e-12) mirror = false;
      }
      if (mirror) {
        pairs.pair_rep.push_back(i);
        used[i] = used[j] = true;
        matched = true;
      }
    }
    if (!matched) throw std::invalid_argument("spectral measure: atom without a mirror partner");
  }
  return pairs;
}

const LinearFieldModel& require_model(const Ensemble& e) {
  if (!e.model) throw std::invalid_argument("ensemble: missing linear model");
  return *e.model;
}

const SpectralMeasure& require_measure(const Ensemble& e) {
  if (!e.measure) throw std::invalid_argument("ensemble: missing spectral measure");
  return *e.measure;
}

}  // namespace

int Ensemble::n_coefficients() const {
  if (kind == EnsembleKind::Spectral) {
    const SpectralPairs pairs = decompose_pairs(*measure);
    return static_cast<int>(2 * pairs.pair_rep.size() + pairs.origin.size());
  }
  return model->basis_size();
}

Ensemble make_ensemble(EnsembleKind kind, int dim, int degree) {
  Ensemble e;
  e.kind = kind;
  e.dim = dim;
  e.degree = degree;
  switch (kind) {
    case EnsembleKind::Kac:
      if (dim != 1) throw std::invalid_argument("kac ensemble: d must be 1");
      e.model = LinearFieldModel::monomial_product(1, degree);
      break;
    case EnsembleKind::MonomialProduct:
      e.model = LinearFieldModel::monomial_product(dim, degree);
      break;
    case EnsembleKind::Kostlan:
      e.model = LinearFieldModel::kostlan(dim, degree);
      break;
    case EnsembleKind::Trigonometric:
      e.model = LinearFieldModel::trigonometric(dim, degree);
      break;
    case EnsembleKind::Spectral:
      throw std::invalid_argument("make_ensemble: use make_spectral_ensemble");
  }
  return e;
}

Ensemble make_spectral_ensemble(SpectralMeasure measure, double level) {
  if (!measure.is_symmetric(1e-10)) {
    throw std::invalid_argument("make_spectral_ensemble: measure must be symmetric");
  }
  if (!measure.is_unit_variance(1e-10)) {
    throw std::invalid_argument("make_spectral_ensemble: measure must have unit mass");
  }
  Ensemble e;
  e.kind = EnsembleKind::Spectral;
  e.dim = measure.dim;
  e.degree = 0;
  e.level = level;
  e.measure = std::move(measure);
  return e;
}

std::string ensemble_kind_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::Kac: return "kac";
    case EnsembleKind::MonomialProduct: return "monomial-product";
    case EnsembleKind::Kostlan: return "kostlan";
    case EnsembleKind::Trigonometric: return "trigonometric";
    case EnsembleKind::Spectral: return "spectral";
  }
  return "?";
}

EnsembleKind ensemble_kind_from_name(const std::string& name) {
  if (name == "kac") return EnsembleKind::Kac;
  if (name == "monomial-product") return EnsembleKind::MonomialProduct;
  if (name == "kostlan") return EnsembleKind::Kostlan;
  if (name == "trigonometric") return EnsembleKind::Trigonometric;
  if (name == "spectral") return EnsembleKind::Spectral;
  throw std::invalid_argument("unknown ensemble kind: " + name);
}

nlohmann::json ensemble_to_json(const Ensemble& ensemble) {
  nlohmann::json j;
  j["kind"] = ensemble_kind_name(ensemble.kind);
  j["d"] = ensemble.dim;
  if (ensemble.kind == EnsembleKind::Spectral) {
    const SpectralMeasure& nu = *ensemble.measure;
    nlohmann::json atoms = nlohmann::json::array();
    for (std::size_t i = 0; i < nu.n_atoms(); ++i) {
      nlohmann::json a;
      a["z"] = std::vector<double>(nu.atom(i).begin(), nu.atom(i).end());
      a["w"] = nu.atom_weights[i];
      atoms.push_back(a);
    }
    j["atoms"] = atoms;
    j["level"] = ensemble.level;
  } else {
    j["n"] = ensemble.degree;
  }
  return j;
}

Ensemble ensemble_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {"kind", "d",     "n",    "atoms",
                                                 "level", "lambda", "domain", "seed"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw std::invalid_argument("ensemble: unknown key \"" + it.key() + "\"");
    }
  }
  if (!j.contains("kind")) throw std::invalid_argument("ensemble: missing \"kind\"");
  const EnsembleKind kind = ensemble_kind_from_name(j.at("kind").get<std::string>());

  if (kind == EnsembleKind::Spectral) {
    if (!j.contains("atoms")) throw std::invalid_argument("ensemble: spectral kind needs \"atoms\"");
    SpectralMeasure nu;
    for (const auto& a : j.at("atoms")) {
      const std::vector<double> z = a.at("z").get<std::vector<double>>();
      const double w = a.at("w").get<double>();
      if (nu.dim == 0) nu.dim = static_cast<int>(z.size());
      if (static_cast<int>(z.size()) != nu.dim) {
        throw std::invalid_argument("ensemble: inconsistent atom dimensions");
      }
      if (!(w > 0.0)) throw std::invalid_argument("ensemble: atom weights must be positive");
      nu.atom_points.insert(nu.atom_points.end(), z.begin(), z.end());
      nu.atom_weights.push_back(w);
    }
    return make_spectral_ensemble(std::move(nu), j.value("level", 0.0));
  }

  const int d = j.value("d", 1);
  if (!j.contains("n")) throw std::invalid_argument("ensemble: missing \"n\"");
  const int n = j.at("n").get<int>();
  Ensemble e = make_ensemble(kind, d, n);
  if (j.contains("lambda")) {
    e.model->set_lambda_diag(j.at("lambda").get<std::vector<double>>());
  }
  return e;
}

std::vector<double> sample_coefficients(const Ensemble& ensemble, std::uint64_t seed) {
  GaussianStream stream(seed);
  std::vector<double> coeffs(static_cast<std::size_t>(ensemble.n_coefficients()));
  if (ensemble.kind == EnsembleKind::Spectral) {
    for (double& c : coeffs) c = stream.normal();  // amplitudes fold into the basis
    return coeffs;
  }
  const LinearFieldModel& model = require_model(ensemble);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double sd = model.lambda_diag().empty() ? 1.0 : std::sqrt(model.lambda_diag()[k]);
    coeffs[k] = sd * stream.normal();
  }
  return coeffs;
}

void ensemble_basis_values(const Ensemble& ensemble, std::span<const double> x,
                           std::span<double> out) {
  if (ensemble.kind == EnsembleKind::Spectral) {
    const SpectralMeasure& nu = require_measure(ensemble);
    const SpectralPairs pairs = decompose_pairs(nu);
    std::size_t c = 0;
    for (std::size_t rep : pairs.pair_rep) {
      const double amp = std::sqrt(2.0 * nu.atom_weights[rep]);
      const double phase = dot(nu.atom(rep), x);
      out[c++] = amp * std::cos(phase);
      out[c++] = amp * std::sin(phase);
    }
    for (std::size_t o : pairs.origin) out[c++] = std::sqrt(nu.atom_weights[o]);
    return;
  }
  require_model(ensemble).eval_basis(x, out, {});
}

ScalarField realize_field(const Ensemble& ensemble, std::vector<double> coefficients) {
  if (static_cast<int>(coefficients.size()) != ensemble.n_coefficients()) {
    throw std::invalid_argument("realize_field: coefficient count mismatch");
  }

  if (ensemble.kind == EnsembleKind::Spectral) {
    const SpectralMeasure& nu = require_measure(ensemble);
    const SpectralPairs pairs = decompose_pairs(nu);
    const double level = ensemble.level;
    const int d = ensemble.dim;
    return [nu, pairs, level, d, coeffs = std::move(coefficients)](std::span<const double> x,
                                                                   std::span<double> grad) {
      if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
      double v = -level;
      std::size_t c = 0;
      for (std::size_t rep : pairs.pair_rep) {
        const double amp = std::sqrt(2.0 * nu.atom_weights[rep]);
        const std::span<const double> z = nu.atom(rep);
        const double phase = dot(z, x);
        const double xi = coeffs[c++], eta = coeffs[c++];
        const double cs = std::cos(phase), sn = std::sin(phase);
        v += amp * (xi * cs + eta * sn);
        if (!grad.empty()) {
          const double dv = amp * (-xi * sn + eta * cs);
          for (int i = 0; i < d; ++i) grad[static_cast<std::size_t>(i)] += dv * z[static_cast<std::size_t>(i)];
        }
      }
      for (std::size_t o : pairs.origin) v += std::sqrt(nu.atom_weights[o]) * coeffs[c++];
      return v;
    };
  }

  const LinearFieldModel model = require_model(ensemble);
  const std::size_t n = static_cast<std::size_t>(model.basis_size());
  const std::size_t d = static_cast<std::size_t>(model.dim());
  return [model, n, d, coeffs = std::move(coefficients)](std::span<const double> x,
                                                         std::span<double> grad) {
    std::vector<double> h(n), dh(grad.empty() ? 0 : n * d);
    model.eval_basis(x, h, dh);
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k) v += coeffs[k] * h[k];
    if (!grad.empty()) {
      for (std::size_t i = 0; i < d; ++i) {
        double gi = 0.0;
        for (std::size_t k = 0; k < n; ++k) gi += coeffs[k] * dh[k * d + i];
        grad[i] = gi;
      }
    }
    return v;
  };
}

double theory_expected_area(const Ensemble& ensemble, const DomainBox& box,
                            const SphereRule& rule, const QuadSizes& quad) {
  switch (ensemble.kind) {
    case EnsembleKind::Kac:
      return kac_expected_roots(ensemble.degree, std::make_pair(box.lower(0), box.upper(0)));
    case EnsembleKind::MonomialProduct: {
      // Sigma(x) is diagonal with the per-axis Kac kernel
      const int n = ensemble.degree;
      MomentField field;
      field.dim = ensemble.dim;
      field.mean = [](std::span<const double>) { return 0.0; };
      field.sigma = [](std::span<const double>) { return 1.0; };  // unused scale
      field.sigma_matrix = [n](std::span<const double> x, std::span<double> out) {
        const std::size_t d = x.size();
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) out[i * d + i] = kac_delta(x[i], n);
      };
      return expected_area_centered(field, box, rule, quad);
    }
    case EnsembleKind::Kostlan:
      return kostlan_expected_area(ensemble.degree, ensemble.dim, &box, rule, quad);
    case EnsembleKind::Trigonometric:
      return trig_expected_area(ensemble.degree, ensemble.dim, box, rule);
    case EnsembleKind::Spectral:
      return homogeneous_expected_area(*ensemble.measure, ensemble.level, box, rule);
  }
  throw std::logic_error("theory_expected_area: unreachable");
}

}  // namespace riceband
