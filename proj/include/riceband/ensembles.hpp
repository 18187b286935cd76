#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riceband/core.hpp"
#include "riceband/kac_rice.hpp"
#include "riceband/sphere.hpp"

#include "json.hpp"

namespace riceband {

enum class BasisKind { MonomialProduct, Kostlan, Trigonometric, Custom };

// A Gaussian field G(x) = <h(x), xi> given by a basis family h and a diagonal
// coefficient covariance (empty = identity).
class LinearFieldModel {
 public:
  using BasisFn = std::function<void(std::span<const double> x, std::span<double> h,
                                     std::span<double> dh)>;

  static LinearFieldModel monomial_product(int dim, int degree);
  static LinearFieldModel kostlan(int dim, int degree);
  static LinearFieldModel trigonometric(int dim, int degree);
  static LinearFieldModel custom(int dim, int basis_size, BasisFn basis);

  BasisKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int basis_size() const { return basis_size_; }

  // Diagonal of the coefficient covariance; empty means identity.
  const std::vector<double>& lambda_diag() const { return lambda_diag_; }
  void set_lambda_diag(std::vector<double> diag);

  // Evaluates h(x) into `h` (basis_size values) and, when `dh` is non-empty,
  // the derivatives into `dh` (basis_size * dim, entry [k*dim + i] = dh_k/dx_i).
  void eval_basis(std::span<const double> x, std::span<double> h, std::span<double> dh) const;

 private:
  LinearFieldModel() = default;

  BasisKind kind_ = BasisKind::Custom;
  int dim_ = 0;
  int degree_ = 0;
  int basis_size_ = 0;
  std::vector<double> lambda_diag_;
  std::vector<std::vector<int>> multi_indices_;  // monomial-type bases
  BasisFn custom_basis_;
};

// Finite symmetric atomic spectral measure on R^d.
struct SpectralMeasure {
  int dim = 0;
  std::vector<double> atom_points;   // n_atoms * dim
  std::vector<double> atom_weights;  // positive

  std::size_t n_atoms() const { return atom_weights.size(); }
  std::span<const double> atom(std::size_t i) const {
    return {atom_points.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  double total_weight() const;
  bool is_symmetric(double tol = 1e-12) const;
  bool is_unit_variance(double tol = 1e-12) const;

  // Radial moment gamma_k = (sum w ||z||^k)^{1/k}.
  double gamma(int k) const;
};

// MomentField of a linear model. For identity covariance Sigma(x) is the
// kernel (||h||^2 <h_i',h_j'> - <h,h_i'><h,h_j'>) / ||h||^4; a diagonal
// covariance is folded into the basis as h~ = Lambda^{1/2} h first, which is
// the covariance-rescaled reading of the same kernel.
MomentField moment_field_linear(const LinearFieldModel& model);

// Expected real-root density of the degree-n Kac polynomial:
// (1/pi) sqrt(A_n C_n - B_n^2) / A_n, with the |t| > 1 branch evaluated
// through the reflection rho(t) = rho(1/t) / t^2 to avoid overflow.
double kac_density(double t, int n);

// A_n, B_n, C_n at |t| <= 1 by direct summation.
void kac_abc(double t, int n, double& a, double& b, double& c);

// (A_n C_n - B_n^2) / A_n^2, valid for all t.
double kac_delta(double t, int n);

// Expected number of real roots over an interval, or over the whole line when
// `interval` is empty (tail folded onto (0,1) by the t -> 1/t symmetry).
double kac_expected_roots(int n, std::optional<std::pair<double, double>> interval = std::nullopt,
                          double tol = 1e-10);

// sqrt(sum_i s_i^2 (A C - B^2)/A^2 at x_i) — the sphere integrand of the
// monomial-product (random algebraic surface) ensemble.
double algebraic_surface_integrand(std::span<const double> x, std::span<const double> s, int n);

// Kostlan-Shub-Smale expected area over a box, or over the whole line for
// d = 1 when `box` is null (arctan substitution). Scales exactly as sqrt(n).
double kostlan_expected_area(int n, int d, const DomainBox* box, const SphereRule& rule,
                             const QuadSizes& quad = {});

// Random trigonometric ensemble, closed form linear in |F|:
// n Gamma((d+1)/2)/(4 pi^{(d+1)/2}) |F| int_S ((s_1+...+s_d)^2 + (n+2)/(3n))^{1/2} mu(ds)
double trig_expected_area(int n, int d, const DomainBox& box, const SphereRule& rule);

// Level-u set of the unit-variance homogeneous field with spectral measure nu:
// Gamma((d+1)/2)/(2 pi^{(d+1)/2}) |F| e^{-u^2/2} int_S (sum w <s,z>^2)^{1/2} mu(ds)
double homogeneous_expected_area(const SpectralMeasure& nu, double u, const DomainBox& box,
                                 const SphereRule& rule);

// Jensen / Cauchy-Schwarz sandwich:
// (1/pi) gamma_1 e^{-u^2/2} |F| <= E <= Gamma((d+1)/2)/(sqrt(pi) Gamma(d/2)) gamma_2 e^{-u^2/2} |F|
std::pair<double, double> gamma_bounds(const SpectralMeasure& nu, double u, const DomainBox& box);

// ---------------------------------------------------------------------------
// Ensemble descriptor: one of the catalog ensembles plus sampling support.

enum class EnsembleKind { Kac, MonomialProduct, Kostlan, Trigonometric, Spectral };

struct Ensemble {
  EnsembleKind kind = EnsembleKind::Kac;
  int dim = 1;
  int degree = 1;
  std::optional<LinearFieldModel> model;  // linear kinds
  std::optional<SpectralMeasure> measure; // spectral kind
  double level = 0.0;                     // spectral kind: zero set of G - level

  int n_coefficients() const;
};

Ensemble make_ensemble(EnsembleKind kind, int dim, int degree);
Ensemble make_spectral_ensemble(SpectralMeasure measure, double level = 0.0);

std::string ensemble_kind_name(EnsembleKind kind);
EnsembleKind ensemble_kind_from_name(const std::string& name);

nlohmann::json ensemble_to_json(const Ensemble& ensemble);
Ensemble ensemble_from_json(const nlohmann::json& j);

// Independent centered Gaussians with the ensemble's variances, deterministic
// per seed. Spectral kind: for each symmetric atom pair with per-atom weight
// w, one (xi, eta) amplitude pair with variance 2w, realizing
// G(x) = sum sqrt(2w_j) (xi_j cos<z_j,x> + eta_j sin<z_j,x>) up to the folding
// of the amplitude into the coefficients.
std::vector<double> sample_coefficients(const Ensemble& ensemble, std::uint64_t seed);

// Binds sampled coefficients to an evaluable field with analytic gradient.
// Spectral kind subtracts the ensemble level, so zeros of the returned field
// are the level-u set.
ScalarField realize_field(const Ensemble& ensemble, std::vector<double> coefficients);

// Basis values only (no gradient), in coefficient order; the building block
// for precomputed grid evaluation in Monte Carlo.
void ensemble_basis_values(const Ensemble& ensemble, std::span<const double> x,
                           std::span<double> out);

// Closed-form/quadrature expected area of the ensemble's zero (or level) set.
double theory_expected_area(const Ensemble& ensemble, const DomainBox& box,
                            const SphereRule& rule, const QuadSizes& quad = {});

}  // namespace riceband
