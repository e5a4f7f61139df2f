#pragma once

#include <complex>
#include <string>
#include <utility>

#include "kerr/profile.hpp"
#include "kerr/quadrature.hpp"

namespace kerr {

/// phi(0) = c0, phi'(0) = c1 in the nondimensional coordinate.
struct InitialConditions {
  Complex c0;
  Complex c1;
};

/// Constant in the slab-length bound L_star = 2.023 / (k^2 |b E0 E0'| cos)^{1/3}.
inline constexpr double kSlabLengthConstant = 2.023;

/// Default relative target for the comparison integrals.
inline constexpr double kQuadratureRelTol = 1e-8;

/// Blow-up hypotheses for the initial-value problem on a given slab.
struct HypothesisReport {
  bool kerr_defocusing = false;  // b < 0
  bool nonzero_data = false;     // c0 != 0 and c1 != 0
  bool phase_condition = false;  // cos(arg c1 - arg c0) > 0
  bool amplitude_condition = false;  // |c0| > sqrt(2a/|b|), vacuous when a <= 0
  double a = 0.0;
  double b = 0.0;
  double cos_phase = 0.0;
  double amplitude_threshold = 0.0;

  [[nodiscard]] bool passed() const {
    return kerr_defocusing && nonzero_data && phase_condition && amplitude_condition;
  }
  /// Human-readable list of the failed conditions; empty when passed().
  [[nodiscard]] std::string failures() const;
};

[[nodiscard]] HypothesisReport check_hypotheses(const SlabProfile& profile,
                                                const InitialConditions& ic);

/// alpha = |c0|^2 / 2, beta = |c0| |c1| cos(arg c1 - arg c0).
/// Throws InvalidInput if c0 or c1 vanishes.
[[nodiscard]] std::pair<double, double> alpha_beta(const InitialConditions& ic);

/// Comparison function h(s) = -2 (a + 2 b s) s.
[[nodiscard]] double h_eval(double s, double a, double b);

/// int_alpha^s h = -a (s^2 - alpha^2) + (4 |b| / 3)(s^3 - alpha^3).  Requires b <= 0.
[[nodiscard]] double h_antiderivative(double s, double alpha, double a, double b);

/// Data for the comparison argument: the blow-up bound requires alpha > 0,
/// beta > 0, b < 0 and alpha |b| > a.
struct GlasseyData {
  double alpha;
  double beta;
  double a;
  double b;

  /// Throws InapplicableBound when an invariant fails.
  void validate() const;
};

/// Builds the data from a slab profile and initial conditions; throws
/// InapplicableBound if the result is not admissible.
[[nodiscard]] GlasseyData make_glassey_data(const SlabProfile& profile,
                                            const InitialConditions& ic);

/// beta^2 + 2 int_alpha^{alpha+t} h as the cubic c3 t^3 + c2 t^2 + c1 t + c0.
struct Radicand {
  double c3, c2, c1, c0;

  explicit Radicand(const GlasseyData& d);
  [[nodiscard]] double operator()(double t) const { return ((c3 * t + c2) * t + c1) * t + c0; }
};

/// The cubic as printed in the blow-up proof, whose quadratic and linear
/// coefficients, 4(2 alpha |b| - a) and 8 alpha (alpha |b| - a), differ from
/// the direct expansion held by Radicand.  Kept only for cross-checks.
[[nodiscard]] double printed_p(double t, const GlasseyData& d);

/// int_alpha^u ds / sqrt(beta^2 + 2 int_alpha^s h); infinite u allowed.
[[nodiscard]] quad::Estimate comparison_integral(double u, const GlasseyData& d,
                                                 double rel_tol = kQuadratureRelTol);

/// Upper bound on the coordinate reached once u(zeta) = u.  Throws DomainError if u < alpha.
[[nodiscard]] double comparison_time(double u, const GlasseyData& d,
                                     double rel_tol = kQuadratureRelTol);

/// gamma = comparison_integral(infinity).
[[nodiscard]] quad::Estimate gamma_quadrature(const GlasseyData& d,
                                              double rel_tol = kQuadratureRelTol);

/// Gamma(1/3) Gamma(7/6) / sqrt(pi) * (3 / (beta |b|))^{1/3}.
[[nodiscard]] double gamma_closed_q(double beta, double b);

/// 2.023 / (beta |b|)^{1/3}.
[[nodiscard]] double l_star_nondim(double beta, double b);

/// 2.023 / [k^2 |b| |E0| |E0'| cos(arg E0' - arg E0)]^{1/3} in physical length units.
[[nodiscard]] double l_star_physical(double k, double b, Complex e0, Complex de0);

struct BoundResult {
  double gamma_quadrature;
  double gamma_closed_q;
  double l_star_nondim;
  double quadrature_error_estimate;
};

[[nodiscard]] BoundResult compute_bounds(const GlasseyData& d, double rel_tol = kQuadratureRelTol);

}  // namespace kerr
