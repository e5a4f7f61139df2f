#include "kerr/glassey.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kerr/error.hpp"
#include "kerr/special.hpp"

namespace kerr {
namespace {

// cos(arg c1 - arg c0) without forming the angles, so orthogonal data gives exactly 0.
double phase_cosine(Complex c0, Complex c1) {
  return (std::conj(c0) * c1).real() / (std::abs(c0) * std::abs(c1));
}

}  // namespace

std::string HypothesisReport::failures() const {
  std::string out;
  auto add = [&out](const char* msg) {
    if (!out.empty()) out += "; ";
    out += msg;
  };
  if (!kerr_defocusing) add("Re s is not bounded above by a negative number (b >= 0)");
  if (!nonzero_data) add("c0 and c1 must both be nonzero");
  if (!phase_condition) add("cos(arg c1 - arg c0) must be positive");
  if (!amplitude_condition) add("|c0| must exceed sqrt(2a/|b|)");
  return out;
}

HypothesisReport check_hypotheses(const SlabProfile& profile, const InitialConditions& ic) {
  HypothesisReport rep;
  rep.a = profile.a;
  rep.b = profile.b;
  rep.kerr_defocusing = profile.b < 0.0;
  rep.nonzero_data = ic.c0 != Complex{} && ic.c1 != Complex{};
  rep.cos_phase = rep.nonzero_data ? phase_cosine(ic.c0, ic.c1) : 0.0;
  rep.phase_condition = rep.nonzero_data && rep.cos_phase > 0.0;
  if (profile.a <= 0.0) {
    rep.amplitude_condition = true;
  } else if (rep.kerr_defocusing) {
    rep.amplitude_threshold = std::sqrt(2.0 * profile.a / -profile.b);
    rep.amplitude_condition = std::abs(ic.c0) > rep.amplitude_threshold;
  } else {
    rep.amplitude_threshold = std::numeric_limits<double>::infinity();
  }
  return rep;
}

std::pair<double, double> alpha_beta(const InitialConditions& ic) {
  if (ic.c0 == Complex{} || ic.c1 == Complex{})
    throw InvalidInput("degenerate initial data: c0 and c1 must be nonzero");
  return {0.5 * std::norm(ic.c0), std::abs(ic.c0) * std::abs(ic.c1) * phase_cosine(ic.c0, ic.c1)};
}

double h_eval(double s, double a, double b) { return -2.0 * (a + 2.0 * b * s) * s; }

double h_antiderivative(double s, double alpha, double a, double b) {
  if (s < alpha) throw DomainError("h_antiderivative: upper limit below alpha");
  const double nb = std::abs(b);
  return -a * (s * s - alpha * alpha) + (4.0 * nb / 3.0) * (s * s * s - alpha * alpha * alpha);
}

void GlasseyData::validate() const {
  if (!(alpha > 0.0)) throw InapplicableBound("alpha must be positive");
  if (!(beta > 0.0)) throw InapplicableBound("beta must be positive (cos(arg c1 - arg c0) > 0)");
  if (!(b < 0.0)) throw InapplicableBound("b must be negative");
  if (!(alpha * -b > a)) throw InapplicableBound("alpha |b| must exceed a");
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(a) || !std::isfinite(b))
    throw InapplicableBound("non-finite comparison data");
}

GlasseyData make_glassey_data(const SlabProfile& profile, const InitialConditions& ic) {
  if (ic.c0 == Complex{} || ic.c1 == Complex{})
    throw InapplicableBound("c0 and c1 must both be nonzero");
  const auto [alpha, beta] = alpha_beta(ic);
  GlasseyData d{alpha, beta, profile.a, profile.b};
  d.validate();
  return d;
}

Radicand::Radicand(const GlasseyData& d) {
  const double nb = std::abs(d.b);
  c3 = 8.0 / 3.0 * nb;
  c2 = 8.0 * d.alpha * nb - 2.0 * d.a;
  c1 = 8.0 * d.alpha * d.alpha * nb - 4.0 * d.a * d.alpha;
  c0 = d.beta * d.beta;
}

double printed_p(double t, const GlasseyData& d) {
  const double nb = std::abs(d.b);
  return 8.0 / 3.0 * nb * t * t * t + 4.0 * (2.0 * d.alpha * nb - d.a) * t * t +
         8.0 * d.alpha * (d.alpha * nb - d.a) * t + d.beta * d.beta;
}

quad::Estimate comparison_integral(double u, const GlasseyData& d, double rel_tol) {
  d.validate();
  if (u < d.alpha) throw DomainError("comparison integral: u below alpha");
  const Radicand p(d);
  const double upper = u - d.alpha;  // may be +inf

  // Beyond T the cubic term exceeds every other term of the radicand a hundredfold.
  const double split = std::max({std::cbrt(100.0 * p.c0 / p.c3), 100.0 * p.c2 / p.c3,
                                 std::sqrt(100.0 * p.c1 / p.c3)});
  auto head_integrand = [&p](double t) { return 1.0 / std::sqrt(p(t)); };
  if (upper <= split) return quad::integrate(head_integrand, 0.0, upper, rel_tol);

  quad::Estimate head = quad::integrate(head_integrand, 0.0, split, rel_tol);

  // With t = T / x^2 the tail is 2/sqrt(c3 T) times int_{x_lo}^1 dx / sqrt(1 + eps(x)),
  // where the leading term (eps = 0) is integrated in closed form.
  const double scale = 2.0 / std::sqrt(p.c3 * split);
  const double x_lo = std::isinf(upper) ? 0.0 : std::sqrt(split / upper);
  const double leading = scale * (1.0 - x_lo);
  auto remainder_integrand = [&](double x) {
    const double x2 = x * x / split;
    const double eps = (p.c2 * x2 + p.c1 * x2 * x2 + p.c0 * x2 * x2 * x2) / p.c3;
    const double root = std::sqrt(1.0 + eps);
    return -scale * eps / (root * (1.0 + root));
  };
  const double target = rel_tol * (head.value + leading);
  const quad::Estimate rem = quad::integrate(remainder_integrand, x_lo, 1.0, rel_tol, 0.5 * target);
  return {head.value + leading + rem.value, head.error + rem.error,
          head.evaluations + rem.evaluations};
}

double comparison_time(double u, const GlasseyData& d, double rel_tol) {
  return comparison_integral(u, d, rel_tol).value;
}

quad::Estimate gamma_quadrature(const GlasseyData& d, double rel_tol) {
  return comparison_integral(std::numeric_limits<double>::infinity(), d, rel_tol);
}

double gamma_closed_q(double beta, double b) {
  if (!(beta > 0.0) || !(b < 0.0)) throw InvalidInput("gamma_closed_q requires beta > 0, b < 0");
  const double prefactor =
      special::gamma(1.0 / 3.0) * special::gamma(7.0 / 6.0) / std::sqrt(std::numbers::pi);
  return prefactor * std::cbrt(3.0 / (beta * -b));
}

double l_star_nondim(double beta, double b) {
  if (!(beta > 0.0) || !(b < 0.0)) throw InapplicableBound("l_star requires beta > 0, b < 0");
  return kSlabLengthConstant / std::cbrt(beta * -b);
}

double l_star_physical(double k, double b, Complex e0, Complex de0) {
  if (!(k > 0.0)) throw InvalidInput("k must be positive");
  if (!(b < 0.0)) throw InapplicableBound("l_star requires b < 0");
  if (e0 == Complex{} || de0 == Complex{})
    throw InapplicableBound("l_star requires nonzero E(0) and E'(0)");
  const double c = phase_cosine(e0, de0);
  if (!(c > 0.0)) throw InapplicableBound("l_star requires cos(arg E'(0) - arg E(0)) > 0");
  return kSlabLengthConstant / std::cbrt(k * k * -b * std::abs(e0) * std::abs(de0) * c);
}

BoundResult compute_bounds(const GlasseyData& d, double rel_tol) {
  const quad::Estimate g = gamma_quadrature(d, rel_tol);
  return {g.value, gamma_closed_q(d.beta, d.b), l_star_nondim(d.beta, d.b), g.error};
}

}  // namespace kerr
