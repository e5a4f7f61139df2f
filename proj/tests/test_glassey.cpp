#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "kerr/error.hpp"
#include "kerr/glassey.hpp"
#include "kerr/quadrature.hpp"
#include "kerr/special.hpp"

using kerr::Complex;
using kerr::GlasseyData;

namespace {

// Reference values from 30-digit mpmath evaluations.
constexpr double kGammaThird = 2.678938534707747633655692940974677644;
constexpr double kGammaSevenSixths = 0.9277193336300392007083494825;
constexpr double kClosedQUnit = 2.02229653889837365095278592311;   // beta = 1, b = -1
constexpr double kSecantGamma = 0.919833173253200397303528721142;  // alpha=2, beta=4, a=1, b=-1
constexpr double kLStarSecant = 1.27441014196866428897060037041;

// Independent oracle: double-exponential quadrature of the defining integral.
double oracle_integral(const GlasseyData& d, double upper) {
  const double nb = -d.b;
  auto radicand = [&](double t) {
    const double s = d.alpha + t;
    const double big_h = -d.a * (s * s - d.alpha * d.alpha) +
                         4.0 * nb / 3.0 * (s * s * s - d.alpha * d.alpha * d.alpha);
    return d.beta * d.beta + 2.0 * big_h;
  };
  auto f = [&](double t) { return 1.0 / std::sqrt(radicand(t)); };
  if (std::isinf(upper)) {
    boost::math::quadrature::exp_sinh<double> es;
    return es.integrate(f, 1e-14);
  }
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, 0.0, upper, 1e-14);
}

kerr::SlabProfile constant_slab(Complex r, Complex s, double z_max = 2.0) {
  return {kerr::ProfileSpec::constant(r), kerr::ProfileSpec::constant(s), z_max};
}

GlasseyData random_admissible(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GlasseyData d{};
  d.b = -std::exp(std::log(1e-3) + u(rng) * std::log(1e6));  // |b| in [1e-3, 1e3]
  d.beta = std::exp(std::log(1e-3) + u(rng) * std::log(1e6));
  d.a = -3.0 + 6.0 * u(rng);
  const double floor = std::max(0.0, d.a / -d.b);
  d.alpha = floor * (1.0 + 1e-3 + 2.0 * u(rng)) + 1e-6 + u(rng);
  return d;
}

}  // namespace

TEST_CASE("Lanczos gamma against reference values") {
  CHECK(kerr::special::gamma(1.0 / 3.0) == doctest::Approx(kGammaThird).epsilon(1e-10));
  CHECK(kerr::special::gamma(7.0 / 6.0) == doctest::Approx(kGammaSevenSixths).epsilon(1e-10));
  CHECK(kerr::special::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
  CHECK(kerr::special::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(kerr::special::gamma(-0.5) == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK_THROWS_AS((void)kerr::special::gamma(-2.0), kerr::DomainError);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 30.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(kerr::special::gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-12));
  }
}

TEST_CASE("adaptive Gauss-Kronrod") {
  auto e1 = kerr::quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12);
  CHECK(e1.value == doctest::Approx(2.0).epsilon(1e-13));
  auto e2 = kerr::quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(e2.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(e2.error <= 1e-9);
  CHECK(kerr::quad::integrate([](double) { return 1.0; }, 1.0, 1.0, 1e-8).value == 0.0);
}

TEST_CASE("check_hypotheses") {
  SUBCASE("secant benchmark passes") {
    const auto rep = kerr::check_hypotheses(constant_slab(1.0, -1.0), {2.0, 2.0});
    CHECK(rep.passed());
    CHECK(rep.amplitude_threshold == doctest::Approx(std::sqrt(2.0)));
    CHECK(rep.failures().empty());
  }
  SUBCASE("orthogonal phases fail") {
    const auto rep = kerr::check_hypotheses(constant_slab(1.0, -1.0), {1.0, Complex(0.0, 1.0)});
    CHECK_FALSE(rep.phase_condition);
    CHECK_FALSE(rep.passed());
  }
  SUBCASE("non-negative Kerr bound fails") {
    const auto rep = kerr::check_hypotheses(constant_slab(1.0, Complex(0.0, 0.5)), {2.0, 2.0});
    CHECK(rep.b == 0.0);
    CHECK_FALSE(rep.kerr_defocusing);
    CHECK_FALSE(rep.passed());
  }
  SUBCASE("zero data fails") {
    const auto rep = kerr::check_hypotheses(constant_slab(1.0, -1.0), {2.0, 0.0});
    CHECK_FALSE(rep.nonzero_data);
    CHECK_FALSE(rep.passed());
  }
  SUBCASE("amplitude condition, and vacuous when a <= 0") {
    CHECK_FALSE(kerr::check_hypotheses(constant_slab(1.0, -1.0), {1.4, 2.0}).amplitude_condition);
    CHECK(kerr::check_hypotheses(constant_slab(-1.0, -1.0), {1e-3, 2.0}).passed());
    CHECK(kerr::check_hypotheses(constant_slab(0.0, -1.0), {1e-3, 2.0}).passed());
  }
}

TEST_CASE("alpha_beta") {
  auto [a1, b1] = kerr::alpha_beta({2.0, 2.0});
  CHECK(a1 == 2.0);
  CHECK(b1 == 4.0);
  auto [a2, b2] = kerr::alpha_beta({std::polar(std::sqrt(2.0), std::numbers::pi / 3),
                                    std::polar(1.0, std::numbers::pi / 3)});
  CHECK(a2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  auto [a3, b3] = kerr::alpha_beta({1.0, std::polar(1.0, 2 * std::numbers::pi / 3)});
  CHECK(a3 == 0.5);
  CHECK(b3 == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK_THROWS_AS((void)kerr::alpha_beta({0.0, 1.0}), kerr::InvalidInput);
  CHECK_THROWS_AS((void)kerr::alpha_beta({1.0, 0.0}), kerr::InvalidInput);
}

TEST_CASE("comparison function and its antiderivative") {
  CHECK(kerr::h_eval(0.0, 1.0, -1.0) == 0.0);
  CHECK(kerr::h_eval(1.0, 0.0, -1.0) == 4.0);
  CHECK(kerr::h_eval(1.0, 1.0, -1.0) == 2.0);

  CHECK(kerr::h_antiderivative(1.3, 1.3, 0.7, -2.0) == 0.0);
  CHECK(kerr::h_antiderivative(1.0, 0.0, 0.0, -1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(kerr::h_antiderivative(2.0, 1.0, 1.0, -1.0) == doctest::Approx(19.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)kerr::h_antiderivative(0.5, 1.0, 1.0, -1.0), kerr::DomainError);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double alpha = u(rng), a = u(rng) - 1.5, b = -u(rng), s = alpha + u(rng);
    const double quad = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return kerr::h_eval(x, a, b); }, alpha, s);
    CHECK(kerr::h_antiderivative(s, alpha, a, b) == doctest::Approx(quad).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("GlasseyData validation") {
  CHECK_NOTHROW(GlasseyData({2.0, 4.0, 1.0, -1.0}).validate());
  CHECK_THROWS_AS(GlasseyData({2.0, -4.0, 1.0, -1.0}).validate(), kerr::InapplicableBound);
  CHECK_THROWS_AS(GlasseyData({2.0, 4.0, 1.0, 0.0}).validate(), kerr::InapplicableBound);
  CHECK_THROWS_AS(GlasseyData({0.5, 4.0, 1.0, -1.0}).validate(), kerr::InapplicableBound);
  CHECK_THROWS_AS(GlasseyData({0.0, 4.0, -1.0, -1.0}).validate(), kerr::InapplicableBound);
  CHECK_THROWS_AS((void)kerr::make_glassey_data(constant_slab(1.0, -1.0), {1.0, 1.0}),
                  kerr::InapplicableBound);
}

TEST_CASE("radicand expansion matches the defining expression") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const GlasseyData d = random_admissible(rng);
    const kerr::Radicand p(d);
    CHECK(p.c3 > 0.0);
    CHECK(p.c2 > 0.0);
    CHECK(p.c1 > 0.0);
    CHECK(p(0.0) == d.beta * d.beta);
    const double t = 10.0 * u(rng);
    const double direct = d.beta * d.beta + 2.0 * kerr::h_antiderivative(d.alpha + t, d.alpha, d.a, d.b);
    CHECK(p(t) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(p(t) >= d.beta * d.beta);
    // The printed cubic differs from the expansion but never exceeds it for a >= 0.
    if (d.a >= 0.0) CHECK(kerr::printed_p(t, d) <= p(t) * (1 + 1e-14));
  }
}

TEST_CASE("gamma quadrature") {
  SUBCASE("degenerate case reduces to the q closed form") {
    const GlasseyData d{1e-8, 1.0, 0.0, -1.0};
    const auto g = kerr::gamma_quadrature(d);
    CHECK(g.value == doctest::Approx(2.0225).epsilon(1e-3 / 2.0225));
    CHECK(g.value == doctest::Approx(oracle_integral(d, INFINITY)).epsilon(1e-8));
    CHECK(g.value == doctest::Approx(kerr::gamma_closed_q(1.0, -1.0)).epsilon(1e-3));
    CHECK(kerr::comparison_time(1e12, d) == doctest::Approx(2.0225).epsilon(1e-3));
  }
  SUBCASE("secant benchmark") {
    const GlasseyData d{2.0, 4.0, 1.0, -1.0};
    const auto g = kerr::gamma_quadrature(d);
    CHECK(g.value >= std::numbers::pi / 4);
    CHECK(g.value <= 1.2744);
    CHECK(g.value == doctest::Approx(kSecantGamma).epsilon(1e-8));
    CHECK(g.error < 1e-8 * g.value);
  }
  SUBCASE("decreasing in |b|") {
    double prev = INFINITY;
    for (double nb : {1.0, 1.5, 2.0, 4.0, 8.0, 16.0}) {
      const double g = kerr::gamma_quadrature({2.0, 4.0, 1.0, -nb}).value;
      CHECK(g < prev);
      prev = g;
    }
  }
  SUBCASE("random instances against the independent oracle") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
      const GlasseyData d = random_admissible(rng);
      CHECK(kerr::gamma_quadrature(d).value == doctest::Approx(oracle_integral(d, INFINITY)).epsilon(1e-8));
    }
  }
  SUBCASE("inapplicable data") {
    CHECK_THROWS_AS((void)kerr::gamma_quadrature({2.0, 4.0, 1.0, 0.5}), kerr::InapplicableBound);
  }
}

TEST_CASE("comparison time") {
  const GlasseyData d{2.0, 4.0, 1.0, -1.0};
  CHECK(kerr::comparison_time(d.alpha, d) == 0.0);
  CHECK_THROWS_AS((void)kerr::comparison_time(1.0, d), kerr::DomainError);
  double prev = 0.0;
  for (double u = 2.01; u < 1e15; u *= 1.7) {
    const double t = kerr::comparison_time(u, d);
    CHECK(t > prev);
    CHECK(t == doctest::Approx(oracle_integral(d, u - d.alpha)).epsilon(1e-8));
    prev = t;
  }
  const double gamma = kerr::gamma_quadrature(d).value;
  CHECK(prev < gamma);
  CHECK(kerr::comparison_time(1e30, d) == doctest::Approx(gamma).epsilon(1e-8));
}

TEST_CASE("q closed form") {
  CHECK(kerr::gamma_closed_q(1.0, -1.0) == doctest::Approx(kClosedQUnit).epsilon(1e-10));
  CHECK(kerr::gamma_closed_q(1.0, -1.0) < 2.023);
  CHECK(kerr::gamma_closed_q(8.0, -1.0) == doctest::Approx(0.5 * kClosedQUnit).epsilon(1e-12));
  CHECK_THROWS_AS((void)kerr::gamma_closed_q(1.0, 1.0), kerr::InvalidInput);
  // Independent check: int_0^inf dt / sqrt((8/3) t^3 + 1).
  boost::math::quadrature::exp_sinh<double> es;
  const double q_integral = es.integrate([](double t) { return 1.0 / std::sqrt(8.0 / 3.0 * t * t * t + 1.0); }, 1e-14);
  CHECK(kerr::gamma_closed_q(1.0, -1.0) == doctest::Approx(q_integral).epsilon(1e-10));
}

TEST_CASE("property: bound chain") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const GlasseyData d = random_admissible(rng);
    const auto b = kerr::compute_bounds(d);
    CHECK(b.gamma_quadrature <= b.gamma_closed_q * (1 + 1e-9));
    CHECK(b.gamma_closed_q <= kerr::kSlabLengthConstant / std::cbrt(d.beta * -d.b) * (1 + 1e-9));
    CHECK(b.l_star_nondim == doctest::Approx(2.023 / std::cbrt(d.beta * -d.b)).epsilon(1e-15));
  }
}

TEST_CASE("slab length bound") {
  CHECK(kerr::l_star_physical(1.0, -1.0, 2.0, 2.0) == doctest::Approx(kLStarSecant).epsilon(1e-14));
  CHECK(kerr::l_star_physical(1.0, -1.0, 2.0, 2.0) == doctest::Approx(1.2743).epsilon(1e-3 / 1.2743));
  CHECK(kerr::l_star_physical(2.0, -1.0, 2.0, 2.0) / kerr::l_star_physical(1.0, -1.0, 2.0, 2.0) ==
        doctest::Approx(std::pow(2.0, -2.0 / 3.0)).epsilon(1e-14));
  const double ratio = kerr::l_star_physical(1.0, -1.0, 2.0, 2.0) / (std::numbers::pi / 4);
  CHECK(std::abs(ratio - 1.622) <= 1e-3);
  CHECK_THROWS_AS((void)kerr::l_star_physical(1.0, -1.0, 1.0, Complex(0.0, 1.0)), kerr::InapplicableBound);
  CHECK_THROWS_AS((void)kerr::l_star_physical(1.0, 0.0, 1.0, 1.0), kerr::InapplicableBound);
}
