#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "kerr/analytic.hpp"
#include "kerr/error.hpp"
#include "kerr/integrator.hpp"

using kerr::Complex;
using kerr::FieldVector;
using kerr::ProfileSpec;
using kerr::SlabProfile;

namespace {

SlabProfile constant_slab(Complex r, Complex s, double z_max) {
  return {ProfileSpec::constant(r), ProfileSpec::constant(s), z_max};
}

const SlabProfile kSecant = constant_slab(1.0, -1.0, 2.0);
const SlabProfile kLossy = constant_slab({1.0, 0.1}, {-1.0, 0.2}, 10.0);

// Pinned from a rel_tol = 1e-12 reference integration.
constexpr double kLossyZStar = 0.78303390594675193;

}  // namespace

TEST_CASE("helmholtz_rhs") {
  FieldVector y;
  y << 0.0, Complex(0.3, -0.2);
  auto f = kerr::helmholtz_rhs(0.4, y, kSecant);
  CHECK(f[0] == Complex(0.3, -0.2));
  CHECK(f[1] == Complex(0.0, 0.0));

  y << 1.0, 0.0;
  f = kerr::helmholtz_rhs(0.0, y, kSecant);
  CHECK(f[0] == Complex(0.0, 0.0));
  CHECK(f[1] == Complex(0.0, 0.0));

  f = kerr::helmholtz_rhs(0.0, y, constant_slab(2.0, -1.0, 1.0));
  CHECK(f[1] == Complex(-1.0, 0.0));

  y << Complex(NAN, 0.0), 0.0;
  f = kerr::helmholtz_rhs(0.0, y, kSecant);
  CHECK_FALSE(std::isfinite(std::abs(f[1])));
}

TEST_CASE("lemma monitors at a point") {
  const auto m = kerr::lemma_monitors(2.0, 2.0, 1.0, -1.0);
  CHECK(m.u == 2.0);
  CHECK(m.du == 4.0);
  CHECK(m.ddu == 16.0);
  const auto z = kerr::lemma_monitors(0.0, Complex(3.0, 4.0), 1.0, -1.0);
  CHECK(z.u == 0.0);
  CHECK(z.du == 0.0);
  CHECK(z.ddu == 25.0);
}

TEST_CASE("config resolution") {
  const auto r = kerr::resolve({}, 2.0, 3.0);
  CHECK(r.max_step == 2.0 / 50);
  CHECK(r.min_step == 2e-13);
  CHECK(r.blowup_threshold == 3e8);
  CHECK(kerr::resolve({}, 2.0, 0.5).blowup_threshold == 1e8);
  kerr::IntegratorConfig bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS((void)kerr::resolve(bad, 1.0, 1.0), kerr::InvalidInput);
  bad = {};
  bad.min_step = 0.5;
  bad.max_step = 0.1;
  CHECK_THROWS_AS((void)kerr::resolve(bad, 1.0, 1.0), kerr::InvalidInput);
}

TEST_CASE("secant benchmark blows up at pi/4 and follows the exact solution") {
  const auto rep = kerr::integrate(kSecant, {2.0, 2.0});
  REQUIRE(rep.blew_up);
  CHECK(rep.reason == kerr::Termination::ThresholdAndStepCollapse);
  REQUIRE(rep.z_star_estimate);
  CHECK(std::abs(*rep.z_star_estimate - std::numbers::pi / 4) <= 1e-4);
  CHECK(*rep.z_star_estimate >= rep.z_reached);
  CHECK_FALSE(rep.low_confidence);
  REQUIRE(rep.bounds);
  CHECK(*rep.z_star_estimate <= rep.bounds->gamma_quadrature);

  const kerr::analytic::SecSolutionParams exact{};
  double worst = 0.0;
  for (const auto& p : rep.trajectory) {
    if (std::abs(p.phi) > 1e3) continue;
    const auto e = kerr::analytic::sec_solution(exact, p.z);
    worst = std::max(worst, std::abs(p.phi - e.value) / std::abs(e.value));
  }
  CHECK(worst <= 1e3 * rep.config.rel_tol);
}

TEST_CASE("linear oscillator stays bounded") {
  const auto slab = constant_slab(1.0, 0.0, 10.0);
  const auto rep = kerr::integrate(slab, {1.0, 0.0});
  CHECK_FALSE(rep.blew_up);
  CHECK(rep.reason == kerr::Termination::DomainEnd);
  CHECK(rep.z_reached == 10.0);
  CHECK_FALSE(rep.bounds);
  for (const auto& p : rep.trajectory) {
    CHECK(std::abs(p.phi - std::cos(p.z)) <= 10 * rep.config.rel_tol);
    CHECK(std::abs(p.phi) <= 1.0 + 1e-9);
  }
}

TEST_CASE("a large but finite field is not a blow-up") {
  kerr::IntegratorConfig cfg;
  cfg.blowup_threshold = 1.5;
  const auto rep = kerr::integrate(constant_slab(1.0, 0.0, 10.0), {2.0, 0.0}, cfg);
  CHECK_FALSE(rep.blew_up);
  CHECK(rep.reason == kerr::Termination::DomainEnd);
}

TEST_CASE("step budget is reported as inconclusive") {
  kerr::IntegratorConfig cfg;
  cfg.max_steps = 10;
  const auto rep = kerr::integrate(kSecant, {2.0, 2.0}, cfg);
  CHECK_FALSE(rep.blew_up);
  CHECK(rep.reason == kerr::Termination::StepBudget);
  CHECK(rep.stats.accepted + rep.stats.rejected == 10);
}

TEST_CASE("lossy slab blows up before the comparison bound") {
  const auto rep = kerr::integrate(kLossy, {2.0, 2.0});
  REQUIRE(rep.blew_up);
  REQUIRE(rep.bounds);
  CHECK(*rep.z_star_estimate <= rep.bounds->gamma_quadrature);
  CHECK(std::abs(*rep.z_star_estimate - kLossyZStar) <= 1e-6);
}

TEST_CASE("trajectory invariants and Lemma-1 monitors") {
  for (const SlabProfile* slab : {&kSecant, &kLossy}) {
    const auto rep = kerr::integrate(*slab, {2.0, 2.0});
    const auto data = kerr::make_glassey_data(*slab, {2.0, 2.0});
    for (std::size_t i = 0; i < rep.trajectory.size(); ++i) {
      const auto& p = rep.trajectory[i];
      if (i > 0) CHECK(p.z > rep.trajectory[i - 1].z);
      CHECK(p.u() == 0.5 * std::norm(p.phi));
      CHECK(p.du() > 0.0);
      const double h = kerr::h_eval(p.u(), data.a, data.b);
      CHECK(p.ddu >= h - 1e-9 * (1.0 + std::abs(p.ddu)));
    }
  }
}

TEST_CASE("comparison inequality along the secant trajectory") {
  const auto rep = kerr::integrate(kSecant, {2.0, 2.0});
  const auto data = kerr::make_glassey_data(kSecant, {2.0, 2.0});
  const auto& mid = rep.trajectory[rep.trajectory.size() / 2];
  CHECK(kerr::comparison_time(mid.u(), data) >= mid.z);
  for (std::size_t i = 0; i < rep.trajectory.size(); i += 37) {
    const auto& p = rep.trajectory[i];
    CHECK(p.z <= kerr::comparison_time(p.u(), data) + 1e-6);
  }
}

TEST_CASE("tolerance convergence of the blow-up point") {
  kerr::IntegratorConfig cfg;
  const double z1 = *kerr::integrate(kSecant, {2.0, 2.0}, cfg).z_star_estimate;
  cfg.rel_tol /= 2;
  const double z2 = *kerr::integrate(kSecant, {2.0, 2.0}, cfg).z_star_estimate;
  CHECK(std::abs(z1 - z2) <= 5e-5);
}

TEST_CASE("blow-up extrapolation") {
  SUBCASE("exact linear data") {
    std::vector<kerr::TrajectoryPoint> tail;
    for (double z : {0.70, 0.72, 0.74, 0.76}) tail.push_back({z, 1.0 / (0.785398 - z), 0.0, 0.0});
    const auto est = kerr::estimate_blowup_point(tail, 1.0);
    CHECK(est.z_star == doctest::Approx(0.785398).epsilon(1e-12));
    CHECK_FALSE(est.low_confidence);
  }
  SUBCASE("fallback window when few points qualify") {
    std::vector<kerr::TrajectoryPoint> tail;
    for (int i = 0; i < 12; ++i) {
      const double z = 0.1 * i;
      tail.push_back({z, 1.0 / (2.0 - 0.5 * z), 0.0, 0.0});
    }
    const auto est = kerr::estimate_blowup_point(tail, 1e9);
    CHECK(est.z_star == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("zero slope is low confidence") {
    std::vector<kerr::TrajectoryPoint> tail;
    for (double z : {0.1, 0.2, 0.3, 0.4}) tail.push_back({z, 5.0, 0.0, 0.0});
    const auto est = kerr::estimate_blowup_point(tail, 1.0);
    CHECK(est.low_confidence);
    CHECK(est.z_star == 0.4);
  }
  SUBCASE("receding field is low confidence") {
    std::vector<kerr::TrajectoryPoint> tail;
    for (double z : {0.1, 0.2, 0.3, 0.4}) tail.push_back({z, 1.0 / (0.1 + z), 0.0, 0.0});
    const auto est = kerr::estimate_blowup_point(tail, 1.0);
    CHECK(est.low_confidence);
    CHECK(est.z_star == doctest::Approx(0.5));
  }
  SUBCASE("secant tail") {
    const auto rep = kerr::integrate(kSecant, {2.0, 2.0});
    const auto est = kerr::estimate_blowup_point(rep.trajectory, rep.config.blowup_threshold);
    CHECK(std::abs(est.z_star - std::numbers::pi / 4) <= 1e-4);
  }
}

TEST_CASE("monitor identities on a finely sampled secant trajectory") {
  kerr::IntegratorConfig cfg;
  cfg.max_step = 1e-4;
  const auto rep = kerr::integrate(kSecant, {2.0, 2.0}, cfg);
  const auto res = kerr::monitor_identities(rep.trajectory, kSecant, 10.0);
  CHECK(res.points_checked > 1000);
  CHECK(res.du_residual <= 1e-5);
  CHECK(res.ddu_residual <= 1e-5);
  CHECK_THROWS_AS((void)kerr::monitor_identities(std::span(rep.trajectory).first(2), kSecant),
                  kerr::InvalidInput);
}

TEST_CASE("results are bit-identical across concurrent runs") {
  const auto ref = kerr::integrate(kLossy, {2.0, 2.0});
  std::vector<std::future<kerr::BlowupReport>> jobs;
  for (int i = 0; i < 4; ++i)
    jobs.push_back(std::async(std::launch::async, [] { return kerr::integrate(kLossy, {2.0, 2.0}); }));
  for (auto& j : jobs) {
    const auto rep = j.get();
    CHECK(*rep.z_star_estimate == *ref.z_star_estimate);
    CHECK(rep.trajectory.size() == ref.trajectory.size());
    CHECK(rep.trajectory.back().phi == ref.trajectory.back().phi);
  }
}

TEST_CASE("trajectory CSV") {
  const auto rep = kerr::integrate(constant_slab(1.0, 0.0, 1.0), {1.0, 0.0});
  std::ostringstream os;
  kerr::write_trajectory_csv(os, rep.trajectory);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "z,re_phi,im_phi,re_dphi,im_dphi,u,du,ddu");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
  }
  CHECK(rows == rep.trajectory.size());
}

TEST_CASE("non-finite initial data is rejected") {
  CHECK_THROWS_AS((void)kerr::integrate(kSecant, {Complex(INFINITY, 0.0), 1.0}), kerr::InvalidInput);
}
