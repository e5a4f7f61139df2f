#include "kerr/analytic.hpp"

#include <cmath>
#include <numbers>

#include "kerr/error.hpp"

namespace kerr::analytic {
namespace {

struct Trig {
  double sec;
  double tan;
  double omega;  // d(argument)/dz
};

Trig trig_at(const SecSolutionParams& p, double z) {
  const double zs = z_star(p);
  if (!(z >= 0.0) || !(z < zs)) throw DomainError("secant solution evaluated outside [0, z_star)");
  const double omega = std::numbers::pi / (4.0 * zs);
  const double x = omega * (z + zs);
  const double c = std::cos(x);
  return {1.0 / c, std::sin(x) / c, omega};
}

}  // namespace

double SecSolutionParams::r() const {
  const double st = std::sin(theta);
  return eps_l - st * st;
}

void SecSolutionParams::validate() const {
  if (!(sigma < 0.0)) throw InvalidInput("secant solution requires sigma < 0");
  if (!(k > 0.0)) throw InvalidInput("secant solution requires k > 0");
  if (!(r() > 0.0)) throw InvalidInput("secant solution requires eps_l > sin^2 theta");
}

double z_star(const SecSolutionParams& p) {
  p.validate();
  return std::numbers::pi / (4.0 * p.k * std::sqrt(p.r()));
}

double amplitude_A(const SecSolutionParams& p) {
  p.validate();
  return std::sqrt(2.0 * p.r() / -p.sigma);
}

SecSample sec_solution(const SecSolutionParams& p, double z) {
  const Trig t = trig_at(p, z);
  const std::complex<double> pre = amplitude_A(p) * std::polar(1.0, p.phase);
  return {pre * t.sec, pre * t.omega * t.sec * t.tan};
}

std::complex<double> residual(const SecSolutionParams& p, double z) {
  const Trig t = trig_at(p, z);
  const std::complex<double> pre = amplitude_A(p) * std::polar(1.0, p.phase);
  // (sec)'' = omega^2 sec (tan^2 + sec^2)
  const std::complex<double> e = pre * t.sec;
  const std::complex<double> e2 = pre * t.omega * t.omega * t.sec * (t.tan * t.tan + t.sec * t.sec);
  return e2 + p.k * p.k * (p.r() + p.sigma * std::norm(e)) * e;
}

}  // namespace kerr::analytic
