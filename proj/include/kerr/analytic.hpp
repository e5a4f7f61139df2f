#pragma once

#include <complex>

namespace kerr::analytic {

/// Homogeneous lossless defocusing slab admitting the exact secant
/// blow-up solution E(z) = A e^{i phase} sec[(pi/4)(z/z_star + 1)].
struct SecSolutionParams {
  double eps_l = 1.0;
  double theta = 0.0;
  double sigma = -1.0;
  double k = 1.0;
  double phase = 0.0;

  /// r = eps_l - sin^2 theta.
  [[nodiscard]] double r() const;
  /// Throws InvalidInput unless sigma < 0, k > 0 and r > 0.
  void validate() const;
};

struct SecSample {
  std::complex<double> value;
  std::complex<double> derivative;
};

/// pi / (4 k sqrt(r)).
[[nodiscard]] double z_star(const SecSolutionParams& p);

/// sqrt(2 r / (-sigma)).
[[nodiscard]] double amplitude_A(const SecSolutionParams& p);

/// Field value and exact z-derivative; throws DomainError unless 0 <= z < z_star.
[[nodiscard]] SecSample sec_solution(const SecSolutionParams& p, double z);

/// E'' + k^2 (r + sigma |E|^2) E evaluated with the closed-form second derivative.
[[nodiscard]] std::complex<double> residual(const SecSolutionParams& p, double z);

}  // namespace kerr::analytic
