#include "kerr/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "kerr/error.hpp"

namespace kerr::special {
namespace {

// Lanczos coefficients for g = 7, n = 9.
constexpr double kG = 7.0;
constexpr std::array<double, 9> kCoeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma: pole at non-positive integer");
  if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  x -= 1.0;
  double sum = kCoeffs[0];
  for (std::size_t i = 1; i < kCoeffs.size(); ++i) sum += kCoeffs[i] / (x + static_cast<double>(i));
  const double t = x + kG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * sum;
}

}  // namespace kerr::special
