#pragma once

namespace kerr::special {

/// Euler Gamma function for real x (not a non-positive integer).  Lanczos
/// approximation with reflection for x < 1/2; relative error near 1e-15.
[[nodiscard]] double gamma(double x);

}  // namespace kerr::special
