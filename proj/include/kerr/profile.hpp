#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

namespace kerr {

using Complex = std::complex<double>;

/// Coefficient profile on [0, z_max], continued by its endpoint values
/// outside the sampled range.
class ProfileSpec {
 public:
  struct Constant {
    Complex value;
  };
  /// c[0] + c[1] z + c[2] z^2 + ...
  struct Polynomial {
    std::vector<Complex> coeffs;
    double domain_end;  // constant continuation beyond this point
  };
  /// Linear interpolation through (z_i, v_i); z_i strictly increasing.
  struct PiecewiseLinear {
    std::vector<double> z;
    std::vector<Complex> values;
  };
  /// Same evaluation rule as PiecewiseLinear; kept distinct because it is
  /// usually a uniform resampling of measured data.
  struct SampledGrid {
    std::vector<double> z;
    std::vector<Complex> values;
  };
  using Kind = std::variant<Constant, Polynomial, PiecewiseLinear, SampledGrid>;

  static ProfileSpec constant(Complex value);
  static ProfileSpec polynomial(std::vector<Complex> coeffs, double domain_end);
  static ProfileSpec piecewise_linear(std::vector<double> z, std::vector<Complex> values);
  static ProfileSpec sampled_grid(std::vector<double> z, std::vector<Complex> values);

  /// Evaluates at z >= 0.  Throws DomainError for z < 0.
  [[nodiscard]] Complex operator()(double z) const;

  /// Returns p with p(z) = f(z / k) + shift.
  [[nodiscard]] ProfileSpec rescaled(double k, Complex shift) const;

  [[nodiscard]] const Kind& kind() const { return kind_; }
  [[nodiscard]] const char* kind_name() const;

  /// Breakpoints (for piecewise kinds) or empty.
  [[nodiscard]] std::vector<double> breakpoints() const;

 private:
  explicit ProfileSpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Physical slab: thickness L, wavenumber k, incidence angle theta, and the
/// relative linear permittivity and Kerr coefficient profiles over z in [0, L].
struct PhysicalParams {
  double k = 1.0;
  double theta = 0.0;
  double L = 1.0;
  ProfileSpec eps_l = ProfileSpec::constant(1.0);
  ProfileSpec sigma = ProfileSpec::constant(-1.0);

  void validate() const;
};

/// Nondimensional coefficients r, s of phi'' + (r + s|phi|^2) phi = 0 on
/// [0, z_max], with a >= sup Re r and b >= sup Re s.
struct SlabProfile {
  ProfileSpec r;
  ProfileSpec s;
  double z_max;
  double a;
  double b;

  /// Computes a and b with sup_bounds.
  SlabProfile(ProfileSpec r, ProfileSpec s, double z_max);

  [[nodiscard]] Complex eval_r(double z) const { return r(z); }
  [[nodiscard]] Complex eval_s(double z) const { return s(z); }
};

/// Number of uniform grid points used for polynomial suprema.
inline constexpr int kSupGridPoints = 10000;

/// Upper bound on Re f over [0, z_max]; exact for constant and piecewise
/// kinds.  For polynomials: maximum over a uniform grid, with each interior
/// grid maximum refined by golden-section search, plus 1e-9 (1 + |max|).
[[nodiscard]] double sup_real(const ProfileSpec& f, double z_max);

[[nodiscard]] std::pair<double, double> sup_bounds(const ProfileSpec& r, const ProfileSpec& s,
                                                   double z_max);

/// r(zeta) = eps_l(zeta / k) - sin^2 theta, s(zeta) = sigma(zeta / k), z_max = k L.
[[nodiscard]] SlabProfile nondimensionalize(const PhysicalParams& params);

}  // namespace kerr
