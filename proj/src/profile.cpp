#include "kerr/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "kerr/error.hpp"

namespace kerr {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_tabulated(const std::vector<double>& z, const std::vector<Complex>& values,
                     const char* what) {
  if (z.size() < 2) throw InvalidInput(std::string(what) + ": need at least 2 abscissae");
  if (z.size() != values.size())
    throw InvalidInput(std::string(what) + ": abscissae and values differ in length");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i]) || !std::isfinite(values[i].real()) ||
        !std::isfinite(values[i].imag()))
      throw InvalidInput(std::string(what) + ": non-finite entry");
    if (i > 0 && !(z[i] > z[i - 1]))
      throw InvalidInput(std::string(what) + ": abscissae must be strictly increasing");
  }
}

Complex interpolate(const std::vector<double>& z, const std::vector<Complex>& v, double x) {
  if (x <= z.front()) return v.front();
  if (x >= z.back()) return v.back();
  const auto it = std::upper_bound(z.begin(), z.end(), x);
  const auto i = static_cast<std::size_t>(it - z.begin());
  const double t = (x - z[i - 1]) / (z[i] - z[i - 1]);
  return v[i - 1] + t * (v[i] - v[i - 1]);
}

Complex horner(const std::vector<Complex>& c, double x) {
  Complex acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <class F>
double golden_max(F&& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

double tabulated_sup(const ProfileSpec& f, const std::vector<double>& z, double z_max) {
  double best = std::max(f(0.0).real(), f(z_max).real());
  for (double zi : z)
    if (zi >= 0.0 && zi <= z_max) best = std::max(best, f(zi).real());
  return best;
}

}  // namespace

ProfileSpec ProfileSpec::constant(Complex value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw InvalidInput("constant profile: non-finite value");
  return ProfileSpec(Constant{value});
}

ProfileSpec ProfileSpec::polynomial(std::vector<Complex> coeffs, double domain_end) {
  if (coeffs.empty()) throw InvalidInput("polynomial profile: no coefficients");
  if (!(domain_end > 0.0) || !std::isfinite(domain_end))
    throw InvalidInput("polynomial profile: domain end must be positive and finite");
  return ProfileSpec(Polynomial{std::move(coeffs), domain_end});
}

ProfileSpec ProfileSpec::piecewise_linear(std::vector<double> z, std::vector<Complex> values) {
  check_tabulated(z, values, "piecewise-linear profile");
  return ProfileSpec(PiecewiseLinear{std::move(z), std::move(values)});
}

ProfileSpec ProfileSpec::sampled_grid(std::vector<double> z, std::vector<Complex> values) {
  check_tabulated(z, values, "sampled-grid profile");
  return ProfileSpec(SampledGrid{std::move(z), std::move(values)});
}

Complex ProfileSpec::operator()(double z) const {
  if (!(z >= 0.0)) throw DomainError("profile evaluated at negative coordinate");
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [z](const Polynomial& p) { return horner(p.coeffs, std::min(z, p.domain_end)); },
          [z](const PiecewiseLinear& p) { return interpolate(p.z, p.values, z); },
          [z](const SampledGrid& p) { return interpolate(p.z, p.values, z); },
      },
      kind_);
}

ProfileSpec ProfileSpec::rescaled(double k, Complex shift) const {
  return std::visit(
      Overloaded{
          [&](const Constant& c) { return constant(c.value + shift); },
          [&](const Polynomial& p) {
            std::vector<Complex> c(p.coeffs.size());
            double scale = 1.0;
            for (std::size_t n = 0; n < c.size(); ++n, scale /= k) c[n] = p.coeffs[n] * scale;
            c[0] += shift;
            return polynomial(std::move(c), p.domain_end * k);
          },
          [&](const PiecewiseLinear& p) {
            std::vector<double> z(p.z);
            std::vector<Complex> v(p.values);
            for (auto& x : z) x *= k;
            for (auto& x : v) x += shift;
            return piecewise_linear(std::move(z), std::move(v));
          },
          [&](const SampledGrid& p) {
            std::vector<double> z(p.z);
            std::vector<Complex> v(p.values);
            for (auto& x : z) x *= k;
            for (auto& x : v) x += shift;
            return sampled_grid(std::move(z), std::move(v));
          },
      },
      kind_);
}

const char* ProfileSpec::kind_name() const {
  return std::visit(Overloaded{
                        [](const Constant&) { return "constant"; },
                        [](const Polynomial&) { return "polynomial"; },
                        [](const PiecewiseLinear&) { return "piecewise-linear"; },
                        [](const SampledGrid&) { return "sampled-grid"; },
                    },
                    kind_);
}

std::vector<double> ProfileSpec::breakpoints() const {
  if (const auto* p = std::get_if<PiecewiseLinear>(&kind_)) return p->z;
  if (const auto* g = std::get_if<SampledGrid>(&kind_)) return g->z;
  return {};
}

void PhysicalParams::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidInput("k must be positive and finite");
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidInput("L must be positive and finite");
  if (!(theta >= 0.0 && theta < std::numbers::pi / 2))
    throw InvalidInput("theta must lie in [0, pi/2)");
}

double sup_real(const ProfileSpec& f, double z_max) {
  if (!(z_max > 0.0)) throw InvalidInput("z_max must be positive");
  return std::visit(
      Overloaded{
          [](const ProfileSpec::Constant& c) { return c.value.real(); },
          [&](const ProfileSpec::Polynomial& p) {
            const double end = std::min(z_max, p.domain_end);
            auto re = [&p](double z) { return horner(p.coeffs, z).real(); };
            std::vector<double> grid(kSupGridPoints);
            for (int i = 0; i < kSupGridPoints; ++i) grid[i] = re(end * i / (kSupGridPoints - 1));
            double best = *std::max_element(grid.begin(), grid.end());
            // Interior grid maxima are refined on their two neighbouring cells.
            const double cell = end / (kSupGridPoints - 1);
            for (int i = 1; i + 1 < kSupGridPoints; ++i)
              if (grid[i] >= grid[i - 1] && grid[i] >= grid[i + 1])
                best = std::max(best, golden_max(re, cell * (i - 1), cell * (i + 1)));
            return best + 1e-9 * (1.0 + std::abs(best));
          },
          [&](const ProfileSpec::PiecewiseLinear& p) { return tabulated_sup(f, p.z, z_max); },
          [&](const ProfileSpec::SampledGrid& p) { return tabulated_sup(f, p.z, z_max); },
      },
      f.kind());
}

std::pair<double, double> sup_bounds(const ProfileSpec& r, const ProfileSpec& s, double z_max) {
  return {sup_real(r, z_max), sup_real(s, z_max)};
}

SlabProfile::SlabProfile(ProfileSpec r_, ProfileSpec s_, double z_max_)
    : r(std::move(r_)), s(std::move(s_)), z_max(z_max_), a(0.0), b(0.0) {
  if (!(z_max > 0.0) || !std::isfinite(z_max))
    throw InvalidInput("z_max must be positive and finite");
  std::tie(a, b) = sup_bounds(r, s, z_max);
}

SlabProfile nondimensionalize(const PhysicalParams& params) {
  params.validate();
  const double sin_theta = std::sin(params.theta);
  return SlabProfile(params.eps_l.rescaled(params.k, -sin_theta * sin_theta),
                     params.sigma.rescaled(params.k, 0.0), params.k * params.L);
}

}  // namespace kerr
