#include "kerr/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "kerr/error.hpp"

namespace kerr {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants.
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

bool finite(const FieldVector& y) {
  return std::isfinite(y[0].real()) && std::isfinite(y[0].imag()) &&
         std::isfinite(y[1].real()) && std::isfinite(y[1].imag());
}

double error_norm(const FieldVector& err, const FieldVector& y0, const FieldVector& y1,
                  const ResolvedConfig& cfg) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = std::abs(err[i]) / sc;
    sum += q * q;
  }
  return std::sqrt(0.5 * sum);
}

double rms(const FieldVector& v, const FieldVector& scale_of, const ResolvedConfig& cfg) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double q = std::abs(v[i]) / (cfg.abs_tol + cfg.rel_tol * std::abs(scale_of[i]));
    sum += q * q;
  }
  return std::sqrt(0.5 * sum);
}

TrajectoryPoint make_point(double z, const FieldVector& y, const SlabProfile& profile) {
  const LemmaMonitors m = lemma_monitors(y[0], y[1], profile.eval_r(z), profile.eval_s(z));
  return {z, y[0], y[1], m.ddu};
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ThresholdAndStepCollapse:
      return "threshold-and-step-collapse";
    case Termination::DomainEnd:
      return "domain-end";
    case Termination::StepBudget:
      return "step-budget";
    case Termination::StepCollapse:
      return "step-collapse";
  }
  return "unknown";
}

ResolvedConfig resolve(const IntegratorConfig& config, double z_max, Complex c0) {
  ResolvedConfig out{config.rel_tol,
                     config.abs_tol,
                     config.max_step.value_or(z_max / 50.0),
                     config.blowup_threshold.value_or(1e8 * std::max(1.0, std::abs(c0))),
                     config.min_step.value_or(1e-13 * z_max),
                     config.max_steps};
  if (!(out.rel_tol > 0.0) || !(out.abs_tol > 0.0))
    throw InvalidInput("integrator tolerances must be positive");
  if (!(out.min_step > 0.0) || !(out.min_step < out.max_step))
    throw InvalidInput("integrator requires 0 < min_step < max_step");
  if (!(out.blowup_threshold > 0.0)) throw InvalidInput("blow-up threshold must be positive");
  if (out.max_steps <= 0) throw InvalidInput("step budget must be positive");
  return out;
}

LemmaMonitors lemma_monitors(Complex phi, Complex dphi, Complex r, Complex s) {
  const double u = 0.5 * std::norm(phi);
  const double du = (std::conj(phi) * dphi).real();
  const double ddu = std::norm(dphi) - 2.0 * (r.real() + 2.0 * s.real() * u) * u;
  return {u, du, ddu};
}

FieldVector helmholtz_rhs(double z, const FieldVector& y, const SlabProfile& profile) {
  FieldVector out;
  out[0] = y[1];
  out[1] = -(profile.eval_r(z) + profile.eval_s(z) * std::norm(y[0])) * y[0];
  return out;
}

BlowupReport integrate(const SlabProfile& profile, const InitialConditions& ic,
                       const IntegratorConfig& config) {
  BlowupReport rep;
  rep.config = resolve(config, profile.z_max, ic.c0);
  const ResolvedConfig& cfg = rep.config;
  if (!std::isfinite(ic.c0.real()) || !std::isfinite(ic.c0.imag()) ||
      !std::isfinite(ic.c1.real()) || !std::isfinite(ic.c1.imag()))
    throw InvalidInput("initial conditions must be finite");

  rep.hypotheses = check_hypotheses(profile, ic);
  if (rep.hypotheses.passed()) rep.bounds = compute_bounds(make_glassey_data(profile, ic));

  auto rhs = [&](double z, const FieldVector& y) {
    ++rep.stats.rhs_evaluations;
    return helmholtz_rhs(z, y, profile);
  };

  double z = 0.0;
  FieldVector y;
  y << ic.c0, ic.c1;
  rep.trajectory.push_back(make_point(z, y, profile));
  FieldVector k1 = rhs(z, y);

  // Initial step from the size of the solution and its derivative.
  double h;
  {
    const double d0 = rms(y, y, cfg);
    const double d1 = rms(k1, y, cfg);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::clamp(h, cfg.min_step, cfg.max_step);
  }

  double err_old = 1e-4;
  bool last_rejected = false;
  std::int64_t attempts = 0;

  auto finish_blowup = [&]() {
    rep.blew_up = true;
    rep.reason = Termination::ThresholdAndStepCollapse;
    const BlowupEstimate est = estimate_blowup_point(rep.trajectory, cfg.blowup_threshold);
    rep.z_star_estimate = est.z_star;
    rep.low_confidence = est.low_confidence;
  };

  while (true) {
    if (z >= profile.z_max) {
      rep.reason = Termination::DomainEnd;
      break;
    }
    if (attempts >= cfg.max_steps) {
      rep.reason = Termination::StepBudget;
      break;
    }
    ++attempts;

    h = std::min(h, cfg.max_step);
    const bool hits_end = z + h >= profile.z_max;
    if (hits_end) h = profile.z_max - z;

    const FieldVector k2 = rhs(z + c2 * h, y + h * (a21 * k1));
    const FieldVector k3 = rhs(z + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const FieldVector k4 = rhs(z + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const FieldVector k5 = rhs(z + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double z_next = hits_end ? profile.z_max : z + h;
    const FieldVector k6 =
        rhs(z_next, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const FieldVector y_next = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const FieldVector k7 = rhs(z_next, y_next);
    const FieldVector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = std::numeric_limits<double>::infinity();
    if (finite(y_next) && finite(k7)) err_norm = error_norm(err, y, y_next, cfg);
    if (!std::isfinite(err_norm)) err_norm = std::numeric_limits<double>::infinity();

    if (err_norm <= 1.0) {
      double factor = kSafety * std::pow(err_norm, -kAlpha) * std::pow(err_old, kBeta);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      if (last_rejected) factor = std::min(factor, 1.0);
      err_old = std::max(err_norm, 1e-4);
      last_rejected = false;

      z = z_next;
      y = y_next;
      k1 = k7;
      ++rep.stats.accepted;
      rep.trajectory.push_back(make_point(z, y, profile));

      const double h_next = h * factor;
      if (std::abs(y[0]) >= cfg.blowup_threshold && h_next < cfg.min_step) {
        finish_blowup();
        break;
      }
      // A truncated final step says nothing about the natural step size.
      if (!hits_end) h = h_next;
    } else {
      ++rep.stats.rejected;
      last_rejected = true;
      const double factor =
          std::isfinite(err_norm) ? std::max(kMinFactor, kSafety * std::pow(err_norm, -0.2))
                                  : kMinFactor;
      h *= factor;
      if (h < cfg.min_step) {
        if (std::abs(y[0]) >= cfg.blowup_threshold) {
          finish_blowup();
        } else {
          rep.reason = Termination::StepCollapse;
        }
        break;
      }
    }
  }
  rep.z_reached = z;
  return rep;
}

BlowupEstimate estimate_blowup_point(std::span<const TrajectoryPoint> trajectory, double threshold) {
  constexpr std::size_t kMinQualifying = 4;
  constexpr std::size_t kFallback = 8;
  constexpr std::size_t kMaxWindow = 16;
  if (trajectory.empty()) throw InvalidInput("blow-up extrapolation needs a non-empty trajectory");

  std::size_t qualifying = 0;
  for (auto it = trajectory.rbegin(); it != trajectory.rend(); ++it) {
    if (!(std::abs(it->phi) >= 0.01 * threshold)) break;
    ++qualifying;
  }
  std::size_t window = qualifying >= kMinQualifying ? std::min(qualifying, kMaxWindow)
                                                    : std::min(trajectory.size(), kFallback);
  const auto tail = trajectory.last(window);
  const TrajectoryPoint& last = tail.back();
  if (window < 2) return {last.z, true};

  // Least squares w = m (z - z_mean) + w_mean with w = 1/|phi|.
  double z_mean = 0.0, w_mean = 0.0;
  for (const auto& p : tail) {
    z_mean += p.z;
    w_mean += 1.0 / std::abs(p.phi);
  }
  z_mean /= static_cast<double>(window);
  w_mean /= static_cast<double>(window);
  double szz = 0.0, szw = 0.0;
  for (const auto& p : tail) {
    const double dz = p.z - z_mean;
    szz += dz * dz;
    szw += dz * (1.0 / std::abs(p.phi) - w_mean);
  }
  const double slope = szz > 0.0 ? szw / szz : 0.0;
  if (!(std::abs(slope) > 0.0) || !std::isfinite(slope) ||
      std::abs(slope) * std::sqrt(szz) <= 1e-14 * std::abs(w_mean))
    return {last.z, true};

  const double root = z_mean - w_mean / slope;
  if (!(root > last.z) || !std::isfinite(root)) {
    const double step = tail.size() >= 2 ? last.z - tail[tail.size() - 2].z : 0.0;
    return {last.z + step, true};
  }
  return {root, false};
}

MonitorResiduals monitor_identities(std::span<const TrajectoryPoint> trajectory,
                                    const SlabProfile& profile, double max_abs_phi) {
  if (trajectory.size() < 3) throw InvalidInput("monitor check needs at least 3 points");
  MonitorResiduals res{0.0, 0.0, 0};
  std::vector<LemmaMonitors> m;
  m.reserve(trajectory.size());
  for (const auto& p : trajectory)
    m.push_back(lemma_monitors(p.phi, p.dphi, profile.eval_r(p.z), profile.eval_s(p.z)));

  for (std::size_t i = 1; i + 1 < trajectory.size(); ++i) {
    if (std::abs(trajectory[i - 1].phi) > max_abs_phi || std::abs(trajectory[i].phi) > max_abs_phi ||
        std::abs(trajectory[i + 1].phi) > max_abs_phi)
      continue;
    const double hm = trajectory[i].z - trajectory[i - 1].z;
    const double hp = trajectory[i + 1].z - trajectory[i].z;
    auto derivative = [&](double fm, double f0, double fp) {
      return (hm * hm * fp - hp * hp * fm + (hp * hp - hm * hm) * f0) / (hm * hp * (hm + hp));
    };
    const double du_fd = derivative(m[i - 1].u, m[i].u, m[i + 1].u);
    const double ddu_fd = derivative(m[i - 1].du, m[i].du, m[i + 1].du);
    res.du_residual =
        std::max(res.du_residual, std::abs(du_fd - m[i].du) / std::max(1.0, std::abs(m[i].du)));
    res.ddu_residual = std::max(res.ddu_residual,
                                std::abs(ddu_fd - m[i].ddu) / std::max(1.0, std::abs(m[i].ddu)));
    ++res.points_checked;
  }
  return res;
}

void write_trajectory_csv(std::ostream& os, std::span<const TrajectoryPoint> trajectory) {
  os << "z,re_phi,im_phi,re_dphi,im_dphi,u,du,ddu\n";
  char line[512];
  for (const auto& p : trajectory) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.z,
                  p.phi.real(), p.phi.imag(), p.dphi.real(), p.dphi.imag(), p.u(), p.du(), p.ddu);
    os << line;
  }
}

}  // namespace kerr
