#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "kerr/glassey.hpp"
#include "kerr/profile.hpp"

namespace kerr {

/// (phi, phi') for phi'' + (r + s|phi|^2) phi = 0.
using FieldVector = Eigen::Matrix<Complex, 2, 1>;

/// Solver settings.  Unset fields take defaults that depend on the run:
/// max_step = z_max / 50, blowup_threshold = 1e8 max(1, |c0|),
/// min_step = 1e-13 z_max.
struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::optional<double> max_step;
  std::optional<double> blowup_threshold;
  std::optional<double> min_step;
  std::int64_t max_steps = 1'000'000;
};

/// IntegratorConfig with every default filled in.
struct ResolvedConfig {
  double rel_tol;
  double abs_tol;
  double max_step;
  double blowup_threshold;
  double min_step;
  std::int64_t max_steps;
};

/// Throws InvalidInput for non-positive tolerances or min_step >= max_step.
[[nodiscard]] ResolvedConfig resolve(const IntegratorConfig& config, double z_max, Complex c0);

/// u = |phi|^2/2 and its first two derivatives along a solution.
struct LemmaMonitors {
  double u;
  double du;
  double ddu;
};

/// u' = Re(conj(phi) phi'), u'' = |phi'|^2 - 2 (Re r + 2 Re s u) u.
[[nodiscard]] LemmaMonitors lemma_monitors(Complex phi, Complex dphi, Complex r, Complex s);

/// One accepted step.
struct TrajectoryPoint {
  double z;
  Complex phi;
  Complex dphi;
  double ddu;

  [[nodiscard]] double u() const { return 0.5 * std::norm(phi); }
  [[nodiscard]] double du() const { return (std::conj(phi) * dphi).real(); }
};

using Trajectory = std::vector<TrajectoryPoint>;

enum class Termination {
  ThresholdAndStepCollapse,  // blow-up
  DomainEnd,
  StepBudget,
  StepCollapse,  // step size fell below min_step while |phi| stayed below the threshold
};

[[nodiscard]] const char* to_string(Termination t);

struct SolverStats {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t rhs_evaluations = 0;
};

struct BlowupReport {
  bool blew_up = false;
  std::optional<double> z_star_estimate;
  bool low_confidence = false;
  double z_reached = 0.0;
  Termination reason = Termination::DomainEnd;
  Trajectory trajectory;
  HypothesisReport hypotheses;
  std::optional<BoundResult> bounds;
  SolverStats stats;
  ResolvedConfig config{};
};

/// Right-hand side of the first-order system: (phi', -(r + s|phi|^2) phi).
/// Non-finite input yields non-finite output.
[[nodiscard]] FieldVector helmholtz_rhs(double z, const FieldVector& y, const SlabProfile& profile);

/// Dormand-Prince 5(4) with PI step control from zeta = 0.  Blow-up is
/// declared when |phi| >= blowup_threshold and the step size drops below
/// min_step; the blow-up point is then extrapolated from the trajectory tail.
[[nodiscard]] BlowupReport integrate(const SlabProfile& profile, const InitialConditions& ic,
                                     const IntegratorConfig& config = {});

struct BlowupEstimate {
  double z_star;
  bool low_confidence;
};

/// Fits 1/|phi| linearly over the trailing points with |phi| >= 0.01 threshold
/// (falling back to the last 8 points when fewer than 4 qualify) and returns the root.
[[nodiscard]] BlowupEstimate estimate_blowup_point(
    std::span<const TrajectoryPoint> trajectory,
    double threshold = std::numeric_limits<double>::infinity());

struct MonitorResiduals {
  double du_residual;   // max |D u - u'| / max(1, |u'|)
  double ddu_residual;  // max |D u' - u''| / max(1, |u''|)
  std::size_t points_checked;
};

/// Compares three-point finite differences of u and u' at interior points
/// against u' and u'' evaluated from the profile.  Only points (and their
/// neighbours) with |phi| <= max_abs_phi take part.
[[nodiscard]] MonitorResiduals monitor_identities(
    std::span<const TrajectoryPoint> trajectory, const SlabProfile& profile,
    double max_abs_phi = std::numeric_limits<double>::infinity());

/// Header z,re_phi,im_phi,re_dphi,im_dphi,u,du,ddu and one row per step.
void write_trajectory_csv(std::ostream& os, std::span<const TrajectoryPoint> trajectory);

}  // namespace kerr
