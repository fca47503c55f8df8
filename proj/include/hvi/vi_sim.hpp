#pragma once

/// \file
/// Event-driven simulation of the forced impact oscillator
///
///   q'' + q = F cos(Omega tau),  |q| <= 1,  p -> -kappa p at |q| = 1,
///
/// propagated in closed form between impacts.

#include <optional>
#include <vector>

namespace hvi::sim {

struct SimConfig {
  double F = 0.0;
  double Omega = 1.0;
  double kappa = 1.0;
  double q0 = 0.0;
  double p0 = 0.0;
  double horizon = 500.0;
  double dt_out = 0.01;

  /// Throws DomainError if |q0| > 1, kappa != 1, Omega <= 0, horizon shorter
  /// than one forcing period, or dt_out <= 0.
  void validate() const;
};

struct PhysicalParams {
  double mass;
  double stiffness;
  double half_gap;
  double force_amplitude;
  double angular_frequency;
};

/// F = F_dim / (k d), Omega = omega_dim sqrt(m / k).
SimConfig normalize(const PhysicalParams& phys);

struct State {
  double q;
  double p;
};

/// Exact solution of q'' + q = F cos(Omega tau) from (tau0, q0, p0).
class Segment {
 public:
  Segment(double tau0, State start, double F, double Omega);

  State at(double tau) const;
  double start_time() const noexcept { return tau0_; }

 private:
  double particular(double tau) const;
  double particular_rate(double tau) const;

  double tau0_;
  double F_;
  double Omega_;
  double gain_;  // F / (1 - Omega^2); unused when resonant
  bool resonant_;
  double A_;
  double B_;
};

struct Sample {
  double tau;
  double q;
  double p;
  double E;
};

struct Impact {
  double tau;
  double wall;      // +1 or -1
  double p_before;
  double p_after;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<Impact> impacts;
};

inline constexpr long kMaxImpacts = 10'000'000;

/// Throws NumericError on chatter (more than kMaxImpacts impacts) or on a
/// zero-velocity graze at a wall.
Trajectory simulate(const SimConfig& cfg);

struct EnergySummary {
  double max_E_inst = 0.0;
  double max_xi_windowed = 0.0;
  double t_of_max = 0.0;
  bool crossed = false;
  std::optional<double> t_cross;
};

/// Sliding (trailing) mean of E over one forcing period 2 pi / Omega,
/// trapezoidal on the sampled trajectory. Throws DomainError when the
/// trajectory is shorter than one window.
EnergySummary energy_summary(const Trajectory& traj, double Omega,
                             std::optional<double> xi_threshold = std::nullopt);

/// Bisects on the scaled forcing amplitude f (F = eps f, Omega = 1 + eps sigma,
/// rest start) until the bracket is narrower than `f_tol`. Throws DomainError
/// if the initial bracket does not straddle the threshold crossing.
double numeric_boundary(double sigma, double eps, double xi_tilde, double f_lo,
                        double f_hi, double horizon = 500.0,
                        double f_tol = 1e-3);

/// Whether a rest-start run at (sigma, f) reaches xi_tilde (windowed energy).
bool probe_crossing(double sigma, double eps, double f, double xi_tilde,
                    double horizon = 500.0);

/// Raises f from `f_step` in steps of `f_step` until a probe crosses, then
/// refines that bracket with numeric_boundary. Returns nullopt if nothing
/// crosses up to `f_max`.
std::optional<double> first_crossing_amplitude(double sigma, double eps,
                                               double xi_tilde, double f_step,
                                               double f_max,
                                               double horizon = 500.0,
                                               double f_tol = 1e-3);

}  // namespace hvi::sim
