#include "hvi/vi_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hvi/errors.hpp"
#include "hvi/roots.hpp"

namespace hvi::sim {

namespace {

using std::numbers::pi;

constexpr double kResonanceBand = 1e-8;
constexpr double kGrazeSpeed = 1e-12;
constexpr double kEventTol = 1e-12;

// Crossing of the wall at `wall` (+1/-1) inside [a, b], where q is monotone.
bool crosses(double wall, double qa, double qb) {
  return wall > 0.0 ? (qa < 1.0 && qb >= 1.0) : (qa > -1.0 && qb <= -1.0);
}

struct Event {
  double tau;
  double wall;
};

// Locates the wall crossing inside a monotone sub-interval [a, b].
double refine_impact(const Segment& seg, double wall, double a, double b) {
  auto gap = [&](double t) { return wall * seg.at(t).q - 1.0; };
  double t = roots::bisect(gap, a, b, kEventTol);
  const State s = seg.at(t);
  if (std::abs(s.p) > 1e-6) {
    const double next = t - (s.q - wall) / s.p;
    if (next >= a && next <= b && std::abs(gap(next)) <= std::abs(gap(t))) {
      t = next;
    }
  }
  return t;
}

// First wall contact of `seg` after tau0 and before tau_end, if any.
std::optional<Event> next_impact(const Segment& seg, double tau0,
                                 double tau_end, double step) {
  double a = tau0;
  State sa = seg.at(a);
  while (a < tau_end) {
    const double b = std::min(tau_end, a + step);
    const State sb = seg.at(b);
    // Split at a velocity zero so each piece is monotone in q.
    double lo = a;
    State slo = sa;
    if ((sa.p > 0.0 && sb.p < 0.0) || (sa.p < 0.0 && sb.p > 0.0)) {
      const double te =
          roots::bisect([&](double t) { return seg.at(t).p; }, a, b, 1e-14);
      const State se = seg.at(te);
      for (double wall : {1.0, -1.0}) {
        if (crosses(wall, slo.q, se.q)) {
          return Event{refine_impact(seg, wall, lo, te), wall};
        }
      }
      lo = te;
      slo = se;
    }
    for (double wall : {1.0, -1.0}) {
      if (crosses(wall, slo.q, sb.q)) {
        return Event{refine_impact(seg, wall, lo, b), wall};
      }
    }
    a = b;
    sa = sb;
  }
  return std::nullopt;
}

}  // namespace

void SimConfig::validate() const {
  if (!(std::abs(q0) <= 1.0)) throw DomainError("SimConfig: |q0| must be <= 1");
  if (kappa != 1.0) throw DomainError("SimConfig: only kappa = 1 is supported");
  if (!(Omega > 0.0)) throw DomainError("SimConfig: Omega must be positive");
  if (!(F >= 0.0)) throw DomainError("SimConfig: F must be non-negative");
  if (!(horizon >= 2.0 * pi / Omega)) {
    throw DomainError("SimConfig: horizon shorter than one forcing period");
  }
  if (!(dt_out > 0.0)) throw DomainError("SimConfig: dt_out must be positive");
}

SimConfig normalize(const PhysicalParams& phys) {
  if (!(phys.mass > 0.0 && phys.stiffness > 0.0 && phys.half_gap > 0.0)) {
    throw DomainError("normalize: m, k and d must be positive");
  }
  SimConfig cfg;
  cfg.F = phys.force_amplitude / (phys.stiffness * phys.half_gap);
  cfg.Omega = phys.angular_frequency * std::sqrt(phys.mass / phys.stiffness);
  return cfg;
}

Segment::Segment(double tau0, State start, double F, double Omega)
    : tau0_(tau0),
      F_(F),
      Omega_(Omega),
      gain_(0.0),
      resonant_(std::abs(Omega - 1.0) < kResonanceBand) {
  if (!resonant_) gain_ = F / (1.0 - Omega * Omega);
  A_ = start.q - particular(tau0);
  B_ = start.p - particular_rate(tau0);
}

double Segment::particular(double tau) const {
  if (resonant_) return 0.5 * F_ * tau * std::sin(tau);
  return gain_ * std::cos(Omega_ * tau);
}

double Segment::particular_rate(double tau) const {
  if (resonant_) return 0.5 * F_ * (std::sin(tau) + tau * std::cos(tau));
  return -gain_ * Omega_ * std::sin(Omega_ * tau);
}

State Segment::at(double tau) const {
  const double s = tau - tau0_;
  const double c = std::cos(s);
  const double n = std::sin(s);
  return {A_ * c + B_ * n + particular(tau),
          -A_ * n + B_ * c + particular_rate(tau)};
}

Trajectory simulate(const SimConfig& cfg) {
  cfg.validate();
  Trajectory traj;
  const double step = std::min(0.01, 2.0 * pi / cfg.Omega / 100.0);
  const auto n_out =
      static_cast<std::size_t>(std::floor(cfg.horizon / cfg.dt_out + 1e-9));
  traj.samples.reserve(n_out + 1);

  if (std::abs(cfg.q0) == 1.0 && std::abs(cfg.p0) < kGrazeSpeed) {
    throw NumericError("simulate: degenerate graze at the initial state");
  }
  State start{cfg.q0, cfg.p0};
  // Starting on a wall moving outward is an immediate reflection.
  if (std::abs(cfg.q0) == 1.0 && cfg.q0 * cfg.p0 > 0.0) {
    traj.impacts.push_back({0.0, cfg.q0, cfg.p0, -cfg.kappa * cfg.p0});
    start.p = -cfg.kappa * cfg.p0;
  }

  double tau = 0.0;
  std::size_t k = 0;
  while (true) {
    const Segment seg(tau, start, cfg.F, cfg.Omega);
    double scan_from = tau;
    std::optional<Event> ev;
    State hit{};
    while (true) {
      ev = next_impact(seg, scan_from, cfg.horizon, step);
      if (!ev) break;
      hit = seg.at(ev->tau);
      if (std::abs(hit.p) >= kGrazeSpeed) break;
      // Zero-velocity contact: harmless if the restoring force pulls the
      // particle back inside, otherwise it would stick to the wall.
      const double accel = -hit.q + cfg.F * std::cos(cfg.Omega * ev->tau);
      if (ev->wall * accel >= 0.0) {
        throw NumericError("simulate: degenerate zero-velocity graze at a wall");
      }
      scan_from = ev->tau;
    }
    const double seg_end = ev ? ev->tau : cfg.horizon;
    for (; k <= n_out; ++k) {
      const double t = static_cast<double>(k) * cfg.dt_out;
      if (t > seg_end || (ev && t == seg_end)) break;
      const State s = seg.at(t);
      traj.samples.push_back({t, s.q, s.p, 0.5 * (s.q * s.q + s.p * s.p)});
    }
    if (!ev) break;
    if (static_cast<long>(traj.impacts.size()) >= kMaxImpacts) {
      throw NumericError("simulate: chatter guard tripped");
    }
    const double p_after = -cfg.kappa * hit.p;
    traj.impacts.push_back({ev->tau, ev->wall, hit.p, p_after});
    tau = ev->tau;
    start = {ev->wall, p_after};
  }
  return traj;
}

EnergySummary energy_summary(const Trajectory& traj, double Omega,
                             std::optional<double> xi_threshold) {
  const auto& s = traj.samples;
  if (s.size() < 2) throw DomainError("energy_summary: trajectory too short");
  const double window = 2.0 * pi / Omega;
  const double t0 = s.front().tau;
  if (s.back().tau - t0 < window) {
    throw DomainError("energy_summary: window longer than trajectory");
  }

  EnergySummary out;
  for (const auto& x : s) out.max_E_inst = std::max(out.max_E_inst, x.E);

  // Cumulative trapezoid of the piecewise-linear E(tau).
  std::vector<double> cum(s.size(), 0.0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    cum[i] = cum[i - 1] + 0.5 * (s[i].E + s[i - 1].E) * (s[i].tau - s[i - 1].tau);
  }
  auto integral_to = [&](double t, std::size_t hint) {
    // Largest j <= hint with s[j].tau <= t.
    std::size_t j = hint;
    while (j > 0 && s[j].tau > t) --j;
    const double h = s[j + 1].tau - s[j].tau;
    const double u = t - s[j].tau;
    const double slope = (s[j + 1].E - s[j].E) / h;
    return cum[j] + s[j].E * u + 0.5 * slope * u * u;
  };

  bool have = false;
  std::size_t lag = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double t = s[i].tau;
    if (t - t0 < window - 1e-12) continue;
    const double from = std::max(t0, t - window);
    while (lag + 1 < s.size() && s[lag + 1].tau <= from) ++lag;
    const double lower = from == t0 ? 0.0 : integral_to(from, lag);
    const double mean = (cum[i] - lower) / window;
    if (!have || mean > out.max_xi_windowed) {
      out.max_xi_windowed = mean;
      out.t_of_max = t;
      have = true;
    }
    if (xi_threshold && !out.t_cross && mean >= *xi_threshold) {
      out.t_cross = t;
    }
  }
  out.max_xi_windowed = std::min(out.max_xi_windowed, out.max_E_inst);
  out.crossed = out.t_cross.has_value();
  return out;
}

bool probe_crossing(double sigma, double eps, double f, double xi_tilde,
                    double horizon) {
  SimConfig cfg;
  cfg.F = eps * f;
  cfg.Omega = 1.0 + eps * sigma;
  cfg.horizon = horizon;
  return energy_summary(simulate(cfg), cfg.Omega, xi_tilde).crossed;
}

double numeric_boundary(double sigma, double eps, double xi_tilde, double f_lo,
                        double f_hi, double horizon, double f_tol) {
  if (!(f_lo < f_hi)) throw DomainError("numeric_boundary: need f_lo < f_hi");
  if (probe_crossing(sigma, eps, f_lo, xi_tilde, horizon) ||
      !probe_crossing(sigma, eps, f_hi, xi_tilde, horizon)) {
    throw DomainError("numeric_boundary: invalid initial bracket");
  }
  while (f_hi - f_lo >= f_tol) {
    const double mid = 0.5 * (f_lo + f_hi);
    if (probe_crossing(sigma, eps, mid, xi_tilde, horizon)) {
      f_hi = mid;
    } else {
      f_lo = mid;
    }
  }
  return 0.5 * (f_lo + f_hi);
}

std::optional<double> first_crossing_amplitude(double sigma, double eps,
                                               double xi_tilde, double f_step,
                                               double f_max, double horizon,
                                               double f_tol) {
  if (!(f_step > 0.0) || !(f_max > f_step)) {
    throw DomainError("first_crossing_amplitude: bad scan range");
  }
  double below = 0.0;
  for (int k = 1;; ++k) {
    const double f = k * f_step;
    if (f > f_max) return std::nullopt;
    if (probe_crossing(sigma, eps, f, xi_tilde, horizon)) {
      return numeric_boundary(sigma, eps, xi_tilde, below, f, horizon, f_tol);
    }
    below = f;
  }
}

}  // namespace hvi::sim
