#pragma once

/// \file
/// Slow-flow conservation law on the phase cylinder
///
///   C(nu, xi) = xi - (eps f / 2) a1(xi) cos(nu) - (1 + eps sigma) J(xi),
///
/// its zero-initial-condition level set (the limiting phase trajectory) and
/// its stationary points on the lines nu = 0 and nu = pi.

#include <vector>

#include "hvi/aa_core.hpp"

namespace hvi::rm {

inline constexpr double kDefaultEps = 0.1;
inline constexpr double kDefaultStationaryWindow = 4.0;

/// Forcing in the scaled coordinates F = eps f, Omega = 1 + eps sigma.
class ScaledForcing {
 public:
  /// Throws DomainError unless eps > 0 and f >= 0.
  ScaledForcing(double f, double sigma, double eps = kDefaultEps);

  double eps() const noexcept { return eps_; }
  double f() const noexcept { return f_; }
  double sigma() const noexcept { return sigma_; }
  double F() const noexcept { return eps_ * f_; }
  double Omega() const noexcept { return 1.0 + eps_ * sigma_; }

 private:
  double f_;
  double sigma_;
  double eps_;
};

/// A point on the phase cylinder; nu is wrapped into [0, 2 pi).
struct PhasePoint {
  PhasePoint(double nu, double xi);
  double nu;
  double xi;
};

double manifold_value(const PhasePoint& p, const ScaledForcing& forcing);

// Partial derivatives of C. The xi-derivatives are one-sided at xi = 1/2
// (linear side for Side::Left).
double dC_dnu(const PhasePoint& p, const ScaledForcing& forcing);
double dC_dxi(const PhasePoint& p, const ScaledForcing& forcing,
              aa::Side side = aa::Side::Right);
double d2C_dnu2(const PhasePoint& p, const ScaledForcing& forcing);
double d2C_dxi2(const PhasePoint& p, const ScaledForcing& forcing);

struct LPTContour {
  std::vector<PhasePoint> points;  // ordered by nu column, then xi
  double max_xi = 0.0;
  double nu_at_max = 0.0;
  bool passes_saddle = false;
};

/// Traces the C = 0 component attached to the bottom circle xi -> 0+ by
/// column-wise root solving in xi on `nu_samples` columns (rounded up to an
/// even count so that nu = 0 and nu = pi are columns) plus connectivity across
/// neighbouring columns. Throws WindowEscape if the component is not closed
/// below `xi_max`.
LPTContour lpt_contour(const ScaledForcing& forcing, int nu_samples = 256,
                       double xi_max = 4.0);

enum class StationaryKind { Saddle, Minimum, Maximum };

const char* to_string(StationaryKind kind);

struct StationaryPoint {
  double nu0;
  double xi0;
  StationaryKind kind;
  bool degenerate;  // second xi-partial (nearly) zero, or the xi = 1/2 kink
};

struct Classification {
  StationaryKind kind;
  bool degenerate;
};

/// Signs of the pure second partials: equal signs give an extremum, opposite
/// signs a saddle. The kink point xi = 1/2 on nu = pi is a degenerate saddle.
Classification classify_stationary(double nu0, double xi0,
                                   const ScaledForcing& forcing);

/// All roots of dC/dxi on nu = 0 and nu = pi for xi in (0, xi_window), plus
/// the degenerate saddle at (pi, 1/2). Tangential (double) roots are found by
/// refining near-zero local minima of |dC/dxi|.
std::vector<StationaryPoint> stationary_points(
    const ScaledForcing& forcing,
    double xi_window = kDefaultStationaryWindow);

/// Detuning for which a stationary point at (pi, xi0) lies on the LPT.
/// Throws NumericError where the denominator vanishes (vertical asymptote of
/// the locus).
double sigma_of_stationary(double xi0, double eps = kDefaultEps);

/// Denominator a1 J' - a1' J of sigma_of_stationary.
double stationary_denominator(double xi0);

/// The forcing amplitude that places the stationary point (pi, xi0) on the
/// LPT at detuning sigma: f = 2((1 + eps sigma) J - xi) / (eps a1).
double forcing_on_stationary(double xi0, double sigma, double eps = kDefaultEps);

}  // namespace hvi::rm
