#pragma once

/// \file
/// Action-angle quantities of the unforced oscillator in the truncated
/// quadratic well (walls at |q| = 1), parameterised by the averaged energy xi.
///
/// Linear regime: xi < 1/2 (J = xi, omega = 1). Vibro-impact regime: xi >= 1/2.

#include <limits>

namespace hvi::aa {

inline constexpr double kTransitionEnergy = 0.5;
inline constexpr double kWallPotential = std::numeric_limits<double>::infinity();

enum class Regime { Linear, VibroImpact };

/// Non-negative normalized (averaged) energy.
class AveragedEnergy {
 public:
  /// Throws DomainError when xi < 0 or is not finite.
  explicit AveragedEnergy(double xi);

  double value() const noexcept { return xi_; }
  Regime regime() const noexcept {
    return xi_ < kTransitionEnergy ? Regime::Linear : Regime::VibroImpact;
  }

 private:
  double xi_;
};

/// One-sided selection for derivatives at the xi = 1/2 kink.
enum class Side { Left, Right };

/// The action-angle bundle at a single energy level.
struct AAQuantities {
  double xi;
  double phi;
  double J;
  double omega;
  double a1;
  double dJ_dxi;
  double da1_dxi;  // right-sided at xi = 1/2 (+inf there)
};

double phi(double xi);
double averaged_action(double xi);
double frequency(double xi);
double a1(double xi);

/// dJ/dxi = 1/omega; continuous everywhere.
double d_averaged_action(double xi);
/// d^2J/dxi^2; zero in the linear regime, -inf just above xi = 1/2.
double d2_averaged_action(double xi);

/// da1/dxi. Throws DomainError at exactly xi = 1/2 (use the Side overload).
double d_a1(double xi);
double d_a1(double xi, Side side);
/// d^2 a1/dxi^2 away from xi = 1/2.
double d2_a1(double xi);

AAQuantities evaluate(double xi);

/// Displacement q = sqrt(2 xi) sin(theta / omega(xi)).
double q_of_theta(double xi, double theta);

/// q^2/2 inside the walls, kWallPotential for |q| > 1.
double potential(double q);

// --- generalized basis functions -------------------------------------------

struct BasisSample {
  double tau;
  double tau_bar;
  int e_bar;  // -1, 0, +1
  double g;
  double g_prime;          // exact dg/dtau of g
  double g_prime_printed;  // beta cos(beta tau_bar) / sin(beta) * e_bar
  double beta;
};

/// Triangle wave (2/pi) asin(sin tau).
double tau_bar(double tau);
/// sgn(cos tau).
int e_bar(double tau);

/// Solves E = (1/2) (beta / sin beta)^2 for beta in [0, pi/2].
/// Throws DomainError outside [1/2, pi^2/8].
double beta_of_energy(double energy);

BasisSample basis_g(double tau, double beta);

struct FourierCoefficient {
  double quadrature;  // (1/pi) int_{-pi}^{pi} g sin(n tau) dtau
  double printed;     // 4 beta cot(pi/(2 beta)) sin(pi n/2) / (pi (beta^2 n^2 - 1))
  double discrepancy;
};

/// n >= 1, beta in (0, pi/2]. The quadrature value is the authoritative one.
FourierCoefficient fourier_bn(int n, double beta);

}  // namespace hvi::aa
