#pragma once

/// \file
/// Transition boundaries in the (sigma, f) forcing plane, post-crossing
/// energies, frequency response and the maximal-transient-energy map.
///
/// Most results reduce to the scalar function
///
///   K(xi; sigma) = 2 (xi - (1 + eps sigma) J(xi)) / (eps a1(xi)),
///
/// which equals f cos(nu) wherever the zero-initial-condition level set of the
/// resonance manifold sits at height xi.

#include <optional>
#include <string>
#include <vector>

namespace hvi::bif {

inline constexpr double kDefaultEps = 0.1;
inline constexpr double kDefaultEnergyCap = 50.0;

/// Threshold energy to be reached. 1/2 marks the type-I (HVI onset) case.
class CriticalEnergy {
 public:
  /// Throws DomainError unless xi_tilde > 0 and finite.
  explicit CriticalEnergy(double xi_tilde);

  double value() const noexcept { return xi_; }
  bool type_one() const noexcept { return xi_ == 0.5; }

 private:
  double xi_;
};

enum class Mechanism { Maximum, Saddle };
const char* to_string(Mechanism m);

/// K(xi; sigma). Requires xi > 0.
double level_function(double xi, double sigma, double eps = kDefaultEps);

/// Critical amplitude for reaching xi_tilde through the maximum mechanism.
/// Throws NotApplicable where the closed form is negative.
double boundary_maximum(double sigma, CriticalEnergy xi_tilde,
                        double eps = kDefaultEps);

/// Critical amplitude through the saddle at (pi, 1/2); identically sigma.
/// Throws DomainError for sigma <= 0.
double boundary_saddle(double sigma, double eps = kDefaultEps);

struct Coexistence {
  double sigma_star;
  double f_star;
};

/// Detuning at which both mechanisms share the same critical amplitude.
/// Requires xi_tilde >= 1/2.
Coexistence coexistence_point(CriticalEnergy xi_tilde, double eps = kDefaultEps);

struct BoundarySample {
  double sigma;
  double f_crit;
  Mechanism mechanism;
};

struct TransitionBoundary {
  CriticalEnergy xi_tilde;
  double eps;
  std::vector<BoundarySample> samples;
  std::optional<Coexistence> coexistence;  // absent below xi_tilde = 1/2
};

/// Active boundary for each sigma: the maximum mechanism up to sigma_star, the
/// saddle mechanism beyond it.
TransitionBoundary transition_boundary(CriticalEnergy xi_tilde,
                                       const std::vector<double>& sigmas,
                                       double eps = kDefaultEps);

/// Energy reached right after crossing the type-I boundary f = |sigma|.
/// The maximum branch needs sigma < 0, the saddle branch sigma > 0 (else
/// DomainError). Throws NumericError if no root lies in (1/2, cap].
double post_crossing_energy(double sigma, double eps, Mechanism branch,
                            double cap = kDefaultEnergyCap);

enum class ResponseBranch { Linear, HviMax, HviSaddle };
const char* to_string(ResponseBranch b);

struct FrequencyResponsePoint {
  double sigma;
  double xi;
  ResponseBranch branch;
  bool at_jump;
};

/// Samples sigma uniformly on [sigma_lo, sigma_hi] (plus sigma = +-f when in
/// range). Linear points are emitted where |sigma| >= f; every root of
/// K(xi; sigma) = f with xi > 1/2 gives an HVI point.
std::vector<FrequencyResponsePoint> frequency_response(
    double f, double eps, double sigma_lo, double sigma_hi, int n_samples,
    double cap = kDefaultEnergyCap);

/// Maximal height of the zero-initial-condition trajectory.
double energy_map(double sigma, double f, double eps = kDefaultEps,
                  double cap = kDefaultEnergyCap);

struct VerifiedEnergy {
  double analytic;
  double level_set;
};

/// energy_map checked against the level-set tracer; throws NumericError if
/// the two disagree by more than `tol`.
VerifiedEnergy energy_map_verified(double sigma, double f,
                                   double eps = kDefaultEps,
                                   double tol = 5e-2, int nu_samples = 256);

}  // namespace hvi::bif
