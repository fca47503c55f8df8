#include "hvi/aa_core.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hvi/errors.hpp"
#include "hvi/roots.hpp"

namespace hvi::aa {

namespace {

using std::numbers::pi;

void require_energy(double xi, const char* what) {
  if (!(xi >= 0.0) || !std::isfinite(xi)) {
    throw DomainError(std::string(what) + ": averaged energy must be >= 0");
  }
}

// arctan(1/phi), defined as pi/2 at phi = 0.
double half_angle(double phi_value) {
  return phi_value == 0.0 ? 0.5 * pi : std::atan(1.0 / phi_value);
}

// Taylor coefficients of G(1 + d) = 2 w^2 sin(pi/w) / (pi (w^2 - 1)), w = 1 + d.
constexpr std::array<double, 9> kSeries = {
    1.0,
    0.5,
    -1.8949340668482264365,
    2.5924011002723396547,
    -2.1293921917010426202,
    0.27440288684868681566,
    2.8975672173054678038,
    -6.9675146740276228333,
    11.179830135402281230,
};
constexpr double kSeriesRadius = 1e-2;

struct ShapeFactor {
  double g;
  double dg;
  double d2g;
};

// G(omega) with first and second derivatives; the removable singularity at
// omega = 1 goes through the series.
ShapeFactor shape_factor(double w) {
  const double d = w - 1.0;
  if (std::abs(d) < kSeriesRadius) {
    ShapeFactor out{0.0, 0.0, 0.0};
    for (int k = static_cast<int>(kSeries.size()) - 1; k >= 0; --k) {
      out.g = out.g * d + kSeries[k];
    }
    for (int k = static_cast<int>(kSeries.size()) - 1; k >= 1; --k) {
      out.dg = out.dg * d + k * kSeries[k];
    }
    for (int k = static_cast<int>(kSeries.size()) - 1; k >= 2; --k) {
      out.d2g = out.d2g * d + k * (k - 1) * kSeries[k];
    }
    return out;
  }
  const double s = std::sin(pi / w);
  const double c = std::cos(pi / w);
  const double w2 = w * w;
  const double den = w2 - 1.0;
  const double num = w2 * s;
  const double dnum = 2.0 * w * s - pi * c;
  const double d2num = 2.0 * s - 2.0 * pi * c / w - pi * pi * s / w2;
  const double dden = 2.0 * w;
  const double k = 2.0 / pi;
  ShapeFactor out;
  out.g = k * num / den;
  out.dg = k * (dnum * den - num * dden) / (den * den);
  // (N/D)'' = N''/D - 2N'D'/D^2 - N D''/D^2 + 2N D'^2/D^3
  out.d2g = k * (d2num / den - 2.0 * dnum * dden / (den * den) -
                 2.0 * num / (den * den) +
                 2.0 * num * dden * dden / (den * den * den));
  return out;
}

struct FrequencyDerivs {
  double omega;
  double d1;
  double d2;
};

// omega(xi) and its derivatives for xi > 1/2.
FrequencyDerivs frequency_derivs(double xi) {
  const double p = phi(xi);
  const double a = half_angle(p);
  const double w = xi * p * a * a;
  const double dw = p * a * a + xi * a * a / p - a;
  return {0.5 * pi / a, pi / (4.0 * w), -pi * dw / (4.0 * w * w)};
}

}  // namespace

AveragedEnergy::AveragedEnergy(double xi) : xi_(xi) {
  require_energy(xi, "AveragedEnergy");
}

double phi(double xi) {
  require_energy(xi, "phi");
  return std::sqrt(2.0 * std::max(xi, kTransitionEnergy) - 1.0);
}

double averaged_action(double xi) {
  require_energy(xi, "averaged_action");
  if (xi <= kTransitionEnergy) return xi;
  const double p = phi(xi);
  return (p + 2.0 * xi * half_angle(p)) / pi;
}

double frequency(double xi) {
  require_energy(xi, "frequency");
  if (xi <= kTransitionEnergy) return 1.0;
  return 0.5 * pi / half_angle(phi(xi));
}

double a1(double xi) {
  require_energy(xi, "a1");
  const double amplitude = std::sqrt(2.0 * xi);
  if (xi < kTransitionEnergy) return amplitude;
  return amplitude * shape_factor(frequency(xi)).g;
}

double d_averaged_action(double xi) { return 1.0 / frequency(xi); }

double d2_averaged_action(double xi) {
  require_energy(xi, "d2_averaged_action");
  if (xi < kTransitionEnergy) return 0.0;
  const double p = phi(xi);
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  return -1.0 / (pi * xi * p);
}

double d_a1(double xi) {
  if (xi == kTransitionEnergy) {
    throw DomainError("d_a1: kink at xi = 1/2, choose a side");
  }
  return d_a1(xi, xi < kTransitionEnergy ? Side::Left : Side::Right);
}

double d_a1(double xi, Side side) {
  require_energy(xi, "d_a1");
  if (xi == 0.0) return std::numeric_limits<double>::infinity();
  const double s = std::sqrt(2.0 * xi);
  const bool linear =
      xi < kTransitionEnergy || (xi == kTransitionEnergy && side == Side::Left);
  if (linear) return 1.0 / s;
  if (xi == kTransitionEnergy) return std::numeric_limits<double>::infinity();
  const auto f = frequency_derivs(xi);
  const auto g = shape_factor(f.omega);
  return g.g / s + s * g.dg * f.d1;
}

double d2_a1(double xi) {
  require_energy(xi, "d2_a1");
  const double s = std::sqrt(2.0 * xi);
  if (xi < kTransitionEnergy) return -1.0 / (s * s * s);
  if (xi == kTransitionEnergy) {
    throw DomainError("d2_a1: kink at xi = 1/2");
  }
  const auto f = frequency_derivs(xi);
  const auto g = shape_factor(f.omega);
  return -g.g / (s * s * s) + 2.0 * g.dg * f.d1 / s +
         s * g.d2g * f.d1 * f.d1 + s * g.dg * f.d2;
}

AAQuantities evaluate(double xi) {
  AAQuantities out;
  out.xi = AveragedEnergy(xi).value();
  out.phi = phi(xi);
  out.J = averaged_action(xi);
  out.omega = frequency(xi);
  out.a1 = a1(xi);
  out.dJ_dxi = d_averaged_action(xi);
  out.da1_dxi = xi == 0.0 ? std::numeric_limits<double>::infinity()
                          : d_a1(xi, Side::Right);
  return out;
}

double q_of_theta(double xi, double theta) {
  return std::sqrt(2.0 * AveragedEnergy(xi).value()) *
         std::sin(theta / frequency(xi));
}

double potential(double q) {
  return std::abs(q) <= 1.0 ? 0.5 * q * q : kWallPotential;
}

double tau_bar(double tau) { return (2.0 / pi) * std::asin(std::sin(tau)); }

int e_bar(double tau) {
  const double c = std::cos(tau);
  return (c > 0.0) - (c < 0.0);
}

double beta_of_energy(double energy) {
  const double top = pi * pi / 8.0;
  if (!(energy >= kTransitionEnergy && energy <= top)) {
    throw DomainError("beta_of_energy: E outside [1/2, pi^2/8], no solution");
  }
  auto ratio = [](double b) { return b == 0.0 ? 1.0 : b / std::sin(b); };
  auto residual = [&](double b) {
    const double r = ratio(b);
    return 0.5 * r * r - energy;
  };
  auto dresidual = [&](double b) {
    if (b == 0.0) return 0.0;
    const double s = std::sin(b);
    return ratio(b) * (s - b * std::cos(b)) / (s * s);
  };
  if (energy == kTransitionEnergy) return 0.0;
  if (energy == top) return 0.5 * pi;
  return roots::bisect_newton(residual, dresidual, 0.0, 0.5 * pi, 1e-12);
}

BasisSample basis_g(double tau, double beta) {
  if (!(beta >= 0.0 && beta <= 0.5 * pi)) {
    throw DomainError("basis_g: beta must lie in [0, pi/2]");
  }
  BasisSample out;
  out.tau = tau;
  out.beta = beta;
  out.tau_bar = tau_bar(tau);
  out.e_bar = e_bar(tau);
  if (beta < 1e-8) {
    out.g = out.tau_bar;
    out.g_prime = (2.0 / pi) * out.e_bar;
    out.g_prime_printed = 0.0;
    return out;
  }
  const double sb = std::sin(beta);
  out.g = std::sin(beta * out.tau_bar) / sb;
  const double slope = beta * std::cos(beta * out.tau_bar) / sb * out.e_bar;
  out.g_prime = (2.0 / pi) * slope;
  out.g_prime_printed = slope;
  return out;
}

FourierCoefficient fourier_bn(int n, double beta) {
  if (n < 1) throw DomainError("fourier_bn: n must be >= 1");
  if (!(beta > 0.0 && beta <= 0.5 * pi)) {
    throw DomainError("fourier_bn: beta must lie in (0, pi/2]");
  }
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [&](double t) {
    return basis_g(t, beta).g * std::sin(n * t);
  };
  // g has corners at tau = +-pi/2; integrate the smooth pieces separately.
  const std::array<double, 4> knots = {-pi, -0.5 * pi, 0.5 * pi, pi};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    total += gauss_kronrod<double, 61>::integrate(integrand, knots[i],
                                                  knots[i + 1], 15, 1e-14);
  }
  FourierCoefficient out;
  out.quadrature = total / pi;
  const double denom = pi * (beta * beta * n * n - 1.0);
  out.printed = 4.0 * beta / denom / std::tan(pi / (2.0 * beta)) *
                std::sin(0.5 * pi * n);
  out.discrepancy = out.printed - out.quadrature;
  return out;
}

}  // namespace hvi::aa
