#include "hvi/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "hvi/aa_core.hpp"
#include "hvi/errors.hpp"
#include "hvi/resonance_manifold.hpp"
#include "hvi/roots.hpp"

namespace hvi::bif {

namespace {

constexpr double kHalf = aa::kTransitionEnergy;
constexpr double kStart = kHalf + 1e-9;
constexpr double kScanStep = 1e-3;
constexpr double kScanGrowth = 1.0;  // step grows like (1 + xi)

void require_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("eps must be positive");
  }
}

// Scan points above 1/2: geometric close to the kink (a1 has an infinite
// slope there), then steps growing with xi.
std::vector<double> upper_grid(double cap) {
  std::vector<double> grid;
  for (double d = 1e-9; d < kScanStep; d *= 2.0) grid.push_back(kHalf + d);
  for (double x = kHalf + kScanStep; x < cap; x += kScanStep * (1.0 + x)) {
    grid.push_back(x);
  }
  grid.push_back(cap);
  return grid;
}

template <typename Fn>
std::vector<double> all_roots(Fn&& fn, const std::vector<double>& grid) {
  std::vector<double> out;
  double prev = fn(grid.front());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double next = fn(grid[i + 1]);
    if (prev == 0.0) {
      out.push_back(grid[i]);
    } else if ((prev < 0.0) != (next < 0.0) && next != 0.0) {
      out.push_back(roots::bisect(fn, grid[i], grid[i + 1], 1e-14));
    }
    prev = next;
  }
  return out;
}

double sigma_star_at(double xi, double eps) {
  return ((aa::a1(xi) + 2.0 * xi) / (aa::a1(xi) + 2.0 * aa::averaged_action(xi)) -
          1.0) /
         eps;
}

}  // namespace

CriticalEnergy::CriticalEnergy(double xi_tilde) : xi_(xi_tilde) {
  if (!(xi_tilde > 0.0) || !std::isfinite(xi_tilde)) {
    throw DomainError("CriticalEnergy: xi_tilde must be positive");
  }
}

const char* to_string(Mechanism m) {
  return m == Mechanism::Maximum ? "maximum" : "saddle";
}

const char* to_string(ResponseBranch b) {
  switch (b) {
    case ResponseBranch::Linear:
      return "linear";
    case ResponseBranch::HviMax:
      return "hvi_max";
    case ResponseBranch::HviSaddle:
      return "hvi_saddle";
  }
  return "unknown";
}

double level_function(double xi, double sigma, double eps) {
  require_eps(eps);
  if (!(xi > 0.0)) throw DomainError("level_function: xi must be positive");
  return 2.0 * (xi - (1.0 + eps * sigma) * aa::averaged_action(xi)) /
         (eps * aa::a1(xi));
}

double boundary_maximum(double sigma, CriticalEnergy xi_tilde, double eps) {
  require_eps(eps);
  const double xt = xi_tilde.value();
  // Up to and including the kink the linear-regime amplitude applies.
  if (xt <= kHalf) return std::sqrt(2.0 * xt) * std::abs(sigma);
  const double f = level_function(xt, sigma, eps);
  if (f < 0.0) {
    throw NotApplicable("boundary_maximum: maximum mechanism cannot reach xi_tilde");
  }
  return f;
}

double boundary_saddle(double sigma, double eps) {
  require_eps(eps);
  if (!(sigma > 0.0)) throw DomainError("boundary_saddle: requires sigma > 0");
  const double f = 2.0 *
                   ((1.0 + eps * sigma) * aa::averaged_action(kHalf) - kHalf) /
                   (eps * aa::a1(kHalf));
  if (std::abs(f - sigma) > 1e-9 * std::max(1.0, sigma)) {
    throw NumericError("boundary_saddle: general form departs from sigma");
  }
  return f;
}

Coexistence coexistence_point(CriticalEnergy xi_tilde, double eps) {
  require_eps(eps);
  const double xt = xi_tilde.value();
  if (xt < kHalf) throw DomainError("coexistence_point: requires xi_tilde >= 1/2");
  const double s = sigma_star_at(xt, eps);
  const double fm = boundary_maximum(s, xi_tilde, eps);
  if (std::abs(fm - s) > 1e-6) {
    throw NumericError("coexistence_point: branches do not intersect");
  }
  return {s, s};
}

TransitionBoundary transition_boundary(CriticalEnergy xi_tilde,
                                       const std::vector<double>& sigmas,
                                       double eps) {
  TransitionBoundary out{xi_tilde, eps, {}, std::nullopt};
  if (xi_tilde.value() >= kHalf) out.coexistence = coexistence_point(xi_tilde, eps);
  out.samples.reserve(sigmas.size());
  for (double s : sigmas) {
    if (out.coexistence && s > out.coexistence->sigma_star) {
      out.samples.push_back({s, boundary_saddle(s, eps), Mechanism::Saddle});
    } else {
      out.samples.push_back({s, boundary_maximum(s, xi_tilde, eps),
                             Mechanism::Maximum});
    }
  }
  return out;
}

double post_crossing_energy(double sigma, double eps, Mechanism branch,
                            double cap) {
  require_eps(eps);
  if (branch == Mechanism::Maximum && !(sigma < 0.0)) {
    throw DomainError("post_crossing_energy: maximum branch needs sigma < 0");
  }
  if (branch == Mechanism::Saddle && !(sigma > 0.0)) {
    throw DomainError("post_crossing_energy: saddle branch needs sigma > 0");
  }
  if (!(cap > kStart)) throw DomainError("post_crossing_energy: cap too small");
  // Both sign conventions collapse to K(xi) = |sigma|.
  const double target = std::abs(sigma);
  auto g = [&](double xi) { return level_function(xi, sigma, eps) - target; };
  const auto root = roots::first_root(g, kStart, cap, kScanStep, kScanGrowth, 1e-14);
  if (!root) throw NumericError("post_crossing_energy: no root below the cap");
  return *root;
}

std::vector<FrequencyResponsePoint> frequency_response(double f, double eps,
                                                       double sigma_lo,
                                                       double sigma_hi,
                                                       int n_samples,
                                                       double cap) {
  require_eps(eps);
  if (!(f > 0.0)) throw DomainError("frequency_response: requires f > 0");
  if (!(sigma_lo < sigma_hi) || n_samples < 2) {
    throw DomainError("frequency_response: bad sigma range");
  }
  std::vector<double> sigmas;
  for (int i = 0; i < n_samples; ++i) {
    sigmas.push_back(sigma_lo + (sigma_hi - sigma_lo) * i / (n_samples - 1));
  }
  for (double j : {-f, f}) {
    if (j >= sigma_lo && j <= sigma_hi) sigmas.push_back(j);
  }
  std::sort(sigmas.begin(), sigmas.end());
  sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());

  const std::vector<double> grid = upper_grid(cap);
  std::vector<FrequencyResponsePoint> out;
  for (double s : sigmas) {
    const bool jump = std::abs(s) == f;
    if (std::abs(s) >= f) {
      out.push_back({s, std::min(f * f / (2.0 * s * s), kHalf),
                     ResponseBranch::Linear, jump});
    }
    auto g = [&](double xi) { return f - level_function(xi, s, eps); };
    for (double xi : all_roots(g, grid)) {
      const auto branch = s <= sigma_star_at(xi, eps) ? ResponseBranch::HviMax
                                                      : ResponseBranch::HviSaddle;
      out.push_back({s, xi, branch, jump});
    }
  }
  return out;
}

double energy_map(double sigma, double f, double eps, double cap) {
  require_eps(eps);
  if (!(f >= 0.0)) throw DomainError("energy_map: requires f >= 0");
  if (f == 0.0) return 0.0;
  if (f < std::abs(sigma)) return f * f / (2.0 * sigma * sigma);
  // The level set keeps climbing while |K| <= f.
  auto g = [&](double xi) {
    return f - std::abs(level_function(xi, sigma, eps));
  };
  const auto root = roots::first_root(g, kStart, cap, kScanStep, kScanGrowth, 1e-14);
  if (!root) throw NumericError("energy_map: no turning point below the cap");
  return *root;
}

VerifiedEnergy energy_map_verified(double sigma, double f, double eps,
                                   double tol, int nu_samples) {
  VerifiedEnergy out{energy_map(sigma, f, eps), 0.0};
  const rm::ScaledForcing forcing(f, sigma, eps);
  double window = std::max(2.0, 2.0 * out.analytic);
  for (int attempt = 0;; ++attempt) {
    try {
      out.level_set = rm::lpt_contour(forcing, nu_samples, window).max_xi;
      break;
    } catch (const WindowEscape&) {
      if (attempt >= 4) throw;
      window *= 2.0;
    }
  }
  if (std::abs(out.analytic - out.level_set) > tol) {
    throw NumericError("energy_map: analytic and level-set heights disagree");
  }
  return out;
}

}  // namespace hvi::bif
