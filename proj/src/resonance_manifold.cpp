#include "hvi/resonance_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "hvi/errors.hpp"
#include "hvi/roots.hpp"

namespace hvi::rm {

namespace {

using std::numbers::pi;

constexpr double kTwoPi = 2.0 * pi;
constexpr double kBracketStep = 1e-3;
constexpr double kBottom = 1e-10;
constexpr double kSaddleProximity = 1e-3;

double wrap(double nu) {
  double w = std::fmod(nu, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w == kTwoPi ? 0.0 : w;
}

struct Interval {
  double lo;
  double hi;
  bool lo_root;
  bool hi_root;
  int sign;
};

struct Region {
  std::vector<std::pair<int, int>> members;  // (column, interval)
  double height = 0.0;
  int top_column = 0;
  bool escaped = false;
};

// Evaluation grid in xi shared by every column; contains xi = 1/2 exactly.
std::vector<double> column_grid(double xi_max) {
  std::vector<double> grid{kBottom};
  const auto n = static_cast<int>(std::ceil(xi_max / kBracketStep));
  for (int j = 1; j < n; ++j) {
    const double x = j * kBracketStep;
    grid.push_back(std::abs(x - 0.5) < 0.25 * kBracketStep ? 0.5 : x);
  }
  grid.push_back(xi_max);
  return grid;
}

Region flood(const std::vector<std::vector<Interval>>& columns, int seed_col,
             int seed_sign, double xi_max) {
  Region region;
  const int n = static_cast<int>(columns.size());
  if (columns[seed_col].empty() || columns[seed_col][0].sign != seed_sign) {
    return region;
  }
  std::vector<std::vector<char>> seen(n);
  for (int c = 0; c < n; ++c) seen[c].assign(columns[c].size(), 0);
  std::deque<std::pair<int, int>> queue{{seed_col, 0}};
  seen[seed_col][0] = 1;
  while (!queue.empty()) {
    const auto [c, k] = queue.front();
    queue.pop_front();
    region.members.emplace_back(c, k);
    const Interval& iv = columns[c][k];
    if (iv.hi > region.height) {
      region.height = iv.hi;
      region.top_column = c;
    }
    if (!iv.hi_root && iv.hi >= xi_max) region.escaped = true;
    for (int dc : {-1, 1}) {
      const int nc = (c + dc + n) % n;
      for (std::size_t j = 0; j < columns[nc].size(); ++j) {
        const Interval& other = columns[nc][j];
        if (seen[nc][j] || other.sign != seed_sign) continue;
        if (std::max(iv.lo, other.lo) < std::min(iv.hi, other.hi)) {
          seen[nc][j] = 1;
          queue.emplace_back(nc, static_cast<int>(j));
        }
      }
    }
  }
  return region;
}

// Roots of `fn` on a grid: sign changes are bisected, near-zero local minima
// of |fn| are refined by golden section (tangential roots).
template <typename Fn>
std::vector<double> grid_roots(Fn&& fn, const std::vector<double>& grid,
                               double accept) {
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = fn(grid[i]);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (vals[i] == 0.0) {
      out.push_back(grid[i]);
    } else if ((vals[i] < 0.0) != (vals[i + 1] < 0.0) && vals[i + 1] != 0.0) {
      out.push_back(roots::bisect(fn, grid[i], grid[i + 1], 1e-14));
    }
  }
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double m = std::abs(vals[i]);
    if (m > std::abs(vals[i - 1]) || m > std::abs(vals[i + 1])) continue;
    if ((vals[i - 1] < 0.0) != (vals[i + 1] < 0.0)) continue;  // bracketed
    const double x = roots::golden_min([&](double t) { return std::abs(fn(t)); },
                                       grid[i - 1], grid[i + 1], 1e-13);
    if (std::abs(fn(x)) < accept) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double r : out) {
    if (unique.empty() || r - unique.back() > 1e-7) unique.push_back(r);
  }
  return unique;
}

// Geometric refinement near `from`, then uniform steps to `to`.
std::vector<double> stationary_grid(double from, double to) {
  std::vector<double> grid;
  for (double d = 1e-9; from + d < from + kBracketStep && from + d < to; d *= 2.0) {
    grid.push_back(from + d);
  }
  for (double x = from + kBracketStep; x < to; x += kBracketStep) {
    grid.push_back(x);
  }
  return grid;
}

}  // namespace

ScaledForcing::ScaledForcing(double f, double sigma, double eps)
    : f_(f), sigma_(sigma), eps_(eps) {
  if (!(eps > 0.0)) throw DomainError("ScaledForcing: eps must be positive");
  if (!(f >= 0.0)) throw DomainError("ScaledForcing: f must be non-negative");
  if (!std::isfinite(sigma)) throw DomainError("ScaledForcing: bad sigma");
}

PhasePoint::PhasePoint(double nu_in, double xi_in)
    : nu(wrap(nu_in)), xi(aa::AveragedEnergy(xi_in).value()) {}

double manifold_value(const PhasePoint& p, const ScaledForcing& forcing) {
  return p.xi -
         0.5 * forcing.eps() * forcing.f() * aa::a1(p.xi) * std::cos(p.nu) -
         forcing.Omega() * aa::averaged_action(p.xi);
}

double dC_dnu(const PhasePoint& p, const ScaledForcing& forcing) {
  return 0.5 * forcing.eps() * forcing.f() * aa::a1(p.xi) * std::sin(p.nu);
}

double dC_dxi(const PhasePoint& p, const ScaledForcing& forcing,
              aa::Side side) {
  return 1.0 -
         0.5 * forcing.eps() * forcing.f() * aa::d_a1(p.xi, side) *
             std::cos(p.nu) -
         forcing.Omega() * aa::d_averaged_action(p.xi);
}

double d2C_dnu2(const PhasePoint& p, const ScaledForcing& forcing) {
  return 0.5 * forcing.eps() * forcing.f() * aa::a1(p.xi) * std::cos(p.nu);
}

double d2C_dxi2(const PhasePoint& p, const ScaledForcing& forcing) {
  return -0.5 * forcing.eps() * forcing.f() * aa::d2_a1(p.xi) * std::cos(p.nu) -
         forcing.Omega() * aa::d2_averaged_action(p.xi);
}

LPTContour lpt_contour(const ScaledForcing& forcing, int nu_samples,
                       double xi_max) {
  if (nu_samples < 16) throw DomainError("lpt_contour: need >= 16 nu samples");
  if (!(xi_max > 0.0)) throw DomainError("lpt_contour: xi_max must be positive");
  const int n = nu_samples + (nu_samples % 2);

  LPTContour out;
  if (forcing.f() == 0.0) {
    for (int c = 0; c < n; ++c) out.points.emplace_back(kTwoPi * c / n, 0.0);
    return out;
  }

  const std::vector<double> grid = column_grid(xi_max);
  std::vector<double> a1s(grid.size());
  std::vector<double> js(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    a1s[j] = aa::a1(grid[j]);
    js[j] = aa::averaged_action(grid[j]);
  }
  const double half_ef = 0.5 * forcing.eps() * forcing.f();
  const double omega = forcing.Omega();

  std::vector<std::vector<Interval>> columns(n);
  std::vector<double> values(grid.size());
  for (int c = 0; c < n; ++c) {
    const double nu = kTwoPi * c / n;
    const double cn = std::cos(nu);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      values[j] = grid[j] - half_ef * a1s[j] * cn - omega * js[j];
    }
    auto column_fn = [&](double xi) {
      return manifold_value(PhasePoint(nu, xi), forcing);
    };
    auto sign_of = [](double v) { return v < 0.0 ? -1 : 1; };
    auto& ivs = columns[c];
    Interval cur{grid.front(), 0.0, false, false, sign_of(values.front())};
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
      if (sign_of(values[j]) == sign_of(values[j + 1])) continue;
      const double r = roots::bisect(column_fn, grid[j], grid[j + 1], 1e-14);
      cur.hi = r;
      cur.hi_root = true;
      ivs.push_back(cur);
      cur = {r, 0.0, true, false, sign_of(values[j + 1])};
    }
    cur.hi = grid.back();
    ivs.push_back(cur);
  }

  const Region below_zero = flood(columns, 0, -1, xi_max);
  const Region above_zero = flood(columns, n / 2, +1, xi_max);
  const Region* chosen = nullptr;
  for (const Region* r : {&below_zero, &above_zero}) {
    if (r->members.empty() || r->escaped) continue;
    if (!chosen || r->height < chosen->height) chosen = r;
  }
  if (!chosen) {
    throw WindowEscape("lpt_contour: trajectory leaves the energy window");
  }

  auto members = chosen->members;
  std::sort(members.begin(), members.end());
  for (const auto& [c, k] : members) {
    const Interval& iv = columns[c][k];
    const double nu = kTwoPi * c / n;
    if (iv.lo_root) out.points.emplace_back(nu, iv.lo);
    if (iv.hi_root) out.points.emplace_back(nu, iv.hi);
  }
  out.max_xi = chosen->height;
  out.nu_at_max = kTwoPi * chosen->top_column / n;

  for (const auto& p : out.points) {
    const double dnu = std::abs(p.nu - pi);
    const double dxi = p.xi - aa::kTransitionEnergy;
    if ((dxi >= 0.0 && std::cos(p.nu) < 0.0) ||
        std::hypot(dnu, dxi) < kSaddleProximity) {
      out.passes_saddle = true;
      break;
    }
  }
  return out;
}

const char* to_string(StationaryKind kind) {
  switch (kind) {
    case StationaryKind::Saddle:
      return "saddle";
    case StationaryKind::Minimum:
      return "minimum";
    case StationaryKind::Maximum:
      return "maximum";
  }
  return "unknown";
}

Classification classify_stationary(double nu0, double xi0,
                                   const ScaledForcing& forcing) {
  const PhasePoint p(nu0, xi0);
  if (std::abs(xi0 - aa::kTransitionEnergy) < 1e-12) {
    return {StationaryKind::Saddle, true};
  }
  const double cnn = d2C_dnu2(p, forcing);
  const double cxx = d2C_dxi2(p, forcing);
  const bool degenerate = std::abs(cxx) < 1e-8 || cnn == 0.0;
  if (cnn > 0.0 && cxx > 0.0) return {StationaryKind::Minimum, degenerate};
  if (cnn < 0.0 && cxx < 0.0) return {StationaryKind::Maximum, degenerate};
  return {StationaryKind::Saddle, degenerate};
}

std::vector<StationaryPoint> stationary_points(const ScaledForcing& forcing,
                                               double xi_window) {
  if (!(xi_window > aa::kTransitionEnergy)) {
    throw DomainError("stationary_points: window must exceed 1/2");
  }
  const double half = aa::kTransitionEnergy;
  std::vector<double> linear_grid;
  for (double x = 1e-9; x < kBracketStep; x *= 2.0) linear_grid.push_back(x);
  for (double x = kBracketStep; x < half; x += kBracketStep) {
    linear_grid.push_back(x);
  }
  linear_grid.push_back(half - 1e-12);
  std::vector<double> impact_grid = stationary_grid(half, xi_window);

  std::vector<StationaryPoint> out;
  for (double nu0 : {0.0, pi}) {
    auto slope = [&](double xi) {
      return dC_dxi(PhasePoint(nu0, xi), forcing);
    };
    for (const auto* grid : {&linear_grid, &impact_grid}) {
      for (double xi0 : grid_roots(slope, *grid, 1e-9)) {
        const auto cls = classify_stationary(nu0, xi0, forcing);
        out.push_back({nu0, xi0, cls.kind, cls.degenerate});
      }
    }
  }
  out.push_back({pi, half, StationaryKind::Saddle, true});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.nu0 != b.nu0 ? a.nu0 < b.nu0 : a.xi0 < b.xi0;
  });
  return out;
}

double stationary_denominator(double xi0) {
  using namespace aa;
  return a1(xi0) * d_averaged_action(xi0) -
         d_a1(xi0, Side::Right) * averaged_action(xi0);
}

double sigma_of_stationary(double xi0, double eps) {
  if (!(xi0 > aa::kTransitionEnergy)) {
    throw DomainError("sigma_of_stationary: requires xi0 > 1/2");
  }
  const double den = stationary_denominator(xi0);
  if (std::abs(den) < 1e-14) {
    throw NumericError("sigma_of_stationary: vertical asymptote of the locus");
  }
  const double num = aa::a1(xi0) - aa::d_a1(xi0, aa::Side::Right) * xi0;
  return (num / den - 1.0) / eps;
}

double forcing_on_stationary(double xi0, double sigma, double eps) {
  return 2.0 * ((1.0 + eps * sigma) * aa::averaged_action(xi0) - xi0) /
         (eps * aa::a1(xi0));
}

}  // namespace hvi::rm
