#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hvi/aa_core.hpp"
#include "hvi/errors.hpp"
#include "hvi/resonance_manifold.hpp"

using namespace hvi;
using namespace hvi::rm;
using std::numbers::pi;

namespace {

bool has_point(const std::vector<StationaryPoint>& pts, double nu, double xi,
               double tol) {
  return std::any_of(pts.begin(), pts.end(), [&](const StationaryPoint& p) {
    return std::abs(p.nu0 - nu) < 1e-12 && std::abs(p.xi0 - xi) < tol;
  });
}

}  // namespace

TEST_CASE("manifold value examples") {
  const ScaledForcing any(0.7, -1.3);
  for (double nu : {0.0, 1.0, 2.5, 4.0}) {
    CHECK(manifold_value(PhasePoint(nu, 0.0), any) == 0.0);
  }
  CHECK(std::abs(manifold_value(PhasePoint(0.0, 1.0), ScaledForcing(1.6637, 1.0))) < 1e-3);
  CHECK(std::abs(manifold_value(PhasePoint(pi, 0.5), ScaledForcing(1.5, 1.5))) < 1e-9);
}

TEST_CASE("phase wraps and cosine symmetry") {
  CHECK(PhasePoint(-0.5, 1.0).nu == doctest::Approx(2 * pi - 0.5));
  CHECK(PhasePoint(2 * pi + 0.25, 1.0).nu == doctest::Approx(0.25));
  CHECK_THROWS_AS(PhasePoint(0.0, -0.1), DomainError);
  const ScaledForcing fc(1.2, 0.8);
  for (double nu : {0.3, 1.7, 2.9}) {
    for (double xi : {0.2, 0.7, 1.9}) {
      CHECK(manifold_value(PhasePoint(nu, xi), fc) ==
            doctest::Approx(manifold_value(PhasePoint(2 * pi - nu, xi), fc)).epsilon(1e-14));
    }
  }
}

TEST_CASE("dC/dnu changes sign only on nu = 0 and pi") {
  const ScaledForcing fc(1.0, 2.0);
  const int n = 720;
  for (double xi : {0.3, 0.8, 2.0}) {
    for (int i = 0; i < n; ++i) {
      const double a = 2 * pi * i / n + 1e-9;
      const double b = 2 * pi * (i + 1) / n - 1e-9;
      const bool flips = (dC_dnu(PhasePoint(a, xi), fc) < 0) != (dC_dnu(PhasePoint(b, xi), fc) < 0);
      if (flips) CHECK((i == n / 2 - 1 || i == n / 2 || i == n - 1 || i == 0));
    }
  }
}

TEST_CASE("partial derivatives match finite differences") {
  const ScaledForcing fc(1.4, 0.9);
  for (double xi : {0.2, 0.9, 1.6}) {
    const PhasePoint p(1.1, xi);
    const double h = 1e-6;
    const double fx = (manifold_value(PhasePoint(1.1, xi + h), fc) -
                       manifold_value(PhasePoint(1.1, xi - h), fc)) / (2 * h);
    CHECK(dC_dxi(p, fc) == doctest::Approx(fx).epsilon(1e-7));
    const double fn = (manifold_value(PhasePoint(1.1 + h, xi), fc) -
                       manifold_value(PhasePoint(1.1 - h, xi), fc)) / (2 * h);
    CHECK(dC_dnu(p, fc) == doctest::Approx(fn).epsilon(1e-7));
    const double fxx = (dC_dxi(PhasePoint(1.1, xi + h), fc) - dC_dxi(PhasePoint(1.1, xi - h), fc)) / (2 * h);
    CHECK(d2C_dxi2(p, fc) == doctest::Approx(fxx).epsilon(1e-5));
  }
}

TEST_CASE("limiting phase trajectory") {
  SUBCASE("unforced rest state") {
    const auto c = lpt_contour(ScaledForcing(0.0, 1.0));
    CHECK(c.max_xi == 0.0);
    CHECK(!c.points.empty());
    for (const auto& p : c.points) CHECK(p.xi == 0.0);
  }
  SUBCASE("graze of xi = 1 at the maximum-mechanism boundary") {
    const ScaledForcing fc(1.6637, 1.0);
    const auto c = lpt_contour(fc);
    CHECK(std::abs(c.max_xi - 1.0) < 2e-2);
    CHECK(c.nu_at_max == doctest::Approx(0.0));
    for (const auto& p : c.points) CHECK(std::abs(manifold_value(p, fc)) < 1e-8);
  }
  SUBCASE("saddle passage above the boundary") {
    const auto c = lpt_contour(ScaledForcing(1.525, 1.5));
    CHECK(c.passes_saddle);
    CHECK(c.max_xi > 1.0);
  }
  SUBCASE("linear regime matches the closed form") {
    const auto c = lpt_contour(ScaledForcing(0.5, -2.0));
    CHECK(c.max_xi == doctest::Approx(0.5 * 0.25 / 4.0).epsilon(1e-6));
    CHECK(!c.passes_saddle);
  }
  SUBCASE("small window escapes") {
    CHECK_THROWS_AS(lpt_contour(ScaledForcing(1.525, 1.5), 64, 0.7), WindowEscape);
  }
  CHECK_THROWS_AS(lpt_contour(ScaledForcing(1.0, 1.0), 8), DomainError);
}

TEST_CASE("stationary points") {
  SUBCASE("degenerate saddle always reported") {
    const auto pts = stationary_points(ScaledForcing(1.0, 1.0), 2.0);
    REQUIRE(has_point(pts, pi, 0.5, 1e-15));
    for (const auto& p : pts) {
      if (p.xi0 == 0.5) {
        CHECK(p.kind == StationaryKind::Saddle);
        CHECK(p.degenerate);
      }
    }
  }
  SUBCASE("roots satisfy both conditions") {
    const ScaledForcing fc(1.0, 5.0);
    for (const auto& p : stationary_points(fc)) {
      if (p.xi0 == 0.5) continue;
      CHECK(std::abs(dC_dxi(PhasePoint(p.nu0, p.xi0), fc)) < 1e-9);
      CHECK(std::abs(dC_dnu(PhasePoint(p.nu0, p.xi0), fc)) < 1e-9);
    }
  }
  SUBCASE("branch point of the stationary locus") {
    const double s = sigma_of_stationary(0.5435);
    const double f = forcing_on_stationary(0.5435, s);
    CHECK(has_point(stationary_points(ScaledForcing(f, s), 2.0), pi, 0.5435, 1e-4));
  }
  SUBCASE("sigma = 5 gives one saddle and one extremum above 1/2 on the locus") {
    // Both roots of the locus at sigma = 5; evaluated at each point's own f.
    int saddles = 0;
    int extrema = 0;
    for (double xi0 : {0.52734, 0.58039}) {
      const double f = forcing_on_stationary(xi0, 5.0);
      const auto pts = stationary_points(ScaledForcing(f, 5.0), 2.0);
      for (const auto& p : pts) {
        if (p.nu0 != 0.0 && std::abs(p.xi0 - xi0) < 1e-3) {
          (p.kind == StationaryKind::Saddle ? saddles : extrema)++;
        }
      }
    }
    CHECK(saddles == 1);
    CHECK(extrema == 1);
  }
  SUBCASE("unforced, negative detuning: only the degenerate point above 1/2") {
    const auto pts = stationary_points(ScaledForcing(0.0, -1.0), 4.0);
    for (const auto& p : pts) {
      if (p.xi0 >= 0.5) CHECK(p.xi0 == 0.5);
    }
  }
  SUBCASE("unforced, positive detuning: omega = 1 + eps sigma has a root") {
    const double sigma = 1.0;
    const auto pts = stationary_points(ScaledForcing(0.0, sigma), 4.0);
    const double target = 1.0 + 0.1 * sigma;
    bool found = false;
    for (const auto& p : pts) {
      if (p.xi0 > 0.5) {
        CHECK(aa::frequency(p.xi0) == doctest::Approx(target).epsilon(1e-9));
        found = true;
      }
    }
    CHECK(found);
  }
  CHECK_THROWS_AS(stationary_points(ScaledForcing(1.0, 1.0), 0.4), DomainError);
}

TEST_CASE("classification") {
  const ScaledForcing fc(1.0, 1.0);
  CHECK(classify_stationary(pi, 0.5, fc).kind == StationaryKind::Saddle);
  // Brute-force check: sample C around each root and compare with the label.
  const ScaledForcing f5(forcing_on_stationary(0.52734, 5.0), 5.0);
  for (const auto& p : stationary_points(f5, 2.0)) {
    if (p.degenerate) continue;
    const double c0 = manifold_value(PhasePoint(p.nu0, p.xi0), f5);
    const double h = 1e-4;
    const double dn = manifold_value(PhasePoint(p.nu0 + h, p.xi0), f5) - c0;
    const double dx = manifold_value(PhasePoint(p.nu0, p.xi0 + h), f5) - c0 +
                      manifold_value(PhasePoint(p.nu0, p.xi0 - h), f5) - c0;
    const char* expected = (dn > 0) == (dx > 0) ? (dn > 0 ? "minimum" : "maximum") : "saddle";
    CHECK(std::string(to_string(p.kind)) == expected);
  }
}

TEST_CASE("stationary locus in the (sigma, xi0) plane") {
  CHECK(sigma_of_stationary(0.5435) == doctest::Approx(4.5636).epsilon(1e-2 / 4.5636));
  CHECK(std::abs(sigma_of_stationary(0.5 + 1e-7)) < 1e-2);
  CHECK_THROWS_AS(sigma_of_stationary(0.5), DomainError);
  // Pole of the locus near the quoted asymptote.
  CHECK(stationary_denominator(0.5122) * stationary_denominator(0.5124) < 0.0);
  CHECK(std::abs(sigma_of_stationary(0.51229 + 1e-7)) > 1e3);
  // 0.5435 is the local minimum of sigma along the upper branch.
  CHECK(sigma_of_stationary(0.5335) > sigma_of_stationary(0.5435));
  CHECK(sigma_of_stationary(0.5535) > sigma_of_stationary(0.5435));
}
