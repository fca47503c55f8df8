#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>

#include "hvi/aa_core.hpp"
#include "hvi/errors.hpp"
#include "hvi/vi_sim.hpp"

using namespace hvi;
using namespace hvi::sim;
using std::numbers::pi;

namespace {

using Vec = std::array<double, 2>;

// Adaptive Dormand-Prince reference for q'' + q = F cos(Omega t), no walls.
Vec reference(Vec x, double t0, double t1, double F, double Omega) {
  namespace ode = boost::numeric::odeint;
  auto rhs = [&](const Vec& s, Vec& d, double t) {
    d[0] = s[1];
    d[1] = -s[0] + F * std::cos(Omega * t);
  };
  ode::integrate_adaptive(ode::make_dense_output(1e-12, 1e-12, ode::runge_kutta_dopri5<Vec>()),
                          rhs, x, t0, t1, 1e-3);
  return x;
}

}  // namespace

TEST_CASE("normalization") {
  auto c = normalize({1, 1, 1, 0.1, 1.1});
  CHECK(c.F == doctest::Approx(0.1));
  CHECK(c.Omega == doctest::Approx(1.1));
  CHECK(normalize({4, 1, 1, 0.1, 0.55}).Omega == doctest::Approx(1.1));
  CHECK(normalize({1, 2, 0.5, 1, 1}).F == doctest::Approx(1.0));
  CHECK_THROWS_AS(normalize({0, 1, 1, 1, 1}), DomainError);
}

TEST_CASE("config validation") {
  SimConfig bad;
  bad.q0 = 1.5;
  CHECK_THROWS_AS(simulate(bad), DomainError);
  SimConfig k;
  k.kappa = 0.8;
  CHECK_THROWS_AS(simulate(k), DomainError);
  SimConfig h;
  h.horizon = 1.0;
  CHECK_THROWS_AS(simulate(h), DomainError);
}

TEST_CASE("segment propagator matches a reference integrator") {
  for (auto [F, Om] : {std::pair{0.17, 1.1}, {0.3, 0.7}, {0.05, 1.0}, {0.2, 2.3}}) {
    const Segment seg(0.4, {0.2, -0.3}, F, Om);
    for (double t : {1.0, 5.0, 17.0}) {
      const Vec r = reference({0.2, -0.3}, 0.4, t, F, Om);
      const State s = seg.at(t);
      CHECK(std::abs(s.q - r[0]) < 1e-9);
      CHECK(std::abs(s.p - r[1]) < 1e-9);
    }
  }
}

TEST_CASE("rest state stays at rest") {
  SimConfig c;
  const auto tr = simulate(c);
  CHECK(tr.impacts.empty());
  for (const auto& s : tr.samples) CHECK(s.q == 0.0);
}

TEST_CASE("free vibro-impact motion") {
  SimConfig c;
  c.p0 = 2.0;
  c.horizon = 200.0;
  const auto tr = simulate(c);
  REQUIRE(tr.impacts.size() > 10);
  for (const auto& s : tr.samples) {
    CHECK(std::abs(s.E - 2.0) < 1e-10);
    CHECK(std::abs(s.q) <= 1.0 + 1e-9);
  }
  // Successive impacts are half a period of the clipped orbit apart.
  const double half = pi / aa::frequency(2.0);
  for (std::size_t i = 1; i < tr.impacts.size(); ++i) {
    CHECK(std::abs(tr.impacts[i].tau - tr.impacts[i - 1].tau - half) < 1e-6);
  }
  const auto e = energy_summary(tr, 1.0);
  CHECK(e.max_xi_windowed == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("elastic bookkeeping under forcing") {
  SimConfig c;
  c.F = 0.17;
  c.Omega = 1.1;
  const auto tr = simulate(c);
  REQUIRE(!tr.impacts.empty());
  for (const auto& imp : tr.impacts) {
    CHECK(std::abs(std::abs(imp.p_after) - std::abs(imp.p_before)) < 1e-10);
    CHECK(imp.p_after * imp.p_before <= 0.0);
    const Segment seg(imp.tau, {imp.wall, imp.p_after}, c.F, c.Omega);
    CHECK(std::abs(std::abs(seg.at(imp.tau).q) - 1.0) < 1e-10);
  }
  for (const auto& s : tr.samples) CHECK(std::abs(s.q) <= 1.0 + 1e-9);
}

TEST_CASE("time reversal of free motion") {
  SimConfig fwd;
  fwd.q0 = 0.1;
  fwd.p0 = 1.3;
  fwd.horizon = 37.0;
  fwd.dt_out = 0.5;
  const auto a = simulate(fwd);
  const auto& last = a.samples.back();
  SimConfig back;
  back.q0 = last.q;
  back.p0 = -last.p;
  back.horizon = last.tau;
  back.dt_out = 0.5;
  const auto b = simulate(back);
  CHECK(std::abs(b.samples.back().q - fwd.q0) < 1e-8);
  CHECK(std::abs(b.samples.back().p + fwd.p0) < 1e-8);
}

TEST_CASE("linear steady state stays inside the gap") {
  SimConfig c;
  c.F = 0.1;
  c.Omega = 1.5;
  const auto tr = simulate(c);
  CHECK(tr.impacts.empty());
  const double bound = 2 * c.F / std::abs(1 - c.Omega * c.Omega) + 1e-9;
  for (const auto& s : tr.samples) CHECK(std::abs(s.q) <= bound);
}

TEST_CASE("windowed energy summary") {
  SimConfig c;
  c.F = 0.17;
  c.Omega = 1.1;
  const auto e = energy_summary(simulate(c), c.Omega, 0.5);
  CHECK(e.max_xi_windowed <= e.max_E_inst);
  CHECK(e.crossed == e.t_cross.has_value());
  CHECK(e.crossed);

  SimConfig shortrun;
  shortrun.horizon = 6.3;
  shortrun.dt_out = 0.1;
  CHECK_THROWS_AS(energy_summary(simulate(shortrun), 0.5), DomainError);
}

TEST_CASE("numeric boundary rejects a bad bracket") {
  CHECK_THROWS_AS(numeric_boundary(-1.0, 0.1, 0.5, 2.0, 3.0, 200.0), DomainError);
  CHECK_THROWS_AS(numeric_boundary(-1.0, 0.1, 0.5, 1.0, 0.5), DomainError);
}

TEST_CASE("type-I crossing for negative detuning") {
  const double f = numeric_boundary(-1.0, 0.1, 0.5, 0.8, 1.2);
  CHECK(std::abs(f - 1.0) / 1.0 < 0.1);
}
