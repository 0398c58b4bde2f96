#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "adaptlab/systems.hpp"

using namespace adaptlab;

namespace {

constexpr double kPi = std::numbers::pi;

OrmScalar demo_orm() { return OrmScalar(-1.0, 1.0, 1.0, 3.0); }
CrmScalar demo_crm() { return CrmScalar(-1.0, 1.0, 1.0, -1.0, 3.0); }

AlgebraicIdSystem sincos_system() {
  return AlgebraicIdSystem(
      {Signal::sinusoid(1.0, 1.0, 0.0), Signal::sinusoid(1.0, 1.0, kPi / 2)},
      Vec{1.0, 1.0});
}

MracSystem mrac2() {
  Mat a(2, 2);
  a(0, 0) = 0.0;
  a(0, 1) = 1.0;
  a(1, 0) = -2.0;
  a(1, 1) = -3.0;
  return MracSystem(a, Vec{0.0, 1.0}, Vec{1.0, 0.5}, Mat::identity(2),
                    Signal::constant(3.0));
}

}  // namespace

TEST_CASE("signal evaluation and sup bounds") {
  Signal c = Signal::constant(-2.5);
  CHECK(c(17.0) == -2.5);
  CHECK(c.sup_bound() == 2.5);

  Signal s(SinusoidSum{{{2.0, 1.0, 0.0}, {0.5, 3.0, 0.25}}});
  CHECK(s(0.7) == doctest::Approx(2.0 * std::sin(0.7) +
                                  0.5 * std::sin(3 * 0.7 + 0.25)));
  CHECK(s.sup_bound() == doctest::Approx(2.5));

  Signal pw(PiecewiseConstant{{0.0, 2.0, 5.0}, {3.0, -4.0, 1.0}});
  CHECK(pw(-1.0) == 3.0);
  CHECK(pw(0.0) == 3.0);
  CHECK(pw(1.99) == 3.0);
  CHECK(pw(2.0) == -4.0);
  CHECK(pw(100.0) == 1.0);
  CHECK(pw.sup_bound() == 4.0);

  CHECK_THROWS_AS(Signal(PiecewiseConstant{{0.0, 0.0}, {1.0, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Signal(PiecewiseConstant{{0.0}, {1.0, 2.0}}),
                  std::invalid_argument);
}

TEST_CASE("scalar loop parameter validation") {
  CHECK_THROWS_WITH_AS(OrmScalar(-1.0, 1.0, 0.0, 3.0),
                       "gamma: must be positive", std::invalid_argument);
  CHECK_THROWS_AS(OrmScalar(1.0, 1.0, 1.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(OrmScalar(-1.0, 1.0, 1.0, -3.0), std::invalid_argument);
  CHECK_THROWS_AS(CrmScalar(-1.0, 1.0, 1.0, 0.5, 3.0), std::invalid_argument);
  CHECK(demo_orm().xbar() == doctest::Approx(3.0));
}

TEST_CASE("rhs: hand-evaluated samples") {
  SystemModel orm = demo_orm();
  Vec dz = rhs(orm, 0.0, Vec{0.0, 0.0});
  CHECK(dz.norm() == 0.0);

  // e-dot = a e + b phi (e + xbar) = 2 - 2 = 0, phi-dot = -e (e + xbar) = 2.
  dz = rhs(orm, 0.0, Vec{-2.0, -2.0});
  CHECK(dz[0] == doctest::Approx(0.0));
  CHECK(dz[1] == doctest::Approx(2.0));

  SystemModel crm = demo_crm();
  CHECK(rhs(crm, 0.0, Vec{3.0, 0.0, 0.0}).norm() == 0.0);

  SystemModel alg = sincos_system();
  dz = rhs(alg, kPi / 2, Vec{1.0, 0.0});
  CHECK(dz[0] == doctest::Approx(-1.0));
  CHECK(dz[1] == doctest::Approx(0.0));

  CHECK_THROWS_AS(rhs(orm, 0.0, Vec{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("equilibria") {
  CHECK(equilibrium(SystemModel{demo_orm()}).size() == 2);
  CHECK(equilibrium(SystemModel{demo_orm()}).norm() == 0.0);

  Vec crm_eq = equilibrium(SystemModel{demo_crm()});
  CHECK(crm_eq[0] == doctest::Approx(3.0));
  CHECK(crm_eq[1] == 0.0);
  CHECK(crm_eq[2] == 0.0);

  Vec mrac_eq = equilibrium(SystemModel{mrac2()});
  CHECK(mrac_eq.size() == 4);
  CHECK(mrac_eq.norm() == 0.0);
}

TEST_CASE("rhs vanishes at every equilibrium") {
  std::vector<SystemModel> systems;
  systems.emplace_back(demo_orm());
  systems.emplace_back(demo_crm());
  systems.emplace_back(mrac2());
  systems.emplace_back(sincos_system());
  for (const auto& sys : systems)
    for (double t : {0.0, 1.3, 42.0})
      CHECK(rhs(sys, t, equilibrium(sys)).norm() == doctest::Approx(0.0));
}

TEST_CASE("lyapunov values") {
  SystemModel orm = demo_orm();
  CHECK(lyapunov_value(orm, Vec{3.0, 4.0}) == doctest::Approx(25.0));

  SystemModel orm4 = OrmScalar(-1.0, 1.0, 4.0, 3.0);
  CHECK(lyapunov_value(orm4, Vec{0.0, 2.0}) == doctest::Approx(1.0));

  SystemModel crm = demo_crm();
  CHECK(lyapunov_value(crm, Vec{7.0, 0.0, 0.0}) == doctest::Approx(0.0));
  CHECK(lyapunov_value(crm, Vec{1.8, -1.2, -2.0}) == doctest::Approx(5.44));
}

TEST_CASE("vdot: analytic bounds") {
  SystemModel orm = demo_orm();
  VdotPair vd = vdot_bound(orm, Vec{2.0, 5.0});
  CHECK(vd.bound == doctest::Approx(-8.0));
  CHECK(vd.actual == doctest::Approx(-8.0).epsilon(1e-12));

  vd = vdot_bound(orm, Vec{0.0, 123.0});
  CHECK(vd.actual == doctest::Approx(0.0));
  CHECK(vd.bound == doctest::Approx(0.0));

  SystemModel crm = demo_crm();
  vd = vdot_bound(crm, Vec{1.5, 1.0, -7.0});
  CHECK(vd.bound == doctest::Approx(-4.0));
  CHECK(vd.actual == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("vdot: exact cancellation on random states (b = 1)") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> state(-5.0, 5.0);
  std::uniform_real_distribution<double> par(0.2, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = -par(rng), gamma = par(rng), rbar = par(rng);
    SystemModel orm = OrmScalar(a, 1.0, gamma, rbar);
    Vec z{state(rng), state(rng)};
    VdotPair vd = vdot_bound(orm, z);
    CHECK(std::fabs(vd.actual - vd.bound) <= 1e-12);

    const double ell = -par(rng);
    SystemModel crm = CrmScalar(a, 1.0, gamma, ell, rbar);
    Vec zc{state(rng), state(rng), state(rng)};
    vd = vdot_bound(crm, zc);
    CHECK(std::fabs(vd.actual - vd.bound) <= 1e-12);
  }
}

TEST_CASE("vdot: update law cancels the cross terms for the vector loop") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Mat a(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) a(i, j) = u(rng);
    for (std::size_t i = 0; i < 2; ++i)
      a(i, i) -= std::fabs(a(i, 0)) + std::fabs(a(i, 1)) + 0.5;
    MracSystem sys(a, Vec{u(rng), 1.0 + std::fabs(u(rng))},
                   Vec{u(rng), u(rng)}, Mat::identity(2),
                   Signal::constant(2.0));
    SystemModel model = sys;
    for (int k = 0; k < 100; ++k) {
      Vec z(4);
      for (std::size_t i = 0; i < 4; ++i) z[i] = 5.0 * u(rng);
      VdotPair vd = vdot_bound(model, 0.7 * k, z);
      CHECK(vd.actual <= vd.bound + 1e-9);
    }
  }
}

TEST_CASE("scalar loop equals the 1-dimensional vector loop (gamma = 1)") {
  const double a = -2.0, rbar = 3.0;
  SystemModel orm = OrmScalar(a, 1.0, 1.0, rbar);
  Mat am(1, 1), qm(1, 1);
  am(0, 0) = a;
  qm(0, 0) = 2.0 * std::fabs(a);  // makes P = 1 and C = b
  MracSystem mrac(am, Vec{1.0}, Vec{0.7}, qm, Signal::constant(rbar));
  CHECK(mrac.p()(0, 0) == doctest::Approx(1.0));
  CHECK(mrac.reference_state(13.0)[0] ==
        doctest::Approx(-rbar / a));  // settled at xbar

  SystemModel mrac_model = mrac;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    Vec z{u(rng), u(rng)};
    Vec d1 = rhs(orm, 3.1 * i, z);
    Vec d2 = rhs(mrac_model, 3.1 * i, z);
    CHECK(d1[0] == doctest::Approx(d2[0]).epsilon(1e-12));
    CHECK(d1[1] == doctest::Approx(d2[1]).epsilon(1e-12));
  }
}

TEST_CASE("mrac reference state solves the reference dynamics") {
  SUBCASE("constant command settles exactly") {
    MracSystem sys = mrac2();
    // x_eq = -A^-1 B rbar = (1.5, 0).
    Vec xm = sys.reference_state(0.0);
    CHECK(xm[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(xm[1] == doctest::Approx(0.0));
    CHECK((sys.reference_state(7.7) - xm).norm() <= 1e-14);
  }

  SUBCASE("harmonic command: steady response, checked against the ODE") {
    Mat a(1, 1);
    a(0, 0) = -1.0;
    MracSystem sys(a, Vec{1.0}, Vec{0.0}, Mat::identity(1),
                   Signal::sinusoid(1.0, 1.0, 0.0));
    // x' = -x + sin t has steady solution (sin t - cos t)/2.
    for (double t : {0.0, 0.9, 4.2})
      CHECK(sys.reference_state(t)[0] ==
            doctest::Approx(0.5 * (std::sin(t) - std::cos(t))).epsilon(1e-10));
  }

  SUBCASE("piecewise command: continuous, exact per segment") {
    Mat a(1, 1);
    a(0, 0) = -1.0;
    MracSystem sys(a, Vec{1.0}, Vec{0.0}, Mat::identity(1),
                   Signal(PiecewiseConstant{{0.0, 2.0}, {3.0, 1.0}}));
    CHECK(sys.reference_state(0.0)[0] == doctest::Approx(3.0));
    CHECK(sys.reference_state(2.0)[0] == doctest::Approx(3.0));
    // After the switch: 1 + 2 exp(-(t-2)).
    CHECK(sys.reference_state(4.0)[0] ==
          doctest::Approx(1.0 + 2.0 * std::exp(-2.0)).epsilon(1e-12));
  }

  SUBCASE("finite differences match A x_m + B r") {
    MracSystem sys(mat2x2(), Vec{0.0, 1.0}, Vec{0.0, 0.0}, Mat::identity(2),
                   Signal(SinusoidSum{{{1.0, 2.0, 0.3}, {0.5, 0.0, kPi / 2}}}));
    const double dt = 1e-5;
    for (double t : {0.3, 2.1}) {
      Vec num = (1.0 / (2.0 * dt)) *
                (sys.reference_state(t + dt) - sys.reference_state(t - dt));
      const double r = sys.reference()(t);
      Vec want = sys.a() * sys.reference_state(t);
      for (std::size_t i = 0; i < 2; ++i) want[i] += sys.b()[i] * r;
      CHECK((num - want).norm() <= 1e-6);
    }
  }
}

TEST_CASE("system config json round-trip") {
  std::vector<SystemModel> systems;
  systems.emplace_back(demo_orm());
  systems.emplace_back(demo_crm());
  systems.emplace_back(mrac2());
  systems.emplace_back(sincos_system());
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& sys : systems) {
    SystemModel back = system_from_json(to_json(sys));
    CHECK(system_tag(back) == system_tag(sys));
    for (int i = 0; i < 20; ++i) {
      Vec z(state_dim(sys));
      for (std::size_t k = 0; k < z.size(); ++k) z[k] = u(rng);
      const double t = 0.37 * i;
      CHECK((rhs(back, t, z) - rhs(sys, t, z)).norm() <= 1e-14);
    }
  }
}

TEST_CASE("system config json rejects bad fields") {
  nlohmann::json j = to_json(SystemModel{demo_orm()});
  j["gamma"] = -1.0;
  CHECK_THROWS_WITH_AS(system_from_json(j), "gamma: must be positive",
                       std::invalid_argument);
  j.erase("kind");
  CHECK_THROWS_AS(system_from_json(j), std::invalid_argument);

  nlohmann::json m = to_json(SystemModel{mrac2()});
  m["Q"][0][1] = 5.0;  // asymmetric
  CHECK_THROWS_AS(system_from_json(m), std::invalid_argument);
}
