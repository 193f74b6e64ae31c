#include "doctest.h"
#include "oracles.hpp"

#include "liftlearn/swing_model.hpp"
#include "liftlearn/synthetic.hpp"

using namespace liftlearn;

namespace {

SwingNetwork symmetric_network(Index n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  SwingParameters p = oracle::random_network(n, seed).parameters();
  for (Index i = 0; i < n; ++i)
  {
    for (Index j = i + 1; j < n; ++j)
    {
      p.coupling(i, j) = p.coupling(j, i) = u01(rng);
    }
  }
  p.phase_shift.setZero();
  return SwingNetwork(p);
}

}  // namespace

TEST_CASE("swing_rhs matches the scalar equation oscillator by oscillator")
{
  for (Index n : {2, 3, 7, 15})
  {
    const SwingNetwork net = oracle::random_network(n, 100 + n);
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial)
    {
      const Vector delta = Vector::NullaryExpr(n, [&](Index) { return u(rng); });
      const Vector dot = Vector::NullaryExpr(n, [&](Index) { return u(rng); });
      const double input = u(rng);
      const Vector rhs = swing_rhs(net, SwingState{delta, dot}, input);
      for (Index i = 0; i < n; ++i)
      {
        CHECK(rhs(i) == dot(i));
        const double expected = oracle::scalar_acceleration(net.parameters(), delta, dot, input, i);
        CHECK(std::abs(rhs(n + i) - expected) <= 1e-13 * std::max(1.0, std::abs(expected)));
      }
      const Vector stacked = swing_rhs(net, SwingState{delta, dot}.stacked(), input);
      CHECK((stacked - rhs).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("coupling force depends only on angle differences")
{
  const SwingNetwork net = oracle::random_network(6, 3);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial)
  {
    const Vector delta = Vector::NullaryExpr(6, [&](Index) { return u(rng); });
    const double c = u(rng);
    const Vector shifted = coupling_force(net, (delta.array() + c).matrix());
    CHECK((shifted - coupling_force(net, delta)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("coupling forces cancel for symmetric K without phase shifts")
{
  const SwingNetwork net = symmetric_network(8, 4);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial)
  {
    const Vector delta = Vector::NullaryExpr(8, [&](Index) { return u(rng); });
    CHECK(std::abs(coupling_force(net, delta).sum()) < 1e-12);
  }
}

TEST_CASE("output is the weighted angle sum")
{
  const SwingNetwork net = oracle::random_network(5, 2, 3);
  const Vector delta = Vector::LinSpaced(5, -1.0, 1.0);
  const Vector y = swing_output(net, delta);
  REQUIRE(y.size() == 3);
  for (Index k = 0; k < 3; ++k)
  {
    double expected = 0.0;
    for (Index i = 0; i < 5; ++i)
    {
      expected += net.output_weights()(k, i) * delta(i);
    }
    CHECK(y(k) == doctest::Approx(expected).epsilon(1e-15));
  }
  CHECK(mean_output_row(4).sum() == doctest::Approx(1.0));
  CHECK(mean_output_row(4)(0, 2) == 0.25);
}

TEST_CASE("stacked state round trip")
{
  const SwingState s{Vector::LinSpaced(3, 0, 2), Vector::LinSpaced(3, 5, 7)};
  const SwingState back = SwingState::from_stacked(s.stacked());
  CHECK(back.angles == s.angles);
  CHECK(back.velocities == s.velocities);
}

TEST_CASE("network validation rejects inconsistent parameters")
{
  const SwingParameters good = oracle::random_network(4, 1).parameters();
  CHECK_NOTHROW(SwingNetwork{good});

  SwingParameters p = good;
  p.inertia(2) = 0.0;
  CHECK_THROWS_AS(SwingNetwork{p}, ContractViolation);

  p = good;
  p.damping(0) = -1.0;
  CHECK_THROWS_AS(SwingNetwork{p}, ContractViolation);

  p = good;
  p.coupling(1, 1) = 0.5;
  CHECK_THROWS_AS(SwingNetwork{p}, ContractViolation);

  p = good;
  p.coupling(0, 1) = -0.5;
  CHECK_THROWS_AS(SwingNetwork{p}, ContractViolation);

  p = good;
  p.phase_shift.resize(3, 3);
  CHECK_THROWS_AS(SwingNetwork{p}, ContractViolation);

  p = good;
  p.output_weights.resize(1, 3);
  CHECK_THROWS_AS(SwingNetwork{p}, ContractViolation);

  p = good;
  p.omega_r = 0.0;
  CHECK_THROWS_AS(SwingNetwork{p}, ContractViolation);

  p = good;
  p.power(3) = std::nan("");
  CHECK_THROWS_AS(SwingNetwork{p}, ContractViolation);
}

TEST_CASE("swing_rhs rejects mismatched state sizes")
{
  const SwingNetwork net = oracle::random_network(4, 1);
  CHECK_THROWS_AS(swing_rhs(net, SwingState{Vector::Zero(3), Vector::Zero(4)}, 1.0), ContractViolation);
  CHECK_THROWS_AS(swing_rhs(net, Vector(Vector::Zero(7)), 1.0), ContractViolation);
}

TEST_CASE("synthetic networks are reproducible and balanced at their operating point")
{
  SyntheticNetworkOptions opt;
  opt.n = 12;
  opt.seed = 5;
  const SwingNetwork a = make_synthetic_network(opt);
  const SwingNetwork b = make_synthetic_network(opt);
  CHECK(a.coupling() == b.coupling());
  CHECK(a.power() == b.power());
  CHECK(a.coupling() == a.coupling().transpose());
  CHECK(a.phase_shift() == a.phase_shift().transpose());

  // Ring: each node couples to exactly four neighbours.
  for (Index i = 0; i < opt.n; ++i)
  {
    Index links = 0;
    for (Index j = 0; j < opt.n; ++j)
    {
      links += a.coupling()(i, j) > 0.0;
    }
    CHECK(links == 4);
  }

  opt.topology = Topology::Complete;
  const SwingNetwork c = make_synthetic_network(opt);
  CHECK((c.coupling().array() > 0.0).count() == opt.n * (opt.n - 1));

  opt.seed = 6;
  CHECK(make_synthetic_network(opt).power() != c.power());
  CHECK(parse_topology("ring") == Topology::Ring);
  CHECK_THROWS(parse_topology("star"));
}
