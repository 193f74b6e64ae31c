#include "liftlearn/synthetic.hpp"

#include <random>

namespace liftlearn {

Topology parse_topology(const std::string &name)
{
  if (name == "ring")
  {
    return Topology::Ring;
  }
  if (name == "complete")
  {
    return Topology::Complete;
  }
  throw ContractViolation("unknown topology '" + name + "' (expected ring or complete)");
}

std::string to_string(Topology topology)
{
  return topology == Topology::Ring ? "ring" : "complete";
}

SwingNetwork make_synthetic_network(const SyntheticNetworkOptions &o)
{
  require(o.n >= 1, "make_synthetic_network: n must be positive");
  std::mt19937_64 rng(o.seed);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const Index n = o.n;
  SwingParameters p;
  p.omega_r = o.omega_r;
  p.inertia.resize(n);
  p.damping.resize(n);
  for (Index i = 0; i < n; ++i)
  {
    p.inertia(i) = uniform(o.inertia_min, o.inertia_max);
    p.damping(i) = uniform(o.damping_min, o.damping_max);
  }

  p.coupling = Matrix::Zero(n, n);
  p.phase_shift = Matrix::Zero(n, n);
  auto connect = [&](Index i, Index j) {
    if (i == j || p.coupling(i, j) != 0.0)
    {
      return;
    }
    const double k = uniform(o.coupling_min, o.coupling_max);
    const double g = uniform(0.0, o.phase_shift_max);
    p.coupling(i, j) = p.coupling(j, i) = k;
    p.phase_shift(i, j) = p.phase_shift(j, i) = g;
  };
  for (Index i = 0; i < n; ++i)
  {
    if (o.topology == Topology::Complete)
    {
      for (Index j = i + 1; j < n; ++j)
      {
        connect(i, j);
      }
    }
    else
    {
      connect(i, (i + 1) % n);
      connect(i, (i + 2) % n);
    }
  }

  Vector operating_point(n);
  for (Index i = 0; i < n; ++i)
  {
    operating_point(i) = uniform(-o.angle_spread, o.angle_spread);
  }
  p.output_weights = mean_output_row(n);
  p.power = Vector::Zero(n);

  // B is fixed by the operating point, so build once without it.
  const SwingNetwork unloaded(p);
  p.power = coupling_force(unloaded, operating_point);
  return SwingNetwork(std::move(p));
}

}  // namespace liftlearn
