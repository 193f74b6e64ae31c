#ifndef LIFTLEARN_SYNTHETIC_HPP
#define LIFTLEARN_SYNTHETIC_HPP

#include <cstdint>
#include <string>

#include "liftlearn/swing_model.hpp"

namespace liftlearn {

enum class Topology
{
  Ring,      // each oscillator coupled to its two nearest neighbours on either side
  Complete,  // all pairs coupled
};

Topology parse_topology(const std::string &name);
std::string to_string(Topology topology);

//
// Parameters of a seeded synthetic network. Couplings are symmetric with
// symmetric phase shifts. The net power B is chosen so that `operating_point`
// angles drawn uniformly from [-angle_spread, angle_spread] form an equilibrium,
// B = f_s(delta*), so trajectories started near zero swing towards delta*.
//
struct SyntheticNetworkOptions
{
  Index n = 20;
  Topology topology = Topology::Ring;
  std::uint64_t seed = 1;
  double omega_r = 376.99111843077515;  // 2 pi 60
  double inertia_min = 2.0, inertia_max = 6.0;
  double damping_min = 50.0, damping_max = 100.0;
  double coupling_min = 0.5, coupling_max = 1.5;
  double phase_shift_max = 0.1;
  double angle_spread = 0.2;
};

SwingNetwork make_synthetic_network(const SyntheticNetworkOptions &options);

}  // namespace liftlearn

#endif  // LIFTLEARN_SYNTHETIC_HPP
