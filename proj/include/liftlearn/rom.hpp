#ifndef LIFTLEARN_ROM_HPP
#define LIFTLEARN_ROM_HPP

#include "liftlearn/lifting.hpp"
#include "liftlearn/opinf.hpp"
#include "liftlearn/pod.hpp"
#include "liftlearn/simulate.hpp"

namespace liftlearn {

// Reduced trajectories whose state norm exceeds this are reported as diverged.
inline constexpr double kRomDivergenceThreshold = 1e12;

// A_r x_r + H~_r (x_r (x~) x_r) + B_r u.
Vector rom_rhs(const ReducedQuadraticModel &model, const Vector &x_r, const Vector &u);

// Same quantity through the redundant H_r (x_r (x) x_r). Cross-check path.
Vector rom_rhs_expanded(const ReducedQuadraticModel &model, const Vector &x_r, const Vector &u);

// RK4 trajectory of the reduced model with y_r = C_r x_r attached as outputs.
SnapshotSet simulate_rom(const ReducedQuadraticModel &model, const Vector &x_r0, TimeSpan span,
                         double dt, const InputSignal &input = constant_input());

// Phi_r^T T(delta_0, d(delta)_0).
Vector reduced_initial_state(const PodBasis &basis, const SwingState &x0);

struct ErrorReport
{
  double linf_ref = 0.0;     // max_t |y(t)|
  Vector rel_error_series;   // |y - y_r| / linf_ref
  double max_rel_error = 0.0;
  TimeSpan horizon;
  Vector times;
  Vector y_full;
  Vector y_rom;
};

// Relative output error e(t) = |y(t) - y_r(t)| / ||y||_{L_inf(T)}.
ErrorReport evaluate(const Vector &y_full, const Vector &y_rom, const Vector &times);

}  // namespace liftlearn

#endif  // LIFTLEARN_ROM_HPP
