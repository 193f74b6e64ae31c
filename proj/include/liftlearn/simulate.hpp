#ifndef LIFTLEARN_SIMULATE_HPP
#define LIFTLEARN_SIMULATE_HPP

#include <functional>
#include <limits>
#include <optional>

#include "liftlearn/common.hpp"
#include "liftlearn/swing_model.hpp"

namespace liftlearn {

struct TimeSpan
{
  double start = 0.0;
  double stop = 0.0;

  double length() const { return stop - start; }
};

//
// Uniformly sampled trajectory data. Columns are samples; `states` may hold
// physical (delta; d(delta)), lifted or reduced coordinates.
//
struct SnapshotSet
{
  Vector times;
  Matrix states;
  std::optional<Matrix> derivatives;
  Matrix inputs;   // q x S
  Matrix outputs;  // p x S, empty when not attached

  Index samples() const { return times.size(); }
  Index state_dim() const { return states.rows(); }
  double step() const;

  // Throws ContractViolation if column counts disagree or the time grid is
  // not uniform to 1e-12 relative.
  void validate() const;
};

// Integration stopped on a non-finite state or one whose norm exceeded the
// configured threshold.
class IntegrationDiverged : public NumericalError
{
public:
  IntegrationDiverged(double time, const std::string &what);
  double time() const { return time_; }

private:
  double time_;
};

using VectorField = std::function<Vector(double t, const Vector &x, const Vector &u)>;
using InputSignal = std::function<Vector(double t)>;

InputSignal constant_input(double value = 1.0);

// Number of samples on [start, stop] with step dt, endpoints included.
Index sample_count(TimeSpan span, double dt);

// Classical fixed-step RK4, sampling every step. The input is evaluated at the
// stage times; column k of `inputs` is input(t_k).
SnapshotSet integrate(const VectorField &rhs, const Vector &x0, TimeSpan span, double dt,
                      const InputSignal &input,
                      double divergence_threshold = std::numeric_limits<double>::infinity());

// Full nonlinear swing trajectory with stacked (delta; d(delta)) states and
// outputs y = C_s delta attached. The input must be scalar.
SnapshotSet collect_swing_snapshots(const SwingNetwork &net, const SwingState &x0, TimeSpan span,
                                    double dt, const InputSignal &input = constant_input());

// Applies the lifting map to every column. Times, inputs and outputs carry over.
SnapshotSet lift_snapshots(const SnapshotSet &snap);

enum class DerivativeScheme
{
  Forward,
  Central,
};

// Forward differences, with a backward difference for the last column. The
// central scheme uses one-sided differences at both ends.
SnapshotSet derivative_snapshots(const SnapshotSet &snap,
                                 DerivativeScheme scheme = DerivativeScheme::Forward);

// Attaches rhs(t_k, x_k, u_k) as derivatives. Used by oracles only.
SnapshotSet exact_derivative_snapshots(const SnapshotSet &snap, const VectorField &rhs);

}  // namespace liftlearn

#endif  // LIFTLEARN_SIMULATE_HPP
