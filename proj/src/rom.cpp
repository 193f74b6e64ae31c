#include "liftlearn/rom.hpp"

namespace liftlearn {

namespace {

void check_rom_args(const ReducedQuadraticModel &model, const Vector &x_r, const Vector &u)
{
  require(x_r.size() == model.r(), "rom_rhs: state has length " + std::to_string(x_r.size()) +
                                       ", model order is " + std::to_string(model.r()));
  require(u.size() == model.q(), "rom_rhs: input has length " + std::to_string(u.size()) +
                                     ", model expects " + std::to_string(model.q()));
}

}  // namespace

Vector rom_rhs(const ReducedQuadraticModel &model, const Vector &x_r, const Vector &u)
{
  check_rom_args(model, x_r, u);
  Vector dx = model.a_r * x_r;
  dx.noalias() += model.h_tilde_r * compact_kron(x_r);
  dx.noalias() += model.b_r * u;
  return dx;
}

Vector rom_rhs_expanded(const ReducedQuadraticModel &model, const Vector &x_r, const Vector &u)
{
  check_rom_args(model, x_r, u);
  Vector dx = model.a_r * x_r;
  dx.noalias() += model.h_r * kron_square(x_r);
  dx.noalias() += model.b_r * u;
  return dx;
}

SnapshotSet simulate_rom(const ReducedQuadraticModel &model, const Vector &x_r0, TimeSpan span,
                         double dt, const InputSignal &input)
{
  model.validate();
  require(x_r0.size() == model.r(), "simulate_rom: initial state has wrong length");
  VectorField field = [&model](double, const Vector &x, const Vector &u) {
    return rom_rhs(model, x, u);
  };
  SnapshotSet snap = integrate(field, x_r0, span, dt, input, kRomDivergenceThreshold);
  snap.outputs = model.c_r * snap.states;
  return snap;
}

Vector reduced_initial_state(const PodBasis &basis, const SwingState &x0)
{
  return project(basis, lift_state(x0).values());
}

ErrorReport evaluate(const Vector &y_full, const Vector &y_rom, const Vector &times)
{
  require(y_full.size() == y_rom.size() && y_full.size() == times.size() && times.size() > 0,
          "evaluate: output series and times must have equal, non-zero length");
  ErrorReport report;
  report.linf_ref = y_full.cwiseAbs().maxCoeff();
  if (!(report.linf_ref > 0.0))
  {
    throw UndefinedRelativeError("evaluate: reference output is identically zero");
  }
  report.rel_error_series = (y_full - y_rom).cwiseAbs() / report.linf_ref;
  report.max_rel_error = report.rel_error_series.maxCoeff();
  report.horizon = {times(0), times(times.size() - 1)};
  report.times = times;
  report.y_full = y_full;
  report.y_rom = y_rom;
  return report;
}

}  // namespace liftlearn
