#include "liftlearn/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "json.hpp"

namespace liftlearn {

using nlohmann::json;

StageError::StageError(std::string stage, Kind kind, const std::string &what)
    : std::runtime_error("stage '" + stage + "': " + what), stage_(std::move(stage)), kind_(kind)
{
}

namespace {

template <typename F>
auto stage(const char *name, F &&f) -> decltype(f())
{
  try
  {
    return f();
  }
  catch (const StageError &)
  {
    throw;
  }
  catch (const ParseError &e)
  {
    throw StageError(name, StageError::Kind::Config, e.what());
  }
  catch (const ConfigError &e)
  {
    throw StageError(name, StageError::Kind::Config, e.what());
  }
  catch (const std::exception &e)
  {
    throw StageError(name, StageError::Kind::Numerical, e.what());
  }
}

json vec_json(const Vector &v)
{
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

std::string method_suffix(ReductionMethod method)
{
  return method == ReductionMethod::Learned ? "" : "_intrusive";
}

// Lifted derivative snapshots according to the configured mode.
SnapshotSet lifted_training_data(const SwingNetwork &net, const SnapshotSet &full,
                                 DerivativeMode mode)
{
  SnapshotSet lifted = lift_snapshots(full);
  switch (mode)
  {
  case DerivativeMode::ForwardDifference:
    return derivative_snapshots(lifted, DerivativeScheme::Forward);
  case DerivativeMode::CentralDifference:
    return derivative_snapshots(lifted, DerivativeScheme::Central);
  case DerivativeMode::ExactRhs:
  {
    Matrix dx(lifted.state_dim(), lifted.samples());
    for (Index k = 0; k < full.samples(); ++k)
    {
      dx.col(k) = lifted_chain_rule_derivative(net, SwingState::from_stacked(full.states.col(k)),
                                               full.inputs(0, k));
    }
    lifted.derivatives = std::move(dx);
    return lifted;
  }
  }
  return lifted;
}

Vector first_output(const SnapshotSet &snap)
{
  return snap.outputs.row(0).transpose();
}

}  // namespace

DerivativeMode parse_derivative_mode(const std::string &name)
{
  if (name == "forward-difference")
  {
    return DerivativeMode::ForwardDifference;
  }
  if (name == "central-difference")
  {
    return DerivativeMode::CentralDifference;
  }
  if (name == "exact-rhs")
  {
    return DerivativeMode::ExactRhs;
  }
  throw ConfigError("unknown derivative mode '" + name +
                    "' (expected forward-difference, central-difference or exact-rhs)");
}

std::string to_string(DerivativeMode mode)
{
  switch (mode)
  {
  case DerivativeMode::ForwardDifference:
    return "forward-difference";
  case DerivativeMode::CentralDifference:
    return "central-difference";
  case DerivativeMode::ExactRhs:
    return "exact-rhs";
  }
  return "forward-difference";
}

void ExperimentConfig::validate() const
{
  if (network_path.empty())
  {
    throw ConfigError("config: no network file given");
  }
  if (!(std::isfinite(dt) && dt > 0.0))
  {
    throw ConfigError("config: dt must be positive");
  }
  if (!(t_span.stop > t_span.start) || !(dt < t_span.length()))
  {
    throw ConfigError("config: need t_span[0] < t_span[1] and dt < t_span[1] - t_span[0]");
  }
  if (!r_override && !(tol > 0.0 && tol < 1.0))
  {
    throw ConfigError("config: tol must lie in (0, 1)");
  }
  if (r_override && *r_override < 1)
  {
    throw ConfigError("config: r must be at least 1");
  }
  if (!(std::isfinite(mu) && mu >= 0.0))
  {
    throw ConfigError("config: mu must be non-negative");
  }
  if (initial_condition.kind == InitialCondition::Kind::Random &&
      !(initial_condition.magnitude >= 0.0))
  {
    throw ConfigError("config: initial_condition.magnitude must be non-negative");
  }
  if (!std::isfinite(input))
  {
    throw ConfigError("config: input must be finite");
  }
}

ExperimentConfig parse_config(const std::string &text, const fs::path &base_dir,
                              const std::string &source)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError(source + ": syntax error: " + e.what());
  }
  if (!j.is_object())
  {
    throw ConfigError(source + ": top level must be an object");
  }

  ExperimentConfig c;
  try
  {
    if (j.contains("network"))
    {
      fs::path p = j.at("network").get<std::string>();
      c.network_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (j.contains("t_span"))
    {
      const auto span = j.at("t_span").get<std::vector<double>>();
      if (span.size() != 2)
      {
        throw ConfigError(source + ": field 't_span' must have two entries");
      }
      c.t_span = {span[0], span[1]};
    }
    c.dt = j.value("dt", c.dt);
    c.tol = j.value("tol", c.tol);
    c.mu = j.value("mu", c.mu);
    c.seed = j.value("seed", c.seed);
    c.input = j.value("input", c.input);
    if (j.contains("r") && !j.at("r").is_null())
    {
      c.r_override = j.at("r").get<Index>();
    }
    if (j.contains("derivative_mode"))
    {
      c.derivative_mode = parse_derivative_mode(j.at("derivative_mode").get<std::string>());
    }
    if (j.contains("output_dir"))
    {
      c.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("initial_condition"))
    {
      const json &ic = j.at("initial_condition");
      const std::string type = ic.value("type", std::string("random"));
      if (type == "zero")
      {
        c.initial_condition.kind = InitialCondition::Kind::Zero;
      }
      else if (type == "random")
      {
        c.initial_condition.kind = InitialCondition::Kind::Random;
        c.initial_condition.magnitude = ic.value("magnitude", c.initial_condition.magnitude);
      }
      else if (type == "explicit")
      {
        c.initial_condition.kind = InitialCondition::Kind::Explicit;
        const auto a = ic.at("angles").get<std::vector<double>>();
        const auto v = ic.at("velocities").get<std::vector<double>>();
        c.initial_condition.angles = Eigen::Map<const Vector>(a.data(), static_cast<Index>(a.size()));
        c.initial_condition.velocities = Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
      }
      else
      {
        throw ConfigError(source + ": field 'initial_condition.type' must be zero, random or explicit");
      }
    }
  }
  catch (const json::exception &e)
  {
    throw ConfigError(source + ": " + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path &path)
{
  std::string text;
  try
  {
    text = io::read_text(path);
  }
  catch (const std::exception &e)
  {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.parent_path(), path.string());
}

std::string format_config(const ExperimentConfig &c)
{
  json j;
  j["network"] = c.network_path.string();
  j["t_span"] = {c.t_span.start, c.t_span.stop};
  j["dt"] = c.dt;
  j["tol"] = c.tol;
  j["r"] = c.r_override ? json(*c.r_override) : json(nullptr);
  j["mu"] = c.mu;
  j["derivative_mode"] = to_string(c.derivative_mode);
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  j["input"] = c.input;
  json ic;
  switch (c.initial_condition.kind)
  {
  case InitialCondition::Kind::Zero:
    ic["type"] = "zero";
    break;
  case InitialCondition::Kind::Random:
    ic["type"] = "random";
    ic["magnitude"] = c.initial_condition.magnitude;
    break;
  case InitialCondition::Kind::Explicit:
    ic["type"] = "explicit";
    ic["angles"] = vec_json(c.initial_condition.angles);
    ic["velocities"] = vec_json(c.initial_condition.velocities);
    break;
  }
  j["initial_condition"] = ic;
  return j.dump(1) + "\n";
}

SwingState resolve_initial_condition(const InitialCondition &ic, Index n, std::uint64_t seed)
{
  switch (ic.kind)
  {
  case InitialCondition::Kind::Zero:
    return {Vector::Zero(n), Vector::Zero(n)};
  case InitialCondition::Kind::Random:
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-ic.magnitude, ic.magnitude);
    Vector angles(n);
    for (Index i = 0; i < n; ++i)
    {
      angles(i) = ic.magnitude > 0.0 ? dist(rng) : 0.0;
    }
    return {angles, Vector::Zero(n)};
  }
  case InitialCondition::Kind::Explicit:
    if (ic.angles.size() != n || ic.velocities.size() != n)
    {
      throw ConfigError("initial condition has " + std::to_string(ic.angles.size()) + "/" +
                        std::to_string(ic.velocities.size()) +
                        " angle/velocity entries, network has n = " + std::to_string(n));
    }
    return {ic.angles, ic.velocities};
  }
  return {Vector::Zero(n), Vector::Zero(n)};
}

PipelineResult run_pipeline(const ExperimentConfig &config, ReductionMethod method,
                            bool write_artifacts)
{
  const auto start = std::chrono::steady_clock::now();
  stage("config", [&] {
    config.validate();
    return 0;
  });
  const SwingNetwork net = stage("load-network", [&] { return io::read_network(config.network_path); });
  const SwingState x0 = stage("initial-condition", [&] {
    return resolve_initial_condition(config.initial_condition, net.size(), config.seed);
  });
  const InputSignal input = constant_input(config.input);

  const SnapshotSet full = stage("simulate", [&] {
    return collect_swing_snapshots(net, x0, config.t_span, config.dt, input);
  });
  const SnapshotSet lifted = stage("lift", [&] {
    return lifted_training_data(net, full, config.derivative_mode);
  });
  const PodBasis basis = stage("pod", [&] {
    return compute_pod(lifted.states, config.tol, config.r_override);
  });
  const LiftedOperators ops = assemble_lifted_operators(net);

  PipelineResult result;
  result.samples = full.samples();
  result.state_dim = lifted.state_dim();
  result.basis = basis;

  if (method == ReductionMethod::Learned)
  {
    InferenceResult inferred = stage("infer", [&] {
      const Matrix x_r = project(basis, lifted.states);
      const Matrix xdot_r = project(basis, *lifted.derivatives);
      return infer(x_r, xdot_r, lifted.inputs, config.mu, ops.c * basis.basis, basis.id);
    });
    result.rank = inferred.rank;
    result.unknowns = inferred.unknowns;
    result.rank_deficient = inferred.rank_deficient;
    result.warning = inferred.warning;
    result.model = std::move(inferred.model);
  }
  else
  {
    result.model = stage("reduce-intrusive", [&] { return galerkin_reduce(ops, basis); });
  }
  {
    Matrix stacked(result.model.r() + compact_size(result.model.r()) + result.model.q(),
                   result.model.r());
    stacked << result.model.a_r.transpose(), result.model.h_tilde_r.transpose(),
        result.model.b_r.transpose();
    result.solution_norm = stacked.norm();
  }

  const SnapshotSet rom = stage("simulate-rom", [&] {
    return simulate_rom(result.model, reduced_initial_state(basis, x0), config.t_span, config.dt,
                        input);
  });
  result.report = stage("evaluate", [&] {
    return evaluate(first_output(full), first_output(rom), full.times);
  });
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (write_artifacts)
  {
    stage("write", [&] {
      const fs::path &dir = config.output_dir;
      const std::string sfx = method_suffix(method);
      fs::create_directories(dir);
      io::write_spectrum_csv(basis.singular_values, dir / "spectrum.csv");
      io::write_basis_csv(basis, dir / "basis.csv");
      io::write_model(result.model, dir / ("model" + sfx + ".json"));
      io::write_snapshots_csv(full, dir / "full_trajectory.csv");
      io::write_snapshots_csv(rom, dir / ("rom_trajectory" + sfx + ".csv"));
      io::write_error_report_csv(result.report, dir / ("error_report" + sfx + ".csv"));
      if (method == ReductionMethod::Intrusive)
      {
        io::write_lifted_operators(ops, dir / "lifted_operators.json");
      }

      json summary;
      summary["method"] = method == ReductionMethod::Learned ? "learned" : "intrusive";
      summary["network"] = config.network_path.string();
      summary["n"] = net.size();
      summary["samples"] = result.samples;
      summary["state_dim"] = result.state_dim;
      summary["r"] = basis.r;
      summary["tol"] = config.tol;
      summary["mu"] = config.mu;
      summary["dt"] = config.dt;
      summary["t_span"] = {config.t_span.start, config.t_span.stop};
      summary["derivative_mode"] = to_string(config.derivative_mode);
      summary["basis_id"] = basis.id;
      summary["max_rel_error"] = result.report.max_rel_error;
      summary["linf_ref"] = result.report.linf_ref;
      summary["solution_norm"] = result.solution_norm;
      if (method == ReductionMethod::Learned)
      {
        summary["rank"] = result.rank;
        summary["unknowns"] = result.unknowns;
        summary["rank_deficient"] = result.rank_deficient;
      }
      io::write_text(summary.dump(1) + "\n", dir / ("summary" + sfx + ".json"));
      io::write_text(json{{"wall_seconds", result.wall_seconds}}.dump(1) + "\n",
                     dir / ("timing" + sfx + ".json"));
      return 0;
    });
  }
  return result;
}

SnapshotSet run_simulation(const ExperimentConfig &config, bool write_artifacts)
{
  stage("config", [&] {
    config.validate();
    return 0;
  });
  const SwingNetwork net = stage("load-network", [&] { return io::read_network(config.network_path); });
  const SwingState x0 = stage("initial-condition", [&] {
    return resolve_initial_condition(config.initial_condition, net.size(), config.seed);
  });
  SnapshotSet full = stage("simulate", [&] {
    return collect_swing_snapshots(net, x0, config.t_span, config.dt, constant_input(config.input));
  });
  if (write_artifacts)
  {
    stage("write", [&] {
      io::write_snapshots_csv(full, config.output_dir / "full_trajectory.csv");
      io::write_snapshots_binary(full, config.output_dir / "full_trajectory.bin");
      return 0;
    });
  }
  return full;
}

ErrorReport evaluate_stored_model(const ExperimentConfig &config, const fs::path &model_path,
                                  const fs::path &basis_path, bool write_artifacts)
{
  const ReducedQuadraticModel model = stage("load-model", [&] { return io::read_model(model_path); });
  const PodBasis basis = stage("load-basis", [&] { return io::read_basis_csv(basis_path); });
  if (!model.basis_ref.empty() && !basis.id.empty() && model.basis_ref != basis.id)
  {
    throw StageError("load-basis", StageError::Kind::Config,
                     "model was built on basis '" + model.basis_ref + "' but '" +
                         basis_path.string() + "' holds '" + basis.id + "'");
  }
  const SnapshotSet full = run_simulation(config, false);
  const SwingState x0 = SwingState::from_stacked(full.states.col(0));
  const SnapshotSet rom = stage("simulate-rom", [&] {
    require(basis.r == model.r(), "basis width does not match model order");
    return simulate_rom(model, reduced_initial_state(basis, x0), config.t_span, config.dt,
                        constant_input(config.input));
  });
  ErrorReport report = stage("evaluate", [&] {
    return evaluate(first_output(full), first_output(rom), full.times);
  });
  if (write_artifacts)
  {
    stage("write", [&] {
      io::write_error_report_csv(report, config.output_dir / "error_report_eval.csv");
      json summary{{"model", model_path.string()},
                   {"source", model.source},
                   {"r", model.r()},
                   {"max_rel_error", report.max_rel_error},
                   {"linf_ref", report.linf_ref}};
      io::write_text(summary.dump(1) + "\n", config.output_dir / "summary_eval.json");
      return 0;
    });
  }
  return report;
}

std::vector<SweepEntry> sweep_mu(const ExperimentConfig &config, const std::vector<double> &mus,
                                 bool write_artifacts)
{
  std::vector<std::future<SweepEntry>> jobs;
  for (std::size_t k = 0; k < mus.size(); ++k)
  {
    ExperimentConfig c = config;
    c.mu = mus[k];
    c.output_dir = config.output_dir / ("mu_" + std::to_string(k));
    jobs.push_back(std::async(std::launch::async, [c, write_artifacts] {
      SweepEntry entry;
      entry.mu = c.mu;
      try
      {
        const PipelineResult r = run_pipeline(c, ReductionMethod::Learned, write_artifacts);
        entry.solution_norm = r.solution_norm;
        entry.rank = r.rank;
        entry.max_rel_error = r.report.max_rel_error;
      }
      catch (const StageError &e)
      {
        if (e.stage() != "simulate-rom" && e.stage() != "evaluate")
        {
          throw;
        }
        // The model was learned; only its simulation failed. Recompute the norm.
        const SwingNetwork net = io::read_network(c.network_path);
        const SwingState x0 = resolve_initial_condition(c.initial_condition, net.size(), c.seed);
        const SnapshotSet full = collect_swing_snapshots(net, x0, c.t_span, c.dt, constant_input(c.input));
        const SnapshotSet lifted = lifted_training_data(net, full, c.derivative_mode);
        const PodBasis basis = compute_pod(lifted.states, c.tol, c.r_override);
        const auto problem = assemble_problem(project(basis, lifted.states),
                                              project(basis, *lifted.derivatives), lifted.inputs, c.mu);
        const OperatorSolution sol = solve(problem);
        entry.solution_norm = sol.stacked.norm();
        entry.rank = sol.rank;
        entry.note = e.what();
      }
      return entry;
    }));
  }
  std::vector<SweepEntry> entries;
  for (auto &job : jobs)
  {
    entries.push_back(job.get());
  }
  if (write_artifacts)
  {
    std::ostringstream os;
    os.precision(17);
    os << "mu,solution_norm,rank,max_rel_error\n";
    for (const auto &e : entries)
    {
      os << e.mu << ',' << e.solution_norm << ',' << e.rank << ',';
      if (e.max_rel_error)
      {
        os << *e.max_rel_error;
      }
      else
      {
        os << "diverged";
      }
      os << '\n';
    }
    io::write_text(os.str(), config.output_dir / "sweep_mu.csv");
  }
  return entries;
}

bool OracleSummary::all_passed() const
{
  for (const auto &c : checks)
  {
    if (!c.passed)
    {
      return false;
    }
  }
  return !checks.empty();
}

std::string OracleSummary::to_json() const
{
  json j;
  j["passed"] = all_passed();
  json list = json::array();
  for (const auto &c : checks)
  {
    list.push_back({{"name", c.name},
                    {"passed", c.passed},
                    {"measured", c.measured},
                    {"threshold", c.threshold},
                    {"detail", c.detail}});
  }
  j["checks"] = std::move(list);
  return j.dump(1) + "\n";
}

double lifting_exactness_deviation(const SwingNetwork &net, const LiftedOperators &ops,
                                   Index samples, std::uint64_t seed)
{
  const Index n = net.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  for (Index s = 0; s < samples; ++s)
  {
    SwingState state{Vector(n), Vector(n)};
    for (Index i = 0; i < n; ++i)
    {
      state.angles(i) = angle(rng);
      state.velocities(i) = 5.0 * unit(rng);
    }
    const double u = 2.0 * unit(rng);
    const Vector expected = lifted_chain_rule_derivative(net, state, u);
    const Vector actual = lifted_rhs(ops, lift_state(state), u);
    const double scale = std::max(expected.cwiseAbs().maxCoeff(), 1e-300);
    worst = std::max(worst, (actual - expected).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

double kronecker_consistency_deviation(Index draws, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  for (Index k = 0; k < draws; ++k)
  {
    const Index r = 2 + k % 7;
    const Matrix h_tilde = Matrix::NullaryExpr(r, compact_size(r), [&](Index, Index) { return unit(rng); });
    const Vector x = Vector::NullaryExpr(r, [&](Index) { return unit(rng); });
    const Vector full = expand_h(h_tilde) * kron_square(x);
    const Vector compact = h_tilde * compact_kron(x);
    const double scale = h_tilde.cwiseAbs().maxCoeff() * x.squaredNorm();
    worst = std::max(worst, (full - compact).cwiseAbs().maxCoeff() / std::max(scale, 1e-300));
  }
  return worst;
}

AgreementResult intrusive_learned_agreement(const LiftedOperators &ops, const PodBasis &basis,
                                            const SwingState &x0, TimeSpan span, double dt,
                                            double input, std::uint64_t seed)
{
  const ReducedQuadraticModel galerkin = galerkin_reduce(ops, basis);
  const Index n = x0.angles.size();

  // Exact-derivative data from several Galerkin trajectories with varying
  // inputs, so the input column is not constant.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Index trajectories = 6;
  const TimeSpan data_span{0.0, 0.5};
  std::vector<Matrix> xs, dxs, us;
  VectorField field = [&galerkin](double, const Vector &x, const Vector &u) {
    return rom_rhs(galerkin, x, u);
  };
  for (Index k = 0; k < trajectories; ++k)
  {
    SwingState ic{x0.angles, x0.velocities};
    for (Index i = 0; i < n; ++i)
    {
      ic.angles(i) += 0.2 * unit(rng);
      ic.velocities(i) += 0.5 * unit(rng);
    }
    const double amplitude = 0.5 + 0.5 * std::abs(unit(rng));
    const double frequency = 2.0 + 8.0 * std::abs(unit(rng));
    const InputSignal u = [=](double t) {
      return Vector::Constant(1, input + amplitude * std::sin(frequency * t));
    };
    SnapshotSet traj = exact_derivative_snapshots(
        integrate(field, reduced_initial_state(basis, ic), data_span, dt, u, kRomDivergenceThreshold),
        field);
    xs.push_back(traj.states);
    dxs.push_back(*traj.derivatives);
    us.push_back(traj.inputs);
  }
  auto hstack = [](const std::vector<Matrix> &parts) {
    Index cols = 0;
    for (const auto &p : parts)
    {
      cols += p.cols();
    }
    Matrix out(parts.front().rows(), cols);
    Index c = 0;
    for (const auto &p : parts)
    {
      out.middleCols(c, p.cols()) = p;
      c += p.cols();
    }
    return out;
  };

  const InferenceResult learned = infer(hstack(xs), hstack(dxs), hstack(us), 0.0, galerkin.c_r, basis.id);

  const Vector xr0 = reduced_initial_state(basis, x0);
  const SnapshotSet a = simulate_rom(galerkin, xr0, span, dt, constant_input(input));
  const SnapshotSet b = simulate_rom(learned.model, xr0, span, dt, constant_input(input));

  AgreementResult result;
  result.max_output_deviation = (a.outputs - b.outputs).cwiseAbs().maxCoeff();
  result.r = basis.r;
  result.rank = learned.rank;
  result.unknowns = learned.unknowns;
  return result;
}

OracleSummary run_oracle_suite(const ExperimentConfig &config, const OracleOptions &options)
{
  stage("config", [&] {
    config.validate();
    return 0;
  });
  const SwingNetwork net = stage("load-network", [&] { return io::read_network(config.network_path); });
  const SwingState x0 = resolve_initial_condition(config.initial_condition, net.size(), config.seed);

  OracleSummary summary;

  LiftedOperators ops = assemble_lifted_operators(net);
  {
    LiftedOperators checked = ops;
    if (options.perturb_h != 0.0 && !checked.h.terms().empty())
    {
      checked.h.terms().front().value += options.perturb_h;
    }
    const double dev = stage("oracle-lifting", [&] {
      return lifting_exactness_deviation(net, checked, options.lifting_samples, config.seed);
    });
    summary.checks.push_back({"lifting-exactness", dev < 1e-11, dev, 1e-11,
                              std::to_string(options.lifting_samples) + " random lifted states"});
  }

  {
    const double dev = kronecker_consistency_deviation(options.kronecker_draws, config.seed);
    summary.checks.push_back({"kronecker-consistency", dev < 1e-12, dev, 1e-12,
                              std::to_string(options.kronecker_draws) + " draws, r in [2, 8]"});
  }

  const SnapshotSet full = stage("simulate", [&] {
    return collect_swing_snapshots(net, x0, config.t_span, config.dt, constant_input(config.input));
  });
  const SnapshotSet lifted = stage("lift", [&] {
    return lifted_training_data(net, full, config.derivative_mode);
  });
  const PodBasis basis = stage("pod", [&] { return compute_pod(lifted.states, config.tol, config.r_override); });

  {
    const ReducedQuadraticModel galerkin = galerkin_reduce(ops, basis);
    std::mt19937_64 rng(config.seed + 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k)
    {
      const Vector xr = Vector::NullaryExpr(basis.r, [&](Index) { return unit(rng); });
      const Vector u = Vector::Constant(1, unit(rng));
      const Vector lhs = project(basis, lifted_rhs(ops, Vector(basis.basis * xr), u(0)));
      const Vector rhs = rom_rhs(galerkin, xr, u);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / std::max(lhs.cwiseAbs().maxCoeff(), 1e-300));
    }
    summary.checks.push_back({"projection-consistency", worst < 1e-11, worst, 1e-11,
                              "Phi^T f(Phi x_r) vs Galerkin model, 100 draws"});
  }

  {
    const PodBasis small = truncate(basis, std::min(basis.r, options.agreement_max_r));
    const AgreementResult agreement = stage("oracle-agreement", [&] {
      return intrusive_learned_agreement(ops, small, x0, config.t_span, config.dt, config.input,
                                         config.seed);
    });
    summary.checks.push_back(
        {"intrusive-learned-agreement",
         agreement.max_output_deviation < 1e-6 && agreement.rank == agreement.unknowns,
         agreement.max_output_deviation, 1e-6,
         "r = " + std::to_string(agreement.r) + ", rank " + std::to_string(agreement.rank) + "/" +
             std::to_string(agreement.unknowns)});
  }

  {
    const Matrix x_r = project(basis, lifted.states);
    const Matrix xdot_r = project(basis, *lifted.derivatives);
    const std::vector<double> mus{0.0, 1e-6, 1e-3, 1.0};
    std::vector<double> norms;
    for (double mu : mus)
    {
      norms.push_back(solve(assemble_problem(x_r, xdot_r, lifted.inputs, mu)).stacked.norm());
    }
    double worst_increase = 0.0;
    std::ostringstream detail;
    detail.precision(6);
    detail << "||X||_F over mu {0, 1e-6, 1e-3, 1}:";
    for (std::size_t k = 0; k < norms.size(); ++k)
    {
      detail << ' ' << norms[k];
      if (k > 0)
      {
        worst_increase = std::max(worst_increase, norms[k] - norms[k - 1]);
      }
    }
    summary.checks.push_back({"regularization-path", worst_increase <= 0.0, worst_increase, 0.0,
                              detail.str()});
  }
  return summary;
}

}  // namespace liftlearn
