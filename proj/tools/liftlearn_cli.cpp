#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liftlearn/pipeline.hpp"
#include "liftlearn/synthetic.hpp"

namespace ll = liftlearn;

namespace {

enum ExitCode
{
  kOk = 0,
  kConfigError = 1,
  kNumericalFailure = 2,
  kOracleFailure = 3,
};

struct Overrides
{
  std::string config;
  std::string network;
  std::optional<double> t0, t1, dt, tol, mu, input, ic_magnitude;
  std::optional<long> r;
  std::optional<std::string> ic, derivative_mode, output_dir;
  std::optional<std::uint64_t> seed;
};

void add_experiment_options(CLI::App *app, Overrides &o)
{
  app->add_option("-c,--config", o.config, "Experiment config file (JSON)");
  app->add_option("--network", o.network, "Network parameter file (JSON); overrides the config");
  app->add_option("--t0", o.t0, "Start time [s] (default 0)");
  app->add_option("--t1", o.t1, "End time [s] (default 3)");
  app->add_option("--dt", o.dt, "RK4 step and sampling interval [s] (default 1e-3)");
  app->add_option("--ic", o.ic, "Initial condition: zero or random (default random)")
      ->check(CLI::IsMember({"zero", "random"}));
  app->add_option("--ic-magnitude", o.ic_magnitude,
                  "Half-width of the random initial angles [rad] (default 0.1)");
  app->add_option("--tol", o.tol,
                  "POD tolerance on sigma_{r+1}/sigma_1, dimensionless (default 1.5e-4)");
  app->add_option("--r", o.r, "Fixed reduced dimension; overrides --tol");
  app->add_option("--mu", o.mu, "Tikhonov weight, dimensionless, >= 0 (default 1e-3)");
  app->add_option("--derivative-mode", o.derivative_mode,
                  "forward-difference, central-difference or exact-rhs (default forward-difference)")
      ->check(CLI::IsMember({"forward-difference", "central-difference", "exact-rhs"}));
  app->add_option("-o,--output-dir", o.output_dir, "Artifact directory (default out)");
  app->add_option("--seed", o.seed, "Seed for the random initial condition (default 1)");
  app->add_option("--input", o.input, "Constant input u [p.u. power] (default 1)");
}

ll::ExperimentConfig resolve_config(const Overrides &o)
{
  ll::ExperimentConfig c = o.config.empty() ? ll::ExperimentConfig{} : ll::load_config(o.config);
  if (!o.network.empty())
  {
    c.network_path = o.network;
  }
  if (o.t0)
  {
    c.t_span.start = *o.t0;
  }
  if (o.t1)
  {
    c.t_span.stop = *o.t1;
  }
  if (o.dt)
  {
    c.dt = *o.dt;
  }
  if (o.tol)
  {
    c.tol = *o.tol;
  }
  if (o.r)
  {
    if (*o.r < 1)
    {
      throw ll::ConfigError("--r must be at least 1");
    }
    c.r_override = static_cast<ll::Index>(*o.r);
  }
  if (o.mu)
  {
    c.mu = *o.mu;
  }
  if (o.input)
  {
    c.input = *o.input;
  }
  if (o.ic)
  {
    c.initial_condition.kind =
        *o.ic == "zero" ? ll::InitialCondition::Kind::Zero : ll::InitialCondition::Kind::Random;
  }
  if (o.ic_magnitude)
  {
    c.initial_condition.magnitude = *o.ic_magnitude;
  }
  if (o.derivative_mode)
  {
    c.derivative_mode = ll::parse_derivative_mode(*o.derivative_mode);
  }
  if (o.output_dir)
  {
    c.output_dir = *o.output_dir;
  }
  if (o.seed)
  {
    c.seed = *o.seed;
  }
  c.validate();
  return c;
}

void print_result(const ll::PipelineResult &r, ll::ReductionMethod method)
{
  std::printf("r                  %ld\n", static_cast<long>(r.basis.r));
  if (method == ll::ReductionMethod::Learned)
  {
    std::printf("rank(A)            %ld / %ld%s\n", static_cast<long>(r.rank),
                static_cast<long>(r.unknowns), r.rank_deficient ? " (rank deficient)" : "");
  }
  std::printf("max relative error %.6e\n", r.report.max_rel_error);
  std::printf("wall time [s]      %.3f\n", r.wall_seconds);
  if (r.warning)
  {
    std::fprintf(stderr, "warning: %s\n", r.warning->c_str());
  }
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{
      "Lift-and-learn reduced models of power-network swing dynamics.\n"
      "Units: time [s], angles [rad], angular velocities [rad/s], inertia J [s],\n"
      "damping D [p.u.], coupling K and power P [p.u.], omega_R [rad/s].\n"
      "Exit codes: 0 success, 1 config error, 2 numerical failure, 3 oracle failure."};
  app.require_subcommand(1);

  Overrides o;
  auto *simulate = app.add_subcommand("simulate", "Integrate the nonlinear swing equations");
  auto *learn = app.add_subcommand("learn", "Run the lift-and-learn pipeline");
  auto *intrusive =
      app.add_subcommand("reduce-intrusive", "Galerkin-project the exact lifted operators");
  auto *evaluate = app.add_subcommand("evaluate", "Evaluate a stored reduced model");
  auto *oracle = app.add_subcommand("oracle", "Run the verification oracles");
  auto *sweep = app.add_subcommand("sweep-mu", "Learn one model per regularization weight");
  for (auto *sub : {simulate, learn, intrusive, evaluate, oracle, sweep})
  {
    add_experiment_options(sub, o);
  }

  std::string model_path, basis_path;
  evaluate->add_option("--model", model_path, "Model file written by learn (model.json)")->required();
  evaluate->add_option("--basis", basis_path, "Basis file written by learn (basis.csv)")->required();

  double perturb_h = 0.0;
  oracle->add_option("--perturb-h", perturb_h,
                     "Added to one lifted quadratic coefficient before the exactness check [1/s]");

  std::vector<double> mus{0.0, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  sweep->add_option("--mus", mus, "Regularization weights (dimensionless)")->delimiter(',');

  auto *make_network = app.add_subcommand("make-network", "Write a seeded synthetic network file");
  ll::SyntheticNetworkOptions net_opts;
  std::string topology = "ring", network_out;
  make_network->add_option("-n", net_opts.n, "Number of oscillators (default 20)");
  make_network->add_option("--topology", topology, "ring or complete (default ring)")
      ->check(CLI::IsMember({"ring", "complete"}));
  make_network->add_option("--seed", net_opts.seed, "Random seed (default 1)");
  make_network->add_option("-o,--output", network_out, "Output file")->required();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try
  {
    if (make_network->parsed())
    {
      net_opts.topology = ll::parse_topology(topology);
      ll::io::write_network(ll::make_synthetic_network(net_opts), network_out);
      return kOk;
    }

    const ll::ExperimentConfig config = resolve_config(o);
    if (simulate->parsed())
    {
      const ll::SnapshotSet snap = ll::run_simulation(config);
      std::printf("samples            %ld\n", static_cast<long>(snap.samples()));
      std::printf("state dimension    %ld\n", static_cast<long>(snap.state_dim()));
    }
    else if (learn->parsed() || intrusive->parsed())
    {
      const auto method = learn->parsed() ? ll::ReductionMethod::Learned : ll::ReductionMethod::Intrusive;
      print_result(ll::run_pipeline(config, method), method);
    }
    else if (evaluate->parsed())
    {
      const ll::ErrorReport report = ll::evaluate_stored_model(config, model_path, basis_path);
      std::printf("max relative error %.6e\n", report.max_rel_error);
    }
    else if (oracle->parsed())
    {
      ll::OracleOptions options;
      options.perturb_h = perturb_h;
      const ll::OracleSummary summary = ll::run_oracle_suite(config, options);
      for (const auto &c : summary.checks)
      {
        std::printf("%-28s %s  measured %.3e  threshold %.1e  %s\n", c.name.c_str(),
                    c.passed ? "PASS" : "FAIL", c.measured, c.threshold, c.detail.c_str());
      }
      std::filesystem::create_directories(config.output_dir);
      ll::io::write_text(summary.to_json(), config.output_dir / "oracle.json");
      return summary.all_passed() ? kOk : kOracleFailure;
    }
    else if (sweep->parsed())
    {
      std::printf("%-12s %-14s %-6s %s\n", "mu", "||X||_F", "rank", "max rel error");
      for (const auto &e : ll::sweep_mu(config, mus))
      {
        std::printf("%-12.3e %-14.6e %-6ld ", e.mu, e.solution_norm, static_cast<long>(e.rank));
        if (e.max_rel_error)
        {
          std::printf("%.6e\n", *e.max_rel_error);
        }
        else
        {
          std::printf("diverged\n");
        }
      }
    }
    return kOk;
  }
  catch (const ll::StageError &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == ll::StageError::Kind::Config ? kConfigError : kNumericalFailure;
  }
  catch (const ll::ConfigError &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
  catch (const ll::ParseError &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
  catch (const ll::ContractViolation &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalFailure;
  }
}
