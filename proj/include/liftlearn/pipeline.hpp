#ifndef LIFTLEARN_PIPELINE_HPP
#define LIFTLEARN_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "liftlearn/intrusive.hpp"
#include "liftlearn/io.hpp"
#include "liftlearn/rom.hpp"

namespace liftlearn {

namespace fs = std::filesystem;

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Failure inside one pipeline stage; `stage()` names it.
class StageError : public std::runtime_error
{
public:
  enum class Kind
  {
    Config,
    Numerical,
  };

  StageError(std::string stage, Kind kind, const std::string &what);
  const std::string &stage() const { return stage_; }
  Kind kind() const { return kind_; }

private:
  std::string stage_;
  Kind kind_;
};

enum class DerivativeMode
{
  ForwardDifference,
  CentralDifference,
  ExactRhs,  // evaluates the known dynamics; oracle use only
};

DerivativeMode parse_derivative_mode(const std::string &name);
std::string to_string(DerivativeMode mode);

struct InitialCondition
{
  enum class Kind
  {
    Zero,
    Random,    // angles uniform in [-magnitude, magnitude], zero velocities
    Explicit,
  };
  Kind kind = Kind::Random;
  double magnitude = 0.1;  // [rad]
  Vector angles;
  Vector velocities;
};

struct ExperimentConfig
{
  fs::path network_path;
  TimeSpan t_span{0.0, 3.0};  // [s]
  double dt = 1e-3;           // [s]
  InitialCondition initial_condition;
  double tol = 1.5e-4;
  std::optional<Index> r_override;
  double mu = 1e-3;
  DerivativeMode derivative_mode = DerivativeMode::ForwardDifference;
  fs::path output_dir = "out";
  std::uint64_t seed = 1;
  double input = 1.0;  // constant input value u(t)

  // Throws ConfigError.
  void validate() const;
};

// Relative paths inside the file (the network) resolve against the file's
// directory. Missing keys keep their defaults.
ExperimentConfig load_config(const fs::path &path);
ExperimentConfig parse_config(const std::string &text, const fs::path &base_dir = {},
                              const std::string &source = "<config>");
std::string format_config(const ExperimentConfig &config);

SwingState resolve_initial_condition(const InitialCondition &ic, Index n, std::uint64_t seed);

enum class ReductionMethod
{
  Learned,    // lift and learn
  Intrusive,  // Galerkin projection of the exact lifted operators
};

struct PipelineResult
{
  ErrorReport report;
  ReducedQuadraticModel model;
  PodBasis basis;
  Index samples = 0;
  Index state_dim = 0;
  Index rank = 0;      // learned only
  Index unknowns = 0;  // learned only
  bool rank_deficient = false;
  double solution_norm = 0.0;  // ||[A_r^T; H~_r^T; B_r^T]||_F
  std::optional<std::string> warning;
  double wall_seconds = 0.0;
};

// Simulate, lift, POD, project, infer (or project intrusively), simulate the
// reduced model and evaluate the output error. When `write_artifacts` is set,
// writes spectrum, basis, model, trajectories, error report and summary under
// config.output_dir. All files except timing*.json are bit-reproducible.
PipelineResult run_pipeline(const ExperimentConfig &config,
                            ReductionMethod method = ReductionMethod::Learned,
                            bool write_artifacts = true);

// Full nonlinear trajectory only; writes full_trajectory.{csv,bin}.
SnapshotSet run_simulation(const ExperimentConfig &config, bool write_artifacts = true);

// Re-evaluates a stored model against the configured full simulation.
ErrorReport evaluate_stored_model(const ExperimentConfig &config, const fs::path &model_path,
                                  const fs::path &basis_path, bool write_artifacts = true);

struct SweepEntry
{
  double mu = 0.0;
  double solution_norm = 0.0;
  Index rank = 0;
  std::optional<double> max_rel_error;  // empty if the reduced model diverged
  std::string note;
};

// One pipeline run per mu, executed concurrently into output_dir/mu_<k>.
std::vector<SweepEntry> sweep_mu(const ExperimentConfig &config, const std::vector<double> &mus,
                                 bool write_artifacts = true);

struct OracleCheck
{
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct OracleSummary
{
  std::vector<OracleCheck> checks;
  bool all_passed() const;
  std::string to_json() const;
};

struct OracleOptions
{
  Index lifting_samples = 100;
  Index kronecker_draws = 1000;
  Index agreement_max_r = 6;
  double perturb_h = 0.0;  // added to the first H coefficient before checking exactness
};

// Maximum over random states of ||lifted_rhs - chain rule||_inf / ||chain rule||_inf.
double lifting_exactness_deviation(const SwingNetwork &net, const LiftedOperators &ops,
                                   Index samples, std::uint64_t seed);

// Max over draws of |expand_h(H~)(x (x) x) - H~ (x (x~) x)| / (|H~| |x|^2) for r in [2, 8].
double kronecker_consistency_deviation(Index draws, std::uint64_t seed);

struct AgreementResult
{
  double max_output_deviation = 0.0;
  Index r = 0;
  Index rank = 0;
  Index unknowns = 0;
};

// Learns a model with mu = 0 from exact-derivative data generated by the
// Galerkin model itself (so the data lies in span(Phi_r)) and compares the
// output trajectories of the two models from `x0` under the constant input.
AgreementResult intrusive_learned_agreement(const LiftedOperators &ops, const PodBasis &basis,
                                            const SwingState &x0, TimeSpan span, double dt,
                                            double input, std::uint64_t seed);

OracleSummary run_oracle_suite(const ExperimentConfig &config, const OracleOptions &options = {});

}  // namespace liftlearn

#endif  // LIFTLEARN_PIPELINE_HPP
