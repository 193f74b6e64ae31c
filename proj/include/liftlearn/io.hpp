#ifndef LIFTLEARN_IO_HPP
#define LIFTLEARN_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "liftlearn/lifting.hpp"
#include "liftlearn/opinf.hpp"
#include "liftlearn/pod.hpp"
#include "liftlearn/rom.hpp"
#include "liftlearn/simulate.hpp"
#include "liftlearn/swing_model.hpp"

namespace liftlearn::io {

namespace fs = std::filesystem;

//
// Network parameter file (JSON):
//
//   {
//     "n": 3, "omega_r": 376.99,
//     "inertia": [...], "damping": [...], "power": [...],
//     "coupling":    [[...], ...]                      dense, row-major
//                 or {"triplets": [[i, j, value], ...]}  zero-based, rest zero
//     "phase_shift": same layouts as coupling
//     "output_weights": [[...], ...] or "mean"
//   }
//
// Syntax errors report the line; content errors name the field.
//
SwingNetwork parse_network(const std::string &text, const std::string &source = "<network>");
SwingNetwork read_network(const fs::path &path);
std::string format_network(const SwingNetwork &net);
void write_network(const SwingNetwork &net, const fs::path &path);

// Snapshot CSV: one column per sample. The first row is `time,t_0,...`; then
// rows labelled state:i, derivative:i, input:i and output:i. Values use 17
// significant digits, so reading back is lossless.
void write_snapshots_csv(const SnapshotSet &snap, std::ostream &os);
void write_snapshots_csv(const SnapshotSet &snap, const fs::path &path);
SnapshotSet read_snapshots_csv(std::istream &is);
SnapshotSet read_snapshots_csv(const fs::path &path);

// Binary snapshots: magic "LLSNAP01", five little-endian uint64 (d, S, q, p,
// has_derivatives), then times, states, derivatives, inputs, outputs as
// column-major native doubles.
void write_snapshots_binary(const SnapshotSet &snap, const fs::path &path);
SnapshotSet read_snapshots_binary(const fs::path &path);

// Reduced model file (JSON) with r, q, p, mu, basis id, source tag and dense
// A_r, H~_r, B_r, C_r (row-major nested arrays).
std::string format_model(const ReducedQuadraticModel &model);
ReducedQuadraticModel parse_model(const std::string &text, const std::string &source = "<model>");
void write_model(const ReducedQuadraticModel &model, const fs::path &path);
ReducedQuadraticModel read_model(const fs::path &path);

// Dense matrix as CSV without labels, 17 significant digits.
void write_matrix_csv(const Matrix &m, const fs::path &path, const std::string &header = {});
Matrix read_matrix_csv(const fs::path &path, bool has_header);

void write_basis_csv(const PodBasis &basis, const fs::path &path);
PodBasis read_basis_csv(const fs::path &path);

// index, sigma, sigma / sigma_1
void write_spectrum_csv(const Vector &singular_values, const fs::path &path);

// t, y, y_r, e
void write_error_report_csv(const ErrorReport &report, const fs::path &path);

// A, B, C dense and H as (row, first, second, value) terms.
void write_lifted_operators(const LiftedOperators &ops, const fs::path &path);

std::string read_text(const fs::path &path);
void write_text(const std::string &text, const fs::path &path);

}  // namespace liftlearn::io

#endif  // LIFTLEARN_IO_HPP
