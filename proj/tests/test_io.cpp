#include "doctest.h"
#include "oracles.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "liftlearn/intrusive.hpp"
#include "liftlearn/io.hpp"

using namespace liftlearn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / "liftlearn_test_io";
  fs::create_directories(dir);
  return dir / name;
}

const char *kSmallNetwork = R"({
  "n": 3,
  "omega_r": 376.99111843077515,
  "inertia": [4.0, 3.0, 5.0],
  "damping": [1.0, 1.5, 2.0],
  "power": [0.5, -0.2, -0.3],
  "coupling": {"triplets": [[0, 1, 1.2], [1, 0, 1.2], [1, 2, 0.7], [2, 1, 0.7]]},
  "phase_shift": [[0, 0.05, 0], [0.05, 0, 0], [0, 0, 0]],
  "output_weights": "mean"
})";

}  // namespace

TEST_CASE("network file with triplets and mean output parses")
{
  const SwingNetwork net = io::parse_network(kSmallNetwork);
  CHECK(net.size() == 3);
  CHECK(net.coupling()(1, 2) == 0.7);
  CHECK(net.coupling()(0, 2) == 0.0);
  CHECK(net.phase_shift()(1, 0) == 0.05);
  CHECK(net.output_weights()(0, 1) == doctest::Approx(1.0 / 3.0));

  const SwingNetwork back = io::parse_network(io::format_network(net));
  CHECK(back.coupling() == net.coupling());
  CHECK(back.phase_shift() == net.phase_shift());
  CHECK(back.inertia() == net.inertia());
  CHECK(back.output_weights() == net.output_weights());
  CHECK(back.omega_r() == net.omega_r());
}

TEST_CASE("network parse errors name the line or the field")
{
  auto message = [](const std::string &text) {
    try
    {
      io::parse_network(text, "net.json");
    }
    catch (const ParseError &e)
    {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\n \"n\": 3,\n \"inertia\": [1, 2,\n}") .find("net.json:4") != std::string::npos);

  std::string text = kSmallNetwork;
  CHECK(message(std::string(text).replace(text.find("\"damping\""), 9, "\"dampin\"")).find("'damping'") !=
        std::string::npos);
  CHECK(message(std::string(text).replace(text.find("[4.0, 3.0, 5.0]"), 15, "[4.0, 3.0]")).find("'inertia'") !=
        std::string::npos);
  CHECK(message(std::string(text).replace(text.find("[1, 2, 0.7]"), 11, "[1, 7, 0.7]")).find("coupling") !=
        std::string::npos);
  CHECK(message(std::string(text).replace(text.find("\"mean\""), 6, "\"median\"")).find("output_weights") !=
        std::string::npos);
  CHECK(message(std::string(text).replace(text.find("4.0,"), 4, "-4.0,")).find("inertia") != std::string::npos);
  CHECK(message("[1, 2]").find("object") != std::string::npos);
  CHECK_THROWS_AS(io::read_network(scratch("missing.json")), ParseError);
}

TEST_CASE("snapshot CSV and binary round trips are lossless")
{
  const SwingNetwork net = io::parse_network(kSmallNetwork);
  const SnapshotSet snap = derivative_snapshots(
      lift_snapshots(collect_swing_snapshots(net, {Vector::LinSpaced(3, -0.3, 0.3), Vector::Zero(3)}, {0.0, 0.05}, 1e-3)));

  std::stringstream ss;
  io::write_snapshots_csv(snap, ss);
  const SnapshotSet csv = io::read_snapshots_csv(ss);
  CHECK(csv.times == snap.times);
  CHECK(csv.states == snap.states);
  REQUIRE(csv.derivatives);
  CHECK(*csv.derivatives == *snap.derivatives);
  CHECK(csv.inputs == snap.inputs);
  CHECK(csv.outputs == snap.outputs);

  io::write_snapshots_binary(snap, scratch("snap.bin"));
  const SnapshotSet bin = io::read_snapshots_binary(scratch("snap.bin"));
  CHECK(bin.states == snap.states);
  CHECK(*bin.derivatives == *snap.derivatives);
  CHECK(bin.outputs == snap.outputs);

  io::write_text("NOTSNAP!garbage", scratch("bad.bin"));
  CHECK_THROWS_AS(io::read_snapshots_binary(scratch("bad.bin")), ParseError);
  std::stringstream broken("time,0,1\nstate:0,1,x\n");
  CHECK_THROWS_AS(io::read_snapshots_csv(broken), ParseError);
  std::stringstream ragged("time,0,1\nstate:0,1\n");
  CHECK_THROWS_AS(io::read_snapshots_csv(ragged), ParseError);
}

TEST_CASE("model files round trip exactly")
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rnd = [&](Index r, Index c) { return Matrix(Matrix::NullaryExpr(r, c, [&](Index, Index) { return u(rng); })); };
  ReducedQuadraticModel m = ReducedQuadraticModel::from_compact(rnd(4, 4), rnd(4, 10), rnd(4, 1), rnd(2, 4), "pod-abc", "learned");
  m.mu = 1e-3;
  const ReducedQuadraticModel back = io::parse_model(io::format_model(m));
  CHECK(back.a_r == m.a_r);
  CHECK(back.h_tilde_r == m.h_tilde_r);
  CHECK(back.h_r == m.h_r);
  CHECK(back.b_r == m.b_r);
  CHECK(back.c_r == m.c_r);
  CHECK(back.mu == m.mu);
  CHECK(back.basis_ref == "pod-abc");
  CHECK(back.source == "learned");
  CHECK_THROWS_AS(io::parse_model("{\"r\": 2}"), ParseError);
  CHECK_THROWS_AS(io::parse_model("{"), ParseError);
}

TEST_CASE("basis and matrix CSV round trips")
{
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const PodBasis pod = compute_pod(Matrix::NullaryExpr(12, 40, [&](Index, Index) { return g(rng); }), 0.3);
  io::write_basis_csv(pod, scratch("basis.csv"));
  const PodBasis back = io::read_basis_csv(scratch("basis.csv"));
  CHECK(back.basis == pod.basis);
  CHECK(back.singular_values == pod.singular_values);
  CHECK(back.r == pod.r);
  CHECK(back.id == pod.id);
  CHECK(back.tolerance == pod.tolerance);

  io::write_matrix_csv(pod.basis, scratch("m.csv"), "a,b");
  CHECK(io::read_matrix_csv(scratch("m.csv"), true) == pod.basis);
  io::write_matrix_csv(pod.basis, scratch("m2.csv"));
  CHECK(io::read_matrix_csv(scratch("m2.csv"), false) == pod.basis);
}

TEST_CASE("spectrum and error report files have the documented columns")
{
  Vector sigma(3);
  sigma << 4.0, 2.0, 1.0;
  io::write_spectrum_csv(sigma, scratch("spectrum.csv"));
  const Matrix s = io::read_matrix_csv(scratch("spectrum.csv"), true);
  CHECK(s.rows() == 3);
  CHECK(s(1, 0) == 2.0);
  CHECK(s(1, 1) == 2.0);
  CHECK(s(2, 2) == 0.25);
  CHECK(io::read_text(scratch("spectrum.csv")).rfind("index,sigma,sigma_rel\n", 0) == 0);

  const ErrorReport rep = evaluate((Vector(2) << 1.0, 2.0).finished(), (Vector(2) << 1.0, 1.5).finished(),
                                   (Vector(2) << 0.0, 0.1).finished());
  io::write_error_report_csv(rep, scratch("err.csv"));
  CHECK(io::read_text(scratch("err.csv")).rfind("t,y,y_r,e\n", 0) == 0);
  const Matrix e = io::read_matrix_csv(scratch("err.csv"), true);
  CHECK(e(1, 3) == 0.25);
}

TEST_CASE("lifted operator export lists the sparse quadratic terms")
{
  const SwingNetwork net = io::parse_network(kSmallNetwork);
  const LiftedOperators ops = assemble_lifted_operators(net);
  io::write_lifted_operators(ops, scratch("ops.json"));
  const std::string text = io::read_text(scratch("ops.json"));
  CHECK(text.find("h_terms") != std::string::npos);
}
