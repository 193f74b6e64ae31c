#include "liftlearn/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace liftlearn::io {

using nlohmann::json;

namespace {

std::string fmt17(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string &cell, const std::string &where)
{
  const char *begin = cell.c_str();
  char *end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
  {
    throw ParseError(where + ": '" + cell + "' is not a number");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string &line)
{
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ','))
  {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
    {
      cell.pop_back();
    }
    cells.push_back(cell);
  }
  return cells;
}

std::size_t line_of_offset(const std::string &text, std::size_t offset)
{
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

json parse_json(const std::string &text, const std::string &source)
{
  try
  {
    return json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ParseError(source + ":" + std::to_string(line_of_offset(text, e.byte)) +
                     ": syntax error: " + e.what());
  }
}

const json &field(const json &obj, const std::string &name, const std::string &source)
{
  if (!obj.is_object() || !obj.contains(name))
  {
    throw ParseError(source + ": missing field '" + name + "'");
  }
  return obj.at(name);
}

double number(const json &j, const std::string &path, const std::string &source)
{
  if (!j.is_number())
  {
    throw ParseError(source + ": field '" + path + "' must be a number");
  }
  return j.get<double>();
}

Vector vector_field(const json &j, const std::string &path, Index expected,
                    const std::string &source)
{
  if (!j.is_array())
  {
    throw ParseError(source + ": field '" + path + "' must be an array");
  }
  if (expected >= 0 && static_cast<Index>(j.size()) != expected)
  {
    throw ParseError(source + ": field '" + path + "' has " + std::to_string(j.size()) +
                     " entries, expected " + std::to_string(expected));
  }
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    v(static_cast<Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]", source);
  }
  return v;
}

Matrix dense_field(const json &j, const std::string &path, Index rows, Index cols,
                   const std::string &source)
{
  if (!j.is_array() || (rows >= 0 && static_cast<Index>(j.size()) != rows))
  {
    throw ParseError(source + ": field '" + path + "' must be an array of " +
                     (rows >= 0 ? std::to_string(rows) : std::string("some")) + " rows");
  }
  const Index m = static_cast<Index>(j.size());
  Matrix out(m, cols >= 0 ? cols : (m > 0 && j[0].is_array() ? static_cast<Index>(j[0].size()) : 0));
  for (Index i = 0; i < m; ++i)
  {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    out.row(i) = vector_field(j[static_cast<std::size_t>(i)], row_path, out.cols(), source).transpose();
  }
  return out;
}

// Dense nested rows or {"triplets": [[i, j, v], ...]}.
Matrix square_field(const json &j, const std::string &path, Index n, const std::string &source)
{
  if (j.is_object())
  {
    const json &triplets = field(j, "triplets", source + " (field '" + path + "')");
    if (!triplets.is_array())
    {
      throw ParseError(source + ": field '" + path + ".triplets' must be an array");
    }
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < triplets.size(); ++k)
    {
      const std::string tpath = path + ".triplets[" + std::to_string(k) + "]";
      const json &t = triplets[k];
      if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer())
      {
        throw ParseError(source + ": field '" + tpath + "' must be [row, col, value]");
      }
      const auto i = t[0].get<long long>();
      const auto c = t[1].get<long long>();
      if (i < 0 || i >= n || c < 0 || c >= n)
      {
        throw ParseError(source + ": field '" + tpath + "' index out of range for n = " +
                         std::to_string(n));
      }
      out(i, c) = number(t[2], tpath + "[2]", source);
    }
    return out;
  }
  return dense_field(j, path, n, n, source);
}

json matrix_json(const Matrix &m)
{
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i)
  {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c)
    {
      row.push_back(m(i, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector &v)
{
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json sparse_json(const Matrix &m)
{
  json triplets = json::array();
  for (Index i = 0; i < m.rows(); ++i)
  {
    for (Index c = 0; c < m.cols(); ++c)
    {
      if (m(i, c) != 0.0)
      {
        triplets.push_back(json::array({i, c, m(i, c)}));
      }
    }
  }
  return json{{"triplets", std::move(triplets)}};
}

std::ofstream open_out(const fs::path &path, std::ios::openmode mode = std::ios::out)
{
  if (path.has_parent_path())
  {
    fs::create_directories(path.parent_path());
  }
  std::ofstream os(path, mode | std::ios::trunc);
  if (!os)
  {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  return os;
}

std::ifstream open_in(const fs::path &path, std::ios::openmode mode = std::ios::in)
{
  std::ifstream is(path, mode);
  if (!is)
  {
    throw ParseError("cannot open '" + path.string() + "'");
  }
  return is;
}

void write_row(std::ostream &os, const std::string &label, const Eigen::Ref<const Eigen::RowVectorXd> &row)
{
  os << label;
  for (Index k = 0; k < row.size(); ++k)
  {
    os << ',' << fmt17(row(k));
  }
  os << '\n';
}

constexpr char kSnapshotMagic[8] = {'L', 'L', 'S', 'N', 'A', 'P', '0', '1'};

void write_u64(std::ostream &os, std::uint64_t v)
{
  unsigned char b[8];
  for (int i = 0; i < 8; ++i)
  {
    b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFFu);
  }
  os.write(reinterpret_cast<const char *>(b), 8);
}

std::uint64_t read_u64(std::istream &is, const std::string &source)
{
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char *>(b), 8))
  {
    throw ParseError(source + ": truncated header");
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i)
  {
    v = (v << 8) | b[i];
  }
  return v;
}

void write_doubles(std::ostream &os, const double *data, Index count)
{
  os.write(reinterpret_cast<const char *>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::istream &is, double *data, Index count, const std::string &source)
{
  if (!is.read(reinterpret_cast<char *>(data), static_cast<std::streamsize>(count * sizeof(double))))
  {
    throw ParseError(source + ": truncated data");
  }
}

}  // namespace

std::string read_text(const fs::path &path)
{
  std::ifstream is = open_in(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text(const std::string &text, const fs::path &path)
{
  std::ofstream os = open_out(path);
  os << text;
}

SwingNetwork parse_network(const std::string &text, const std::string &source)
{
  const json j = parse_json(text, source);
  if (!j.is_object())
  {
    throw ParseError(source + ": top level must be an object");
  }
  const json &jn = field(j, "n", source);
  if (!jn.is_number_integer() || jn.get<long long>() < 1)
  {
    throw ParseError(source + ": field 'n' must be a positive integer");
  }
  const auto n = static_cast<Index>(jn.get<long long>());

  SwingParameters p;
  p.omega_r = number(field(j, "omega_r", source), "omega_r", source);
  p.inertia = vector_field(field(j, "inertia", source), "inertia", n, source);
  p.damping = vector_field(field(j, "damping", source), "damping", n, source);
  p.power = vector_field(field(j, "power", source), "power", n, source);
  p.coupling = square_field(field(j, "coupling", source), "coupling", n, source);
  p.phase_shift = square_field(field(j, "phase_shift", source), "phase_shift", n, source);
  const json &out = field(j, "output_weights", source);
  if (out.is_string())
  {
    if (out.get<std::string>() != "mean")
    {
      throw ParseError(source + ": field 'output_weights' must be \"mean\" or a matrix");
    }
    p.output_weights = mean_output_row(n);
  }
  else
  {
    p.output_weights = dense_field(out, "output_weights", -1, n, source);
  }
  try
  {
    return SwingNetwork(std::move(p));
  }
  catch (const ContractViolation &e)
  {
    throw ParseError(source + ": " + e.what());
  }
}

SwingNetwork read_network(const fs::path &path)
{
  return parse_network(read_text(path), path.string());
}

std::string format_network(const SwingNetwork &net)
{
  json j;
  j["n"] = net.size();
  j["omega_r"] = net.omega_r();
  j["inertia"] = vector_json(net.inertia());
  j["damping"] = vector_json(net.damping());
  j["power"] = vector_json(net.power());
  j["coupling"] = sparse_json(net.coupling());
  j["phase_shift"] = sparse_json(net.phase_shift());
  j["output_weights"] = matrix_json(net.output_weights());
  return j.dump(1) + "\n";
}

void write_network(const SwingNetwork &net, const fs::path &path)
{
  write_text(format_network(net), path);
}

void write_snapshots_csv(const SnapshotSet &snap, std::ostream &os)
{
  snap.validate();
  write_row(os, "time", snap.times.transpose());
  for (Index i = 0; i < snap.states.rows(); ++i)
  {
    write_row(os, "state:" + std::to_string(i), snap.states.row(i));
  }
  if (snap.derivatives)
  {
    for (Index i = 0; i < snap.derivatives->rows(); ++i)
    {
      write_row(os, "derivative:" + std::to_string(i), snap.derivatives->row(i));
    }
  }
  for (Index i = 0; i < snap.inputs.rows(); ++i)
  {
    write_row(os, "input:" + std::to_string(i), snap.inputs.row(i));
  }
  for (Index i = 0; i < snap.outputs.rows(); ++i)
  {
    write_row(os, "output:" + std::to_string(i), snap.outputs.row(i));
  }
}

void write_snapshots_csv(const SnapshotSet &snap, const fs::path &path)
{
  std::ofstream os = open_out(path);
  write_snapshots_csv(snap, os);
}

SnapshotSet read_snapshots_csv(std::istream &is)
{
  std::vector<std::vector<double>> states, derivs, inputs, outputs;
  std::vector<double> times;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line))
  {
    ++line_no;
    if (line.empty() || line == "\r")
    {
      continue;
    }
    const auto cells = split_csv(line);
    const std::string where = "snapshot csv line " + std::to_string(line_no);
    std::vector<double> values;
    values.reserve(cells.size());
    for (std::size_t k = 1; k < cells.size(); ++k)
    {
      values.push_back(parse_double(cells[k], where));
    }
    const std::string &label = cells.front();
    if (line_no == 1 || label == "time")
    {
      if (label != "time")
      {
        throw ParseError(where + ": first row must be labelled 'time'");
      }
      times = std::move(values);
      continue;
    }
    if (values.size() != times.size())
    {
      throw ParseError(where + ": has " + std::to_string(values.size()) + " samples, expected " +
                       std::to_string(times.size()));
    }
    const auto kind = label.substr(0, label.find(':'));
    if (kind == "state")
    {
      states.push_back(std::move(values));
    }
    else if (kind == "derivative")
    {
      derivs.push_back(std::move(values));
    }
    else if (kind == "input")
    {
      inputs.push_back(std::move(values));
    }
    else if (kind == "output")
    {
      outputs.push_back(std::move(values));
    }
    else
    {
      throw ParseError(where + ": unknown row label '" + label + "'");
    }
  }
  const auto s = static_cast<Index>(times.size());
  auto to_matrix = [s](const std::vector<std::vector<double>> &rows) {
    Matrix m(static_cast<Index>(rows.size()), s);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
      for (Index k = 0; k < s; ++k)
      {
        m(static_cast<Index>(i), k) = rows[i][static_cast<std::size_t>(k)];
      }
    }
    return m;
  };
  SnapshotSet snap;
  snap.times = Eigen::Map<const Vector>(times.data(), s);
  snap.states = to_matrix(states);
  if (!derivs.empty())
  {
    snap.derivatives = to_matrix(derivs);
  }
  snap.inputs = to_matrix(inputs);
  snap.outputs = to_matrix(outputs);
  try
  {
    snap.validate();
  }
  catch (const ContractViolation &e)
  {
    throw ParseError(std::string("snapshot csv: ") + e.what());
  }
  return snap;
}

SnapshotSet read_snapshots_csv(const fs::path &path)
{
  std::ifstream is = open_in(path);
  return read_snapshots_csv(is);
}

void write_snapshots_binary(const SnapshotSet &snap, const fs::path &path)
{
  snap.validate();
  std::ofstream os = open_out(path, std::ios::out | std::ios::binary);
  os.write(kSnapshotMagic, sizeof kSnapshotMagic);
  write_u64(os, static_cast<std::uint64_t>(snap.states.rows()));
  write_u64(os, static_cast<std::uint64_t>(snap.samples()));
  write_u64(os, static_cast<std::uint64_t>(snap.inputs.rows()));
  write_u64(os, static_cast<std::uint64_t>(snap.outputs.rows()));
  write_u64(os, snap.derivatives ? 1 : 0);
  write_doubles(os, snap.times.data(), snap.times.size());
  write_doubles(os, snap.states.data(), snap.states.size());
  if (snap.derivatives)
  {
    write_doubles(os, snap.derivatives->data(), snap.derivatives->size());
  }
  write_doubles(os, snap.inputs.data(), snap.inputs.size());
  write_doubles(os, snap.outputs.data(), snap.outputs.size());
}

SnapshotSet read_snapshots_binary(const fs::path &path)
{
  const std::string source = path.string();
  std::ifstream is = open_in(path, std::ios::in | std::ios::binary);
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kSnapshotMagic, 8) != 0)
  {
    throw ParseError(source + ": not a snapshot file (bad magic)");
  }
  const auto d = static_cast<Index>(read_u64(is, source));
  const auto s = static_cast<Index>(read_u64(is, source));
  const auto q = static_cast<Index>(read_u64(is, source));
  const auto p = static_cast<Index>(read_u64(is, source));
  const auto has_derivs = read_u64(is, source);
  SnapshotSet snap;
  snap.times.resize(s);
  snap.states.resize(d, s);
  snap.inputs.resize(q, s);
  snap.outputs.resize(p, s);
  read_doubles(is, snap.times.data(), s, source);
  read_doubles(is, snap.states.data(), d * s, source);
  if (has_derivs != 0)
  {
    snap.derivatives = Matrix(d, s);
    read_doubles(is, snap.derivatives->data(), d * s, source);
  }
  read_doubles(is, snap.inputs.data(), q * s, source);
  read_doubles(is, snap.outputs.data(), p * s, source);
  return snap;
}

std::string format_model(const ReducedQuadraticModel &model)
{
  model.validate();
  json j;
  j["format"] = "liftlearn-reduced-model";
  j["version"] = 1;
  j["source"] = model.source;
  j["r"] = model.r();
  j["q"] = model.q();
  j["p"] = model.p();
  j["mu"] = model.mu;
  j["basis_id"] = model.basis_ref;
  j["a_r"] = matrix_json(model.a_r);
  j["h_tilde_r"] = matrix_json(model.h_tilde_r);
  j["b_r"] = matrix_json(model.b_r);
  j["c_r"] = matrix_json(model.c_r);
  return j.dump(1) + "\n";
}

ReducedQuadraticModel parse_model(const std::string &text, const std::string &source)
{
  const json j = parse_json(text, source);
  auto integer = [&](const char *name) {
    const json &v = field(j, name, source);
    if (!v.is_number_integer() || v.get<long long>() < 0)
    {
      throw ParseError(source + ": field '" + name + "' must be a non-negative integer");
    }
    return static_cast<Index>(v.get<long long>());
  };
  const Index r = integer("r");
  const Index q = integer("q");
  const Index p = integer("p");
  const double mu = number(field(j, "mu", source), "mu", source);
  Matrix a = dense_field(field(j, "a_r", source), "a_r", r, r, source);
  Matrix h = dense_field(field(j, "h_tilde_r", source), "h_tilde_r", r, compact_size(r), source);
  Matrix b = dense_field(field(j, "b_r", source), "b_r", r, q, source);
  Matrix c = dense_field(field(j, "c_r", source), "c_r", p, r, source);
  const std::string basis_id = j.value("basis_id", std::string{});
  const std::string kind = j.value("source", std::string("learned"));
  try
  {
    auto model = ReducedQuadraticModel::from_compact(std::move(a), std::move(h), std::move(b),
                                                     std::move(c), basis_id, kind);
    model.mu = mu;
    return model;
  }
  catch (const ContractViolation &e)
  {
    throw ParseError(source + ": " + e.what());
  }
}

void write_model(const ReducedQuadraticModel &model, const fs::path &path)
{
  write_text(format_model(model), path);
}

ReducedQuadraticModel read_model(const fs::path &path)
{
  return parse_model(read_text(path), path.string());
}

void write_matrix_csv(const Matrix &m, const fs::path &path, const std::string &header)
{
  std::ofstream os = open_out(path);
  if (!header.empty())
  {
    os << header << '\n';
  }
  for (Index i = 0; i < m.rows(); ++i)
  {
    for (Index c = 0; c < m.cols(); ++c)
    {
      os << (c ? "," : "") << fmt17(m(i, c));
    }
    os << '\n';
  }
}

Matrix read_matrix_csv(const fs::path &path, bool has_header)
{
  std::ifstream is = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line))
  {
    ++line_no;
    if (line.empty() || line[0] == '#' || (has_header && rows.empty() && line_no == 1))
    {
      continue;
    }
    std::vector<double> row;
    for (const auto &cell : split_csv(line))
    {
      row.push_back(parse_double(cell, path.string() + ":" + std::to_string(line_no)));
    }
    if (!rows.empty() && row.size() != rows.front().size())
    {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
  for (Index i = 0; i < m.rows(); ++i)
  {
    for (Index c = 0; c < m.cols(); ++c)
    {
      m(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
  }
  return m;
}

void write_basis_csv(const PodBasis &basis, const fs::path &path)
{
  std::ofstream os = open_out(path);
  os << "# id=" << basis.id << " r=" << basis.r << " tolerance=" << fmt17(basis.tolerance) << '\n';
  os << "# singular_values";
  for (Index i = 0; i < basis.singular_values.size(); ++i)
  {
    os << ',' << fmt17(basis.singular_values(i));
  }
  os << '\n';
  for (Index j = 0; j < basis.r; ++j)
  {
    os << (j ? "," : "") << "phi_" << j;
  }
  os << '\n';
  for (Index i = 0; i < basis.basis.rows(); ++i)
  {
    for (Index j = 0; j < basis.basis.cols(); ++j)
    {
      os << (j ? "," : "") << fmt17(basis.basis(i, j));
    }
    os << '\n';
  }
}

PodBasis read_basis_csv(const fs::path &path)
{
  const std::string source = path.string();
  std::ifstream is = open_in(path);
  PodBasis basis;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# id=", 0) != 0)
  {
    throw ParseError(source + ":1: expected '# id=... r=... tolerance=...'");
  }
  std::istringstream meta(line.substr(2));
  std::string tok;
  while (meta >> tok)
  {
    const auto eq = tok.find('=');
    const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
    if (key == "id")
    {
      basis.id = value;
    }
    else if (key == "tolerance")
    {
      basis.tolerance = parse_double(value, source + ":1");
    }
  }
  if (!std::getline(is, line) || line.rfind("# singular_values", 0) != 0)
  {
    throw ParseError(source + ":2: expected '# singular_values,...'");
  }
  auto cells = split_csv(line);
  basis.singular_values.resize(static_cast<Index>(cells.size()) - 1);
  for (std::size_t k = 1; k < cells.size(); ++k)
  {
    basis.singular_values(static_cast<Index>(k) - 1) = parse_double(cells[k], source + ":2");
  }
  std::getline(is, line);  // column header
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 3;
  while (std::getline(is, line))
  {
    ++line_no;
    if (line.empty())
    {
      continue;
    }
    std::vector<double> row;
    for (const auto &cell : split_csv(line))
    {
      row.push_back(parse_double(cell, source + ":" + std::to_string(line_no)));
    }
    rows.push_back(std::move(row));
  }
  const auto d = static_cast<Index>(rows.size());
  const Index r = d > 0 ? static_cast<Index>(rows[0].size()) : 0;
  basis.basis.resize(d, r);
  for (Index i = 0; i < d; ++i)
  {
    if (static_cast<Index>(rows[static_cast<std::size_t>(i)].size()) != r)
    {
      throw ParseError(source + ": ragged basis row " + std::to_string(i));
    }
    for (Index j = 0; j < r; ++j)
    {
      basis.basis(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  basis.r = r;
  return basis;
}

void write_spectrum_csv(const Vector &singular_values, const fs::path &path)
{
  std::ofstream os = open_out(path);
  os << "index,sigma,sigma_rel\n";
  const double lead = singular_values.size() > 0 ? singular_values(0) : 1.0;
  for (Index i = 0; i < singular_values.size(); ++i)
  {
    os << i + 1 << ',' << fmt17(singular_values(i)) << ',' << fmt17(singular_values(i) / lead) << '\n';
  }
}

void write_error_report_csv(const ErrorReport &report, const fs::path &path)
{
  std::ofstream os = open_out(path);
  os << "t,y,y_r,e\n";
  for (Index k = 0; k < report.times.size(); ++k)
  {
    os << fmt17(report.times(k)) << ',' << fmt17(report.y_full(k)) << ',' << fmt17(report.y_rom(k))
       << ',' << fmt17(report.rel_error_series(k)) << '\n';
  }
}

void write_lifted_operators(const LiftedOperators &ops, const fs::path &path)
{
  json j;
  j["format"] = "liftlearn-lifted-operators";
  j["state_dim"] = ops.state_dim();
  j["kronecker_column"] = "first * state_dim + second (zero-based)";
  j["a"] = sparse_json(ops.a);
  j["b"] = vector_json(ops.b);
  j["c"] = matrix_json(ops.c);
  json h = json::array();
  for (const auto &t : ops.h.terms())
  {
    h.push_back(json::array({t.row, t.first, t.second, t.value}));
  }
  j["h_terms"] = std::move(h);
  write_text(j.dump(1) + "\n", path);
}

}  // namespace liftlearn::io
