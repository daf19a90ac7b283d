#include "mpgraph/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpgraph {

namespace {

std::ifstream open_input(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw parse_error("cannot open file: " + path);
  return in;
}

std::ofstream open_output(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw parse_error("cannot open file for writing: " + path);
  return out;
}

bool parse_double(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t')) --last;
  if (first == last) return false;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

}  // namespace

MatrixFormat matrix_format_from_name(const std::string& name) {
  if (name == "csv") return MatrixFormat::Csv;
  if (name == "f64bin") return MatrixFormat::F64Bin;
  throw std::invalid_argument("unknown matrix format: " + name);
}

std::string matrix_format_name(MatrixFormat format) {
  return format == MatrixFormat::Csv ? "csv" : "f64bin";
}

DataMatrix read_csv_matrix(const std::string& path) {
  std::ifstream in = open_input(path, false);
  DataMatrix X;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;
  bool saw_data = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && !saw_data) continue;
    if (line.empty()) {
      // allow a trailing blank line only
      if (in.peek() == EOF) break;
      throw parse_error(path + ": line " + std::to_string(line_no) +
                        ": empty line inside data");
    }

    const std::vector<std::string> cells = split_csv_line(line);
    row.clear();
    bool all_numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) {
        all_numeric = false;
        bad_col = c + 1;
        break;
      }
      row.push_back(v);
    }

    if (!all_numeric) {
      if (!saw_data && line_no == 1) continue;  // header line
      throw parse_error(path + ": line " + std::to_string(line_no) +
                        ", column " + std::to_string(bad_col) +
                        ": not a number");
    }

    if (!saw_data) {
      X.cols = row.size();
      saw_data = true;
    } else if (row.size() != X.cols) {
      throw parse_error(path + ": line " + std::to_string(line_no) +
                        ": expected " + std::to_string(X.cols) +
                        " columns, got " + std::to_string(row.size()));
    }
    X.values.insert(X.values.end(), row.begin(), row.end());
    ++X.rows;
  }

  if (!saw_data) throw parse_error(path + ": no data rows");
  return X;
}

void write_csv_matrix(const std::string& path, const DataMatrix& X) {
  std::ofstream out = open_output(path, true);
  for (std::size_t i = 0; i < X.rows; ++i) {
    for (std::size_t j = 0; j < X.cols; ++j) {
      if (j) out << ',';
      out << format_double(X(i, j));
    }
    out << '\n';
  }
}

namespace {
constexpr char kMagic[4] = {'M', 'P', 'G', 'X'};
}

DataMatrix read_f64bin_matrix(const std::string& path) {
  std::ifstream in = open_input(path, true);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw parse_error(path + ": missing MPGX magic");
  std::uint32_t dims[2];
  if (!in.read(reinterpret_cast<char*>(dims), sizeof(dims)))
    throw parse_error(path + ": truncated header");
  DataMatrix X(dims[0], dims[1]);
  const std::streamsize bytes =
      static_cast<std::streamsize>(X.values.size() * sizeof(double));
  if (!in.read(reinterpret_cast<char*>(X.values.data()), bytes))
    throw parse_error(path + ": truncated payload, expected " +
                      std::to_string(X.rows) + "x" + std::to_string(X.cols) +
                      " doubles");
  return X;
}

void write_f64bin_matrix(const std::string& path, const DataMatrix& X) {
  std::ofstream out = open_output(path, true);
  out.write(kMagic, 4);
  const std::uint32_t dims[2] = {static_cast<std::uint32_t>(X.rows),
                                 static_cast<std::uint32_t>(X.cols)};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(X.values.data()),
            static_cast<std::streamsize>(X.values.size() * sizeof(double)));
}

DataMatrix read_matrix(const std::string& path, MatrixFormat format) {
  return format == MatrixFormat::Csv ? read_csv_matrix(path)
                                     : read_f64bin_matrix(path);
}

void write_matrix(const std::string& path, const DataMatrix& X,
                  MatrixFormat format) {
  if (format == MatrixFormat::Csv)
    write_csv_matrix(path, X);
  else
    write_f64bin_matrix(path, X);
}

void write_edge_list(const std::string& path, const EdgeSet& edges,
                     const std::vector<double>& values) {
  if (edges.size() != values.size())
    throw std::invalid_argument("write_edge_list: size mismatch");
  std::ofstream out = open_output(path, true);
  char buf[80];
  for (std::size_t e = 0; e < edges.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu\t%zu\t%.6f\n", edges[e].first + 1,
                  edges[e].second + 1, values[e]);
    out << buf;
  }
}

std::vector<EdgeListEntry> read_edge_list(const std::string& path) {
  std::ifstream in = open_input(path, false);
  std::vector<EdgeListEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> i >> j >> v) || i < 1 || j < 1)
      throw parse_error(path + ": line " + std::to_string(line_no) +
                        ": expected 'i j value'");
    entries.push_back({i - 1, j - 1, v});
  }
  return entries;
}

void write_model(const std::string& path, const GroundTruthModel& model) {
  std::ofstream out = open_output(path, true);
  const std::size_t M = model.precision.dim();
  out << "mpgraph-model 1\n";
  out << "scenario " << scenario_name(model.scenario) << '\n';
  out << "M " << M << '\n';
  out << "seed " << model.seed << '\n';
  out << "pd_repair_applied " << (model.pd_repair_applied ? 1 : 0) << '\n';
  out << "diagonal " << format_double(model.precision(0, 0)) << '\n';
  out << "edges " << model.edges.size() << '\n';
  for (const auto& [i, j] : model.edges)
    out << i + 1 << ' ' << j + 1 << ' '
        << format_double(model.precision(i, j)) << '\n';
}

GroundTruthModel read_model(const std::string& path) {
  std::ifstream in = open_input(path, false);
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "mpgraph-model" || version != 1)
    throw parse_error(path + ": not a mpgraph-model file");

  std::string key, scenario;
  std::size_t M = 0, edge_count = 0;
  std::uint64_t seed = 0;
  int repaired = 0;
  double diagonal = 0.0;
  if (!(in >> key >> scenario) || key != "scenario")
    throw parse_error(path + ": expected scenario");
  if (!(in >> key >> M) || key != "M" || M < 1)
    throw parse_error(path + ": expected M");
  if (!(in >> key >> seed) || key != "seed")
    throw parse_error(path + ": expected seed");
  if (!(in >> key >> repaired) || key != "pd_repair_applied")
    throw parse_error(path + ": expected pd_repair_applied");
  if (!(in >> key >> diagonal) || key != "diagonal")
    throw parse_error(path + ": expected diagonal");
  if (!(in >> key >> edge_count) || key != "edges")
    throw parse_error(path + ": expected edges");

  GroundTruthModel model;
  model.scenario = scenario_from_name(scenario);
  model.seed = seed;
  model.pd_repair_applied = repaired != 0;
  model.precision = SymMatrix(M);
  for (std::size_t i = 0; i < M; ++i) model.precision.set(i, i, diagonal);
  for (std::size_t e = 0; e < edge_count; ++e) {
    std::size_t i = 0, j = 0;
    double w = 0.0;
    if (!(in >> i >> j >> w) || i < 1 || j < 1 || i > M || j > M)
      throw parse_error(path + ": bad edge record " + std::to_string(e + 1));
    model.precision.set(i - 1, j - 1, w);
    model.edges.emplace_back(i - 1, j - 1);
  }
  return model;
}

std::string file_digest(const std::string& path) {
  std::ifstream in = open_input(path, true);
  std::uint64_t h = 1469598103934665603ULL;
  char chunk[4096];
  while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(chunk[i]);
      h *= 1099511628211ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(chunk))) break;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mpgraph
