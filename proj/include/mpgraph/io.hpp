#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpgraph/common.hpp"
#include "mpgraph/synth.hpp"

namespace mpgraph {

enum class MatrixFormat { Csv, F64Bin };

MatrixFormat matrix_format_from_name(const std::string& name);
std::string matrix_format_name(MatrixFormat format);

/// CSV: comma-separated doubles, one observation per line; a non-numeric
/// first line is treated as a header and skipped.
DataMatrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const DataMatrix& X);

/// f64bin: 4-byte magic "MPGX", little-endian uint32 row and column
/// counts, then rows*cols little-endian IEEE-754 doubles, row-major.
DataMatrix read_f64bin_matrix(const std::string& path);
void write_f64bin_matrix(const std::string& path, const DataMatrix& X);

DataMatrix read_matrix(const std::string& path, MatrixFormat format);
void write_matrix(const std::string& path, const DataMatrix& X,
                  MatrixFormat format);

/// Tab-separated edge list: 1-based i, j and a third value column
/// (selection frequency or weight) printed with six decimals, sorted by
/// (i, j).
void write_edge_list(const std::string& path, const EdgeSet& edges,
                     const std::vector<double>& values);
struct EdgeListEntry {
  std::size_t i = 0;  // 0-based
  std::size_t j = 0;
  double value = 0.0;
};
std::vector<EdgeListEntry> read_edge_list(const std::string& path);

/// Plain-text model file: header lines (format tag, scenario, M, seed,
/// pd_repair_applied, diagonal) followed by the weighted edge list.
void write_model(const std::string& path, const GroundTruthModel& model);
GroundTruthModel read_model(const std::string& path);

/// FNV-1a 64 digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::string& path);

}  // namespace mpgraph
