#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emacfem/balances.hpp"
#include "emacfem/solver.hpp"

namespace emacfem {

/// Fixed column set of balances.csv.
const std::vector<std::string>& balance_columns();

/// Header plus one row per report, doubles printed with 17 significant digits.
/// Lagrangian columns hold the first transport order's values, or nan.
std::string format_balances_csv(const std::vector<BalanceReport>& rows);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

/// Legacy VTK ASCII unstructured grid: vertex velocity, recovered pressure and
/// vorticity (taken from the first incident element at each vertex).
std::string format_vtk(const SolverState& state, NonlinearForm form);
void write_vtk(const SolverState& state, NonlinearForm form, const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
/// Throws FormatError on ragged rows or non-numeric cells ("nan" allowed).
CsvTable read_csv(const std::filesystem::path& path);

struct ColumnDiff {
  std::string column;
  double max_abs = 0.0;  // nan-vs-nan counts as equal, nan-vs-number as infinite
};
/// Throws FormatError when headers or row counts differ.
std::vector<ColumnDiff> diff_csv(const CsvTable& a, const CsvTable& b);

std::string format_double(double v);

}  // namespace emacfem
