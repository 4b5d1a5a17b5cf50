#include "emacfem/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "emacfem/errors.hpp"

namespace emacfem {

const std::vector<std::string>& balance_columns() {
  static const std::vector<std::string> cols = {
      "step",      "t",         "k",          "j",          "e_E_mom_x",        "e_E_mom_y",
      "e_E_am",    "e_L_mom_x", "e_L_mom_y",  "e_L_am",     "e_trad_mom_x",     "e_trad_mom_y",
      "e_trad_am", "energy",    "momentum_x", "momentum_y", "angular",          "newton_iterations",
      "newton_residual"};
  return cols;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_balances_csv(const std::vector<BalanceReport>& rows) {
  std::ostringstream out;
  const auto& cols = balance_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows) {
    const bool lag = !r.lagrangian.empty();
    const LagrangianErrors l = lag ? r.lagrangian.front() : LagrangianErrors{0, {nan, nan}, nan};
    out << r.step << ',' << format_double(r.t) << ',' << r.order << ',' << l.order;
    for (double v : {r.e_E_mom[0], r.e_E_mom[1], r.e_E_am, l.momentum[0], l.momentum[1], l.angular,
                     r.e_trad_mom[0], r.e_trad_mom[1], r.e_trad_am, r.global.energy, r.global.momentum[0],
                     r.global.momentum[1], r.global.angular}) {
      out << ',' << format_double(v);
    }
    out << ',' << r.newton_iterations << ',' << format_double(r.newton_residual) << '\n';
  }
  return out.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename '" + tmp.string() + "': " + ec.message());
}

std::string format_vtk(const SolverState& state, NonlinearForm form) {
  const DofMap& vel = state.u.dofs();
  const TriMesh& mesh = vel.mesh();
  const int nv = mesh.num_vertices();
  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\n"
      << "emacfem t=" << format_double(state.t) << "\n"
      << "ASCII\nDATASET UNSTRUCTURED_GRID\n"
      << "POINTS " << nv << " double\n";
  for (const auto& p : mesh.vertices()) out << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
  out << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_triangles() << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) out << "5\n";

  std::vector<Vec2> u(nv);
  std::vector<double> p(nv), w(nv);
  for (int v = 0; v < nv; ++v) {
    u[v] = {state.u.coeffs[vel.dof(v, 0)], state.u.coeffs[vel.dof(v, 1)]};
    p[v] = recovered_pressure(form, state.p_hat.coeffs[state.p_hat.dofs().dof(v)], u[v]);
    const auto& inc = mesh.vertex_triangles()[v];
    if (inc.empty()) continue;
    const int t = inc.front();
    const auto& tri = mesh.triangle(t);
    Barycentric b{0.0, 0.0, 0.0};
    for (int a = 0; a < 3; ++a) b[a] = tri[a] == v ? 1.0 : 0.0;
    const auto s = eval_field(state.u, t, b);
    w[v] = s.gradient[1][0] - s.gradient[0][1];
  }
  out << "POINT_DATA " << nv << "\nVECTORS velocity double\n";
  for (const auto& x : u) out << format_double(x[0]) << ' ' << format_double(x[1]) << " 0\n";
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (double x : p) out << format_double(x) << '\n';
  out << "SCALARS vorticity double 1\nLOOKUP_TABLE default\n";
  for (double x : w) out << format_double(x) << '\n';
  return out.str();
}

void write_vtk(const SolverState& state, NonlinearForm form, const std::filesystem::path& path) {
  atomic_write(path, format_vtk(state, form));
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("'" + path.string() + "' is empty");
  table.header = split(line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(table.header.size()) + " cells");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != c.size() || c.empty()) {
        throw FormatError(path.string() + ":" + std::to_string(lineno) + ": '" + c + "' is not a number");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<ColumnDiff> diff_csv(const CsvTable& a, const CsvTable& b) {
  if (a.header != b.header) throw FormatError("CSV headers differ");
  if (a.rows.size() != b.rows.size()) {
    throw FormatError("row counts differ (" + std::to_string(a.rows.size()) + " vs " +
                      std::to_string(b.rows.size()) + ")");
  }
  std::vector<ColumnDiff> out;
  for (std::size_t c = 0; c < a.header.size(); ++c) {
    ColumnDiff d{a.header[c], 0.0};
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const double x = a.rows[r][c];
      const double y = b.rows[r][c];
      if (std::isnan(x) && std::isnan(y)) continue;
      const double diff = (std::isnan(x) || std::isnan(y)) ? std::numeric_limits<double>::infinity()
                                                           : std::abs(x - y);
      d.max_abs = std::max(d.max_abs, diff);
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace emacfem
