#include "wgfem/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace wgfem {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string mesh_to_vtk(const ShishkinMesh& mesh) {
  std::string out;
  out += "# vtk DataFile Version 3.0\n";
  out += "Shishkin triangular mesh\nASCII\nDATASET POLYDATA\n";
  out += "POINTS " + std::to_string(mesh.num_nodes()) + " double\n";
  for (const auto& n : mesh.nodes) {
    append_number(out, n.x());
    out += ' ';
    append_number(out, n.y());
    out += " 0\n";
  }
  out += "POLYGONS " + std::to_string(mesh.num_triangles()) + ' ' +
         std::to_string(4 * mesh.num_triangles()) + '\n';
  for (const auto& t : mesh.triangles)
    out += "3 " + std::to_string(t.v[0]) + ' ' + std::to_string(t.v[1]) + ' ' +
           std::to_string(t.v[2]) + '\n';
  out += "CELL_DATA " + std::to_string(mesh.num_triangles()) + '\n';
  out += "SCALARS region int 1\nLOOKUP_TABLE default\n";
  for (const auto& t : mesh.triangles) out += std::to_string(int(t.region)) + '\n';
  out += "SCALARS hx double 1\nLOOKUP_TABLE default\n";
  for (const auto& t : mesh.triangles) {
    append_number(out, t.hx);
    out += '\n';
  }
  out += "SCALARS hy double 1\nLOOKUP_TABLE default\n";
  for (const auto& t : mesh.triangles) {
    append_number(out, t.hy);
    out += '\n';
  }
  return out;
}

std::string mesh_nodes_csv(const ShishkinMesh& mesh) {
  std::string out = "node_id,x,y\n";
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    out += std::to_string(i) + ',';
    append_number(out, mesh.nodes[i].x());
    out += ',';
    append_number(out, mesh.nodes[i].y());
    out += '\n';
  }
  return out;
}

std::string mesh_triangles_csv(const ShishkinMesh& mesh) {
  std::string out = "tri_id,v0,v1,v2,cell_i,cell_j,upper,region,hx,hy\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    out += std::to_string(t) + ',' + std::to_string(tri.v[0]) + ',' +
           std::to_string(tri.v[1]) + ',' + std::to_string(tri.v[2]) + ',' +
           std::to_string(tri.cell_i) + ',' + std::to_string(tri.cell_j) + ',' +
           std::to_string(int(tri.upper)) + ',' + region_name(tri.region) + ',';
    append_number(out, tri.hx);
    out += ',';
    append_number(out, tri.hy);
    out += '\n';
  }
  return out;
}

std::string matrix_market(const Eigen::SparseMatrix<double>& a) {
  std::string out = "%%MatrixMarket matrix coordinate real general\n";
  out += std::to_string(a.rows()) + ' ' + std::to_string(a.cols()) + ' ' +
         std::to_string(a.nonZeros()) + '\n';
  for (int col = 0; col < a.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it) {
      out += std::to_string(it.row() + 1) + ' ' + std::to_string(it.col() + 1) + ' ';
      append_number(out, it.value());
      out += '\n';
    }
  return out;
}

std::string grid_csv(const Eigen::MatrixXd& values, const Eigen::MatrixXd* exact, int grid) {
  std::string out = exact ? "x,y,u_h,u_exact\n" : "x,y,u_h\n";
  const double h = 1.0 / (grid - 1);
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      append_number(out, i * h);
      out += ',';
      append_number(out, j * h);
      out += ',';
      append_number(out, values(i, j));
      if (exact) {
        out += ',';
        append_number(out, (*exact)(i, j));
      }
      out += '\n';
    }
  return out;
}

std::string grid_vtk(const Eigen::MatrixXd& values, const Eigen::MatrixXd* exact, int grid) {
  std::string out;
  out += "# vtk DataFile Version 3.0\n";
  out += "sampled solution\nASCII\nDATASET STRUCTURED_POINTS\n";
  out += "DIMENSIONS " + std::to_string(grid) + ' ' + std::to_string(grid) + " 1\n";
  out += "ORIGIN 0 0 0\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "SPACING %.17g %.17g 1\n", 1.0 / (grid - 1),
                1.0 / (grid - 1));
  out += buf;
  out += "POINT_DATA " + std::to_string(grid * grid) + '\n';
  out += "SCALARS u_h double 1\nLOOKUP_TABLE default\n";
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      append_number(out, values(i, j));
      out += '\n';
    }
  if (exact) {
    out += "SCALARS u_exact double 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < grid; ++j)
      for (int i = 0; i < grid; ++i) {
        append_number(out, (*exact)(i, j));
        out += '\n';
      }
  }
  return out;
}

}  // namespace wgfem
