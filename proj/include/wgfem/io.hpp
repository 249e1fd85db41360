#pragma once

#include <Eigen/Sparse>
#include <filesystem>
#include <string>

#include "wgfem/mesh.hpp"

namespace wgfem {

/// Writes via a temporary file and rename, so readers never see partial
/// output.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Legacy-VTK POLYDATA triangles with region/hx/hy cell data.
std::string mesh_to_vtk(const ShishkinMesh& mesh);

/// Node table: node_id,x,y.
std::string mesh_nodes_csv(const ShishkinMesh& mesh);

/// Triangle table: tri_id,v0,v1,v2,cell_i,cell_j,upper,region,hx,hy.
std::string mesh_triangles_csv(const ShishkinMesh& mesh);

/// MatrixMarket coordinate format (general symmetric content, full pattern).
std::string matrix_market(const Eigen::SparseMatrix<double>& a);

/// Sampled field on a uniform grid: CSV rows x,y,value[,exact].
std::string grid_csv(const Eigen::MatrixXd& values, const Eigen::MatrixXd* exact, int grid);

/// Legacy-VTK STRUCTURED_POINTS with one or two scalar fields.
std::string grid_vtk(const Eigen::MatrixXd& values, const Eigen::MatrixXd* exact, int grid);

}  // namespace wgfem
