#include "svcip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace svcip {

double Mesh::signed_area(int cell) const {
  const auto& c = cells[cell];
  const Eigen::Vector2d a = vertices[c[0]];
  const Eigen::Vector2d b = vertices[c[1]];
  const Eigen::Vector2d d = vertices[c[2]];
  return 0.5 * ((b.x() - a.x()) * (d.y() - a.y()) - (b.y() - a.y()) * (d.x() - a.x()));
}

Eigen::Vector2d Mesh::barycenter(int cell) const {
  const auto& c = cells[cell];
  return (vertices[c[0]] + vertices[c[1]] + vertices[c[2]]) / 3.0;
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (const auto& c : cells) {
    for (int e = 0; e < 3; ++e) {
      const double len = (vertices[c[(e + 1) % 3]] - vertices[c[e]]).norm();
      h = std::max(h, len);
    }
  }
  return h;
}

double Mesh::min_angle() const {
  double amin = M_PI;
  for (const auto& c : cells) {
    for (int v = 0; v < 3; ++v) {
      const Eigen::Vector2d e1 = vertices[c[(v + 1) % 3]] - vertices[c[v]];
      const Eigen::Vector2d e2 = vertices[c[(v + 2) % 3]] - vertices[c[v]];
      const double cosa = e1.dot(e2) / (e1.norm() * e2.norm());
      amin = std::min(amin, std::acos(std::clamp(cosa, -1.0, 1.0)));
    }
  }
  return amin;
}

void validate_mesh(const Mesh& mesh) {
  const int nv = mesh.n_vertices();
  if (static_cast<int>(mesh.boundary_vertex.size()) != nv)
    throw std::invalid_argument("mesh: boundary flag count mismatch");
  for (const auto& v : mesh.vertices) {
    if (!(v.x() >= -1e-14 && v.x() <= 1.0 + 1e-14 && v.y() >= -1e-14 && v.y() <= 1.0 + 1e-14))
      throw std::invalid_argument("mesh: vertex outside [0,1]^2");
  }
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int i = 0; i < 3; ++i) {
      if (cell[i] < 0 || cell[i] >= nv) throw std::invalid_argument("mesh: vertex index out of range");
      if (cell[i] == cell[(i + 1) % 3]) throw std::invalid_argument("mesh: degenerate cell");
    }
    if (mesh.signed_area(c) <= 0.0) throw std::invalid_argument("mesh: cell not counterclockwise");
  }
}

Mesh build_unit_square_mesh(int n, Diagonal diagonal) {
  if (n < 1) throw std::invalid_argument("build_unit_square_mesh: n must be >= 1");
  (void)diagonal;  // only SW-NE is offered

  Mesh mesh;
  mesh.vertices.reserve((n + 1) * (n + 1));
  mesh.boundary_vertex.reserve((n + 1) * (n + 1));
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices.emplace_back(i * h, j * h);
      mesh.boundary_vertex.push_back(i == 0 || i == n || j == 0 || j == n);
    }
  }

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int sw = vid(i, j), se = vid(i + 1, j);
      const int ne = vid(i + 1, j + 1), nw = vid(i, j + 1);
      // SW-NE diagonal
      mesh.cells.push_back({sw, se, ne});
      mesh.cells.push_back({sw, ne, nw});
    }
  }
  validate_mesh(mesh);
  return mesh;
}

Mesh barycentric_refine(const Mesh& mesh) {
  validate_mesh(mesh);
  Mesh out;
  out.vertices = mesh.vertices;
  out.boundary_vertex = mesh.boundary_vertex;
  out.cells.reserve(3 * mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const int b = out.n_vertices();
    out.vertices.push_back(mesh.barycenter(c));
    out.boundary_vertex.push_back(0);
    const auto& cell = mesh.cells[c];
    for (int e = 0; e < 3; ++e) out.cells.push_back({cell[e], cell[(e + 1) % 3], b});
  }
  validate_mesh(out);
  return out;
}

FaceSet build_face_topology(const Mesh& mesh) {
  validate_mesh(mesh);
  FaceSet fs;
  std::map<std::array<int, 2>, int> index;  // sorted vertex pair -> face id
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int e = 0; e < 3; ++e) {
      const int a = cell[e], b = cell[(e + 1) % 3];
      std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      auto it = index.find(key);
      if (it == index.end()) {
        Face f;
        f.vertices = key;
        f.left_cell = c;
        fs.faces.push_back(f);
        index.emplace(key, static_cast<int>(fs.faces.size()) - 1);
      } else {
        Face& f = fs.faces[it->second];
        if (f.right_cell != -1) throw std::runtime_error("build_face_topology: non-manifold edge");
        f.right_cell = c;
      }
    }
  }
  // Cells are visited in ascending order, so left_cell is already the lower index.
  for (Face& f : fs.faces) {
    const Eigen::Vector2d p0 = mesh.vertices[f.vertices[0]];
    const Eigen::Vector2d p1 = mesh.vertices[f.vertices[1]];
    const Eigen::Vector2d t = p1 - p0;
    f.length = t.norm();
    Eigen::Vector2d n(t.y(), -t.x());
    n /= f.length;
    // orient out of the left cell
    const Eigen::Vector2d mid = 0.5 * (p0 + p1);
    if (n.dot(mid - mesh.barycenter(f.left_cell)) < 0.0) n = -n;
    f.normal = n;
    if (f.right_cell != -1) ++fs.interior_count;
  }
  return fs;
}

void write_mesh_vtk(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh_vtk: cannot open " + path);
  out << "# vtk DataFile Version 3.0\n";
  out << "triangulation\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  out.precision(16);
  for (const auto& v : mesh.vertices) out << v.x() << " " << v.y() << " 0\n";
  out << "CELLS " << mesh.n_cells() << " " << 4 * mesh.n_cells() << "\n";
  for (const auto& c : mesh.cells) out << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "CELL_TYPES " << mesh.n_cells() << "\n";
  for (int c = 0; c < mesh.n_cells(); ++c) out << "5\n";
}

}  // namespace svcip
