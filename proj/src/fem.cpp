#include "svcip/fem.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace svcip {

namespace {

// d^(r+s)/dx^r dy^s of x^a y^b at (x,y)
double mono_derivative(int a, int b, int r, int s, double x, double y) {
  if (r > a || s > b) return 0.0;
  double c = 1.0;
  for (int i = 0; i < r; ++i) c *= (a - i);
  for (int i = 0; i < s; ++i) c *= (b - i);
  return c * std::pow(x, a - r) * std::pow(y, b - s);
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

}  // namespace

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  if (degree < 1) throw std::invalid_argument("ReferenceElement: degree must be >= 1");
  const int p = degree;
  int interior_counter = 0;
  for (int j = 0; j <= p; ++j) {
    for (int i = 0; i <= p - j; ++i) {
      const int n0 = p - i - j, n1 = i, n2 = j;
      nodes_ref_.emplace_back(double(i) / p, double(j) / p);
      nodes_bary_.emplace_back(double(n0) / p, double(n1) / p, double(n2) / p);
      NodeEntity e{};
      if (n0 == p) {
        e = {NodeEntity::Vertex, 0, 0};
      } else if (n1 == p) {
        e = {NodeEntity::Vertex, 1, 0};
      } else if (n2 == p) {
        e = {NodeEntity::Vertex, 2, 0};
      } else if (n2 == 0) {
        e = {NodeEntity::Edge, 0, n1};  // v0 -> v1
      } else if (n0 == 0) {
        e = {NodeEntity::Edge, 1, n2};  // v1 -> v2
      } else if (n1 == 0) {
        e = {NodeEntity::Edge, 2, n0};  // v2 -> v0
      } else {
        e = {NodeEntity::Interior, 0, interior_counter++};
      }
      entities_.push_back(e);
    }
  }

  for (int d = 0; d <= p; ++d)
    for (int a = d; a >= 0; --a) mono_.push_back({a, d - a});

  const int n = n_nodes();
  Eigen::MatrixXd vand(n, n);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      vand(i, m) = mono_derivative(mono_[m][0], mono_[m][1], 0, 0, nodes_ref_[i].x(), nodes_ref_[i].y());
  coeffs_ = vand.fullPivLu().inverse();
}

BasisTable ReferenceElement::eval(const Eigen::Vector2d& pt, int order) const {
  if (order < 0 || order > 3) throw std::invalid_argument("ReferenceElement::eval: order must be 0..3");
  const int n = n_nodes();
  const int nm = static_cast<int>(mono_.size());
  BasisTable tab;
  tab.order = order;

  auto mono_vec = [&](int r, int s) {
    Eigen::VectorXd v(nm);
    for (int m = 0; m < nm; ++m) v[m] = mono_derivative(mono_[m][0], mono_[m][1], r, s, pt.x(), pt.y());
    return v;
  };

  tab.values = coeffs_.transpose() * mono_vec(0, 0);
  if (order >= 1) {
    tab.grad.resize(n, 2);
    tab.grad.col(0) = coeffs_.transpose() * mono_vec(1, 0);
    tab.grad.col(1) = coeffs_.transpose() * mono_vec(0, 1);
  }
  if (order >= 2) {
    tab.hess.resize(n, 3);
    tab.hess.col(0) = coeffs_.transpose() * mono_vec(2, 0);
    tab.hess.col(1) = coeffs_.transpose() * mono_vec(1, 1);
    tab.hess.col(2) = coeffs_.transpose() * mono_vec(0, 2);
  }
  if (order >= 3) {
    tab.third.resize(n, 4);
    tab.third.col(0) = coeffs_.transpose() * mono_vec(3, 0);
    tab.third.col(1) = coeffs_.transpose() * mono_vec(2, 1);
    tab.third.col(2) = coeffs_.transpose() * mono_vec(1, 2);
    tab.third.col(3) = coeffs_.transpose() * mono_vec(0, 3);
  }
  return tab;
}

QuadratureRule quadrature(int target_degree) {
  if (target_degree < 1 || target_degree > 12)
    throw std::invalid_argument("quadrature: target degree must be 1..12");
  const int n = (target_degree + 3) / 2;  // 2n-2 >= target
  std::vector<double> gx, gw;
  gauss_legendre(n, gx, gw);

  QuadratureRule rule;
  rule.exact_degree = 2 * n - 2;
  // Duffy map of the unit square onto the triangle: x = u(1-v), y = v.
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (gx[i] + 1.0), wu = 0.5 * gw[i];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (gx[j] + 1.0), wv = 0.5 * gw[j];
      const double x = u * (1.0 - v), y = v;
      rule.points_ref.emplace_back(x, y);
      rule.points_bary.emplace_back(1.0 - x - y, x, y);
      rule.weights.push_back(wu * wv * (1.0 - v));
    }
  }
  return rule;
}

EdgeQuadratureRule edge_quadrature(int target_degree) {
  if (target_degree < 1 || target_degree > 31)
    throw std::invalid_argument("edge_quadrature: target degree must be 1..31");
  const int n = (target_degree + 2) / 2;  // 2n-1 >= target
  std::vector<double> gx, gw;
  gauss_legendre(n, gx, gw);
  EdgeQuadratureRule rule;
  rule.exact_degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(0.5 * (gx[i] + 1.0));
    rule.weights.push_back(0.5 * gw[i]);
  }
  return rule;
}

DofMap build_dofmap(const Mesh& mesh, const FaceSet& faces, const ReferenceElement& elem,
                    FieldType field, Continuity continuity) {
  if (field == FieldType::VectorVelocity && elem.degree() < 2)
    throw std::invalid_argument("build_dofmap: velocity degree must be >= 2");

  DofMap map;
  map.field = field;
  map.continuity = continuity;
  map.degree = elem.degree();
  map.components = (field == FieldType::VectorVelocity) ? 2 : 1;

  const int p = elem.degree();
  const int n_local = elem.n_nodes();
  const int n_cells = mesh.n_cells();
  map.cell_nodes.assign(n_cells, std::vector<int>(n_local, -1));

  if (continuity == Continuity::Discontinuous) {
    map.n_scalar_nodes = n_cells * n_local;
    map.node_coords.resize(map.n_scalar_nodes);
    for (int c = 0; c < n_cells; ++c) {
      const CellGeometry geo = cell_geometry(mesh, c);
      for (int l = 0; l < n_local; ++l) {
        const int g = c * n_local + l;
        map.cell_nodes[c][l] = g;
        map.node_coords[g] = geo.to_physical(elem.nodes_ref()[l]);
      }
    }
  } else {
    std::map<std::array<int, 2>, int> edge_of;
    for (int f = 0; f < static_cast<int>(faces.faces.size()); ++f)
      edge_of.emplace(faces.faces[f].vertices, f);

    const int n_edges = static_cast<int>(faces.faces.size());
    const int per_edge = p - 1;
    const int per_cell = (p - 1) * (p - 2) / 2;
    map.n_scalar_nodes = mesh.n_vertices() + n_edges * per_edge + n_cells * per_cell;
    map.node_coords.resize(map.n_scalar_nodes);

    const int edge_base = mesh.n_vertices();
    const int cell_base = edge_base + n_edges * per_edge;
    for (int c = 0; c < n_cells; ++c) {
      const CellGeometry geo = cell_geometry(mesh, c);
      const auto& cell = mesh.cells[c];
      for (int l = 0; l < n_local; ++l) {
        const auto& ent = elem.node_entities()[l];
        int g = -1;
        if (ent.kind == ReferenceElement::NodeEntity::Vertex) {
          g = cell[ent.index];
        } else if (ent.kind == ReferenceElement::NodeEntity::Edge) {
          const int ga = cell[ent.index], gb = cell[(ent.index + 1) % 3];
          const int e = edge_of.at({std::min(ga, gb), std::max(ga, gb)});
          // edge nodes are numbered from the lower global vertex
          const int idx = (ga < gb) ? ent.sub - 1 : p - ent.sub - 1;
          g = edge_base + e * per_edge + idx;
        } else {
          g = cell_base + c * per_cell + ent.sub;
        }
        map.cell_nodes[c][l] = g;
        map.node_coords[g] = geo.to_physical(elem.nodes_ref()[l]);
      }
    }
  }

  map.n_dofs = map.components * map.n_scalar_nodes;
  map.dof_is_boundary.assign(map.n_dofs, 0);
  if (field == FieldType::VectorVelocity) {
    std::vector<char> node_on_boundary(map.n_scalar_nodes, 0);
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (mesh.boundary_vertex[v]) node_on_boundary[v] = 1;
    std::map<std::array<int, 2>, int> edge_of;
    for (int f = 0; f < static_cast<int>(faces.faces.size()); ++f)
      edge_of.emplace(faces.faces[f].vertices, f);
    const int per_edge = p - 1;
    for (int f = 0; f < static_cast<int>(faces.faces.size()); ++f) {
      if (faces.faces[f].right_cell != -1) continue;
      for (int m = 0; m < per_edge; ++m) node_on_boundary[mesh.n_vertices() + f * per_edge + m] = 1;
    }
    for (int n = 0; n < map.n_scalar_nodes; ++n) {
      if (!node_on_boundary[n]) continue;
      for (int c = 0; c < map.components; ++c) {
        map.boundary_dofs.push_back(map.dof(n, c));
        map.dof_is_boundary[map.dof(n, c)] = 1;
      }
    }
    std::sort(map.boundary_dofs.begin(), map.boundary_dofs.end());
  }
  return map;
}

Eigen::VectorXd interpolate(const VectorField& field, const DofMap& dofmap) {
  if (dofmap.components != 2) throw std::invalid_argument("interpolate: vector field on scalar space");
  Eigen::VectorXd coeffs(dofmap.n_dofs);
  for (int n = 0; n < dofmap.n_scalar_nodes; ++n) {
    const Eigen::Vector2d v = field(dofmap.node_coords[n].x(), dofmap.node_coords[n].y());
    coeffs[dofmap.dof(n, 0)] = v.x();
    coeffs[dofmap.dof(n, 1)] = v.y();
  }
  return coeffs;
}

Eigen::VectorXd interpolate(const ScalarField& field, const DofMap& dofmap) {
  if (dofmap.components != 1) throw std::invalid_argument("interpolate: scalar field on vector space");
  Eigen::VectorXd coeffs(dofmap.n_dofs);
  for (int n = 0; n < dofmap.n_scalar_nodes; ++n)
    coeffs[n] = field(dofmap.node_coords[n].x(), dofmap.node_coords[n].y());
  return coeffs;
}

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
  const auto& c = mesh.cells[cell];
  CellGeometry geo;
  geo.v0 = mesh.vertices[c[0]];
  geo.jac.col(0) = mesh.vertices[c[1]] - geo.v0;
  geo.jac.col(1) = mesh.vertices[c[2]] - geo.v0;
  geo.det = geo.jac.determinant();
  geo.jac_inv = geo.jac.inverse();
  return geo;
}

BasisTable push_forward(const BasisTable& ref, const Eigen::Matrix2d& jac_inv) {
  BasisTable out;
  out.order = ref.order;
  out.values = ref.values;
  const int n = static_cast<int>(ref.values.size());
  const Eigen::Matrix2d a = jac_inv;  // d(ref)/d(phys)

  if (ref.order >= 1) {
    out.grad.resize(n, 2);
    out.grad = ref.grad * a;  // g_phys_i = sum_r g_ref_r * a(r,i)
  }
  if (ref.order >= 2) {
    out.hess.resize(n, 3);
    for (int b = 0; b < n; ++b) {
      Eigen::Matrix2d h;
      h << ref.hess(b, 0), ref.hess(b, 1), ref.hess(b, 1), ref.hess(b, 2);
      const Eigen::Matrix2d hp = a.transpose() * h * a;
      out.hess(b, 0) = hp(0, 0);
      out.hess(b, 1) = hp(0, 1);
      out.hess(b, 2) = hp(1, 1);
    }
  }
  if (ref.order >= 3) {
    out.third.resize(n, 4);
    // packed index = number of y-derivatives among the three slots
    const int rep[4][3] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    for (int b = 0; b < n; ++b) {
      for (int q = 0; q < 4; ++q) {
        const int i = rep[q][0], j = rep[q][1], k = rep[q][2];
        double sum = 0.0;
        for (int r = 0; r < 2; ++r)
          for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t)
              sum += a(r, i) * a(s, j) * a(t, k) * ref.third(b, r + s + t);
        out.third(b, q) = sum;
      }
    }
  }
  return out;
}

FieldDerivatives eval_field_component(const Eigen::VectorXd& coeffs, const DofMap& dofmap, int cell,
                                      const BasisTable& tab, int comp) {
  FieldDerivatives out;
  const auto& nodes = dofmap.cell_nodes[cell];
  for (int l = 0; l < static_cast<int>(nodes.size()); ++l) {
    const double c = coeffs[dofmap.dof(nodes[l], comp)];
    out.value += c * tab.values[l];
    if (tab.order >= 1) out.grad += c * tab.grad.row(l).transpose();
    if (tab.order >= 2) out.hess += c * tab.hess.row(l).transpose();
  }
  return out;
}

}  // namespace svcip
