#include "svcip/assembly.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace svcip {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMat from_triplets(int rows, int cols, Triplets& trips) {
  SparseMat m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

// Reference basis tables at the cell quadrature points, evaluated once.
std::vector<BasisTable> tabulate(const ReferenceElement& elem, const QuadratureRule& quad, int order) {
  std::vector<BasisTable> tabs;
  tabs.reserve(quad.points_ref.size());
  for (const auto& p : quad.points_ref) tabs.push_back(elem.eval(p, order));
  return tabs;
}

}  // namespace

Discretization::Discretization(Mesh m, int k_, Continuity pressure_continuity, int cell_quad_degree,
                               int face_quad_degree)
    : mesh(std::move(m)),
      faces(build_face_topology(mesh)),
      vel_elem(k_),
      pres_elem(k_ - 1),
      vel_map(build_dofmap(mesh, faces, vel_elem, FieldType::VectorVelocity, Continuity::Continuous)),
      pres_map(build_dofmap(mesh, faces, pres_elem, FieldType::ScalarPressure, pressure_continuity)),
      cell_quad(quadrature(cell_quad_degree > 0 ? cell_quad_degree : 2 * k_ + 2)),
      face_quad(edge_quadrature(face_quad_degree > 0 ? face_quad_degree : 2 * k_ + 3)),
      k(k_) {}

TransportField make_transport(const Discretization& disc, Eigen::VectorXd coeffs) {
  if (coeffs.size() != disc.vel_map.n_dofs)
    throw std::invalid_argument("make_transport: coefficient size mismatch");
  if (!coeffs.allFinite()) throw std::invalid_argument("make_transport: non-finite coefficients");
  TransportField a;
  a.coeffs = std::move(coeffs);
  for (int n = 0; n < disc.vel_map.n_scalar_nodes; ++n) {
    const double mag = std::hypot(a.coeffs[disc.vel_map.dof(n, 0)], a.coeffs[disc.vel_map.dof(n, 1)]);
    a.node_inf_norm = std::max(a.node_inf_norm, mag);
  }
  return a;
}

double transport_inf_norm(const Discretization& disc, const TransportField& a) {
  double norm = a.node_inf_norm;
  for (const Face& f : disc.faces.faces) {
    if (f.right_cell == -1) continue;
    const CellGeometry geo = cell_geometry(disc.mesh, f.left_cell);
    const Eigen::Vector2d p0 = disc.mesh.vertices[f.vertices[0]];
    const Eigen::Vector2d p1 = disc.mesh.vertices[f.vertices[1]];
    for (double t : disc.face_quad.points) {
      const Eigen::Vector2d x = p0 + t * (p1 - p0);
      const BasisTable tab = disc.vel_elem.eval(geo.to_reference(x), 0);
      const double ux = eval_field_component(a.coeffs, disc.vel_map, f.left_cell, tab, 0).value;
      const double uy = eval_field_component(a.coeffs, disc.vel_map, f.left_cell, tab, 1).value;
      norm = std::max(norm, std::hypot(ux, uy));
    }
  }
  return norm;
}

SparseMat assemble_mass(const Discretization& disc) {
  const DofMap& map = disc.vel_map;
  const auto tabs = tabulate(disc.vel_elem, disc.cell_quad, 0);
  const int nl = disc.vel_elem.n_nodes();
  Triplets trips;
  trips.reserve(disc.mesh.n_cells() * nl * nl * 2);
  Eigen::MatrixXd block(nl, nl);
  for (int c = 0; c < disc.mesh.n_cells(); ++c) {
    const CellGeometry geo = cell_geometry(disc.mesh, c);
    block.setZero();
    for (size_t q = 0; q < disc.cell_quad.weights.size(); ++q) {
      const double w = disc.cell_quad.weights[q] * geo.det;
      block.noalias() += w * tabs[q].values * tabs[q].values.transpose();
    }
    const auto& nodes = map.cell_nodes[c];
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j)
        for (int comp = 0; comp < 2; ++comp)
          trips.emplace_back(map.dof(nodes[i], comp), map.dof(nodes[j], comp), block(i, j));
  }
  return from_triplets(map.n_dofs, map.n_dofs, trips);
}

SparseMat assemble_stiffness(const Discretization& disc) {
  const DofMap& map = disc.vel_map;
  const auto tabs = tabulate(disc.vel_elem, disc.cell_quad, 1);
  const int nl = disc.vel_elem.n_nodes();
  Triplets trips;
  trips.reserve(disc.mesh.n_cells() * nl * nl * 2);
  Eigen::MatrixXd block(nl, nl);
  for (int c = 0; c < disc.mesh.n_cells(); ++c) {
    const CellGeometry geo = cell_geometry(disc.mesh, c);
    block.setZero();
    for (size_t q = 0; q < disc.cell_quad.weights.size(); ++q) {
      const double w = disc.cell_quad.weights[q] * geo.det;
      const Eigen::MatrixXd g = tabs[q].grad * geo.jac_inv;  // physical gradients
      block.noalias() += w * g * g.transpose();
    }
    const auto& nodes = map.cell_nodes[c];
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j)
        for (int comp = 0; comp < 2; ++comp)
          trips.emplace_back(map.dof(nodes[i], comp), map.dof(nodes[j], comp), block(i, j));
  }
  return from_triplets(map.n_dofs, map.n_dofs, trips);
}

SparseMat assemble_divergence(const Discretization& disc) {
  const DofMap& vmap = disc.vel_map;
  const DofMap& pmap = disc.pres_map;
  const auto vtabs = tabulate(disc.vel_elem, disc.cell_quad, 1);
  const auto ptabs = tabulate(disc.pres_elem, disc.cell_quad, 0);
  const int nv = disc.vel_elem.n_nodes();
  const int np = disc.pres_elem.n_nodes();
  Triplets trips;
  trips.reserve(disc.mesh.n_cells() * np * nv * 2);
  Eigen::MatrixXd bx(np, nv), by(np, nv);
  for (int c = 0; c < disc.mesh.n_cells(); ++c) {
    const CellGeometry geo = cell_geometry(disc.mesh, c);
    bx.setZero();
    by.setZero();
    for (size_t q = 0; q < disc.cell_quad.weights.size(); ++q) {
      const double w = disc.cell_quad.weights[q] * geo.det;
      const Eigen::MatrixXd g = vtabs[q].grad * geo.jac_inv;
      bx.noalias() += w * ptabs[q].values * g.col(0).transpose();
      by.noalias() += w * ptabs[q].values * g.col(1).transpose();
    }
    const auto& vnodes = vmap.cell_nodes[c];
    const auto& pnodes = pmap.cell_nodes[c];
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < nv; ++j) {
        trips.emplace_back(pnodes[i], vmap.dof(vnodes[j], 0), bx(i, j));
        trips.emplace_back(pnodes[i], vmap.dof(vnodes[j], 1), by(i, j));
      }
  }
  return from_triplets(pmap.n_dofs, vmap.n_dofs, trips);
}

StokesBlocks assemble_stokes_blocks(const Discretization& disc, double nu) {
  if (nu <= 0.0) throw std::invalid_argument("assemble_stokes_blocks: nu must be > 0");
  StokesBlocks blocks;
  blocks.mass = assemble_mass(disc);
  blocks.stiffness = nu * assemble_stiffness(disc);
  blocks.divergence = assemble_divergence(disc);
  return blocks;
}

SparseMat assemble_convection(const Discretization& disc, const TransportField& a) {
  const DofMap& map = disc.vel_map;
  const auto tabs = tabulate(disc.vel_elem, disc.cell_quad, 1);
  const int nl = disc.vel_elem.n_nodes();
  Triplets trips;
  trips.reserve(disc.mesh.n_cells() * nl * nl * 2);
  Eigen::MatrixXd block(nl, nl);
  for (int c = 0; c < disc.mesh.n_cells(); ++c) {
    const CellGeometry geo = cell_geometry(disc.mesh, c);
    block.setZero();
    for (size_t q = 0; q < disc.cell_quad.weights.size(); ++q) {
      const double w = disc.cell_quad.weights[q] * geo.det;
      const BasisTable phys = push_forward(tabs[q], geo.jac_inv);
      const double ax = eval_field_component(a.coeffs, map, c, phys, 0).value;
      const double ay = eval_field_component(a.coeffs, map, c, phys, 1).value;
      const Eigen::VectorXd adg = phys.grad.col(0) * ax + phys.grad.col(1) * ay;  // (a.grad)phi_j
      block.noalias() += w * phys.values * adg.transpose();
    }
    const auto& nodes = map.cell_nodes[c];
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j)
        for (int comp = 0; comp < 2; ++comp)
          trips.emplace_back(map.dof(nodes[i], comp), map.dof(nodes[j], comp), block(i, j));
  }
  return from_triplets(map.n_dofs, map.n_dofs, trips);
}

SparseMat assemble_graddiv(const Discretization& disc, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("assemble_graddiv: gamma must be >= 0");
  const DofMap& map = disc.vel_map;
  if (gamma == 0.0) return SparseMat(map.n_dofs, map.n_dofs);
  const auto tabs = tabulate(disc.vel_elem, disc.cell_quad, 1);
  const int nl = disc.vel_elem.n_nodes();
  Triplets trips;
  trips.reserve(disc.mesh.n_cells() * nl * nl * 4);
  for (int c = 0; c < disc.mesh.n_cells(); ++c) {
    const CellGeometry geo = cell_geometry(disc.mesh, c);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * nl, 2 * nl);
    for (size_t q = 0; q < disc.cell_quad.weights.size(); ++q) {
      const double w = gamma * disc.cell_quad.weights[q] * geo.det;
      const Eigen::MatrixXd g = tabs[q].grad * geo.jac_inv;
      // div(e_c phi) = d phi / d x_c
      Eigen::VectorXd div(2 * nl);
      for (int l = 0; l < nl; ++l) {
        div[2 * l] = g(l, 0);
        div[2 * l + 1] = g(l, 1);
      }
      block.noalias() += w * div * div.transpose();
    }
    const auto& nodes = map.cell_nodes[c];
    for (int i = 0; i < 2 * nl; ++i)
      for (int j = 0; j < 2 * nl; ++j)
        trips.emplace_back(map.dof(nodes[i / 2], i % 2), map.dof(nodes[j / 2], j % 2), block(i, j));
  }
  return from_triplets(map.n_dofs, map.n_dofs, trips);
}

Eigen::VectorXd assemble_load(const Discretization& disc, const VectorField& f) {
  const DofMap& map = disc.vel_map;
  const auto tabs = tabulate(disc.vel_elem, disc.cell_quad, 0);
  const int nl = disc.vel_elem.n_nodes();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(map.n_dofs);
  for (int c = 0; c < disc.mesh.n_cells(); ++c) {
    const CellGeometry geo = cell_geometry(disc.mesh, c);
    const auto& nodes = map.cell_nodes[c];
    for (size_t q = 0; q < disc.cell_quad.weights.size(); ++q) {
      const double w = disc.cell_quad.weights[q] * geo.det;
      const Eigen::Vector2d x = geo.to_physical(disc.cell_quad.points_ref[q]);
      const Eigen::Vector2d fv = f(x.x(), x.y());
      for (int l = 0; l < nl; ++l) {
        load[map.dof(nodes[l], 0)] += w * fv.x() * tabs[q].values[l];
        load[map.dof(nodes[l], 1)] += w * fv.y() * tabs[q].values[l];
      }
    }
  }
  return load;
}

Eigen::VectorXd assemble_gradient_load(const Discretization& disc, const ScalarField& potential) {
  const DofMap& map = disc.vel_map;
  const auto tabs = tabulate(disc.vel_elem, disc.cell_quad, 1);
  const int nl = disc.vel_elem.n_nodes();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(map.n_dofs);
  for (int c = 0; c < disc.mesh.n_cells(); ++c) {
    const CellGeometry geo = cell_geometry(disc.mesh, c);
    const auto& nodes = map.cell_nodes[c];
    for (size_t q = 0; q < disc.cell_quad.weights.size(); ++q) {
      const double w = disc.cell_quad.weights[q] * geo.det;
      const Eigen::Vector2d x = geo.to_physical(disc.cell_quad.points_ref[q]);
      const double phi = potential(x.x(), x.y());
      const Eigen::MatrixXd g = tabs[q].grad * geo.jac_inv;
      for (int l = 0; l < nl; ++l) {
        load[map.dof(nodes[l], 0)] -= w * phi * g(l, 0);
        load[map.dof(nodes[l], 1)] -= w * phi * g(l, 1);
      }
    }
  }
  return load;
}

Eigen::VectorXd assemble_velocity_gradient_rhs(const Discretization& disc, const Matrix2dField& grad) {
  const DofMap& map = disc.vel_map;
  const auto tabs = tabulate(disc.vel_elem, disc.cell_quad, 1);
  const int nl = disc.vel_elem.n_nodes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(map.n_dofs);
  for (int c = 0; c < disc.mesh.n_cells(); ++c) {
    const CellGeometry geo = cell_geometry(disc.mesh, c);
    const auto& nodes = map.cell_nodes[c];
    for (size_t q = 0; q < disc.cell_quad.weights.size(); ++q) {
      const double w = disc.cell_quad.weights[q] * geo.det;
      const Eigen::Vector2d x = geo.to_physical(disc.cell_quad.points_ref[q]);
      const Eigen::Matrix2d gu = grad(x.x(), x.y());
      const Eigen::MatrixXd g = tabs[q].grad * geo.jac_inv;
      for (int l = 0; l < nl; ++l)
        for (int comp = 0; comp < 2; ++comp)
          rhs[map.dof(nodes[l], comp)] += w * (gu(comp, 0) * g(l, 0) + gu(comp, 1) * g(l, 1));
    }
  }
  return rhs;
}

Eigen::VectorXd pressure_mean_vector(const Discretization& disc) {
  const DofMap& map = disc.pres_map;
  const auto tabs = tabulate(disc.pres_elem, disc.cell_quad, 0);
  const int nl = disc.pres_elem.n_nodes();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(map.n_dofs);
  for (int c = 0; c < disc.mesh.n_cells(); ++c) {
    const CellGeometry geo = cell_geometry(disc.mesh, c);
    const auto& nodes = map.cell_nodes[c];
    for (size_t q = 0; q < disc.cell_quad.weights.size(); ++q) {
      const double w = disc.cell_quad.weights[q] * geo.det;
      for (int l = 0; l < nl; ++l) m[nodes[l]] += w * tabs[q].values[l];
    }
  }
  return m;
}

namespace {

// Jump rows of the three stabilized quantities for every dof coupled to one
// interior face, at one physical point. Rows: (a.grad)phi x n, curl((a.grad)phi),
// d/dx and d/dy of the curl. Columns follow `comb_nodes` with interleaved
// components.
struct FaceJumpContext {
  std::vector<int> comb_nodes;            // global scalar nodes coupled to the face
  std::array<std::vector<int>, 2> local_to_comb;  // per side: local node -> combined slot
  std::array<int, 2> cells;
  std::array<CellGeometry, 2> geo;
};

FaceJumpContext make_face_context(const Discretization& disc, const Face& f) {
  FaceJumpContext ctx;
  ctx.cells = {f.left_cell, f.right_cell};
  ctx.geo = {cell_geometry(disc.mesh, f.left_cell), cell_geometry(disc.mesh, f.right_cell)};
  std::map<int, int> slot;
  for (int side = 0; side < 2; ++side) {
    const auto& nodes = disc.vel_map.cell_nodes[ctx.cells[side]];
    ctx.local_to_comb[side].resize(nodes.size());
    for (size_t l = 0; l < nodes.size(); ++l) {
      auto it = slot.find(nodes[l]);
      if (it == slot.end()) {
        it = slot.emplace(nodes[l], static_cast<int>(ctx.comb_nodes.size())).first;
        ctx.comb_nodes.push_back(nodes[l]);
      }
      ctx.local_to_comb[side][l] = it->second;
    }
  }
  return ctx;
}

void fill_jump_rows(const Discretization& disc, const TransportField& a, const Face& f,
                    const FaceJumpContext& ctx, const Eigen::Vector2d& x, Eigen::Matrix4Xd& jumps) {
  const int nl = disc.vel_elem.n_nodes();
  jumps.setZero();
  for (int side = 0; side < 2; ++side) {
    const double sign = (side == 0) ? 1.0 : -1.0;
    const int cell = ctx.cells[side];
    const CellGeometry& geo = ctx.geo[side];
    const BasisTable phys = push_forward(disc.vel_elem.eval(geo.to_reference(x), 3), geo.jac_inv);

    const FieldDerivatives a0 = eval_field_component(a.coeffs, disc.vel_map, cell, phys, 0);
    const FieldDerivatives a1 = eval_field_component(a.coeffs, disc.vel_map, cell, phys, 1);
    const double av[2] = {a0.value, a1.value};
    // da[m][j] = d a_m / d x_j ; dda[m][jl] packed xx, xy, yy
    const double da[2][2] = {{a0.grad[0], a0.grad[1]}, {a1.grad[0], a1.grad[1]}};
    const double dda[2][3] = {{a0.hess[0], a0.hess[1], a0.hess[2]},
                              {a1.hess[0], a1.hess[1], a1.hess[2]}};
    auto hess_at = [](const double h[3], int i, int j) { return h[i + j]; };

    for (int l = 0; l < nl; ++l) {
      const double hl[3] = {phys.hess(l, 0), phys.hess(l, 1), phys.hess(l, 2)};
      // t = (a.grad) phi_l and its first/second derivatives (scalar basis part)
      const double t0 = av[0] * phys.grad(l, 0) + av[1] * phys.grad(l, 1);
      double dt[2];    // d_j t
      double ddt[2][2];  // d_i d_j t
      for (int j = 0; j < 2; ++j) {
        dt[j] = 0.0;
        for (int m = 0; m < 2; ++m)
          dt[j] += da[m][j] * phys.grad(l, m) + av[m] * hess_at(hl, j, m);
      }
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          double s = 0.0;
          for (int m = 0; m < 2; ++m) {
            s += hess_at(dda[m], i, j) * phys.grad(l, m);
            s += da[m][j] * hess_at(hl, i, m);
            s += da[m][i] * hess_at(hl, j, m);
            s += av[m] * phys.third(l, i + j + m);
          }
          ddt[i][j] = s;
        }
      }
      for (int comp = 0; comp < 2; ++comp) {
        const int col = 2 * ctx.local_to_comb[side][l] + comp;
        if (comp == 0) {
          // vector (t, 0): cross product t*n2, curl = -d2 t
          jumps(0, col) += sign * t0 * f.normal.y();
          jumps(1, col) += sign * (-dt[1]);
          jumps(2, col) += sign * (-ddt[0][1]);
          jumps(3, col) += sign * (-ddt[1][1]);
        } else {
          // vector (0, t): cross product -t*n1, curl = d1 t
          jumps(0, col) += sign * (-t0 * f.normal.x());
          jumps(1, col) += sign * dt[0];
          jumps(2, col) += sign * ddt[0][0];
          jumps(3, col) += sign * ddt[1][0];
        }
      }
    }
  }
}

}  // namespace

SparseMat assemble_cip(const Discretization& disc, const TransportField& a,
                       const CipParameters& params) {
  if (!(params.delta1 >= 0 && params.delta2 >= 0 && params.delta3 >= 0))
    throw std::invalid_argument("assemble_cip: deltas must be >= 0");
  if (!(params.u_floor > 0)) throw std::invalid_argument("assemble_cip: u_floor must be > 0");

  const DofMap& map = disc.vel_map;
  const double inv_norm = 1.0 / std::max(params.u_floor, transport_inf_norm(disc, a));
  const double h_global = disc.mesh.max_diameter();

  Triplets trips;
  trips.reserve(disc.faces.interior_count * 18 * 18);
  for (const Face& f : disc.faces.faces) {
    if (f.right_cell == -1) continue;  // interior faces only
    const FaceJumpContext ctx = make_face_context(disc, f);
    const int nc = 2 * static_cast<int>(ctx.comb_nodes.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nc, nc);
    Eigen::Matrix4Xd jumps(4, nc);

    const double h = params.use_global_h ? h_global : f.length;
    const double w1 = params.delta1 * h * h;
    const double w2 = params.delta2 * h * h * h * h;
    const double w3 = params.delta3 * h * h * h * h * h * h;

    const Eigen::Vector2d p0 = disc.mesh.vertices[f.vertices[0]];
    const Eigen::Vector2d p1 = disc.mesh.vertices[f.vertices[1]];
    for (size_t q = 0; q < disc.face_quad.points.size(); ++q) {
      const Eigen::Vector2d x = p0 + disc.face_quad.points[q] * (p1 - p0);
      const double wq = disc.face_quad.weights[q] * f.length * inv_norm;
      fill_jump_rows(disc, a, f, ctx, x, jumps);
      local.noalias() += (wq * w1) * (jumps.row(0).transpose() * jumps.row(0));
      local.noalias() += (wq * w2) * (jumps.row(1).transpose() * jumps.row(1));
      local.noalias() += (wq * w3) * (jumps.row(2).transpose() * jumps.row(2));
      local.noalias() += (wq * w3) * (jumps.row(3).transpose() * jumps.row(3));
    }
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j)
        trips.emplace_back(map.dof(ctx.comb_nodes[i / 2], i % 2),
                           map.dof(ctx.comb_nodes[j / 2], j % 2), local(i, j));
  }
  return from_triplets(map.n_dofs, map.n_dofs, trips);
}

Eigen::Matrix4Xd cip_face_jumps(const Discretization& disc, const TransportField& a,
                                const Eigen::VectorXd& field, int face_index) {
  const Face& f = disc.faces.faces.at(face_index);
  if (f.right_cell == -1) throw std::invalid_argument("cip_face_jumps: boundary face");
  const FaceJumpContext ctx = make_face_context(disc, f);
  const int nc = 2 * static_cast<int>(ctx.comb_nodes.size());
  Eigen::Matrix4Xd jumps(4, nc);
  Eigen::VectorXd coeffs(nc);
  for (int i = 0; i < nc; ++i) coeffs[i] = field[disc.vel_map.dof(ctx.comb_nodes[i / 2], i % 2)];

  const Eigen::Vector2d p0 = disc.mesh.vertices[f.vertices[0]];
  const Eigen::Vector2d p1 = disc.mesh.vertices[f.vertices[1]];
  Eigen::Matrix4Xd out(4, disc.face_quad.points.size());
  for (size_t q = 0; q < disc.face_quad.points.size(); ++q) {
    const Eigen::Vector2d x = p0 + disc.face_quad.points[q] * (p1 - p0);
    fill_jump_rows(disc, a, f, ctx, x, jumps);
    out.col(q) = jumps * coeffs;
  }
  return out;
}

}  // namespace svcip
