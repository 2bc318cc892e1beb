#include "sdri/elasticity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "sdri/disjoint_set.hpp"

namespace sdri {

Stiffness Stiffness::isotropic(double lambda, double mu) {
  Stiffness s;
  s.voigt = {lambda + 2 * mu, lambda, 0.0, lambda, lambda + 2 * mu, 0.0, 0.0, 0.0, mu};
  return s;
}

double Stiffness::coercivity() const {
  // Mandel form T D T with T = diag(1, 1, sqrt 2) is isometric on symmetric
  // matrices under the Frobenius product
  const double r2 = std::sqrt(2.0);
  const std::array<double, 3> t{1.0, 1.0, r2};
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = 0.5 * t[r] * t[c] * ((*this)(r, c) + (*this)(c, r));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().minCoeff();
}

int SplitMesh::duplicated_vertices() const {
  int dup = 0;
  for (int k = 1; k < node_count(); ++k) {
    if (node_vertex[k] == node_vertex[k - 1]) {
      if (k == 1 || node_vertex[k - 2] != node_vertex[k]) ++dup;
    }
  }
  return dup;
}

SplitMesh build_mesh(const Configuration& cfg) {
  const Grid& g = cfg.grid;
  SplitMesh mesh;
  mesh.grid = g;
  auto in_a = [&](int i, int j) { return g.cell_in_range(i, j) && cfg.composite.contains(g.cell(i, j)); };
  auto joined = [&](EdgeId e) { return !cfg.composite.slits.count(e); };

  // node id for (vertex, incident cell slot); slots: SW, SE, NW, NE
  std::vector<std::array<int, 4>> slot_node(g.vertex_count(), {-1, -1, -1, -1});
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const std::array<bool, 4> present{in_a(i - 1, j - 1), in_a(i, j - 1), in_a(i - 1, j), in_a(i, j)};
      DisjointSet sectors(4);
      if (present[0] && present[1] && joined(g.vertical_edge(i, j - 1))) sectors.unite(0, 1);
      if (present[2] && present[3] && joined(g.vertical_edge(i, j))) sectors.unite(2, 3);
      if (present[0] && present[2] && joined(g.horizontal_edge(i - 1, j))) sectors.unite(0, 2);
      if (present[1] && present[3] && joined(g.horizontal_edge(i, j))) sectors.unite(1, 3);
      const int v = g.vertex(i, j);
      // slots are ordered by cell index, so nodes follow the smallest cell of each sector
      std::array<int, 4> root_node{-1, -1, -1, -1};
      for (int s : {0, 1, 2, 3}) {
        if (!present[s]) continue;
        const int root = sectors.find(s);
        if (root_node[root] < 0) {
          root_node[root] = mesh.node_count();
          mesh.node_vertex.push_back(v);
        }
        slot_node[v][s] = root_node[root];
      }
    }
  }

  for (int c = 0; c < g.cell_count(); ++c) {
    if (!cfg.composite.contains(c)) continue;
    const int i = g.cell_col(c);
    const int j = g.cell_row(c);
    mesh.element_cells.push_back(c);
    mesh.element_substrate.push_back(cfg.substrate.contains(c) ? 1 : 0);
    // the cell is NE of its SW corner, NW of its SE corner, SW of NE, SE of NW
    mesh.element_nodes.push_back({slot_node[g.vertex(i, j)][3], slot_node[g.vertex(i + 1, j)][2],
                                  slot_node[g.vertex(i + 1, j + 1)][0], slot_node[g.vertex(i, j + 1)][1]});
  }

  DisjointSet comps(mesh.node_count());
  for (const auto& nodes : mesh.element_nodes) {
    for (int k = 1; k < 4; ++k) comps.unite(nodes[0], nodes[k]);
  }
  mesh.node_component.assign(mesh.node_count(), -1);
  std::map<int, int> label;
  for (int n = 0; n < mesh.node_count(); ++n) {
    auto [it, inserted] = label.emplace(comps.find(n), mesh.component_count);
    if (inserted) ++mesh.component_count;
    mesh.node_component[n] = it->second;
  }
  return mesh;
}

namespace {

constexpr double kGauss = 0.57735026918962576451;  // 1/sqrt(3)

struct ShapeGradients {
  // dN/dx, dN/dy for the four nodes at one Gauss point
  std::array<double, 4> dx;
  std::array<double, 4> dy;
};

std::array<ShapeGradients, 4> gauss_gradients(double hx, double hy) {
  std::array<ShapeGradients, 4> out{};
  const std::array<double, 4> xi_n{-1, 1, 1, -1};
  const std::array<double, 4> eta_n{-1, -1, 1, 1};
  const std::array<std::array<double, 2>, 4> points{{{-kGauss, -kGauss}, {kGauss, -kGauss}, {kGauss, kGauss}, {-kGauss, kGauss}}};
  for (int q = 0; q < 4; ++q) {
    const double xi = points[q][0];
    const double eta = points[q][1];
    for (int a = 0; a < 4; ++a) {
      out[q].dx[a] = 0.25 * xi_n[a] * (1 + eta_n[a] * eta) * 2.0 / hx;
      out[q].dy[a] = 0.25 * eta_n[a] * (1 + xi_n[a] * xi) * 2.0 / hy;
    }
  }
  return out;
}

Strain element_mismatch(const SplitMesh& mesh, const Material& material, int e) {
  if (material.cell_mismatch) return (*material.cell_mismatch)[mesh.element_cells[e]];
  if (mesh.element_substrate[e] && !material.mismatch_everywhere) return {0.0, 0.0, 0.0};
  return material.film_mismatch();
}

const Stiffness& element_stiffness(const SplitMesh& mesh, const Material& material, int e) {
  return mesh.element_substrate[e] ? material.substrate : material.film;
}

// engineering strain (e11, e22, 2 e12) at a Gauss point
std::array<double, 3> voigt_strain(const ShapeGradients& sg, const std::array<int, 4>& nodes, const std::vector<double>& u) {
  std::array<double, 3> eps{0.0, 0.0, 0.0};
  for (int a = 0; a < 4; ++a) {
    const double ux = u[2 * nodes[a]];
    const double uy = u[2 * nodes[a] + 1];
    eps[0] += sg.dx[a] * ux;
    eps[1] += sg.dy[a] * uy;
    eps[2] += sg.dy[a] * ux + sg.dx[a] * uy;
  }
  return eps;
}

}  // namespace

double ElasticSystem::energy(const std::vector<double>& u) const {
  const Eigen::Map<const Eigen::VectorXd> v(u.data(), static_cast<Eigen::Index>(u.size()));
  return v.dot(stiffness * v) - 2.0 * load.dot(v) + constant;
}

std::vector<double> ElasticSystem::gradient(const std::vector<double>& u) const {
  const Eigen::Map<const Eigen::VectorXd> v(u.data(), static_cast<Eigen::Index>(u.size()));
  const Eigen::VectorXd g = 2.0 * (stiffness * v - load);
  return {g.data(), g.data() + g.size()};
}

ElasticSystem assemble(const SplitMesh& mesh, const Material& material) {
  const double hx = mesh.grid.hx();
  const double hy = mesh.grid.hy();
  const double weight = 0.25 * hx * hy;  // Gauss weight 1 times the Jacobian hx hy / 4
  const auto grads = gauss_gradients(hx, hy);
  const int ndof = 2 * mesh.node_count();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.element_count()) * 64);
  ElasticSystem sys;
  sys.load = Eigen::VectorXd::Zero(ndof);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& nodes = mesh.element_nodes[e];
    const Stiffness& d = element_stiffness(mesh, material, e);
    const Strain m = element_mismatch(mesh, material, e);
    const std::array<double, 3> eps0{m[0], m[1], 2.0 * m[2]};
    Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> fe = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix3d dm;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) dm(r, c) = d(r, c);
    }
    const Eigen::Vector3d e0(eps0[0], eps0[1], eps0[2]);
    for (const auto& sg : grads) {
      Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
      for (int a = 0; a < 4; ++a) {
        b(0, 2 * a) = sg.dx[a];
        b(1, 2 * a + 1) = sg.dy[a];
        b(2, 2 * a) = sg.dy[a];
        b(2, 2 * a + 1) = sg.dx[a];
      }
      ke += weight * b.transpose() * dm * b;
      fe += weight * b.transpose() * dm * e0;
      sys.constant += weight * e0.dot(dm * e0);
    }
    for (int a = 0; a < 8; ++a) {
      const int ga = 2 * nodes[a / 2] + a % 2;
      sys.load[ga] += fe[a];
      for (int b2 = 0; b2 < 8; ++b2) {
        const int gb = 2 * nodes[b2 / 2] + b2 % 2;
        triplets.emplace_back(ga, gb, ke(a, b2));
      }
    }
  }
  sys.stiffness.resize(ndof, ndof);
  sys.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

namespace {

std::vector<int> rigid_pins(const SplitMesh& mesh) {
  std::vector<int> pins;
  const Grid& g = mesh.grid;
  for (int comp = 0; comp < mesh.component_count; ++comp) {
    int a = -1;
    for (int n = 0; n < mesh.node_count(); ++n) {
      if (mesh.node_component[n] == comp) {
        a = n;
        break;
      }
    }
    const Vec2 pa = g.vertex_point(mesh.node_vertex[a]);
    int b = a;
    double best = -1.0;
    for (int n = 0; n < mesh.node_count(); ++n) {
      if (mesh.node_component[n] != comp) continue;
      const Vec2 p = g.vertex_point(mesh.node_vertex[n]);
      const double d = std::hypot(p.x - pa.x, p.y - pa.y);
      if (d > best + 1e-14) {
        best = d;
        b = n;
      }
    }
    const Vec2 pb = g.vertex_point(mesh.node_vertex[b]);
    pins.push_back(2 * a);
    pins.push_back(2 * a + 1);
    pins.push_back(std::abs(pb.x - pa.x) >= std::abs(pb.y - pa.y) ? 2 * b + 1 : 2 * b);
  }
  std::sort(pins.begin(), pins.end());
  return pins;
}

}  // namespace

DisplacementField solve_equilibrium(const SplitMesh& mesh, const Material& material) {
  if (mesh.element_count() == 0) throw ElasticityError("cannot solve on an empty mesh");
  const ElasticSystem sys = assemble(mesh, material);
  const int ndof = 2 * mesh.node_count();
  DisplacementField u;
  u.values.assign(ndof, 0.0);
  u.pinned_dofs = rigid_pins(mesh);

  std::vector<int> free_index(ndof, -1);
  int nfree = 0;
  {
    std::size_t p = 0;
    for (int k = 0; k < ndof; ++k) {
      if (p < u.pinned_dofs.size() && u.pinned_dofs[p] == k) {
        ++p;
        continue;
      }
      free_index[k] = nfree++;
    }
  }
  Eigen::VectorXd rhs(nfree);
  for (int k = 0; k < ndof; ++k) {
    if (free_index[k] >= 0) rhs[free_index[k]] = sys.load[k];
  }
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return u;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(sys.stiffness.nonZeros());
  for (int col = 0; col < sys.stiffness.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, col); it; ++it) {
      const int r = free_index[it.row()];
      const int c = free_index[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  }
  Eigen::SparseMatrix<double> kff(nfree, nfree);
  kff.setFromTriplets(trip.begin(), trip.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(kff);
  if (solver.info() != Eigen::Success) throw ElasticityError("stiffness factorization failed");
  Eigen::VectorXd x = solver.solve(rhs);
  double residual = (kff * x - rhs).norm() / rhs_norm;
  // one refinement step when round-off leaves the residual above target
  if (residual > 1e-10) {
    x += solver.solve(rhs - kff * x);
    residual = (kff * x - rhs).norm() / rhs_norm;
  }
  if (!(residual <= 1e-10)) {
    throw ElasticityError("equilibrium solve did not converge, relative residual " + std::to_string(residual));
  }
  for (int k = 0; k < ndof; ++k) {
    if (free_index[k] >= 0) u.values[k] = x[free_index[k]];
  }
  return u;
}

namespace {

template <class Density>
double integrate(const SplitMesh& mesh, const Material& material, const DisplacementField& u, Density density) {
  if (static_cast<int>(u.values.size()) != 2 * mesh.node_count()) {
    throw ElasticityError("displacement field does not match the mesh");
  }
  const double weight = 0.25 * mesh.grid.hx() * mesh.grid.hy();
  const auto grads = gauss_gradients(mesh.grid.hx(), mesh.grid.hy());
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Strain m = element_mismatch(mesh, material, e);
    const Stiffness& d = element_stiffness(mesh, material, e);
    for (const auto& sg : grads) {
      const auto eps = voigt_strain(sg, mesh.element_nodes[e], u.values);
      const std::array<double, 3> diff{eps[0] - m[0], eps[1] - m[1], eps[2] - 2.0 * m[2]};
      total += weight * density(d, diff);
    }
  }
  return total;
}

}  // namespace

double elastic_energy(const SplitMesh& mesh, const Material& material, const DisplacementField& u) {
  return integrate(mesh, material, u, [](const Stiffness& d, const std::array<double, 3>& v) {
    double s = 0.0;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) s += v[r] * d(r, c) * v[c];
    }
    return s;
  });
}

double elastic_energy(const Configuration& cfg, const DisplacementField& u, const Material& material) {
  return elastic_energy(build_mesh(cfg), material, u);
}

double strain_misfit(const SplitMesh& mesh, const Material& material, const DisplacementField& u) {
  return integrate(mesh, material, u, [](const Stiffness&, const std::array<double, 3>& v) {
    // |M|² = e11² + e22² + 2 e12², with v[2] = 2 e12
    return v[0] * v[0] + v[1] * v[1] + 0.5 * v[2] * v[2];
  });
}

void add_rigid_motion(const SplitMesh& mesh, DisplacementField& u, int component, double tx, double ty, double theta) {
  for (int n = 0; n < mesh.node_count(); ++n) {
    if (mesh.node_component[n] != component) continue;
    const Vec2 p = mesh.grid.vertex_point(mesh.node_vertex[n]);
    u.values[2 * n] += tx - theta * p.y;
    u.values[2 * n + 1] += ty + theta * p.x;
  }
}

double equilibrium_energy(const Configuration& cfg, const Material& material) {
  const SplitMesh mesh = build_mesh(cfg);
  if (mesh.element_count() == 0) return 0.0;
  return elastic_energy(mesh, material, solve_equilibrium(mesh, material));
}

double volume_penalty(const Configuration& cfg, const VolumePenalty& p) {
  return p.lambda1 * std::abs(cfg.composite_area() - p.v1) + p.lambda0 * std::abs(cfg.substrate_area() - p.v0);
}

EnergyBreakdown total_energy(const Configuration& cfg, const SurfaceTensions& tensions, const Material& material,
                             const std::optional<VolumePenalty>& penalty) {
  EnergyBreakdown out = surface_energy(cfg, tensions);
  out.elastic = equilibrium_energy(cfg, material);
  if (penalty) out.penalty = volume_penalty(cfg, *penalty);
  out.total = out.surface + out.elastic + out.penalty;
  return out;
}

}  // namespace sdri
