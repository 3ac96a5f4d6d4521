#include "fracstep/discretize.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

namespace fracstep {

Eigen::VectorXd SparseSpd::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      acc += val[p] * x[col[p]];
    }
    y[i] = acc;
  }
  return y;
}

double SparseSpd::coeff(int i, int j) const {
  for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
    if (col[p] == j) {
      return val[p];
    }
  }
  return 0.0;
}

bool SparseSpd::is_identity() const {
  for (int i = 0; i < n; ++i) {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      if (val[p] != (col[p] == i ? 1.0 : 0.0)) {
        return false;
      }
    }
    if (coeff(i, i) != 1.0) {
      return false;
    }
  }
  return true;
}

std::string SparseSpd::to_triplets() const {
  std::string out;
  char line[64];
  for (int i = 0; i < n; ++i) {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      std::snprintf(line, sizeof(line), "%d %d %.17g\n", i, col[p], val[p]);
      out += line;
    }
  }
  return out;
}

Eigen::SparseMatrix<double> SparseSpd::to_eigen() const {
  Eigen::SparseMatrix<double> A(n, n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(val.size());
  for (int i = 0; i < n; ++i) {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      trip.emplace_back(i, col[p], val[p]);
    }
  }
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

SparseSpd SparseSpd::from_triplets(
    int n, const std::vector<std::tuple<int, int, double>>& entries,
    bool spd_hint) {
  std::map<std::pair<int, int>, double> acc;
  for (const auto& [i, j, v] : entries) {
    acc[{i, j}] += v;
  }
  SparseSpd A;
  A.n = n;
  A.spd_hint = spd_hint;
  A.row_ptr.assign(n + 1, 0);
  for (const auto& [ij, v] : acc) {
    ++A.row_ptr[ij.first + 1];
  }
  for (int i = 0; i < n; ++i) {
    A.row_ptr[i + 1] += A.row_ptr[i];
  }
  A.col.resize(acc.size());
  A.val.resize(acc.size());
  std::size_t p = 0;
  for (const auto& [ij, v] : acc) {  // map iterates row-major sorted
    A.col[p] = ij.second;
    A.val[p] = v;
    ++p;
  }
  return A;
}

SparseSpd SparseSpd::identity(int n) {
  SparseSpd A;
  A.n = n;
  A.spd_hint = true;
  A.row_ptr.resize(n + 1);
  A.col.resize(n);
  A.val.assign(n, 1.0);
  for (int i = 0; i <= n; ++i) {
    A.row_ptr[i] = i;
  }
  for (int i = 0; i < n; ++i) {
    A.col[i] = i;
  }
  return A;
}

Mesh build_mesh(int dim, int M) {
  if (dim != 1 && dim != 2) {
    throw std::domain_error("mesh dimension must be 1 or 2");
  }
  if (M < 2) {
    throw std::domain_error("mesh needs at least 2 subdivisions");
  }
  Mesh mesh;
  mesh.dim = dim;
  mesh.M = M;
  mesh.h = 1.0 / M;
  if (dim == 1) {
    mesh.xs.reserve(M - 1);
    mesh.ys.assign(M - 1, 0.0);
    for (int i = 1; i < M; ++i) {
      mesh.xs.push_back(i * mesh.h);
    }
  } else {
    mesh.xs.reserve((M - 1) * (M - 1));
    mesh.ys.reserve((M - 1) * (M - 1));
    for (int j = 1; j < M; ++j) {
      for (int i = 1; i < M; ++i) {
        mesh.xs.push_back(i * mesh.h);
        mesh.ys.push_back(j * mesh.h);
      }
    }
  }
  return mesh;
}

namespace {

void check_kappa(double kappa) {
  if (!(kappa > 0.0)) {
    throw std::domain_error("diffusion coefficient kappa must be positive");
  }
}

OperatorPair assemble_fem_1d(const Mesh& mesh, double kappa) {
  const int n = mesh.n_interior();
  const double h = mesh.h;
  std::vector<std::tuple<int, int, double>> sm, st;
  // Element (x_e, x_{e+1}): local mass h/6 [[2,1],[1,2]],
  // local stiffness kappa/h [[1,-1],[-1,1]].
  for (int e = 0; e < mesh.M; ++e) {
    const int nodes[2] = {e, e + 1};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const int ia = nodes[a], ib = nodes[b];
        if (ia == 0 || ia == mesh.M || ib == 0 || ib == mesh.M) {
          continue;
        }
        const double mloc = (a == b ? 2.0 : 1.0) * h / 6.0;
        const double sloc = (a == b ? 1.0 : -1.0) * kappa / h;
        sm.emplace_back(ia - 1, ib - 1, mloc);
        st.emplace_back(ia - 1, ib - 1, sloc);
      }
    }
  }
  OperatorPair ops;
  ops.mass = SparseSpd::from_triplets(n, sm, true);
  ops.stiffness = SparseSpd::from_triplets(n, st, true);
  ops.kappa = kappa;
  return ops;
}

OperatorPair assemble_fem_2d(const Mesh& mesh, double kappa) {
  const int n = mesh.n_interior();
  const int M = mesh.M;
  const double h = mesh.h;
  const double area = 0.5 * h * h;
  std::vector<std::tuple<int, int, double>> sm, st;
  sm.reserve(static_cast<std::size_t>(n) * 9);
  st.reserve(static_cast<std::size_t>(n) * 9);
  // Each cell is split along the (1,1) diagonal into two right triangles.
  // For P1 on a triangle with vertices p0 p1 p2:
  //   K[a][b] = kappa (g_a . g_b) area, with g_a the constant gradient of
  //   the hat function at vertex a; M[a][b] = area/12 (1 + [a==b]).
  const auto add_triangle = [&](const std::array<std::pair<int, int>, 3>& v) {
    double px[3], py[3];
    for (int a = 0; a < 3; ++a) {
      px[a] = v[a].first * h;
      py[a] = v[a].second * h;
    }
    double gx[3], gy[3];
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      // gradient of the barycentric coordinate at vertex a
      gx[a] = (py[b] - py[c]) / (2.0 * area);
      gy[a] = (px[c] - px[b]) / (2.0 * area);
    }
    for (int a = 0; a < 3; ++a) {
      const auto [ia, ja] = v[a];
      if (ia == 0 || ia == M || ja == 0 || ja == M) {
        continue;
      }
      for (int b = 0; b < 3; ++b) {
        const auto [ib, jb] = v[b];
        if (ib == 0 || ib == M || jb == 0 || jb == M) {
          continue;
        }
        const int ra = mesh.index(ia, ja), rb = mesh.index(ib, jb);
        st.emplace_back(ra, rb, kappa * (gx[a] * gx[b] + gy[a] * gy[b]) * area);
        sm.emplace_back(ra, rb, area / 12.0 * (a == b ? 2.0 : 1.0));
      }
    }
  };
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i < M; ++i) {
      add_triangle({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
      add_triangle({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
    }
  }
  OperatorPair ops;
  ops.mass = SparseSpd::from_triplets(n, sm, true);
  ops.stiffness = SparseSpd::from_triplets(n, st, true);
  ops.kappa = kappa;
  return ops;
}

}  // namespace

OperatorPair assemble_fem(const Mesh& mesh, double kappa) {
  check_kappa(kappa);
  return mesh.dim == 1 ? assemble_fem_1d(mesh, kappa)
                       : assemble_fem_2d(mesh, kappa);
}

OperatorPair assemble_fd(const Mesh& mesh, double kappa) {
  check_kappa(kappa);
  if (mesh.dim != 1) {
    throw std::domain_error("finite-difference backend supports 1D only");
  }
  const int n = mesh.n_interior();
  const double w = kappa / (mesh.h * mesh.h);
  std::vector<std::tuple<int, int, double>> st;
  for (int i = 0; i < n; ++i) {
    st.emplace_back(i, i, 2.0 * w);
    if (i > 0) {
      st.emplace_back(i, i - 1, -w);
    }
    if (i + 1 < n) {
      st.emplace_back(i, i + 1, -w);
    }
  }
  OperatorPair ops;
  ops.mass = SparseSpd::identity(n);
  ops.stiffness = SparseSpd::from_triplets(n, st, true);
  ops.kappa = kappa;
  ops.identity_mass = true;
  return ops;
}

Eigen::VectorXd solve_spd(const SparseSpd& A, const Eigen::VectorXd& b,
                          SpdBackend backend) {
  if (A.n != b.size()) {
    throw std::invalid_argument("solve_spd: dimension mismatch");
  }
  if (A.n == 0) {
    return Eigen::VectorXd();
  }
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    return Eigen::VectorXd::Zero(A.n);
  }
  const Eigen::SparseMatrix<double> M = A.to_eigen();
  const bool use_direct =
      backend == SpdBackend::cholesky ||
      (backend == SpdBackend::automatic && A.n <= 200000);
  if (use_direct) {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(M);
    if (llt.info() != Eigen::Success) {
      throw SolveFailure("sparse Cholesky factorization failed", 0.0, 0);
    }
    Eigen::VectorXd x = llt.solve(b);
    for (int pass = 0; pass < 4; ++pass) {
      const Eigen::VectorXd r = b - M * x;
      if (r.norm() <= 1e-12 * bnorm) {
        return x;
      }
      x += llt.solve(r);
    }
    const double rel = (b - M * x).norm() / bnorm;
    if (rel <= 1e-12) {
      return x;
    }
    throw SolveFailure("iterative refinement stalled", rel, 4);
  }
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                           Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg(M);
  cg.setTolerance(1e-13);
  cg.setMaxIterations(10LL * A.n);
  const Eigen::VectorXd x = cg.solve(b);
  const double rel = (b - M * x).norm() / bnorm;
  if (rel > 1e-12) {
    throw SolveFailure("conjugate gradient did not reach the residual target",
                       rel, static_cast<int>(cg.iterations()));
  }
  return x;
}

SpdFactor::SpdFactor(const SparseSpd& A) : SpdFactor(A.to_eigen()) {}

SpdFactor::SpdFactor(const Eigen::SparseMatrix<double>& A) : matrix_(A) {
  llt_.compute(matrix_);
  if (llt_.info() != Eigen::Success) {
    throw SolveFailure("sparse Cholesky factorization failed", 0.0, 0);
  }
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = llt_.solve(b);
  x += llt_.solve(b - matrix_ * x);
  return x;
}

}  // namespace fracstep
