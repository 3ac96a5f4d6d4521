#ifndef FRACSTEP_DISCRETIZE_HPP
#define FRACSTEP_DISCRETIZE_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracstep {

enum class SpatialBackend { fd1d, fem1d, fem2d };

// Uniform grid on the unit interval (dim 1) or the unit square (dim 2, each
// cell split into two right triangles along the same diagonal). Only
// interior nodes carry degrees of freedom; boundary values are eliminated
// (homogeneous Dirichlet).
struct Mesh {
  int dim;
  int M;       // subdivisions per direction
  double h;    // 1/M
  std::vector<double> xs;  // interior node coordinates, row-major in 2D
  std::vector<double> ys;  // all zero in 1D

  int n_interior() const { return static_cast<int>(xs.size()); }
  // Bijection (i[,j]) in 1..M-1 -> row index.
  int index(int i, int j = 1) const {
    return dim == 1 ? i - 1 : (j - 1) * (M - 1) + (i - 1);
  }
};

// Symmetric positive (semi)definite sparse matrix in compressed-row layout.
struct SparseSpd {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1
  std::vector<int> col;
  std::vector<double> val;
  bool spd_hint = false;

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  double coeff(int i, int j) const;  // 0 when structurally absent
  bool is_identity() const;
  // One "row col value" triplet per line, 17 significant digits.
  std::string to_triplets() const;
  Eigen::SparseMatrix<double> to_eigen() const;

  static SparseSpd from_triplets(
      int n, const std::vector<std::tuple<int, int, double>>& entries,
      bool spd_hint);
  static SparseSpd identity(int n);
};

// Assembled interior-node mass and stiffness operators. The stiffness matrix
// already carries the diffusion coefficient kappa.
struct OperatorPair {
  SparseSpd mass;
  SparseSpd stiffness;
  double kappa = 0.0;
  bool identity_mass = false;
};

struct SolveFailure : std::runtime_error {
  SolveFailure(const std::string& msg, double residual_, int iterations_)
      : std::runtime_error(msg), residual(residual_), iterations(iterations_) {}
  double residual;
  int iterations;
};

enum class SpdBackend { automatic, cholesky, conjugate_gradient };

Mesh build_mesh(int dim, int M);

// Consistent P1 mass matrix and kappa-scaled stiffness matrix with Dirichlet
// rows and columns eliminated.
OperatorPair assemble_fem(const Mesh& mesh, double kappa);

// 1D finite differences: stiffness = kappa/h^2 tridiag(-1,2,-1), mass = I.
OperatorPair assemble_fd(const Mesh& mesh, double kappa);

// Direct or iterative SPD solve with relative residual <= 1e-12. Sparse
// Cholesky for n <= 2e5 (automatic), Jacobi-preconditioned CG otherwise;
// throws SolveFailure when the residual target cannot be met within
// 10 n iterations.
Eigen::VectorXd solve_spd(const SparseSpd& A, const Eigen::VectorXd& b,
                          SpdBackend backend = SpdBackend::automatic);

// Reusable Cholesky factorization for repeated solves against one matrix.
class SpdFactor {
 public:
  explicit SpdFactor(const SparseSpd& A);
  explicit SpdFactor(const Eigen::SparseMatrix<double>& A);
  // Solve with one iterative-refinement pass.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  Eigen::SparseMatrix<double> matrix_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

}  // namespace fracstep

#endif  // FRACSTEP_DISCRETIZE_HPP
