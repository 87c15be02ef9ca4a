#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "chronos/common.hpp"

namespace chronos {

// Complex Hermitian matrix with conjugate symmetry enforced at construction.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw std::invalid_argument("HermitianMatrix: not square");
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      if (m_(i, i).imag() != 0.0)
        throw std::invalid_argument("HermitianMatrix: non-real diagonal");
      for (Eigen::Index j = i + 1; j < m_.cols(); ++j)
        if (m_(j, i) != std::conj(m_(i, j)))
          throw std::invalid_argument("HermitianMatrix: not conjugate-symmetric");
    }
  }

  // Builds from an upper-triangle generator entry(i, j), i <= j; the lower
  // triangle is mirrored so symmetry holds exactly.
  template <typename F>
  static HermitianMatrix from_upper(int n, F&& entry) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = complex(std::real(entry(i, i)), 0.0);
      for (int j = i + 1; j < n; ++j) {
        const complex v = entry(i, j);
        m(i, j) = v;
        m(j, i) = std::conj(v);
      }
    }
    HermitianMatrix out;
    out.m_ = std::move(m);
    return out;
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  complex operator()(int i, int j) const { return m_(i, j); }
  double frobenius_norm() const { return m_.norm(); }

 private:
  HermitianMatrix() = default;
  Eigen::MatrixXcd m_;
};

// Full spectral decomposition. Eigenvalues ascend; each eigenvector is
// phase-fixed so its largest-magnitude component is real and positive.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // columns; empty when values-only
  double residual_bound = 0.0;    // max_i ||A v_i - lambda_i v_i|| / ||A||_F

  bool has_vectors() const { return eigenvectors.size() > 0; }
};

namespace detail {

inline void fix_eigenvector_phases(Eigen::MatrixXcd& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double a = std::abs(v(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0) v.col(j) *= std::conj(v(imax, j)) / best;
  }
}

}  // namespace detail

// Householder tridiagonalization + implicit-shift iteration via Eigen's
// self-adjoint solver, plus the deterministic phase/order conventions and an
// explicit residual certificate.
inline EigenSystem eig_hermitian(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.matrix());
  if (solver.info() != Eigen::Success)
    throw numerical_error("eig_hermitian: iteration did not converge at n=" +
                          std::to_string(a.dim()));
  EigenSystem out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  detail::fix_eigenvector_phases(out.eigenvectors);
  const double fro = a.frobenius_norm();
  if (fro > 0.0) {
    const Eigen::MatrixXcd r =
        a.matrix() * out.eigenvectors -
        out.eigenvectors * out.eigenvalues.asDiagonal();
    out.residual_bound = r.colwise().norm().maxCoeff() / fro;
  }
  return out;
}

// Eigenvalues only (used by truncation-convergence ladders).
inline Eigen::VectorXd eig_hermitian_values(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.matrix(),
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw numerical_error("eig_hermitian_values: iteration did not converge");
  return solver.eigenvalues();
}

}  // namespace chronos
