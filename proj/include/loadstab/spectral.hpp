#pragma once

#include <Eigen/Dense>
#include <complex>

#include "loadstab/errors.hpp"
#include "loadstab/graph.hpp"

namespace loadstab {

/// Full multiset of eigenvalues of a real square matrix, unordered.
/// Complex values of a real matrix occur in conjugate pairs.
struct Spectrum {
  Eigen::VectorXcd eigenvalues;
  Eigen::Index source_dim = 0;
};

/// Dense eigenvalue computation (real Schur reduction, shifted QR).
/// O(n^3); fine for the desk-scale matrices this library targets.
Spectrum eigenvalues(const Eigen::MatrixXd& m);

/// rho = max over Re(lambda).
double spectral_abscissa(const Spectrum& spectrum);

/// Jacobian of the coupled dynamics at the uniform equilibrium:
/// J = f'(r) Id - gamma Lambda^T. Its spectrum is {f'(r) - gamma lambda_i}.
struct JacobianSpec {
  double fprime_r;
  double gamma;
  Eigen::MatrixXd laplacian;
};

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
assemble_jacobian(double fprime_r, double gamma,
                  const Eigen::MatrixBase<Derived>& laplacian) {
  if (laplacian.rows() != laplacian.cols()) {
    throw ShapeError("assemble_jacobian: Laplacian must be square");
  }
  if (!std::isfinite(fprime_r) || !std::isfinite(gamma)) {
    throw DataError("assemble_jacobian: non-finite coefficients");
  }
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> j =
      -gamma * laplacian.transpose();
  j.diagonal().array() += fprime_r;
  return j;
}

inline Eigen::MatrixXd assemble_jacobian(const JacobianSpec& spec) {
  return assemble_jacobian(spec.fprime_r, spec.gamma, spec.laplacian);
}

}  // namespace loadstab
