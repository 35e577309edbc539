#include "loadstab/spectral.hpp"

#include <Eigen/Eigenvalues>

namespace loadstab {

Spectrum eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw ShapeError("eigenvalues: matrix must be square");
  }
  if (!m.allFinite()) {
    throw DataError("eigenvalues: matrix has non-finite entries");
  }
  if (m.rows() == 0) {
    return Spectrum{Eigen::VectorXcd(0), 0};
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalues: QR iteration did not converge");
  }
  return Spectrum{solver.eigenvalues(), m.rows()};
}

double spectral_abscissa(const Spectrum& spectrum) {
  if (spectrum.eigenvalues.size() == 0) {
    throw DataError("spectral_abscissa: empty spectrum");
  }
  return spectrum.eigenvalues.real().maxCoeff();
}

}  // namespace loadstab
