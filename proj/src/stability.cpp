#include "loadstab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "loadstab/errors.hpp"
#include "loadstab/spectral.hpp"
#include "loadstab/tolerances.hpp"

namespace loadstab {

StabilityVerdict classify(double fprime_r, double gamma, double rho) {
  if (!std::isfinite(fprime_r) || !std::isfinite(gamma) ||
      !std::isfinite(rho)) {
    throw DataError("classify: non-finite input");
  }
  if (rho < 0.0) {
    throw ParameterError(
        "classify: rho must be non-negative (Laplacian spectral abscissa)");
  }

  StabilityVerdict verdict;
  verdict.evidence.fprime_r = fprime_r;
  verdict.evidence.gamma = gamma;
  verdict.evidence.rho = rho;

  if (fprime_r > 0.0) {
    verdict.scenario = Scenario::PositiveSelf;
    verdict.outcome = Outcome::Unstable;
    return verdict;
  }
  if (fprime_r == 0.0) {
    verdict.scenario = gamma < 0.0 ? Scenario::ZeroSelfNegativeGamma
                                   : Scenario::ZeroSelfNonnegativeGamma;
    verdict.outcome =
        gamma < 0.0 ? Outcome::Unstable : Outcome::Indeterminate;
    return verdict;
  }
  // f'(r) < 0 from here on.
  if (gamma >= 0.0) {
    verdict.scenario = Scenario::DefaultLoadBalancing;
    verdict.outcome = Outcome::Stable;
    return verdict;
  }

  const double self_mag = std::abs(fprime_r);
  const double coupling_mag = std::abs(gamma) * rho;
  verdict.evidence.self_magnitude = self_mag;
  verdict.evidence.coupling_magnitude = coupling_mag;
  verdict.evidence.threshold_compared = true;

  const double band =
      tol::kClassifierBoundary * std::max(self_mag, coupling_mag);
  if (std::abs(self_mag - coupling_mag) <= band) {
    verdict.scenario = Scenario::NegativeGammaBoundary;
    verdict.outcome = Outcome::Indeterminate;
  } else if (self_mag > coupling_mag) {
    verdict.scenario = Scenario::NegativeGammaStable;
    verdict.outcome = Outcome::Stable;
  } else {
    verdict.scenario = Scenario::NegativeGammaUnstable;
    verdict.outcome = Outcome::Unstable;
  }
  return verdict;
}

bool verify_by_spectrum(const Eigen::MatrixXd& jacobian) {
  return spectral_abscissa(eigenvalues(jacobian)) < -tol::kContainment;
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Stable:
      return "stable";
    case Outcome::Unstable:
      return "unstable";
    case Outcome::Indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::DefaultLoadBalancing:
      return "default-load-balancing";
    case Scenario::NegativeGammaStable:
      return "negative-gamma-stable";
    case Scenario::NegativeGammaUnstable:
      return "negative-gamma-unstable";
    case Scenario::NegativeGammaBoundary:
      return "negative-gamma-boundary";
    case Scenario::ZeroSelfNegativeGamma:
      return "zero-self-negative-gamma";
    case Scenario::ZeroSelfNonnegativeGamma:
      return "zero-self-nonnegative-gamma";
    case Scenario::PositiveSelf:
      return "positive-self";
  }
  return "unknown";
}

}  // namespace loadstab
