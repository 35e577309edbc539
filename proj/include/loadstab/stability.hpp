#pragma once

#include <Eigen/Dense>
#include <string>

namespace loadstab {

enum class Outcome { Stable, Unstable, Indeterminate };

/// Which region of the (sign f'(r), sign gamma, |f'(r)| vs |gamma| rho)
/// parameter space the inputs fall in. The outcome is a function of the
/// scenario alone.
enum class Scenario {
  DefaultLoadBalancing,      // f' < 0, gamma >= 0
  NegativeGammaStable,       // f' < 0, gamma < 0, |f'| > |gamma| rho
  NegativeGammaUnstable,     // f' < 0, gamma < 0, |f'| < |gamma| rho
  NegativeGammaBoundary,     // f' < 0, gamma < 0, |f'| = |gamma| rho
  ZeroSelfNegativeGamma,     // f' = 0, gamma < 0
  ZeroSelfNonnegativeGamma,  // f' = 0, gamma >= 0
  PositiveSelf,              // f' > 0
};

struct StabilityEvidence {
  double fprime_r = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  /// |f'(r)| and |gamma|*rho, filled when the scenario hinges on them.
  double self_magnitude = 0.0;
  double coupling_magnitude = 0.0;
  bool threshold_compared = false;
};

struct StabilityVerdict {
  Outcome outcome;
  Scenario scenario;
  StabilityEvidence evidence;
};

/// Classifies the uniform equilibrium from f'(r), gamma = g'(0) and the
/// Laplacian spectral abscissa rho. Exact at the advertised sign boundaries;
/// the |f'(r)| = |gamma| rho comparison carries a 1e-9 relative band inside
/// which the verdict is Indeterminate rather than a guess.
StabilityVerdict classify(double fprime_r, double gamma, double rho);

/// Direct spectral oracle: true iff every Jacobian eigenvalue satisfies
/// Re(mu) < -1e-9 (strict stability with numerical margin).
bool verify_by_spectrum(const Eigen::MatrixXd& jacobian);

std::string to_string(Outcome outcome);
std::string to_string(Scenario scenario);

}  // namespace loadstab
