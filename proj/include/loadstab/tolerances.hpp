#pragma once

namespace loadstab::tol {

/// Kernel identities: |(Lambda^T 1)_i|, |g(0)|, equilibrium residuals.
inline constexpr double kKernelZero = 1e-12;

/// Set-membership slack: Gershgorin containment, Laplacian spectrum
/// non-negativity, the strict-stability margin of verify_by_spectrum.
inline constexpr double kContainment = 1e-9;

/// Relative eigenpair residual ||(M - lambda I) v|| / ||M||.
inline constexpr double kEigenResidual = 1e-8;

/// Relative band around |f'(r)| = |gamma| * rho treated as the boundary.
inline constexpr double kClassifierBoundary = 1e-9;

/// Capacity coordinates at or below this floor are a singularity of the
/// transformed vector field.
inline constexpr double kCapacityFloor = 1e-12;

/// Absolute accuracy target for probability quadratures.
inline constexpr double kQuadrature = 1e-8;

}  // namespace loadstab::tol
