#pragma once

#include <random>

#include "workstats/qlinalg.hpp"

namespace workstats {

using Rng = std::mt19937_64;

/// Haar-distributed d x d unitary (QR of a complex Ginibre matrix with the
/// phases of R's diagonal absorbed into Q).
ComplexMatrixd haar_unitary(Eigen::Index d, Rng& rng);

/// (A + A^dagger)/2 for A with independent standard complex Gaussian entries, times scale.
ComplexMatrixd random_hermitian(Eigen::Index d, Rng& rng, double scale = 1.0);

/// Independent phases uniform in [0, 2 pi).
Eigen::VectorXd random_phases(Eigen::Index d, Rng& rng);

double uniform(Rng& rng, double lo, double hi);

} // namespace workstats
