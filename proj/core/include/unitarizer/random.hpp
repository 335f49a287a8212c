#pragma once

// Seeded pseudorandom matrices for instance generation and property tests.

#include <cstddef>
#include <cstdint>
#include <random>

#include "unitarizer/linalg.hpp"
#include "unitarizer/spd_geometry.hpp"

namespace unitarizer {

using Rng = std::mt19937_64;

/// Independent standard complex Gaussian entries.
ComplexMatrix random_gaussian(std::size_t n, Rng& rng);
/// Haar-distributed unitary (QR of a Gaussian matrix with phase correction).
ComplexMatrix random_unitary(std::size_t n, Rng& rng);
HermitianMatrix random_hermitian(std::size_t n, Rng& rng);

/// Maps the log singular values of g affinely onto [-log(cond)/2, log(cond)/2],
/// keeping the singular vectors. For n = 1, or cond = 1, the result is the
/// unitary polar factor of g.
ComplexMatrix rescale_singular_values(const ComplexMatrix& g, double cond);

/// Random invertible matrix with singular values in [1/sqrt(cond), sqrt(cond)]
/// and condition number exactly cond (for n >= 2).
ComplexMatrix random_invertible(std::size_t n, double cond, Rng& rng);

/// Random positive definite point with Haar eigenvectors and eigenvalues drawn
/// log-uniformly from [1/sqrt(cond), sqrt(cond)].
SpdPoint random_spd(std::size_t n, double cond, Rng& rng);

}  // namespace unitarizer
