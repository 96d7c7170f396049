#ifndef GENSUB_RANDOM_HPP
#define GENSUB_RANDOM_HPP

#include <cstdint>
#include <random>

#include "gensub/matrix_core.hpp"

namespace gensub {

/// Seeded generator used by every sampling routine, so runs are replayable.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Entries i.i.d. complex Gaussian with unit variance.
inline Matrix random_ginibre(Index rows, Index cols, Rng& rng)
{
    std::normal_distribution<double> n01(0.0, std::sqrt(0.5));
    Matrix g(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            g(i, j) = Complex(n01(rng), n01(rng));
    return g;
}

inline Vector random_state_vector(Index n, Rng& rng)
{
    Vector v = random_ginibre(n, 1, rng).col(0);
    return v / v.norm();
}

inline Matrix random_hermitian(Index n, Rng& rng)
{
    const Matrix g = random_ginibre(n, n, rng);
    return (g + g.adjoint()) / 2.0;
}

inline Matrix random_psd(Index n, Rng& rng)
{
    const Matrix g = random_ginibre(n, n, rng);
    return g * g.adjoint();
}

/// Full-rank density matrix from the Hilbert-Schmidt ensemble.
inline Matrix random_density(Index n, Rng& rng)
{
    Matrix rho = random_psd(n, rng);
    rho /= rho.trace();
    return hermitian_part(rho);
}

inline Matrix random_pure_density(Index n, Rng& rng)
{
    const Vector v = random_state_vector(n, rng);
    return v * v.adjoint();
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase of R fixed).
inline Matrix random_unitary(Index n, Rng& rng)
{
    const Eigen::HouseholderQR<Matrix> qr(random_ginibre(n, n, rng));
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (Index j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0)
            q.col(j) *= r(j, j) / mag;
    }
    return q;
}

/// Haar-random rotation in SO(3).
inline Eigen::Matrix3d random_rotation(Rng& rng)
{
    std::normal_distribution<double> n01;
    Eigen::Matrix3d g;
    for (Index i = 0; i < 9; ++i)
        g(i) = n01(rng);
    const Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
    Eigen::Matrix3d q = qr.householderQ();
    const Eigen::Matrix3d r = qr.matrixQR();
    for (Index j = 0; j < 3; ++j)
        if (r(j, j) < 0.0)
            q.col(j) *= -1.0;
    if (q.determinant() < 0.0)
        q.col(0) *= -1.0;
    return q;
}

} // namespace gensub

#endif // GENSUB_RANDOM_HPP
