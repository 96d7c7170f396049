#ifndef GENSUB_EMBEDDINGS_HPP
#define GENSUB_EMBEDDINGS_HPP

#include <span>

#include "gensub/partitions.hpp"

namespace gensub {

/// Fermions pair with the anticommutator (upper signs) and the determinant,
/// bosons with the commutator and the permanent.
enum class Statistics { Fermi, Bose };

const char* to_string(Statistics s) noexcept;

/// One-particle density matrix, Q_kl = omega(a*_l a_k) = <k, Q l>.
///
/// tr Q is the mean particle number.  Fermionic symbols satisfy Q <= 1.
struct Symbol {
    Matrix Q;
    Statistics statistics = Statistics::Fermi;

    Index modes() const noexcept { return Q.rows(); }

    /// Hermitian, PSD and (fermions) 1 - Q PSD, all within `tol`.
    void validate(double tol = 1e-8) const;
};

/// Psi(D) = D (x) omega_E.
Matrix product_embedding(const Matrix& d, const Matrix& omega_env, double tol = kDefaultTol);

/// Psi(D) = D (x) ... (x) D (N factors, total dimension at most 4096).
Matrix meanfield_embedding(const Matrix& d, int n_particles, double tol = kDefaultTol);

/// Lagrange multipliers of the maximal-entropy state
/// exp(-sum_ij alpha_ij v_i* v_j) / Z(alpha).
struct GibbsParams {
    Matrix alpha;
    double logZ = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// The normalized state exp(-Phi(alpha)) / Z for Hermitian alpha; the log of
/// Z is written to `log_z` when given.
Matrix gibbs_state(const Partition& v, const Matrix& alpha, double* log_z = nullptr);

/// Solves Phi*(Z^-1 exp(-Phi(alpha))) = D for Hermitian alpha by damped
/// Newton with a central finite-difference Jacobian (step 1e-6) and
/// least-squares steps.  The identity direction of alpha, which only shifts
/// log Z when m = 1, is left free.
///
/// Throws RankDeficiencyError when the Jacobian cannot reach every
/// direction of the reduced state space (e.g. the spin-1/2 partition, where
/// d exceeds the global dimension), and ConvergenceError when D is on or
/// outside the boundary (no convergence within 300 iterations).
GibbsParams gibbs_embedding(const Partition& v, const CorrelationMatrix& d, double tol = kDefaultTol);

/// Determinant by LU.
Complex determinant(const Matrix& m);

/// Permanent by Ryser's formula; exponential in the size.
Complex permanent(const Matrix& m);

/// omega_Q(a*_{i1} ... a*_{ik} a_{jk} ... a_{j1}) = det_(+/-)[<j_a, Q i_b>].
///
/// `creators` lists i1..ik and `annihilators` lists the annihilation
/// indices in operator order, jk..j1.  Indices are zero-based; k <= 8.
Complex quasifree_expectation(const Symbol& sym, std::span<const int> creators,
                              std::span<const int> annihilators);

} // namespace gensub

#endif // GENSUB_EMBEDDINGS_HPP
