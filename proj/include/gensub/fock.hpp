#ifndef GENSUB_FOCK_HPP
#define GENSUB_FOCK_HPP

#include <vector>

#include "gensub/dynamics.hpp"
#include "gensub/embeddings.hpp"

namespace gensub {

/// Annihilation operators of n modes on the (truncated) Fock space.
///
/// Mode 0 is the leftmost tensor factor and each factor is in the occupation
/// basis |0>, |1>, ..., |cutoff>.  Fermionic operators carry the
/// Jordan-Wigner string Z = diag(1, -1) on the factors to their left.
struct FockRep {
    Statistics statistics = Statistics::Fermi;
    int modes = 0;
    int cutoff = 1;
    Index dim = 1;
    std::vector<SparseMatrix> ops;

    const SparseMatrix& a(int k) const { return ops.at(static_cast<std::size_t>(k)); }
    SparseMatrix adag(int k) const { return a(k).adjoint(); }
    /// Total number operator sum_k a*_k a_k.
    SparseMatrix number() const;
    /// The state with every mode empty.
    Vector vacuum() const;
    /// Occupation of mode k in basis state `index`.
    int occupation(Index index, int k) const;
};

/// n <= 10 fermionic modes.
FockRep fermion_ops(int n);

/// n bosonic modes with occupations 0..cutoff, (cutoff + 1)^n <= 4096.
FockRep boson_ops(int n, int cutoff);

/// b = sum_kl B_kl a*_k a_l for Hermitian B.
Matrix additive_observable(const FockRep& rep, const Matrix& b, double tol = kDefaultTol);

/// Q_kl = tr(rho a*_l a_k), so that tr(Q B) = tr(rho b).
Symbol symbol_of(const FockRep& rep, const Matrix& rho, double tol = 1e-8);

/// Many-body generator for the quasi-free model: H = sum eps_k a*_k a_k,
/// decay jumps sum_l (sqrt gamma)_ml a_l and production jumps
/// sum_l (sqrt kappa)_lm a*_l.
LindbladModel quasifree_lindblad_model(const FockRep& rep, const QuasiFreeModel& model, double tol = 1e-10);

/// The quasi-free dissipator evaluated as the double sum
/// sum_kl gamma_kl (a_l rho a*_k - 1/2 {a*_k a_l, rho})
///     + kappa_kl (a*_k rho a_l - 1/2 {a_l a*_k, rho}).
Matrix quasifree_dissipator(const FockRep& rep, const QuasiFreeModel& model, const Matrix& rho);

/// The gauge-invariant quasi-free state with symbol Q: a product of
/// occupation distributions in the eigenmodes of Q (thermal for bosons,
/// truncated at the cutoff and renormalized).
Matrix quasifree_state(const FockRep& rep, const Symbol& q);

/// Probability of finding any mode at the cutoff.  Bosonic oracle results
/// are trusted only while this stays below 1e-8.
double top_occupation_weight(const FockRep& rep, const Matrix& rho);

inline constexpr double kTruncationTrust = 1e-8;

} // namespace gensub

#endif // GENSUB_FOCK_HPP
