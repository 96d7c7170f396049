#ifndef GENSUB_ENTANGLEMENT_HPP
#define GENSUB_ENTANGLEMENT_HPP

#include <array>

#include "gensub/partitions.hpp"
#include "gensub/random.hpp"

namespace gensub {

/// Correlation matrix of a composed partition, indexed like compose():
/// the pair (a, k) sits at a * shape.dimB + k.
struct ComposedCorrelation {
    Matrix D;
    BipartiteShape shape;
    bool unity = true;

    void validate(double tol = kDefaultTol) const;
};

/// Pull-back of omega through compose(v, w).
ComposedCorrelation composed_pullback(const Partition& v, const Partition& w, const Matrix& omega,
                                      double tol = kDefaultTol);

/// Coefficients gamma_kl of the two-boson state sum gamma_kl b*_k a*_l |0>.
struct GMatrix {
    Eigen::Matrix2cd gamma = Eigen::Matrix2cd::Zero();

    /// Throws unless tr G G* = 1 within `tol`.
    void validate(double tol = 1e-10) const;
    /// det sqrt(G G*) = |det G|.
    double det_abs() const { return std::abs(gamma.determinant()); }
};

/// Haar-distributed unit vector in C^4 reshaped row-major.
GMatrix random_gmatrix(Rng& rng);

struct WitnessReport {
    double minEig = 0.0;
    bool entangled = false;
    RealVector spectrum;
};

/// Spectrum of the partial transpose on the second factor; `entangled`
/// means a negative eigenvalue below -tol was found.  A positive partial
/// transpose is "not witnessed", not a proof of separability.
WitnessReport ppt_test(const ComposedCorrelation& d, double tol = 1e-10);

/// The rank-one matrix D_{(k a),(l b)} = gamma_ka conj(gamma_lb).
ComposedCorrelation two_boson_correlation(const GMatrix& g, double tol = 1e-10);

/// Closed form (det|G|, -det|G|, (1 + s)/2, (1 - s)/2) with
/// s = sqrt(1 - 4 det|G|^2).
std::array<double, 4> two_boson_pt_spectrum(const GMatrix& g);

/// D_{(k a),(l b)} = <psi| b*_l a*_b a_a b_k |psi> evaluated on two plus two
/// bosonic modes with cutoff 2 (modes 0, 1 are a_1, a_2; modes 2, 3 are b_1, b_2).
ComposedCorrelation two_boson_correlation_fock(const GMatrix& g);

/// D_{kl, k'l'} = tr(omega v*_k Lambda(v*_l v_l') v_k') with (k, l) at k d + l,
/// for a column-stacked Heisenberg superoperator Lambda.  With
/// `require_unity` the partition must sum to one and Lambda must be unital.
ComposedCorrelation temporal_correlation(const Partition& v, const Matrix& omega, const Matrix& lambda,
                                         bool require_unity = true, double tol = 1e-8);

/// D = sum lambda_i |psi_i><psi_i| realized as a discrete phase space with
/// weights lambda_i / tr D and values sqrt(tr D) psi_i.
PhaseSpaceModel classical_representation_single(const Matrix& d, double tol = kDefaultTol);

/// sum_i lambda_i P_i (x) Q_i with random rank-one projectors and a random
/// probability vector of `terms` entries.
ComposedCorrelation random_separable(Index dim_a, Index dim_b, int terms, Rng& rng);

} // namespace gensub

#endif // GENSUB_ENTANGLEMENT_HPP
