#ifndef GENSUB_SPIN_HPP
#define GENSUB_SPIN_HPP

#include <array>
#include <string>
#include <vector>

#include "gensub/partitions.hpp"

namespace gensub {

/// Irreducible spin-ell representation, ell = two_ell / 2.
///
/// J[2] is diagonal with entries ell, ell-1, ..., -ell; J[0], J[1] follow from
/// the ladder operators.  `j` holds the normalized triple J / sqrt(ell(ell+1)),
/// which sums to the identity in squares.  For ell = 0 the triple is zero.
struct SpinRep {
    int two_ell = 1;
    std::array<Matrix, 3> J;
    std::array<Matrix, 3> j;

    double ell() const noexcept { return 0.5 * two_ell; }
    Index dim() const noexcept { return two_ell + 1; }
};

/// Requires 0 <= two_ell and two_ell + 1 <= 64.
SpinRep spin_generators(int two_ell);

/// The partition of unity (j_1, j_2, j_3).  Throws for ell = 0.
Partition spin_partition(const SpinRep& rep);

/// Correlation matrix of rho = (1 + x.sigma)/2 under the normalized spin-1/2
/// partition, computed from D_ab = tr(rho j_b j_a).  Equals (delta - i eps x)/3.
CorrelationMatrix spin_half_pullback(const Eigen::Vector3d& x, double tol = kDefaultTol);

/// The real vector alpha with D_12 = i a_3, D_13 = -i a_2, D_23 = i a_1.
Eigen::Vector3d spin_half_alpha(const Matrix& d);

enum class SpinCase { Half, One, Infinite };

struct Membership {
    bool member = false;
    std::string witness;
};

/// Reduced-state-space test for the three solvable cases:
/// Half: unit-trace ball |alpha| <= 1/3 with diagonal 1/3;
/// One: density matrix with D <= 1/2;
/// Infinite: real density matrix.
/// `witness` names the first violated condition, or "ok".
Membership reduced_membership(SpinCase which, const Matrix& d, double tol = kDefaultTol);

/// D |-> 1 - 2D, the affine bijection from the spin-1 reduced state space onto
/// all qutrit density matrices.  Throws ValidationError for non-members.
Matrix spin_one_tilde(const Matrix& d, double tol = kDefaultTol);

/// Inverse of spin_one_tilde.
Matrix spin_one_from_tilde(const Matrix& tilde);

/// Positivity of Phi(A) for the commutative (infinite spin) partition:
/// A + A^T must be real symmetric PSD.
bool inf_spin_phi_positive(const Matrix& a, double tol = kDefaultTol);

/// Product rule on the unit sphere normalized to total mass one:
/// Gauss-Legendre in cos(theta), uniform in phi.
struct SphereGrid {
    std::vector<Eigen::Vector2d> nodes;   // (theta, phi)
    std::vector<Eigen::Vector3d> points;  // (sin t cos p, sin t sin p, cos t)
    std::vector<double> weights;

    std::size_t size() const noexcept { return weights.size(); }
};

SphereGrid sphere_quadrature(int n_theta, int n_phi);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct MaxEntResult {
    Eigen::Matrix3d Delta = Eigen::Matrix3d::Zero();  // trace zero
    std::vector<double> measure;                      // mass per grid node
    double residual = 0.0;                            // max |moments - D|
    int iterations = 0;
};

/// Node masses w_i exp(<j_i, Delta j_i>) / Z.
std::vector<double> sphere_measure(const Eigen::Matrix3d& delta, const SphereGrid& grid);

/// Second moments sum_i p_i j_i j_i^T of a node measure.
Eigen::Matrix3d sphere_moments(const std::vector<double>& measure, const SphereGrid& grid);
Eigen::Matrix3d sphere_moments(const Eigen::Matrix3d& delta, const SphereGrid& grid);

/// -sum_i p_i log(p_i / w_i): the discretized entropy with respect to the
/// invariant measure.
double sphere_measure_entropy(const std::vector<double>& measure, const SphereGrid& grid);

/// Maximal-entropy measure p ~ exp(<j, Delta j>) on the sphere whose second
/// moments equal the real density matrix D.
///
/// D is rotated to its eigenbasis, the two-parameter diagonal problem is
/// solved by damped Newton from Delta = 0, the result is rotated back and
/// polished by a full five-parameter Newton on the grid.  Spectra within
/// 1e-6 of the boundary of the moment body are rejected with
/// ConvergenceError, as is failure to converge in 200 iterations.
MaxEntResult maxent_sphere(const Matrix& d, const SphereGrid& grid, double tol = kDefaultTol);

} // namespace gensub

#endif // GENSUB_SPIN_HPP
