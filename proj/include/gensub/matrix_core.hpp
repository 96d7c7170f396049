#ifndef GENSUB_MATRIX_CORE_HPP
#define GENSUB_MATRIX_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "gensub/errors.hpp"

namespace gensub {

using Complex = std::complex<double>;
using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<Complex>;
using Vector = VectorX<Complex>;
using RealMatrix = MatrixX<double>;
using RealVector = VectorX<double>;

/// Absolute tolerance used by every predicate unless the caller passes one.
/// Comparisons scale it by max(1, |entry|_max) of the matrix under test.
inline constexpr double kDefaultTol = 1e-10;

/// Tensor-factor bookkeeping for a matrix acting on C^dimA (x) C^dimB.
/// Row/column index of (a, b) is a * dimB + b.
struct BipartiteShape {
    Index dimA = 1;
    Index dimB = 1;

    Index dim() const noexcept { return dimA * dimB; }
};

enum class Factor { First, Second };

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

template <typename Derived>
double tol_scale(const Eigen::MatrixBase<Derived>& a)
{
    return std::max(1.0, max_abs(a));
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what)
{
    if (a.rows() != a.cols() || a.rows() == 0)
        throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = kDefaultTol)
{
    if (a.rows() != a.cols())
        return false;
    return max_abs(a - a.adjoint()) <= tol * tol_scale(a);
}

template <typename Derived>
typename Derived::PlainObject hermitian_part(const Eigen::MatrixBase<Derived>& a)
{
    return (a + a.adjoint()) / 2.0;
}

template <typename DA, typename DB>
auto commutator(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b)
{
    return (a * b - b * a).eval();
}

template <typename DA, typename DB>
auto anticommutator(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b)
{
    return (a * b + b * a).eval();
}

/// Kronecker product a (x) b with the (a, b) |-> a * dim(b) + b index convention.
template <typename DA, typename DB>
MatrixX<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b)
{
    MatrixX<typename DA::Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Partial transpose of one tensor factor.  With Factor::Second the entry
/// ((a,b),(a',b')) moves to ((a,b'),(a',b)).  Involutive and trace preserving.
template <typename Derived>
typename Derived::PlainObject partial_transpose(const Eigen::MatrixBase<Derived>& m,
                                                BipartiteShape shape,
                                                Factor which = Factor::Second)
{
    if (m.rows() != m.cols() || m.rows() != shape.dim())
        throw DimensionError("partial_transpose: matrix of size " + std::to_string(m.rows()) +
                             " does not match shape " + std::to_string(shape.dimA) + "x" +
                             std::to_string(shape.dimB));
    typename Derived::PlainObject out(m.rows(), m.cols());
    const Index nb = shape.dimB;
    for (Index a = 0; a < shape.dimA; ++a)
        for (Index b = 0; b < nb; ++b)
            for (Index ap = 0; ap < shape.dimA; ++ap)
                for (Index bp = 0; bp < nb; ++bp) {
                    if (which == Factor::Second)
                        out(a * nb + b, ap * nb + bp) = m(a * nb + bp, ap * nb + b);
                    else
                        out(a * nb + b, ap * nb + bp) = m(ap * nb + b, a * nb + bp);
                }
    return out;
}

/// Elementary symmetric invariants e_1..e_d of the eigenvalue list of `a`,
/// read off the characteristic polynomial (Faddeev-LeVerrier recursion).
Vector elem_sym_invariants_complex(const Matrix& a);

/// Real parts of elem_sym_invariants_complex.  For Hermitian input the
/// imaginary parts are rounding residue.
RealVector elem_sym_invariants(const Matrix& a);

/// A = A* and e_k(A) >= -tol * max(1, |A|_max)^k for every k.
bool is_psd(const Matrix& a, double tol = kDefaultTol);

/// Sorted (ascending) eigenvalues of the Hermitian part of `a`.
RealVector hermitian_eigenvalues(const Matrix& a);

/// Smallest eigenvalue of the Hermitian part of `a`.
double min_eigenvalue(const Matrix& a);

/// e^A by scaling and squaring with a Pade approximant.
Matrix matrix_exp(const Matrix& a);

/// Principal square root of a Hermitian PSD matrix; negative rounding
/// eigenvalues are clipped to zero.
Matrix psd_sqrt(const Matrix& a);

/// Throws ValidationError unless `rho` is Hermitian, PSD and trace one within `tol`.
void validate_density(const Matrix& rho, double tol = kDefaultTol, const std::string& what = "density matrix");
bool is_density(const Matrix& rho, double tol = kDefaultTol);

/// -tr(rho log rho) in nats with 0 log 0 = 0.
double von_neumann_entropy(const Matrix& rho, double tol = kDefaultTol);

/// Partial trace over one tensor factor.
Matrix partial_trace(const Matrix& m, BipartiteShape shape, Factor traced = Factor::Second);

/// n-fold tensor power.
Matrix tensor_power(const Matrix& a, int n);

} // namespace gensub

#endif // GENSUB_MATRIX_CORE_HPP
