#include "gensub/matrix_core.hpp"

#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace gensub {

Vector elem_sym_invariants_complex(const Matrix& a)
{
    require_square(a, "elem_sym_invariants");
    const Index n = a.rows();
    // Work on a/s so the recursion stays O(1) in magnitude, then rescale e_k by s^k.
    const double s = max_abs(a) > 0.0 ? max_abs(a) : 1.0;
    const Matrix b = a / s;

    // coeff[k] is the coefficient of lambda^k in det(lambda - b).
    std::vector<Complex> coeff(static_cast<std::size_t>(n) + 1, Complex(0.0));
    coeff[n] = 1.0;
    Matrix m = Matrix::Zero(n, n);
    const Matrix id = Matrix::Identity(n, n);
    for (Index k = 1; k <= n; ++k) {
        m = b * m + coeff[n - k + 1] * id;
        coeff[n - k] = -(b * m).trace() / static_cast<double>(k);
    }

    Vector e(n);
    double sk = 1.0;
    for (Index k = 1; k <= n; ++k) {
        sk *= s;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        e(k - 1) = sign * coeff[n - k] * sk;
    }
    return e;
}

RealVector elem_sym_invariants(const Matrix& a)
{
    return elem_sym_invariants_complex(a).real();
}

bool is_psd(const Matrix& a, double tol)
{
    require_square(a, "is_psd");
    if (!is_hermitian(a, tol))
        return false;
    const RealVector e = elem_sym_invariants(hermitian_part(a));
    const double scale = tol_scale(a);
    double sk = 1.0;
    for (Index k = 0; k < e.size(); ++k) {
        sk *= scale;
        if (e(k) < -tol * sk)
            return false;
    }
    return true;
}

RealVector hermitian_eigenvalues(const Matrix& a)
{
    require_square(a, "hermitian_eigenvalues");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double min_eigenvalue(const Matrix& a)
{
    return hermitian_eigenvalues(a)(0);
}

Matrix matrix_exp(const Matrix& a)
{
    require_square(a, "matrix_exp");
    return a.exp();
}

Matrix psd_sqrt(const Matrix& a)
{
    require_square(a, "psd_sqrt");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
    const RealVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

void validate_density(const Matrix& rho, double tol, const std::string& what)
{
    if (rho.rows() != rho.cols() || rho.rows() == 0)
        throw ValidationError(what + ": not a non-empty square matrix");
    if (!is_hermitian(rho, tol))
        throw ValidationError(what + ": not Hermitian (max |A - A*| = " +
                              std::to_string(max_abs(rho - rho.adjoint())) + ")");
    const double lmin = min_eigenvalue(rho);
    if (lmin < -tol * tol_scale(rho))
        throw ValidationError(what + ": not positive semidefinite (min eigenvalue " +
                              std::to_string(lmin) + ")");
    const Complex tr = rho.trace();
    if (std::abs(tr - 1.0) > tol * static_cast<double>(rho.rows()))
        throw ValidationError(what + ": trace " + std::to_string(tr.real()) + " != 1");
}

bool is_density(const Matrix& rho, double tol)
{
    try {
        validate_density(rho, tol);
    } catch (const ValidationError&) {
        return false;
    }
    return true;
}

double von_neumann_entropy(const Matrix& rho, double tol)
{
    validate_density(rho, tol, "von_neumann_entropy");
    const RealVector lambda = hermitian_eigenvalues(rho);
    double s = 0.0;
    for (Index i = 0; i < lambda.size(); ++i)
        if (lambda(i) > 0.0)
            s -= lambda(i) * std::log(lambda(i));
    return s;
}

Matrix partial_trace(const Matrix& m, BipartiteShape shape, Factor traced)
{
    if (m.rows() != m.cols() || m.rows() != shape.dim())
        throw DimensionError("partial_trace: matrix does not match bipartite shape");
    const Index na = shape.dimA, nb = shape.dimB;
    if (traced == Factor::Second) {
        Matrix out = Matrix::Zero(na, na);
        for (Index a = 0; a < na; ++a)
            for (Index ap = 0; ap < na; ++ap)
                for (Index b = 0; b < nb; ++b)
                    out(a, ap) += m(a * nb + b, ap * nb + b);
        return out;
    }
    Matrix out = Matrix::Zero(nb, nb);
    for (Index b = 0; b < nb; ++b)
        for (Index bp = 0; bp < nb; ++bp)
            for (Index a = 0; a < na; ++a)
                out(b, bp) += m(a * nb + b, a * nb + bp);
    return out;
}

Matrix tensor_power(const Matrix& a, int n)
{
    if (n < 1)
        throw DimensionError("tensor_power: exponent must be >= 1");
    Matrix out = a;
    for (int i = 1; i < n; ++i)
        out = kron(out, a);
    return out;
}

} // namespace gensub
