#include "gensub/embeddings.hpp"

#include <sstream>

#include <Eigen/SVD>

namespace gensub {

const char* to_string(Statistics s) noexcept
{
    return s == Statistics::Fermi ? "fermi" : "bose";
}

void Symbol::validate(double tol) const
{
    if (Q.rows() != Q.cols() || Q.rows() == 0)
        throw ValidationError("symbol: Q must be a non-empty square matrix");
    if (!is_hermitian(Q, tol))
        throw ValidationError("symbol: Q is not Hermitian");
    const RealVector ev = hermitian_eigenvalues(Q);
    if (ev(0) < -tol)
        throw ValidationError("symbol: Q has negative eigenvalue " + std::to_string(ev(0)));
    if (statistics == Statistics::Fermi && ev(ev.size() - 1) > 1.0 + tol)
        throw ValidationError("symbol: fermionic Q exceeds 1 (eigenvalue " +
                              std::to_string(ev(ev.size() - 1)) + ")");
}

Matrix product_embedding(const Matrix& d, const Matrix& omega_env, double tol)
{
    validate_density(d, tol, "product_embedding system state");
    validate_density(omega_env, tol, "product_embedding environment state");
    return kron(d, omega_env);
}

Matrix meanfield_embedding(const Matrix& d, int n_particles, double tol)
{
    validate_density(d, tol, "meanfield_embedding state");
    if (n_particles < 1)
        throw DimensionError("meanfield_embedding: need N >= 1");
    double total = 1.0;
    for (int i = 0; i < n_particles; ++i)
        total *= static_cast<double>(d.rows());
    if (total > 4096.0)
        throw DimensionError("meanfield_embedding: dimension " + std::to_string(d.rows()) + "^" +
                             std::to_string(n_particles) + " exceeds 4096");
    return tensor_power(d, n_particles);
}

Matrix gibbs_state(const Partition& v, const Matrix& alpha, double* log_z)
{
    const Matrix k = hermitian_part(phi_apply(v, alpha));
    const Eigen::SelfAdjointEigenSolver<Matrix> es(k);
    const RealVector lambda = es.eigenvalues();
    const double shift = lambda(0);
    RealVector boltz = (-(lambda.array() - shift)).exp();
    const double z = boltz.sum();
    if (log_z)
        *log_z = -shift + std::log(z);
    boltz /= z;
    return es.eigenvectors() * boltz.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// Real coordinates of a Hermitian d x d matrix: diagonal, then (Re, Im) of the
// strict upper triangle.
RealVector pack_hermitian(const Matrix& h)
{
    const Index d = h.rows();
    RealVector out(d * d);
    Index p = 0;
    for (Index i = 0; i < d; ++i)
        out(p++) = h(i, i).real();
    for (Index i = 0; i < d; ++i)
        for (Index j = i + 1; j < d; ++j) {
            out(p++) = h(i, j).real();
            out(p++) = h(i, j).imag();
        }
    return out;
}

Matrix unpack_hermitian(const RealVector& x, Index d)
{
    Matrix h(d, d);
    Index p = 0;
    for (Index i = 0; i < d; ++i)
        h(i, i) = x(p++);
    for (Index i = 0; i < d; ++i)
        for (Index j = i + 1; j < d; ++j) {
            h(i, j) = Complex(x(p), x(p + 1));
            h(j, i) = std::conj(h(i, j));
            p += 2;
        }
    return h;
}

std::string format_matrix(const Matrix& m)
{
    std::ostringstream os;
    os.precision(4);
    os << "[";
    for (Index i = 0; i < m.rows(); ++i) {
        os << (i ? "; " : "");
        for (Index j = 0; j < m.cols(); ++j)
            os << (j ? ", " : "") << m(i, j).real() << (m(i, j).imag() < 0 ? "-" : "+")
               << std::abs(m(i, j).imag()) << "i";
    }
    os << "]";
    return os.str();
}

} // namespace

GibbsParams gibbs_embedding(const Partition& v, const CorrelationMatrix& target, double tol)
{
    constexpr int kMaxIterations = 300;
    constexpr double kStep = 1e-6;
    constexpr double kRankTol = 1e-6;

    const Index d = v.size();
    if (target.D.rows() != d || target.D.cols() != d)
        throw DimensionError("gibbs_embedding: correlation matrix does not match partition size");
    target.validate(std::max(tol, 1e-10));

    const bool unity = is_partition_of_unity(v);
    const Index n_par = d * d;
    const Index required_rank = n_par - (unity ? 1 : 0);
    const RealVector goal = pack_hermitian(hermitian_part(target.D));

    auto residual = [&](const RealVector& theta) {
        const Matrix omega = gibbs_state(v, unpack_hermitian(theta, d));
        Matrix dd(d, d);
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j)
                dd(i, j) = omega.transpose().cwiseProduct(v.product(j, i)).sum();
        return RealVector(pack_hermitian(hermitian_part(dd)) - goal);
    };

    // Largest entry of the complex deviation matrix.
    auto entry_norm = [d](const RealVector& x) { return max_abs(unpack_hermitian(x, d)); };

    RealVector theta = RealVector::Zero(n_par);
    RealVector r = residual(theta);
    double rnorm = entry_norm(r);
    GibbsParams out;

    while (rnorm > tol) {
        if (out.iterations >= kMaxIterations)
            throw ConvergenceError("gibbs_embedding: no convergence after " +
                                   std::to_string(kMaxIterations) + " iterations (residual " +
                                   std::to_string(rnorm) + ")");
        ++out.iterations;

        RealMatrix jac(n_par, n_par);
        for (Index p = 0; p < n_par; ++p) {
            RealVector tp = theta, tm = theta;
            tp(p) += kStep;
            tm(p) -= kStep;
            jac.col(p) = (residual(tp) - residual(tm)) / (2.0 * kStep);
        }
        const Eigen::JacobiSVD<RealMatrix> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const RealVector& sv = svd.singularValues();
        const double smax = sv(0);
        Index rank = 0;
        while (rank < sv.size() && sv(rank) > kRankTol * smax)
            ++rank;
        if (rank < required_rank) {
            const Matrix direction = unpack_hermitian(svd.matrixU().col(rank), d);
            throw RankDeficiencyError("gibbs_embedding: Jacobian rank " + std::to_string(rank) + " < " +
                                      std::to_string(required_rank) +
                                      "; the exponential family cannot move D along " +
                                      format_matrix(direction));
        }

        RealVector step = RealVector::Zero(n_par);
        const RealVector ur = svd.matrixU().leftCols(rank).transpose() * r;
        for (Index k = 0; k < rank; ++k)
            step -= (ur(k) / sv(k)) * svd.matrixV().col(k);

        double scale = 1.0;
        bool improved = false;
        for (int half = 0; half < 40; ++half, scale *= 0.5) {
            const RealVector trial = theta + scale * step;
            const RealVector rt = residual(trial);
            const double tn = entry_norm(rt);
            if (std::isfinite(tn) && tn < rnorm) {
                theta = trial;
                r = rt;
                rnorm = tn;
                improved = true;
                break;
            }
        }
        if (!improved)
            throw ConvergenceError("gibbs_embedding: line search stalled at residual " +
                                   std::to_string(rnorm) + "; D is likely on the boundary");
    }

    out.alpha = unpack_hermitian(theta, d);
    gibbs_state(v, out.alpha, &out.logZ);
    out.residual = rnorm;
    return out;
}

Complex determinant(const Matrix& m)
{
    require_square(m, "determinant");
    return m.partialPivLu().determinant();
}

Complex permanent(const Matrix& m)
{
    require_square(m, "permanent");
    const Index n = m.rows();
    if (n > 20)
        throw DimensionError("permanent: matrix too large for Ryser's formula");
    Complex total = 0.0;
    const unsigned long subsets = 1ul << n;
    for (unsigned long s = 1; s < subsets; ++s) {
        Complex prod = 1.0;
        for (Index i = 0; i < n; ++i) {
            Complex row = 0.0;
            for (Index j = 0; j < n; ++j)
                if (s & (1ul << j))
                    row += m(i, j);
            prod *= row;
        }
        const int bits = __builtin_popcountl(s);
        total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return total;
}

Complex quasifree_expectation(const Symbol& sym, std::span<const int> creators,
                              std::span<const int> annihilators)
{
    if (creators.size() != annihilators.size())
        throw DimensionError("quasifree_expectation: unequal numbers of creators and annihilators");
    const std::size_t k = creators.size();
    if (k > 8)
        throw DimensionError("quasifree_expectation: order above 8");
    if (k == 0)
        return 1.0;
    const Index n = sym.modes();
    auto check = [n](int idx) {
        if (idx < 0 || idx >= n)
            throw DimensionError("quasifree_expectation: mode index " + std::to_string(idx) + " out of range");
    };
    Matrix m(static_cast<Index>(k), static_cast<Index>(k));
    for (std::size_t a = 0; a < k; ++a) {
        const int j = annihilators[k - 1 - a];
        check(j);
        for (std::size_t b = 0; b < k; ++b) {
            const int i = creators[b];
            check(i);
            m(static_cast<Index>(a), static_cast<Index>(b)) = sym.Q(j, i);
        }
    }
    return sym.statistics == Statistics::Fermi ? determinant(m) : permanent(m);
}

} // namespace gensub
