#include "gensub/entanglement.hpp"

#include "gensub/fock.hpp"

namespace gensub {

void ComposedCorrelation::validate(double tol) const
{
    if (D.rows() != shape.dim() || D.cols() != shape.dim())
        throw DimensionError("composed correlation: matrix does not match shape " +
                             std::to_string(shape.dimA) + "x" + std::to_string(shape.dimB));
    CorrelationMatrix{D, unity}.validate(tol);
}

ComposedCorrelation composed_pullback(const Partition& v, const Partition& w, const Matrix& omega, double tol)
{
    const Partition vw = compose(v, w, false);
    const CorrelationMatrix c = pullback(vw, omega, tol);
    return {c.D, {v.size(), w.size()}, c.unity};
}

void GMatrix::validate(double tol) const
{
    const double norm2 = gamma.squaredNorm();
    if (std::abs(norm2 - 1.0) > tol)
        throw ValidationError("G matrix: tr G G* = " + std::to_string(norm2) + ", expected 1");
}

GMatrix random_gmatrix(Rng& rng)
{
    const Vector v = random_state_vector(4, rng);
    GMatrix g;
    g.gamma << v(0), v(1), v(2), v(3);
    return g;
}

WitnessReport ppt_test(const ComposedCorrelation& d, double tol)
{
    if (d.D.rows() != d.shape.dim() || d.D.cols() != d.shape.dim())
        throw DimensionError("ppt_test: correlation matrix does not match its shape");
    WitnessReport r;
    r.spectrum = hermitian_eigenvalues(partial_transpose(d.D, d.shape, Factor::Second));
    r.minEig = r.spectrum(0);
    r.entangled = r.minEig < -tol;
    return r;
}

ComposedCorrelation two_boson_correlation(const GMatrix& g, double tol)
{
    g.validate(tol);
    Vector flat(4);
    flat << g.gamma(0, 0), g.gamma(0, 1), g.gamma(1, 0), g.gamma(1, 1);
    return {flat * flat.adjoint(), {2, 2}, true};
}

std::array<double, 4> two_boson_pt_spectrum(const GMatrix& g)
{
    const double det = g.det_abs();
    const double s = std::sqrt(std::max(0.0, 1.0 - 4.0 * det * det));
    return {det, -det, 0.5 * (1.0 + s), 0.5 * (1.0 - s)};
}

ComposedCorrelation two_boson_correlation_fock(const GMatrix& g)
{
    g.validate();
    const FockRep rep = boson_ops(4, 2);
    auto a = [&rep](int k) { return rep.a(k); };
    auto b = [&rep](int k) { return rep.a(2 + k); };

    Vector psi = Vector::Zero(rep.dim);
    const Vector vac = rep.vacuum();
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            psi += g.gamma(k, l) * (SparseMatrix(b(k).adjoint()) * (SparseMatrix(a(l).adjoint()) * vac));

    ComposedCorrelation out{Matrix(4, 4), {2, 2}, true};
    for (int k = 0; k < 2; ++k)
        for (int al = 0; al < 2; ++al) {
            const Vector right = a(al) * (b(k) * psi);
            for (int l = 0; l < 2; ++l)
                for (int be = 0; be < 2; ++be) {
                    const Vector left = a(be) * (b(l) * psi);
                    out.D(k * 2 + al, l * 2 + be) = left.dot(right);
                }
        }
    return out;
}

ComposedCorrelation temporal_correlation(const Partition& v, const Matrix& omega, const Matrix& lambda,
                                         bool require_unity, double tol)
{
    const Index n = v.dim();
    const Index d = v.size();
    if (omega.rows() != n || omega.cols() != n)
        throw DimensionError("temporal_correlation: state does not match the partition");
    if (lambda.rows() != n * n || lambda.cols() != n * n)
        throw DimensionError("temporal_correlation: superoperator does not match the partition");
    validate_density(omega, tol, "temporal_correlation state");
    if (require_unity) {
        if (!is_partition_of_unity(v, tol))
            throw ValidationError("temporal_correlation: partition does not sum to the identity");
        const Vector one = Eigen::Map<const Vector>(Matrix(Matrix::Identity(n, n)).data(), n * n);
        if (max_abs(lambda * one - one) > tol)
            throw ValidationError("temporal_correlation: map is not unital");
    }

    std::vector<Matrix> evolved(static_cast<std::size_t>(d * d));
    for (Index l = 0; l < d; ++l)
        for (Index lp = 0; lp < d; ++lp) {
            const Matrix x = v.product(l, lp);
            const Vector img = lambda * Eigen::Map<const Vector>(x.data(), n * n);
            evolved[static_cast<std::size_t>(l * d + lp)] = Eigen::Map<const Matrix>(img.data(), n, n);
        }

    ComposedCorrelation out{Matrix(d * d, d * d), {d, d}, require_unity};
    for (Index kp = 0; kp < d; ++kp) {
        const Matrix vo = v[kp] * omega;
        for (Index k = 0; k < d; ++k) {
            // tr(omega v*_k Y v_k') = tr((v_k' omega v*_k) Y)
            const Matrix sandwich = vo * v[k].adjoint();
            for (Index l = 0; l < d; ++l)
                for (Index lp = 0; lp < d; ++lp)
                    out.D(k * d + l, kp * d + lp) =
                        sandwich.transpose().cwiseProduct(evolved[static_cast<std::size_t>(l * d + lp)]).sum();
        }
    }
    return out;
}

PhaseSpaceModel classical_representation_single(const Matrix& d, double tol)
{
    require_square(d, "classical_representation_single");
    if (!is_hermitian(d, tol))
        throw ValidationError("classical_representation_single: D is not Hermitian");
    const Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(d));
    if (es.eigenvalues()(0) < -tol * tol_scale(d))
        throw ValidationError("classical_representation_single: D has negative eigenvalue " +
                              std::to_string(es.eigenvalues()(0)));
    const double tr = d.trace().real();
    if (!(tr > 0.0))
        throw ValidationError("classical_representation_single: D has zero trace");
    PhaseSpaceModel model;
    const double cutoff = tol * tol_scale(d);
    for (Index i = 0; i < d.rows(); ++i) {
        const double lambda = es.eigenvalues()(i);
        if (lambda <= cutoff)
            continue;
        model.points.push_back("psi" + std::to_string(model.values.size()));
        model.weights.push_back(lambda / tr);
        model.values.push_back(std::sqrt(tr) * es.eigenvectors().col(i));
    }
    double total = 0.0;
    for (double w : model.weights)
        total += w;
    for (double& w : model.weights)
        w /= total;
    return model;
}

ComposedCorrelation random_separable(Index dim_a, Index dim_b, int terms, Rng& rng)
{
    if (terms < 1)
        throw ValidationError("random_separable: need at least one term");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> lambda(static_cast<std::size_t>(terms));
    double total = 0.0;
    for (double& l : lambda) {
        l = -std::log(1.0 - unif(rng));
        total += l;
    }
    ComposedCorrelation out{Matrix::Zero(dim_a * dim_b, dim_a * dim_b), {dim_a, dim_b}, true};
    for (double l : lambda)
        out.D += (l / total) * kron(random_pure_density(dim_a, rng), random_pure_density(dim_b, rng));
    return out;
}

} // namespace gensub
