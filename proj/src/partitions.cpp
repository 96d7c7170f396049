#include "gensub/partitions.hpp"

#include <numeric>

namespace gensub {

namespace {

// tr(a b) without forming the product.
Complex trace_of_product(const Matrix& a, const Matrix& b)
{
    return a.transpose().cwiseProduct(b).sum();
}

Index checked_power(Index base, int n, Index cap)
{
    Index out = 1;
    for (int i = 0; i < n; ++i) {
        out *= base;
        if (out > cap)
            throw DimensionError("dimension " + std::to_string(base) + "^" + std::to_string(n) +
                                 " exceeds " + std::to_string(cap));
    }
    return out;
}

} // namespace

void CorrelationMatrix::validate(double tol) const
{
    if (D.rows() != D.cols() || D.rows() == 0)
        throw ValidationError("correlation matrix: not square");
    if (!is_hermitian(D, tol))
        throw ValidationError("correlation matrix: not Hermitian");
    const double lmin = min_eigenvalue(D);
    if (lmin < -tol * tol_scale(D))
        throw ValidationError("correlation matrix: negative eigenvalue " + std::to_string(lmin));
    if (unity && std::abs(D.trace() - 1.0) > tol * static_cast<double>(D.rows()))
        throw ValidationError("correlation matrix: partition of unity but trace " +
                              std::to_string(D.trace().real()));
}

Partition::Partition(std::vector<Matrix> elements, std::string label, double independence_tol)
    : elements_(std::move(elements)), label_(std::move(label))
{
    if (elements_.empty())
        throw ValidationError("partition: no elements");
    dim_ = elements_.front().rows();
    for (const Matrix& v : elements_) {
        require_square(v, "partition element");
        if (v.rows() != dim_)
            throw DimensionError("partition: elements of unequal dimension");
    }

    const Index d = size();
    products_.reserve(static_cast<std::size_t>(d * d));
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            products_.push_back((*this)[i].adjoint() * (*this)[j]);

    if (independence_tol <= 0.0)
        return;
    Matrix gram(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            gram(i, j) = product(i, j).trace();
    const RealVector ev = hermitian_eigenvalues(gram);
    const double largest = ev(d - 1);
    const Index rank = (ev.array() > independence_tol * largest).count();
    if (largest <= 0.0 || rank < d)
        throw ValidationError("partition: elements are linearly dependent (Gram rank " +
                              std::to_string(rank) + " < " + std::to_string(d) + ")");
}

void PhaseSpaceModel::validate(double tol) const
{
    if (values.empty() || weights.size() != values.size())
        throw ValidationError("phase-space model: need one weight per point");
    if (!points.empty() && points.size() != values.size())
        throw ValidationError("phase-space model: point labels do not match values");
    const Index d = values.front().size();
    for (const Vector& v : values)
        if (v.size() != d || d == 0)
            throw ValidationError("phase-space model: values of unequal length");
    for (double w : weights)
        if (!(w >= 0.0))
            throw ValidationError("phase-space model: negative weight");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > tol * static_cast<double>(weights.size()))
        throw ValidationError("phase-space model: weights sum to " + std::to_string(total));
}

Matrix partition_mass(const Partition& v)
{
    Matrix m = Matrix::Zero(v.dim(), v.dim());
    for (Index i = 0; i < v.size(); ++i)
        m += v.product(i, i);
    return m;
}

bool is_partition_of_unity(const Partition& v, double tol)
{
    return max_abs(partition_mass(v) - Matrix::Identity(v.dim(), v.dim())) <= tol;
}

Matrix phi_apply(const Partition& v, const Matrix& a)
{
    if (a.rows() != v.size() || a.cols() != v.size())
        throw DimensionError("phi_apply: coefficient matrix must be " + std::to_string(v.size()) +
                             "x" + std::to_string(v.size()));
    Matrix out = Matrix::Zero(v.dim(), v.dim());
    for (Index i = 0; i < v.size(); ++i)
        for (Index j = 0; j < v.size(); ++j)
            if (a(i, j) != Complex(0.0))
                out += a(i, j) * v.product(i, j);
    return out;
}

CorrelationMatrix pullback(const Partition& v, const Matrix& omega, double tol)
{
    if (omega.rows() != v.dim() || omega.cols() != v.dim())
        throw DimensionError("pullback: state dimension does not match partition");
    validate_density(omega, tol, "pullback state");
    const Index d = v.size();
    CorrelationMatrix out{Matrix(d, d), is_partition_of_unity(v, tol)};
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            out.D(i, j) = trace_of_product(omega, v.product(j, i));
    return out;
}

Partition compose(const Partition& v, const Partition& w, bool require_independent)
{
    if (v.dim() != w.dim())
        throw DimensionError("compose: partitions act on different spaces");
    std::vector<Matrix> elements;
    elements.reserve(static_cast<std::size_t>(v.size() * w.size()));
    for (Index a = 0; a < v.size(); ++a)
        for (Index k = 0; k < w.size(); ++k)
            elements.push_back(v[a] * w[k]);
    return Partition(std::move(elements), v.label() + "*" + w.label(),
                     require_independent ? 1e-8 : 0.0);
}

CorrelationMatrix classical_correlation(const PhaseSpaceModel& model, double tol)
{
    model.validate(tol);
    const Index d = model.size();
    CorrelationMatrix out{Matrix::Zero(d, d), true};
    for (std::size_t x = 0; x < model.values.size(); ++x) {
        const Vector& vx = model.values[x];
        out.D += model.weights[x] * (vx * vx.adjoint());
        if (std::abs(vx.squaredNorm() - 1.0) > tol)
            out.unity = false;
    }
    return out;
}

Partition standard_partition(const StandardPartitionKind& kind, double tol)
{
    if (const auto* os = std::get_if<OpenSystem>(&kind)) {
        if (os->dimS < 1 || os->dimE < 1 || os->phi.size() != os->dimS)
            throw DimensionError("open_system: phi must have length dimS");
        if (std::abs(os->phi.norm() - 1.0) > tol)
            throw ValidationError("open_system: phi is not normalized (norm " +
                                  std::to_string(os->phi.norm()) + ")");
        const Matrix idE = Matrix::Identity(os->dimE, os->dimE);
        std::vector<Matrix> elements;
        for (Index j = 0; j < os->dimS; ++j) {
            const Matrix ket_bra = os->phi * Vector::Unit(os->dimS, j).adjoint();
            elements.push_back(kron(ket_bra, idE));
        }
        return Partition(std::move(elements), "open_system");
    }

    const auto& cg = std::get<CoarseGrain>(kind);
    if (cg.projectors.empty() || cg.dimE < 1)
        throw ValidationError("coarse_grain: no projectors");
    const Index n = cg.projectors.front().rows();
    Matrix total = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < cg.projectors.size(); ++i) {
        const Matrix& p = cg.projectors[i];
        if (p.rows() != n || p.cols() != n)
            throw DimensionError("coarse_grain: projectors of unequal dimension");
        if (!is_hermitian(p, tol) || max_abs(p * p - p) > tol)
            throw ValidationError("coarse_grain: element " + std::to_string(i) + " is not a projector");
        for (std::size_t j = 0; j < i; ++j)
            if (max_abs(p * cg.projectors[j]) > tol)
                throw ValidationError("coarse_grain: projectors " + std::to_string(j) + " and " +
                                      std::to_string(i) + " are not orthogonal");
        total += p;
    }
    if (max_abs(total - Matrix::Identity(n, n)) > tol)
        throw ValidationError("coarse_grain: projectors do not sum to the identity");
    const Matrix idE = Matrix::Identity(cg.dimE, cg.dimE);
    std::vector<Matrix> elements;
    for (const Matrix& p : cg.projectors)
        elements.push_back(kron(p, idE));
    return Partition(std::move(elements), "coarse_grain");
}

Matrix meanfield_phi(const Matrix& a, int n_particles)
{
    require_square(a, "meanfield_phi");
    const Index d = a.rows();
    const Index total = checked_power(d, n_particles, 4096);
    Matrix out = Matrix::Zero(total, total);
    for (int i = 0; i < n_particles; ++i) {
        const Index left = checked_power(d, i, 4096);
        const Index right = checked_power(d, n_particles - 1 - i, 4096);
        out += kron(kron(Matrix::Identity(left, left), a), Matrix::Identity(right, right));
    }
    return out / static_cast<double>(n_particles);
}

Matrix meanfield_pullback(const Matrix& omega, Index one_particle_dim, int n_particles, double tol)
{
    const Index total = checked_power(one_particle_dim, n_particles, 4096);
    if (omega.rows() != total)
        throw DimensionError("meanfield_pullback: state dimension mismatch");
    validate_density(omega, tol, "meanfield_pullback state");
    Matrix out = Matrix::Zero(one_particle_dim, one_particle_dim);
    for (int i = 0; i < n_particles; ++i) {
        const Index left = checked_power(one_particle_dim, i, 4096);
        const Index right = checked_power(one_particle_dim, n_particles - 1 - i, 4096);
        const Matrix first = partial_trace(omega, {left * one_particle_dim, right}, Factor::Second);
        out += partial_trace(first, {left, one_particle_dim}, Factor::First);
    }
    return out / static_cast<double>(n_particles);
}

} // namespace gensub
