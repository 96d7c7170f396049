#include "gensub/fock.hpp"

#include <vector>

namespace gensub {

namespace {

using Triplet = Eigen::Triplet<Complex>;

Index pow_index(Index base, int n)
{
    Index out = 1;
    for (int i = 0; i < n; ++i)
        out *= base;
    return out;
}

Index stride_of(const FockRep& rep, int k)
{
    return pow_index(rep.cutoff + 1, rep.modes - 1 - k);
}

} // namespace

SparseMatrix FockRep::number() const
{
    SparseMatrix n(dim, dim);
    for (const SparseMatrix& op : ops)
        n += SparseMatrix(op.adjoint()) * op;
    return n;
}

Vector FockRep::vacuum() const
{
    return Vector::Unit(dim, 0);
}

int FockRep::occupation(Index index, int k) const
{
    return static_cast<int>((index / stride_of(*this, k)) % (cutoff + 1));
}

FockRep fermion_ops(int n)
{
    if (n < 1 || n > 10)
        throw DimensionError("fermion_ops: need 1 <= n <= 10 modes, got " + std::to_string(n));
    FockRep rep;
    rep.statistics = Statistics::Fermi;
    rep.modes = n;
    rep.cutoff = 1;
    rep.dim = pow_index(2, n);
    for (int k = 0; k < n; ++k) {
        std::vector<Triplet> entries;
        const Index stride = stride_of(rep, k);
        for (Index s = 0; s < rep.dim; ++s) {
            if (rep.occupation(s, k) != 1)
                continue;
            int left = 0;
            for (int p = 0; p < k; ++p)
                left += rep.occupation(s, p);
            entries.emplace_back(s - stride, s, left % 2 == 0 ? 1.0 : -1.0);
        }
        SparseMatrix a(rep.dim, rep.dim);
        a.setFromTriplets(entries.begin(), entries.end());
        rep.ops.push_back(std::move(a));
    }
    return rep;
}

FockRep boson_ops(int n, int cutoff)
{
    if (n < 1 || cutoff < 1)
        throw DimensionError("boson_ops: need n >= 1 modes and cutoff >= 1");
    Index total = 1;
    for (int i = 0; i < n; ++i) {
        total *= cutoff + 1;
        if (total > 4096)
            throw DimensionError("boson_ops: (cutoff + 1)^n exceeds 4096");
    }
    FockRep rep;
    rep.statistics = Statistics::Bose;
    rep.modes = n;
    rep.cutoff = cutoff;
    rep.dim = total;
    for (int k = 0; k < n; ++k) {
        std::vector<Triplet> entries;
        const Index stride = stride_of(rep, k);
        for (Index s = 0; s < rep.dim; ++s) {
            const int m = rep.occupation(s, k);
            if (m > 0)
                entries.emplace_back(s - stride, s, std::sqrt(static_cast<double>(m)));
        }
        SparseMatrix a(rep.dim, rep.dim);
        a.setFromTriplets(entries.begin(), entries.end());
        rep.ops.push_back(std::move(a));
    }
    return rep;
}

Matrix additive_observable(const FockRep& rep, const Matrix& b, double tol)
{
    if (b.rows() != rep.modes || b.cols() != rep.modes)
        throw DimensionError("additive_observable: B must be modes x modes");
    if (!is_hermitian(b, tol))
        throw ValidationError("additive_observable: B is not Hermitian");
    SparseMatrix out(rep.dim, rep.dim);
    for (int k = 0; k < rep.modes; ++k)
        for (int l = 0; l < rep.modes; ++l)
            if (b(k, l) != Complex(0.0))
                out += b(k, l) * (rep.adag(k) * rep.a(l));
    return Matrix(out);
}

Symbol symbol_of(const FockRep& rep, const Matrix& rho, double tol)
{
    if (rho.rows() != rep.dim || rho.cols() != rep.dim)
        throw DimensionError("symbol_of: state does not match the Fock space");
    validate_density(rho, tol, "symbol_of state");
    Symbol q{Matrix(rep.modes, rep.modes), rep.statistics};
    for (int k = 0; k < rep.modes; ++k)
        for (int l = 0; l < rep.modes; ++l) {
            const SparseMatrix op = rep.adag(l) * rep.a(k);
            Complex tr = 0.0;
            for (Index c = 0; c < op.outerSize(); ++c)
                for (SparseMatrix::InnerIterator it(op, c); it; ++it)
                    tr += rho(it.col(), it.row()) * it.value();
            q.Q(k, l) = tr;
        }
    return q;
}

LindbladModel quasifree_lindblad_model(const FockRep& rep, const QuasiFreeModel& model, double tol)
{
    if (model.modes() != rep.modes)
        throw DimensionError("quasifree_lindblad_model: model and Fock space have different mode counts");
    if (model.statistics != rep.statistics)
        throw ValidationError("quasifree_lindblad_model: statistics differ");
    model.validate(tol);
    LindbladModel out;
    SparseMatrix h(rep.dim, rep.dim);
    for (int k = 0; k < rep.modes; ++k)
        h += model.eps(k) * (rep.adag(k) * rep.a(k));
    out.H = Matrix(h);

    const Matrix sg = psd_sqrt(model.gamma);
    const Matrix sk = psd_sqrt(model.kappa);
    for (int m = 0; m < rep.modes; ++m) {
        SparseMatrix decay(rep.dim, rep.dim);
        SparseMatrix production(rep.dim, rep.dim);
        for (int l = 0; l < rep.modes; ++l) {
            if (sg(m, l) != Complex(0.0))
                decay += sg(m, l) * rep.a(l);
            if (sk(l, m) != Complex(0.0))
                production += sk(l, m) * rep.adag(l);
        }
        if (decay.nonZeros() > 0)
            out.jumps.emplace_back(decay);
        if (production.nonZeros() > 0)
            out.jumps.emplace_back(production);
    }
    return out;
}

Matrix quasifree_dissipator(const FockRep& rep, const QuasiFreeModel& model, const Matrix& rho)
{
    if (model.modes() != rep.modes || rho.rows() != rep.dim)
        throw DimensionError("quasifree_dissipator: shapes do not match");
    std::vector<Matrix> a, ad;
    for (int k = 0; k < rep.modes; ++k) {
        a.emplace_back(rep.a(k));
        ad.emplace_back(rep.adag(k));
    }
    Matrix out = Matrix::Zero(rep.dim, rep.dim);
    for (int k = 0; k < rep.modes; ++k)
        for (int l = 0; l < rep.modes; ++l) {
            const auto ks = static_cast<std::size_t>(k);
            const auto ls = static_cast<std::size_t>(l);
            const Complex g = model.gamma(k, l);
            const Complex c = model.kappa(k, l);
            if (g != Complex(0.0))
                out += g * (a[ls] * rho * ad[ks] - 0.5 * anticommutator(Matrix(ad[ks] * a[ls]), rho));
            if (c != Complex(0.0))
                out += c * (ad[ks] * rho * a[ls] - 0.5 * anticommutator(Matrix(a[ls] * ad[ks]), rho));
        }
    return out;
}

Matrix quasifree_state(const FockRep& rep, const Symbol& q)
{
    if (q.modes() != rep.modes)
        throw DimensionError("quasifree_state: symbol does not match the Fock space");
    if (q.statistics != rep.statistics)
        throw ValidationError("quasifree_state: statistics differ");
    q.validate();
    const Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(q.Q));
    const Matrix& u = es.eigenvectors();
    Matrix rho = Matrix::Identity(rep.dim, rep.dim);
    if (rep.statistics == Statistics::Fermi) {
        for (int m = 0; m < rep.modes; ++m) {
            const double occ = std::clamp(es.eigenvalues()(m), 0.0, 1.0);
            const Vector um = u.col(m);
            const Matrix nm = additive_observable(rep, um * um.adjoint(), 1e-8);
            const Matrix id = Matrix::Identity(rep.dim, rep.dim);
            rho = rho * (occ * nm + (1.0 - occ) * (id - nm));
        }
    } else {
        // exp(-b) with b = sum_m beta_m c*_m c_m, beta = log(1 + 1/q).  b conserves
        // the particle number; sectors with at most `cutoff` particles are exact.
        RealVector beta(rep.modes);
        for (int m = 0; m < rep.modes; ++m) {
            const double occ = es.eigenvalues()(m);
            beta(m) = occ > 1e-26 ? std::log1p(1.0 / occ) : 60.0;
        }
        const Matrix b = additive_observable(rep, u * beta.cast<Complex>().asDiagonal() * u.adjoint(), 1e-8);
        const Eigen::SelfAdjointEigenSolver<Matrix> bs(hermitian_part(b));
        const RealVector w = (-(bs.eigenvalues().array() - bs.eigenvalues()(0))).exp();
        rho = bs.eigenvectors() * w.cast<Complex>().asDiagonal() * bs.eigenvectors().adjoint();
    }
    rho = hermitian_part(rho);
    return rho / rho.trace();
}

double top_occupation_weight(const FockRep& rep, const Matrix& rho)
{
    if (rho.rows() != rep.dim)
        throw DimensionError("top_occupation_weight: state does not match the Fock space");
    double w = 0.0;
    for (Index s = 0; s < rep.dim; ++s)
        for (int k = 0; k < rep.modes; ++k)
            if (rep.occupation(s, k) == rep.cutoff) {
                w += rho(s, s).real();
                break;
            }
    return rep.statistics == Statistics::Fermi ? 0.0 : w;
}

} // namespace gensub
