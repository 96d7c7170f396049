#include "gensub/dynamics.hpp"

namespace gensub {

namespace {

Index checked_total(Index d, int n)
{
    Index total = 1;
    for (int i = 0; i < n; ++i) {
        total *= d;
        if (total > 4096)
            throw DimensionError("dimension " + std::to_string(d) + "^" + std::to_string(n) + " exceeds 4096");
    }
    return total;
}

// Digit of `index` at tensor position `pos` (position 0 is the leftmost factor).
Index digit(Index index, Index d, int n, int pos)
{
    for (int p = n - 1; p > pos; --p)
        index /= d;
    return index % d;
}

Index with_digit(Index index, Index d, int n, int pos, Index value)
{
    Index stride = 1;
    for (int p = n - 1; p > pos; --p)
        stride *= d;
    return index + (value - (index / stride) % d) * stride;
}

} // namespace

void LindbladModel::validate(double tol) const
{
    require_square(H, "Lindblad H");
    if (!is_hermitian(H, tol))
        throw ValidationError("Lindblad H is not Hermitian");
    for (std::size_t a = 0; a < jumps.size(); ++a)
        if (jumps[a].rows() != H.rows() || jumps[a].cols() != H.cols())
            throw DimensionError("Lindblad jump " + std::to_string(a) + " does not match H");
}

std::string QuasiFreeModel::validate(double tol) const
{
    const Index n = modes();
    if (n == 0)
        throw DimensionError("quasi-free model: no modes");
    if (gamma.rows() != n || gamma.cols() != n || kappa.rows() != n || kappa.cols() != n)
        throw DimensionError("quasi-free model: gamma and kappa must be " + std::to_string(n) + "x" +
                             std::to_string(n));
    for (const auto* m : {&gamma, &kappa}) {
        const char* name = m == &gamma ? "gamma" : "kappa";
        if (!is_hermitian(*m, tol))
            throw ValidationError(std::string("quasi-free model: ") + name + " is not Hermitian");
        const double lmin = min_eigenvalue(*m);
        if (lmin < -tol * tol_scale(*m))
            throw ValidationError(std::string("quasi-free model: ") + name +
                                  " has negative eigenvalue " + std::to_string(lmin));
    }
    if (statistics == Statistics::Bose) {
        const double lmin = min_eigenvalue(gamma - kappa);
        if (lmin <= tol)
            return "gamma - kappa is not positive definite (min eigenvalue " + std::to_string(lmin) +
                   "); no stationary state";
    }
    return {};
}

void PauliModel::validate(double tol) const
{
    if (rates.rows() != rates.cols() || rates.rows() == 0)
        throw DimensionError("Pauli model: rates must be a non-empty square matrix");
    for (Index j = 0; j < rates.rows(); ++j)
        for (Index k = 0; k < rates.cols(); ++k) {
            if (!(rates(j, k) >= -tol))
                throw ValidationError("Pauli model: negative rate at (" + std::to_string(j) + "," +
                                      std::to_string(k) + ")");
            if (j == k && std::abs(rates(j, k)) > tol)
                throw ValidationError("Pauli model: nonzero diagonal rate at " + std::to_string(j));
        }
}

LieAlgebraModel::LieAlgebraModel(std::vector<Matrix> basis, RealVector h_coeffs,
                                 std::vector<RealVector> l_coeffs, double tol)
    : basis_(std::move(basis)), h_(std::move(h_coeffs)), l_(std::move(l_coeffs))
{
    const Index b = size();
    if (b == 0)
        throw ValidationError("Lie model: empty basis");
    const Index n = basis_.front().rows();
    for (Index m = 0; m < b; ++m) {
        const Matrix& x = basis_[static_cast<std::size_t>(m)];
        require_square(x, "Lie basis element");
        if (x.rows() != n)
            throw DimensionError("Lie model: basis elements of unequal dimension");
        if (!is_hermitian(x, tol))
            throw ValidationError("Lie model: basis element " + std::to_string(m) + " is not Hermitian");
    }
    if (h_.size() != b)
        throw DimensionError("Lie model: hCoeffs must have one entry per basis element");
    for (const RealVector& l : l_)
        if (l.size() != b)
            throw DimensionError("Lie model: lCoeffs must have one entry per basis element");

    Matrix flat(n * n, b);
    for (Index m = 0; m < b; ++m)
        flat.col(m) = Eigen::Map<const Vector>(basis_[static_cast<std::size_t>(m)].data(), n * n);
    const Eigen::ColPivHouseholderQR<Matrix> qr(flat);
    if (qr.rank() < b)
        throw ValidationError("Lie model: basis elements are linearly dependent");

    c_.assign(static_cast<std::size_t>(b * b * b), Complex(0.0));
    for (Index m = 0; m < b; ++m)
        for (Index k = 0; k < b; ++k) {
            const Matrix br = commutator(basis_[static_cast<std::size_t>(m)], basis_[static_cast<std::size_t>(k)]);
            const Vector target = Eigen::Map<const Vector>(br.data(), n * n);
            const Vector coeff = qr.solve(target);
            const double res = max_abs(flat * coeff - target);
            closure_residual_ = std::max(closure_residual_, res);
            if (res > tol * tol_scale(target))
                throw ValidationError("Lie model: basis not closed, [X_" + std::to_string(m) + ", X_" +
                                      std::to_string(k) + "] leaves the span (residual " +
                                      std::to_string(res) + ")");
            for (Index p = 0; p < b; ++p)
                c_[static_cast<std::size_t>((m * b + k) * b + p)] = coeff(p);
        }
}

Matrix LieAlgebraModel::hamiltonian() const
{
    const Index n = basis_.front().rows();
    Matrix h = Matrix::Zero(n, n);
    for (Index m = 0; m < size(); ++m)
        h += h_(m) * basis_[static_cast<std::size_t>(m)];
    return h;
}

std::vector<Matrix> LieAlgebraModel::jumps() const
{
    const Index n = basis_.front().rows();
    std::vector<Matrix> out;
    for (const RealVector& l : l_) {
        Matrix j = Matrix::Zero(n, n);
        for (Index m = 0; m < size(); ++m)
            j += l(m) * basis_[static_cast<std::size_t>(m)];
        out.push_back(std::move(j));
    }
    return out;
}

LindbladModel LieAlgebraModel::lindblad() const
{
    return {hamiltonian(), jumps()};
}

Matrix lindblad_rhs(const LindbladModel& model, const Matrix& rho)
{
    if (rho.rows() != model.dim() || rho.cols() != model.dim())
        throw DimensionError("lindblad_rhs: state does not match model dimension");
    const Complex i(0.0, 1.0);
    Matrix out = -i * commutator(model.H, rho);
    for (const Matrix& l : model.jumps) {
        const Matrix ld = l.adjoint();
        const Matrix lr = l * rho;
        out += 0.5 * (commutator(l, rho * ld) + commutator(lr, ld));
    }
    return out;
}

LindbladGenerator::LindbladGenerator(const LindbladModel& model)
{
    model.validate();
    const Complex i(0.0, 1.0);
    k_ = -i * model.H;
    for (const Matrix& l : model.jumps) {
        k_ -= 0.5 * l.adjoint() * l;
        jumps_.push_back(l.sparseView());
    }
}

Matrix LindbladGenerator::operator()(const Matrix& rho) const
{
    if (rho.rows() != k_.rows() || rho.cols() != k_.rows())
        throw DimensionError("lindblad generator: state does not match model dimension");
    Matrix out = k_ * rho + rho * k_.adjoint();
    for (const SparseMatrix& l : jumps_) {
        const Matrix lr = l * rho;
        out += Matrix(l * lr.adjoint()).adjoint();
    }
    return out;
}

Matrix lindblad_adjoint_rhs(const LindbladModel& model, const Matrix& x)
{
    if (x.rows() != model.dim() || x.cols() != model.dim())
        throw DimensionError("lindblad_adjoint_rhs: operator does not match model dimension");
    const Complex i(0.0, 1.0);
    Matrix out = i * commutator(model.H, x);
    for (const Matrix& l : model.jumps) {
        const Matrix ld = l.adjoint();
        out += ld * x * l - 0.5 * anticommutator(ld * l, x);
    }
    return out;
}

RealVector pauli_rhs(const PauliModel& model, const RealVector& p)
{
    const Index n = model.levels();
    if (p.size() != n)
        throw DimensionError("pauli_rhs: probability vector does not match model");
    for (Index j = 0; j < n; ++j)
        if (p(j) < -1e-9)
            throw ValidationError("pauli_rhs: negative probability " + std::to_string(p(j)) + " at level " +
                                  std::to_string(j));
    const RealVector outflow = model.rates.colwise().sum().transpose();
    return model.rates * p - outflow.cwiseProduct(p);
}

Matrix one_particle_rhs(const QuasiFreeModel& model, const Matrix& q)
{
    const Index n = model.modes();
    if (q.rows() != n || q.cols() != n)
        throw DimensionError("one_particle_rhs: symbol does not match model modes");
    const Complex i(0.0, 1.0);
    const double sign = model.statistics == Statistics::Fermi ? 1.0 : -1.0;
    const Matrix loss = model.gamma + sign * model.kappa;
    return -i * commutator(model.h(), q) - 0.5 * anticommutator(loss, q) + model.kappa;
}

Matrix one_particle_rhs(const QuasiFreeModel& model, const Symbol& q)
{
    if (q.statistics != model.statistics)
        throw ValidationError("one_particle_rhs: symbol statistics differ from the model");
    return one_particle_rhs(model, q.Q);
}

LieTensor lie_coefficients(const LieAlgebraModel& model, double tol)
{
    const Index b = model.size();
    const Complex i(0.0, 1.0);
    LieTensor t;
    t.b = b;
    t.a.assign(static_cast<std::size_t>(b * b * b * b), Complex(0.0));

    // [H, X_m] = sum_k Hc(m, k) X_k
    Matrix hc = Matrix::Zero(b, b);
    for (Index m = 0; m < b; ++m)
        for (Index k = 0; k < b; ++k)
            for (Index p = 0; p < b; ++p)
                hc(m, k) += model.h_coeffs()(p) * model.c(p, m, k);

    for (Index m = 0; m < b; ++m)
        for (Index n = 0; n < b; ++n)
            for (Index k = 0; k < b; ++k) {
                t(m, n, k, n) += i * hc(m, k);
                t(m, n, m, k) += i * hc(n, k);
            }

    for (const RealVector& l : model.l_coeffs()) {
        // [L, X_m] = sum_k C(m, k) X_k, [L, [L, X_m]] = sum_k (C C)(m, k) X_k
        Matrix cl = Matrix::Zero(b, b);
        for (Index m = 0; m < b; ++m)
            for (Index k = 0; k < b; ++k)
                for (Index p = 0; p < b; ++p)
                    cl(m, k) += l(p) * model.c(p, m, k);
        const Matrix dbl = cl * cl;
        for (Index m = 0; m < b; ++m)
            for (Index n = 0; n < b; ++n)
                for (Index k = 0; k < b; ++k) {
                    t(m, n, k, n) -= 0.5 * dbl(m, k);
                    t(m, n, m, k) -= 0.5 * dbl(n, k);
                    for (Index q = 0; q < b; ++q)
                        t(m, n, k, q) -= cl(m, k) * cl(n, q);
                }
    }

    const LindbladModel lind = model.lindblad();
    const auto& x = model.basis();
    const Index dim = x.front().rows();
    for (Index m = 0; m < b; ++m)
        for (Index n = 0; n < b; ++n) {
            const Matrix exact = lindblad_adjoint_rhs(lind, x[static_cast<std::size_t>(m)] * x[static_cast<std::size_t>(n)]);
            Matrix expanded = Matrix::Zero(dim, dim);
            for (Index k = 0; k < b; ++k)
                for (Index q = 0; q < b; ++q)
                    if (t(m, n, k, q) != Complex(0.0))
                        expanded += t(m, n, k, q) * (x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(q)]);
            t.verification_residual = std::max(t.verification_residual, max_abs(expanded - exact));
        }
    if (t.verification_residual > tol)
        throw ConsistencyError("lie_coefficients: tensor does not reproduce d/dt(X_m X_n), residual " +
                               std::to_string(t.verification_residual));
    return t;
}

Matrix lie_corr_rhs(const LieTensor& a, const Matrix& d)
{
    const Index b = a.b;
    if (d.rows() != b || d.cols() != b)
        throw DimensionError("lie_corr_rhs: correlation matrix does not match the tensor");
    Matrix out = Matrix::Zero(b, b);
    for (Index m = 0; m < b; ++m)
        for (Index n = 0; n < b; ++n) {
            Complex s = 0.0;
            for (Index k = 0; k < b; ++k)
                for (Index l = 0; l < b; ++l)
                    s += a(m, n, k, l) * d(l, k);
            out(n, m) = s;
        }
    return out;
}

Matrix swap_operator(Index d)
{
    Matrix f = Matrix::Zero(d * d, d * d);
    for (Index x = 0; x < d; ++x)
        for (Index y = 0; y < d; ++y)
            f(y * d + x, x * d + y) = 1.0;
    return f;
}

Matrix hartree_mean_field(const Matrix& h2, const Matrix& d)
{
    require_square(d, "hartree_mean_field state");
    const Index n = d.rows();
    if (h2.rows() != n * n || h2.cols() != n * n)
        throw DimensionError("hartree_mean_field: h2 must act on the doubled space");
    Matrix out = Matrix::Zero(n, n);
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
            for (Index c = 0; c < n; ++c)
                for (Index cp = 0; cp < n; ++cp)
                    out(a, b) += d(c, cp) * h2(a * n + cp, b * n + c);
    return out;
}

Matrix hartree_rhs(const Matrix& h1, const Matrix& h2, const Matrix& d)
{
    require_square(d, "hartree_rhs state");
    const Index n = d.rows();
    if (h1.rows() != n || h1.cols() != n)
        throw DimensionError("hartree_rhs: h1 does not match the state");
    if (h2.rows() != n * n || h2.cols() != n * n)
        throw DimensionError("hartree_rhs: h2 must act on the doubled space");
    const Matrix f = swap_operator(n);
    if (max_abs(f * h2 * f - h2) > kDefaultTol * tol_scale(h2))
        throw ValidationError("hartree_rhs: h2 is not symmetric under factor exchange");
    const Complex i(0.0, 1.0);
    return -i * commutator(Matrix(h1 + hartree_mean_field(h2, d)), d);
}

Matrix meanfield_hamiltonian(const Matrix& h1, const Matrix& h2, int n_particles)
{
    require_square(h1, "meanfield_hamiltonian h1");
    const Index d = h1.rows();
    if (h2.rows() != d * d || h2.cols() != d * d)
        throw DimensionError("meanfield_hamiltonian: h2 must act on the doubled space");
    if (n_particles < 1)
        throw DimensionError("meanfield_hamiltonian: need N >= 1");
    const int n = n_particles;
    const Index total = checked_total(d, n);
    Matrix out = Matrix::Zero(total, total);
    for (Index s = 0; s < total; ++s)
        for (int i = 0; i < n; ++i) {
            const Index si = digit(s, d, n, i);
            for (Index x = 0; x < d; ++x)
                out(with_digit(s, d, n, i, x), s) += h1(x, si);
            for (int j = i + 1; j < n; ++j) {
                const Index sj = digit(s, d, n, j);
                for (Index x = 0; x < d; ++x)
                    for (Index y = 0; y < d; ++y) {
                        const Index r = with_digit(with_digit(s, d, n, i, x), d, n, j, y);
                        out(r, s) += h2(x * d + y, si * d + sj) / static_cast<double>(n);
                    }
            }
        }
    return out;
}

Matrix superoperator_apply(const Matrix& s, const Matrix& x)
{
    require_square(x, "superoperator_apply");
    const Index n = x.rows();
    if (s.rows() != n * n || s.cols() != n * n)
        throw DimensionError("superoperator_apply: superoperator does not match operator size");
    const Vector out = s * Eigen::Map<const Vector>(x.data(), n * n);
    return Eigen::Map<const Matrix>(out.data(), n, n);
}

Matrix heisenberg_map(const LindbladModel& model, double t, double dt)
{
    model.validate();
    const Index n = model.dim();
    Matrix gen(n * n, n * n);
    for (Index b = 0; b < n; ++b)
        for (Index a = 0; a < n; ++a) {
            Matrix unit = Matrix::Zero(n, n);
            unit(a, b) = 1.0;
            const Matrix img = lindblad_adjoint_rhs(model, unit);
            gen.col(a + b * n) = Eigen::Map<const Vector>(img.data(), n * n);
        }
    return integrate([&gen](const Matrix& s) { return Matrix(gen * s); },
                     Matrix(Matrix::Identity(n * n, n * n)), t, dt);
}

Matrix choi_matrix(const Matrix& s, Index n)
{
    Matrix choi = Matrix::Zero(n * n, n * n);
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) {
            Matrix unit = Matrix::Zero(n, n);
            unit(a, b) = 1.0;
            choi += kron(unit, superoperator_apply(s, unit));
        }
    return choi;
}

bool is_completely_positive(const Matrix& s, Index n, double tol)
{
    return min_eigenvalue(choi_matrix(s, n)) >= -tol;
}

Matrix evolve_lindblad(const LindbladModel& model, const Matrix& rho, double t, double dt)
{
    const LindbladGenerator generator(model);
    return integrate(generator, rho, t, dt);
}

Matrix reduced_dynamics(const PullbackFn& pullback_fn, const EmbedFn& embed, const LindbladModel& model,
                        const Matrix& d0, double t, double dt, double tol)
{
    const Matrix omega0 = embed(d0);
    const Matrix back = pullback_fn(omega0);
    const double err = back.rows() == d0.rows() && back.cols() == d0.cols() ? max_abs(back - d0) : INFINITY;
    if (!(err <= tol * tol_scale(d0)))
        throw ConsistencyError("reduced_dynamics: embedding is not a right inverse of the pull-back (error " +
                               std::to_string(err) + ")");
    if (omega0.rows() != model.dim())
        throw DimensionError("reduced_dynamics: embedded state does not match the model");
    return pullback_fn(evolve_lindblad(model, omega0, t, dt));
}

CorrelationMatrix reduced_dynamics(const Partition& v, const EmbedFn& embed, const LindbladModel& model,
                                   const CorrelationMatrix& d0, double t, double dt, double tol)
{
    const PullbackFn pb = [&v](const Matrix& omega) { return pullback(v, omega, 1e-8).D; };
    return {reduced_dynamics(pb, embed, model, d0.D, t, dt, tol), d0.unity};
}

} // namespace gensub
