#ifndef GENSUB_DYNAMICS_HPP
#define GENSUB_DYNAMICS_HPP

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "gensub/embeddings.hpp"
#include "gensub/partitions.hpp"

namespace gensub {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// d rho/dt = -i[H, rho] + 1/2 sum_a ([L_a, rho L_a*] + [L_a rho, L_a*]).
struct LindbladModel {
    Matrix H;
    std::vector<Matrix> jumps;

    Index dim() const noexcept { return H.rows(); }
    void validate(double tol = kDefaultTol) const;
};

/// Quasi-free generator with h = sum_k eps_k |k><k|, decay matrix gamma and
/// production matrix kappa.
struct QuasiFreeModel {
    RealVector eps;
    Matrix gamma;
    Matrix kappa;
    Statistics statistics = Statistics::Fermi;

    Index modes() const noexcept { return eps.size(); }
    Matrix h() const { return eps.cast<Complex>().asDiagonal(); }

    /// Throws on shape errors and on non-Hermitian or non-PSD gamma, kappa.
    /// For bosons returns a warning when gamma - kappa is not positive
    /// definite (no stationary state); the empty string otherwise.
    std::string validate(double tol = 1e-10) const;
};

/// Classical rates a_jk >= 0 for the jump k -> j, zero diagonal.
struct PauliModel {
    RealMatrix rates;

    Index levels() const noexcept { return rates.rows(); }
    void validate(double tol = 0.0) const;
};

/// Hermitian basis X_m closed under commutation, [X_m, X_n] = sum_k c_mnk X_k,
/// with H = sum h_m X_m and self-adjoint jumps L_a = sum l_am X_m.
class LieAlgebraModel {
public:
    /// Computes the structure constants by least squares and rejects bases
    /// that are not Hermitian, not independent, or not closed (residual
    /// above `tol`).
    LieAlgebraModel(std::vector<Matrix> basis, RealVector h_coeffs,
                    std::vector<RealVector> l_coeffs, double tol = 1e-10);

    Index size() const noexcept { return static_cast<Index>(basis_.size()); }
    const std::vector<Matrix>& basis() const noexcept { return basis_; }
    const RealVector& h_coeffs() const noexcept { return h_; }
    const std::vector<RealVector>& l_coeffs() const noexcept { return l_; }

    Complex c(Index m, Index n, Index k) const
    {
        return c_[static_cast<std::size_t>((m * size() + n) * size() + k)];
    }
    /// Largest closure residual seen while fitting c.
    double closure_residual() const noexcept { return closure_residual_; }

    Matrix hamiltonian() const;
    std::vector<Matrix> jumps() const;
    LindbladModel lindblad() const;

private:
    std::vector<Matrix> basis_;
    RealVector h_;
    std::vector<RealVector> l_;
    std::vector<Complex> c_;
    double closure_residual_ = 0.0;
};

/// Coefficients a(mn; kl) of d/dt (X_m X_n) = sum_kl a(mn; kl) X_k X_l.
struct LieTensor {
    Index b = 0;
    std::vector<Complex> a;
    /// Max entry of the matrix-level mismatch over all basis products.
    double verification_residual = 0.0;

    Complex operator()(Index m, Index n, Index k, Index l) const
    {
        return a[static_cast<std::size_t>(((m * b + n) * b + k) * b + l)];
    }
    Complex& operator()(Index m, Index n, Index k, Index l)
    {
        return a[static_cast<std::size_t>(((m * b + n) * b + k) * b + l)];
    }
};

Matrix lindblad_rhs(const LindbladModel& model, const Matrix& rho);

/// The Lindblad generator prepared for repeated evaluation:
/// K rho + rho K* + sum L rho L* with K = -iH - 1/2 sum L* L summed once and
/// the jumps stored sparse.  Agrees with lindblad_rhs on every operator.
class LindbladGenerator {
public:
    explicit LindbladGenerator(const LindbladModel& model);

    Matrix operator()(const Matrix& rho) const;

private:
    Matrix k_;
    std::vector<SparseMatrix> jumps_;
};

/// Adjoint generator i[H, X] + sum (L* X L - 1/2 {L* L, X}).
Matrix lindblad_adjoint_rhs(const LindbladModel& model, const Matrix& x);

/// (dp/dt)_j = sum_k (a_jk p_k - a_kj p_j).  Rejects entries below -1e-9.
RealVector pauli_rhs(const PauliModel& model, const RealVector& p);

/// dQ/dt = -i[h, Q] - 1/2 {gamma +/- kappa, Q} + kappa, upper sign for fermions.
Matrix one_particle_rhs(const QuasiFreeModel& model, const Matrix& q);
Matrix one_particle_rhs(const QuasiFreeModel& model, const Symbol& q);

/// Expansion of d/dt (X_m X_n) over the formal products X_k X_l, checked
/// against the matrix-level bracket for every pair (m, n).  Throws
/// ConsistencyError when the check exceeds `tol`.
LieTensor lie_coefficients(const LieAlgebraModel& model, double tol = 1e-9);

/// dD_nm/dt = sum_kl a(mn; kl) D_lk.
Matrix lie_corr_rhs(const LieTensor& a, const Matrix& d);

/// tr_2((1 (x) D) h2).
Matrix hartree_mean_field(const Matrix& h2, const Matrix& d);

/// dD/dt = -i[h1 + tr_2((1 (x) D) h2), D].  h2 must be invariant under the
/// factor swap.
Matrix hartree_rhs(const Matrix& h1, const Matrix& h2, const Matrix& d);

/// sum_i h1_i + (1/N) sum_{i<j} h2_ij on (C^d)^{(x)N}.
Matrix meanfield_hamiltonian(const Matrix& h1, const Matrix& h2, int n_particles);

/// Swap operator F(x (x) y) = y (x) x on C^d (x) C^d.
Matrix swap_operator(Index d);

/// Column-stacked superoperator: vec(Lambda(X)) = S vec(X), vec index a + b n.
Matrix superoperator_apply(const Matrix& s, const Matrix& x);

/// Lambda_t in the Heisenberg picture, integrated on the matrix-unit basis.
Matrix heisenberg_map(const LindbladModel& model, double t, double dt);

/// Choi matrix sum_ab E_ab (x) Lambda(E_ab).
Matrix choi_matrix(const Matrix& s, Index n);
bool is_completely_positive(const Matrix& s, Index n, double tol = 1e-8);

namespace detail {

inline bool all_finite(double x) { return std::isfinite(x); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m)
{
    return m.allFinite();
}

} // namespace detail

/// Fixed-step classic Runge-Kutta for an autonomous rhs.  The interval is
/// split into ceil(t / dt) equal steps; `observer(time, state)` is called at
/// the start and after every step.  Throws DivergenceError on non-finite
/// values.
template <typename State, typename Rhs, typename Observer>
State integrate(Rhs&& rhs, State state, double t, double dt, Observer&& observer)
{
    if (!(dt > 0.0) || !(t >= 0.0))
        throw ValidationError("integrate: need dt > 0 and t >= 0");
    const long steps = t == 0.0 ? 0 : static_cast<long>(std::ceil(t / dt - 1e-9));
    const double h = steps == 0 ? 0.0 : t / static_cast<double>(steps);
    observer(0.0, static_cast<const State&>(state));
    for (long s = 0; s < steps; ++s) {
        const State k1 = rhs(state);
        const State k2 = rhs(State(state + (h / 2.0) * k1));
        const State k3 = rhs(State(state + (h / 2.0) * k2));
        const State k4 = rhs(State(state + h * k3));
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double now = static_cast<double>(s + 1) * h;
        if (!detail::all_finite(state))
            throw DivergenceError("integrate: non-finite state at t = " + std::to_string(now), now);
        observer(now, static_cast<const State&>(state));
    }
    return state;
}

template <typename State, typename Rhs>
State integrate(Rhs&& rhs, State state, double t, double dt)
{
    return integrate(std::forward<Rhs>(rhs), std::move(state), t, dt, [](double, const State&) {});
}

/// rho(t) under lindblad_rhs.
Matrix evolve_lindblad(const LindbladModel& model, const Matrix& rho, double t, double dt);

using PullbackFn = std::function<Matrix(const Matrix&)>;
using EmbedFn = std::function<Matrix(const Matrix&)>;

/// D(t) = Phi*(alpha_t(Psi(D0))).  Throws ConsistencyError unless
/// pullback(embed(D0)) = D0 within `tol`.
Matrix reduced_dynamics(const PullbackFn& pullback_fn, const EmbedFn& embed, const LindbladModel& model,
                        const Matrix& d0, double t, double dt, double tol = 1e-10);

CorrelationMatrix reduced_dynamics(const Partition& v, const EmbedFn& embed, const LindbladModel& model,
                                   const CorrelationMatrix& d0, double t, double dt, double tol = 1e-10);

} // namespace gensub

#endif // GENSUB_DYNAMICS_HPP
