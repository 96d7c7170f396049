#include "gensub/spin.hpp"

#include <limits>
#include <numbers>

namespace gensub {

SpinRep spin_generators(int two_ell)
{
    if (two_ell < 0 || two_ell + 1 > 64)
        throw ValidationError("spin_generators: 2*ell must lie in [0, 63], got " + std::to_string(two_ell));
    SpinRep rep;
    rep.two_ell = two_ell;
    const Index n = two_ell + 1;
    const double ell = 0.5 * two_ell;
    const double casimir = ell * (ell + 1.0);

    Matrix raise = Matrix::Zero(n, n);
    Matrix j3 = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        const double m = ell - static_cast<double>(i);
        j3(i, i) = m;
        if (i > 0)
            raise(i - 1, i) = std::sqrt(casimir - m * (m + 1.0));
    }
    const Matrix lower = raise.adjoint();
    rep.J[0] = (raise + lower) / 2.0;
    rep.J[1] = (raise - lower) * Complex(0.0, -0.5);
    rep.J[2] = j3;

    const double norm = two_ell == 0 ? 0.0 : 1.0 / std::sqrt(casimir);
    for (std::size_t a = 0; a < 3; ++a)
        rep.j[a] = rep.J[a] * norm;
    return rep;
}

Partition spin_partition(const SpinRep& rep)
{
    if (rep.two_ell == 0)
        throw ValidationError("spin_partition: the spin-0 generators vanish");
    return Partition({rep.j[0], rep.j[1], rep.j[2]}, "spin " + std::to_string(rep.two_ell) + "/2");
}

CorrelationMatrix spin_half_pullback(const Eigen::Vector3d& x, double tol)
{
    if (x.norm() > 1.0 + tol)
        throw ValidationError("spin_half_pullback: Bloch vector of norm " + std::to_string(x.norm()) + " > 1");
    static const Partition half = spin_partition(spin_generators(1));
    // sigma_a = sqrt(3) j_a for the spin-1/2 triple.
    Matrix rho = Matrix::Identity(2, 2);
    for (Index a = 0; a < 3; ++a)
        rho += x(a) * std::sqrt(3.0) * half[a];
    rho /= 2.0;
    return pullback(half, hermitian_part(rho), tol);
}

Eigen::Vector3d spin_half_alpha(const Matrix& d)
{
    if (d.rows() != 3 || d.cols() != 3)
        throw DimensionError("spin_half_alpha: expected a 3x3 matrix");
    return {d(1, 2).imag(), -d(0, 2).imag(), d(0, 1).imag()};
}

namespace {

std::string entry_name(Index i, Index j)
{
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

// Empty string when `d` is a density matrix, otherwise the first violation.
std::string density_violation(const Matrix& d, double tol)
{
    const double lmin = min_eigenvalue(d);
    if (lmin < -tol)
        return "negative eigenvalue " + std::to_string(lmin);
    const Complex tr = d.trace();
    if (std::abs(tr - 1.0) > tol)
        return "trace " + std::to_string(tr.real()) + " != 1";
    return {};
}

} // namespace

Membership reduced_membership(SpinCase which, const Matrix& d, double tol)
{
    if (d.rows() != 3 || d.cols() != 3)
        throw DimensionError("reduced_membership: expected a 3x3 matrix");
    if (!is_hermitian(d, tol))
        return {false, "not Hermitian"};

    switch (which) {
    case SpinCase::Half: {
        for (Index i = 0; i < 3; ++i)
            if (std::abs(d(i, i) - 1.0 / 3.0) > tol)
                return {false, "diagonal entry " + entry_name(i, i) + " = " +
                                   std::to_string(d(i, i).real()) + " != 1/3"};
        for (Index i = 0; i < 3; ++i)
            for (Index j = i + 1; j < 3; ++j) {
                if (std::abs(d(i, j).real()) > tol || std::abs(d(j, i).real()) > tol)
                    return {false, "real off-diagonal part at " + entry_name(i, j)};
                if (std::abs(d(i, j).imag() + d(j, i).imag()) > tol)
                    return {false, "imaginary part not antisymmetric at " + entry_name(i, j)};
            }
        const double radius = spin_half_alpha(d).norm();
        if (radius > 1.0 / 3.0 + tol)
            return {false, "|alpha| = " + std::to_string(radius) + " > 1/3"};
        return {true, "ok"};
    }
    case SpinCase::One: {
        if (auto why = density_violation(d, tol); !why.empty())
            return {false, why};
        const double gap = min_eigenvalue(Matrix::Identity(3, 3) / 2.0 - d);
        if (gap < -tol)
            return {false, "D exceeds 1/2: max eigenvalue " + std::to_string(0.5 - gap)};
        return {true, "ok"};
    }
    case SpinCase::Infinite: {
        if (auto why = density_violation(d, tol); !why.empty())
            return {false, why};
        for (Index i = 0; i < 3; ++i)
            for (Index j = 0; j < 3; ++j)
                if (std::abs(d(i, j).imag()) > tol)
                    return {false, "imaginary entry at " + entry_name(i, j)};
        return {true, "ok"};
    }
    }
    return {false, "unknown case"};
}

Matrix spin_one_tilde(const Matrix& d, double tol)
{
    const Membership m = reduced_membership(SpinCase::One, d, tol);
    if (!m.member)
        throw ValidationError("spin_one_tilde: not in the spin-1 reduced state space (" + m.witness + ")");
    return Matrix::Identity(3, 3) - 2.0 * d;
}

Matrix spin_one_from_tilde(const Matrix& tilde)
{
    if (tilde.rows() != 3 || tilde.cols() != 3)
        throw DimensionError("spin_one_from_tilde: expected a 3x3 matrix");
    return (Matrix::Identity(3, 3) - tilde) / 2.0;
}

bool inf_spin_phi_positive(const Matrix& a, double tol)
{
    if (a.rows() != 3 || a.cols() != 3)
        throw DimensionError("inf_spin_phi_positive: expected a 3x3 matrix");
    const Matrix s = a + a.transpose();
    if (s.imag().cwiseAbs().maxCoeff() > tol * tol_scale(s))
        return false;
    return is_psd(s, tol);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    if (n < 1)
        throw ValidationError("gauss_legendre: need at least one node");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        nodes[static_cast<std::size_t>(i)] = x;
        weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

SphereGrid sphere_quadrature(int n_theta, int n_phi)
{
    if (n_theta < 2 || n_phi < 2)
        throw ValidationError("sphere_quadrature: need n_theta, n_phi >= 2");
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    SphereGrid grid;
    grid.nodes.reserve(static_cast<std::size_t>(n_theta * n_phi));
    for (int i = 0; i < n_theta; ++i) {
        const double theta = std::acos(x[static_cast<std::size_t>(i)]);
        const double st = std::sin(theta), ct = x[static_cast<std::size_t>(i)];
        for (int k = 0; k < n_phi; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / n_phi;
            grid.nodes.emplace_back(theta, phi);
            grid.points.emplace_back(st * std::cos(phi), st * std::sin(phi), ct);
            grid.weights.push_back(w[static_cast<std::size_t>(i)] / (2.0 * n_phi));
        }
    }
    return grid;
}

std::vector<double> sphere_measure(const Eigen::Matrix3d& delta, const SphereGrid& grid)
{
    std::vector<double> expo(grid.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        expo[i] = grid.points[i].dot(delta * grid.points[i]);
        top = std::max(top, expo[i]);
    }
    double z = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        expo[i] = grid.weights[i] * std::exp(expo[i] - top);
        z += expo[i];
    }
    for (double& p : expo)
        p /= z;
    return expo;
}

Eigen::Matrix3d sphere_moments(const std::vector<double>& measure, const SphereGrid& grid)
{
    if (measure.size() != grid.size())
        throw DimensionError("sphere_moments: measure does not match grid");
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < grid.size(); ++i)
        m += measure[i] * grid.points[i] * grid.points[i].transpose();
    return m;
}

Eigen::Matrix3d sphere_moments(const Eigen::Matrix3d& delta, const SphereGrid& grid)
{
    return sphere_moments(sphere_measure(delta, grid), grid);
}

double sphere_measure_entropy(const std::vector<double>& measure, const SphereGrid& grid)
{
    if (measure.size() != grid.size())
        throw DimensionError("sphere_measure_entropy: measure does not match grid");
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (measure[i] > 0.0)
            s -= measure[i] * std::log(measure[i] / grid.weights[i]);
    return s;
}

namespace {

// Exponential family p_i ~ w_i exp(F_i . theta) on the grid nodes.
struct MomentProblem {
    RealMatrix features;   // one row per node
    RealVector target;
    const std::vector<double>* weights = nullptr;

    RealVector probabilities(const RealVector& theta) const
    {
        RealVector s = features * theta;
        const double top = s.maxCoeff();
        RealVector p(s.size());
        for (Index i = 0; i < s.size(); ++i)
            p(i) = (*weights)[static_cast<std::size_t>(i)] * std::exp(s(i) - top);
        return p / p.sum();
    }

    RealVector residual(const RealVector& p) const { return features.transpose() * p - target; }

    RealMatrix covariance(const RealVector& p) const
    {
        const RealVector mean = features.transpose() * p;
        RealMatrix centered = features.rowwise() - mean.transpose();
        return centered.transpose() * p.asDiagonal() * centered;
    }
};

// Damped Newton on E_p[F] = target; halves the step until |r| decreases.
RealVector solve_moments(const MomentProblem& prob, RealVector theta, double tol, int& iterations,
                         int max_iterations)
{
    RealVector p = prob.probabilities(theta);
    RealVector r = prob.residual(p);
    double rnorm = r.cwiseAbs().maxCoeff();
    while (rnorm > tol) {
        if (iterations >= max_iterations)
            throw ConvergenceError("maxent_sphere: no convergence after " + std::to_string(iterations) +
                                   " iterations (residual " + std::to_string(rnorm) + ")");
        ++iterations;
        const RealVector step = prob.covariance(p).ldlt().solve(-r);
        double scale = 1.0;
        bool improved = false;
        for (int half = 0; half < 40; ++half, scale *= 0.5) {
            const RealVector trial = theta + scale * step;
            const RealVector pt = prob.probabilities(trial);
            const RealVector rt = prob.residual(pt);
            const double tn = rt.cwiseAbs().maxCoeff();
            if (std::isfinite(tn) && tn < rnorm) {
                theta = trial;
                p = pt;
                r = rt;
                rnorm = tn;
                improved = true;
                break;
            }
        }
        if (!improved)
            break; // stalled at floating-point resolution
    }
    return theta;
}

std::array<Eigen::Matrix3d, 5> traceless_symmetric_basis()
{
    std::array<Eigen::Matrix3d, 5> b;
    const double r2 = std::sqrt(2.0), r6 = std::sqrt(6.0);
    b[0] = Eigen::Vector3d(1.0, -1.0, 0.0).asDiagonal();
    b[0] /= r2;
    b[1] = Eigen::Vector3d(1.0, 1.0, -2.0).asDiagonal();
    b[1] /= r6;
    for (int k = 0; k < 3; ++k) {
        const int i = k == 2 ? 1 : 0;
        const int j = k == 0 ? 1 : 2;
        b[static_cast<std::size_t>(2 + k)].setZero();
        b[static_cast<std::size_t>(2 + k)](i, j) = b[static_cast<std::size_t>(2 + k)](j, i) = 1.0 / r2;
    }
    return b;
}

} // namespace

MaxEntResult maxent_sphere(const Matrix& d_in, const SphereGrid& grid, double tol)
{
    constexpr int kMaxIterations = 200;
    constexpr double kBoundaryMargin = 1e-6;

    if (d_in.rows() != 3 || d_in.cols() != 3)
        throw DimensionError("maxent_sphere: expected a 3x3 matrix");
    if (d_in.imag().cwiseAbs().maxCoeff() > tol)
        throw ValidationError("maxent_sphere: D has imaginary entries");
    const Eigen::Matrix3d d = d_in.real();
    if ((d - d.transpose()).cwiseAbs().maxCoeff() > tol)
        throw ValidationError("maxent_sphere: D is not symmetric");
    if (std::abs(d.trace() - 1.0) > 3.0 * tol)
        throw ValidationError("maxent_sphere: trace " + std::to_string(d.trace()) + " != 1");

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (d + d.transpose()));
    const Eigen::Vector3d spec = es.eigenvalues();
    const Eigen::Matrix3d rot = es.eigenvectors();
    if (spec(0) < kBoundaryMargin)
        throw ConvergenceError("maxent_sphere: spectrum (" + std::to_string(spec(0)) + ", " +
                               std::to_string(spec(1)) + ", " + std::to_string(spec(2)) +
                               ") is on or outside the boundary of the moment body");

    const Index n = static_cast<Index>(grid.size());
    MaxEntResult result;

    // Diagonal problem in the eigenframe: Delta = R diag(u1, u2, -u1-u2) R^T.
    MomentProblem diag;
    diag.weights = &grid.weights;
    diag.features.resize(n, 2);
    for (Index i = 0; i < n; ++i) {
        const Eigen::Vector3d y = rot.transpose() * grid.points[static_cast<std::size_t>(i)];
        diag.features(i, 0) = y(0) * y(0) - y(2) * y(2);
        diag.features(i, 1) = y(1) * y(1) - y(2) * y(2);
    }
    diag.target = Eigen::Vector2d(spec(0) - spec(2), spec(1) - spec(2));
    const RealVector u =
        solve_moments(diag, RealVector::Zero(2), 0.1 * tol, result.iterations, kMaxIterations);
    const Eigen::Matrix3d delta_diag = Eigen::Vector3d(u(0), u(1), -u(0) - u(1)).asDiagonal();
    const Eigen::Matrix3d delta0 = rot * delta_diag * rot.transpose();

    // Polish on the grid in the full traceless symmetric family.
    const auto basis = traceless_symmetric_basis();
    MomentProblem full;
    full.weights = &grid.weights;
    full.features.resize(n, 5);
    full.target.resize(5);
    RealVector theta(5);
    for (std::size_t a = 0; a < 5; ++a) {
        for (Index i = 0; i < n; ++i) {
            const Eigen::Vector3d& x = grid.points[static_cast<std::size_t>(i)];
            full.features(i, static_cast<Index>(a)) = x.dot(basis[a] * x);
        }
        full.target(static_cast<Index>(a)) = (basis[a].cwiseProduct(d)).sum();
        theta(static_cast<Index>(a)) = (basis[a].cwiseProduct(delta0)).sum();
    }
    theta = solve_moments(full, theta, 0.2 * tol, result.iterations, kMaxIterations);

    result.Delta.setZero();
    for (std::size_t a = 0; a < 5; ++a)
        result.Delta += theta(static_cast<Index>(a)) * basis[a];
    result.measure = sphere_measure(result.Delta, grid);
    result.residual = (sphere_moments(result.measure, grid) - d).cwiseAbs().maxCoeff();
    if (!(result.residual <= tol))
        throw ConvergenceError("maxent_sphere: residual " + std::to_string(result.residual) +
                               " above tolerance " + std::to_string(tol));
    return result;
}

} // namespace gensub
