#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "gensub/embeddings.hpp"
#include "gensub/fock.hpp"
#include "gensub/random.hpp"
#include "gensub/spin.hpp"

using namespace gensub;

namespace {

Complex leibniz(const Matrix& m, bool permanent)
{
    const int n = static_cast<int>(m.rows());
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    Complex total = 0.0;
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                inversions += p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)] ? 1 : 0;
        Complex term = (permanent || inversions % 2 == 0) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i)
            term *= m(i, p[static_cast<std::size_t>(i)]);
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

// Density matrix with spectrum bounded away from zero.
Matrix interior_density(Index n, Rng& rng)
{
    Matrix r = random_density(n, rng);
    r = 0.7 * r + 0.3 * Matrix::Identity(n, n) / static_cast<double>(n);
    return hermitian_part(r);
}

Matrix dense(const SparseMatrix& s) { return Matrix(s); }

Complex fock_moment(const FockRep& rep, const Matrix& rho, const std::vector<int>& cr, const std::vector<int>& an)
{
    Matrix op = Matrix::Identity(rep.dim, rep.dim);
    for (int i : cr)
        op = op * dense(rep.adag(i));
    for (int j : an)
        op = op * dense(rep.a(j));
    return (rho * op).trace();
}

Symbol random_symbol(Index n, Statistics s, double scale, Rng& rng)
{
    Matrix q = random_psd(n, rng);
    q = hermitian_part(Matrix(q * (scale / hermitian_eigenvalues(q).maxCoeff())));
    return {q, s};
}

} // namespace

TEST_CASE("product and mean-field embeddings")
{
    Rng rng = make_rng(41);
    for (int s = 0; s < 20; ++s) {
        const Matrix d = random_density(2, rng), env = random_density(3, rng);
        const Matrix omega = product_embedding(d, env);
        const Partition os = standard_partition(OpenSystem{2, 3, Vector::Unit(2, 0)});
        CHECK(max_abs(pullback(os, omega).D - d) < 1e-14);
        CHECK(std::abs(von_neumann_entropy(omega) - von_neumann_entropy(d) - von_neumann_entropy(env)) < 1e-12);

        const Matrix mf = meanfield_embedding(d, 3);
        CHECK(mf.rows() == 8);
        CHECK(max_abs(meanfield_pullback(mf, 2, 3) - d) < 1e-14);
        CHECK(std::abs(von_neumann_entropy(mf) - 3.0 * von_neumann_entropy(d)) < 1e-11);
    }
    CHECK_THROWS_AS(product_embedding(Matrix(2.0 * Matrix::Identity(2, 2)), Matrix::Identity(1, 1)), ValidationError);
    CHECK_THROWS_AS(meanfield_embedding(Matrix(Matrix::Identity(2, 2) / 2.0), 13), DimensionError);
}

TEST_CASE("Gibbs state")
{
    const Partition os = standard_partition(OpenSystem{2, 2, Vector::Unit(2, 0)});
    double log_z = 0.0;
    const Matrix flat = gibbs_state(os, Matrix::Zero(2, 2), &log_z);
    CHECK(max_abs(flat - Matrix::Identity(4, 4) / 4.0) < 1e-15);
    CHECK(std::abs(log_z - std::log(4.0)) < 1e-14);

    const GibbsParams zero = gibbs_embedding(os, CorrelationMatrix{Matrix::Identity(2, 2) / 2.0, true});
    CHECK(max_abs(zero.alpha - Matrix(zero.alpha(0, 0) * Matrix::Identity(2, 2))) < 1e-9);

    // diag(p, 1 - p) on a qubit: alpha_11 - alpha_00 = log(p / (1 - p)).
    const Partition qubit = standard_partition(OpenSystem{2, 1, Vector::Unit(2, 0)});
    const double p = 0.8;
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = p;
    d(1, 1) = 1.0 - p;
    const GibbsParams g = gibbs_embedding(qubit, CorrelationMatrix{d, true});
    CHECK(std::abs((g.alpha(1, 1) - g.alpha(0, 0)).real() - std::log(p / (1.0 - p))) < 1e-8);
    CHECK(std::abs(g.alpha(0, 1)) < 1e-9);
}

TEST_CASE("Gibbs embedding is a right inverse on open-system partitions")
{
    Rng rng = make_rng(42);
    const std::vector<std::pair<Index, Index>> shapes = {{2, 1}, {2, 2}, {3, 1}, {4, 1}};
    for (const auto& [ds, de] : shapes)
        for (int s = 0; s < 5; ++s) {
            const Partition v = standard_partition(OpenSystem{ds, de, random_state_vector(ds, rng)});
            const Matrix d = interior_density(ds, rng);
            const GibbsParams g = gibbs_embedding(v, CorrelationMatrix{d, true});
            const Matrix psi = gibbs_state(v, g.alpha);
            CHECK(is_density(psi, 1e-12));
            CHECK(max_abs(pullback(v, psi).D - d) <= 1e-10);
        }
}

TEST_CASE("Gibbs state maximizes entropy among same-pullback states")
{
    Rng rng = make_rng(43);
    for (int inst = 0; inst < 5; ++inst) {
        const Partition v = standard_partition(OpenSystem{2, 2, random_state_vector(2, rng)});
        const Matrix d = interior_density(2, rng);
        const Matrix psi = gibbs_state(v, gibbs_embedding(v, CorrelationMatrix{d, true}).alpha);
        const double s_psi = von_neumann_entropy(psi);
        const double room = min_eigenvalue(psi);
        const Matrix d_psi = pullback(v, psi).D;
        for (int k = 0; k < 50; ++k) {
            Matrix x = random_hermitian(4, rng);
            x -= kron(partial_trace(x, {2, 2}, Factor::Second), Matrix::Identity(2, 2)) / 2.0;
            x *= 0.5 * room / hermitian_eigenvalues(x).cwiseAbs().maxCoeff();
            const Matrix other = psi + x;
            REQUIRE(max_abs(pullback(v, other).D - d_psi) < 1e-14);
            CHECK(von_neumann_entropy(other) < s_psi);
        }
    }
}

TEST_CASE("Gibbs embedding failures")
{
    const Partition half = spin_partition(spin_generators(1));
    CHECK_THROWS_AS(gibbs_embedding(half, spin_half_pullback(Eigen::Vector3d(0.1, 0.2, 0.3))),
                    RankDeficiencyError);

    const Partition qubit = standard_partition(OpenSystem{2, 1, Vector::Unit(2, 0)});
    Matrix pure = Matrix::Zero(2, 2);
    pure(0, 0) = 1.0;
    CHECK_THROWS_AS(gibbs_embedding(qubit, CorrelationMatrix{pure, true}), ConvergenceError);
    CHECK_THROWS_AS(gibbs_embedding(qubit, CorrelationMatrix{Matrix::Identity(3, 3) / 3.0, true}), DimensionError);
}

TEST_CASE("determinant and permanent")
{
    Rng rng = make_rng(44);
    for (Index n = 1; n <= 6; ++n)
        for (int s = 0; s < 5; ++s) {
            const Matrix m = random_ginibre(n, n, rng);
            const double scale = std::pow(2.0, static_cast<double>(n));
            CHECK(std::abs(determinant(m) - leibniz(m, false)) < 1e-12 * scale);
            CHECK(std::abs(permanent(m) - leibniz(m, true)) < 1e-12 * scale);
        }
    CHECK_THROWS_AS(determinant(Matrix(0, 0)), DimensionError);
    CHECK_THROWS_AS(permanent(Matrix(0, 2)), DimensionError);
    CHECK(std::abs(permanent(Matrix::Ones(4, 4)) - 24.0) < 1e-12);
}

TEST_CASE("quasi-free expectations against Fock states")
{
    Rng rng = make_rng(45);
    const FockRep fermi = fermion_ops(3);
    const Symbol qf = random_symbol(3, Statistics::Fermi, 0.9, rng);
    const Matrix rho_f = quasifree_state(fermi, qf);
    CHECK(is_density(rho_f, 1e-12));
    CHECK(max_abs(symbol_of(fermi, rho_f).Q - qf.Q) < 1e-12);

    const FockRep bose = boson_ops(2, 7);
    const Symbol qb = random_symbol(2, Statistics::Bose, 0.08, rng);
    const Matrix rho_b = quasifree_state(bose, qb);
    CHECK(max_abs(symbol_of(bose, rho_b).Q - qb.Q) < 1e-8);

    const std::vector<std::vector<int>> cases = {{0}, {1}, {2}, {0, 1}, {1, 2}, {2, 0}, {0, 1, 2}};
    for (const auto& cr : cases)
        for (const auto& an : cases) {
            if (cr.size() != an.size())
                continue;
            const Complex closed = quasifree_expectation(qf, cr, an);
            CHECK(std::abs(closed - fock_moment(fermi, rho_f, cr, an)) < 1e-12);
        }
    const std::vector<std::vector<int>> bcases = {{0}, {1}, {0, 0}, {0, 1}, {1, 1}, {1, 0}};
    for (const auto& cr : bcases)
        for (const auto& an : bcases) {
            if (cr.size() != an.size())
                continue;
            const Complex closed = quasifree_expectation(qb, cr, an);
            CHECK(std::abs(closed - fock_moment(bose, rho_b, cr, an)) < 1e-7);
        }

    // Single pair: omega(a*_i a_j) = Q_ji.
    const std::vector<int> i1 = {0}, j2 = {2};
    CHECK(quasifree_expectation(qf, i1, j2) == qf.Q(2, 0));

    const std::vector<int> c01 = {0, 1}, c10 = {1, 0}, a12 = {1, 2};
    CHECK(std::abs(quasifree_expectation(qf, c01, a12) + quasifree_expectation(qf, c10, a12)) < 1e-15);
    CHECK(std::abs(quasifree_expectation(qb, std::vector<int>{0, 1}, std::vector<int>{1, 0}) -
                   quasifree_expectation(qb, std::vector<int>{1, 0}, std::vector<int>{1, 0})) < 1e-15);
    const std::vector<int> c00 = {0, 0};
    CHECK(std::abs(quasifree_expectation(qf, c00, a12)) < 1e-15);

    CHECK_THROWS_AS(quasifree_expectation(qf, std::vector<int>{0}, std::vector<int>{0, 1}), DimensionError);
    CHECK_THROWS_AS(quasifree_expectation(qf, std::vector<int>{5}, std::vector<int>{0}), DimensionError);
}

TEST_CASE("Fock Gibbs states have Fermi-Dirac and Bose-Einstein symbols")
{
    Rng rng = make_rng(46);
    const FockRep fermi = fermion_ops(3);
    const Matrix b = random_hermitian(3, rng);
    const Matrix gibbs = matrix_exp(Matrix(-additive_observable(fermi, b)));
    const Matrix rho = gibbs / gibbs.trace();
    const Matrix fd = (Matrix::Identity(3, 3) + matrix_exp(b)).inverse();
    CHECK(max_abs(symbol_of(fermi, rho).Q - fd) < 1e-12);

    const FockRep bose = boson_ops(2, 8);
    const Matrix u = random_unitary(2, rng);
    Eigen::Vector2cd beta(3.0, 3.7);
    const Matrix bb = u * beta.asDiagonal() * u.adjoint();
    const Matrix gb = matrix_exp(Matrix(-additive_observable(bose, bb)));
    const Matrix rb = gb / gb.trace();
    const Matrix be = (matrix_exp(bb) - Matrix::Identity(2, 2)).inverse();
    CHECK(max_abs(symbol_of(bose, rb).Q - be) < 1e-10);
    CHECK(top_occupation_weight(bose, rb) < 1e-10);
}

TEST_CASE("symbol validation")
{
    Symbol s{Matrix::Identity(2, 2) * 1.5, Statistics::Fermi};
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.statistics = Statistics::Bose;
    CHECK_NOTHROW(s.validate());
    s.Q(0, 1) = 0.3;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    CHECK(std::string(to_string(Statistics::Fermi)) == "fermi");
    CHECK(std::string(to_string(Statistics::Bose)) == "bose");
}
