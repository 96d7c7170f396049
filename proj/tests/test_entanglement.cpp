#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gensub/dynamics.hpp"
#include "gensub/entanglement.hpp"

using namespace gensub;

namespace {

Matrix bell()
{
    Vector psi = Vector::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
    return psi * psi.adjoint();
}

std::vector<Matrix> basis_projectors(Index n)
{
    std::vector<Matrix> out;
    for (Index j = 0; j < n; ++j) {
        Matrix p = Matrix::Zero(n, n);
        p(j, j) = 1.0;
        out.push_back(p);
    }
    return out;
}

GMatrix sweep(double s)
{
    GMatrix g;
    g.gamma << 1.0 - s + s / std::sqrt(2.0), 0.0, 0.0, s / std::sqrt(2.0);
    g.gamma /= g.gamma.norm();
    return g;
}

} // namespace

TEST_CASE("PPT witness")
{
    Rng rng = make_rng(71);
    const ComposedCorrelation product{kron(random_density(2, rng), random_density(3, rng)), {2, 3}, true};
    CHECK_NOTHROW(product.validate());
    const WitnessReport rp = ppt_test(product);
    CHECK_FALSE(rp.entangled);
    CHECK(rp.minEig > 0.0);

    const WitnessReport rb = ppt_test(ComposedCorrelation{bell(), {2, 2}, true});
    CHECK(rb.entangled);
    CHECK(std::abs(rb.minEig + 0.5) < 1e-14);
    CHECK(std::abs(rb.spectrum.sum() - 1.0) < 1e-14);

    double worst = INFINITY;
    for (int s = 0; s < 1000; ++s) {
        const ComposedCorrelation sep = random_separable(2 + s % 2, 2, 1 + s % 5, rng);
        CHECK_NOTHROW(sep.validate(1e-10));
        const WitnessReport r = ppt_test(sep);
        CHECK_FALSE(r.entangled);
        worst = std::min(worst, r.minEig);
    }
    CHECK(worst >= -1e-12);
    CHECK_THROWS_AS(ppt_test(ComposedCorrelation{bell(), {2, 3}, true}), DimensionError);
}

TEST_CASE("composed pull-back of a global state")
{
    // v_a = |0><a| (x) 1 and w_k = 1 (x) |0><k| compose to |00><ak|, which
    // pulls back to the global state itself.
    std::vector<Matrix> ve, we;
    for (Index a = 0; a < 2; ++a) {
        Matrix ka = Matrix::Zero(2, 2);
        ka(0, a) = 1.0;
        ve.push_back(kron(ka, Matrix::Identity(2, 2)));
        we.push_back(kron(Matrix::Identity(2, 2), ka));
    }
    const Partition v(ve), w(we);
    const ComposedCorrelation d = composed_pullback(v, w, bell());
    CHECK(d.shape.dimA == 2);
    CHECK(max_abs(d.D - bell()) < 1e-15);
    CHECK(ppt_test(d).entangled);

    std::vector<Matrix> pa, pb;
    for (const Matrix& p : basis_projectors(2)) {
        pa.push_back(kron(p, Matrix::Identity(2, 2)));
        pb.push_back(kron(Matrix::Identity(2, 2), p));
    }
    const ComposedCorrelation diag = composed_pullback(Partition(pa), Partition(pb), bell());
    CHECK_FALSE(ppt_test(diag).entangled);
    CHECK(std::abs(diag.D(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(diag.D(3, 3) - 0.5) < 1e-15);
}

TEST_CASE("two-boson closed form")
{
    Rng rng = make_rng(72);
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
        const GMatrix g = random_gmatrix(rng);
        const ComposedCorrelation d = two_boson_correlation(g);
        const WitnessReport r = ppt_test(d);
        std::array<double, 4> closed = two_boson_pt_spectrum(g);
        std::sort(closed.begin(), closed.end());
        for (int i = 0; i < 4; ++i)
            worst = std::max(worst, std::abs(closed[static_cast<std::size_t>(i)] - r.spectrum(i)));
        CHECK(r.entangled == (g.det_abs() > 1e-10));
        CHECK(std::abs(r.spectrum.sum() - 1.0) < 1e-12);
    }
    CHECK(worst <= 1e-10);

    // Product coefficients: det G = 0 and no witness.
    const Vector x = random_state_vector(2, rng), y = random_state_vector(2, rng);
    GMatrix prod;
    prod.gamma = x * y.transpose();
    CHECK(prod.det_abs() < 1e-15);
    const WitnessReport rp = ppt_test(two_boson_correlation(prod));
    CHECK_FALSE(rp.entangled);

    for (int s = 0; s < 20; ++s) {
        const GMatrix g = random_gmatrix(rng);
        const ComposedCorrelation d = two_boson_correlation(g);
        CHECK(max_abs(two_boson_correlation_fock(g).D - d.D) <= 1e-12);
        CHECK(hermitian_eigenvalues(d.D).head(3).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(std::abs(d.D.trace() - 1.0) < 1e-14);
    }

    GMatrix unnormalized;
    unnormalized.gamma << 1.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(two_boson_correlation(unnormalized), ValidationError);
}

TEST_CASE("determinant sweep")
{
    double previous_det = -1.0, previous_eig = 1.0;
    for (int i = 0; i <= 100; ++i) {
        const GMatrix g = sweep(i / 100.0);
        const WitnessReport r = ppt_test(two_boson_correlation(g));
        CHECK(std::abs(r.minEig + g.det_abs()) < 1e-12);
        CHECK(g.det_abs() > previous_det);
        CHECK(r.minEig <= previous_eig + 1e-15);
        if (i > 0)
            CHECK(std::abs(r.minEig - previous_eig) < 0.02);
        previous_det = g.det_abs();
        previous_eig = r.minEig;
    }
    CHECK(std::abs(previous_det - 0.5) < 1e-14);
    CHECK(std::abs(previous_eig + 0.5) < 1e-12);
}

TEST_CASE("temporal correlations")
{
    Rng rng = make_rng(73);
    const Partition v = standard_partition(CoarseGrain{basis_projectors(3), 1});
    const Matrix omega = random_density(3, rng);
    const Matrix id9 = Matrix::Identity(9, 9);
    const ComposedCorrelation at0 = temporal_correlation(v, omega, id9);
    const ComposedCorrelation direct = composed_pullback(v, v, omega);
    CHECK(max_abs(at0.D - direct.D) < 1e-15);
    CHECK(std::abs(at0.D.trace() - 1.0) < 1e-14);

    LindbladModel model{random_hermitian(3, rng), {Matrix(0.6 * random_ginibre(3, 3, rng))}};
    const Matrix lambda = heisenberg_map(model, 0.8, 1e-3);
    const ComposedCorrelation d = temporal_correlation(v, omega, lambda);
    CHECK_NOTHROW(d.validate(1e-9));
    CHECK(std::abs(d.D.trace() - 1.0) < 1e-10);

    CHECK_THROWS_AS(temporal_correlation(v, omega, Matrix(2.0 * id9)), ValidationError);
    Matrix a = Matrix::Zero(3, 3);
    a(0, 1) = 1.0;
    const Partition non_unity({a});
    CHECK_THROWS_AS(temporal_correlation(non_unity, omega, id9), ValidationError);
    CHECK_NOTHROW(temporal_correlation(non_unity, omega, id9, false));
    CHECK_THROWS_AS(temporal_correlation(v, omega, Matrix::Identity(4, 4)), DimensionError);
}

TEST_CASE("classical representation of a single correlation matrix")
{
    Rng rng = make_rng(74);
    for (int s = 0; s < 50; ++s) {
        const Matrix d = random_density(3, rng);
        const PhaseSpaceModel model = classical_representation_single(d);
        CHECK_NOTHROW(model.validate());
        double total = 0.0;
        for (double w : model.weights)
            total += w;
        CHECK(std::abs(total - 1.0) < 1e-14);
        CHECK(max_abs(classical_correlation(model).D - d) < 1e-13);
    }
    Matrix scaled = 2.0 * random_pure_density(2, rng);
    const PhaseSpaceModel pure = classical_representation_single(scaled);
    CHECK(pure.weights.size() == 1);
    CHECK(max_abs(classical_correlation(pure, 1e-8).D - scaled) < 1e-13);

    Matrix negative = Matrix::Identity(2, 2);
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(classical_representation_single(negative), ValidationError);
}
