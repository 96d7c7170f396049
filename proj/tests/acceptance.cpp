// Acceptance checks: one PASS/FAIL line per criterion.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "gensub/gensub.hpp"

using namespace gensub;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Matrix unit_rate(Index n, Rng& rng)
{
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    const Matrix p = random_psd(n, rng);
    return hermitian_part(Matrix(p * (unif(rng) / hermitian_eigenvalues(p).maxCoeff())));
}

Matrix basis_projector(Index n, Index j)
{
    Matrix p = Matrix::Zero(n, n);
    p(j, j) = 1.0;
    return p;
}

Eigen::Vector3d random_unit3(Rng& rng)
{
    std::normal_distribution<double> n01;
    Eigen::Vector3d x(n01(rng), n01(rng), n01(rng));
    return x / x.norm();
}

Outcome two_boson()
{
    Rng rng = make_rng(101);
    double err = 0.0;
    int witness_mismatch = 0;
    for (int s = 0; s < 1000; ++s) {
        GMatrix g = random_gmatrix(rng);
        if (s % 100 == 0) {
            const Vector x = random_state_vector(2, rng), y = random_state_vector(2, rng);
            g.gamma = x * y.transpose();
        }
        const WitnessReport r = ppt_test(two_boson_correlation(g));
        std::array<double, 4> closed = two_boson_pt_spectrum(g);
        std::sort(closed.begin(), closed.end());
        for (int i = 0; i < 4; ++i)
            err = std::max(err, std::abs(closed[static_cast<std::size_t>(i)] - r.spectrum(i)));
        witness_mismatch += r.entangled != (g.det_abs() > 1e-10) ? 1 : 0;
    }
    return {err <= 1e-10 && witness_mismatch == 0,
            "max spectrum error " + fmt(err) + ", witness mismatches " + std::to_string(witness_mismatch)};
}

Outcome quasifree()
{
    Rng rng = make_rng(102);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    QuasiFreeModel model{RealVector(2), unit_rate(2, rng), unit_rate(2, rng), Statistics::Fermi};
    model.eps << unif(rng), unif(rng);
    const FockRep rep = fermion_ops(2);
    const LindbladModel full = quasifree_lindblad_model(rep, model);
    const Matrix rho0 = random_density(rep.dim, rng);

    std::vector<Matrix> oracle, closed;
    integrate(LindbladGenerator(full), rho0, 1.0, 1e-3,
              [&](double, const Matrix& r) { oracle.push_back(symbol_of(rep, r, 1e-6).Q); });
    integrate([&](const Matrix& q) { return one_particle_rhs(model, q); }, symbol_of(rep, rho0).Q, 1.0, 1e-3,
              [&](double, const Matrix& q) { closed.push_back(q); });
    double deviation = oracle.size() == closed.size() ? 0.0 : INFINITY;
    for (std::size_t s = 0; s < std::min(oracle.size(), closed.size()); ++s)
        deviation = std::max(deviation, max_abs(oracle[s] - closed[s]));

    // Single mode: stationary state of the Fock-space generator.
    const double gamma = 0.7, kappa = 0.3;
    const FockRep one = fermion_ops(1);
    const LindbladModel single = quasifree_lindblad_model(
        one, QuasiFreeModel{RealVector::Constant(1, 0.4), Matrix::Constant(1, 1, gamma), Matrix::Constant(1, 1, kappa),
                            Statistics::Fermi});
    Matrix liouville(4, 4);
    for (Index b = 0; b < 2; ++b)
        for (Index a = 0; a < 2; ++a) {
            Matrix e = Matrix::Zero(2, 2);
            e(a, b) = 1.0;
            const Matrix img = lindblad_rhs(single, e);
            liouville.col(a + 2 * b) = Eigen::Map<const Vector>(img.data(), 4);
        }
    const Vector k = Eigen::FullPivLU<Matrix>(liouville).kernel().col(0);
    Matrix stationary = Eigen::Map<const Matrix>(k.data(), 2, 2);
    stationary /= stationary.trace();
    const double occ_err = std::abs(symbol_of(one, stationary).Q(0, 0) - kappa / (gamma + kappa));
    return {deviation <= 1e-6 && occ_err <= 1e-8,
            "max deviation " + fmt(deviation) + ", stationary occupation error " + fmt(occ_err)};
}

Outcome spin_half()
{
    Rng rng = make_rng(103);
    const Partition half = spin_partition(spin_generators(1));
    double diag = 0.0, alpha = 0.0, spectrum = 0.0;
    for (int s = 0; s < 10000; ++s) {
        const Matrix d = pullback(half, random_density(2, rng)).D;
        for (Index a = 0; a < 3; ++a)
            diag = std::max(diag, std::abs(d(a, a) - 1.0 / 3.0));
        alpha = std::max(alpha, spin_half_alpha(d).norm());
        if (s % 10 == 0) {
            const RealVector ev = hermitian_eigenvalues(pullback(half, random_pure_density(2, rng)).D);
            spectrum = std::max({spectrum, std::abs(ev(2) - 2.0 / 3.0), std::abs(ev(1) - 1.0 / 3.0), std::abs(ev(0))});
        }
    }
    return {diag <= 1e-12 && alpha <= 1.0 / 3.0 + 1e-12 && spectrum <= 1e-10,
            "diagonal error " + fmt(diag) + ", max |alpha| " + fmt(alpha) + ", pure spectrum error " + fmt(spectrum)};
}

Outcome spin_one()
{
    Rng rng = make_rng(104);
    const Partition one = spin_partition(spin_generators(2));
    double worst = INFINITY;
    for (int s = 0; s < 10000; ++s) {
        const Matrix d = pullback(one, random_density(3, rng)).D;
        worst = std::min(worst, min_eigenvalue(Matrix(0.5 * Matrix::Identity(3, 3) - d)));
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int forward_fail = 0, backward_fail = 0;
    for (int s = 0; s < 1000; ++s) {
        const Matrix u = random_unitary(3, rng);
        Eigen::Vector3d lam(unif(rng), unif(rng), 0.0);
        lam(2) = -0.9 * std::min(lam(0), lam(1)) * unif(rng);
        const Matrix a = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
        forward_fail += is_psd(phi_apply(one, a), 1e-12) ? 0 : 1;
    }
    for (int s = 0; s < 1000; ++s) {
        Matrix a;
        if (s % 2 == 0) {
            const Matrix u = random_unitary(3, rng);
            Eigen::Vector3d lam(unif(rng), unif(rng), 0.0);
            lam(2) = -(1.05 + unif(rng)) * std::min(lam(0), lam(1));
            a = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
        } else {
            a = 2.0 * random_psd(3, rng);
            a(0, 1) += 0.1 + unif(rng);
        }
        backward_fail += is_psd(phi_apply(one, a), 1e-12) ? 1 : 0;
    }
    return {worst >= -1e-12 && forward_fail == 0 && backward_fail == 0,
            "min eig(1/2 - D) " + fmt(worst) + ", equivalence failures " + std::to_string(forward_fail) + "/" +
                std::to_string(backward_fail)};
}

Outcome infinite_spin()
{
    const SphereGrid small = sphere_quadrature(16, 16);
    Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < small.size(); ++i)
        second += small.weights[i] * small.points[i] * small.points[i].transpose();
    const double quad = (second - Eigen::Matrix3d::Identity() / 3.0).cwiseAbs().maxCoeff();

    Rng rng = make_rng(105);
    const SphereGrid grid = sphere_quadrature(64, 64);
    std::gamma_distribution<double> g(1.0, 1.0);
    double round_trip = 0.0, equivariance = 0.0;
    for (int s = 0; s < 100; ++s) {
        Eigen::Vector3d lam(g(rng), g(rng), g(rng));
        lam = 0.1 * Eigen::Vector3d::Ones() + 0.7 * lam / lam.sum();
        const Eigen::Matrix3d r = random_rotation(rng);
        const Eigen::Matrix3d d = r * lam.asDiagonal() * r.transpose();
        const MaxEntResult res = maxent_sphere(d.cast<Complex>(), grid);
        round_trip = std::max(round_trip, (sphere_moments(res.Delta, grid) - d).cwiseAbs().maxCoeff());
        if (s % 5 == 0) {
            const Eigen::Matrix3d q = random_rotation(rng);
            const MaxEntResult rot = maxent_sphere(Matrix((q * d * q.transpose()).cast<Complex>()), grid);
            equivariance = std::max(equivariance, (rot.Delta - q * res.Delta * q.transpose()).cwiseAbs().maxCoeff());
        }
    }
    return {quad <= 1e-12 && round_trip <= 1e-8 && equivariance <= 1e-7,
            "quadrature error " + fmt(quad) + ", round trip " + fmt(round_trip) + ", equivariance " +
                fmt(equivariance)};
}

Outcome gibbs()
{
    Rng rng = make_rng(106);
    const std::vector<std::pair<Index, Index>> shapes = {{2, 1}, {2, 2}, {3, 1}, {4, 1}};
    double right_inverse = 0.0;
    int entropy_fail = 0;
    for (const auto& [ds, de] : shapes)
        for (int s = 0; s < 5; ++s) {
            const Partition v = standard_partition(OpenSystem{ds, de, random_state_vector(ds, rng)});
            Matrix d = 0.7 * random_density(ds, rng) + 0.3 * Matrix::Identity(ds, ds) / static_cast<double>(ds);
            d = hermitian_part(d);
            const Matrix psi = gibbs_state(v, gibbs_embedding(v, CorrelationMatrix{d, true}).alpha);
            const Matrix back = pullback(v, psi).D;
            right_inverse = std::max(right_inverse, max_abs(back - d));
            if (de == 1)
                continue;
            const double s_psi = von_neumann_entropy(psi);
            const double room = min_eigenvalue(psi);
            for (int k = 0; k < 50; ++k) {
                Matrix x = random_hermitian(ds * de, rng);
                x -= kron(partial_trace(x, {ds, de}, Factor::Second), Matrix::Identity(de, de)) /
                     static_cast<double>(de);
                x *= 0.5 * room / hermitian_eigenvalues(x).cwiseAbs().maxCoeff();
                const Matrix other = psi + x;
                if (max_abs(pullback(v, other).D - back) > 1e-12 || !(von_neumann_entropy(other) < s_psi))
                    ++entropy_fail;
            }
        }
    std::string spin_half = "no error";
    bool rank_deficient = false;
    try {
        gibbs_embedding(spin_partition(spin_generators(1)), spin_half_pullback(Eigen::Vector3d(0.1, 0.2, 0.3)));
    } catch (const RankDeficiencyError& e) {
        rank_deficient = true;
        spin_half = "rank deficiency";
    } catch (const Error& e) {
        spin_half = e.what();
    }
    return {right_inverse <= 1e-10 && entropy_fail == 0 && rank_deficient,
            "right-inverse error " + fmt(right_inverse) + ", entropy failures " + std::to_string(entropy_fail) +
                ", spin-1/2: " + spin_half};
}

Outcome lie_flow()
{
    Rng rng = make_rng(107);
    const SpinRep rep = spin_generators(2);
    const LieAlgebraModel model({rep.J[0], rep.J[1], rep.J[2]}, Eigen::Vector3d(0.0, 0.0, 1.0),
                                {RealVector(Eigen::Vector3d(0.0, 0.0, std::sqrt(0.5)))});
    const LieTensor tensor = lie_coefficients(model);
    const Partition v(model.basis());
    const Matrix rho0 = random_density(3, rng);
    const Matrix d0 = pullback(v, rho0, 1e-8).D;
    const Matrix d_lie = integrate([&](const Matrix& x) { return lie_corr_rhs(tensor, x); }, d0, 1.0, 1e-3);
    const Matrix d_full = pullback(v, evolve_lindblad(model.lindblad(), rho0, 1.0, 1e-3), 1e-8).D;
    const double dev = max_abs(d_lie - d_full);
    return {dev <= 1e-6 && tensor.verification_residual <= 1e-9,
            "max deviation " + fmt(dev) + ", verification residual " + fmt(tensor.verification_residual)};
}

Outcome pauli()
{
    Rng rng = make_rng(108);
    std::uniform_real_distribution<double> unif(0.0, 2.0);
    double sum_dev = 0.0, min_entry = INFINITY;
    for (int s = 0; s < 50; ++s) {
        const Index n = 2 + s % 4;
        PauliModel m{RealMatrix::Zero(n, n)};
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k)
                if (j != k)
                    m.rates(j, k) = unif(rng);
        RealVector p0 = RealVector::Zero(n);
        p0(s % n) = 1.0;
        integrate([&](const RealVector& q) { return pauli_rhs(m, q); }, p0, 3.0, 1e-2,
                  [&](double, const RealVector& q) {
                      sum_dev = std::max(sum_dev, std::abs(q.sum() - 1.0));
                      min_entry = std::min(min_entry, q.minCoeff());
                  });
    }
    const double a = 0.7, b = 0.3;
    PauliModel two{RealMatrix::Zero(2, 2)};
    two.rates(0, 1) = a;
    two.rates(1, 0) = b;
    const RealVector p = integrate([&](const RealVector& q) { return pauli_rhs(two, q); },
                                   RealVector(RealVector::Unit(2, 1)), 60.0, 1e-2);
    const double stat = std::max(std::abs(p(0) - a / (a + b)), std::abs(p(1) - b / (a + b)));
    return {sum_dev <= 1e-12 && min_entry >= -1e-12 && stat <= 1e-8,
            "sum deviation " + fmt(sum_dev) + ", min entry " + fmt(min_entry) + ", stationary error " + fmt(stat)};
}

Outcome hartree()
{
    Rng rng = make_rng(109);
    double iso = 0.0, free = 0.0;
    for (int s = 0; s < 5; ++s) {
        const Index d = 2 + s % 2;
        const Matrix h1 = random_hermitian(d, rng);
        const Matrix f = swap_operator(d);
        Matrix h2 = random_hermitian(d * d, rng);
        h2 = 0.5 * (h2 + f * h2 * f);
        const Matrix d0 = random_density(d, rng);
        const RealVector spec0 = hermitian_eigenvalues(d0);
        integrate([&](const Matrix& x) { return hartree_rhs(h1, h2, x); }, d0, 1.0, 1e-3,
                  [&](double, const Matrix& x) {
                      iso = std::max(iso, (hermitian_eigenvalues(hermitian_part(x)) - spec0).cwiseAbs().maxCoeff());
                  });
        const Matrix zero = Matrix::Zero(d * d, d * d);
        const Matrix dt = integrate([&](const Matrix& x) { return hartree_rhs(h1, zero, x); }, d0, 1.0, 1e-3);
        const Matrix u = matrix_exp(Matrix(Complex(0.0, -1.0) * h1));
        free = std::max(free, max_abs(dt - u * d0 * u.adjoint()));
    }
    return {iso <= 1e-8 && free <= 1e-8, "spectrum drift " + fmt(iso) + ", von Neumann deviation " + fmt(free)};
}

Outcome structural()
{
    double car = 0.0;
    for (int n = 1; n <= 10; ++n) {
        const FockRep rep = fermion_ops(n);
        SparseMatrix id(rep.dim, rep.dim);
        id.setIdentity();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                SparseMatrix mixed = SparseMatrix(rep.a(i) * rep.adag(j)) + SparseMatrix(rep.adag(j) * rep.a(i));
                if (i == j)
                    mixed -= id;
                const SparseMatrix pure = SparseMatrix(rep.a(i) * rep.a(j)) + SparseMatrix(rep.a(j) * rep.a(i));
                car = std::max({car, Matrix(mixed).cwiseAbs().maxCoeff(), Matrix(pure).cwiseAbs().maxCoeff()});
            }
    }

    Rng rng = make_rng(110);
    double duality = 0.0;
    for (int s = 0; s < 10000; ++s) {
        const Index n = 2 + s % 2, d = 1 + s % 4;
        std::vector<Matrix> el;
        for (Index i = 0; i < d; ++i)
            el.push_back(random_ginibre(n, n, rng));
        const Partition v(el);
        const Matrix omega = random_density(n, rng);
        const Matrix a = random_ginibre(d, d, rng);
        const Complex lhs = (pullback(v, omega).D * a).trace();
        const Complex rhs = (omega * phi_apply(v, a)).trace();
        duality = std::max(duality, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }

    std::vector<Matrix> va, wb;
    for (int i = 0; i < 2; ++i)
        va.push_back(kron(random_ginibre(2, 2, rng), Matrix::Identity(3, 3)));
    for (int k = 0; k < 3; ++k)
        wb.push_back(kron(Matrix::Identity(2, 2), random_ginibre(3, 3, rng)));
    const Partition v(va), w(wb);
    const Matrix omega = kron(random_density(2, rng), random_density(3, rng));
    const double factorization =
        max_abs(pullback(compose(v, w), omega).D - kron(pullback(v, omega).D, pullback(w, omega).D));

    double ptrace = 0.0;
    for (int s = 0; s < 100; ++s) {
        const Matrix om = random_density(6, rng);
        const Partition os = standard_partition(OpenSystem{2, 3, random_state_vector(2, rng)});
        Matrix oracle = Matrix::Zero(2, 2);
        for (Index i = 0; i < 2; ++i)
            for (Index j = 0; j < 2; ++j)
                for (Index e = 0; e < 3; ++e)
                    oracle(i, j) += om(i * 3 + e, j * 3 + e);
        ptrace = std::max(ptrace, max_abs(pullback(os, om).D - oracle));
    }
    return {car == 0.0 && duality <= 1e-10 && factorization <= 1e-12 && ptrace <= 1e-12,
            "CAR " + fmt(car) + ", duality " + fmt(duality) + ", factorization " + fmt(factorization) +
                ", partial trace " + fmt(ptrace)};
}

#ifdef GENSUB_CLI_PATH
std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome determinism()
{
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "gensub_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::string> runs = {"spin-demo",  "spin1-demo", "infspin-maxent", "quasifree --modes 2",
                                           "pauli --csv", "meanfield",  "lie-demo",       "two-boson",
                                           "two-boson --det-sweep 9", "temporal"};
    int mismatches = 0, failures = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        std::string first;
        for (int rep = 0; rep < 2; ++rep) {
            const std::filesystem::path out = dir / ("run" + std::to_string(r) + "_" + std::to_string(rep));
            const std::string cmd = std::string("\"") + GENSUB_CLI_PATH + "\" " + runs[r] + " --seed 11 --output \"" +
                                    out.string() + "\"";
            if (std::system(cmd.c_str()) != 0)
                ++failures;
            const std::string text = slurp(out);
            if (rep == 0)
                first = text;
            else if (text != first || text.empty())
                ++mismatches;
        }
    }
    std::filesystem::remove_all(dir);
    return {mismatches == 0 && failures == 0, std::to_string(runs.size()) + " commands run twice, " +
                                                  std::to_string(mismatches) + " mismatches, " +
                                                  std::to_string(failures) + " failed runs"};
}
#else
Outcome determinism() { return {false, "CLI path not configured"}; }
#endif

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"two-boson closed-form PT spectrum and witness", two_boson},
        {"quasi-free closed flow against the Fock-space oracle", quasifree},
        {"spin-1/2 reduced-state geometry", spin_half},
        {"spin-1 cone and positivity equivalence", spin_one},
        {"infinite-spin maximal-entropy solver", infinite_spin},
        {"Gibbs embedding right inverse, entropy and rank deficiency", gibbs},
        {"Lie-algebraic correlation flow", lie_flow},
        {"Pauli simplex preservation and stationary state", pauli},
        {"Hartree isospectrality and free limit", hartree},
        {"structural identities", structural},
        {"CLI determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o{false, ""};
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ": " << criteria[i].first << " (" << o.detail
                  << ")" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
