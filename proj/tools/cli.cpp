#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gensub/gensub.hpp"

namespace gensub::cli {

namespace {

using Demo = Json (*)(const RunConfig&, std::ostream& csv);

Json spectrum_json(const RealVector& v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Matrix require_input_matrix(const RunConfig& c)
{
    return matrix_from_json(read_json_file(c.inputs.front()), c.inputs.front());
}

// Hermitian PSD matrix with spectral norm drawn from [0.2, 1].
Matrix random_rate_matrix(Index n, Rng& rng)
{
    Matrix p = random_psd(n, rng);
    p = hermitian_part(p);
    return p * (uniform(rng, 0.2, 1.0) / hermitian_eigenvalues(p).maxCoeff());
}

QuasiFreeModel random_quasifree(int n, Rng& rng)
{
    QuasiFreeModel m;
    m.eps = RealVector(n);
    for (int k = 0; k < n; ++k)
        m.eps(k) = uniform(rng, -1.0, 1.0);
    m.gamma = random_rate_matrix(n, rng);
    m.kappa = random_rate_matrix(n, rng);
    m.statistics = Statistics::Fermi;
    return m;
}

Json spin_demo(const RunConfig& c, std::ostream&)
{
    Rng rng = make_rng(c.seed);
    const CorrelationMatrix top = spin_half_pullback(Eigen::Vector3d(0.0, 0.0, 1.0));
    RealVector extreme = hermitian_eigenvalues(top.D).reverse();

    constexpr int kSamples = 1000;
    double diag_dev = 0.0, max_alpha = 0.0, boundary_dev = 0.0;
    for (int s = 0; s < kSamples; ++s) {
        Eigen::Vector3d x;
        std::normal_distribution<double> n01;
        for (int a = 0; a < 3; ++a)
            x(a) = n01(rng);
        x /= x.norm();
        const double radius = std::cbrt(uniform(rng, 0.0, 1.0));
        const CorrelationMatrix mixed = spin_half_pullback(radius * x);
        const CorrelationMatrix pure = spin_half_pullback(x);
        for (int a = 0; a < 3; ++a)
            diag_dev = std::max(diag_dev, std::abs(mixed.D(a, a) - 1.0 / 3.0));
        max_alpha = std::max(max_alpha, spin_half_alpha(mixed.D).norm());
        boundary_dev = std::max(boundary_dev, std::abs(spin_half_alpha(pure.D).norm() - 1.0 / 3.0));
    }

    std::string embedding = "none";
    try {
        gibbs_embedding(spin_partition(spin_generators(1)), spin_half_pullback(Eigen::Vector3d(0.1, 0.2, 0.3)));
        embedding = "unexpected success";
    } catch (const RankDeficiencyError& e) {
        embedding = e.what();
    }

    const bool pass = (extreme - Eigen::Vector3d(2.0 / 3.0, 1.0 / 3.0, 0.0)).cwiseAbs().maxCoeff() <= 1e-10 &&
                      diag_dev <= 1e-12 && max_alpha <= 1.0 / 3.0 + 1e-12 && boundary_dev <= 1e-10;
    return {{"command", "spin-demo"},
            {"extremeSpectrum", spectrum_json(extreme)},
            {"samples", kSamples},
            {"maxDiagonalDeviation", diag_dev},
            {"maxAlphaNorm", max_alpha},
            {"pureBoundaryDeviation", boundary_dev},
            {"embedding", embedding},
            {"pass", pass}};
}

Json spin1_demo(const RunConfig& c, std::ostream&)
{
    Rng rng = make_rng(c.seed);
    const SpinRep rep = spin_generators(2);
    const Partition v = spin_partition(rep);
    Matrix top = Matrix::Zero(3, 3);
    top(0, 0) = 1.0;
    const Matrix d_top = pullback(v, top).D;
    const RealVector tilde_spectrum = hermitian_eigenvalues(spin_one_tilde(d_top)).reverse();

    constexpr int kSamples = 1000;
    double worst = INFINITY;
    int members = 0;
    for (int s = 0; s < kSamples; ++s) {
        const Matrix d = pullback(v, random_density(3, rng)).D;
        worst = std::min(worst, min_eigenvalue(Matrix(0.5 * Matrix::Identity(3, 3) - d)));
        members += reduced_membership(SpinCase::One, d, 1e-10).member ? 1 : 0;
    }
    const bool pass = worst >= -1e-12 && members == kSamples && tilde_spectrum(1) < 1e-12;
    return {{"command", "spin1-demo"},
            {"topStateCorrelation", to_json(d_top)},
            {"tildeSpectrum", spectrum_json(tilde_spectrum)},
            {"samples", kSamples},
            {"minEigHalfMinusD", worst},
            {"members", members},
            {"pass", pass}};
}

Matrix random_interior_real_density(Rng& rng)
{
    std::gamma_distribution<double> g(1.0, 1.0);
    Eigen::Vector3d lam(g(rng), g(rng), g(rng));
    lam = 0.1 * Eigen::Vector3d::Ones() + 0.7 * lam / lam.sum();
    const Eigen::Matrix3d r = random_rotation(rng);
    return Matrix((r * lam.asDiagonal() * r.transpose()).cast<Complex>());
}

Json infspin_maxent(const RunConfig& c, std::ostream&)
{
    Rng rng = make_rng(c.seed);
    const Matrix d = c.inputs.empty() ? random_interior_real_density(rng) : require_input_matrix(c);
    const SphereGrid grid = sphere_quadrature(64, 64);
    const MaxEntResult r = maxent_sphere(d, grid, c.tol);
    Json out = to_json(r);
    out["command"] = "infspin-maxent";
    out["D"] = to_json(d);
    out["entropy"] = sphere_measure_entropy(r.measure, grid);
    return out;
}

Json quasifree_demo(const RunConfig& c, std::ostream& csv)
{
    Rng rng = make_rng(c.seed);
    QuasiFreeModel model = c.inputs.empty() ? random_quasifree(c.modes, rng) : quasifree_from_json(read_json_file(c.inputs.front()));
    const std::string warning = model.validate(c.tol);
    const int n = static_cast<int>(model.modes());
    if (n > 6)
        throw DimensionError("quasifree: at most 6 modes for the Fock oracle");
    const FockRep rep = model.statistics == Statistics::Fermi ? fermion_ops(n) : boson_ops(n, n <= 2 ? 8 : 4);
    const LindbladModel full = quasifree_lindblad_model(rep, model, c.tol);

    Matrix rho0;
    if (model.statistics == Statistics::Fermi) {
        rho0 = random_density(rep.dim, rng);
    } else {
        Matrix q0 = random_psd(n, rng);
        q0 = hermitian_part(q0) * (0.05 / hermitian_eigenvalues(q0).maxCoeff());
        rho0 = quasifree_state(rep, Symbol{q0, Statistics::Bose});
    }
    const Matrix q0 = symbol_of(rep, rho0).Q;

    std::vector<Matrix> oracle, closed;
    std::vector<double> times;
    double top_weight = 0.0;
    integrate(LindbladGenerator(full), rho0, c.t_final, c.dt,
              [&](double t, const Matrix& r) {
                  times.push_back(t);
                  oracle.push_back(symbol_of(rep, r, 1e-6).Q);
                  top_weight = std::max(top_weight, top_occupation_weight(rep, r));
              });
    double spectrum_min = INFINITY, spectrum_max = -INFINITY;
    integrate([&](const Matrix& q) { return one_particle_rhs(model, q); }, q0, c.t_final, c.dt,
              [&](double, const Matrix& q) {
                  closed.push_back(q);
                  const RealVector ev = hermitian_eigenvalues(q);
                  spectrum_min = std::min(spectrum_min, ev(0));
                  spectrum_max = std::max(spectrum_max, ev(ev.size() - 1));
              });

    double deviation = 0.0;
    for (std::size_t s = 0; s < oracle.size(); ++s)
        deviation = std::max(deviation, max_abs(oracle[s] - closed[s]));

    if (c.csv) {
        csv << "t,occupation,maxDeviation\n";
        const std::size_t every = std::max<std::size_t>(1, oracle.size() / 10);
        for (std::size_t s = 0; s < oracle.size(); s += every)
            csv << std::setprecision(17) << times[s] << ',' << closed[s].trace().real() << ','
                << max_abs(oracle[s] - closed[s]) << '\n';
    }

    // Single-mode stationary occupation kappa / (gamma + kappa).
    double g1 = model.gamma(0, 0).real(), k1 = model.kappa(0, 0).real();
    if (g1 + k1 < 0.1) {
        g1 = 0.7;
        k1 = 0.3;
    }
    QuasiFreeModel single{RealVector::Constant(1, model.eps(0)), Matrix::Constant(1, 1, g1), Matrix::Constant(1, 1, k1),
                          Statistics::Fermi};
    const double horizon = 40.0 / (g1 + k1);
    const Matrix q_inf = integrate([&](const Matrix& q) { return one_particle_rhs(single, q); },
                                   Matrix(Matrix::Zero(1, 1)), horizon, 1e-2);
    const double stationary_error = std::abs(q_inf(0, 0).real() - k1 / (g1 + k1));

    const bool trusted = top_weight < kTruncationTrust;
    Json out = {{"command", "quasifree"},
                {"statistics", to_string(model.statistics)},
                {"modes", n},
                {"t", c.t_final},
                {"dt", c.dt},
                {"maxDeviation", deviation},
                {"symbolSpectrum", {spectrum_min, spectrum_max}},
                {"singleModeStationaryError", stationary_error},
                {"trusted", trusted},
                {"pass", deviation <= 1e-6 && stationary_error <= 1e-8 && trusted}};
    if (!warning.empty())
        out["warning"] = warning;
    return out;
}

Json pauli_demo(const RunConfig& c, std::ostream& csv)
{
    Rng rng = make_rng(c.seed);
    PauliModel model;
    if (c.inputs.empty()) {
        model.rates = RealMatrix::Zero(3, 3);
        for (Index j = 0; j < 3; ++j)
            for (Index k = 0; k < 3; ++k)
                if (j != k)
                    model.rates(j, k) = uniform(rng, 0.0, 1.0);
    } else {
        model = pauli_from_json(read_json_file(c.inputs.front()));
    }
    model.validate();
    const Index n = model.levels();
    RealVector p0 = RealVector::Zero(n);
    p0(0) = 1.0;

    double sum_dev = 0.0, min_entry = INFINITY;
    if (c.csv) {
        csv << "t";
        for (Index j = 0; j < n; ++j)
            csv << ",p" << j;
        csv << '\n';
    }
    const long total_steps = c.t_final == 0.0 ? 0 : static_cast<long>(std::ceil(c.t_final / c.dt - 1e-9));
    const long every = std::max<long>(1, total_steps / 10);
    long step = 0;
    const RealVector p = integrate([&](const RealVector& q) { return pauli_rhs(model, q); }, p0, c.t_final, c.dt,
                                   [&](double t, const RealVector& q) {
                                       sum_dev = std::max(sum_dev, std::abs(q.sum() - 1.0));
                                       min_entry = std::min(min_entry, q.minCoeff());
                                       if (c.csv && (step % every == 0 || step == total_steps)) {
                                           csv << std::setprecision(17) << t;
                                           for (Index j = 0; j < n; ++j)
                                               csv << ',' << q(j);
                                           csv << '\n';
                                       }
                                       ++step;
                                   });

    // Stationary distribution: kernel of the generator, normalized.
    RealMatrix gen = model.rates;
    gen.diagonal() -= model.rates.colwise().sum().transpose();
    const Eigen::FullPivLU<RealMatrix> lu(gen);
    RealVector stationary = lu.kernel().col(0);
    stationary /= stationary.sum();

    return {{"command", "pauli"},
            {"t", c.t_final},
            {"final", spectrum_json(p)},
            {"stationary", spectrum_json(stationary)},
            {"maxSumDeviation", sum_dev},
            {"minEntry", min_entry},
            {"pass", sum_dev <= 1e-12 && min_entry >= -1e-12}};
}

Json meanfield_demo(const RunConfig& c, std::ostream&)
{
    Rng rng = make_rng(c.seed);
    constexpr Index d = 2;
    const Matrix h1 = random_hermitian(d, rng);
    const Matrix f = swap_operator(d);
    Matrix h2 = random_hermitian(d * d, rng);
    h2 = 0.5 * (h2 + f * h2 * f);
    const Matrix d0 = random_pure_density(d, rng);

    const Matrix hartree = integrate([&](const Matrix& x) { return hartree_rhs(h1, h2, x); }, d0, c.t_final, c.dt);
    Json rows = Json::array();
    std::vector<double> devs;
    for (int n = 2; n <= 4; ++n) {
        const LindbladModel model{meanfield_hamiltonian(h1, h2, n), {}};
        const PullbackFn pb = [n](const Matrix& omega) { return meanfield_pullback(omega, d, n, 1e-8); };
        const EmbedFn embed = [n](const Matrix& x) { return meanfield_embedding(x, n); };
        const Matrix dn = reduced_dynamics(pb, embed, model, d0, c.t_final, c.dt);
        devs.push_back(max_abs(dn - hartree));
        rows.push_back({{"N", n}, {"deviation", devs.back()}});
    }
    const bool monotone = devs[0] > devs[1] && devs[1] > devs[2];
    return {{"command", "meanfield"}, {"t", c.t_final}, {"hartree", to_json(hartree)},
            {"comparison", rows}, {"monotone", monotone}, {"pass", monotone}};
}

Json lie_demo(const RunConfig& c, std::ostream&)
{
    Rng rng = make_rng(c.seed);
    const SpinRep rep = spin_generators(2);
    const double omega = 1.0, gamma = 0.5;
    const LieAlgebraModel model =
        c.inputs.empty() ? LieAlgebraModel({rep.J[0], rep.J[1], rep.J[2]}, Eigen::Vector3d(0.0, 0.0, omega),
                                           {RealVector(Eigen::Vector3d(0.0, 0.0, std::sqrt(gamma)))})
                         : lie_from_json(read_json_file(c.inputs.front()));
    const LieTensor tensor = lie_coefficients(model);
    const Partition v(model.basis(), "lie basis");
    const LindbladModel full = model.lindblad();
    const Matrix rho0 = random_density(full.dim(), rng);
    const Matrix d0 = pullback(v, rho0, 1e-8).D;

    const Matrix d_lie = integrate([&](const Matrix& x) { return lie_corr_rhs(tensor, x); }, d0, c.t_final, c.dt);
    const Matrix d_full = pullback(v, evolve_lindblad(full, rho0, c.t_final, c.dt), 1e-8).D;
    const double deviation = max_abs(d_lie - d_full);
    return {{"command", "lie-demo"},
            {"basisSize", model.size()},
            {"closureResidual", model.closure_residual()},
            {"verificationResidual", tensor.verification_residual},
            {"t", c.t_final},
            {"maxDeviation", deviation},
            {"pass", deviation <= 1e-6 && tensor.verification_residual <= 1e-9}};
}

GMatrix sweep_g(double s)
{
    GMatrix g;
    g.gamma << 1.0 - s + s / std::numbers::sqrt2, 0.0, 0.0, s / std::numbers::sqrt2;
    g.gamma /= g.gamma.norm();
    return g;
}

Json two_boson_demo(const RunConfig& c, std::ostream& csv)
{
    if (c.det_sweep > 0) {
        csv << "det,minEig\n";
        for (int i = 0; i < c.det_sweep; ++i) {
            const double s = c.det_sweep == 1 ? 1.0 : static_cast<double>(i) / (c.det_sweep - 1);
            const GMatrix g = sweep_g(s);
            const WitnessReport r = ppt_test(two_boson_correlation(g));
            csv << std::setprecision(17) << g.det_abs() << ',' << r.minEig << '\n';
        }
        return nullptr;
    }
    Rng rng = make_rng(c.seed);
    const GMatrix g = random_gmatrix(rng);
    const ComposedCorrelation d = two_boson_correlation(g);
    const WitnessReport r = ppt_test(d, c.tol);
    std::array<double, 4> closed = two_boson_pt_spectrum(g);
    std::sort(closed.begin(), closed.end());
    double err = 0.0;
    for (int i = 0; i < 4; ++i)
        err = std::max(err, std::abs(closed[static_cast<std::size_t>(i)] - r.spectrum(i)));
    const double fock_err = max_abs(two_boson_correlation_fock(g).D - d.D);
    Json out = to_json(r);
    out["command"] = "two-boson";
    out["det"] = g.det_abs();
    out["closedFormError"] = err;
    out["fockError"] = fock_err;
    out["pass"] = err <= 1e-10 && fock_err <= 1e-12 && r.entangled == (g.det_abs() > c.tol);
    return out;
}

Json temporal_demo(const RunConfig& c, std::ostream&)
{
    Rng rng = make_rng(c.seed);
    constexpr Index n = 3;
    RealMatrix rates = RealMatrix::Zero(n, n);
    LindbladModel model{Matrix::Zero(n, n), {}};
    for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k)
            if (j != k) {
                rates(j, k) = uniform(rng, 0.0, 1.0);
                Matrix l = Matrix::Zero(n, n);
                l(j, k) = std::sqrt(rates(j, k));
                model.jumps.push_back(l);
            }
    std::vector<Matrix> projectors;
    for (Index j = 0; j < n; ++j) {
        Matrix p = Matrix::Zero(n, n);
        p(j, j) = 1.0;
        projectors.push_back(p);
    }
    const Partition v = standard_partition(CoarseGrain{projectors, 1});
    std::gamma_distribution<double> g(1.0, 1.0);
    RealVector p0(n);
    for (Index j = 0; j < n; ++j)
        p0(j) = g(rng);
    p0 /= p0.sum();
    const Matrix omega = p0.cast<Complex>().asDiagonal();

    const Matrix lambda = heisenberg_map(model, c.t_final, c.dt);
    const ComposedCorrelation d = temporal_correlation(v, omega, lambda);

    // Classical two-time probabilities p_k P(l at t | k at 0).
    const PauliModel pm{rates};
    double deviation = 0.0;
    for (Index k = 0; k < n; ++k) {
        const RealVector pk = integrate([&](const RealVector& q) { return pauli_rhs(pm, q); },
                                        RealVector(RealVector::Unit(n, k)), c.t_final, c.dt);
        for (Index l = 0; l < n; ++l)
            deviation = std::max(deviation, std::abs(d.D(k * n + l, k * n + l) - p0(k) * pk(l)));
    }
    RealMatrix offdiag = d.D.cwiseAbs();
    offdiag.diagonal().setZero();
    deviation = std::max(deviation, offdiag.maxCoeff());

    const WitnessReport r = ppt_test(d, c.tol);
    Json out = to_json(r);
    out["command"] = "temporal";
    out["t"] = c.t_final;
    out["trace"] = d.D.trace().real();
    out["classicalDeviation"] = deviation;
    out["unital"] = max_abs(superoperator_apply(lambda, Matrix::Identity(n, n)) - Matrix::Identity(n, n));
    out["pass"] = deviation <= 1e-7 && std::abs(d.D.trace().real() - 1.0) <= 1e-8 && !r.entangled;
    return out;
}

struct Entry {
    const char* name;
    Demo run;
    const char* help;
};

const std::vector<Entry>& table()
{
    static const std::vector<Entry> t = {
        {"spin-demo", spin_demo, "spin-1/2 ball geometry and extreme-point spectrum"},
        {"spin1-demo", spin1_demo, "spin-1 cone D <= 1/2 and the tilde map"},
        {"infspin-maxent", infspin_maxent, "maximal-entropy sphere measure for a real density (--input matrix)"},
        {"quasifree", quasifree_demo, "closed one-particle flow against the Fock-space Lindblad oracle"},
        {"pauli", pauli_demo, "Pauli master equation trajectory and stationary state"},
        {"meanfield", meanfield_demo, "Hartree flow against N-body reduced dynamics, N = 2, 3, 4"},
        {"lie-demo", lie_demo, "Lie-algebraic correlation flow against the full Lindblad evolution"},
        {"two-boson", two_boson_demo, "two-boson PPT witness (--det-sweep K for a CSV sweep)"},
        {"temporal", temporal_demo, "temporal correlation matrix of a classical jump process"},
        {"validate", nullptr, "schema and invariant check of a model file (--input)"},
    };
    return t;
}

} // namespace

double default_tolerance()
{
    if (const char* env = std::getenv("GENSUB_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && v > 0.0)
            return v;
    }
    return 1e-8;
}

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const Entry& e : table())
            out.emplace_back(e.name);
        return out;
    }();
    return names;
}

std::string usage()
{
    std::ostringstream os;
    os << "usage: gensub <command> [--input FILE] [--output FILE] [--dt DT] [--t T] [--seed N]\n"
          "              [--tol TOL] [--modes N] [--det-sweep K] [--csv]\n\ncommands:\n";
    for (const Entry& e : table())
        os << "  " << std::left << std::setw(16) << e.name << e.help << '\n';
    return os.str();
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const Entry* entry = nullptr;
    for (const Entry& e : table())
        if (config.command == e.name)
            entry = &e;
    if (!entry) {
        err << "unknown command '" << config.command << "'\n" << usage();
        return kUsage;
    }
    if (!(config.dt > 0.0) || !(config.t_final >= 0.0)) {
        err << "invalid config: need dt > 0 and t >= 0\n";
        return kUsage;
    }

    std::ostringstream report;
    try {
        if (!entry->run) {
            if (config.inputs.empty()) {
                err << "validate: --input is required\n";
                return kUsage;
            }
            for (const std::string& path : config.inputs) {
                validate_document(read_json_file(path), config.tol);
                report << "ok\n";
            }
        } else {
            std::ostringstream csv;
            const Json result = entry->run(config, csv);
            if (!result.is_null() && !(config.csv && !csv.str().empty()))
                report << result.dump(2) << '\n';
            report << csv.str();
        }
    } catch (const ConvergenceError& e) {
        err << config.command << ": " << e.what() << '\n';
        return kNoConvergence;
    } catch (const DivergenceError& e) {
        err << config.command << ": " << e.what() << '\n';
        return kNoConvergence;
    } catch (const Error& e) {
        err << config.command << ": " << e.what() << '\n';
        return kInvalid;
    } catch (const nlohmann::json::exception& e) {
        err << config.command << ": " << e.what() << '\n';
        return kInvalid;
    }

    if (config.output.empty()) {
        out << report.str();
    } else {
        std::ofstream file(config.output, std::ios::binary);
        if (!file) {
            err << "cannot write " << config.output << '\n';
            return kInvalid;
        }
        file << report.str();
    }
    return kOk;
}

} // namespace gensub::cli
