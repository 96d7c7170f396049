#include "gensub/json_io.hpp"

#include <fstream>
#include <sstream>

namespace gensub {

namespace {

const Json& require(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(where + ": missing field \"" + key + "\"");
    return j.at(key);
}

double number(const Json& j, const std::string& where)
{
    if (!j.is_number())
        throw ValidationError(where + ": expected a number");
    return j.get<double>();
}

RealVector real_vector(const Json& j, const std::string& where)
{
    if (!j.is_array())
        throw ValidationError(where + ": expected an array of numbers");
    RealVector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Index>(i)) = number(j[i], where + "[" + std::to_string(i) + "]");
    return v;
}

Json to_json(const RealVector& v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

Complex complex_entry(const Json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2)
        throw ValidationError(where + ": expected [re, im]");
    return {number(j[0], where), number(j[1], where)};
}

std::string entry_name(Index i, Index j)
{
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

// First entry where a != a*, by largest mismatch.
void check_hermitian(const Matrix& a, double tol, const std::string& where)
{
    Index bi = 0, bj = 0;
    double worst = 0.0;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) {
            const double e = std::abs(a(i, j) - std::conj(a(j, i)));
            if (e > worst) {
                worst = e;
                bi = i;
                bj = j;
            }
        }
    if (worst > tol * tol_scale(a))
        throw ValidationError(where + ": not Hermitian at entry " + entry_name(bi, bj) + " (|A_ij - conj A_ji| = " +
                              std::to_string(worst) + ")");
}

void check_psd(const Matrix& a, double tol, const std::string& where)
{
    check_hermitian(a, tol, where);
    const double lmin = min_eigenvalue(a);
    if (lmin < -tol * tol_scale(a))
        throw ValidationError(where + ": not positive semidefinite, eigenvalue " + std::to_string(lmin));
}

} // namespace

Json to_json(const Matrix& m)
{
    Json data = Json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            data.push_back({m(i, j).real(), m(i, j).imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json to_json(const RealMatrix& m)
{
    return to_json(Matrix(m.cast<Complex>()));
}

Matrix matrix_from_json(const Json& j, const std::string& where)
{
    const Json& rows = require(j, "rows", where);
    const Json& cols = require(j, "cols", where);
    const Json& data = require(j, "data", where);
    if (!rows.is_number_integer() || !cols.is_number_integer() || rows.get<long>() < 1 || cols.get<long>() < 1)
        throw ValidationError(where + ": rows and cols must be positive integers");
    if (!data.is_array())
        throw ValidationError(where + ": data must be an array");
    const Index r = rows.get<Index>();
    const Index c = cols.get<Index>();
    if (static_cast<Index>(data.size()) != r * c)
        throw ValidationError(where + ": data has " + std::to_string(data.size()) + " entries, expected " +
                              std::to_string(r * c));
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index k = 0; k < c; ++k)
            m(i, k) = complex_entry(data[static_cast<std::size_t>(i * c + k)], where + ".data" + entry_name(i, k));
    return m;
}

Json to_json(const Partition& v)
{
    Json elements = Json::array();
    for (const Matrix& e : v.elements())
        elements.push_back(to_json(e));
    return {{"label", v.label()}, {"elements", std::move(elements)}};
}

Partition partition_from_json(const Json& j)
{
    const Json& elements = require(j, "elements", "partition");
    if (!elements.is_array() || elements.empty())
        throw ValidationError("partition: elements must be a non-empty array");
    std::vector<Matrix> v;
    for (std::size_t i = 0; i < elements.size(); ++i)
        v.push_back(matrix_from_json(elements[i], "partition.elements[" + std::to_string(i) + "]"));
    const std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "";
    return Partition(std::move(v), label);
}

Json to_json(const PhaseSpaceModel& model)
{
    Json values = Json::array();
    for (const Vector& v : model.values) {
        Json row = Json::array();
        for (Index i = 0; i < v.size(); ++i)
            row.push_back({v(i).real(), v(i).imag()});
        values.push_back(std::move(row));
    }
    return {{"weights", model.weights}, {"values", std::move(values)}};
}

PhaseSpaceModel phase_space_from_json(const Json& j)
{
    PhaseSpaceModel model;
    const RealVector w = real_vector(require(j, "weights", "phase space"), "phase space.weights");
    model.weights.assign(w.data(), w.data() + w.size());
    const Json& values = require(j, "values", "phase space");
    if (!values.is_array())
        throw ValidationError("phase space: values must be an array");
    for (std::size_t x = 0; x < values.size(); ++x) {
        const std::string where = "phase space.values[" + std::to_string(x) + "]";
        if (!values[x].is_array())
            throw ValidationError(where + ": expected an array of [re, im]");
        Vector v(static_cast<Index>(values[x].size()));
        for (std::size_t i = 0; i < values[x].size(); ++i)
            v(static_cast<Index>(i)) = complex_entry(values[x][i], where);
        model.values.push_back(std::move(v));
    }
    return model;
}

Json to_json(const LindbladModel& model)
{
    Json jumps = Json::array();
    for (const Matrix& l : model.jumps)
        jumps.push_back(to_json(l));
    return {{"H", to_json(model.H)}, {"jumps", std::move(jumps)}};
}

LindbladModel lindblad_from_json(const Json& j)
{
    LindbladModel model;
    model.H = matrix_from_json(require(j, "H", "Lindblad model"), "Lindblad model.H");
    if (j.contains("jumps")) {
        if (!j["jumps"].is_array())
            throw ValidationError("Lindblad model: jumps must be an array");
        for (std::size_t a = 0; a < j["jumps"].size(); ++a)
            model.jumps.push_back(matrix_from_json(j["jumps"][a], "Lindblad model.jumps[" + std::to_string(a) + "]"));
    }
    return model;
}

Json to_json(const QuasiFreeModel& model)
{
    return {{"eps", to_json(model.eps)},
            {"gamma", to_json(model.gamma)},
            {"kappa", to_json(model.kappa)},
            {"statistics", to_string(model.statistics)}};
}

QuasiFreeModel quasifree_from_json(const Json& j)
{
    QuasiFreeModel model;
    model.eps = real_vector(require(j, "eps", "quasi-free model"), "quasi-free model.eps");
    model.gamma = matrix_from_json(require(j, "gamma", "quasi-free model"), "quasi-free model.gamma");
    model.kappa = matrix_from_json(require(j, "kappa", "quasi-free model"), "quasi-free model.kappa");
    const Json& st = require(j, "statistics", "quasi-free model");
    if (st == "fermi")
        model.statistics = Statistics::Fermi;
    else if (st == "bose")
        model.statistics = Statistics::Bose;
    else
        throw ValidationError("quasi-free model: statistics must be \"fermi\" or \"bose\"");
    return model;
}

Json to_json(const PauliModel& model)
{
    Json rates = Json::array();
    for (Index i = 0; i < model.rates.rows(); ++i)
        rates.push_back(to_json(RealVector(model.rates.row(i).transpose())));
    return {{"rates", std::move(rates)}};
}

PauliModel pauli_from_json(const Json& j)
{
    const Json& rates = require(j, "rates", "Pauli model");
    if (!rates.is_array() || rates.empty())
        throw ValidationError("Pauli model: rates must be a non-empty array of rows");
    const Index n = static_cast<Index>(rates.size());
    PauliModel model{RealMatrix(n, n)};
    for (Index i = 0; i < n; ++i) {
        const RealVector row = real_vector(rates[static_cast<std::size_t>(i)], "Pauli model.rates[" + std::to_string(i) + "]");
        if (row.size() != n)
            throw ValidationError("Pauli model: rates row " + std::to_string(i) + " has length " +
                                  std::to_string(row.size()) + ", expected " + std::to_string(n));
        model.rates.row(i) = row.transpose();
    }
    return model;
}

Json to_json(const LieAlgebraModel& model)
{
    Json basis = Json::array();
    for (const Matrix& x : model.basis())
        basis.push_back(to_json(x));
    Json l = Json::array();
    for (const RealVector& v : model.l_coeffs())
        l.push_back(to_json(v));
    return {{"basis", std::move(basis)}, {"hCoeffs", to_json(model.h_coeffs())}, {"lCoeffs", std::move(l)}};
}

LieAlgebraModel lie_from_json(const Json& j)
{
    const Json& basis = require(j, "basis", "Lie model");
    if (!basis.is_array() || basis.empty())
        throw ValidationError("Lie model: basis must be a non-empty array");
    std::vector<Matrix> x;
    for (std::size_t m = 0; m < basis.size(); ++m)
        x.push_back(matrix_from_json(basis[m], "Lie model.basis[" + std::to_string(m) + "]"));
    const RealVector h = real_vector(require(j, "hCoeffs", "Lie model"), "Lie model.hCoeffs");
    std::vector<RealVector> l;
    if (j.contains("lCoeffs")) {
        if (!j["lCoeffs"].is_array())
            throw ValidationError("Lie model: lCoeffs must be an array of arrays");
        for (std::size_t a = 0; a < j["lCoeffs"].size(); ++a)
            l.push_back(real_vector(j["lCoeffs"][a], "Lie model.lCoeffs[" + std::to_string(a) + "]"));
    }
    return LieAlgebraModel(std::move(x), h, std::move(l));
}

Json to_json(const GibbsParams& p)
{
    return {{"alpha", to_json(p.alpha)}, {"logZ", p.logZ}, {"residual", p.residual}};
}

Json to_json(const MaxEntResult& r)
{
    return {{"Delta", to_json(RealMatrix(r.Delta))}, {"residual", r.residual}, {"iterations", r.iterations}};
}

Json to_json(const WitnessReport& r)
{
    return {{"minEig", r.minEig}, {"entangled", r.entangled}, {"spectrum", to_json(r.spectrum)}};
}

Json parse_json(const std::string& text, const std::string& source)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Recover line and column from the byte offset.
        std::size_t line = 1, column = 1;
        const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ValidationError(source + ": malformed JSON at line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ": " + e.what());
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path);
}

std::string validate_document(const Json& j, double tol)
{
    if (!j.is_object())
        throw ValidationError("document must be a JSON object");
    if (j.contains("rows")) {
        matrix_from_json(j);
        return "matrix";
    }
    if (j.contains("elements")) {
        partition_from_json(j);
        return "partition";
    }
    if (j.contains("H")) {
        const LindbladModel m = lindblad_from_json(j);
        require_square(m.H, "Lindblad model.H");
        check_hermitian(m.H, tol, "Lindblad model.H");
        m.validate(tol);
        return "lindblad";
    }
    if (j.contains("eps")) {
        const QuasiFreeModel m = quasifree_from_json(j);
        if (m.gamma.rows() != m.modes() || m.gamma.cols() != m.modes() || m.kappa.rows() != m.modes() ||
            m.kappa.cols() != m.modes())
            throw ValidationError("quasi-free model: gamma and kappa must be " + std::to_string(m.modes()) + "x" +
                                  std::to_string(m.modes()));
        check_psd(m.gamma, tol, "quasi-free model.gamma");
        check_psd(m.kappa, tol, "quasi-free model.kappa");
        m.validate(tol);
        return "quasifree";
    }
    if (j.contains("rates")) {
        pauli_from_json(j).validate();
        return "pauli";
    }
    if (j.contains("basis")) {
        lie_from_json(j);
        return "lie";
    }
    if (j.contains("weights")) {
        phase_space_from_json(j).validate(tol);
        return "phase-space";
    }
    throw ValidationError("unrecognized document: expected one of rows, elements, H, eps, rates, basis, weights");
}

} // namespace gensub
