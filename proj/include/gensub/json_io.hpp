#ifndef GENSUB_JSON_IO_HPP
#define GENSUB_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "gensub/dynamics.hpp"
#include "gensub/entanglement.hpp"
#include "gensub/partitions.hpp"
#include "gensub/spin.hpp"

namespace gensub {

using Json = nlohmann::json;

// Matrices are {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major
// order.  Readers throw ValidationError naming the offending field.

Json to_json(const Matrix& m);
Json to_json(const RealMatrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where = "matrix");

Json to_json(const Partition& v);
Partition partition_from_json(const Json& j);

Json to_json(const PhaseSpaceModel& model);
PhaseSpaceModel phase_space_from_json(const Json& j);

Json to_json(const LindbladModel& model);
LindbladModel lindblad_from_json(const Json& j);

Json to_json(const QuasiFreeModel& model);
QuasiFreeModel quasifree_from_json(const Json& j);

Json to_json(const PauliModel& model);
PauliModel pauli_from_json(const Json& j);

Json to_json(const LieAlgebraModel& model);
LieAlgebraModel lie_from_json(const Json& j);

Json to_json(const GibbsParams& p);
Json to_json(const MaxEntResult& r);
Json to_json(const WitnessReport& r);

/// Parses `text`; syntax errors become ValidationError with line and column.
Json parse_json(const std::string& text, const std::string& source = "input");
Json read_json_file(const std::string& path);

/// Detects the schema of a document by its keys (matrix, partition, phase
/// space, Lindblad, quasi-free, Pauli or Lie model), parses it and checks
/// its invariants.  Returns the schema name; throws ValidationError with the
/// first violation otherwise.
std::string validate_document(const Json& j, double tol = 1e-8);

} // namespace gensub

#endif // GENSUB_JSON_IO_HPP
