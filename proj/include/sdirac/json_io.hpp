#pragma once

#include <string>

#include <json.hpp>

#include "sdirac/quadruple.hpp"
#include "sdirac/realization.hpp"
#include "sdirac/stability.hpp"
#include "sdirac/verify.hpp"

namespace sdirac {

/// Malformed or inconsistent input documents; the CLI maps this to exit 2.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Complex numbers serialize as [re, im]; matrices as
// {"rows": r, "cols": c, "data": [[...row of [re, im]...], ...]} row-major.

nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j, const std::string& context);

nlohmann::json realization_to_json(const Realization& r);
Realization realization_from_json(const nlohmann::json& j);

nlohmann::json quadruple_to_json(const AdmissibleQuadruple& q);
AdmissibleQuadruple quadruple_from_json(const nlohmann::json& j);

SweepConfig sweep_config_from_json(const nlohmann::json& j);

nlohmann::json sweep_result_to_json(const SweepResult& r);
nlohmann::json defect_report_to_json(const WeylDefectReport& r);

/// Shortest round-trippable decimal (17 significant digits), shared by every
/// CSV writer so emitted files are byte-stable.
std::string format_full(double v);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace sdirac
