#pragma once

// Output formats: trajectory CSV, report/summary JSON, verdict JSON lines.

#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "intcons/equilibria.hpp"
#include "intcons/model.hpp"
#include "intcons/properties.hpp"
#include "intcons/simulate.hpp"
#include "intcons/suites.hpp"

namespace intcons {

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double v);

/// RFC 4180 field quoting (only when the field needs it).
std::string csv_field(std::string_view field);

/// Header `t,x_1,...,x_n,H,h,V,diameter`, one CRLF-terminated row per sample.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

nlohmann::json to_json(const IntervalSummary& summary);
/// Jacobian serialized row-major as {"rows", "cols", "data"}, or the string
/// "undefined (boundary)".
nlohmann::json to_json(const EquilibriumReport& report);
nlohmann::json to_json(const PropertyVerdict& verdict);

/// One compact JSON object, no trailing newline.
std::string verdict_line(const SuiteVerdict& verdict);

}  // namespace intcons
