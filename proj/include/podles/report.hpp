#pragma once

#include "podles/analysis.hpp"
#include "podles/context.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace podles {

using Json = nlohmann::ordered_json;

/// Serializes `j` with two-space indentation. Floating values are written
/// with 17 significant digits; NaN and infinities become null.
std::string dump_json(const Json& j);

/// Formats a double as %.17g.
std::string format17(double v);

Json context_json(const ModelContext& ctx, int N2, const SuiteOptions& opt);
Json check_json(const CheckReport& r);

/// {"ctx": ..., "checks": [...], "summary": {"pass", "fail"}}.
Json suite_json(const ModelContext& ctx, int N2, const SuiteOptions& opt, const std::vector<CheckReport>& checks);

/// check,component,l2,norm rows for every decay series.
void write_series_csv(std::ostream& os, const std::vector<CheckReport>& checks);

/// One line per check: PASS/FAIL, id, mode and the measured numbers.
void write_text(std::ostream& os, const std::vector<CheckReport>& checks);

} // namespace podles
