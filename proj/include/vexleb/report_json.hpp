#pragma once

// JSON forms of every report type. Keys keep declaration order so that a
// report dumped twice from identical inputs is byte-identical.

#include <string>

#include <json.hpp>

#include "vexleb/conditions.hpp"
#include "vexleb/dyadic.hpp"
#include "vexleb/experiments.hpp"
#include "vexleb/norms.hpp"

namespace vexleb {

using Json = nlohmann::ordered_json;

Json to_json(const Rectangle& r);
Json to_json(const NormResult& r);
Json to_json(const ConditionReport& r);
Json to_json(const RatioReport& r);
Json to_json(const SandwichReport& r);
Json to_json(const DoubleHardyReport& r);
Json to_json(const BlowupSeries& r);
Json to_json(const DoubleAverageReport& r);
Json to_json(const DyadicComparisonReport& r);
Json to_json(const RdReport& r);
Json to_json(const EmbeddingReport& r);
Json to_json(const PartitionSequence& r);

// {"root": [lo, hi], "depth": d, "coefficients": [...level order...]}
Json to_json(const DyadicTree& t);
DyadicTree tree_from_json(const Json& j);

// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

} // namespace vexleb
