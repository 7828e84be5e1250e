#pragma once

// JSON encodings of the combinatorial records and graphs used by the CLI.
//   Partition   [4, 3, 2]
//   SSYT        {"shape": [...], "max_entry": T, "rows": [[...], ...]}
//   WalkRecord  {"start": [...], "horizon": T, "steps": [[+1, -1, ...], ...]}   (one row per walker)
//   PathGraph   {"vertices": [...], "order": [...], "edges": [{"from", "to", "weight"}]}
// Edge weights are integers or exact rational strings such as "3/2".

#include <json.hpp>

#include "noncollide/combinat.hpp"
#include "noncollide/lgv.hpp"

namespace noncollide {

using Json = nlohmann::ordered_json;

Json to_json(const Partition& p);
Json to_json(const SSYT& t);
Json to_json(const WalkRecord& w);
Json to_json(const PathGraph& g);

Partition partition_from_json(const Json& j);
SSYT ssyt_from_json(const Json& j);
WalkRecord walk_from_json(const Json& j);
PathGraph graph_from_json(const Json& j);

}  // namespace noncollide
