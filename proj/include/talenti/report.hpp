#pragma once

#include "talenti/anisotropy.hpp"
#include "talenti/compare.hpp"

#include <json.hpp>

#include <iosfwd>

namespace talenti {

using Json = nlohmann::ordered_json;

Json to_json(const CheckRecord& c);
Json to_json(const ComparisonReport& r);
Json to_json(const CounterexampleReport& r);
Json to_json(const IdentityCheck& c);

/// Non-finite numbers become null; everything else keeps 17 significant digits.
void write_json(std::ostream& out, const Json& j);

/// CSV "name,lhs,rhs,margin,tolerance,pass,note".
void write_checks_csv(std::ostream& out, const std::vector<CheckRecord>& checks);
/// CSV whose header is the union of column names in first-seen order.
void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);

}  // namespace talenti
