#include "talenti/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace talenti {

namespace {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json numbers(const std::vector<double>& xs) {
    Json a = Json::array();
    for (double x : xs) a.push_back(number(x));
    return a;
}

Json row_json(const TableRow& row) {
    Json o = Json::object();
    for (const auto& [k, v] : row) o[k] = number(v);
    return o;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void csv_number(std::ostream& out, double x) {
    if (std::isfinite(x))
        out << x;
    else
        out << "nan";
}

}  // namespace

Json to_json(const CheckRecord& c) {
    Json o;
    o["name"] = c.name;
    o["lhs"] = number(c.lhs);
    o["rhs"] = number(c.rhs);
    o["margin"] = number(c.margin);
    o["tolerance"] = number(c.tolerance);
    o["pass"] = c.pass;
    if (!c.note.empty()) o["note"] = c.note;
    return o;
}

Json to_json(const ComparisonReport& r) {
    Json o;
    o["name"] = r.name;
    o["pass"] = r.all_pass();
    Json info = Json::object();
    for (const auto& [k, v] : r.info) info[k] = number(v);
    o["info"] = info;
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    o["checks"] = checks;
    Json table = Json::array();
    for (const auto& row : r.table) table.push_back(row_json(row));
    o["table"] = table;
    o["notes"] = r.notes;
    return o;
}

Json to_json(const CounterexampleReport& r) {
    Json o;
    o["n"] = r.n;
    o["r"] = numbers(r.r);
    o["delta"] = numbers(r.delta);
    o["normalized"] = numbers(r.normalized);
    o["richardson"] = numbers(r.richardson);
    o["estimate"] = number(r.estimate);
    o["power_fit"] = number(r.power_fit);
    o["fit_residual"] = number(r.fit_residual);
    o["slope"] = number(r.slope);
    o["pass"] = r.pass;
    return o;
}

Json to_json(const IdentityCheck& c) {
    Json o;
    o["name"] = c.name;
    o["worst"] = number(c.worst);
    o["tolerance"] = number(c.tolerance);
    o["pass"] = c.pass;
    return o;
}

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void write_checks_csv(std::ostream& out, const std::vector<CheckRecord>& checks) {
    const auto old = out.precision(17);
    out << "name,lhs,rhs,margin,tolerance,pass,note\n";
    for (const auto& c : checks) {
        out << csv_escape(c.name) << ',';
        csv_number(out, c.lhs);
        out << ',';
        csv_number(out, c.rhs);
        out << ',';
        csv_number(out, c.margin);
        out << ',';
        csv_number(out, c.tolerance);
        out << ',' << (c.pass ? "true" : "false") << ',' << csv_escape(c.note) << '\n';
    }
    out.precision(old);
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
    std::vector<std::string> columns;
    for (const auto& row : rows)
        for (const auto& [k, v] : row)
            if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    const auto old = out.precision(17);
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_escape(columns[i]);
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out << ',';
            auto it = std::find_if(row.begin(), row.end(), [&](const auto& kv) { return kv.first == columns[i]; });
            if (it != row.end()) csv_number(out, it->second);
        }
        out << '\n';
    }
    out.precision(old);
}

}  // namespace talenti
