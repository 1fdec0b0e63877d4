#include <ostream>

#include <json.hpp>

#include "homlab/cli.hpp"
#include "homlab/format.hpp"

namespace homlab::cli {

namespace {

// Negative zero prints as "0".
std::string cell(double x) { return format_double(x == 0.0 ? 0.0 : x); }

}  // namespace

void write_csv(const protocols::ProtocolResult& result, std::ostream& out) {
    out << result.sweep_name();
    for (const auto& c : result.columns()) out << ',' << c.name;
    out << '\n';
    for (std::size_t row = 0; row < result.rows(); ++row) {
        out << cell(result.sweep()[row]);
        for (const auto& c : result.columns()) out << ',' << cell(c.values[row]);
        out << '\n';
    }
}

std::string metadata_json(const protocols::ProtocolResult& result) {
    nlohmann::ordered_json j;
    j["sweep"] = result.sweep_name();
    j["rows"] = result.rows();
    auto& params = j["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : result.metadata()) params[key] = value;
    auto& columns = j["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : result.columns()) columns.push_back({{"name", c.name}, {"provenance", c.provenance}});
    return j.dump(2) + "\n";
}

}  // namespace homlab::cli
