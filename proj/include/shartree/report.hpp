#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "shartree/solver.hpp"

namespace sh {

using json = nlohmann::ordered_json;

// header comment lines are written as "# text" before the column row
void write_monitors_csv(const std::string& path, const std::vector<MonitorRecord>& monitors,
                        const std::vector<std::string>& header = {});
void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows, const std::vector<std::string>& header = {});
void write_field_csv(const std::string& path, const ReducedField& f, const std::vector<std::string>& header = {});
void write_json(const std::string& path, const json& j);

struct Series {
    std::string name;
    std::vector<double> x, y;
};
// standalone SVG line plot; log axes drop non-positive samples
std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series, bool logx = false, bool logy = false);
void write_text(const std::string& path, const std::string& text);

json to_json(const MonitorRecord& m);
json to_json(const HypothesisReport& rep);
json to_json(const DecayReport& rep);
json to_json(const StabilityTable& tab);
json to_json(const GlobalizationReport& rep);
json to_json(const FreeLimitTable& tab);
// non-finite numbers become strings so the output stays valid JSON
json number(double x);

} // namespace sh
