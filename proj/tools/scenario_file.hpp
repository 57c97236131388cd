#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldfec/sim.hpp"

namespace ldfec::cli {

// Schema violation; what() starts with the JSON path of the offending key, e.g. "$.code.l".
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct SweepSpec {
    sim::SweepAxis axis = sim::SweepAxis::rate;
    std::vector<double> values;
};

struct CompareSpec {
    std::vector<double> rates;                  // stream rates (l-1)/l
    std::vector<int> block_multipliers = {1};   // block (m l, m (l-1)) per rate
    std::vector<int> group_c;                   // group (c l, c) per rate
};

struct OutputSpec {
    std::string csv;            // empty: stdout
    std::string json;           // empty: no JSON mirror
    std::optional<double> slot_ms;
};

struct ScenarioFile {
    sim::Scenario scenario;
    std::optional<SweepSpec> sweep;
    std::optional<CompareSpec> compare;
    OutputSpec output;
};

ScenarioFile parse_scenario_file(const std::string& text);
ScenarioFile load_scenario_file(const std::string& path);

}  // namespace ldfec::cli
