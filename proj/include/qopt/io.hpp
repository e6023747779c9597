#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qopt/atsp.hpp"
#include "qopt/experiments.hpp"
#include "qopt/sat.hpp"

namespace qopt::io {

using nlohmann::json;

// ---------------------------------------------------------------- instances

/// "p cnf n m" header, one 0-terminated clause per line, signed 1-based ids.
void write_dimacs(std::ostream& out, const sat::SatInstance& instance, std::optional<std::uint64_t> seed = {});
/// Comment lines are skipped. All clauses must have the same length.
sat::SatInstance read_dimacs(std::istream& in);

json sat_to_json(const sat::SatInstance& instance, std::optional<std::uint64_t> seed = {},
                 std::optional<sat::SatOracleResult> oracle = {});
sat::SatInstance sat_from_json(const json& j);

/// TSPLIB ATSP, EDGE_WEIGHT_TYPE EXPLICIT, EDGE_WEIGHT_FORMAT FULL_MATRIX.
/// mu and sigma travel in the COMMENT field.
void write_tsplib(std::ostream& out, const atsp::AtspInstance& instance, std::string_view name,
                  std::optional<std::uint64_t> seed = {});
atsp::AtspInstance read_tsplib(std::istream& in);

json atsp_to_json(const atsp::AtspInstance& instance, std::optional<std::uint64_t> seed = {},
                  std::optional<atsp::AtspOptimum> optimum = {});
atsp::AtspInstance atsp_from_json(const json& j);

// ---------------------------------------------------------------- parameters

/// Each key maps to one or more numbers. Accepts a JSON object (numbers or
/// arrays of numbers) or "key = v1, v2, ..." lines with '#' comments.
using ParamMap = std::map<std::string, std::vector<double>>;

ParamMap parse_params(std::string_view text);
ParamMap load_params(const std::string& path);

/// Keys R0 R1 T0 T1 steps; missing keys keep the defaults.
SatScheduleParams sat_params_from(const ParamMap& params, SatScheduleParams defaults);
/// Keys rho_init rho_rate tau steps.
AtspScheduleParams atsp_params_from(const ParamMap& params, AtspScheduleParams defaults);
/// Each parameter of the family given as "name = min, max, step".
std::vector<tune::ParamRange> box_from(const ParamMap& params, tune::ScheduleFamily family);
std::vector<std::string> parameter_names(tune::ScheduleFamily family);

// ---------------------------------------------------------------- results

/// Decimal number or "inf".
double parse_number(const std::string& token);

/// Shortest round-trip decimal; "inf" for infinities.
std::string format_number(double value);

/// Infinite values become null with a companion "<key>_infinite": true.
void put_number(json& obj, const std::string& key, double value);

void write_sat_scaling_csv(std::ostream& out, const std::vector<experiments::SatScalingPoint>& points);
json sat_scaling_json(const experiments::SatScalingSpec& spec, const std::vector<experiments::SatScalingPoint>& points);

void write_atsp_scaling_csv(std::ostream& out, const std::vector<experiments::AtspScalingPoint>& points);
json atsp_scaling_json(const experiments::AtspScalingSpec& spec,
                       const std::vector<experiments::AtspScalingPoint>& points);

void write_histogram_csv(std::ostream& out, const experiments::HistogramResult& result);
json histogram_json(const experiments::HistogramResult& result, std::uint64_t master_seed);

void write_tune_csv(std::ostream& out, const experiments::TuneSweepSpec& spec, const tune::TuneResult& result);
json tune_json(const experiments::TuneSweepSpec& spec, const experiments::TuneSweepResult& result);

}  // namespace qopt::io
