#include "qopt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qopt/errors.hpp"

namespace qopt::io {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

double parse_number(const std::string& token) {
  const std::string t = trim(token);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw ConfigError("not a number: '" + t + "'");
  return value;
}

void write_dimacs(std::ostream& out, const sat::SatInstance& instance, std::optional<std::uint64_t> seed) {
  out << "c random " << instance.k() << "-SAT, density " << format_number(instance.clause_density()) << "\n";
  if (seed) out << "c seed " << *seed << "\n";
  out << "p cnf " << instance.n_vars() << ' ' << instance.num_clauses() << "\n";
  for (const auto& clause : instance.clauses()) {
    for (const auto& lit : clause) out << (lit.negated ? -lit.var : lit.var) << ' ';
    out << "0\n";
  }
}

sat::SatInstance read_dimacs(std::istream& in) {
  std::string line;
  int n_vars = -1;
  int declared = -1;
  std::vector<sat::Clause> clauses;
  sat::Clause current;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == 'c' || t[0] == '%') continue;
    if (t[0] == 'p') {
      std::istringstream header(t);
      std::string p, fmt;
      header >> p >> fmt >> n_vars >> declared;
      if (fmt != "cnf" || !header) throw ConfigError("malformed DIMACS header");
      continue;
    }
    if (n_vars < 0) throw ConfigError("DIMACS clause before header");
    std::istringstream body(t);
    long lit = 0;
    while (body >> lit) {
      if (lit == 0) {
        clauses.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back({static_cast<int>(std::labs(lit)), lit < 0});
      }
    }
  }
  if (n_vars < 0) throw ConfigError("missing DIMACS header");
  if (!current.empty()) throw ConfigError("unterminated DIMACS clause");
  if (static_cast<int>(clauses.size()) != declared) throw ConfigError("DIMACS clause count does not match header");
  if (clauses.empty()) throw ConfigError("DIMACS formula has no clauses");
  const int k = static_cast<int>(clauses.front().size());
  return sat::SatInstance(n_vars, k, std::move(clauses));
}

json sat_to_json(const sat::SatInstance& instance, std::optional<std::uint64_t> seed,
                 std::optional<sat::SatOracleResult> oracle) {
  json clauses = json::array();
  for (const auto& clause : instance.clauses()) {
    json c = json::array();
    for (const auto& lit : clause) c.push_back(lit.negated ? -lit.var : lit.var);
    clauses.push_back(std::move(c));
  }
  json j{{"format", "qopt-sat"},
         {"n_vars", instance.n_vars()},
         {"k", instance.k()},
         {"m", instance.num_clauses()},
         {"mu", instance.clause_density()},
         {"clauses", std::move(clauses)}};
  if (seed) j["seed"] = *seed;
  if (oracle)
    j["oracle"] = {{"min_conflicts", oracle->min_conflicts},
                   {"num_minima", oracle->num_minima},
                   {"soluble", oracle->soluble()}};
  return j;
}

sat::SatInstance sat_from_json(const json& j) {
  try {
    std::vector<sat::Clause> clauses;
    for (const auto& c : j.at("clauses")) {
      sat::Clause clause;
      for (const auto& v : c) {
        const int lit = v.get<int>();
        clause.push_back({std::abs(lit), lit < 0});
      }
      clauses.push_back(std::move(clause));
    }
    return sat::SatInstance(j.at("n_vars").get<int>(), j.at("k").get<int>(), std::move(clauses));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed SAT JSON: ") + e.what());
  }
}

void write_tsplib(std::ostream& out, const atsp::AtspInstance& instance, std::string_view name,
                  std::optional<std::uint64_t> seed) {
  out << "NAME: " << name << "\n";
  out << "TYPE: ATSP\n";
  out << "COMMENT: mu=" << format_number(instance.mu()) << " sigma=" << format_number(instance.sigma());
  if (seed) out << " seed=" << *seed;
  out << "\n";
  out << "DIMENSION: " << instance.n_cities() << "\n";
  out << "EDGE_WEIGHT_TYPE: EXPLICIT\n";
  out << "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n";
  out << "EDGE_WEIGHT_SECTION\n";
  for (int x = 1; x <= instance.n_cities(); ++x) {
    for (int y = 1; y <= instance.n_cities(); ++y) out << (y > 1 ? " " : "") << instance.distance(x, y);
    out << "\n";
  }
  out << "EOF\n";
}

atsp::AtspInstance read_tsplib(std::istream& in) {
  std::string line;
  int dimension = -1;
  double mu = 100.0;
  double sigma = 0.0;
  bool full_matrix = false;
  std::vector<std::int64_t> weights;
  bool in_section = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t == "EOF") break;
    if (in_section) {
      std::istringstream row(t);
      std::int64_t w;
      while (row >> w) weights.push_back(w);
      continue;
    }
    if (t == "EDGE_WEIGHT_SECTION") {
      in_section = true;
      continue;
    }
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw ConfigError("malformed TSPLIB line: " + t);
    const std::string key = trim(t.substr(0, colon));
    const std::string value = trim(t.substr(colon + 1));
    if (key == "DIMENSION") {
      dimension = std::stoi(value);
    } else if (key == "TYPE" && value != "ATSP") {
      throw ConfigError("TSPLIB TYPE must be ATSP");
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      full_matrix = value == "FULL_MATRIX";
    } else if (key == "COMMENT") {
      std::istringstream fields(value);
      std::string field;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string k = field.substr(0, eq);
        if (k == "mu") mu = parse_number(field.substr(eq + 1));
        if (k == "sigma") sigma = parse_number(field.substr(eq + 1));
      }
    }
  }
  if (dimension < 0) throw ConfigError("TSPLIB file has no DIMENSION");
  if (!full_matrix) throw ConfigError("only EDGE_WEIGHT_FORMAT FULL_MATRIX is supported");
  if (weights.size() != static_cast<std::size_t>(dimension) * dimension)
    throw ConfigError("TSPLIB weight section has the wrong number of entries");
  return atsp::AtspInstance(dimension, std::move(weights), mu, sigma);
}

json atsp_to_json(const atsp::AtspInstance& instance, std::optional<std::uint64_t> seed,
                  std::optional<atsp::AtspOptimum> optimum) {
  json rows = json::array();
  for (int x = 1; x <= instance.n_cities(); ++x) {
    json row = json::array();
    for (int y = 1; y <= instance.n_cities(); ++y) row.push_back(instance.distance(x, y));
    rows.push_back(std::move(row));
  }
  json j{{"format", "qopt-atsp"},
         {"n_cities", instance.n_cities()},
         {"mu", instance.mu()},
         {"sigma", instance.sigma()},
         {"distances", std::move(rows)}};
  if (seed) j["seed"] = *seed;
  if (optimum)
    j["optimum"] = {{"min_length", optimum->min_length},
                    {"num_optima", optimum->num_optima},
                    {"indices", optimum->optimum_indices}};
  return j;
}

atsp::AtspInstance atsp_from_json(const json& j) {
  try {
    const int n = j.at("n_cities").get<int>();
    std::vector<std::int64_t> d;
    for (const auto& row : j.at("distances"))
      for (const auto& v : row) d.push_back(v.get<std::int64_t>());
    return atsp::AtspInstance(n, std::move(d), j.value("mu", 100.0), j.value("sigma", 0.0));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed ATSP JSON: ") + e.what());
  }
}

ParamMap parse_params(std::string_view text) {
  ParamMap out;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed parameter JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      if (value.is_number()) {
        out[key] = {value.get<double>()};
      } else if (value.is_array()) {
        std::vector<double> vals;
        for (const auto& v : value) {
          if (!v.is_number()) throw ConfigError("parameter '" + key + "' must be numeric");
          vals.push_back(v.get<double>());
        }
        out[key] = std::move(vals);
      } else {
        throw ConfigError("parameter '" + key + "' must be a number or array of numbers");
      }
    }
    return out;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value: '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    std::vector<double> vals;
    std::istringstream rest(t.substr(eq + 1));
    std::string item;
    while (std::getline(rest, item, ',')) vals.push_back(parse_number(item));
    if (key.empty() || vals.empty()) throw ConfigError("empty key or value: '" + t + "'");
    out[key] = std::move(vals);
  }
  return out;
}

ParamMap load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open parameter file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_params(buffer.str());
}

namespace {

void take_scalar(const ParamMap& params, const std::string& key, double& target) {
  const auto it = params.find(key);
  if (it == params.end()) return;
  if (it->second.size() != 1) throw ConfigError("parameter '" + key + "' must be a single value");
  target = it->second.front();
}

void take_steps(const ParamMap& params, int& steps) {
  double value = steps;
  take_scalar(params, "steps", value);
  if (value != std::round(value) || value < 1) throw ConfigError("steps must be a positive integer");
  steps = static_cast<int>(value);
}

}  // namespace

SatScheduleParams sat_params_from(const ParamMap& params, SatScheduleParams defaults) {
  take_scalar(params, "R0", defaults.r0);
  take_scalar(params, "R1", defaults.r1);
  take_scalar(params, "T0", defaults.t0);
  take_scalar(params, "T1", defaults.t1);
  take_steps(params, defaults.steps);
  return defaults;
}

AtspScheduleParams atsp_params_from(const ParamMap& params, AtspScheduleParams defaults) {
  take_scalar(params, "rho_init", defaults.rho_init);
  take_scalar(params, "rho_rate", defaults.rho_rate);
  take_scalar(params, "tau", defaults.tau);
  take_steps(params, defaults.steps);
  return defaults;
}

std::vector<std::string> parameter_names(tune::ScheduleFamily family) {
  if (family == tune::ScheduleFamily::sat) return {"R0", "R1", "T0", "T1"};
  return {"rho_init", "rho_rate", "tau"};
}

std::vector<tune::ParamRange> box_from(const ParamMap& params, tune::ScheduleFamily family) {
  std::vector<tune::ParamRange> box;
  for (const auto& name : parameter_names(family)) {
    const auto it = params.find(name);
    if (it == params.end()) throw ConfigError("box file is missing parameter '" + name + "'");
    const auto& v = it->second;
    if (v.size() == 1) {
      box.push_back({v[0], v[0], 0.04});
    } else if (v.size() == 3) {
      box.push_back({v[0], v[1], v[2]});
    } else {
      throw ConfigError("box entry '" + name + "' must be 'min, max, step' or a single value");
    }
  }
  return box;
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void put_number(json& obj, const std::string& key, double value) {
  if (std::isinf(value)) {
    obj[key] = nullptr;
    obj[key + "_infinite"] = true;
  } else {
    obj[key] = value;
  }
}

namespace {

std::string ci_cells(const std::optional<stats::MedianCI>& ci) {
  if (!ci) return ",,";
  return format_number(ci->median) + "," + format_number(ci->lo) + "," + format_number(ci->hi);
}

json ci_json(const std::optional<stats::MedianCI>& ci) {
  if (!ci) return nullptr;
  json j{{"level", ci->level}, {"lo_rank", ci->lo_rank}, {"hi_rank", ci->hi_rank}, {"coverage", ci->coverage}};
  put_number(j, "median", ci->median);
  put_number(j, "lo", ci->lo);
  put_number(j, "hi", ci->hi);
  return j;
}

json sat_params_json(const SatScheduleParams& p) {
  return {{"R0", p.r0}, {"R1", p.r1}, {"T0", p.t0}, {"T1", p.t1}, {"steps", p.steps}};
}

json atsp_params_json(const AtspScheduleParams& p) {
  return {{"rho_init", p.rho_init}, {"rho_rate", p.rho_rate}, {"tau", p.tau}, {"steps", p.steps}};
}

}  // namespace

void write_sat_scaling_csv(std::ostream& out, const std::vector<experiments::SatScalingPoint>& points) {
  out << "n,steps,instances,discarded_soluble,mean_p_min,quantum_median,quantum_lo,quantum_hi,"
         "gsat_median,gsat_lo,gsat_hi\n";
  for (const auto& p : points) {
    out << p.n_vars << ',' << p.steps << ',' << p.instances.size() << ',' << p.discarded_soluble << ','
        << format_number(p.mean_p_min) << ',' << ci_cells(p.quantum) << ',' << ci_cells(p.gsat) << "\n";
  }
}

json sat_scaling_json(const experiments::SatScalingSpec& spec, const std::vector<experiments::SatScalingPoint>& points) {
  json out{{"experiment", "sat_scaling"},
           {"master_seed", spec.master_seed},
           {"k", spec.k},
           {"density", spec.density},
           {"params", sat_params_json(spec.params)},
           {"gsat_trials", spec.gsat_trials},
           {"gsat_flip_factor", spec.gsat_flip_factor},
           {"points", json::array()}};
  for (const auto& p : points) {
    json point{{"n", p.n_vars},
               {"steps", p.steps},
               {"discarded_soluble", p.discarded_soluble},
               {"mean_p_min", p.mean_p_min},
               {"quantum", ci_json(p.quantum)},
               {"gsat", ci_json(p.gsat)},
               {"instances", json::array()}};
    for (const auto& r : p.instances) {
      json rec{{"index", r.index},
               {"seed", r.seed},
               {"clauses", r.clauses},
               {"min_conflicts", r.min_conflicts},
               {"num_minima", r.num_minima},
               {"p_min", r.p_min},
               {"gsat_total_steps", r.gsat.total_steps},
               {"gsat_successes", r.gsat.successes},
               {"gsat_trials", r.gsat.trials}};
      put_number(rec, "quantum_cost", r.quantum_cost);
      put_number(rec, "gsat_cost", r.gsat.expected_cost);
      point["instances"].push_back(std::move(rec));
    }
    out["points"].push_back(std::move(point));
  }
  return out;
}

void write_atsp_scaling_csv(std::ostream& out, const std::vector<experiments::AtspScalingPoint>& points) {
  out << "N,n_bits,rho_init,rho_rate,tau,steps,instances,mean_p_min,quantum_median,quantum_lo,quantum_hi,"
         "random_baseline,classical_estimate\n";
  for (const auto& p : points) {
    out << p.n_cities << ',' << p.n_bits << ',' << format_number(p.params.rho_init) << ','
        << format_number(p.params.rho_rate) << ',' << format_number(p.params.tau) << ',' << p.params.steps << ','
        << p.instances.size() << ',' << format_number(p.mean_p_min) << ',' << ci_cells(p.quantum) << ','
        << format_number(p.random_baseline) << ','
        << (p.classical_estimate ? format_number(*p.classical_estimate) : std::string()) << "\n";
  }
}

json atsp_scaling_json(const experiments::AtspScalingSpec& spec,
                       const std::vector<experiments::AtspScalingPoint>& points) {
  json out{{"experiment", "atsp_scaling"},
           {"master_seed", spec.master_seed},
           {"mu", spec.mu},
           {"sigma_percent", spec.sigma_percent},
           {"steps", spec.steps},
           {"points", json::array()}};
  for (const auto& p : points) {
    json point{{"N", p.n_cities},
               {"n_bits", p.n_bits},
               {"params", atsp_params_json(p.params)},
               {"mean_p_min", p.mean_p_min},
               {"quantum", ci_json(p.quantum)},
               {"random_baseline", p.random_baseline},
               {"instances", json::array()}};
    if (p.classical_estimate) point["classical_estimate"] = *p.classical_estimate;
    for (const auto& r : p.instances) {
      json rec{{"index", r.index},
               {"seed", r.seed},
               {"min_length", r.min_length},
               {"num_optima", r.num_optima},
               {"p_min", r.p_min},
               {"padding_mass", r.padding_mass},
               {"initial_expected_cost", r.initial_expected_cost},
               {"final_expected_cost", r.final_expected_cost}};
      put_number(rec, "quantum_cost", r.quantum_cost);
      point["instances"].push_back(std::move(rec));
    }
    out["points"].push_back(std::move(point));
  }
  return out;
}

void write_histogram_csv(std::ostream& out, const experiments::HistogramResult& result) {
  out << "step,cost,probability\n";
  for (std::size_t h = 0; h < result.steps.size(); ++h)
    for (const auto& [cost, mass] : result.steps[h]) out << h << ',' << format_number(cost) << ',' << format_number(mass) << "\n";
}

json histogram_json(const experiments::HistogramResult& result, std::uint64_t master_seed) {
  json out{{"experiment", result.problem + "_histogram"},
           {"master_seed", master_seed},
           {"instance_seed", result.instance_seed},
           {"min_cost", result.min_cost},
           {"bin_width", result.bin_width},
           {"p_min_by_step", result.p_min_by_step},
           {"steps", json::array()}};
  for (const auto& hist : result.steps) {
    json row = json::array();
    for (const auto& [cost, mass] : hist) row.push_back({{"cost", cost}, {"probability", mass}});
    out["steps"].push_back(std::move(row));
  }
  return out;
}

void write_tune_csv(std::ostream& out, const experiments::TuneSweepSpec& spec, const tune::TuneResult& result) {
  const auto names = parameter_names(spec.family);
  out << "index";
  for (const auto& n : names) out << ',' << n;
  out << ",objective\n";
  for (std::size_t i = 0; i < result.ledger.size(); ++i) {
    out << i;
    for (double v : result.ledger[i].params) out << ',' << format_number(v);
    out << ',' << format_number(result.ledger[i].objective) << "\n";
  }
}

json tune_json(const experiments::TuneSweepSpec& spec, const experiments::TuneSweepResult& result) {
  const auto names = parameter_names(spec.family);
  auto named = [&](const std::vector<double>& params) {
    json j = json::object();
    for (std::size_t i = 0; i < names.size() && i < params.size(); ++i) j[names[i]] = params[i];
    return j;
  };
  json box = json::object();
  for (std::size_t i = 0; i < names.size(); ++i)
    box[names[i]] = {spec.config.box[i].min, spec.config.box[i].max, spec.config.box[i].step};
  json out{{"experiment", "tune_sweep"},
           {"family", spec.family == tune::ScheduleFamily::sat ? "sat" : "atsp"},
           {"master_seed", spec.master_seed},
           {"instances", spec.num_instances},
           {"steps", spec.config.steps},
           {"refinement_rounds", spec.config.refinement_rounds},
           {"discarded_soluble", result.discarded_soluble},
           {"box", box},
           {"points", json::array()},
           {"best", named(result.result.best)},
           {"objective", result.result.objective}};
  for (const auto& p : result.result.ledger)
    out["points"].push_back({{"params", named(p.params)}, {"objective", p.objective}});
  return out;
}

}  // namespace qopt::io
