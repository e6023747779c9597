// qopt: generate instances, run experiments, tune phase parameters.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qopt/atsp.hpp"
#include "qopt/errors.hpp"
#include "qopt/experiments.hpp"
#include "qopt/io.hpp"
#include "qopt/sat.hpp"
#include "qopt/state_vector.hpp"
#include "qopt/stats.hpp"

namespace {

using namespace qopt;

constexpr int kExitConfig = 2;
constexpr int kExitSize = 3;

struct Common {
  std::uint64_t seed = 1;
  int instances = 100;
  std::optional<int> steps;
  std::string params_file;
  std::string out = "-";
  std::string format = "csv";
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--instances", c.instances, "Instances per point")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", c.steps, "Steps per trial")->check(CLI::PositiveNumber);
  cmd->add_option("--params", c.params_file, "Parameter file (key = value or JSON)");
  cmd->add_option("--out", c.out, "Output path, '-' for stdout");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", c.threads, "Worker threads");
}

// Single writer: collects everything, then writes once.
void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path);
  out << text;
}

io::ParamMap params_or_empty(const std::string& path) {
  return path.empty() ? io::ParamMap{} : io::load_params(path);
}

void apply_memory_cap() {
  if (const char* cap = std::getenv("QOPT_MAX_BITS")) {
    try {
      set_max_bits(std::stoi(cap));
    } catch (const std::invalid_argument&) {
      throw ConfigError("QOPT_MAX_BITS must be an integer");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum cost-shifting heuristic simulator for k-SAT and ATSP"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random problem instance");
  gen->require_subcommand(1);
  std::uint64_t gen_seed = 1;
  std::string gen_out = "-";
  std::string gen_format;

  auto* gen_sat = gen->add_subcommand("sat", "Random k-SAT (DIMACS or JSON)");
  int sat_vars = 20, sat_k = 3;
  std::optional<int> sat_clauses;
  double sat_density = 4.0;
  bool sat_insoluble = false;
  gen_sat->add_option("--vars", sat_vars, "Variables")->check(CLI::PositiveNumber);
  gen_sat->add_option("--k", sat_k, "Literals per clause")->check(CLI::PositiveNumber);
  gen_sat->add_option("--clauses", sat_clauses, "Clause count (default round(density * vars))");
  gen_sat->add_option("--density", sat_density, "Clauses per variable");
  gen_sat->add_flag("--insoluble", sat_insoluble, "Redraw until the instance has no solution");

  auto* gen_atsp = gen->add_subcommand("atsp", "Random ATSP (TSPLIB or JSON)");
  int atsp_cities = 6;
  double atsp_mu = 100.0, atsp_sigma_percent = 40.0;
  bool atsp_clamp = false;
  gen_atsp->add_option("--cities", atsp_cities, "City count")->check(CLI::Range(3, 20));
  gen_atsp->add_option("--mu", atsp_mu, "Mean distance");
  gen_atsp->add_option("--sigma-percent", atsp_sigma_percent, "Standard deviation as % of mu");
  gen_atsp->add_flag("--clamp", atsp_clamp, "Clamp negative distances to 0");

  for (auto* cmd : {gen_sat, gen_atsp}) {
    cmd->add_option("--seed", gen_seed, "Seed");
    cmd->add_option("--out", gen_out, "Output path, '-' for stdout");
  }
  gen_sat->add_option("--format", gen_format, "dimacs or json")->check(CLI::IsMember({"dimacs", "json"}));
  gen_atsp->add_option("--format", gen_format, "tsplib or json")->check(CLI::IsMember({"tsplib", "json"}));

  // run
  auto* run = app.add_subcommand("run", "Run an experiment");
  run->require_subcommand(1);
  Common rc;
  std::vector<int> sizes{8, 10, 12};
  double run_density = 4.0;
  int run_k = 3, gsat_trials = 1000;
  std::vector<int> cities{6, 7};
  int sigma_percent = 40;
  double run_mu = 100.0;
  std::optional<std::int64_t> subproblems;
  int hist_vars = 20, hist_cities = 6, instance_index = 0;
  double bin_width = 0.05;

  auto* run_sat = run->add_subcommand("sat-scaling", "Median E[C] vs n for the quantum heuristic and GSAT");
  run_sat->add_option("--sizes", sizes, "Variable counts")->delimiter(',');
  run_sat->add_option("--density", run_density, "Clauses per variable (4 or 6 select built-in parameters)");
  run_sat->add_option("--k", run_k, "Literals per clause");
  run_sat->add_option("--gsat-trials", gsat_trials, "GSAT tries per instance")->check(CLI::PositiveNumber);

  auto* run_atsp = run->add_subcommand("atsp-scaling", "Median steps/P_min vs N");
  run_atsp->add_option("--cities", cities, "City counts")->delimiter(',');
  run_atsp->add_option("--subproblems", subproblems, "Branch-and-bound subproblem count b for the classical estimate");

  auto* run_sat_hist = run->add_subcommand("sat-histogram", "Per-step conflict histograms for one insoluble instance");
  run_sat_hist->add_option("--vars", hist_vars, "Variables");
  run_sat_hist->add_option("--density", run_density, "Clauses per variable");
  run_sat_hist->add_option("--k", run_k, "Literals per clause");

  auto* run_atsp_hist = run->add_subcommand("atsp-histogram", "Per-step scaled-length histograms for one instance");
  run_atsp_hist->add_option("--cities", hist_cities, "City count");
  run_atsp_hist->add_option("--bin-width", bin_width, "Histogram bin width in scaled length");

  for (auto* cmd : {run_atsp, run_atsp_hist}) {
    cmd->add_option("--sigma-percent", sigma_percent, "Standard deviation as % of mu");
    cmd->add_option("--mu", run_mu, "Mean distance");
  }
  for (auto* cmd : {run_sat_hist, run_atsp_hist}) cmd->add_option("--instance", instance_index, "Instance index");
  for (auto* cmd : {run_sat, run_atsp, run_sat_hist, run_atsp_hist}) add_common(cmd, rc);

  // tune
  auto* tune_cmd = app.add_subcommand("tune", "Grid search over phase parameters");
  Common tc;
  add_common(tune_cmd, tc);
  std::string family = "atsp", box_file;
  int refine = 2, tune_vars = 10, tune_cities = 6;
  double tune_density = 4.0;
  tune_cmd->add_option("--family", family, "Schedule family")->check(CLI::IsMember({"sat", "atsp"}));
  tune_cmd->add_option("--box", box_file, "Box file: name = min, max, step per parameter")->required();
  tune_cmd->add_option("--refine", refine, "Refinement rounds at halved steps");
  tune_cmd->add_option("--vars", tune_vars, "SAT variables");
  tune_cmd->add_option("--density", tune_density, "SAT clauses per variable");
  tune_cmd->add_option("--cities", tune_cities, "ATSP cities");
  tune_cmd->add_option("--sigma-percent", sigma_percent, "ATSP standard deviation as % of mu");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Median with order-statistic confidence interval");
  std::string stats_input = "-";
  double level = 0.95;
  stats_cmd->add_option("--input", stats_input, "One number per line ('inf' allowed), '-' for stdin");
  stats_cmd->add_option("--level", level, "Confidence level");

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Classical branch-and-bound and random-selection cost estimates");
  int est_cities = 7;
  std::int64_t est_b = 0;
  estimate_cmd->add_option("--cities", est_cities, "City count")->required();
  estimate_cmd->add_option("--subproblems", est_b, "Subproblems expanded (b)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    apply_memory_cap();

    if (gen->parsed()) {
      std::ostringstream text;
      if (gen_sat->parsed()) {
        const int m = sat_clauses.value_or(static_cast<int>(std::lround(sat_density * sat_vars)));
        std::uint64_t attempt = 0;
        for (;; ++attempt) {
          Rng rng(gen_seed, attempt);
          auto instance = sat::generate_random_ksat(sat_vars, sat_k, m, rng);
          std::optional<sat::SatOracleResult> oracle;
          if (sat_insoluble || sat_vars <= 24) oracle = sat::exhaustive_min_conflicts(instance);
          if (sat_insoluble && oracle->soluble()) {
            if (attempt > 100000) throw ConfigError("no insoluble instance found");
            continue;
          }
          if (gen_format == "json") {
            auto j = io::sat_to_json(instance, gen_seed, oracle);
            j["stream"] = attempt;
            text << j.dump(2) << "\n";
          } else {
            io::write_dimacs(text, instance, gen_seed);
          }
          break;
        }
      } else {
        Rng rng(gen_seed);
        const auto instance =
            atsp::generate_atsp(atsp_cities, atsp_mu, atsp_mu * atsp_sigma_percent / 100.0, rng, atsp_clamp);
        if (gen_format == "json") {
          std::optional<atsp::AtspOptimum> opt;
          if (atsp_cities <= atsp::kMaxBruteForceCities) opt = atsp::brute_force_optimum(instance);
          text << io::atsp_to_json(instance, gen_seed, opt).dump(2) << "\n";
        } else {
          io::write_tsplib(text, instance, "atsp" + std::to_string(atsp_cities), gen_seed);
        }
      }
      emit(gen_out, text.str());
      return 0;
    }

    if (run->parsed()) {
      const auto params = params_or_empty(rc.params_file);
      std::ostringstream text;
      if (run_sat->parsed()) {
        experiments::SatScalingSpec spec;
        spec.sizes = sizes;
        spec.k = run_k;
        spec.density = run_density;
        spec.params = io::sat_params_from(
            params, run_density == 6.0 ? experiments::kSatParamsDensity6 : experiments::kSatParamsDensity4);
        spec.steps = rc.steps;
        spec.num_instances = rc.instances;
        spec.gsat_trials = gsat_trials;
        spec.master_seed = rc.seed;
        spec.threads = rc.threads;
        const auto points = experiments::run_sat_scaling(spec);
        if (rc.format == "json") {
          text << io::sat_scaling_json(spec, points).dump(2) << "\n";
        } else {
          io::write_sat_scaling_csv(text, points);
        }
      } else if (run_atsp->parsed()) {
        experiments::AtspScalingSpec spec;
        spec.cities = cities;
        spec.mu = run_mu;
        spec.sigma_percent = sigma_percent;
        if (!params.empty()) spec.params = io::atsp_params_from(params, experiments::scaling_parameters(7, 40));
        spec.steps = rc.steps.value_or(20);
        spec.num_instances = rc.instances;
        spec.master_seed = rc.seed;
        spec.threads = rc.threads;
        spec.subproblems = subproblems;
        const auto points = experiments::run_atsp_scaling(spec);
        if (rc.format == "json") {
          text << io::atsp_scaling_json(spec, points).dump(2) << "\n";
        } else {
          io::write_atsp_scaling_csv(text, points);
        }
      } else {
        experiments::HistogramSpec spec;
        spec.instance_index = instance_index;
        spec.master_seed = rc.seed;
        if (run_sat_hist->parsed()) {
          spec.problem = experiments::HistogramSpec::Problem::sat;
          spec.n_vars = hist_vars;
          spec.k = run_k;
          spec.density = run_density;
          spec.sat_params = io::sat_params_from(
              params, run_density == 6.0 ? experiments::kSatParamsDensity6 : experiments::kSatParamsDensity4);
          spec.steps = rc.steps.value_or(hist_vars);
        } else {
          spec.problem = experiments::HistogramSpec::Problem::atsp;
          spec.n_cities = hist_cities;
          spec.mu = run_mu;
          spec.sigma_percent = sigma_percent;
          spec.bin_width = bin_width;
          if (!params.empty())
            spec.atsp_params =
                io::atsp_params_from(params, experiments::scaling_parameters(hist_cities, sigma_percent));
          spec.steps = rc.steps.value_or(20);
        }
        const auto result = experiments::run_histogram(spec);
        if (rc.format == "json") {
          text << io::histogram_json(result, rc.seed).dump(2) << "\n";
        } else {
          io::write_histogram_csv(text, result);
        }
      }
      emit(rc.out, text.str());
      return 0;
    }

    if (tune_cmd->parsed()) {
      experiments::TuneSweepSpec spec;
      spec.family = family == "sat" ? tune::ScheduleFamily::sat : tune::ScheduleFamily::atsp;
      spec.n_vars = tune_vars;
      spec.density = tune_density;
      spec.n_cities = tune_cities;
      spec.sigma_percent = sigma_percent;
      spec.num_instances = tc.instances;
      spec.master_seed = tc.seed;
      spec.config.box = io::box_from(io::load_params(box_file), spec.family);
      spec.config.steps = tc.steps.value_or(spec.family == tune::ScheduleFamily::sat ? tune_vars : 20);
      spec.config.refinement_rounds = refine;
      spec.config.threads = tc.threads;
      const auto result = experiments::run_tune_sweep(spec);
      std::ostringstream text;
      if (tc.format == "json") {
        text << io::tune_json(spec, result).dump(2) << "\n";
      } else {
        io::write_tune_csv(text, spec, result.result);
      }
      emit(tc.out, text.str());
      return 0;
    }

    if (stats_cmd->parsed()) {
      std::vector<double> values;
      auto read_all = [&](std::istream& in) {
        std::string token;
        while (in >> token) {
          if (token.front() == '#') {
            in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
            continue;
          }
          values.push_back(io::parse_number(token));
        }
      };
      if (stats_input == "-") {
        read_all(std::cin);
      } else {
        std::ifstream in(stats_input);
        if (!in) throw ConfigError("cannot open " + stats_input);
        read_all(in);
      }
      const auto ci = stats::median_ci(values, level);
      std::cout << "n,median,lo,hi,lo_rank,hi_rank,coverage\n"
                << values.size() << ',' << io::format_number(ci.median) << ',' << io::format_number(ci.lo) << ','
                << io::format_number(ci.hi) << ',' << ci.lo_rank << ',' << ci.hi_rank << ','
                << io::format_number(ci.coverage) << "\n";
      return 0;
    }

    if (estimate_cmd->parsed()) {
      std::cout << "N,subproblems,classical_estimate,random_baseline\n"
                << est_cities << ',' << est_b << ','
                << io::format_number(atsp::classical_cost_estimate(est_cities, est_b)) << ','
                << io::format_number(atsp::random_selection_cost(est_cities)) << "\n";
      return 0;
    }
  } catch (const SizeError& e) {
    std::cerr << "size error: " << e.what() << "\n";
    return kExitSize;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
