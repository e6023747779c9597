#include "qopt/tune.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "qopt/errors.hpp"
#include "qopt/parallel.hpp"
#include "qopt/state_vector.hpp"

namespace qopt::tune {

std::size_t parameter_count(ScheduleFamily family) { return family == ScheduleFamily::sat ? 4 : 3; }

Schedule make_schedule(ScheduleFamily family, std::span<const double> params, int steps) {
  if (params.size() != parameter_count(family)) throw ConfigError("wrong number of schedule parameters");
  if (family == ScheduleFamily::sat) return sat_schedule({params[0], params[1], params[2], params[3], steps});
  return atsp_schedule({params[0], params[1], params[2], steps});
}

double mean_p_min(std::span<const TuneInstance> sample, const Schedule& schedule) {
  if (sample.empty()) throw ConfigError("tuning sample is empty");
  double total = 0.0;
  for (const auto& inst : sample) {
    const auto state = evolve(inst.n_bits, inst.costs, schedule);
    total += p_min(state, inst.costs, inst.min_cost);
  }
  return total / static_cast<double>(sample.size());
}

namespace {

// Grid coordinates are snapped to 1e-9 so that e.g. 0.2 + 3*0.04 lands on the
// same double as a literal 0.32.
double snap(double x) { return std::round(x * 1e9) / 1e9; }

std::vector<double> axis_values(const ParamRange& r) {
  std::vector<double> values;
  const auto count = static_cast<long>(std::floor((r.max - r.min) / r.step + 1e-9));
  for (long i = 0; i <= count; ++i) values.push_back(snap(r.min + static_cast<double>(i) * r.step));
  return values;
}

bool better(double obj, const std::vector<double>& params, double best_obj, const std::vector<double>& best) {
  if (obj != best_obj) return obj > best_obj;
  return params < best;
}

class Evaluator {
 public:
  Evaluator(std::span<const TuneInstance> sample, ScheduleFamily family, int steps)
      : sample_(sample), family_(family), steps_(steps) {}

  double objective(const std::vector<double>& params) const {
    return mean_p_min(sample_, make_schedule(family_, params, steps_));
  }

  // Evaluates all uncached points (possibly in parallel) and records them in order.
  void evaluate(const std::vector<std::vector<double>>& points, unsigned threads, TuneResult& result) {
    std::vector<std::vector<double>> fresh;
    for (const auto& p : points)
      if (!cache_.contains(p) && std::find(fresh.begin(), fresh.end(), p) == fresh.end()) fresh.push_back(p);
    std::vector<double> values(fresh.size());
    parallel_for(fresh.size(), threads, [&](std::size_t i) { values[i] = objective(fresh[i]); });
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      cache_[fresh[i]] = values[i];
      result.ledger.push_back({fresh[i], values[i]});
    }
  }

  double cached(const std::vector<double>& p) const { return cache_.at(p); }

 private:
  std::span<const TuneInstance> sample_;
  ScheduleFamily family_;
  int steps_;
  std::map<std::vector<double>, double> cache_;
};

}  // namespace

TuneResult tune_parameters(const TuneConfig& config, std::span<const TuneInstance> sample, ScheduleFamily family) {
  if (sample.empty()) throw ConfigError("tuning sample is empty");
  if (config.box.size() != parameter_count(family))
    throw ConfigError("parameter box has " + std::to_string(config.box.size()) + " dimensions, expected " +
                      std::to_string(parameter_count(family)));
  for (const auto& r : config.box) {
    if (!(r.step > 0.0)) throw ConfigError("grid step must be positive");
    if (r.min > r.max) throw ConfigError("parameter range is empty");
  }
  if (config.steps < 1) throw ConfigError("step count must be >= 1");
  if (config.refinement_rounds < 0) throw ConfigError("refinement rounds must be >= 0");

  std::vector<std::vector<double>> axes;
  for (const auto& r : config.box) axes.push_back(axis_values(r));
  std::vector<std::vector<double>> grid{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : grid) {
      for (double v : axis) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    grid = std::move(next);
  }

  TuneResult result;
  Evaluator eval(sample, family, config.steps);
  eval.evaluate(grid, config.threads, result);
  result.best = grid.front();
  result.objective = eval.cached(grid.front());
  for (const auto& p : grid) {
    const double obj = eval.cached(p);
    if (better(obj, p, result.objective, result.best)) {
      result.best = p;
      result.objective = obj;
    }
  }

  std::vector<double> step_sizes;
  for (const auto& r : config.box) step_sizes.push_back(r.step);
  for (int round = 0; round < config.refinement_rounds; ++round) {
    for (auto& s : step_sizes) s /= 2.0;
    for (int pass = 0; pass < 32; ++pass) {
      bool moved = false;
      for (std::size_t dim = 0; dim < config.box.size(); ++dim) {
        std::vector<std::vector<double>> candidates;
        for (double sign : {-1.0, 1.0}) {
          auto p = result.best;
          p[dim] = snap(std::clamp(p[dim] + sign * step_sizes[dim], config.box[dim].min, config.box[dim].max));
          if (p != result.best) candidates.push_back(std::move(p));
        }
        eval.evaluate(candidates, config.threads, result);
        for (const auto& p : candidates) {
          const double obj = eval.cached(p);
          if (better(obj, p, result.objective, result.best)) {
            result.best = p;
            result.objective = obj;
            moved = true;
          }
        }
      }
      if (!moved) break;
    }
  }
  return result;
}

NeighborhoodTable::NeighborhoodTable(int n_bits, int max_cost)
    : n_bits_(n_bits),
      max_cost_(max_cost),
      nu_(static_cast<std::size_t>(max_cost + 1) * (n_bits + 1) * (max_cost + 1), 0.0),
      state_counts_(static_cast<std::size_t>(max_cost + 1), 0.0) {
  if (n_bits < 1) throw ArgumentError("neighborhood table needs n_bits >= 1");
  if (max_cost < 0) throw ArgumentError("cost cap must be non-negative");
}

std::size_t NeighborhoodTable::index(int from_cost, int distance, int to_cost) const {
  if (from_cost < 0 || from_cost > max_cost_ || to_cost < 0 || to_cost > max_cost_ || distance < 0 ||
      distance > n_bits_)
    throw RangeError("neighborhood table index out of range");
  return (static_cast<std::size_t>(from_cost) * (n_bits_ + 1) + static_cast<std::size_t>(distance)) *
             static_cast<std::size_t>(max_cost_ + 1) +
         static_cast<std::size_t>(to_cost);
}

double& NeighborhoodTable::nu(int from_cost, int distance, int to_cost) {
  return nu_[index(from_cost, distance, to_cost)];
}

double NeighborhoodTable::nu(int from_cost, int distance, int to_cost) const {
  return nu_[index(from_cost, distance, to_cost)];
}

double NeighborhoodTable::row_sum(int from_cost, int distance) const {
  double total = 0.0;
  for (int c = 0; c <= max_cost_; ++c) total += nu(from_cost, distance, c);
  return total;
}

namespace {

std::vector<int> cost_classes(const std::vector<double>& costs, int n_bits, int max_cost) {
  if (costs.size() != (std::size_t{1} << n_bits)) throw ArgumentError("cost vector length does not equal 2^n_bits");
  std::vector<int> classes(costs.size());
  for (std::size_t s = 0; s < costs.size(); ++s) {
    const double c = costs[s];
    if (c < 0.0 || std::round(c) != c) throw ArgumentError("neighborhood tables need non-negative integer costs");
    classes[s] = std::min(static_cast<int>(c), max_cost);
  }
  return classes;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Converts pooled pair counts and per-class state totals into nu rows.
void finish_table(NeighborhoodTable& table, const std::vector<double>& pair_counts, const std::vector<double>& row_totals,
                  std::size_t instances) {
  const int n = table.n_bits();
  const int costs = table.num_costs();
  for (int from = 0; from < costs; ++from) {
    for (int d = 0; d <= n; ++d) {
      const std::size_t row = static_cast<std::size_t>(from) * (n + 1) + static_cast<std::size_t>(d);
      const double total = row_totals[row];
      if (total <= 0.0) continue;
      double mass = 0.0;
      for (int to = 0; to < costs; ++to) mass += pair_counts[row * costs + static_cast<std::size_t>(to)];
      const double scale = mass > 0.0 ? binomial(n, d) / mass : 0.0;
      for (int to = 0; to < costs; ++to) table.nu(from, d, to) = pair_counts[row * costs + static_cast<std::size_t>(to)] * scale;
    }
  }
  for (int c = 0; c < costs; ++c) table.state_count(c) /= static_cast<double>(instances);
}

}  // namespace

NeighborhoodTable exhaustive_neighborhood_table(std::span<const std::vector<double>> cost_vectors, int n_bits,
                                                int max_cost) {
  if (cost_vectors.empty()) throw ArgumentError("neighborhood table needs at least one instance");
  check_bits(n_bits);
  NeighborhoodTable table(n_bits, max_cost);
  const int costs = table.num_costs();
  const std::size_t size = std::size_t{1} << n_bits;
  std::vector<double> pair_counts(static_cast<std::size_t>(costs) * (n_bits + 1) * costs, 0.0);
  std::vector<double> row_totals(static_cast<std::size_t>(costs) * (n_bits + 1), 0.0);

  for (const auto& cv : cost_vectors) {
    const auto classes = cost_classes(cv, n_bits, max_cost);
    // Walsh transforms of each class indicator; the XOR-correlation
    // h(x) = sum_s f(s) g(s ^ x) becomes F*G in the Walsh domain.
    std::vector<std::vector<Amplitude>> spectra(static_cast<std::size_t>(costs));
    std::vector<double> counts(static_cast<std::size_t>(costs), 0.0);
    for (int c = 0; c < costs; ++c) spectra[c].assign(size, 0.0);
    for (std::size_t s = 0; s < size; ++s) {
      spectra[classes[s]][s] = 1.0;
      counts[classes[s]] += 1.0;
    }
    for (int c = 0; c < costs; ++c) {
      table.state_count(c) += counts[c];
      if (counts[c] > 0.0) fwht_unnormalized(spectra[c]);
    }
    std::vector<Amplitude> product(size);
    for (int from = 0; from < costs; ++from) {
      if (counts[from] == 0.0) continue;
      for (int d = 0; d <= n_bits; ++d)
        row_totals[static_cast<std::size_t>(from) * (n_bits + 1) + d] += counts[from];
      for (int to = 0; to < costs; ++to) {
        if (counts[to] == 0.0) continue;
        for (std::size_t x = 0; x < size; ++x) product[x] = spectra[from][x] * spectra[to][x];
        fwht_unnormalized(product);
        for (std::size_t x = 0; x < size; ++x) {
          const double pairs = std::round(product[x].real() / static_cast<double>(size));
          const int d = std::popcount(x);
          pair_counts[(static_cast<std::size_t>(from) * (n_bits + 1) + d) * costs + to] += pairs;
        }
      }
    }
  }
  finish_table(table, pair_counts, row_totals, cost_vectors.size());
  return table;
}

NeighborhoodTable estimate_neighborhood_table(std::span<const std::vector<double>> cost_vectors, int n_bits,
                                              int max_cost, Rng& rng, std::uint64_t samples_per_instance) {
  if (samples_per_instance == 0) return exhaustive_neighborhood_table(cost_vectors, n_bits, max_cost);
  if (cost_vectors.empty()) throw ArgumentError("neighborhood table needs at least one instance");
  NeighborhoodTable table(n_bits, max_cost);
  const int costs = table.num_costs();
  const std::size_t size = std::size_t{1} << n_bits;
  std::vector<double> pair_counts(static_cast<std::size_t>(costs) * (n_bits + 1) * costs, 0.0);
  std::vector<double> row_totals(static_cast<std::size_t>(costs) * (n_bits + 1), 0.0);
  std::vector<int> bits(static_cast<std::size_t>(n_bits));

  for (const auto& cv : cost_vectors) {
    const auto classes = cost_classes(cv, n_bits, max_cost);
    for (std::size_t s = 0; s < size; ++s) table.state_count(classes[s]) += 1.0;
    for (std::uint64_t k = 0; k < samples_per_instance; ++k) {
      const std::uint64_t s = rng.below(size);
      const int from = classes[s];
      for (int d = 0; d <= n_bits; ++d) {
        for (int i = 0; i < n_bits; ++i) bits[i] = i;
        std::uint64_t mask = 0;
        for (int i = 0; i < d; ++i) {
          const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_bits - i)));
          std::swap(bits[i], bits[j]);
          mask |= std::uint64_t{1} << bits[i];
        }
        const std::size_t row = static_cast<std::size_t>(from) * (n_bits + 1) + static_cast<std::size_t>(d);
        pair_counts[row * costs + static_cast<std::size_t>(classes[s ^ mask])] += 1.0;
        row_totals[row] += 1.0;
      }
    }
  }
  finish_table(table, pair_counts, row_totals, cost_vectors.size());
  return table;
}

std::vector<std::complex<double>> mixing_elements(int n_bits, double tau) {
  // One bit: H diag(1, e^{i pi tau}) H = [[a, b], [b, a]].
  const std::complex<double> e = std::polar(1.0, std::numbers::pi * tau);
  const std::complex<double> a = 0.5 * (1.0 + e);
  const std::complex<double> b = 0.5 * (1.0 - e);
  std::vector<std::complex<double>> u(static_cast<std::size_t>(n_bits) + 1);
  for (int d = 0; d <= n_bits; ++d) u[d] = std::pow(a, n_bits - d) * std::pow(b, d);
  return u;
}

AmplitudeEvolution mean_amplitude_evolution(const NeighborhoodTable& table, const Schedule& schedule,
                                            std::span<const std::complex<double>> initial, bool renormalize) {
  const int n = table.n_bits();
  const int costs = table.num_costs();
  std::vector<std::complex<double>> phi;
  if (initial.empty()) {
    phi.assign(static_cast<std::size_t>(costs), std::sqrt(std::ldexp(1.0, -n)));
  } else {
    if (static_cast<int>(initial.size()) != costs) throw ArgumentError("initial amplitudes do not match cost classes");
    phi.assign(initial.begin(), initial.end());
  }

  auto total = [&](const std::vector<std::complex<double>>& v) {
    double t = 0.0;
    for (int c = 0; c < costs; ++c) t += table.state_count(c) * std::norm(v[c]);
    return t;
  };

  AmplitudeEvolution out;
  out.phi.push_back(phi);
  out.total_probability.push_back(total(phi));
  for (const auto& step : schedule.entries()) {
    const auto u = mixing_elements(n, step.tau);
    std::vector<std::complex<double>> phased(static_cast<std::size_t>(costs));
    for (int c = 0; c < costs; ++c) phased[c] = std::polar(1.0, std::numbers::pi * step.rho * c) * phi[c];
    std::vector<std::complex<double>> next(static_cast<std::size_t>(costs), 0.0);
    for (int to = 0; to < costs; ++to) {
      std::complex<double> acc = 0.0;
      for (int d = 0; d <= n; ++d) {
        std::complex<double> inner = 0.0;
        for (int c = 0; c < costs; ++c) inner += phased[c] * table.nu(to, d, c);
        acc += u[d] * inner;
      }
      next[to] = acc;
    }
    double t = total(next);
    if (renormalize && t > 0.0) {
      const double scale = 1.0 / std::sqrt(t);
      for (auto& v : next) v *= scale;
      t = 1.0;
    }
    phi = std::move(next);
    out.phi.push_back(phi);
    out.total_probability.push_back(t);
  }
  return out;
}

std::vector<double> predicted_histogram(const NeighborhoodTable& table, std::span<const std::complex<double>> phi) {
  if (static_cast<int>(phi.size()) != table.num_costs()) throw ArgumentError("amplitudes do not match cost classes");
  std::vector<double> hist(phi.size());
  for (std::size_t c = 0; c < phi.size(); ++c) hist[c] = table.state_count(static_cast<int>(c)) * std::norm(phi[c]);
  return hist;
}

}  // namespace qopt::tune
