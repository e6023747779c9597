#include "qopt/state_vector.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qopt/errors.hpp"

namespace qopt {

namespace {

std::atomic<int> g_max_bits{kDefaultMaxBits};

Amplitude unit_phase(double angle_over_pi) {
  const double angle = std::numbers::pi * angle_over_pi;
  return {std::cos(angle), std::sin(angle)};
}

std::vector<Amplitude> bit_count_table(int n_bits, const DiagonalSpec& spec, double scale) {
  std::vector<Amplitude> table(static_cast<std::size_t>(n_bits) + 1);
  for (int b = 0; b <= n_bits; ++b) table[b] = scale * spec.phase(b);
  return table;
}

void scaled_mixing(StateVector& state, std::span<const Amplitude> table) {
  auto amps = state.amplitudes();
  fwht_unnormalized(amps);
  for (std::size_t s = 0; s < amps.size(); ++s) amps[s] *= table[std::popcount(s)];
  fwht_unnormalized(amps);
}

}  // namespace

int max_bits() { return g_max_bits.load(); }

void set_max_bits(int bits) {
  if (bits < 1 || bits > kHardMaxBits)
    throw SizeError("memory cap must be between 1 and " + std::to_string(kHardMaxBits) + " bits");
  g_max_bits.store(bits);
}

void check_bits(int n_bits) {
  if (n_bits < 1 || n_bits > max_bits())
    throw SizeError("state of " + std::to_string(n_bits) + " bits outside supported range [1, " +
                    std::to_string(max_bits()) + "]");
}

StateVector::StateVector(int n_bits, std::vector<Amplitude> amplitudes)
    : n_bits_(n_bits), amps_(std::move(amplitudes)) {
  check_bits(n_bits);
  if (amps_.size() != (std::size_t{1} << n_bits))
    throw ArgumentError("amplitude count does not equal 2^n_bits");
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t s = 0; s < amps_.size(); ++s) p[s] = std::norm(amps_[s]);
  return p;
}

StateVector StateVector::basis(int n_bits, std::uint64_t index) {
  check_bits(n_bits);
  std::vector<Amplitude> amps(std::size_t{1} << n_bits);
  if (index >= amps.size()) throw RangeError("basis index out of range");
  amps[index] = 1.0;
  return StateVector(n_bits, std::move(amps));
}

StateVector uniform_state(int n_bits) {
  check_bits(n_bits);
  // sqrt is correctly rounded, so this is exact for even n.
  const double value = std::sqrt(std::ldexp(1.0, -n_bits));
  return StateVector(n_bits, std::vector<Amplitude>(std::size_t{1} << n_bits, Amplitude(value, 0.0)));
}

DiagonalSpec DiagonalSpec::exp_linear(double coefficient, DiagonalBasis basis) {
  return DiagonalSpec{ExpLinear{coefficient}, basis};
}

DiagonalSpec DiagonalSpec::explicit_values(std::map<std::int64_t, Amplitude> values, DiagonalBasis basis) {
  for (const auto& [key, v] : values) {
    if (std::abs(std::abs(v) - 1.0) > 1e-12)
      throw ConfigError("explicit diagonal value for key " + std::to_string(key) + " is not unit modulus");
  }
  return DiagonalSpec{Explicit{std::move(values)}, basis};
}

Amplitude DiagonalSpec::phase(double key) const {
  if (const auto* lin = std::get_if<ExpLinear>(&kind)) return unit_phase(lin->coefficient * key);
  const auto& table = std::get<Explicit>(kind).values;
  const double rounded = std::round(key);
  if (rounded != key) throw ConfigError("explicit diagonal requires integer keys");
  const auto it = table.find(static_cast<std::int64_t>(rounded));
  if (it == table.end())
    throw ConfigError("explicit diagonal has no value for key " + std::to_string(static_cast<std::int64_t>(rounded)));
  return it->second;
}

void fwht_unnormalized(std::span<Amplitude> data) {
  const std::size_t len = data.size();
  for (std::size_t h = 1; h < len; h *= 2) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const Amplitude x = data[j];
        const Amplitude y = data[j + h];
        data[j] = x + y;
        data[j + h] = x - y;
      }
    }
  }
}

void walsh_transform(StateVector& state) {
  auto amps = state.amplitudes();
  fwht_unnormalized(amps);
  const double scale = 1.0 / std::sqrt(static_cast<double>(amps.size()));
  for (auto& a : amps) a *= scale;
}

void apply_diagonal(StateVector& state, const DiagonalSpec& spec, std::span<const double> cost_keys) {
  auto amps = state.amplitudes();
  if (spec.basis == DiagonalBasis::bit_count) {
    const auto table = bit_count_table(state.n_bits(), spec, 1.0);
    for (std::size_t s = 0; s < amps.size(); ++s) amps[s] *= table[std::popcount(s)];
    return;
  }
  if (cost_keys.size() != amps.size()) throw ArgumentError("cost key count does not match state dimension");
  if (const auto* lin = std::get_if<DiagonalSpec::ExpLinear>(&spec.kind)) {
    if (lin->coefficient == 0.0) return;
    for (std::size_t s = 0; s < amps.size(); ++s) amps[s] *= unit_phase(lin->coefficient * cost_keys[s]);
    return;
  }
  for (std::size_t s = 0; s < amps.size(); ++s) amps[s] *= spec.phase(cost_keys[s]);
}

void apply_mixing(StateVector& state, double tau) {
  // exp(i pi tau |s|) factors over bits, so W T W is the tensor power of
  // H diag(1, e^{i pi tau}) H = [[a, b], [b, a]].
  const Amplitude e = unit_phase(tau);
  const Amplitude a = 0.5 * (1.0 + e);
  const Amplitude b = 0.5 * (1.0 - e);
  auto amps = state.amplitudes();
  const std::size_t len = amps.size();
  for (std::size_t h = 1; h < len; h *= 2) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const Amplitude x = amps[j];
        const Amplitude y = amps[j + h];
        amps[j] = a * x + b * y;
        amps[j + h] = b * x + a * y;
      }
    }
  }
}

void apply_mixing(StateVector& state, const DiagonalSpec& bit_count_diagonal) {
  if (bit_count_diagonal.basis != DiagonalBasis::bit_count)
    throw ConfigError("mixing diagonal must be keyed by bit count");
  const double scale = std::ldexp(1.0, -state.n_bits());
  const auto table = bit_count_table(state.n_bits(), bit_count_diagonal, scale);
  scaled_mixing(state, table);
}

}  // namespace qopt
