#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <variant>
#include <vector>

namespace qopt {

using Amplitude = std::complex<double>;

/// Upper bound on qubit count accepted by state construction and the dense
/// cost builders. Defaults to 24 (16M amplitudes, 256 MB); can be raised up to
/// kHardMaxBits, e.g. from the QOPT_MAX_BITS environment variable in the CLI.
int max_bits();
void set_max_bits(int bits);
inline constexpr int kDefaultMaxBits = 24;
inline constexpr int kHardMaxBits = 34;

/// Throws SizeError unless 1 <= n_bits <= max_bits().
void check_bits(int n_bits);

/// Dense state over 2^n basis states. Bit i of a basis index is variable i+1
/// for SAT and bit i of the tour rank for ATSP (little-endian).
class StateVector {
 public:
  StateVector(int n_bits, std::vector<Amplitude> amplitudes);

  int n_bits() const { return n_bits_; }
  std::size_t size() const { return amps_.size(); }

  std::span<Amplitude> amplitudes() { return amps_; }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  Amplitude& operator[](std::size_t s) { return amps_[s]; }
  const Amplitude& operator[](std::size_t s) const { return amps_[s]; }

  double norm_squared() const;
  /// |psi_s|^2 for every s.
  std::vector<double> probabilities() const;

  static StateVector basis(int n_bits, std::uint64_t index);

 private:
  int n_bits_;
  std::vector<Amplitude> amps_;
};

StateVector uniform_state(int n_bits);

enum class DiagonalBasis { cost, bit_count };

/// Diagonal unitary whose entry for state s depends on a key: the state's
/// cost or its number of 1-bits. ExpLinear with coefficient x gives
/// exp(i*pi*x*key); Explicit lists unit-modulus values for integer keys and
/// covers operators outside that family (e.g. the Grover reflections).
struct DiagonalSpec {
  struct ExpLinear {
    double coefficient = 0.0;
  };
  struct Explicit {
    std::map<std::int64_t, Amplitude> values;
  };

  std::variant<ExpLinear, Explicit> kind;
  DiagonalBasis basis = DiagonalBasis::cost;

  static DiagonalSpec exp_linear(double coefficient, DiagonalBasis basis);
  /// Throws ConfigError if any value is off the unit circle by more than 1e-12.
  static DiagonalSpec explicit_values(std::map<std::int64_t, Amplitude> values, DiagonalBasis basis);

  Amplitude phase(double key) const;
};

/// In-place W*psi with W_rs = 2^{-n/2} (-1)^{popcount(r & s)}.
void walsh_transform(StateVector& state);

/// Unnormalized Hadamard butterflies over a power-of-two length buffer.
void fwht_unnormalized(std::span<Amplitude> data);

/// psi'_s = phase(key(s)) * psi_s. For basis=cost the keys come from
/// `cost_keys` (one per basis state); for basis=bit_count the key is
/// popcount(s) and `cost_keys` is ignored.
void apply_diagonal(StateVector& state, const DiagonalSpec& spec, std::span<const double> cost_keys = {});

/// U = W T W with T_ss = exp(i*pi*tau*|s|), applied as n per-bit 2x2
/// butterflies. Element U_rs is then a product of d(r,s) off-diagonal and
/// n - d(r,s) diagonal factors with no cancellation.
void apply_mixing(StateVector& state, double tau);

/// W T W for an arbitrary bit-count diagonal T: unnormalized butterflies on
/// both sides with the 2^{-n} factor folded into T.
void apply_mixing(StateVector& state, const DiagonalSpec& bit_count_diagonal);

}  // namespace qopt
