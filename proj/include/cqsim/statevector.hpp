#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cqsim/gate.hpp"
#include "cqsim/rng.hpp"

namespace cqsim {

using cplx = std::complex<double>;

// 2^q complex amplitudes over q qubits, big-endian: qubit 0 is the most
// significant bit of a basis index.
class StateVector {
 public:
  StateVector() = default;
  static StateVector zero_state(int n_qubits);
  static StateVector basis_state(int n_qubits, std::uint64_t index);
  static StateVector from_amplitudes(int n_qubits, std::vector<cplx> amps);

  int n_qubits() const { return nq_; }
  std::uint64_t dim() const { return std::uint64_t(1) << nq_; }
  const std::vector<cplx>& amplitudes() const { return a_; }
  std::vector<cplx>& amplitudes() { return a_; }
  cplx amp(std::uint64_t i) const { return a_[i]; }

  double norm_sq() const;
  void renormalize();

  // Bit position (from LSB) of qubit q under the big-endian convention.
  int bit_pos(int q) const { return nq_ - 1 - q; }

 private:
  int nq_{0};
  std::vector<cplx> a_;
};

void apply_gate(StateVector& state, GateKind g, std::span<const int> targets,
                double param = 0.0);

double prob_one(const StateVector& state, int qubit);

// Collapses `qubit` to `outcome` whose Born probability is `prob` and
// renormalizes.
void collapse(StateVector& state, int qubit, int outcome, double prob);

// Born-rule measurement; outcome drawn from `bits`.
int measure(StateVector& state, int qubit, BitSource& bits);

// Measure followed by conditional X: qubit ends in |0>.
void reset(StateVector& state, int qubit, BitSource& bits);

// state ⊗ |0...0> (k extra qubits appended after the existing ones).
void append_zero_qubits(StateVector& state, int k);

// Removes a qubit known to be in the basis state `outcome` (e.g. just
// measured); remaining qubit indices shift down past it.
void drop_qubit(StateVector& state, int qubit, int outcome);

StateVector tensor(const StateVector& a, const StateVector& b);

// Max amplitude distance after aligning global phase on a's largest entry.
double distance_up_to_phase(const StateVector& a, const StateVector& b);

}  // namespace cqsim
