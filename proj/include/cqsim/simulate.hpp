#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cqsim/circuit.hpp"
#include "cqsim/statevector.hpp"

namespace cqsim {

struct MeasureEvent {
  int qubit;
  int cbit;
  int outcome;
};

struct RunRecord {
  StateVector state;
  std::vector<std::uint8_t> cbits;
  std::vector<MeasureEvent> measurements;
};

// Executes every instruction in order; all stochastic choices (measurements,
// resets, classical coin flips) are drawn from `bits`.
RunRecord run(const Circuit& circuit, StateVector initial, BitSource& bits);

inline RunRecord run(const Circuit& circuit, BitSource& bits) {
  return run(circuit, StateVector::zero_state(circuit.n_qubits()), bits);
}

// Runs the circuit, then measures `measured_qubits` (in the listed order) at
// the end of each of `shots` independent runs; histogram keyed by those
// outcome bits. Per-shot streams are derived from `seed`.
std::map<std::string, std::uint64_t> sample(const Circuit& circuit,
                                            const StateVector& initial,
                                            std::uint64_t shots,
                                            std::span<const int> measured_qubits,
                                            std::uint64_t seed);

// Classical-bit string c0..c_{m-1}, c0 leftmost.
std::string cbit_string(const std::vector<std::uint8_t>& cbits);

// Repeats the circuit `shots` times with independent per-shot streams derived
// from `seed`; returns histogram keyed by the final classical-bit string.
std::map<std::string, std::uint64_t> sample_cbits(const Circuit& circuit,
                                                  const StateVector& initial,
                                                  std::uint64_t shots,
                                                  std::uint64_t seed);

std::map<std::string, std::uint64_t> sample_cbits(const Circuit& circuit,
                                                  std::uint64_t shots,
                                                  std::uint64_t seed);

// Exhaustive branch enumeration. Runs `shot` once per execution path with
// probability >= tol; every BitSource::take seen inside `shot` becomes a
// branch point (paths below tol are pruned). After each completed run,
// `on_branch` receives the exact path probability. `shot` must be
// deterministic given the bits it draws.
void for_each_branch(const std::function<void(BitSource&)>& shot,
                     const std::function<void(double)>& on_branch,
                     double tol = 1e-12);

// Exact output distribution over final classical-bit strings, by enumeration.
std::map<std::string, double> enumerate_cbits(const Circuit& circuit,
                                              const StateVector& initial,
                                              double tol = 1e-12);

std::map<std::string, double> enumerate_cbits(const Circuit& circuit,
                                              double tol = 1e-12);

}  // namespace cqsim
