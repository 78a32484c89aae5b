#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cqsim/circuit.hpp"
#include "cqsim/rng.hpp"
#include "cqsim/simulate.hpp"
#include "cqsim/statevector.hpp"

namespace qhe {

// Quantum one-time pad key: encryption is (x) X_i^{x_i} Z_i^{z_i}.
struct PauliKey {
  std::vector<std::uint8_t> x, z;
  int n() const { return static_cast<int>(x.size()); }
  bool operator==(const PauliKey&) const = default;
};

PauliKey gen_key(int n, cqsim::Prng& rng);

// Applies X^x Z^z to the first key.n() qubits (state may carry extra
// unprotected ancillas above them).
cqsim::StateVector encrypt(cqsim::StateVector state, const PauliKey& key);

// Per-gate key-updating functions.
void update_key_clifford(PauliKey& key, cqsim::GateKind g,
                         const std::vector<int>& qubits);
void update_key_t(PauliKey& key, int qubit, int r_a, int r_b, bool dagger);
void update_key_nonunitary(PauliKey& key, bool is_reset, int qubit);

// GF(2) linear map on the 2n-bit key vector (x_1..x_n, z_1..z_n); row r of
// the bit matrix is a mask over input bits. All Clifford and measure/reset
// key updates are linear, so composition is row manipulation.
struct CliffordMap {
  int n{0};
  std::vector<std::uint64_t> rows;  // 2n rows; bit j of rows[r] = matrix entry

  static CliffordMap identity(int n);
  // Composes the update of `g` after this map (rows rewritten in place).
  void compose_gate(cqsim::GateKind g, const std::vector<int>& qubits);
  void compose_measure(int qubit);  // z_i row <- 0
  void compose_reset(int qubit);    // x_i, z_i rows <- 0
  std::uint64_t key_bits(const PauliKey& key) const;  // pack (x, z)
  PauliKey apply(const PauliKey& key) const;
  // XOR operations to evaluate the map: sum over rows of popcount-1.
  long long xor_cost() const;
};

// GF(2) functional of the segment-start key giving x_qubit at measurement
// time; decrypted bit = measured cbit XOR row.key.
struct MeasureRecord {
  int qubit;
  int cbit;
  std::uint64_t row;
};

struct KeyUpdateStep {
  enum class Kind { Clifford, T, Measure, Reset, Map };
  Kind kind{Kind::Clifford};
  // Clifford
  cqsim::GateKind gate{cqsim::GateKind::X};
  std::vector<int> qubits;
  // T
  int qubit{0};
  int bell_index{0};  // 1-based, circuit order
  bool dagger{false};
  // Measure
  int cbit{0};
  // Map (composed form)
  CliffordMap map;
  std::vector<MeasureRecord> measures;
};

struct KeyUpdateScript {
  int n_qubits{0};
  int L{0};
  std::vector<KeyUpdateStep> steps;
};

// Collapses maximal Clifford/measure/reset runs into CliffordMap steps; the
// result alternates L+1 maps with the L T steps.
KeyUpdateScript compose_clifford(const KeyUpdateScript& per_gate);

struct BellOutcome {
  int bell_index{0};
  int r_a{0};
  int r_b{0};
};

// Applies a script (per-gate or composed) to a key, consuming Bell outcomes
// in order. Decrypted measurement bits are ignored here (key evolution only).
PauliKey apply_script(const KeyUpdateScript& script, PauliKey key,
                      const std::vector<BellOutcome>& outcomes);

enum class Mode { Realistic, Simplified };

struct ServerCompilation {
  cqsim::Circuit server_circuit;
  KeyUpdateScript script;  // per-gate form
  std::vector<std::pair<int, int>> bell_qubits;  // index l-1 -> (b1, b2)
  Mode mode{Mode::Realistic};
  int n_main{0};
  int n_protected{0};
  int L{0};
  int n_cbits_orig{0};
  // Simplified-mode classical register layout.
  int dec_offset{0}, xkey_offset{0}, zkey_offset{0}, rb_cbit{0}, ra_cbit{0};
};

// Realistic: Clifford/measure/reset copied verbatim; T/Tdg number l becomes
// [T(q); H(b1_l); CNOT(b1_l, b2_l); SWAP(q, b1_l)] on a fresh Bell pair, all
// client work deferred. Simplified: one reusable Bell pair; the client's
// classically controlled S, Bell measurement, and classical key updates are
// interleaved into a combined classical-quantum circuit whose classical
// register holds [encrypted cbits | decrypted cbits | x key | z key | r_b r_a].
// Qubits >= n_protected get a fixed all-zero key (unencrypted ancillas).
ServerCompilation compile_server(const cqsim::Circuit& circuit, Mode mode,
                                 int n_protected = -1);

struct XorCountReport {
  int L{0};
  int n{0};
  long long xor_ops{0};
  long long bound{0};  // (L+1) * 2n * (2n-1) + 3L
};

// Static cost of replaying the composed script once: map rows, decrypt rows,
// and 3 (T) / 2 (Tdg) XORs per teleportation step.
XorCountReport xor_report(const KeyUpdateScript& composed);

struct ClientResult {
  std::vector<std::uint8_t> decrypted_cbits;
  PauliKey final_key;
  std::vector<BellOutcome> bell_outcomes;
  cqsim::StateVector state;  // post-client state (Bell qubits in basis states)
};

// Client phase for realistic mode: replays the composed script, measuring the
// Bell pairs inside `server_state` and decrypting the recorded measurement
// cbits. If decrypt_state, additionally applies X^x Z^z with the final key.
ClientResult client_decrypt_run(const ServerCompilation& comp,
                                cqsim::StateVector server_state,
                                const std::vector<std::uint8_t>& encrypted_cbits,
                                const PauliKey& initial_key, cqsim::BitSource& bits,
                                bool decrypt_state = false);

struct ShotTrace {
  PauliKey initial_key, final_key;
  std::vector<BellOutcome> bell_outcomes;
  std::string encrypted, decrypted;
};

struct QheResult {
  std::map<std::string, std::uint64_t> encrypted_hist, decrypted_hist;
  XorCountReport report;
  std::vector<ShotTrace> traces;  // filled when trace_keys
};

// One shot per derived stream: fresh key, encrypt, server evaluation, client
// decryption. Histograms are over the circuit's classical register.
QheResult run_qhe(const cqsim::Circuit& circuit, const cqsim::StateVector& init,
                  Mode mode, std::uint64_t shots, std::uint64_t seed,
                  int n_protected = -1, bool trace_keys = false);

struct QheDistributions {
  std::map<std::string, double> encrypted, decrypted;
};

// Exact output distributions by exhaustive enumeration over key bits, Bell
// outcomes, and measurements.
QheDistributions enumerate_qhe(const cqsim::Circuit& circuit,
                               const cqsim::StateVector& init, Mode mode,
                               int n_protected = -1);

// Averages X^x Z^z rho Z^z X^x over all 4^n keys (or the 2^n X-only keys)
// and returns the max entrywise deviation from I/2^n.
double mixedness_check(const cqsim::StateVector& state, bool x_only = false);

}  // namespace qhe
