#pragma once

#include <cstdint>
#include <vector>

#include "cqsim/gate.hpp"

namespace cqsim {

enum class OpCode : std::uint8_t {
  Gate,                  // quantum gate on `qubits`
  Measure,               // qubits[0] -> cbits[0]
  Reset,                 // qubits[0] -> |0>
  ClassicallyControlled, // gate on `qubits` iff cbits[0] == 1
  ClassicalNot,          // cbits[0] ^= 1
  ClassicalCnot,         // cbits[1] ^= cbits[0]
  ClassicalSwap,         // swap(cbits[0], cbits[1])
  ClassicalReset,        // cbits[0] = 0
  ClassicalRandomInit,   // cbits[0] = fair coin
};

struct Instruction {
  OpCode op{OpCode::Gate};
  GateKind gate{GateKind::X};
  double param{0.0};
  std::vector<int> qubits;
  std::vector<int> cbits;

  static Instruction quantum(GateKind g, std::vector<int> qs, double param = 0.0);
  static Instruction measure(int qubit, int cbit);
  static Instruction reset(int qubit);
  static Instruction c_if(GateKind g, std::vector<int> qs, int control_cbit,
                          double param = 0.0);
  static Instruction cl_not(int cbit);
  static Instruction cl_cnot(int control_cbit, int target_cbit);
  static Instruction cl_swap(int a, int b);
  static Instruction cl_reset(int cbit);
  static Instruction cl_rand(int cbit);
};

// Ordered classical-quantum instruction list. Big-endian convention:
// qubit 0 is the leftmost ket factor (most significant bit of a basis index).
class Circuit {
 public:
  Circuit() = default;
  Circuit(int n_qubits, int n_cbits);

  int n_qubits() const { return n_qubits_; }
  int n_cbits() const { return n_cbits_; }
  const std::vector<Instruction>& instructions() const { return instructions_; }
  std::size_t size() const { return instructions_.size(); }

  // Appends with index/arity validation; throws std::out_of_range /
  // std::invalid_argument on violation.
  void add(Instruction instr);

  // Convenience builders.
  void gate(GateKind g, std::vector<int> qs, double param = 0.0);
  void x(int q) { gate(GateKind::X, {q}); }
  void z(int q) { gate(GateKind::Z, {q}); }
  void h(int q) { gate(GateKind::H, {q}); }
  void s(int q) { gate(GateKind::S, {q}); }
  void sdg(int q) { gate(GateKind::Sdg, {q}); }
  void t(int q) { gate(GateKind::T, {q}); }
  void tdg(int q) { gate(GateKind::Tdg, {q}); }
  void cx(int c, int t) { gate(GateKind::CNOT, {c, t}); }
  void swap(int a, int b) { gate(GateKind::SWAP, {a, b}); }
  void ccx(int c1, int c2, int t) { gate(GateKind::Toffoli, {c1, c2, t}); }
  void ry(int q, double theta) { gate(GateKind::RY, {q}, theta); }
  void rz(int q, double theta) { gate(GateKind::RZ, {q}, theta); }
  void measure(int q, int c) { add(Instruction::measure(q, c)); }
  void reset(int q) { add(Instruction::reset(q)); }

  // Number of T/Tdg instructions.
  int t_count() const;

  // Gate-by-gate inverse (quantum-gate-only circuits).
  Circuit inverted() const;

 private:
  int n_qubits_{0};
  int n_cbits_{0};
  std::vector<Instruction> instructions_;
};

}  // namespace cqsim
