#include "cqsim/circuit.hpp"

#include <algorithm>
#include <stdexcept>

namespace cqsim {

Instruction Instruction::quantum(GateKind g, std::vector<int> qs, double param) {
  Instruction i;
  i.op = OpCode::Gate;
  i.gate = g;
  i.param = param;
  i.qubits = std::move(qs);
  return i;
}

Instruction Instruction::measure(int qubit, int cbit) {
  Instruction i;
  i.op = OpCode::Measure;
  i.qubits = {qubit};
  i.cbits = {cbit};
  return i;
}

Instruction Instruction::reset(int qubit) {
  Instruction i;
  i.op = OpCode::Reset;
  i.qubits = {qubit};
  return i;
}

Instruction Instruction::c_if(GateKind g, std::vector<int> qs, int control_cbit,
                              double param) {
  Instruction i;
  i.op = OpCode::ClassicallyControlled;
  i.gate = g;
  i.param = param;
  i.qubits = std::move(qs);
  i.cbits = {control_cbit};
  return i;
}

Instruction Instruction::cl_not(int cbit) {
  Instruction i;
  i.op = OpCode::ClassicalNot;
  i.cbits = {cbit};
  return i;
}

Instruction Instruction::cl_cnot(int control_cbit, int target_cbit) {
  Instruction i;
  i.op = OpCode::ClassicalCnot;
  i.cbits = {control_cbit, target_cbit};
  return i;
}

Instruction Instruction::cl_swap(int a, int b) {
  Instruction i;
  i.op = OpCode::ClassicalSwap;
  i.cbits = {a, b};
  return i;
}

Instruction Instruction::cl_reset(int cbit) {
  Instruction i;
  i.op = OpCode::ClassicalReset;
  i.cbits = {cbit};
  return i;
}

Instruction Instruction::cl_rand(int cbit) {
  Instruction i;
  i.op = OpCode::ClassicalRandomInit;
  i.cbits = {cbit};
  return i;
}

Circuit::Circuit(int n_qubits, int n_cbits) : n_qubits_(n_qubits), n_cbits_(n_cbits) {
  if (n_qubits < 0 || n_cbits < 0) throw std::invalid_argument("negative register size");
}

void Circuit::add(Instruction instr) {
  for (int q : instr.qubits) {
    if (q < 0 || q >= n_qubits_) throw std::out_of_range("qubit index out of range");
  }
  for (int c : instr.cbits) {
    if (c < 0 || c >= n_cbits_) throw std::out_of_range("cbit index out of range");
  }
  if (instr.op == OpCode::Gate || instr.op == OpCode::ClassicallyControlled) {
    if (static_cast<int>(instr.qubits.size()) != gate_arity(instr.gate))
      throw std::invalid_argument("gate arity mismatch");
    std::vector<int> qs = instr.qubits;
    std::sort(qs.begin(), qs.end());
    if (std::adjacent_find(qs.begin(), qs.end()) != qs.end())
      throw std::invalid_argument("duplicate target qubit");
  }
  instructions_.push_back(std::move(instr));
}

void Circuit::gate(GateKind g, std::vector<int> qs, double param) {
  add(Instruction::quantum(g, std::move(qs), param));
}

int Circuit::t_count() const {
  int n = 0;
  for (const auto& i : instructions_) {
    if (i.op == OpCode::Gate && (i.gate == GateKind::T || i.gate == GateKind::Tdg)) ++n;
  }
  return n;
}

Circuit Circuit::inverted() const {
  Circuit inv(n_qubits_, n_cbits_);
  for (auto it = instructions_.rbegin(); it != instructions_.rend(); ++it) {
    if (it->op != OpCode::Gate)
      throw std::invalid_argument("inverted(): circuit contains non-unitary instruction");
    double p = gate_has_param(it->gate) ? -it->param : 0.0;
    inv.gate(gate_inverse(it->gate), it->qubits, p);
  }
  return inv;
}

}  // namespace cqsim
