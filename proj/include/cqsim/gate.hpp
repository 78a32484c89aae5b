#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>

namespace cqsim {

// Gate set: the Clifford+T gates evaluable under the QHE scheme, plus
// SWAP/Toffoli (kept as named gates at exact compile level) and the
// rotation gates used only in oracle-comparison circuits.
enum class GateKind : std::uint8_t {
  X,
  Z,
  H,
  S,
  Sdg,
  T,
  Tdg,
  CNOT,
  SWAP,
  Toffoli,
  RY,
  RZ,
};

int gate_arity(GateKind g);
bool gate_is_clifford(GateKind g);
bool gate_has_param(GateKind g);
GateKind gate_inverse(GateKind g);
const char* gate_name(GateKind g);
bool gate_from_name(const std::string& name, GateKind& out);

// Row-major 2x2 matrix of a single-qubit gate.
std::array<std::complex<double>, 4> gate_matrix1(GateKind g, double param = 0.0);

}  // namespace cqsim
