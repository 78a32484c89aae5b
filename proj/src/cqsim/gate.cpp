#include "cqsim/gate.hpp"

#include <cmath>
#include <stdexcept>

namespace cqsim {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

int gate_arity(GateKind g) {
  switch (g) {
    case GateKind::CNOT:
    case GateKind::SWAP:
      return 2;
    case GateKind::Toffoli:
      return 3;
    default:
      return 1;
  }
}

bool gate_is_clifford(GateKind g) {
  switch (g) {
    case GateKind::X:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::CNOT:
    case GateKind::SWAP:
      return true;
    default:
      return false;
  }
}

bool gate_has_param(GateKind g) { return g == GateKind::RY || g == GateKind::RZ; }

GateKind gate_inverse(GateKind g) {
  switch (g) {
    case GateKind::S:
      return GateKind::Sdg;
    case GateKind::Sdg:
      return GateKind::S;
    case GateKind::T:
      return GateKind::Tdg;
    case GateKind::Tdg:
      return GateKind::T;
    default:
      return g;  // self-inverse; RY/RZ invert via negated angle
  }
}

const char* gate_name(GateKind g) {
  switch (g) {
    case GateKind::X:
      return "x";
    case GateKind::Z:
      return "z";
    case GateKind::H:
      return "h";
    case GateKind::S:
      return "s";
    case GateKind::Sdg:
      return "sdg";
    case GateKind::T:
      return "t";
    case GateKind::Tdg:
      return "tdg";
    case GateKind::CNOT:
      return "cx";
    case GateKind::SWAP:
      return "swap";
    case GateKind::Toffoli:
      return "ccx";
    case GateKind::RY:
      return "ry";
    case GateKind::RZ:
      return "rz";
  }
  return "?";
}

bool gate_from_name(const std::string& name, GateKind& out) {
  static const std::pair<const char*, GateKind> table[] = {
      {"x", GateKind::X},        {"z", GateKind::Z},    {"h", GateKind::H},
      {"s", GateKind::S},        {"sdg", GateKind::Sdg}, {"t", GateKind::T},
      {"tdg", GateKind::Tdg},    {"cx", GateKind::CNOT}, {"cnot", GateKind::CNOT},
      {"swap", GateKind::SWAP},  {"ccx", GateKind::Toffoli},
      {"ry", GateKind::RY},      {"rz", GateKind::RZ},
  };
  for (const auto& [n, k] : table) {
    if (name == n) {
      out = k;
      return true;
    }
  }
  return false;
}

std::array<std::complex<double>, 4> gate_matrix1(GateKind g, double param) {
  const double s2 = 1.0 / std::sqrt(2.0);
  switch (g) {
    case GateKind::X:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Z:
      return {1.0, 0.0, 0.0, -1.0};
    case GateKind::H:
      return {s2, s2, s2, -s2};
    case GateKind::S:
      return {1.0, 0.0, 0.0, kI};
    case GateKind::Sdg:
      return {1.0, 0.0, 0.0, -kI};
    case GateKind::T:
      return {1.0, 0.0, 0.0, std::exp(kI * (M_PI / 4.0))};
    case GateKind::Tdg:
      return {1.0, 0.0, 0.0, std::exp(-kI * (M_PI / 4.0))};
    case GateKind::RY: {
      const double c = std::cos(param / 2.0), s = std::sin(param / 2.0);
      return {c, -s, s, c};
    }
    case GateKind::RZ:
      return {std::exp(-kI * (param / 2.0)), 0.0, 0.0, std::exp(kI * (param / 2.0))};
    default:
      throw std::invalid_argument("gate_matrix1: not a single-qubit gate");
  }
}

}  // namespace cqsim
