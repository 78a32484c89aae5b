#include "cqsim/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cqsim {

namespace {

using nlohmann::json;

GateKind parse_gate(const std::string& name) {
  GateKind g;
  if (!gate_from_name(name, g))
    throw std::invalid_argument("circuit JSON: unknown gate '" + name + "'");
  return g;
}

json instruction_to_json(const Instruction& in) {
  json j;
  switch (in.op) {
    case OpCode::Gate:
      j["op"] = gate_name(in.gate);
      break;
    case OpCode::Measure:
      j["op"] = "measure";
      break;
    case OpCode::Reset:
      j["op"] = "reset";
      break;
    case OpCode::ClassicallyControlled:
      j["op"] = "c_if";
      j["gate"] = gate_name(in.gate);
      break;
    case OpCode::ClassicalNot:
      j["op"] = "not_cl";
      break;
    case OpCode::ClassicalCnot:
      j["op"] = "cnot_cl";
      break;
    case OpCode::ClassicalSwap:
      j["op"] = "swap_cl";
      break;
    case OpCode::ClassicalReset:
      j["op"] = "reset_cl";
      break;
    case OpCode::ClassicalRandomInit:
      j["op"] = "rand_cl";
      break;
  }
  if (!in.qubits.empty()) j["qubits"] = in.qubits;
  if (!in.cbits.empty()) j["cbits"] = in.cbits;
  if ((in.op == OpCode::Gate || in.op == OpCode::ClassicallyControlled) &&
      gate_has_param(in.gate))
    j["param"] = in.param;
  return j;
}

Instruction instruction_from_json(const json& j) {
  const std::string op = j.at("op").get<std::string>();
  std::vector<int> qubits = j.value("qubits", std::vector<int>{});
  std::vector<int> cbits = j.value("cbits", std::vector<int>{});
  const double param = j.value("param", 0.0);

  auto need = [&](std::size_t nq, std::size_t nc) {
    if (qubits.size() != nq || cbits.size() != nc)
      throw std::invalid_argument("circuit JSON: wrong operand count for op '" + op +
                                  "'");
  };

  if (op == "measure") {
    need(1, 1);
    return Instruction::measure(qubits[0], cbits[0]);
  }
  if (op == "reset") {
    need(1, 0);
    return Instruction::reset(qubits[0]);
  }
  if (op == "c_if") {
    if (cbits.size() != 1)
      throw std::invalid_argument("circuit JSON: c_if needs one control cbit");
    GateKind g = parse_gate(j.at("gate").get<std::string>());
    return Instruction::c_if(g, std::move(qubits), cbits[0], param);
  }
  if (op == "not_cl") {
    need(0, 1);
    return Instruction::cl_not(cbits[0]);
  }
  if (op == "cnot_cl") {
    need(0, 2);
    return Instruction::cl_cnot(cbits[0], cbits[1]);
  }
  if (op == "swap_cl") {
    need(0, 2);
    return Instruction::cl_swap(cbits[0], cbits[1]);
  }
  if (op == "reset_cl") {
    need(0, 1);
    return Instruction::cl_reset(cbits[0]);
  }
  if (op == "rand_cl") {
    need(0, 1);
    return Instruction::cl_rand(cbits[0]);
  }
  return Instruction::quantum(parse_gate(op), std::move(qubits), param);
}

}  // namespace

std::string circuit_to_json(const Circuit& circuit) {
  json j;
  j["n_qubits"] = circuit.n_qubits();
  j["n_cbits"] = circuit.n_cbits();
  j["instructions"] = json::array();
  for (const Instruction& in : circuit.instructions())
    j["instructions"].push_back(instruction_to_json(in));
  return j.dump(2) + "\n";
}

Circuit circuit_from_json(const std::string& text) {
  json j = json::parse(text);
  Circuit c(j.at("n_qubits").get<int>(), j.at("n_cbits").get<int>());
  for (const json& ij : j.at("instructions")) c.add(instruction_from_json(ij));
  return c;
}

void write_circuit_file(const Circuit& circuit, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << circuit_to_json(circuit);
}

Circuit read_circuit_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return circuit_from_json(ss.str());
}

void write_histogram_csv(const std::map<std::string, std::uint64_t>& hist,
                         const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "bitstring,count\n";
  for (const auto& [bits, count] : hist) f << bits << ',' << count << '\n';
}

std::map<std::string, std::uint64_t> read_histogram_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::map<std::string, std::uint64_t> hist;
  std::string line;
  std::getline(f, line);  // header
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("malformed histogram row: " + line);
    hist[line.substr(0, comma)] = std::stoull(line.substr(comma + 1));
  }
  return hist;
}

void write_trajectory_csv(const std::vector<std::vector<double>>& trajectory,
                          const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "step,node,probability\n";
  f.precision(17);
  for (std::size_t t = 0; t < trajectory.size(); ++t)
    for (std::size_t node = 0; node < trajectory[t].size(); ++node)
      f << t << ',' << node << ',' << trajectory[t][node] << '\n';
}

std::vector<std::vector<double>> read_trajectory_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::vector<std::vector<double>> traj;
  std::string line;
  std::getline(f, line);  // header
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string step_s, node_s, prob_s;
    if (!std::getline(ss, step_s, ',') || !std::getline(ss, node_s, ',') ||
        !std::getline(ss, prob_s))
      throw std::runtime_error("malformed trajectory row: " + line);
    const std::size_t t = std::stoul(step_s);
    const std::size_t node = std::stoul(node_s);
    if (traj.size() <= t) traj.resize(t + 1);
    if (traj[t].size() <= node) traj[t].resize(node + 1, 0.0);
    traj[t][node] = std::stod(prob_s);
  }
  return traj;
}

}  // namespace cqsim
