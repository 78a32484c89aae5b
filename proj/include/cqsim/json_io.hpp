#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cqsim/circuit.hpp"

namespace cqsim {

// Circuit <-> JSON:
// {"n_qubits": int, "n_cbits": int, "instructions": [
//    {"op": "h"|"x"|...|"ccx"|"measure"|"reset"|"c_if"
//          |"not_cl"|"cnot_cl"|"swap_cl"|"reset_cl"|"rand_cl",
//     "qubits": [..], "cbits": [..], "param": float?, "gate": name?}]}
// "gate" names the classically controlled gate for op "c_if".
std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

void write_circuit_file(const Circuit& circuit, const std::string& path);
Circuit read_circuit_file(const std::string& path);

// CSV "bitstring,count", rows sorted by bitstring (with header).
void write_histogram_csv(const std::map<std::string, std::uint64_t>& hist,
                         const std::string& path);
std::map<std::string, std::uint64_t> read_histogram_csv(const std::string& path);

// CSV "step,node,probability": trajectory[t][j] = P(node j at classical step t).
void write_trajectory_csv(const std::vector<std::vector<double>>& trajectory,
                          const std::string& path);
std::vector<std::vector<double>> read_trajectory_csv(const std::string& path);

}  // namespace cqsim
