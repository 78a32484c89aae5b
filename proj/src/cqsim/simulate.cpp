#include "cqsim/simulate.hpp"

#include <stdexcept>
#include <utility>

namespace cqsim {

RunRecord run(const Circuit& circuit, StateVector initial, BitSource& bits) {
  if (initial.n_qubits() != circuit.n_qubits())
    throw std::invalid_argument("run: initial state size mismatch");
  RunRecord rec;
  rec.state = std::move(initial);
  rec.cbits.assign(circuit.n_cbits(), 0);
  for (const Instruction& in : circuit.instructions()) {
    switch (in.op) {
      case OpCode::Gate:
        apply_gate(rec.state, in.gate, in.qubits, in.param);
        break;
      case OpCode::Measure: {
        const int m = measure(rec.state, in.qubits[0], bits);
        rec.cbits[in.cbits[0]] = static_cast<std::uint8_t>(m);
        rec.measurements.push_back({in.qubits[0], in.cbits[0], m});
        break;
      }
      case OpCode::Reset:
        reset(rec.state, in.qubits[0], bits);
        break;
      case OpCode::ClassicallyControlled:
        if (rec.cbits[in.cbits[0]]) apply_gate(rec.state, in.gate, in.qubits, in.param);
        break;
      case OpCode::ClassicalNot:
        rec.cbits[in.cbits[0]] ^= 1;
        break;
      case OpCode::ClassicalCnot:
        rec.cbits[in.cbits[1]] ^= rec.cbits[in.cbits[0]];
        break;
      case OpCode::ClassicalSwap:
        std::swap(rec.cbits[in.cbits[0]], rec.cbits[in.cbits[1]]);
        break;
      case OpCode::ClassicalReset:
        rec.cbits[in.cbits[0]] = 0;
        break;
      case OpCode::ClassicalRandomInit:
        rec.cbits[in.cbits[0]] = static_cast<std::uint8_t>(bits.take(0.5));
        break;
    }
  }
  return rec;
}

std::map<std::string, std::uint64_t> sample(const Circuit& circuit,
                                            const StateVector& initial,
                                            std::uint64_t shots,
                                            std::span<const int> measured_qubits,
                                            std::uint64_t seed) {
  if (measured_qubits.empty())
    throw std::invalid_argument("sample: measured_qubits is empty");
  std::map<std::string, std::uint64_t> hist;
  for (std::uint64_t k = 0; k < shots; ++k) {
    Prng rng = shot_rng(seed, k);
    RandomBitSource bits(rng);
    RunRecord rec = run(circuit, initial, bits);
    std::string key(measured_qubits.size(), '0');
    for (std::size_t i = 0; i < measured_qubits.size(); ++i)
      if (measure(rec.state, measured_qubits[i], bits)) key[i] = '1';
    ++hist[key];
  }
  return hist;
}

std::string cbit_string(const std::vector<std::uint8_t>& cbits) {
  std::string s(cbits.size(), '0');
  for (std::size_t i = 0; i < cbits.size(); ++i)
    if (cbits[i]) s[i] = '1';
  return s;
}

std::map<std::string, std::uint64_t> sample_cbits(const Circuit& circuit,
                                                  const StateVector& initial,
                                                  std::uint64_t shots,
                                                  std::uint64_t seed) {
  std::map<std::string, std::uint64_t> hist;
  for (std::uint64_t k = 0; k < shots; ++k) {
    Prng rng = shot_rng(seed, k);
    RandomBitSource bits(rng);
    RunRecord rec = run(circuit, initial, bits);
    ++hist[cbit_string(rec.cbits)];
  }
  return hist;
}

std::map<std::string, std::uint64_t> sample_cbits(const Circuit& circuit,
                                                  std::uint64_t shots,
                                                  std::uint64_t seed) {
  return sample_cbits(circuit, StateVector::zero_state(circuit.n_qubits()), shots,
                      seed);
}

namespace {

struct Decision {
  int choice;
  double p_one;
  bool branch_open;  // the other outcome is still unexplored and viable
};

// Replays a fixed decision prefix, then extends it depth-first.
class EnumSource final : public BitSource {
 public:
  EnumSource(std::vector<Decision>& path, double tol) : path_(path), tol_(tol) {}

  int take(double p_one) override {
    if (cursor_ < path_.size()) return path_[cursor_++].choice;
    const double p0 = 1.0 - p_one;
    Decision d;
    d.p_one = p_one;
    if (p0 >= tol_) {
      d.choice = 0;
      d.branch_open = p_one >= tol_;
    } else {
      d.choice = 1;
      d.branch_open = false;
    }
    path_.push_back(d);
    ++cursor_;
    return d.choice;
  }

 private:
  std::vector<Decision>& path_;
  std::size_t cursor_{0};
  double tol_;
};

}  // namespace

void for_each_branch(const std::function<void(BitSource&)>& shot,
                     const std::function<void(double)>& on_branch, double tol) {
  std::vector<Decision> path;
  for (;;) {
    EnumSource src(path, tol);
    shot(src);
    double prob = 1.0;
    for (const Decision& d : path) prob *= d.choice ? d.p_one : 1.0 - d.p_one;
    on_branch(prob);
    // Backtrack to the deepest decision with an unexplored sibling.
    while (!path.empty() && !path.back().branch_open) path.pop_back();
    if (path.empty()) return;
    path.back().choice = 1;
    path.back().branch_open = false;
  }
}

std::map<std::string, double> enumerate_cbits(const Circuit& circuit,
                                              const StateVector& initial,
                                              double tol) {
  std::map<std::string, double> dist;
  std::string key;
  for_each_branch(
      [&](BitSource& bits) { key = cbit_string(run(circuit, initial, bits).cbits); },
      [&](double p) { dist[key] += p; }, tol);
  return dist;
}

std::map<std::string, double> enumerate_cbits(const Circuit& circuit, double tol) {
  return enumerate_cbits(circuit, StateVector::zero_state(circuit.n_qubits()), tol);
}

}  // namespace cqsim
