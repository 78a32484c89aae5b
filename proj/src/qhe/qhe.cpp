#include "qhe/qhe.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>
#include <string>

namespace qhe {

using cqsim::BitSource;
using cqsim::Circuit;
using cqsim::GateKind;
using cqsim::Instruction;
using cqsim::OpCode;
using cqsim::StateVector;

PauliKey gen_key(int n, cqsim::Prng& rng) {
  if (n < 1) throw std::invalid_argument("gen_key: n must be >= 1");
  PauliKey k;
  k.x.resize(n);
  k.z.resize(n);
  for (int i = 0; i < n; ++i) k.x[i] = static_cast<std::uint8_t>(rng.bit());
  for (int i = 0; i < n; ++i) k.z[i] = static_cast<std::uint8_t>(rng.bit());
  return k;
}

StateVector encrypt(StateVector state, const PauliKey& key) {
  if (key.n() > state.n_qubits())
    throw std::invalid_argument("encrypt: key longer than state");
  for (int i = 0; i < key.n(); ++i) {
    const std::array<int, 1> q{i};
    if (key.x[i]) cqsim::apply_gate(state, GateKind::X, q);
    if (key.z[i]) cqsim::apply_gate(state, GateKind::Z, q);
  }
  return state;
}

void update_key_clifford(PauliKey& key, GateKind g, const std::vector<int>& qubits) {
  switch (g) {
    case GateKind::X:
    case GateKind::Z:
      return;
    case GateKind::H:
      std::swap(key.x[qubits[0]], key.z[qubits[0]]);
      return;
    case GateKind::S:
    case GateKind::Sdg:
      key.z[qubits[0]] ^= key.x[qubits[0]];
      return;
    case GateKind::CNOT:
      key.z[qubits[0]] ^= key.z[qubits[1]];
      key.x[qubits[1]] ^= key.x[qubits[0]];
      return;
    default:
      throw std::invalid_argument("update_key_clifford: not a key-linear gate");
  }
}

void update_key_t(PauliKey& key, int qubit, int r_a, int r_b, bool dagger) {
  if (!dagger) key.z[qubit] ^= key.x[qubit];
  key.x[qubit] ^= static_cast<std::uint8_t>(r_a);
  key.z[qubit] ^= static_cast<std::uint8_t>(r_b);
}

void update_key_nonunitary(PauliKey& key, bool is_reset, int qubit) {
  key.z[qubit] = 0;
  if (is_reset) key.x[qubit] = 0;
}

// --- CliffordMap ---

CliffordMap CliffordMap::identity(int n) {
  CliffordMap m;
  m.n = n;
  m.rows.resize(2 * static_cast<std::size_t>(n));
  for (int r = 0; r < 2 * n; ++r) m.rows[r] = std::uint64_t(1) << r;
  return m;
}

void CliffordMap::compose_gate(GateKind g, const std::vector<int>& qubits) {
  switch (g) {
    case GateKind::X:
    case GateKind::Z:
      return;
    case GateKind::H:
      std::swap(rows[qubits[0]], rows[n + qubits[0]]);
      return;
    case GateKind::S:
    case GateKind::Sdg:
      rows[n + qubits[0]] ^= rows[qubits[0]];
      return;
    case GateKind::CNOT:
      rows[n + qubits[0]] ^= rows[n + qubits[1]];
      rows[qubits[1]] ^= rows[qubits[0]];
      return;
    default:
      throw std::invalid_argument("CliffordMap: not a key-linear gate");
  }
}

void CliffordMap::compose_measure(int qubit) { rows[n + qubit] = 0; }

void CliffordMap::compose_reset(int qubit) {
  rows[qubit] = 0;
  rows[n + qubit] = 0;
}

std::uint64_t CliffordMap::key_bits(const PauliKey& key) const {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) {
    if (key.x[i]) v |= std::uint64_t(1) << i;
    if (key.z[i]) v |= std::uint64_t(1) << (n + i);
  }
  return v;
}

PauliKey CliffordMap::apply(const PauliKey& key) const {
  const std::uint64_t in = key_bits(key);
  PauliKey out;
  out.x.resize(n);
  out.z.resize(n);
  for (int i = 0; i < n; ++i) {
    out.x[i] = static_cast<std::uint8_t>(std::popcount(rows[i] & in) & 1);
    out.z[i] = static_cast<std::uint8_t>(std::popcount(rows[n + i] & in) & 1);
  }
  return out;
}

long long CliffordMap::xor_cost() const {
  long long cost = 0;
  for (std::uint64_t r : rows) {
    const int pc = std::popcount(r);
    if (pc > 1) cost += pc - 1;
  }
  return cost;
}

// --- scripts ---

KeyUpdateScript compose_clifford(const KeyUpdateScript& per_gate) {
  KeyUpdateScript out;
  out.n_qubits = per_gate.n_qubits;
  out.L = per_gate.L;
  const int n = per_gate.n_qubits;
  CliffordMap m = CliffordMap::identity(n);
  std::vector<MeasureRecord> records;
  auto flush = [&]() {
    KeyUpdateStep s;
    s.kind = KeyUpdateStep::Kind::Map;
    s.map = m;
    s.measures = std::move(records);
    out.steps.push_back(std::move(s));
    m = CliffordMap::identity(n);
    records.clear();
  };
  for (const KeyUpdateStep& s : per_gate.steps) {
    switch (s.kind) {
      case KeyUpdateStep::Kind::Clifford:
        m.compose_gate(s.gate, s.qubits);
        break;
      case KeyUpdateStep::Kind::Measure:
        records.push_back({s.qubit, s.cbit, m.rows[s.qubit]});
        m.compose_measure(s.qubit);
        break;
      case KeyUpdateStep::Kind::Reset:
        m.compose_reset(s.qubit);
        break;
      case KeyUpdateStep::Kind::T:
        flush();
        out.steps.push_back(s);
        break;
      case KeyUpdateStep::Kind::Map:
        throw std::invalid_argument("compose_clifford: script already composed");
    }
  }
  flush();
  return out;
}

PauliKey apply_script(const KeyUpdateScript& script, PauliKey key,
                      const std::vector<BellOutcome>& outcomes) {
  std::size_t next = 0;
  for (const KeyUpdateStep& s : script.steps) {
    switch (s.kind) {
      case KeyUpdateStep::Kind::Clifford:
        update_key_clifford(key, s.gate, s.qubits);
        break;
      case KeyUpdateStep::Kind::Measure:
        update_key_nonunitary(key, false, s.qubit);
        break;
      case KeyUpdateStep::Kind::Reset:
        update_key_nonunitary(key, true, s.qubit);
        break;
      case KeyUpdateStep::Kind::Map:
        key = s.map.apply(key);
        break;
      case KeyUpdateStep::Kind::T: {
        if (next >= outcomes.size() || outcomes[next].bell_index != s.bell_index)
          throw std::invalid_argument("apply_script: Bell outcome mismatch");
        const BellOutcome& o = outcomes[next++];
        update_key_t(key, s.qubit, o.r_a, o.r_b, s.dagger);
        break;
      }
    }
  }
  return key;
}

XorCountReport xor_report(const KeyUpdateScript& composed) {
  XorCountReport r;
  r.n = composed.n_qubits;
  r.L = composed.L;
  const long long n2 = 2LL * r.n;
  r.bound = (r.L + 1) * n2 * (n2 - 1) + 3LL * r.L;
  for (const KeyUpdateStep& s : composed.steps) {
    if (s.kind == KeyUpdateStep::Kind::Map) {
      r.xor_ops += s.map.xor_cost();
      for (const MeasureRecord& mr : s.measures) r.xor_ops += std::popcount(mr.row);
    } else if (s.kind == KeyUpdateStep::Kind::T) {
      r.xor_ops += s.dagger ? 2 : 3;
    }
  }
  return r;
}

// --- compilation ---

namespace {

bool qhe_gate_ok(GateKind g) {
  switch (g) {
    case GateKind::X:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::T:
    case GateKind::Tdg:
    case GateKind::CNOT:
      return true;
    default:
      return false;
  }
}

KeyUpdateStep clifford_step(GateKind g, std::vector<int> qubits) {
  KeyUpdateStep s;
  s.kind = KeyUpdateStep::Kind::Clifford;
  s.gate = g;
  s.qubits = std::move(qubits);
  return s;
}

void compile_realistic(const Circuit& circuit, ServerCompilation& comp) {
  const int n = circuit.n_qubits();
  int L = 0;
  for (const Instruction& in : circuit.instructions())
    if (in.op == OpCode::Gate &&
        (in.gate == GateKind::T || in.gate == GateKind::Tdg))
      ++L;
  Circuit server(n + 2 * L, circuit.n_cbits());
  int l = 0;
  for (const Instruction& in : circuit.instructions()) {
    switch (in.op) {
      case OpCode::Gate: {
        if (in.gate == GateKind::T || in.gate == GateKind::Tdg) {
          const int q = in.qubits[0];
          const int b1 = n + 2 * l, b2 = n + 2 * l + 1;
          server.gate(in.gate, {q});
          server.h(b1);
          server.cx(b1, b2);
          server.swap(q, b1);
          comp.bell_qubits.emplace_back(b1, b2);
          KeyUpdateStep s;
          s.kind = KeyUpdateStep::Kind::T;
          s.qubit = q;
          s.dagger = in.gate == GateKind::Tdg;
          s.bell_index = ++l;
          comp.script.steps.push_back(std::move(s));
        } else {
          server.gate(in.gate, in.qubits);
          comp.script.steps.push_back(clifford_step(in.gate, in.qubits));
        }
        break;
      }
      case OpCode::Measure: {
        server.add(in);
        KeyUpdateStep s;
        s.kind = KeyUpdateStep::Kind::Measure;
        s.qubit = in.qubits[0];
        s.cbit = in.cbits[0];
        comp.script.steps.push_back(std::move(s));
        break;
      }
      case OpCode::Reset: {
        server.add(in);
        KeyUpdateStep s;
        s.kind = KeyUpdateStep::Kind::Reset;
        s.qubit = in.qubits[0];
        comp.script.steps.push_back(std::move(s));
        break;
      }
      default:
        throw std::invalid_argument(
            "compile_server: classical instructions are not QHE-evaluable");
    }
  }
  comp.L = L;
  comp.script.L = L;
  comp.server_circuit = std::move(server);
}

void compile_simplified(const Circuit& circuit, ServerCompilation& comp) {
  const int n = circuit.n_qubits();
  const int m = circuit.n_cbits();
  const int b1 = n, b2 = n + 1;
  comp.dec_offset = m;
  comp.xkey_offset = 2 * m;
  comp.zkey_offset = 2 * m + n;
  comp.rb_cbit = 2 * m + 2 * n;
  comp.ra_cbit = 2 * m + 2 * n + 1;
  Circuit c(n + 2, 2 * m + 2 * n + 2);
  const auto xk = [&](int q) { return comp.xkey_offset + q; };
  const auto zk = [&](int q) { return comp.zkey_offset + q; };

  for (int i = 0; i < comp.n_protected; ++i) c.add(Instruction::cl_rand(xk(i)));
  for (int i = 0; i < comp.n_protected; ++i) c.add(Instruction::cl_rand(zk(i)));
  for (int i = 0; i < comp.n_protected; ++i) {
    c.add(Instruction::c_if(GateKind::X, {i}, xk(i)));
    c.add(Instruction::c_if(GateKind::Z, {i}, zk(i)));
  }

  int l = 0;
  for (const Instruction& in : circuit.instructions()) {
    switch (in.op) {
      case OpCode::Gate: {
        if (in.gate == GateKind::T || in.gate == GateKind::Tdg) {
          const int q = in.qubits[0];
          c.gate(in.gate, {q});
          // The Bell pair sits in the basis state (r_b, r_a) left by the
          // previous teleportation; a classically controlled X restores |00>.
          c.add(Instruction::c_if(GateKind::X, {b1}, comp.rb_cbit));
          c.add(Instruction::c_if(GateKind::X, {b2}, comp.ra_cbit));
          c.h(b1);
          c.cx(b1, b2);
          c.swap(q, b1);
          // Client side, interleaved: S^x, Bell measurement, key update.
          c.add(Instruction::c_if(GateKind::S, {b1}, xk(q)));
          c.cx(b1, b2);
          c.h(b1);
          c.measure(b1, comp.rb_cbit);
          c.measure(b2, comp.ra_cbit);
          if (in.gate == GateKind::T)
            c.add(Instruction::cl_cnot(xk(q), zk(q)));
          c.add(Instruction::cl_cnot(comp.ra_cbit, xk(q)));
          c.add(Instruction::cl_cnot(comp.rb_cbit, zk(q)));
          comp.bell_qubits.emplace_back(b1, b2);
          KeyUpdateStep s;
          s.kind = KeyUpdateStep::Kind::T;
          s.qubit = q;
          s.dagger = in.gate == GateKind::Tdg;
          s.bell_index = ++l;
          comp.script.steps.push_back(std::move(s));
        } else {
          c.gate(in.gate, in.qubits);
          const int q = in.qubits[0];
          switch (in.gate) {
            case GateKind::H:
              c.add(Instruction::cl_swap(xk(q), zk(q)));
              break;
            case GateKind::S:
            case GateKind::Sdg:
              c.add(Instruction::cl_cnot(xk(q), zk(q)));
              break;
            case GateKind::CNOT:
              c.add(Instruction::cl_cnot(zk(in.qubits[1]), zk(q)));
              c.add(Instruction::cl_cnot(xk(q), xk(in.qubits[1])));
              break;
            default:
              break;  // X, Z: identity update
          }
          comp.script.steps.push_back(clifford_step(in.gate, in.qubits));
        }
        break;
      }
      case OpCode::Measure: {
        const int q = in.qubits[0], cb = in.cbits[0];
        c.measure(q, cb);
        const int dec = comp.dec_offset + cb;
        c.add(Instruction::cl_reset(dec));
        c.add(Instruction::cl_cnot(cb, dec));
        c.add(Instruction::cl_cnot(xk(q), dec));
        c.add(Instruction::cl_reset(zk(q)));
        KeyUpdateStep s;
        s.kind = KeyUpdateStep::Kind::Measure;
        s.qubit = q;
        s.cbit = cb;
        comp.script.steps.push_back(std::move(s));
        break;
      }
      case OpCode::Reset: {
        const int q = in.qubits[0];
        c.reset(q);
        c.add(Instruction::cl_reset(xk(q)));
        c.add(Instruction::cl_reset(zk(q)));
        KeyUpdateStep s;
        s.kind = KeyUpdateStep::Kind::Reset;
        s.qubit = q;
        comp.script.steps.push_back(std::move(s));
        break;
      }
      default:
        throw std::invalid_argument(
            "compile_server: classical instructions are not QHE-evaluable");
    }
  }
  comp.L = l;
  comp.script.L = l;
  comp.server_circuit = std::move(c);
}

}  // namespace

ServerCompilation compile_server(const Circuit& circuit, Mode mode,
                                 int n_protected) {
  for (const Instruction& in : circuit.instructions()) {
    if (in.op == OpCode::Gate && !qhe_gate_ok(in.gate))
      throw std::invalid_argument(std::string("compile_server: gate '") +
                                  cqsim::gate_name(in.gate) +
                                  "' is not QHE-evaluable");
    if (in.op != OpCode::Gate && in.op != OpCode::Measure && in.op != OpCode::Reset)
      throw std::invalid_argument(
          "compile_server: classical instructions are not QHE-evaluable");
  }
  ServerCompilation comp;
  comp.mode = mode;
  comp.n_main = circuit.n_qubits();
  comp.n_protected = n_protected < 0 ? circuit.n_qubits() : n_protected;
  if (comp.n_protected > comp.n_main)
    throw std::invalid_argument("compile_server: n_protected out of range");
  comp.n_cbits_orig = circuit.n_cbits();
  comp.script.n_qubits = circuit.n_qubits();
  if (mode == Mode::Realistic)
    compile_realistic(circuit, comp);
  else
    compile_simplified(circuit, comp);
  return comp;
}

// --- client phase (realistic mode) ---

ClientResult client_decrypt_run(const ServerCompilation& comp,
                                StateVector server_state,
                                const std::vector<std::uint8_t>& encrypted_cbits,
                                const PauliKey& initial_key, BitSource& bits,
                                bool decrypt_state) {
  if (comp.mode != Mode::Realistic)
    throw std::invalid_argument(
        "client_decrypt_run: simplified mode interleaves client work");
  const KeyUpdateScript composed = compose_clifford(comp.script);
  ClientResult res;
  res.decrypted_cbits.assign(encrypted_cbits.size(), 0);
  PauliKey key = initial_key;
  for (const KeyUpdateStep& s : composed.steps) {
    if (s.kind == KeyUpdateStep::Kind::Map) {
      const std::uint64_t seg_key = s.map.key_bits(key);
      for (const MeasureRecord& mr : s.measures)
        res.decrypted_cbits[mr.cbit] =
            encrypted_cbits[mr.cbit] ^
            static_cast<std::uint8_t>(std::popcount(mr.row & seg_key) & 1);
      key = s.map.apply(key);
    } else {
      const auto [b1, b2] = comp.bell_qubits[static_cast<std::size_t>(s.bell_index) - 1];
      if (key.x[s.qubit])
        cqsim::apply_gate(server_state, GateKind::S, std::array<int, 1>{b1});
      cqsim::apply_gate(server_state, GateKind::CNOT, std::array<int, 2>{b1, b2});
      cqsim::apply_gate(server_state, GateKind::H, std::array<int, 1>{b1});
      const int r_b = cqsim::measure(server_state, b1, bits);
      const int r_a = cqsim::measure(server_state, b2, bits);
      res.bell_outcomes.push_back({s.bell_index, r_a, r_b});
      update_key_t(key, s.qubit, r_a, r_b, s.dagger);
    }
  }
  if (decrypt_state) {
    for (int i = 0; i < comp.n_main; ++i) {
      if (key.x[i]) cqsim::apply_gate(server_state, GateKind::X, std::array<int, 1>{i});
      if (key.z[i]) cqsim::apply_gate(server_state, GateKind::Z, std::array<int, 1>{i});
    }
  }
  res.final_key = std::move(key);
  res.state = std::move(server_state);
  return res;
}

// --- end-to-end execution ---

namespace {

PauliKey draw_key(int n, int n_protected, BitSource& bits) {
  PauliKey k;
  k.x.assign(n, 0);
  k.z.assign(n, 0);
  for (int i = 0; i < n_protected; ++i) k.x[i] = static_cast<std::uint8_t>(bits.take(0.5));
  for (int i = 0; i < n_protected; ++i) k.z[i] = static_cast<std::uint8_t>(bits.take(0.5));
  return k;
}

struct Shot {
  std::string enc, dec;
  PauliKey initial_key, final_key;
  std::vector<BellOutcome> bell;
};

// Faithful realistic run: full server circuit with 2L live Bell pairs, then
// the deferred client phase.
Shot realistic_shot_faithful(const ServerCompilation& comp, const StateVector& init,
                             BitSource& bits) {
  Shot shot;
  shot.initial_key = draw_key(comp.n_main, comp.n_protected, bits);
  StateVector st = encrypt(init, shot.initial_key);
  cqsim::append_zero_qubits(st, 2 * comp.L);
  cqsim::RunRecord rec = cqsim::run(comp.server_circuit, std::move(st), bits);
  ClientResult cr =
      client_decrypt_run(comp, std::move(rec.state), rec.cbits, shot.initial_key, bits);
  shot.enc = cqsim::cbit_string(rec.cbits);
  shot.dec = cqsim::cbit_string(cr.decrypted_cbits);
  shot.final_key = std::move(cr.final_key);
  shot.bell = std::move(cr.bell_outcomes);
  return shot;
}

// Memory-lean realistic run: identical outcome distribution, but each Bell
// pair is measured and dropped right after its teleportation (the measured
// qubits are never acted on again, so by the deferred-measurement principle
// this commutes with postponing all client work).
Shot realistic_shot_eager(const ServerCompilation& comp, const StateVector& init,
                          BitSource& bits) {
  Shot shot;
  shot.initial_key = draw_key(comp.n_main, comp.n_protected, bits);
  PauliKey key = shot.initial_key;
  StateVector st = encrypt(init, shot.initial_key);
  std::vector<std::uint8_t> enc(comp.n_cbits_orig, 0), dec(comp.n_cbits_orig, 0);
  const int n = comp.n_main;
  for (const KeyUpdateStep& s : comp.script.steps) {
    switch (s.kind) {
      case KeyUpdateStep::Kind::Clifford:
        cqsim::apply_gate(st, s.gate, s.qubits);
        update_key_clifford(key, s.gate, s.qubits);
        break;
      case KeyUpdateStep::Kind::Measure: {
        const int m = cqsim::measure(st, s.qubit, bits);
        enc[s.cbit] = static_cast<std::uint8_t>(m);
        dec[s.cbit] = static_cast<std::uint8_t>(m ^ key.x[s.qubit]);
        update_key_nonunitary(key, false, s.qubit);
        break;
      }
      case KeyUpdateStep::Kind::Reset:
        cqsim::reset(st, s.qubit, bits);
        update_key_nonunitary(key, true, s.qubit);
        break;
      case KeyUpdateStep::Kind::T: {
        const int q = s.qubit;
        const int b1 = n, b2 = n + 1;
        cqsim::append_zero_qubits(st, 2);
        cqsim::apply_gate(st, s.dagger ? GateKind::Tdg : GateKind::T,
                          std::array<int, 1>{q});
        cqsim::apply_gate(st, GateKind::H, std::array<int, 1>{b1});
        cqsim::apply_gate(st, GateKind::CNOT, std::array<int, 2>{b1, b2});
        cqsim::apply_gate(st, GateKind::SWAP, std::array<int, 2>{q, b1});
        if (key.x[q]) cqsim::apply_gate(st, GateKind::S, std::array<int, 1>{b1});
        cqsim::apply_gate(st, GateKind::CNOT, std::array<int, 2>{b1, b2});
        cqsim::apply_gate(st, GateKind::H, std::array<int, 1>{b1});
        const int r_b = cqsim::measure(st, b1, bits);
        const int r_a = cqsim::measure(st, b2, bits);
        cqsim::drop_qubit(st, b2, r_a);
        cqsim::drop_qubit(st, b1, r_b);
        shot.bell.push_back({s.bell_index, r_a, r_b});
        update_key_t(key, q, r_a, r_b, s.dagger);
        break;
      }
      case KeyUpdateStep::Kind::Map:
        throw std::logic_error("per-gate script expected");
    }
  }
  shot.enc = cqsim::cbit_string(enc);
  shot.dec = cqsim::cbit_string(dec);
  shot.final_key = std::move(key);
  return shot;
}

Shot realistic_shot(const ServerCompilation& comp, const StateVector& init,
                    BitSource& bits) {
  if (comp.n_main + 2 * comp.L <= 14)
    return realistic_shot_faithful(comp, init, bits);
  return realistic_shot_eager(comp, init, bits);
}

class RecordingBitSource final : public BitSource {
 public:
  explicit RecordingBitSource(BitSource& inner) : inner_(inner) {}
  int take(double p_one) override {
    const int v = inner_.take(p_one);
    log.push_back(static_cast<std::uint8_t>(v));
    return v;
  }
  std::vector<std::uint8_t> log;

 private:
  BitSource& inner_;
};

Shot simplified_shot(const ServerCompilation& comp, const StateVector& init,
                     BitSource& bits) {
  RecordingBitSource rec_bits(bits);
  StateVector st = init;
  cqsim::append_zero_qubits(st, 2);
  cqsim::RunRecord rec = cqsim::run(comp.server_circuit, std::move(st), rec_bits);
  Shot shot;
  const int m = comp.n_cbits_orig, n = comp.n_main;
  shot.enc = cqsim::cbit_string({rec.cbits.begin(), rec.cbits.begin() + m});
  shot.dec = cqsim::cbit_string(
      {rec.cbits.begin() + comp.dec_offset, rec.cbits.begin() + comp.dec_offset + m});
  shot.initial_key.x.assign(n, 0);
  shot.initial_key.z.assign(n, 0);
  for (int i = 0; i < comp.n_protected; ++i) {
    shot.initial_key.x[i] = rec_bits.log[i];
    shot.initial_key.z[i] = rec_bits.log[comp.n_protected + i];
  }
  shot.final_key.x.assign(rec.cbits.begin() + comp.xkey_offset,
                          rec.cbits.begin() + comp.xkey_offset + n);
  shot.final_key.z.assign(rec.cbits.begin() + comp.zkey_offset,
                          rec.cbits.begin() + comp.zkey_offset + n);
  int l = 0;
  for (std::size_t i = 0; i + 1 < rec.measurements.size(); ++i) {
    // Bell outcomes appear as consecutive measurements of (b1, b2).
    if (rec.measurements[i].qubit == comp.n_main &&
        rec.measurements[i + 1].qubit == comp.n_main + 1) {
      shot.bell.push_back(
          {++l, rec.measurements[i + 1].outcome, rec.measurements[i].outcome});
      ++i;
    }
  }
  return shot;
}

Shot run_one(const ServerCompilation& comp, const StateVector& init,
             BitSource& bits) {
  return comp.mode == Mode::Realistic ? realistic_shot(comp, init, bits)
                                      : simplified_shot(comp, init, bits);
}

}  // namespace

QheResult run_qhe(const Circuit& circuit, const StateVector& init, Mode mode,
                  std::uint64_t shots, std::uint64_t seed, int n_protected,
                  bool trace_keys) {
  const ServerCompilation comp = compile_server(circuit, mode, n_protected);
  QheResult res;
  res.report = xor_report(compose_clifford(comp.script));
  for (std::uint64_t k = 0; k < shots; ++k) {
    cqsim::Prng rng = cqsim::shot_rng(seed, k);
    cqsim::RandomBitSource bits(rng);
    Shot shot = run_one(comp, init, bits);
    ++res.encrypted_hist[shot.enc];
    ++res.decrypted_hist[shot.dec];
    if (trace_keys)
      res.traces.push_back({std::move(shot.initial_key), std::move(shot.final_key),
                            std::move(shot.bell), std::move(shot.enc),
                            std::move(shot.dec)});
  }
  return res;
}

QheDistributions enumerate_qhe(const Circuit& circuit, const StateVector& init,
                               Mode mode, int n_protected) {
  const ServerCompilation comp = compile_server(circuit, mode, n_protected);
  QheDistributions dist;
  Shot shot;
  cqsim::for_each_branch(
      [&](BitSource& bits) { shot = run_one(comp, init, bits); },
      [&](double p) {
        dist.encrypted[shot.enc] += p;
        dist.decrypted[shot.dec] += p;
      });
  return dist;
}

double mixedness_check(const StateVector& state, bool x_only) {
  const int n = state.n_qubits();
  if (n > 3) throw std::invalid_argument("mixedness_check: n must be <= 3");
  const std::uint64_t dim = state.dim();
  std::vector<cqsim::cplx> rho(dim * dim, cqsim::cplx{});
  const int key_bits = x_only ? n : 2 * n;
  const std::uint64_t n_keys = std::uint64_t(1) << key_bits;
  for (std::uint64_t kv = 0; kv < n_keys; ++kv) {
    PauliKey key;
    key.x.resize(n);
    key.z.assign(n, 0);
    for (int i = 0; i < n; ++i) key.x[i] = static_cast<std::uint8_t>((kv >> i) & 1);
    if (!x_only)
      for (int i = 0; i < n; ++i)
        key.z[i] = static_cast<std::uint8_t>((kv >> (n + i)) & 1);
    const StateVector e = encrypt(state, key);
    for (std::uint64_t r = 0; r < dim; ++r)
      for (std::uint64_t c = 0; c < dim; ++c)
        rho[r * dim + c] += e.amp(r) * std::conj(e.amp(c));
  }
  double dev = 0.0;
  for (std::uint64_t r = 0; r < dim; ++r) {
    for (std::uint64_t c = 0; c < dim; ++c) {
      cqsim::cplx want = r == c ? cqsim::cplx{1.0 / static_cast<double>(dim), 0.0}
                                : cqsim::cplx{};
      dev = std::max(dev, std::abs(rho[r * dim + c] / static_cast<double>(n_keys) - want));
    }
  }
  return dev;
}

}  // namespace qhe
