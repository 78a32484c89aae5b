#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "cqsim/simulate.hpp"
#include "qhe/qhe.hpp"

using namespace qhe;
using cqsim::Circuit;
using cqsim::GateKind;
using cqsim::StateVector;

namespace {

StateVector random_state(int n, cqsim::Prng& rng) {
  std::vector<cqsim::cplx> a(std::size_t(1) << n);
  for (auto& v : a) v = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  StateVector s = StateVector::from_amplitudes(n, std::move(a));
  s.renormalize();
  return s;
}

PauliKey key_of(std::vector<int> x, std::vector<int> z) {
  PauliKey k;
  for (int v : x) k.x.push_back(static_cast<std::uint8_t>(v));
  for (int v : z) k.z.push_back(static_cast<std::uint8_t>(v));
  return k;
}

double dist_maps(const std::map<std::string, double>& a,
                 const std::map<std::string, double>& b) {
  double d = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    d = std::max(d, std::abs(v - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) d = std::max(d, std::abs(v));
  return d;
}

}  // namespace

TEST_CASE("key update worked examples") {
  PauliKey k = key_of({1}, {0});
  update_key_clifford(k, GateKind::H, {0});
  CHECK(k == key_of({0}, {1}));

  k = key_of({1}, {1});
  update_key_clifford(k, GateKind::S, {0});
  CHECK(k == key_of({1}, {0}));

  k = key_of({1, 0}, {1, 1});
  update_key_clifford(k, GateKind::CNOT, {0, 1});
  CHECK(k == key_of({1, 1}, {0, 1}));

  k = key_of({1}, {0});
  update_key_t(k, 0, 0, 0, false);
  CHECK(k == key_of({1}, {1}));

  k = key_of({1}, {0});
  update_key_t(k, 0, 1, 1, true);
  CHECK(k == key_of({0}, {1}));

  k = key_of({1}, {1});
  update_key_nonunitary(k, false, 0);
  CHECK(k == key_of({1}, {0}));
  update_key_nonunitary(k, true, 0);
  CHECK(k == key_of({0}, {0}));
}

TEST_CASE("Clifford gates commute with the pad up to the key update") {
  cqsim::Prng rng(11);
  // Single-qubit gates, all 4 keys.
  for (GateKind g : {GateKind::X, GateKind::Z, GateKind::H, GateKind::S,
                     GateKind::Sdg}) {
    for (int kx = 0; kx < 2; ++kx)
      for (int kz = 0; kz < 2; ++kz) {
        StateVector psi = random_state(1, rng);
        PauliKey k = key_of({kx}, {kz});
        StateVector lhs = encrypt(psi, k);
        cqsim::apply_gate(lhs, g, std::array<int, 1>{0});
        PauliKey k2 = k;
        update_key_clifford(k2, g, {0});
        StateVector plain = psi;
        cqsim::apply_gate(plain, g, std::array<int, 1>{0});
        StateVector rhs = encrypt(plain, k2);
        CHECK(cqsim::distance_up_to_phase(lhs, rhs) < 1e-12);
      }
  }
  // CNOT, all 16 keys.
  for (int bits = 0; bits < 16; ++bits) {
    StateVector psi = random_state(2, rng);
    PauliKey k = key_of({bits & 1, (bits >> 1) & 1},
                        {(bits >> 2) & 1, (bits >> 3) & 1});
    StateVector lhs = encrypt(psi, k);
    cqsim::apply_gate(lhs, GateKind::CNOT, std::array<int, 2>{0, 1});
    PauliKey k2 = k;
    update_key_clifford(k2, GateKind::CNOT, {0, 1});
    StateVector plain = psi;
    cqsim::apply_gate(plain, GateKind::CNOT, std::array<int, 2>{0, 1});
    StateVector rhs = encrypt(plain, k2);
    CHECK(cqsim::distance_up_to_phase(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("T and Tdg teleportation is exact for every key and Bell outcome") {
  cqsim::Prng rng(7);
  for (bool dagger : {false, true}) {
    Circuit c(1, 0);
    c.gate(dagger ? GateKind::Tdg : GateKind::T, {0});
    const ServerCompilation comp = compile_server(c, Mode::Realistic);
    const StateVector phi = random_state(1, rng);
    StateVector want = phi;
    cqsim::apply_gate(want, dagger ? GateKind::Tdg : GateKind::T,
                      std::array<int, 1>{0});
    for (int kx = 0; kx < 2; ++kx)
      for (int kz = 0; kz < 2; ++kz) {
        const PauliKey k = key_of({kx}, {kz});
        StateVector enc = encrypt(phi, k);
        cqsim::append_zero_qubits(enc, 2);
        cqsim::Prng dummy(0);
        cqsim::RandomBitSource nobits(dummy);
        cqsim::RunRecord rec = cqsim::run(comp.server_circuit, enc, nobits);
        int branches = 0;
        cqsim::for_each_branch(
            [&](cqsim::BitSource& bits) {
              ClientResult res = client_decrypt_run(comp, rec.state, {}, k, bits,
                                                    /*decrypt_state=*/true);
              REQUIRE(res.bell_outcomes.size() == 1);
              StateVector out = res.state;
              cqsim::drop_qubit(out, 2, res.bell_outcomes[0].r_a);
              cqsim::drop_qubit(out, 1, res.bell_outcomes[0].r_b);
              CHECK(cqsim::distance_up_to_phase(out, want) < 1e-12);
              ++branches;
            },
            [](double) {});
        CHECK(branches == 4);  // both Bell bits are always fair coins
      }
  }
}

TEST_CASE("composed script matches per-gate replay on random circuits") {
  cqsim::Prng rng(2026);
  const std::array<GateKind, 8> gates{GateKind::X,   GateKind::Z, GateKind::H,
                                      GateKind::S,   GateKind::Sdg,
                                      GateKind::T,   GateKind::Tdg,
                                      GateKind::CNOT};
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 4);
    const int len = 20 + static_cast<int>(rng.uniform() * 180);
    Circuit c(n, n);
    for (int i = 0; i < len; ++i) {
      const double r = rng.uniform();
      const int q = static_cast<int>(rng.uniform() * n);
      if (r < 0.08) {
        c.measure(q, q);
      } else if (r < 0.14) {
        c.reset(q);
      } else {
        GateKind g = gates[static_cast<std::size_t>(rng.uniform() * 8)];
        if (g == GateKind::CNOT && n == 1) g = GateKind::H;
        if (g == GateKind::CNOT) {
          int t = static_cast<int>(rng.uniform() * n);
          while (t == q) t = static_cast<int>(rng.uniform() * n);
          c.gate(g, {q, t});
        } else {
          c.gate(g, {q});
        }
      }
    }
    const ServerCompilation comp = compile_server(c, Mode::Realistic);
    const KeyUpdateScript composed = compose_clifford(comp.script);
    CHECK(static_cast<int>(composed.steps.size()) == 2 * comp.L + 1);
    for (int rep = 0; rep < 20; ++rep) {
      PauliKey k = gen_key(n, rng);
      std::vector<BellOutcome> outs;
      for (int l = 1; l <= comp.L; ++l) outs.push_back({l, rng.bit(), rng.bit()});
      const PauliKey a = apply_script(comp.script, k, outs);
      const PauliKey b = apply_script(composed, k, outs);
      CHECK(a == b);
    }
  }
}

TEST_CASE("two-qubit H,S,CNOT,T,Sdg,Tdg circuit: composed maps and XOR count") {
  Circuit c(2, 0);
  c.h(0);
  c.s(1);
  c.cx(0, 1);
  c.t(0);
  c.sdg(0);
  c.tdg(0);
  const ServerCompilation comp = compile_server(c, Mode::Realistic);
  const KeyUpdateScript composed = compose_clifford(comp.script);
  REQUIRE(composed.steps.size() == 5);
  REQUIRE(composed.steps[0].kind == KeyUpdateStep::Kind::Map);
  REQUIRE(composed.steps[1].kind == KeyUpdateStep::Kind::T);
  CHECK(!composed.steps[1].dagger);
  REQUIRE(composed.steps[3].kind == KeyUpdateStep::Kind::T);
  CHECK(composed.steps[3].dagger);
  for (int bits = 0; bits < 16; ++bits) {
    const int x1 = bits & 1, x2 = (bits >> 1) & 1;
    const int z1 = (bits >> 2) & 1, z2 = (bits >> 3) & 1;
    const PauliKey k = key_of({x1, x2}, {z1, z2});
    const PauliKey f1 = composed.steps[0].map.apply(k);
    CHECK(f1 == key_of({z1, x2 ^ z1}, {x1 ^ x2 ^ z2, x2 ^ z2}));
    const PauliKey f2 = composed.steps[2].map.apply(k);
    CHECK(f2 == key_of({x1, x2}, {x1 ^ z1, z2}));
    const PauliKey f3 = composed.steps[4].map.apply(k);
    CHECK(f3 == k);
  }
  const XorCountReport rep = xor_report(composed);
  CHECK(rep.L == 2);
  CHECK(rep.n == 2);
  CHECK(rep.xor_ops == 10);
  CHECK(rep.bound == 42);
  CHECK(rep.xor_ops <= rep.bound);
}

TEST_CASE("realistic and simplified modes give identical exact distributions") {
  cqsim::Prng rng(5);
  Circuit c(2, 2);
  c.h(0);
  c.t(0);
  c.cx(0, 1);
  c.tdg(1);
  c.s(1);
  c.h(1);
  c.measure(0, 0);
  c.measure(1, 1);
  const StateVector init = random_state(2, rng);
  const QheDistributions a = enumerate_qhe(c, init, Mode::Realistic);
  const QheDistributions b = enumerate_qhe(c, init, Mode::Simplified);
  CHECK(dist_maps(a.encrypted, b.encrypted) < 1e-9);
  CHECK(dist_maps(a.decrypted, b.decrypted) < 1e-9);
}

TEST_CASE("decrypted distribution equals the plain circuit's distribution") {
  cqsim::Prng rng(9);
  Circuit c(3, 3);
  c.h(0);
  c.t(0);
  c.cx(0, 1);
  c.measure(1, 1);
  c.reset(1);
  c.h(2);
  c.tdg(2);
  c.cx(2, 1);
  c.s(0);
  c.measure(0, 0);
  c.measure(2, 2);
  const StateVector init = random_state(3, rng);
  const std::map<std::string, double> plain = cqsim::enumerate_cbits(c, init);
  for (Mode mode : {Mode::Realistic, Mode::Simplified}) {
    const QheDistributions d = enumerate_qhe(c, init, mode);
    CHECK(dist_maps(d.decrypted, plain) < 1e-9);
    double total = 0.0;
    for (const auto& [k, v] : d.encrypted) total += v;
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("unprotected ancillas: partial pad still decrypts correctly") {
  cqsim::Prng rng(13);
  Circuit c(2, 2);
  c.h(0);
  c.t(0);
  c.cx(0, 1);  // qubit 1 acts as an unencrypted ancilla
  c.measure(0, 0);
  c.measure(1, 1);
  StateVector init = random_state(1, rng);
  cqsim::append_zero_qubits(init, 1);
  const std::map<std::string, double> plain = cqsim::enumerate_cbits(c, init);
  for (Mode mode : {Mode::Realistic, Mode::Simplified}) {
    const QheDistributions d = enumerate_qhe(c, init, mode, /*n_protected=*/1);
    CHECK(dist_maps(d.decrypted, plain) < 1e-9);
  }
}

TEST_CASE("XOR cost never exceeds the quasi-compactness bound") {
  cqsim::Prng rng(3);
  const std::array<GateKind, 8> gates{GateKind::X,   GateKind::Z, GateKind::H,
                                      GateKind::S,   GateKind::Sdg,
                                      GateKind::T,   GateKind::Tdg,
                                      GateKind::CNOT};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5);
    Circuit c(n, n);
    const int len = 10 + static_cast<int>(rng.uniform() * 300);
    for (int i = 0; i < len; ++i) {
      const double r = rng.uniform();
      const int q = static_cast<int>(rng.uniform() * n);
      if (r < 0.05) {
        c.measure(q, q);
      } else if (r < 0.1) {
        c.reset(q);
      } else {
        GateKind g = gates[static_cast<std::size_t>(rng.uniform() * 8)];
        if (g == GateKind::CNOT) {
          int t = static_cast<int>(rng.uniform() * n);
          while (t == q) t = static_cast<int>(rng.uniform() * n);
          c.gate(g, {q, t});
        } else {
          c.gate(g, {q});
        }
      }
    }
    const ServerCompilation comp = compile_server(c, Mode::Realistic);
    const XorCountReport rep = xor_report(compose_clifford(comp.script));
    CHECK(rep.xor_ops <= rep.bound);
    CHECK(rep.L == c.t_count());
  }
}

TEST_CASE("padding with all keys yields the maximally mixed state") {
  cqsim::Prng rng(21);
  for (int n : {1, 2, 3}) {
    const StateVector psi = random_state(n, rng);
    CHECK(mixedness_check(psi) < 1e-12);
  }
  // X-only padding is not perfectly hiding: |+> is invariant under X.
  StateVector plus = StateVector::zero_state(1);
  cqsim::apply_gate(plus, GateKind::H, std::array<int, 1>{0});
  CHECK(mixedness_check(plus, /*x_only=*/true) > 0.4);
  CHECK(mixedness_check(StateVector::zero_state(1), /*x_only=*/true) < 1e-12);
}

TEST_CASE("single-T realistic compilation structure") {
  Circuit c(2, 0);
  c.h(0);
  c.t(1);
  c.cx(0, 1);
  const ServerCompilation comp = compile_server(c, Mode::Realistic);
  CHECK(comp.L == 1);
  CHECK(comp.server_circuit.n_qubits() == 4);
  REQUIRE(comp.bell_qubits.size() == 1);
  CHECK(comp.bell_qubits[0] == std::pair<int, int>(2, 3));
  const auto& ins = comp.server_circuit.instructions();
  REQUIRE(ins.size() == 6);  // H, then T/H/CNOT/SWAP gadget, then CNOT
  CHECK(ins[1].gate == GateKind::T);
  CHECK(ins[2].gate == GateKind::H);
  CHECK(ins[2].qubits == std::vector<int>{2});
  CHECK(ins[3].gate == GateKind::CNOT);
  CHECK(ins[3].qubits == (std::vector<int>{2, 3}));
  CHECK(ins[4].gate == GateKind::SWAP);
  CHECK(ins[4].qubits == (std::vector<int>{1, 2}));
}

TEST_CASE("Clifford-only circuit (L = 0) needs no ancillas") {
  cqsim::Prng rng(31);
  Circuit c(2, 2);
  c.h(0);
  c.cx(0, 1);
  c.s(1);
  c.measure(0, 0);
  c.measure(1, 1);
  const ServerCompilation comp = compile_server(c, Mode::Realistic);
  CHECK(comp.L == 0);
  CHECK(comp.server_circuit.n_qubits() == 2);
  const KeyUpdateScript composed = compose_clifford(comp.script);
  CHECK(composed.steps.size() == 1);
  const StateVector init = random_state(2, rng);
  const std::map<std::string, double> plain = cqsim::enumerate_cbits(c, init);
  const QheDistributions d = enumerate_qhe(c, init, Mode::Realistic);
  CHECK(dist_maps(d.decrypted, plain) < 1e-9);
}

TEST_CASE("compile_server rejects non-evaluable instructions") {
  Circuit c(3, 1);
  c.ccx(0, 1, 2);
  CHECK_THROWS(compile_server(c, Mode::Realistic));
  Circuit c2(2, 1);
  c2.swap(0, 1);
  CHECK_THROWS(compile_server(c2, Mode::Realistic));
  Circuit c3(1, 1);
  c3.ry(0, 0.3);
  CHECK_THROWS(compile_server(c3, Mode::Simplified));
  Circuit c4(1, 1);
  c4.add(cqsim::Instruction::cl_rand(0));
  CHECK_THROWS(compile_server(c4, Mode::Realistic));
}

TEST_CASE("per-shot traces are consistent with the key-update script") {
  cqsim::Prng rng(17);
  Circuit c(2, 2);
  c.h(0);
  c.t(0);
  c.cx(0, 1);
  c.tdg(1);
  c.measure(0, 0);
  c.measure(1, 1);
  const StateVector init = random_state(2, rng);
  for (Mode mode : {Mode::Realistic, Mode::Simplified}) {
    const ServerCompilation comp = compile_server(c, mode);
    const QheResult res = run_qhe(c, init, mode, 50, 99, -1, /*trace_keys=*/true);
    REQUIRE(res.traces.size() == 50);
    for (const ShotTrace& tr : res.traces) {
      REQUIRE(tr.bell_outcomes.size() == 2);
      const PauliKey replay =
          apply_script(comp.script, tr.initial_key, tr.bell_outcomes);
      CHECK(replay == tr.final_key);
      CHECK(tr.encrypted.size() == 2);
      CHECK(tr.decrypted.size() == 2);
    }
  }
}

TEST_CASE("sampled histograms are deterministic in the seed") {
  Circuit c(1, 1);
  c.h(0);
  c.t(0);
  c.measure(0, 0);
  const StateVector init = StateVector::zero_state(1);
  const QheResult a = run_qhe(c, init, Mode::Realistic, 200, 4242);
  const QheResult b = run_qhe(c, init, Mode::Realistic, 200, 4242);
  CHECK(a.encrypted_hist == b.encrypted_hist);
  CHECK(a.decrypted_hist == b.decrypted_hist);
  std::uint64_t total = 0;
  for (const auto& [k, v] : a.decrypted_hist) total += v;
  CHECK(total == 200);
}
