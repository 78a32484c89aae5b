#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>

#include "cqsim/circuit.hpp"
#include "cqsim/json_io.hpp"
#include "cqsim/rng.hpp"
#include "cqsim/simulate.hpp"
#include "cqsim/statevector.hpp"

using namespace cqsim;

namespace {

StateVector random_state(int nq, std::uint64_t seed) {
  Prng rng(seed);
  std::vector<cplx> a(std::uint64_t(1) << nq);
  for (auto& c : a) c = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
  StateVector s = StateVector::from_amplitudes(nq, std::move(a));
  s.renormalize();
  return s;
}

double dist(const StateVector& a, const StateVector& b) {
  double d = 0.0;
  for (std::uint64_t i = 0; i < a.dim(); ++i)
    d = std::max(d, std::abs(a.amp(i) - b.amp(i)));
  return d;
}

}  // namespace

TEST_CASE("single-qubit gate actions on basis states") {
  StateVector s = StateVector::zero_state(1);
  apply_gate(s, GateKind::X, std::array<int, 1>{0});
  CHECK(std::abs(s.amp(1) - 1.0) < 1e-15);

  s = StateVector::zero_state(1);
  apply_gate(s, GateKind::H, std::array<int, 1>{0});
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.amp(0) - r) < 1e-15);
  CHECK(std::abs(s.amp(1) - r) < 1e-15);

  apply_gate(s, GateKind::T, std::array<int, 1>{0});
  CHECK(std::abs(s.amp(1) - r * std::exp(cplx{0, M_PI / 4})) < 1e-15);
}

TEST_CASE("gate algebra: SS=Z, TT=S, HH=I, XX=I on random states") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    StateVector s = random_state(3, seed);
    const int q = static_cast<int>(seed % 3);
    auto on = [&](StateVector v, GateKind g) {
      apply_gate(v, g, std::array<int, 1>{q});
      return v;
    };
    CHECK(dist(on(on(s, GateKind::S), GateKind::S), on(s, GateKind::Z)) < 1e-12);
    CHECK(dist(on(on(s, GateKind::T), GateKind::T), on(s, GateKind::S)) < 1e-12);
    CHECK(dist(on(on(s, GateKind::H), GateKind::H), s) < 1e-12);
    CHECK(dist(on(on(s, GateKind::X), GateKind::X), s) < 1e-12);
    CHECK(dist(on(on(s, GateKind::S), GateKind::Sdg), s) < 1e-12);
    CHECK(dist(on(on(s, GateKind::T), GateKind::Tdg), s) < 1e-12);
  }
}

TEST_CASE("SWAP equals three CNOTs on random 2-qubit states") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    StateVector a = random_state(2, seed);
    StateVector b = a;
    apply_gate(a, GateKind::SWAP, std::array<int, 2>{0, 1});
    apply_gate(b, GateKind::CNOT, std::array<int, 2>{0, 1});
    apply_gate(b, GateKind::CNOT, std::array<int, 2>{1, 0});
    apply_gate(b, GateKind::CNOT, std::array<int, 2>{0, 1});
    CHECK(dist(a, b) < 1e-12);
  }
}

TEST_CASE("Toffoli flips target only on |11> controls") {
  for (std::uint64_t idx = 0; idx < 8; ++idx) {
    StateVector s = StateVector::basis_state(3, idx);
    apply_gate(s, GateKind::Toffoli, std::array<int, 3>{0, 1, 2});
    const std::uint64_t expect = (idx >> 1) == 3 ? idx ^ 1 : idx;
    CHECK(std::abs(s.amp(expect) - 1.0) < 1e-15);
  }
}

TEST_CASE("norm preserved through a deep random circuit") {
  Prng rng(7);
  StateVector s = StateVector::zero_state(4);
  const GateKind gs[] = {GateKind::X,   GateKind::Z,    GateKind::H,
                         GateKind::S,   GateKind::Sdg,  GateKind::T,
                         GateKind::Tdg, GateKind::CNOT, GateKind::SWAP};
  for (int i = 0; i < 500; ++i) {
    const GateKind g = gs[static_cast<int>(rng.uniform() * 9)];
    int a = static_cast<int>(rng.uniform() * 4);
    int b = (a + 1 + static_cast<int>(rng.uniform() * 3)) % 4;
    if (gate_arity(g) == 1)
      apply_gate(s, g, std::array<int, 1>{a});
    else
      apply_gate(s, g, std::array<int, 2>{a, b});
  }
  CHECK(std::abs(s.norm_sq() - 1.0) < 1e-12);
}

TEST_CASE("measurement: eigenstate, Bell correlation, binomial frequency") {
  Prng rng(42);
  RandomBitSource bits(rng);

  StateVector s = StateVector::basis_state(1, 1);
  CHECK(measure(s, 0, bits) == 1);
  CHECK(std::abs(s.amp(1) - 1.0) < 1e-15);

  // Bell pair: outcomes on the two qubits always agree.
  for (int trial = 0; trial < 20; ++trial) {
    StateVector bell = StateVector::zero_state(2);
    apply_gate(bell, GateKind::H, std::array<int, 1>{0});
    apply_gate(bell, GateKind::CNOT, std::array<int, 2>{0, 1});
    const int m0 = measure(bell, 0, bits);
    const int m1 = measure(bell, 1, bits);
    CHECK(m0 == m1);
  }

  std::uint64_t ones = 0;
  const std::uint64_t shots = 20000;
  for (std::uint64_t k = 0; k < shots; ++k) {
    Prng r = shot_rng(99, k);
    RandomBitSource b(r);
    StateVector plus = StateVector::zero_state(1);
    apply_gate(plus, GateKind::H, std::array<int, 1>{0});
    ones += static_cast<std::uint64_t>(measure(plus, 0, b));
  }
  const double freq = static_cast<double>(ones) / static_cast<double>(shots);
  CHECK(std::abs(freq - 0.5) < 0.02);
}

TEST_CASE("reset leaves qubit in |0> with correct marginal") {
  Prng rng(5);
  RandomBitSource bits(rng);

  StateVector s = StateVector::basis_state(1, 1);
  reset(s, 0, bits);
  CHECK(std::abs(s.amp(0) - 1.0) < 1e-15);

  StateVector p = StateVector::zero_state(2);
  apply_gate(p, GateKind::H, std::array<int, 1>{1});
  reset(p, 1, bits);
  CHECK(std::abs(p.amp(0) - 1.0) < 1e-15);

  int zeros = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    StateVector bell = StateVector::zero_state(2);
    apply_gate(bell, GateKind::H, std::array<int, 1>{0});
    apply_gate(bell, GateKind::CNOT, std::array<int, 2>{0, 1});
    reset(bell, 0, bits);
    Prng r2(static_cast<std::uint64_t>(trial) + 1000);
    RandomBitSource b2(r2);
    zeros += 1 - measure(bell, 1, b2);
  }
  CHECK(std::abs(zeros / 2000.0 - 0.5) < 0.05);
}

TEST_CASE("run executes classical-quantum instructions in order") {
  Circuit c(1, 2);
  c.add(Instruction::cl_rand(0));
  c.add(Instruction::c_if(GateKind::X, {0}, 0));
  c.measure(0, 1);
  for (std::uint64_t k = 0; k < 50; ++k) {
    Prng rng = shot_rng(3, k);
    RandomBitSource bits(rng);
    RunRecord rec = run(c, bits);
    CHECK(rec.cbits[0] == rec.cbits[1]);
  }

  Circuit empty(1, 1);
  Prng rng(0);
  RandomBitSource bits(rng);
  RunRecord rec = run(empty, bits);
  CHECK(std::abs(rec.state.amp(0) - 1.0) < 1e-15);
  CHECK(rec.cbits[0] == 0);
}

TEST_CASE("classical bit ops: not, cnot, swap, reset") {
  Circuit c(1, 3);
  c.add(Instruction::cl_not(0));        // c0=1
  c.add(Instruction::cl_cnot(0, 1));    // c1=1
  c.add(Instruction::cl_swap(1, 2));    // c1=0, c2=1
  c.add(Instruction::cl_cnot(2, 0));    // c0=0
  c.add(Instruction::cl_reset(2));      // c2=0
  Prng rng(0);
  RandomBitSource bits(rng);
  RunRecord rec = run(c, bits);
  CHECK(cbit_string(rec.cbits) == "000");
}

TEST_CASE("sample: determinism and binomial bound") {
  Circuit c(1, 1);
  c.h(0);
  c.measure(0, 0);
  auto h1 = sample_cbits(c, 20000, 1234);
  auto h2 = sample_cbits(c, 20000, 1234);
  CHECK(h1 == h2);
  CHECK(h1["0"] > 9700);
  CHECK(h1["0"] < 10300);
  CHECK(h1["1"] > 9700);
  CHECK(h1["1"] < 10300);

  // Deterministic circuit, shots=1 via the measured-qubits interface.
  Circuit d(2, 0);
  d.x(1);
  const int mq[] = {0, 1};
  auto h3 = sample(d, StateVector::zero_state(2), 1, mq, 7);
  CHECK(h3.size() == 1);
  CHECK(h3["01"] == 1);
}

TEST_CASE("branch enumeration gives exact Born probabilities") {
  Circuit c(2, 2);
  c.h(0);
  c.cx(0, 1);
  c.measure(0, 0);
  c.measure(1, 1);
  auto dist = enumerate_cbits(c);
  CHECK(dist.size() == 2);
  CHECK(std::abs(dist["00"] - 0.5) < 1e-15);
  CHECK(std::abs(dist["11"] - 0.5) < 1e-15);

  // Biased single qubit: RY rotation.
  Circuit b(1, 1);
  b.ry(0, 2.0 * std::acos(std::sqrt(0.25)));
  b.measure(0, 0);
  auto db = enumerate_cbits(b);
  CHECK(std::abs(db["0"] - 0.25) < 1e-12);
  CHECK(std::abs(db["1"] - 0.75) < 1e-12);
}

TEST_CASE("deferred measurement: mid-circuit vs end-of-circuit distribution") {
  // Measured qubit never reused afterwards: distributions must agree exactly.
  auto build = [](bool defer) {
    Circuit c(3, 3);
    c.h(0);
    c.cx(0, 1);
    c.t(1);
    if (!defer) c.measure(0, 0);
    c.h(2);
    c.cx(2, 1);
    c.h(1);
    if (defer) c.measure(0, 0);
    c.measure(1, 1);
    c.measure(2, 2);
    return c;
  };
  auto early = enumerate_cbits(build(false));
  auto late = enumerate_cbits(build(true));
  CHECK(early.size() == late.size());
  for (const auto& [k, p] : early) CHECK(std::abs(late[k] - p) < 1e-12);
}

TEST_CASE("ClassicalRandomInit equals the H+measure coin emulation") {
  Circuit native(0, 1);
  native.add(Instruction::cl_rand(0));
  Circuit emulated(1, 1);
  emulated.h(0);
  emulated.measure(0, 0);
  auto dn = enumerate_cbits(native);
  auto de = enumerate_cbits(emulated);
  CHECK(std::abs(dn["0"] - de["0"]) < 1e-15);
  CHECK(std::abs(dn["1"] - de["1"]) < 1e-15);
}

TEST_CASE("append/drop/tensor bookkeeping") {
  StateVector s = StateVector::basis_state(2, 0b10);
  append_zero_qubits(s, 1);
  CHECK(s.n_qubits() == 3);
  CHECK(std::abs(s.amp(0b100) - 1.0) < 1e-15);

  drop_qubit(s, 2, 0);
  CHECK(s.n_qubits() == 2);
  CHECK(std::abs(s.amp(0b10) - 1.0) < 1e-15);

  StateVector a = StateVector::basis_state(1, 1);
  StateVector b = StateVector::basis_state(2, 0b01);
  StateVector ab = tensor(a, b);
  CHECK(std::abs(ab.amp(0b101) - 1.0) < 1e-15);

  // Drop a middle qubit from a superposition entangled only trivially.
  StateVector t = StateVector::zero_state(3);
  apply_gate(t, GateKind::H, std::array<int, 1>{0});
  apply_gate(t, GateKind::X, std::array<int, 1>{1});
  drop_qubit(t, 1, 1);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(t.amp(0b00) - r) < 1e-15);
  CHECK(std::abs(t.amp(0b10) - r) < 1e-15);
}

TEST_CASE("distance_up_to_phase ignores global phase") {
  StateVector a = random_state(3, 11);
  StateVector b = a;
  const cplx phase = std::exp(cplx{0, 1.234});
  for (auto& c : b.amplitudes()) c *= phase;
  CHECK(distance_up_to_phase(a, b) < 1e-12);
  apply_gate(b, GateKind::X, std::array<int, 1>{0});
  CHECK(distance_up_to_phase(a, b) > 1e-3);
}

TEST_CASE("circuit inversion undoes the forward circuit") {
  Circuit c(3, 0);
  c.h(0);
  c.t(1);
  c.cx(0, 2);
  c.sdg(2);
  c.ry(1, 0.7);
  c.ccx(0, 1, 2);
  Circuit inv = c.inverted();
  StateVector s = random_state(3, 21);
  Prng rng(0);
  RandomBitSource bits(rng);
  StateVector fwd = run(c, s, bits).state;
  StateVector back = run(inv, fwd, bits).state;
  CHECK(dist(back, s) < 1e-12);
}

TEST_CASE("circuit JSON round-trip") {
  Circuit c(3, 2);
  c.h(0);
  c.t(1);
  c.cx(0, 1);
  c.ccx(0, 1, 2);
  c.ry(2, 0.5);
  c.measure(1, 0);
  c.add(Instruction::c_if(GateKind::S, {2}, 0));
  c.add(Instruction::cl_cnot(0, 1));
  c.add(Instruction::cl_rand(1));
  c.reset(1);
  const std::string text = circuit_to_json(c);
  Circuit back = circuit_from_json(text);
  REQUIRE(back.size() == c.size());
  CHECK(back.n_qubits() == 3);
  CHECK(back.n_cbits() == 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& x = c.instructions()[i];
    const auto& y = back.instructions()[i];
    CHECK(x.op == y.op);
    CHECK(x.gate == y.gate);
    CHECK(x.qubits == y.qubits);
    CHECK(x.cbits == y.cbits);
    CHECK(x.param == doctest::Approx(y.param));
  }
}

TEST_CASE("validation errors") {
  Circuit c(2, 1);
  CHECK_THROWS(c.gate(GateKind::CNOT, {0, 0}));
  CHECK_THROWS(c.gate(GateKind::CNOT, {0, 2}));
  CHECK_THROWS(c.gate(GateKind::H, {0, 1}));
  CHECK_THROWS(c.measure(0, 5));
  StateVector s = StateVector::zero_state(2);
  CHECK_THROWS(apply_gate(s, GateKind::H, std::array<int, 1>{2}));
  const int mq[] = {0};
  Circuit ok(1, 0);
  CHECK_THROWS(sample(ok, StateVector::zero_state(1), 1, std::span<const int>{}, 0));
  CHECK_NOTHROW(sample(ok, StateVector::zero_state(1), 1, mq, 0));
}
