#include "cqsim/statevector.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace cqsim {

StateVector StateVector::zero_state(int n_qubits) { return basis_state(n_qubits, 0); }

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
  StateVector s;
  s.nq_ = n_qubits;
  s.a_.assign(std::uint64_t(1) << n_qubits, cplx{});
  s.a_.at(index) = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<cplx> amps) {
  if (amps.size() != (std::uint64_t(1) << n_qubits))
    throw std::invalid_argument("amplitude count != 2^q");
  StateVector s;
  s.nq_ = n_qubits;
  s.a_ = std::move(amps);
  return s;
}

double StateVector::norm_sq() const {
  double n = 0.0;
  for (const cplx& c : a_) n += std::norm(c);
  return n;
}

void StateVector::renormalize() {
  const double inv = 1.0 / std::sqrt(norm_sq());
  for (cplx& c : a_) c *= inv;
}

namespace {

void apply1(StateVector& st, const std::array<cplx, 4>& u, int q) {
  auto& a = st.amplitudes();
  const std::uint64_t n = a.size();
  const std::uint64_t bit = std::uint64_t(1) << st.bit_pos(q);
  // Diagonal fast path (Z, S, T, RZ phases).
  if (u[1] == cplx{} && u[2] == cplx{}) {
    if (u[0] == cplx{1.0, 0.0}) {
      for (std::uint64_t i = 0; i < n; ++i)
        if (i & bit) a[i] *= u[3];
    } else {
      for (std::uint64_t i = 0; i < n; ++i) a[i] *= (i & bit) ? u[3] : u[0];
    }
    return;
  }
  for (std::uint64_t base = 0; base < n; base += bit << 1) {
    for (std::uint64_t off = 0; off < bit; ++off) {
      const std::uint64_t i0 = base | off, i1 = i0 | bit;
      const cplx a0 = a[i0], a1 = a[i1];
      a[i0] = u[0] * a0 + u[1] * a1;
      a[i1] = u[2] * a0 + u[3] * a1;
    }
  }
}

void apply_h(StateVector& st, int q) {
  auto& a = st.amplitudes();
  const std::uint64_t n = a.size();
  const std::uint64_t bit = std::uint64_t(1) << st.bit_pos(q);
  constexpr double s = 0.70710678118654752440;
  for (std::uint64_t base = 0; base < n; base += bit << 1) {
    for (std::uint64_t off = 0; off < bit; ++off) {
      const std::uint64_t i0 = base | off, i1 = i0 | bit;
      const cplx a0 = a[i0], a1 = a[i1];
      a[i0] = (a0 + a1) * s;
      a[i1] = (a0 - a1) * s;
    }
  }
}

void apply_x(StateVector& st, int q) {
  auto& a = st.amplitudes();
  const std::uint64_t n = a.size();
  const std::uint64_t bit = std::uint64_t(1) << st.bit_pos(q);
  for (std::uint64_t base = 0; base < n; base += bit << 1)
    for (std::uint64_t off = 0; off < bit; ++off)
      std::swap(a[base | off], a[base | off | bit]);
}

// Enumerates the n/4 indices with both given bits clear.
template <typename F>
void for_each_two_bit_rest(std::uint64_t n, std::uint64_t b1, std::uint64_t b2,
                           F&& f) {
  const std::uint64_t hi = std::max(b1, b2), lo = std::min(b1, b2);
  for (std::uint64_t x = 0; x < n; x += hi << 1)
    for (std::uint64_t y = x; y < x + hi; y += lo << 1)
      for (std::uint64_t z = y; z < y + lo; ++z) f(z);
}

void apply_cnot(StateVector& st, int c, int t) {
  auto& a = st.amplitudes();
  const std::uint64_t cb = std::uint64_t(1) << st.bit_pos(c);
  const std::uint64_t tb = std::uint64_t(1) << st.bit_pos(t);
  for_each_two_bit_rest(a.size(), cb, tb, [&](std::uint64_t i) {
    std::swap(a[i | cb], a[i | cb | tb]);
  });
}

void apply_swap(StateVector& st, int p, int q) {
  auto& a = st.amplitudes();
  const std::uint64_t pb = std::uint64_t(1) << st.bit_pos(p);
  const std::uint64_t qb = std::uint64_t(1) << st.bit_pos(q);
  for_each_two_bit_rest(a.size(), pb, qb, [&](std::uint64_t i) {
    std::swap(a[i | pb], a[i | qb]);
  });
}

void apply_toffoli(StateVector& st, int c1, int c2, int t) {
  auto& a = st.amplitudes();
  const std::uint64_t n = a.size();
  const std::uint64_t c1b = std::uint64_t(1) << st.bit_pos(c1);
  const std::uint64_t c2b = std::uint64_t(1) << st.bit_pos(c2);
  const std::uint64_t tb = std::uint64_t(1) << st.bit_pos(t);
  const std::uint64_t mask = c1b | c2b | tb, want = c1b | c2b;
  for (std::uint64_t i = 0; i < n; ++i) {
    if ((i & mask) == want) std::swap(a[i], a[i | tb]);
  }
}

}  // namespace

void apply_gate(StateVector& state, GateKind g, std::span<const int> targets,
                double param) {
  if (static_cast<int>(targets.size()) != gate_arity(g))
    throw std::invalid_argument("apply_gate: arity mismatch");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= state.n_qubits())
      throw std::out_of_range("apply_gate: qubit index out of range");
    for (std::size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i] == targets[j])
        throw std::invalid_argument("apply_gate: duplicate target");
  }
  switch (g) {
    case GateKind::X:
      apply_x(state, targets[0]);
      return;
    case GateKind::H:
      apply_h(state, targets[0]);
      return;
    case GateKind::CNOT:
      apply_cnot(state, targets[0], targets[1]);
      return;
    case GateKind::SWAP:
      apply_swap(state, targets[0], targets[1]);
      return;
    case GateKind::Toffoli:
      apply_toffoli(state, targets[0], targets[1], targets[2]);
      return;
    default:
      apply1(state, gate_matrix1(g, param), targets[0]);
      return;
  }
}

double prob_one(const StateVector& state, int qubit) {
  const auto& a = state.amplitudes();
  const std::uint64_t bit = std::uint64_t(1) << state.bit_pos(qubit);
  double p = 0.0;
  for (std::uint64_t i = 0; i < a.size(); ++i)
    if (i & bit) p += std::norm(a[i]);
  return p;
}

void collapse(StateVector& state, int qubit, int outcome, double prob) {
  assert(prob > 0.0);
  auto& a = state.amplitudes();
  const std::uint64_t bit = std::uint64_t(1) << state.bit_pos(qubit);
  const double inv = 1.0 / std::sqrt(prob);
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    const bool one = (i & bit) != 0;
    if (one == (outcome == 1))
      a[i] *= inv;
    else
      a[i] = cplx{};
  }
}

int measure(StateVector& state, int qubit, BitSource& bits) {
  const double p1 = prob_one(state, qubit);
  const int outcome = bits.take(p1);
  const double p = outcome ? p1 : 1.0 - p1;
  assert(p > 0.0 && "zero-probability branch selected");
  collapse(state, qubit, outcome, p);
  return outcome;
}

void reset(StateVector& state, int qubit, BitSource& bits) {
  const int m = measure(state, qubit, bits);
  if (m == 1) apply_gate(state, GateKind::X, std::array<int, 1>{qubit});
}

void append_zero_qubits(StateVector& state, int k) {
  if (k <= 0) return;
  std::vector<cplx> out(state.dim() << k, cplx{});
  const auto& a = state.amplitudes();
  for (std::uint64_t i = 0; i < a.size(); ++i) out[i << k] = a[i];
  state = StateVector::from_amplitudes(state.n_qubits() + k, std::move(out));
}

void drop_qubit(StateVector& state, int qubit, int outcome) {
  const auto& a = state.amplitudes();
  const int pos = state.bit_pos(qubit);
  const std::uint64_t bit = std::uint64_t(1) << pos;
  const std::uint64_t low = bit - 1;
  std::vector<cplx> out(a.size() >> 1);
  for (std::uint64_t j = 0; j < out.size(); ++j) {
    const std::uint64_t i = ((j & ~low) << 1) | (outcome ? bit : 0) | (j & low);
    out[j] = a[i];
  }
  state = StateVector::from_amplitudes(state.n_qubits() - 1, std::move(out));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<cplx> out(a.dim() * b.dim());
  for (std::uint64_t i = 0; i < a.dim(); ++i)
    for (std::uint64_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a.amp(i) * b.amp(j);
  return StateVector::from_amplitudes(a.n_qubits() + b.n_qubits(), std::move(out));
}

double distance_up_to_phase(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  std::uint64_t imax = 0;
  double best = -1.0;
  for (std::uint64_t i = 0; i < a.dim(); ++i) {
    if (std::norm(a.amp(i)) > best) {
      best = std::norm(a.amp(i));
      imax = i;
    }
  }
  cplx phase{1.0, 0.0};
  if (std::abs(b.amp(imax)) > 1e-300 && std::abs(a.amp(imax)) > 1e-300)
    phase = (a.amp(imax) / std::abs(a.amp(imax))) / (b.amp(imax) / std::abs(b.amp(imax)));
  double d = 0.0;
  for (std::uint64_t i = 0; i < a.dim(); ++i)
    d = std::max(d, std::abs(a.amp(i) - phase * b.amp(i)));
  return d;
}

}  // namespace cqsim
