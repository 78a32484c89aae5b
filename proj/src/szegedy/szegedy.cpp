#include "szegedy/szegedy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace szegedy {

using cqsim::Circuit;
using cqsim::GateKind;
using cqsim::Instruction;
using cqsim::OpCode;

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2i(int v) {
  int n = 0;
  while ((1 << n) < v) ++n;
  return n;
}

}  // namespace

GraphSpec GraphSpec::cycle(int N) {
  if (!is_pow2(N) || N < 2) throw std::invalid_argument("cycle: N must be a power of two >= 2");
  return {GraphKind::Cycle, N, 0};
}

GraphSpec GraphSpec::complete(int N) {
  if (!is_pow2(N) || N < 2)
    throw std::invalid_argument("complete: N must be a power of two >= 2");
  return {GraphKind::Complete, N, 0};
}

GraphSpec GraphSpec::bipartite(int N1, int N2) {
  if (!is_pow2(N1) || !is_pow2(N2) || N2 > N1 || N2 < 1)
    throw std::invalid_argument(
        "bipartite: N1, N2 must be powers of two with N2 <= N1");
  return {GraphKind::Bipartite, N1, N2};
}

int GraphSpec::reg_width() const {
  return kind == GraphKind::Bipartite ? log2i(N) + 1 : log2i(N);
}

int GraphSpec::walk_nodes() const {
  return kind == GraphKind::Bipartite ? 2 * N : N;
}

int GraphSpec::original_nodes() const {
  return kind == GraphKind::Bipartite ? N + N2 : N;
}

oracle::Mat transition_matrix(const GraphSpec& g) {
  const int N = g.walk_nodes();
  oracle::Mat G = oracle::Mat::Zero(N, N);
  switch (g.kind) {
    case GraphKind::Cycle:
      for (int j = 0; j < N; ++j) {
        G(j, (j + N - 1) % N) += 0.5;
        G(j, (j + 1) % N) += 0.5;
      }
      break;
    case GraphKind::Complete:
      for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i)
          if (i != j) G(j, i) = 1.0 / (N - 1);
      break;
    case GraphKind::Bipartite: {
      // Augmented graph on 2*N1 nodes: originals are 0..N1-1 (first side)
      // and N1..N1+N2-1 (second side); padding nodes N1+N2..2*N1-1 connect
      // back to the first side so every column is stochastic.
      const int N1 = g.N, N2 = g.N2;
      for (int i = 0; i < N1; ++i)
        for (int j = 0; j < N2; ++j) G(N1 + j, i) = 1.0 / N2;
      for (int i = N1; i < 2 * N1; ++i)
        for (int j = 0; j < N1; ++j) G(j, i) = 1.0 / N1;
      break;
    }
  }
  oracle::check_stochastic(G);
  return G;
}

// --- decomposition primitives ---

int mcx_ancilla_count(int n_controls) {
  if (n_controls < 2) return 0;
  return std::max(0, n_controls - 2);
}

int mcu_ancilla_count(int n_controls) { return std::max(0, n_controls - 1); }

void emit_ch(Circuit& c, int control, int target) {
  // A^dag on target, CX, A on target, with A = S H T H S^dag H.
  c.sdg(target);
  c.h(target);
  c.tdg(target);
  c.h(target);
  c.s(target);
  c.h(target);
  c.cx(control, target);
  c.h(target);
  c.sdg(target);
  c.h(target);
  c.t(target);
  c.h(target);
  c.s(target);
}

void emit_cry(Circuit& c, int control, int target, double theta) {
  c.ry(target, theta / 2.0);
  c.cx(control, target);
  c.ry(target, -theta / 2.0);
  c.cx(control, target);
}

namespace {

void polarity_wrap(Circuit& c, const std::vector<int>& controls,
                   const std::vector<int>& polarity) {
  for (std::size_t i = 0; i < controls.size(); ++i)
    if (polarity[i] == 0) c.x(controls[i]);
}

void check_controls(const std::vector<int>& controls,
                    const std::vector<int>& polarity,
                    const std::vector<int>& ancillas, int needed,
                    const char* who) {
  if (controls.size() != polarity.size())
    throw std::invalid_argument(std::string(who) + ": polarity size mismatch");
  if (static_cast<int>(ancillas.size()) < needed)
    throw std::invalid_argument(std::string(who) + ": needs " +
                                std::to_string(needed) + " ancillas");
}

void emit_cu(Circuit& c, int control, GateKind u, double param, int target) {
  switch (u) {
    case GateKind::X:
      c.cx(control, target);
      return;
    case GateKind::H:
      emit_ch(c, control, target);
      return;
    case GateKind::RY:
      emit_cry(c, control, target, param);
      return;
    default:
      throw std::invalid_argument("emit_mcu: unsupported controlled gate");
  }
}

}  // namespace

void emit_mcx(Circuit& c, const std::vector<int>& controls,
              const std::vector<int>& polarity, int target,
              const std::vector<int>& ancillas) {
  const int nc = static_cast<int>(controls.size());
  check_controls(controls, polarity, ancillas, mcx_ancilla_count(nc), "emit_mcx");
  polarity_wrap(c, controls, polarity);
  if (nc == 0) {
    c.x(target);
  } else if (nc == 1) {
    c.cx(controls[0], target);
  } else if (nc == 2) {
    c.ccx(controls[0], controls[1], target);
  } else {
    // V-chain: 2*nc-3 Toffolis, ancillas restored by the uncompute half.
    c.ccx(controls[0], controls[1], ancillas[0]);
    for (int j = 2; j <= nc - 2; ++j)
      c.ccx(controls[j], ancillas[j - 2], ancillas[j - 1]);
    c.ccx(controls[nc - 1], ancillas[nc - 3], target);
    for (int j = nc - 2; j >= 2; --j)
      c.ccx(controls[j], ancillas[j - 2], ancillas[j - 1]);
    c.ccx(controls[0], controls[1], ancillas[0]);
  }
  polarity_wrap(c, controls, polarity);
}

void emit_mcu(Circuit& c, const std::vector<int>& controls,
              const std::vector<int>& polarity, GateKind u, double param,
              int target, const std::vector<int>& ancillas) {
  const int nc = static_cast<int>(controls.size());
  if (nc < 1) throw std::invalid_argument("emit_mcu: needs at least one control");
  check_controls(controls, polarity, ancillas, mcu_ancilla_count(nc), "emit_mcu");
  polarity_wrap(c, controls, polarity);
  if (nc == 1) {
    emit_cu(c, controls[0], u, param, target);
  } else {
    // AND-chain onto ancillas (2*nc-2 Toffolis), then one controlled-u.
    c.ccx(controls[0], controls[1], ancillas[0]);
    for (int j = 2; j <= nc - 1; ++j)
      c.ccx(controls[j], ancillas[j - 2], ancillas[j - 1]);
    emit_cu(c, ancillas[nc - 2], u, param, target);
    for (int j = nc - 1; j >= 2; --j)
      c.ccx(controls[j], ancillas[j - 2], ancillas[j - 1]);
    c.ccx(controls[0], controls[1], ancillas[0]);
  }
  polarity_wrap(c, controls, polarity);
}

// --- circuit builders ---

namespace {

// Ancilla pool above the 2n main qubits; tracks the high-water mark so the
// finished circuit can be shrunk to its exact width.
struct Pool {
  int base;
  int used{0};
  std::vector<int> get(int k) {
    used = std::max(used, k);
    std::vector<int> a(k);
    for (int i = 0; i < k; ++i) a[i] = base + i;
    return a;
  }
};

// Controlled-(add 1) ladders: register-1 qubit k controls an increment of
// register-2 qubits 0..k, which adds 2^(n-1-k) -- i.e. the value of qubit k
// -- to register 2 modulo 2^n.
void emit_add_reg1(Circuit& c, int n, Pool& pool) {
  const int r2 = n;
  for (int k = 0; k < n; ++k) {
    const int m = k + 1;
    for (int j = 0; j + 1 < m; ++j) {
      std::vector<int> controls{k};
      for (int jj = j + 1; jj < m; ++jj) controls.push_back(r2 + jj);
      emit_mcx(c, controls, std::vector<int>(controls.size(), 1), r2 + j,
               pool.get(mcx_ancilla_count(static_cast<int>(controls.size()))));
    }
    c.cx(k, r2 + m - 1);
  }
}

void emit_update(Circuit& c, const GraphSpec& g, Pool& pool) {
  const int n = g.reg_width();
  const int r2 = n;
  switch (g.kind) {
    case GraphKind::Cycle:
      // Prepare (|1> + |N-1>)/sqrt(2) on register 2, then add register 1.
      if (n == 1) {
        c.x(r2);
      } else {
        c.h(r2);
        for (int j = 0; j + 2 < n; ++j) c.cx(r2 + j, r2 + j + 1);
        c.x(r2 + n - 1);
      }
      emit_add_reg1(c, n, pool);
      break;
    case GraphKind::Complete: {
      // Prepare the uniform state over |1>..|N-1> via interleaved rotation
      // and controlled-H levels, then add register 1.
      auto theta = [n](int i) {
        const double num = static_cast<double>((1 << (n - i)) - 1);
        const double den = static_cast<double>((1 << (n - i + 1)) - 1);
        return 2.0 * std::acos(std::sqrt(num / den));
      };
      for (int i = 1; i < n; ++i) {
        if (i == 1) {
          c.ry(r2, theta(1));
        } else {
          std::vector<int> controls, pol;
          for (int j = 0; j < i - 1; ++j) {
            controls.push_back(r2 + j);
            pol.push_back(0);
          }
          emit_mcu(c, controls, pol, GateKind::RY, theta(i), r2 + i - 1,
                   pool.get(mcu_ancilla_count(i - 1)));
        }
        std::vector<int> controls, pol;
        for (int j = 0; j < i; ++j) {
          controls.push_back(r2 + j);
          pol.push_back(j == i - 1 ? 1 : 0);
        }
        for (int q = r2 + i; q < r2 + n; ++q)
          emit_mcu(c, controls, pol, GateKind::H, 0.0, q,
                   pool.get(mcu_ancilla_count(i)));
      }
      {
        std::vector<int> controls, pol;
        for (int j = 0; j + 1 < n; ++j) {
          controls.push_back(r2 + j);
          pol.push_back(0);
        }
        emit_mcx(c, controls, pol, r2 + n - 1,
                 pool.get(mcx_ancilla_count(n - 1)));
      }
      emit_add_reg1(c, n, pool);
      break;
    }
    case GraphKind::Bipartite: {
      const int n1 = log2i(g.N), n2 = log2i(g.N2);
      // Qubit 0 of each register selects the side; from side 1 the target is
      // uniform over all N1 nodes, from side 0 uniform over the N2 real ones.
      emit_mcx(c, {0}, {0}, r2, {});
      for (int q = 2 * n - n2; q < 2 * n; ++q) c.h(q);
      for (int q = r2 + 1; q <= r2 + (n1 - n2); ++q) emit_ch(c, 0, q);
      break;
    }
  }
}

// D = 2|0><0| - 1 on register 2, realized up to a global -1 phase.
void emit_d(Circuit& c, int n, Pool& pool) {
  const int r2 = n;
  for (int q = r2; q < r2 + n; ++q) c.x(q);
  c.h(r2 + n - 1);
  std::vector<int> controls;
  for (int j = 0; j + 1 < n; ++j) controls.push_back(r2 + j);
  emit_mcx(c, controls, std::vector<int>(controls.size(), 1), r2 + n - 1,
           pool.get(mcx_ancilla_count(static_cast<int>(controls.size()))));
  c.h(r2 + n - 1);
  for (int q = r2; q < r2 + n; ++q) c.x(q);
}

Circuit shrink(const Circuit& c, int n_qubits, int n_cbits) {
  Circuit out(n_qubits, n_cbits);
  for (const Instruction& in : c.instructions()) out.add(in);
  return out;
}

// Scratch circuit wide enough for any pool this module requests.
Circuit scratch(const GraphSpec& g, int n_cbits) {
  return Circuit(2 * g.reg_width() + g.reg_width() + 2, n_cbits);
}

void append_all(Circuit& dst, const Circuit& src) {
  for (const Instruction& in : src.instructions()) dst.add(in);
}

}  // namespace

cqsim::Circuit build_update(const GraphSpec& g) {
  const int n = g.reg_width();
  Circuit c = scratch(g, 0);
  Pool pool{2 * n};
  emit_update(c, g, pool);
  return shrink(c, 2 * n + pool.used, 0);
}

WalkCircuit build_walk_step(const GraphSpec& g, CompileLevel level) {
  if (level == CompileLevel::CliffordT && g.kind == GraphKind::Complete)
    throw std::invalid_argument(
        "clifford_t compilation of the complete graph is unsupported: its RY "
        "rotations require external gate synthesis");
  const int n = g.reg_width();
  Circuit v = scratch(g, 0);
  Pool pool{2 * n};
  emit_update(v, g, pool);

  Circuit c = scratch(g, 0);
  append_all(c, v.inverted());
  emit_d(c, n, pool);
  append_all(c, v);
  for (int k = 0; k < n; ++k) c.swap(k, n + k);

  WalkCircuit w;
  w.n = n;
  w.ancilla_count = pool.used;
  w.circuit = shrink(c, 2 * n + pool.used, 0);
  if (level == CompileLevel::CliffordT) w.circuit = expand_clifford_t(w.circuit);
  w.tcount_actual = w.circuit.t_count();
  return w;
}

cqsim::Circuit build_semiclassical(const GraphSpec& g, int t_q, int t_f,
                                   CompileLevel level) {
  if (t_q < 1 || t_f < 1) throw std::invalid_argument("t_q and t_f must be >= 1");
  const int n = g.reg_width();
  Circuit v = scratch(g, 0);
  Pool pool{2 * n};
  emit_update(v, g, pool);
  Circuit step = scratch(g, 0);
  append_all(step, v.inverted());
  emit_d(step, n, pool);
  append_all(step, v);
  for (int k = 0; k < n; ++k) step.swap(k, n + k);

  Circuit c(2 * n + pool.used, n * (t_f + 1));
  for (int q = 0; q < n; ++q) c.measure(q, q);
  for (int s = 1; s <= t_f; ++s) {
    for (int q = n; q < 2 * n; ++q) c.reset(q);
    append_all(c, v);
    for (int rep = 0; rep < t_q; ++rep) append_all(c, step);
    for (int q = 0; q < n; ++q) c.measure(q, s * n + q);
  }
  if (level == CompileLevel::CliffordT) c = expand_clifford_t(c);
  return c;
}

cqsim::Circuit expand_clifford_t(const cqsim::Circuit& c) {
  Circuit out(c.n_qubits(), c.n_cbits());
  for (const Instruction& in : c.instructions()) {
    if (in.op == OpCode::Gate && in.gate == GateKind::Toffoli) {
      const int c1 = in.qubits[0], c2 = in.qubits[1], t = in.qubits[2];
      out.h(t);
      out.cx(c2, t);
      out.tdg(t);
      out.cx(c1, t);
      out.t(t);
      out.cx(c2, t);
      out.tdg(t);
      out.cx(c1, t);
      out.t(c2);
      out.t(t);
      out.h(t);
      out.cx(c1, c2);
      out.t(c1);
      out.tdg(c2);
      out.cx(c1, c2);
    } else if (in.op == OpCode::Gate && in.gate == GateKind::SWAP) {
      out.cx(in.qubits[0], in.qubits[1]);
      out.cx(in.qubits[1], in.qubits[0]);
      out.cx(in.qubits[0], in.qubits[1]);
    } else if (in.op == OpCode::Gate &&
               (in.gate == GateKind::RY || in.gate == GateKind::RZ)) {
      throw std::invalid_argument(
          "expand_clifford_t: rotation gates require external synthesis");
    } else {
      out.add(in);
    }
  }
  return out;
}

// --- T-count analytics ---

namespace {

// T/Tdg total of a Toffoli-level circuit: 7 per Toffoli, 1 per explicit
// T/Tdg, L_R (symbolic) per RY.
TCountTerm direct_count(const Circuit& c) {
  TCountTerm t;
  for (const Instruction& in : c.instructions()) {
    if (in.op != OpCode::Gate) continue;
    if (in.gate == GateKind::Toffoli) t.c0 += 7;
    if (in.gate == GateKind::T || in.gate == GateKind::Tdg) t.c0 += 1;
    if (in.gate == GateKind::RY) t.c1 += 1;
  }
  return t;
}

}  // namespace

TCountReport t_count(const GraphSpec& g, std::optional<double> eps) {
  TCountReport r;
  r.graph = g;
  const long long n = g.reg_width();
  r.formula_used = n >= 3;

  if (!r.formula_used) {
    // Closed forms hold only for n >= 3: count the built circuits directly.
    Circuit v = build_update(g);
    r.L_V = direct_count(v);
    Circuit step = scratch(g, 0);
    Pool pool{static_cast<int>(2 * n)};
    append_all(step, v.inverted());
    emit_d(step, static_cast<int>(n), pool);
    append_all(step, v);
    r.L_U = direct_count(step);
  } else {
    switch (g.kind) {
      case GraphKind::Cycle:
        r.L_V.c0 = 7 * (n - 1) * n * (2 * n - 1) / 6;
        r.L_U.c0 = 14 * n - 35 + 2 * r.L_V.c0;
        break;
      case GraphKind::Bipartite: {
        const long long n1 = log2i(g.N), n2 = log2i(g.N2);
        r.L_V.c0 = 2 * (n1 - n2);
        r.L_U.c0 = 18 * n1 - 4 * n2 - 21;
        break;
      }
      case GraphKind::Complete:
        r.L_U.c0 = (14 * n * n * n - 209 * n) / 3 + 23 * n * n - 7;
        r.L_U.c1 = 4 * n - 6;
        r.L_V.c0 = (r.L_U.c0 - 14 * n + 35) / 2;
        r.L_V.c1 = 2 * n - 3;
        break;
    }
  }

  if (g.kind == GraphKind::Cycle) {
    for (long long m = 1; m <= n; ++m) r.L_Pplus.push_back(7 * (m - 1) * (m - 1));
  }
  if (g.kind == GraphKind::Complete) {
    r.L_CX = TCountTerm{14 * n - 35, 0};
    r.L_CH = TCountTerm{14 * n - 33, 0};
    r.L_CA = TCountTerm{8 * n * n - 36 * n + 40, 0};
    r.L_CR = TCountTerm{7 * n * n - 35 * n + 42, 2 * n - 4};
    if (eps) {
      r.L_R = static_cast<long long>(std::ceil(4.0 * std::log2(1.0 / *eps)));
      auto inst = [&](TCountTerm& t) {
        t.c0 += t.c1 * *r.L_R;
        t.c1 = 0;
      };
      inst(r.L_V);
      inst(r.L_U);
      inst(*r.L_CR);
    }
  }
  return r;
}

}  // namespace szegedy
