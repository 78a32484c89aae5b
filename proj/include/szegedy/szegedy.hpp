#pragma once

#include <optional>
#include <vector>

#include "cqsim/circuit.hpp"
#include "oracle/oracle.hpp"

namespace szegedy {

enum class GraphKind { Cycle, Complete, Bipartite };

// Cycle(N) / Complete(N) with N a power of two; Bipartite(N1, N2) with
// N2 <= N1, both powers of two. The bipartite walk operates on the augmented
// 2*N1-node graph that contains the original one as an invariant subspace.
struct GraphSpec {
  GraphKind kind{GraphKind::Cycle};
  int N{0};   // node count (N1 for Bipartite)
  int N2{0};  // Bipartite only

  static GraphSpec cycle(int N);
  static GraphSpec complete(int N);
  static GraphSpec bipartite(int N1, int N2);

  // Qubits per register: log2(N) for Cycle/Complete, log2(N1)+1 for Bipartite.
  int reg_width() const;
  // Nodes the walk registers range over (2*N1 for Bipartite).
  int walk_nodes() const;
  // Nodes of the original graph (N1+N2 for Bipartite).
  int original_nodes() const;
};

// Column-stochastic transition matrix G (augmented one for Bipartite).
oracle::Mat transition_matrix(const GraphSpec& g);

enum class CompileLevel { Exact, CliffordT };

struct WalkCircuit {
  cqsim::Circuit circuit;  // 2n main qubits then decomposition ancillas
  int n{0};                // register width
  int ancilla_count{0};
  int tcount_actual{0};    // T/Tdg instruction count of `circuit`
};

// Update operator V with V|i>_1|0>_2 = |psi_i> (Toffoli-level gates; the
// decomposition ancillas sit above qubit 2n-1 and return to |0>).
cqsim::Circuit build_update(const GraphSpec& g);

// One walk step U_w = SWAP * V * (1 (x) D) * V^dag per the R = V(1 (x) D)V^dag
// factorization. CliffordT additionally expands Toffoli/SWAP gates and is
// rejected for Complete (non-pi/4 rotations need external synthesis).
WalkCircuit build_walk_step(const GraphSpec& g, CompileLevel level);

// Semiclassical walk: measure register 1 at classical time 0, then t_f
// repetitions of [reset register 2; V; U_w^{t_q}; measure register 1].
// Classical step s writes cbits [s*n, (s+1)*n).
cqsim::Circuit build_semiclassical(const GraphSpec& g, int t_q, int t_f,
                                   CompileLevel level);

// Expands Toffoli into its 7-T/Tdg Clifford+T network and SWAP into 3 CNOTs;
// throws std::invalid_argument if the circuit holds RY/RZ rotations.
cqsim::Circuit expand_clifford_t(const cqsim::Circuit& c);

// --- decomposition primitives (appended to `c`; exposed for direct tests) ---

// Multi-controlled X. polarity[i]==0 inverts control i (X sandwich).
// Uses 2*n_c-3 Toffolis and n_c-2 borrowed ancillas for n_c >= 3; ancillas
// must start in |0> and are returned to |0>.
void emit_mcx(cqsim::Circuit& c, const std::vector<int>& controls,
              const std::vector<int>& polarity, int target,
              const std::vector<int>& ancillas);
int mcx_ancilla_count(int n_controls);

// Multi-controlled single-qubit u in {X, H, RY}: 2*n_c-2 Toffolis plus one
// singly-controlled u, n_c-1 ancillas (n_c=1: the controlled u directly).
void emit_mcu(cqsim::Circuit& c, const std::vector<int>& controls,
              const std::vector<int>& polarity, cqsim::GateKind u, double param,
              int target, const std::vector<int>& ancillas);
int mcu_ancilla_count(int n_controls);

// Controlled-H = A CX A^dag with A = S H T H S^dag H (2 T/Tdg gates).
void emit_ch(cqsim::Circuit& c, int control, int target);

// Controlled-RY(theta) = [RY(theta/2); CX; RY(-theta/2); CX].
void emit_cry(cqsim::Circuit& c, int control, int target, double theta);

// --- T-count analytics ---

// c0 + c1 * L_R, where L_R is the (symbolic) T-cost of one RY rotation.
struct TCountTerm {
  long long c0{0};
  long long c1{0};
};

struct TCountReport {
  GraphSpec graph;
  TCountTerm L_V;
  TCountTerm L_U;
  bool formula_used{true};  // false: n < 3, counted from the built circuit
  std::optional<long long> L_R;  // instantiated from eps when provided
  // Complete-graph per-gate breakdown.
  std::optional<TCountTerm> L_CX, L_CH, L_CA, L_CR;
  // Cycle: T-cost of the controlled-P+ block per width m = 1..n: 7(m-1)^2.
  std::vector<long long> L_Pplus;
};

// Closed-form T/Tdg counts (valid n >= 3; below that the report falls back to
// counting the built circuit and clears formula_used). `eps` instantiates
// L_R = ceil(4*log2(1/eps)) for Complete.
TCountReport t_count(const GraphSpec& g, std::optional<double> eps = {});

}  // namespace szegedy
