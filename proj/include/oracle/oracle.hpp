#pragma once

#include <Eigen/Dense>
#include <vector>

// Dense-matrix Szegedy walk reference implementation. Everything here is an
// independent ground truth for the circuit builders: matrices are built
// directly from the defining equations, with no circuit machinery involved.
namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Throws std::invalid_argument unless G is column-stochastic with
// non-negative entries (tolerance 1e-12).
void check_stochastic(const Mat& G);

struct WalkOperator {
  int N;     // node count
  CMat U;    // N^2 x N^2 walk unitary U_w = S_w (2 Pi - 1)
  CMat psi;  // column i = |psi_i> = |i> (x) sum_k sqrt(G_ki) |k>
};

// Register-1-major composite index: |i>_1 |k>_2 -> i*N + k.
WalkOperator walk_unitary(const Mat& G);

// Position distribution over register 1 after t applications of U:
// p_i = sum_k |<i,k| U^t |init>|^2.
Vec evolve_distribution(const WalkOperator& w, const CVec& init, int t);

// Semiclassical transition matrix: entry (j,i) = || <j|_1 U^{t_q} |psi_i> ||^2.
Mat semiclassical_matrix(const Mat& G, int t_q);

// p_{t+1} = Gq p_t; returns [p_0, p_1, ..., p_{t_f}] (t_f + 1 vectors).
std::vector<Vec> semiclassical_evolve(const Vec& p0, const Mat& Gq, int t_f);

}  // namespace oracle
