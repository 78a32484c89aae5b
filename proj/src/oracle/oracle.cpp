#include "oracle/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

void check_stochastic(const Mat& G) {
  if (G.rows() != G.cols()) throw std::invalid_argument("G must be square");
  if ((G.array() < 0.0).any())
    throw std::invalid_argument("G has a negative entry");
  for (Eigen::Index c = 0; c < G.cols(); ++c) {
    if (std::abs(G.col(c).sum() - 1.0) > 1e-12)
      throw std::invalid_argument("G column " + std::to_string(c) +
                                  " does not sum to 1");
  }
}

WalkOperator walk_unitary(const Mat& G) {
  check_stochastic(G);
  const int N = static_cast<int>(G.rows());
  WalkOperator w;
  w.N = N;
  w.psi = CMat::Zero(static_cast<Eigen::Index>(N) * N, N);
  for (int i = 0; i < N; ++i) {
    for (int k = 0; k < N; ++k) {
      const double g = G(k, i);
      // Entrywise sqrt; exact zeros stay zero so invariant-subspace checks
      // are exact.
      if (g != 0.0) w.psi(static_cast<Eigen::Index>(i) * N + k, i) = std::sqrt(g);
    }
  }
  const Eigen::Index D = static_cast<Eigen::Index>(N) * N;
  CMat R = 2.0 * (w.psi * w.psi.adjoint()) - CMat::Identity(D, D);
  // S_w |i,k> = |k,i>: row permutation applied to R.
  w.U = CMat::Zero(D, D);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k)
      w.U.row(static_cast<Eigen::Index>(k) * N + i) =
          R.row(static_cast<Eigen::Index>(i) * N + k);
  return w;
}

Vec evolve_distribution(const WalkOperator& w, const CVec& init, int t) {
  if (init.size() != w.U.rows())
    throw std::invalid_argument("init dimension mismatch");
  if (t < 0) throw std::invalid_argument("t must be >= 0");
  CVec s = init;
  for (int step = 0; step < t; ++step) s = w.U * s;
  Vec p = Vec::Zero(w.N);
  for (int i = 0; i < w.N; ++i)
    p(i) = s.segment(static_cast<Eigen::Index>(i) * w.N, w.N).squaredNorm();
  return p;
}

Mat semiclassical_matrix(const Mat& G, int t_q) {
  if (t_q < 1) throw std::invalid_argument("t_q must be >= 1");
  const WalkOperator w = walk_unitary(G);
  Mat Gq(w.N, w.N);
  for (int i = 0; i < w.N; ++i)
    Gq.col(i) = evolve_distribution(w, w.psi.col(i), t_q);
  return Gq;
}

std::vector<Vec> semiclassical_evolve(const Vec& p0, const Mat& Gq, int t_f) {
  if (std::abs(p0.sum() - 1.0) > 1e-12 || (p0.array() < 0.0).any())
    throw std::invalid_argument("p0 is not a probability vector");
  std::vector<Vec> traj;
  traj.reserve(static_cast<std::size_t>(t_f) + 1);
  traj.push_back(p0);
  for (int t = 0; t < t_f; ++t) traj.push_back(Gq * traj.back());
  return traj;
}

}  // namespace oracle
