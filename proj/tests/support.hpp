#pragma once

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "secrecy/channel.hpp"
#include "secrecy/matrix.hpp"
#include "secrecy/rates.hpp"

namespace testsupport {

using namespace secrecy;

// Two-antenna example instance used throughout: channel rows and covariance
// cap with known quadratic forms h1*S*h1' ~ 15.575, h2*S*h2' ~ 3.188.
inline GeneralMatrix example_h1() {
  GeneralMatrix h(1, 2);
  h << 2.0, 0.4;
  return h;
}

inline GeneralMatrix example_h2() {
  GeneralMatrix h(1, 2);
  h << 0.4, 1.0;
  return h;
}

inline SymMatrix example_S() {
  Eigen::MatrixXd s(2, 2);
  s << 3.3333, 1.2346, 1.2346, 1.6667;
  return SymMatrix(std::move(s));
}

inline ChannelSpec example_spec() {
  return ChannelSpec(example_h1(), example_h2(),
                     PowerConstraint::Matrix(example_S()));
}

inline double quad(const GeneralMatrix& h, const SymMatrix& s) {
  return (h * s.mat() * h.transpose())(0, 0);
}

inline Eigen::MatrixXd random_matrix(std::mt19937& rng, Eigen::Index r,
                                     Eigen::Index c, double lo = -1.0,
                                     double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = u(rng);
  }
  return m;
}

inline SymMatrix random_spd(std::mt19937& rng, Eigen::Index t,
                            double scale = 1.0) {
  Eigen::MatrixXd g = random_matrix(rng, t, t);
  Eigen::MatrixXd a =
      scale * (g * g.transpose()) +
      0.1 * scale * Eigen::MatrixXd::Identity(t, t);
  return SymMatrix(std::move(a));
}

inline GeneralMatrix random_invertible(std::mt19937& rng, Eigen::Index t) {
  for (;;) {
    Eigen::MatrixXd h = random_matrix(rng, t, t);
    Eigen::JacobiSVD<Eigen::MatrixXd> sv(h);
    if (sv.singularValues()(t - 1) > 0.2) return h;
  }
}

// PSD square root via eigendecomposition (inputs may be semidefinite).
inline Eigen::MatrixXd psd_sqrt(const SymMatrix& s) {
  EigResult e = eig_sym(s);
  Eigen::VectorXd r = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * r.asDiagonal() * e.vectors.transpose();
}

// Uniform random point of the Loewner box [0, S]: B = S^{1/2} W S^{1/2} with
// W = U diag(u) U^T, u uniform on [0,1].
inline SymMatrix random_box_point(std::mt19937& rng, const SymMatrix& S) {
  const Eigen::Index t = S.dim();
  const Eigen::MatrixXd half = psd_sqrt(S);
  const SymMatrix g = random_spd(rng, t);
  EigResult e = eig_sym(g);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd w(t);
  for (Eigen::Index i = 0; i < t; ++i) w(i) = u(rng);
  Eigen::MatrixXd wm = e.vectors * w.asDiagonal() * e.vectors.transpose();
  return SymMatrix(Eigen::MatrixXd(half * wm * half.transpose()));
}

/// Achievable-region oracle built from an exhaustive covariance scan: the
/// downward closure of the convex hull (time sharing) of all grid rate pairs.
/// The scan walks W over [0, I] in the Cholesky basis of S (B = L W L^T), so
/// both box faces are sampled exactly.
struct FrontierOracle {
  // Concave upper envelope, ascending R0; starts at (0, r1_max) and ends at
  // (r0_max, 0).
  std::vector<std::pair<double, double>> chain;
  double r0_max = 0.0;
  double r1_max = 0.0;

  double env(double r0) const {
    if (r0 <= 0.0) return r1_max;
    if (r0 >= r0_max) {
      return r0 <= r0_max + 1e-15 ? 0.0
                                  : -std::numeric_limits<double>::infinity();
    }
    std::size_t lo = 0, hi = chain.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (chain[mid].first <= r0 ? lo : hi) = mid;
    }
    const auto [x1, y1] = chain[lo];
    const auto [x2, y2] = chain[hi];
    if (x2 <= x1) return std::max(y1, y2);
    const double t = (r0 - x1) / (x2 - x1);
    return y1 + t * (y2 - y1);
  }

  bool inside(double r0, double r1, double tol = 1e-12) const {
    if (r0 < -tol || r1 < -tol) return false;
    if (r0 > r0_max + tol) return false;
    return r1 <= env(std::max(0.0, r0)) + tol;
  }

  // Smallest uniform shrink delta such that (r0 - d, r1 - d) clamped at zero
  // lies inside the region.
  double shrink_excess(double r0, double r1) const {
    if (inside(r0, r1)) return 0.0;
    double lo = 0.0, hi = std::max(r0, r1) + 1e-9;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (inside(std::max(0.0, r0 - mid), std::max(0.0, r1 - mid)) ? hi : lo) =
          mid;
    }
    return hi;
  }
};

inline FrontierOracle grid_frontier(const GeneralMatrix& H1,
                                    const GeneralMatrix& H2, const SymMatrix& S,
                                    int n) {
  const double h1s = quad(H1, S);
  const double h2s = quad(H2, S);
  const Eigen::MatrixXd half = psd_sqrt(S);
  const Eigen::RowVectorXd g1 = H1.row(0) * half;  // h1 B h1' = g1 W g1'
  const Eigen::RowVectorXd g2 = H2.row(0) * half;

  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(n) * n * n);
  auto push = [&](double w11, double w12, double w22) {
    const double a1 = g1(0) * g1(0) * w11 + 2.0 * g1(0) * g1(1) * w12 +
                      g1(1) * g1(1) * w22;
    const double a2 = g2(0) * g2(0) * w11 + 2.0 * g2(0) * g2(1) * w12 +
                      g2(1) * g2(1) * w22;
    const double r0 =
        0.5 * std::min(std::log2((1.0 + h1s) / (1.0 + a1)),
                       std::log2((1.0 + h2s) / (1.0 + a2)));
    const double r1 =
        std::max(0.0, 0.5 * (std::log2(1.0 + a1) - std::log2(1.0 + a2)));
    pts.emplace_back(r0, r1);
  };
  for (int i = 0; i < n; ++i) {
    const double w11 = static_cast<double>(i) / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double w22 = static_cast<double>(j) / (n - 1);
      const double m = std::min(std::sqrt(w11 * w22),
                                std::sqrt((1.0 - w11) * (1.0 - w22)));
      for (int k = 0; k < n; ++k) {
        push(w11, -m + 2.0 * m * k / (n - 1), w22);
      }
    }
  }

  // Pareto staircase corners (descending R0, ascending suffix-max R1).
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::pair<double, double>> corners;
  double best = -1.0;
  for (const auto& [r0, r1] : pts) {
    if (r1 > best) {
      best = r1;
      corners.emplace_back(r0, r1);
    }
  }

  FrontierOracle fo;
  fo.r0_max = pts.front().first;
  fo.r1_max = best;

  // Concave upper hull over ascending R0.
  std::vector<std::pair<double, double>> in;
  in.emplace_back(0.0, fo.r1_max);
  for (auto it = corners.rbegin(); it != corners.rend(); ++it) in.push_back(*it);
  in.emplace_back(fo.r0_max, 0.0);
  std::sort(in.begin(), in.end());
  auto cross = [](const std::pair<double, double>& o,
                  const std::pair<double, double>& a,
                  const std::pair<double, double>& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  for (const auto& p : in) {
    auto& ch = fo.chain;
    while (ch.size() >= 2 && cross(ch[ch.size() - 2], ch.back(), p) >= 0.0) {
      ch.pop_back();
    }
    ch.push_back(p);
  }
  return fo;
}

}  // namespace testsupport
