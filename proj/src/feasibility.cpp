#include "secrecy/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace secrecy {

double LinearFunctional::value(const std::vector<SymMatrix>& unknowns) const {
  if (unknowns.size() != coeff.size()) {
    throw DimensionError("LinearFunctional: unknown count mismatch");
  }
  double v = offset;
  for (std::size_t j = 0; j < coeff.size(); ++j) {
    v += (coeff[j].mat().array() * unknowns[j].mat().array()).sum();
  }
  return v;
}

namespace {

SymMatrix outer(const Eigen::RowVectorXd& h) {
  return SymMatrix(Eigen::MatrixXd(h.transpose() * h));
}

double quad(const Eigen::RowVectorXd& h, const SymMatrix& s) {
  return h * s.mat() * h.transpose();
}

}  // namespace

FeasibilityProblem build_problem_41(const Eigen::RowVectorXd& h1,
                                    const Eigen::RowVectorXd& h2,
                                    const SymMatrix& S, double alpha,
                                    double gamma0) {
  if (!(alpha >= 0)) throw DomainError("build_problem_41: alpha must be >= 0");
  if (!(gamma0 >= 0 && gamma0 <= 1)) {
    throw DomainError("build_problem_41: gamma0 must be in [0,1]");
  }
  if (h1.size() != S.dim() || h2.size() != S.dim()) {
    throw DimensionError("build_problem_41: h_k and S dimension mismatch");
  }
  if (!psd_check(S)) throw DomainError("build_problem_41: S is not PSD");

  FeasibilityProblem p;
  p.dim = S.dim();
  p.unknown_count = 1;
  p.cone = ConeBox{S};
  const double ag = alpha * gamma0;
  const double a1g = alpha * (1.0 - gamma0);
  p.inequalities.push_back(
      {{SymMatrix(-(1.0 + ag) * outer(h1).mat())}, quad(h1, S) - ag});
  p.inequalities.push_back(
      {{SymMatrix(-(1.0 + ag) * outer(h2).mat())}, quad(h2, S) - ag});
  p.inequalities.push_back(
      {{SymMatrix(outer(h1).mat() - (1.0 + a1g) * outer(h2).mat())}, -a1g});
  return p;
}

FeasibilityProblem build_problem_42(const Eigen::RowVectorXd& h1,
                                    const Eigen::RowVectorXd& h2, double P,
                                    double alpha, double gamma0) {
  if (!(alpha >= 0)) throw DomainError("build_problem_42: alpha must be >= 0");
  if (!(gamma0 >= 0 && gamma0 <= 1)) {
    throw DomainError("build_problem_42: gamma0 must be in [0,1]");
  }
  if (!(P >= 0)) throw DomainError("build_problem_42: P must be >= 0");
  if (h1.size() != h2.size()) {
    throw DimensionError("build_problem_42: h1 and h2 dimension mismatch");
  }

  FeasibilityProblem p;
  p.dim = h1.size();
  p.unknown_count = 2;
  p.cone = ConeTracePair{P};
  const double ag = alpha * gamma0;
  const double a1g = alpha * (1.0 - gamma0);
  const Eigen::Index t = p.dim;
  // Unknowns are (B1, B2): B1 carries the confidential covariance.
  p.inequalities.push_back(
      {{SymMatrix(-ag * outer(h1).mat()), outer(h1)}, -ag});
  p.inequalities.push_back(
      {{SymMatrix(-ag * outer(h2).mat()), outer(h2)}, -ag});
  p.inequalities.push_back(
      {{SymMatrix(outer(h1).mat() - (1.0 + a1g) * outer(h2).mat()),
        SymMatrix::Zero(t)},
       -a1g});
  return p;
}

namespace {

// Internal phase-1 layout: z = (symvec(B_1), ..., symvec(B_u), s).
struct Phase1 {
  Eigen::Index t;
  int unknowns;
  Eigen::Index nsym;   // t(t+1)/2
  Eigen::Index ntot;   // unknowns * nsym + 1
  Eigen::Index s_idx;  // = ntot - 1

  // Scalar rows: value = a . z + d > 0 (already includes -s).
  std::vector<Eigen::VectorXd> row_a;
  std::vector<double> row_d;

  // Matrix cones: A(z) = C0 + sum over (coord, G) pairs.
  struct Cone {
    Eigen::MatrixXd C0;
    std::vector<std::pair<Eigen::Index, Eigen::MatrixXd>> terms;
  };
  std::vector<Cone> cones;
};

Phase1 assemble(const FeasibilityProblem& p) {
  Phase1 ph;
  ph.t = p.dim;
  ph.unknowns = p.unknown_count;
  ph.nsym = ph.t * (ph.t + 1) / 2;
  ph.ntot = ph.unknowns * ph.nsym + 1;
  ph.s_idx = ph.ntot - 1;

  const auto basis = sym_basis(ph.t);
  auto row_vector = [&](const LinearFunctional& f) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(ph.ntot);
    for (int j = 0; j < ph.unknowns; ++j) {
      const Eigen::MatrixXd& c = f.coeff[static_cast<std::size_t>(j)].mat();
      for (Eigen::Index k = 0; k < ph.nsym; ++k) {
        a(j * ph.nsym + k) =
            (c.array() * basis[static_cast<std::size_t>(k)].array()).sum();
      }
    }
    a(ph.s_idx) = -1.0;
    return a;
  };
  for (const auto& f : p.inequalities) {
    if (static_cast<int>(f.coeff.size()) != ph.unknowns) {
      throw DimensionError("solve: inequality unknown count mismatch");
    }
    ph.row_a.push_back(row_vector(f));
    ph.row_d.push_back(f.offset);
  }

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(ph.t, ph.t);
  auto add_psd_cone = [&](int unknown, double sign, const Eigen::MatrixXd& c0) {
    Phase1::Cone cone;
    cone.C0 = c0;
    for (Eigen::Index k = 0; k < ph.nsym; ++k) {
      cone.terms.emplace_back(unknown * ph.nsym + k,
                              sign * basis[static_cast<std::size_t>(k)]);
    }
    cone.terms.emplace_back(ph.s_idx, -id);
    ph.cones.push_back(std::move(cone));
  };

  if (std::holds_alternative<ConeBox>(p.cone)) {
    const SymMatrix& S = std::get<ConeBox>(p.cone).S;
    if (S.dim() != ph.t) throw DimensionError("solve: box dimension mismatch");
    add_psd_cone(0, +1.0, Eigen::MatrixXd::Zero(ph.t, ph.t));  // B - sI
    add_psd_cone(0, -1.0, S.mat());                            // S - B - sI
  } else {
    const double P = std::get<ConeTracePair>(p.cone).P;
    for (int j = 0; j < ph.unknowns; ++j) {
      add_psd_cone(j, +1.0, Eigen::MatrixXd::Zero(ph.t, ph.t));
    }
    // Trace budget as an extra scalar row: P - sum tr(B_j) - s > 0.
    Eigen::VectorXd a = Eigen::VectorXd::Zero(ph.ntot);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < ph.t; ++i) {
      for (Eigen::Index jj = i; jj < ph.t; ++jj) {
        if (i == jj) {
          for (int j = 0; j < ph.unknowns; ++j) a(j * ph.nsym + k) = -1.0;
        }
        ++k;
      }
    }
    a(ph.s_idx) = -1.0;
    ph.row_a.push_back(a);
    ph.row_d.push_back(P);
  }
  return ph;
}

double potential(const Phase1& ph, const Eigen::VectorXd& z, double tb) {
  double phi = tb * z(ph.s_idx);
  for (std::size_t i = 0; i < ph.row_a.size(); ++i) {
    const double r = ph.row_a[i].dot(z) + ph.row_d[i];
    if (!(r > 0)) return -std::numeric_limits<double>::infinity();
    phi += std::log(r);
  }
  for (const auto& cone : ph.cones) {
    Eigen::MatrixXd a = cone.C0;
    for (const auto& [idx, g] : cone.terms) a += z(idx) * g;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
      return -std::numeric_limits<double>::infinity();
    }
    phi += 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  }
  return phi;
}

// One barrier stage: damped Newton until the decrement is tiny.
bool newton_stage(const Phase1& ph, Eigen::VectorXd& z, double tb) {
  const int max_iters = 120;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(ph.ntot);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(ph.ntot, ph.ntot);
    g(ph.s_idx) += tb;

    for (std::size_t i = 0; i < ph.row_a.size(); ++i) {
      const double r = ph.row_a[i].dot(z) + ph.row_d[i];
      g += ph.row_a[i] / r;
      h -= (ph.row_a[i] * ph.row_a[i].transpose()) / (r * r);
    }
    for (const auto& cone : ph.cones) {
      Eigen::MatrixXd a = cone.C0;
      for (const auto& [idx, gm] : cone.terms) a += z(idx) * gm;
      Eigen::LLT<Eigen::MatrixXd> llt(a);
      if (llt.info() != Eigen::Success) return false;
      std::vector<std::pair<Eigen::Index, Eigen::MatrixXd>> m;
      m.reserve(cone.terms.size());
      for (const auto& [idx, gm] : cone.terms) {
        m.emplace_back(idx, llt.solve(gm));
      }
      for (const auto& [idx, mk] : m) g(idx) += mk.trace();
      for (std::size_t a1 = 0; a1 < m.size(); ++a1) {
        for (std::size_t a2 = a1; a2 < m.size(); ++a2) {
          const double v =
              (m[a1].second.array() * m[a2].second.transpose().array()).sum();
          h(m[a1].first, m[a2].first) -= v;
          if (a1 != a2) h(m[a2].first, m[a1].first) -= v;
        }
      }
    }

    Eigen::MatrixXd neg_h = -h;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(neg_h);
    Eigen::VectorXd d = ldlt.solve(g);
    double decrement = g.dot(d);
    if (!(decrement > 0) || ldlt.info() != Eigen::Success) {
      // Ridge fallback for near-singular Hessians.
      neg_h += 1e-10 * (1.0 + neg_h.diagonal().cwiseAbs().maxCoeff()) *
               Eigen::MatrixXd::Identity(ph.ntot, ph.ntot);
      ldlt.compute(neg_h);
      d = ldlt.solve(g);
      decrement = g.dot(d);
      if (!(decrement > 0)) return it > 0;
    }
    if (decrement / 2.0 < 1e-13) return true;

    const double phi0 = potential(ph, z, tb);
    double step = 1.0;
    bool moved = false;
    while (step > 1e-14) {
      Eigen::VectorXd zn = z + step * d;
      const double phin = potential(ph, zn, tb);
      if (phin > phi0 + 1e-4 * step * decrement) {
        z = std::move(zn);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return true;  // stalled at the accuracy floor
  }
  return false;
}

std::vector<SymMatrix> extract_unknowns(const Phase1& ph,
                                        const Eigen::VectorXd& z) {
  std::vector<SymMatrix> out;
  for (int j = 0; j < ph.unknowns; ++j) {
    out.emplace_back(sym_unvec(z.segment(j * ph.nsym, ph.nsym), ph.t));
  }
  return out;
}

double min_slack(const FeasibilityProblem& p,
                 const std::vector<SymMatrix>& unknowns) {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& f : p.inequalities) s = std::min(s, f.value(unknowns));
  if (std::holds_alternative<ConeBox>(p.cone)) {
    const SymMatrix& S = std::get<ConeBox>(p.cone).S;
    s = std::min(s, min_eigenvalue(unknowns[0]));
    s = std::min(s, min_eigenvalue(S - unknowns[0]));
  } else {
    const double P = std::get<ConeTracePair>(p.cone).P;
    double tr = 0.0;
    for (const auto& b : unknowns) {
      s = std::min(s, min_eigenvalue(b));
      tr += b.mat().trace();
    }
    s = std::min(s, P - tr);
  }
  return s;
}

}  // namespace

FeasibilityResult solve(const FeasibilityProblem& problem) {
  Phase1 ph = assemble(problem);

  // Strictly interior start: cone-friendly unknowns, s below every slack.
  Eigen::VectorXd z = Eigen::VectorXd::Zero(ph.ntot);
  if (std::holds_alternative<ConeBox>(problem.cone)) {
    const SymMatrix& S = std::get<ConeBox>(problem.cone).S;
    z.segment(0, ph.nsym) = sym_vec(0.5 * S.mat());
  } else {
    const double P = std::get<ConeTracePair>(problem.cone).P;
    const Eigen::MatrixXd b0 =
        (P / (2.0 * static_cast<double>(ph.t))) *
        Eigen::MatrixXd::Identity(ph.t, ph.t);
    for (int j = 0; j < ph.unknowns; ++j) {
      z.segment(j * ph.nsym, ph.nsym) = sym_vec(b0);
    }
  }
  {
    std::vector<SymMatrix> u = extract_unknowns(ph, z);
    const double f0 = min_slack(problem, u);
    z(ph.s_idx) = f0 - 1.0 - 0.1 * std::abs(f0);
  }

  const double nu =
      static_cast<double>(ph.row_a.size()) +
      static_cast<double>(ph.t) * static_cast<double>(ph.cones.size());
  bool converged = true;
  for (double tb = 1.0; nu / tb > 1e-11; tb *= 20.0) {
    if (!newton_stage(ph, z, tb)) {
      converged = false;
      break;
    }
  }

  FeasibilityResult res;
  const double s_star = z(ph.s_idx);
  if (!converged) {
    res.status = FeasStatus::Undecided;
    return res;
  }
  if (s_star > kFeasDeadBand) {
    res.status = FeasStatus::Feasible;
    res.witness = extract_unknowns(ph, z);
    if (min_slack(problem, res.witness) < -kFeasDeadBand) {
      throw SolverError("solve: witness failed independent re-check");
    }
  } else if (s_star < -kFeasDeadBand) {
    res.status = FeasStatus::Infeasible;
    res.max_violation = -s_star;
  } else {
    res.status = FeasStatus::Undecided;
  }
  return res;
}

namespace {

// Scalar candidate: (b11, b12, b22) for t = 2, (b11, 0, 0) for t = 1.  The
// b12 range stays inside the PSD disc by construction.
struct GridCell {
  double b11 = 0, b12 = 0, b22 = 0;
};

double eigmin2(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double r = std::hypot(0.5 * (a - c), b);
  return m - r;
}

}  // namespace

FeasibilityResult brute_force_feasible(const FeasibilityProblem& problem,
                                       int grid_n) {
  if (problem.dim > 2) {
    throw DomainError("brute_force_feasible: only t <= 2 supported");
  }
  if (grid_n < 2 || grid_n > 101) {
    throw DomainError("brute_force_feasible: grid_n out of range");
  }
  const Eigen::Index t = problem.dim;
  const bool box = std::holds_alternative<ConeBox>(problem.cone);
  const int u_count = problem.unknown_count;

  double hi11 = 0, hi22 = 0, hi12 = 0;
  double s11 = 0, s12 = 0, s22 = 0, budget = 0;
  if (box) {
    const SymMatrix& S = std::get<ConeBox>(problem.cone).S;
    s11 = S(0, 0);
    hi11 = s11;
    if (t == 2) {
      s12 = S(0, 1);
      s22 = S(1, 1);
      hi22 = s22;
      hi12 = std::sqrt(std::max(s11 * s22, 0.0));
    }
  } else {
    budget = std::get<ConeTracePair>(problem.cone).P;
    hi11 = budget;
    hi22 = budget;
    hi12 = budget / 2.0;
  }

  // Flattened row coefficients: per row, per unknown, (c11, 2*c12, c22) so the
  // functional is a plain dot product with the cell.
  const std::size_t rows = problem.inequalities.size();
  std::vector<double> rc(rows * static_cast<std::size_t>(u_count) * 3);
  std::vector<double> roff(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& f = problem.inequalities[i];
    if (static_cast<int>(f.coeff.size()) != u_count) {
      throw DimensionError("brute_force_feasible: unknown count mismatch");
    }
    roff[i] = f.offset;
    for (int j = 0; j < u_count; ++j) {
      const auto& c = f.coeff[static_cast<std::size_t>(j)];
      double* p = &rc[(i * static_cast<std::size_t>(u_count) +
                       static_cast<std::size_t>(j)) *
                      3];
      p[0] = c(0, 0);
      if (t == 2) {
        p[1] = 2.0 * c(0, 1);
        p[2] = c(1, 1);
      }
    }
  }

  std::vector<GridCell> cells;
  if (t == 1) {
    cells.reserve(static_cast<std::size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i) {
      cells.push_back({hi11 * i / (grid_n - 1), 0, 0});
    }
  } else {
    cells.reserve(static_cast<std::size_t>(grid_n) * grid_n * grid_n);
    for (int i = 0; i < grid_n; ++i) {
      for (int j = 0; j < grid_n; ++j) {
        for (int k = 0; k < grid_n; ++k) {
          cells.push_back({hi11 * i / (grid_n - 1),
                           -hi12 + 2.0 * hi12 * k / (grid_n - 1),
                           hi22 * j / (grid_n - 1)});
        }
      }
    }
  }

  auto cell_slack = [&](const GridCell* u) {
    double s = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      double v = roff[i];
      for (int j = 0; j < u_count; ++j) {
        const double* p = &rc[(i * static_cast<std::size_t>(u_count) +
                               static_cast<std::size_t>(j)) *
                              3];
        v += p[0] * u[j].b11 + p[1] * u[j].b12 + p[2] * u[j].b22;
      }
      s = std::min(s, v);
    }
    for (int j = 0; j < u_count; ++j) {
      s = std::min(s, t == 1 ? u[j].b11
                             : eigmin2(u[j].b11, u[j].b12, u[j].b22));
    }
    if (box) {
      s = std::min(s, t == 1 ? s11 - u[0].b11
                             : eigmin2(s11 - u[0].b11, s12 - u[0].b12,
                                       s22 - u[0].b22));
    } else {
      double tr = 0;
      for (int j = 0; j < u_count; ++j) tr += u[j].b11 + u[j].b22;
      s = std::min(s, budget - tr);
    }
    return s;
  };

  double best = -std::numeric_limits<double>::infinity();
  GridCell best_cells[2];
  GridCell cand[2];
  if (u_count == 1) {
    for (const auto& c : cells) {
      cand[0] = c;
      const double s = cell_slack(cand);
      if (s > best) {
        best = s;
        best_cells[0] = c;
      }
    }
  } else {
    for (const auto& c1 : cells) {
      cand[0] = c1;
      for (const auto& c2 : cells) {
        cand[1] = c2;
        const double s = cell_slack(cand);
        if (s > best) {
          best = s;
          best_cells[0] = c1;
          best_cells[1] = c2;
        }
      }
    }
  }

  FeasibilityResult res;
  if (best >= -kPsdTol) {
    res.status = FeasStatus::Feasible;
    for (int j = 0; j < u_count; ++j) {
      if (t == 1) {
        res.witness.push_back(SymMatrix::Scalar(best_cells[j].b11));
      } else {
        Eigen::MatrixXd m(2, 2);
        m << best_cells[j].b11, best_cells[j].b12, best_cells[j].b12,
            best_cells[j].b22;
        res.witness.emplace_back(std::move(m));
      }
    }
  } else {
    res.status = FeasStatus::Infeasible;
    res.max_violation = -best;
  }
  return res;
}

FeasibilityResult solve_with_fallback(const FeasibilityProblem& problem,
                                      int fallback_grid_n) {
  FeasibilityResult res = solve(problem);
  if (res.status == FeasStatus::Undecided && problem.dim <= 2) {
    const int n = problem.unknown_count == 1 ? fallback_grid_n
                                             : std::min(fallback_grid_n, 13);
    res = brute_force_feasible(problem, n);
  }
  return res;
}

}  // namespace secrecy
