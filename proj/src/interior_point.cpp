// Primal-dual interior-point method for
//
//   minimize   c_f' x_f + c_l' x_l
//   subject to A_f x_f + A_l x_l + sum_k A_k(X_k) = b,  x_l >= 0,  X_k psd,
//
// with dual  maximize b'y  s.t.  A_f' y = c_f,  c_l - A_l' y = z_l >= 0,
// -A_k*(y) = Z_k psd. Search directions use the HKM scaling; the Newton
// system is reduced to the Schur complement M (m x m) bordered by the free
// columns, [M A_f; A_f' 0], and solved by pivoted LU followed by refinement
// against the full equations.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/LU>
#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

#include "flexhull/conic.hpp"

namespace flexhull {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct BlockEntry {
  int r;
  int c;
  double v;
};

// One equality row restricted to one matrix block, stored as a full
// symmetric matrix so <A, X> = sum v * X(r, c) over entries.
struct BlockRow {
  int row;
  std::vector<BlockEntry> entries;
  MatrixXd dense;
};

struct Block {
  int var;
  int n;
  std::vector<BlockRow> rows;
};

struct Problem {
  int m = 0;
  MatrixXd af;  // m x nf
  MatrixXd al;  // m x nl
  VectorXd b;
  VectorXd cf;
  VectorXd cl;
  std::vector<Block> blocks;
  std::vector<int> free_vars;
  std::vector<int> nonneg_vars;
};

Problem build(const ConicProgram& prog) {
  Problem p;
  p.m = static_cast<int>(prog.equalities().size());
  std::vector<int> column(prog.variables().size(), -1);
  for (const auto& v : prog.variables()) {
    switch (v.kind) {
      case VarKind::free_scalar:
        column[static_cast<std::size_t>(v.id.index)] = static_cast<int>(p.free_vars.size());
        p.free_vars.push_back(v.id.index);
        break;
      case VarKind::nonneg_scalar:
        column[static_cast<std::size_t>(v.id.index)] = static_cast<int>(p.nonneg_vars.size());
        p.nonneg_vars.push_back(v.id.index);
        break;
      case VarKind::psd_matrix:
        column[static_cast<std::size_t>(v.id.index)] = static_cast<int>(p.blocks.size());
        p.blocks.push_back(Block{v.id.index, v.size, {}});
        break;
    }
  }
  const int nf = static_cast<int>(p.free_vars.size());
  const int nl = static_cast<int>(p.nonneg_vars.size());
  p.af = MatrixXd::Zero(p.m, nf);
  p.al = MatrixXd::Zero(p.m, nl);
  p.b = VectorXd::Zero(p.m);
  p.cf = VectorXd::Zero(nf);
  p.cl = VectorXd::Zero(nl);

  for (int i = 0; i < p.m; ++i) {
    const auto& row = prog.equalities()[static_cast<std::size_t>(i)];
    p.b[i] = row.rhs;
    for (const auto& t : row.terms) {
      const auto& v = prog.variable(t.var);
      const int col = column[static_cast<std::size_t>(t.var.index)];
      if (v.kind == VarKind::free_scalar) {
        p.af(i, col) += t.coeff;
      } else if (v.kind == VarKind::nonneg_scalar) {
        p.al(i, col) += t.coeff;
      } else {
        auto& blk = p.blocks[static_cast<std::size_t>(col)];
        if (blk.rows.empty() || blk.rows.back().row != i) blk.rows.push_back(BlockRow{i, {}, MatrixXd::Zero(blk.n, blk.n)});
        auto& br = blk.rows.back();
        if (t.row == t.col) {
          br.dense(t.row, t.col) += t.coeff;
        } else {
          br.dense(t.row, t.col) += 0.5 * t.coeff;
          br.dense(t.col, t.row) += 0.5 * t.coeff;
        }
      }
    }
  }
  for (auto& blk : p.blocks)
    for (auto& br : blk.rows)
      for (int r = 0; r < blk.n; ++r)
        for (int c = 0; c < blk.n; ++c)
          if (br.dense(r, c) != 0.0) br.entries.push_back(BlockEntry{r, c, br.dense(r, c)});

  for (const auto& [id, c] : prog.objective()) {
    const auto& v = prog.variable(id);
    const int col = column[static_cast<std::size_t>(id.index)];
    if (v.kind == VarKind::free_scalar) p.cf[col] += c;
    else p.cl[col] += c;
  }
  return p;
}

double inner(const BlockRow& a, const MatrixXd& x) {
  double s = 0.0;
  for (const auto& e : a.entries) s += e.v * x(e.r, e.c);
  return s;
}

MatrixXd sym(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// Largest t with X + t dX psd (infinity if unbounded).
double max_step(const MatrixXd& x, const MatrixXd& dx) {
  Eigen::LLT<MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd linv = llt.matrixL().solve(MatrixXd::Identity(x.rows(), x.cols()));
  const MatrixXd w = sym(linv * dx * linv.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(w, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step(const VectorXd& x, const VectorXd& dx) {
  double t = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx[i] < 0.0) t = std::min(t, -x[i] / dx[i]);
  return t;
}

struct Iterate {
  VectorXd xf, xl, zl, y;
  std::vector<MatrixXd> x, z;
};

struct Direction {
  VectorXd dxf, dxl, dzl, dy;
  std::vector<MatrixXd> dx, dz;
};

class Engine {
 public:
  Engine(const Problem& p, const InteriorPointSettings& s) : p_(p), s_(s) {}

  SolveOutcome run(const ConicProgram& prog);

 private:
  void residuals();
  bool factor();
  Direction direction(double sigma_mu, const VectorXd& corr_l, const std::vector<MatrixXd>& corr_k);
  VectorXd apply_a(const VectorXd& xf, const VectorXd& xl, const std::vector<MatrixXd>& x) const;
  MatrixXd apply_at(const Block& blk, const VectorXd& y) const;

  const Problem& p_;
  InteriorPointSettings s_;
  Iterate it_;
  // Residuals.
  VectorXd rp_, rf_, rl_;
  std::vector<MatrixXd> rk_;
  std::vector<MatrixXd> zinv_;
  MatrixXd kkt_;
  Eigen::PartialPivLU<MatrixXd> kfac_;
};

VectorXd Engine::apply_a(const VectorXd& xf, const VectorXd& xl, const std::vector<MatrixXd>& x) const {
  VectorXd out = p_.af * xf + p_.al * xl;
  for (std::size_t k = 0; k < p_.blocks.size(); ++k)
    for (const auto& br : p_.blocks[k].rows) out[br.row] += inner(br, x[k]);
  return out;
}

MatrixXd Engine::apply_at(const Block& blk, const VectorXd& y) const {
  MatrixXd out = MatrixXd::Zero(blk.n, blk.n);
  for (const auto& br : blk.rows)
    for (const auto& e : br.entries) out(e.r, e.c) += y[br.row] * e.v;
  return out;
}

void Engine::residuals() {
  rp_ = p_.b - apply_a(it_.xf, it_.xl, it_.x);
  rf_ = p_.cf - p_.af.transpose() * it_.y;
  rl_ = p_.cl - p_.al.transpose() * it_.y - it_.zl;
  rk_.resize(p_.blocks.size());
  for (std::size_t k = 0; k < p_.blocks.size(); ++k) rk_[k] = -apply_at(p_.blocks[k], it_.y) - it_.z[k];
}

bool Engine::factor() {
  const int m = p_.m;
  MatrixXd mm = MatrixXd::Zero(m, m);
  VectorXd d = it_.xl.cwiseQuotient(it_.zl);
  mm.noalias() += p_.al * d.asDiagonal() * p_.al.transpose();
  zinv_.resize(p_.blocks.size());
  for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
    const auto& blk = p_.blocks[k];
    Eigen::LLT<MatrixXd> llt(it_.z[k]);
    if (llt.info() != Eigen::Success) return false;
    zinv_[k] = sym(llt.solve(MatrixXd::Identity(blk.n, blk.n)));
    for (const auto& bj : blk.rows) {
      const MatrixXd g = it_.x[k] * bj.dense * zinv_[k];
      for (const auto& bi : blk.rows) {
        double s = 0.0;
        for (const auto& e : bi.entries) s += e.v * g(e.c, e.r);
        mm(bi.row, bj.row) += s;
      }
    }
  }
  mm = sym(mm);
  const double scale = std::max(1.0, mm.diagonal().cwiseAbs().maxCoeff());
  mm.diagonal().array() += 1e-14 * scale;
  const int nf = static_cast<int>(p_.af.cols());
  kkt_ = MatrixXd::Zero(m + nf, m + nf);
  kkt_.topLeftCorner(m, m) = mm;
  kkt_.topRightCorner(m, nf) = p_.af;
  kkt_.bottomLeftCorner(nf, m) = p_.af.transpose();
  kkt_.bottomRightCorner(nf, nf).diagonal().array() = -1e-14 * scale;
  kfac_.compute(kkt_);
  const double det_scale = kfac_.matrixLU().diagonal().cwiseAbs().minCoeff();
  return std::isfinite(det_scale) && det_scale > 0.0;
}

Direction Engine::direction(double sigma_mu, const VectorXd& corr_l, const std::vector<MatrixXd>& corr_k) {
  Direction d;
  std::vector<MatrixXd> t(p_.blocks.size());
  VectorXd h = rp_;
  for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
    t[k] = sigma_mu * zinv_[k] - it_.x[k] - sym(it_.x[k] * rk_[k] * zinv_[k]) - corr_k[k];
    for (const auto& br : p_.blocks[k].rows) h[br.row] -= inner(br, t[k]);
  }
  const VectorXd tl = (sigma_mu - corr_l.array()).matrix().cwiseQuotient(it_.zl) - it_.xl -
                      it_.xl.cwiseProduct(rl_).cwiseQuotient(it_.zl);
  h -= p_.al * tl;

  const int m = p_.m;
  const int nf = static_cast<int>(p_.af.cols());
  VectorXd rhs(m + nf);
  rhs << h, rf_;
  VectorXd sol = kfac_.solve(rhs);
  sol += kfac_.solve(rhs - kkt_ * sol);
  d.dy = sol.head(m);
  d.dxf = sol.tail(nf);
  d.dx.resize(p_.blocks.size());
  d.dz.resize(p_.blocks.size());

  auto recover = [&] {
    d.dzl = rl_ - p_.al.transpose() * d.dy;
    d.dxl = (sigma_mu - corr_l.array()).matrix().cwiseQuotient(it_.zl) - it_.xl -
            it_.xl.cwiseProduct(d.dzl).cwiseQuotient(it_.zl);
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
      d.dz[k] = sym(rk_[k] - apply_at(p_.blocks[k], d.dy));
      d.dx[k] = sym(sigma_mu * zinv_[k] - it_.x[k] - it_.x[k] * d.dz[k] * zinv_[k] - corr_k[k]);
    }
  };
  recover();

  // Refine against the unreduced equations: the assembled Schur matrix loses
  // accuracy near the boundary and the primal residual would drift.
  for (int round = 0; round < 3; ++round) {
    VectorXd err(m + nf);
    err << rp_ - apply_a(d.dxf, d.dxl, d.dx), rf_ - p_.af.transpose() * d.dy;
    if (err.norm() <= 1e-14 * (1.0 + rhs.norm())) break;
    const VectorXd fix = kfac_.solve(err);
    d.dy += fix.head(m);
    d.dxf += fix.tail(nf);
    recover();
  }
  return d;
}

SolveOutcome Engine::run(const ConicProgram& prog) {
  const int nf = static_cast<int>(p_.free_vars.size());
  const int nl = static_cast<int>(p_.nonneg_vars.size());
  const std::size_t nb = p_.blocks.size();

  double nu = nl;
  for (const auto& blk : p_.blocks) nu += blk.n;

  // Starting point scaled to the data.
  double xi = 10.0;
  double eta = 10.0;
  for (int i = 0; i < p_.m; ++i) {
    double row_norm = p_.af.row(i).norm() + p_.al.row(i).norm();
    for (const auto& blk : p_.blocks)
      for (const auto& br : blk.rows)
        if (br.row == i) row_norm += br.dense.norm();
    xi = std::max(xi, (1.0 + std::abs(p_.b[i])) / (1.0 + row_norm));
    eta = std::max(eta, row_norm);
  }
  eta = std::max({eta, p_.cf.size() ? p_.cf.cwiseAbs().maxCoeff() : 0.0, p_.cl.size() ? p_.cl.cwiseAbs().maxCoeff() : 0.0});

  it_.xf = VectorXd::Zero(nf);
  it_.xl = VectorXd::Constant(nl, xi);
  it_.zl = VectorXd::Constant(nl, eta);
  it_.y = VectorXd::Zero(p_.m);
  for (const auto& blk : p_.blocks) {
    it_.x.push_back(xi * MatrixXd::Identity(blk.n, blk.n));
    it_.z.push_back(eta * MatrixXd::Identity(blk.n, blk.n));
  }

  const double bnorm = p_.b.norm();
  const double cnorm = std::sqrt(p_.cf.squaredNorm() + p_.cl.squaredNorm());

  SolveOutcome out;
  double pinf = 0.0, dinf = 0.0, rgap = 0.0;
  int stalls = 0;
  Iterate best;
  double best_merit = std::numeric_limits<double>::infinity();
  int since_best = 0;

  auto finish = [&](SolveStatus st, const std::string& msg) {
    if (st == SolveStatus::inaccurate || st == SolveStatus::failed) {
      // Fall back to the best iterate seen; it may still be usable.
      if (best_merit < 1e-6) {
        it_ = best;
        st = SolveStatus::inaccurate;
      }
    }
    out.status = st;
    out.message = msg;
    if (out.has_values()) {
      out.values.assign(prog.variables().size(), MatrixXd());
      for (int j = 0; j < nf; ++j) out.values[static_cast<std::size_t>(p_.free_vars[j])] = MatrixXd::Constant(1, 1, it_.xf[j]);
      for (int j = 0; j < nl; ++j) out.values[static_cast<std::size_t>(p_.nonneg_vars[j])] = MatrixXd::Constant(1, 1, it_.xl[j]);
      for (std::size_t k = 0; k < nb; ++k) out.values[static_cast<std::size_t>(p_.blocks[k].var)] = it_.x[k];
      out.objective_value = p_.cf.dot(it_.xf) + p_.cl.dot(it_.xl);
    }
    if (s_.verbose)
      spdlog::info("ipm: {} after {} iterations (pinf {:.2e}, dinf {:.2e}, gap {:.2e}) {}", to_string(st), out.iterations,
                   pinf, dinf, rgap, msg);
    return out;
  };

  for (int iter = 0;; ++iter) {
    out.iterations = iter;
    residuals();
    double comp = it_.xl.dot(it_.zl);
    for (std::size_t k = 0; k < nb; ++k) comp += (it_.x[k].cwiseProduct(it_.z[k])).sum();
    const double mu = nu > 0 ? comp / nu : 0.0;
    const double pobj = p_.cf.dot(it_.xf) + p_.cl.dot(it_.xl);
    const double dobj = p_.b.dot(it_.y);
    double dres2 = rf_.squaredNorm() + rl_.squaredNorm();
    for (const auto& r : rk_) dres2 += r.squaredNorm();
    pinf = rp_.norm() / (1.0 + bnorm);
    dinf = std::sqrt(dres2) / (1.0 + cnorm);
    rgap = std::max(std::abs(pobj - dobj), comp) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (s_.verbose)
      spdlog::info("ipm {:3d}: pobj {: .8e} dobj {: .8e} pinf {:.2e} dinf {:.2e} gap {:.2e}", iter, pobj, dobj, pinf,
                   dinf, rgap);

    if (pinf < s_.tolerance && dinf < s_.tolerance && rgap < s_.tolerance) return finish(SolveStatus::optimal, "");
    const double merit = std::max({pinf, dinf, rgap});
    if (merit < 0.5 * best_merit) since_best = 0;
    else ++since_best;
    if (merit < best_merit) {
      best_merit = merit;
      best = it_;
    }
    if (since_best >= 10) return finish(SolveStatus::failed, "no progress");

    // Dual ray: b'y > 0 while A'y + z stays bounded certifies primal infeasibility.
    if (dobj > 0.0) {
      double ray2 = (p_.cf - rf_).squaredNorm() + (p_.cl - rl_).squaredNorm();
      for (const auto& r : rk_) ray2 += r.squaredNorm();
      if (std::sqrt(ray2) < 1e-8 * dobj && pinf > 1e-6) return finish(SolveStatus::infeasible, "dual ray found");
    }
    // Primal ray: c'x < 0 while A x stays bounded certifies dual infeasibility.
    if (pobj < 0.0 && (p_.b - rp_).norm() < 1e-8 * -pobj && dinf > 1e-6)
      return finish(SolveStatus::failed, "problem is unbounded");

    if (iter >= s_.max_iterations) return finish(SolveStatus::failed, "iteration limit");
    if (!factor()) return finish(SolveStatus::failed, "factorization failed");

    // Predictor.
    const VectorXd zero_l = VectorXd::Zero(nl);
    std::vector<MatrixXd> zero_k(nb);
    for (std::size_t k = 0; k < nb; ++k) zero_k[k] = MatrixXd::Zero(p_.blocks[k].n, p_.blocks[k].n);
    const Direction aff = direction(0.0, zero_l, zero_k);

    auto step_lengths = [&](const Direction& d, double gamma) {
      double ap = max_step(it_.xl, d.dxl);
      double ad = max_step(it_.zl, d.dzl);
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(it_.x[k], d.dx[k]));
        ad = std::min(ad, max_step(it_.z[k], d.dz[k]));
      }
      return std::pair{std::min(1.0, gamma * ap), std::min(1.0, gamma * ad)};
    };

    const auto [ap_aff, ad_aff] = step_lengths(aff, 1.0);
    double comp_aff = (it_.xl + ap_aff * aff.dxl).dot(it_.zl + ad_aff * aff.dzl);
    for (std::size_t k = 0; k < nb; ++k)
      comp_aff += ((it_.x[k] + ap_aff * aff.dx[k]).cwiseProduct(it_.z[k] + ad_aff * aff.dz[k])).sum();
    const double mu_aff = comp_aff / nu;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector.
    const VectorXd corr_l = aff.dxl.cwiseProduct(aff.dzl);
    std::vector<MatrixXd> corr_k(nb);
    for (std::size_t k = 0; k < nb; ++k) corr_k[k] = sym(aff.dx[k] * aff.dz[k] * zinv_[k]);
    const Direction d = direction(sigma * mu, corr_l, corr_k);

    const double gamma = 0.9 + 0.09 * std::min(ap_aff, ad_aff);
    const auto [ap, ad] = step_lengths(d, gamma);

    it_.xf += ap * d.dxf;
    it_.xl += ap * d.dxl;
    it_.y += ad * d.dy;
    it_.zl += ad * d.dzl;
    for (std::size_t k = 0; k < nb; ++k) {
      it_.x[k] = sym(it_.x[k] + ap * d.dx[k]);
      it_.z[k] = sym(it_.z[k] + ad * d.dz[k]);
    }

    stalls = (ap < 1e-10 && ad < 1e-10) ? stalls + 1 : 0;
    if (stalls >= 3) return finish(SolveStatus::failed, "step stalled");
  }
}

}  // namespace

SolveOutcome InteriorPointSolver::solve(const ConicProgram& prog) const {
  const Problem p = build(prog);
  if (p.m == 0) {
    // No constraints: every scalar sits at its lower bound or the problem is
    // unbounded through a free variable with nonzero cost.
    SolveOutcome out;
    if (p.cf.size() && p.cf.cwiseAbs().maxCoeff() > 0.0) {
      out.status = SolveStatus::failed;
      out.message = "problem is unbounded";
      return out;
    }
    if (p.cl.size() && p.cl.minCoeff() < 0.0) {
      out.status = SolveStatus::failed;
      out.message = "problem is unbounded";
      return out;
    }
    out.status = SolveStatus::optimal;
    for (const auto& v : prog.variables()) out.values.push_back(MatrixXd::Zero(v.size, v.size));
    return out;
  }
  Engine engine(p, settings_);
  return engine.run(prog);
}

}  // namespace flexhull
