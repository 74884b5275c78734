// Homogeneous self-dual interior-point method with Nesterov-Todd scaling and
// Mehrotra predictor-corrector steps, for LP and real PSD cones.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "telent/sdp/cone.hpp"

namespace telent::sdp {

void ConeProblem::normalize_shapes() {
  if (c.size() == 0) c = RVector::Zero(n);
  if (a.rows() == 0) a.resize(0, n);
  if (b.size() == 0) b = RVector::Zero(a.rows());
  if (g_lp.rows() == 0) g_lp.resize(0, n);
  if (h_lp.size() == 0) h_lp = RVector::Zero(g_lp.rows());
  if (c.size() != n || a.cols() != n || g_lp.cols() != n || b.size() != a.rows() || h_lp.size() != g_lp.rows())
    throw std::invalid_argument("cone problem: inconsistent dimensions");
  for (const auto& blk : blocks) {
    if (blk.h.rows() != blk.size || blk.h.cols() != blk.size || blk.vars.size() != blk.coeffs.size())
      throw std::invalid_argument("cone problem: inconsistent PSD block");
    for (std::size_t k = 0; k < blk.vars.size(); ++k) {
      if (blk.vars[k] < 0 || blk.vars[k] >= n) throw std::invalid_argument("cone problem: block variable out of range");
      for (const auto& e : blk.coeffs[k])
        if (e.row < 0 || e.col >= blk.size || e.row > e.col)
          throw std::invalid_argument("cone problem: block entry out of range");
    }
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ConeVec {
  RVector lp;
  std::vector<RMatrix> psd;
};

double dot(const ConeVec& u, const ConeVec& v) {
  double d = u.lp.dot(v.lp);
  for (std::size_t k = 0; k < u.psd.size(); ++k) d += u.psd[k].cwiseProduct(v.psd[k]).sum();
  return d;
}

double norm(const ConeVec& u) { return std::sqrt(dot(u, u)); }

void axpy(double alpha, const ConeVec& x, ConeVec& y) {
  y.lp += alpha * x.lp;
  for (std::size_t k = 0; k < y.psd.size(); ++k) y.psd[k] += alpha * x.psd[k];
}

ConeVec combine(double alpha, const ConeVec& x, double beta, const ConeVec& y) {
  ConeVec out{alpha * x.lp + beta * y.lp, {}};
  for (std::size_t k = 0; k < x.psd.size(); ++k) out.psd.push_back(alpha * x.psd[k] + beta * y.psd[k]);
  return out;
}

RMatrix sym(const RMatrix& m) { return 0.5 * (m + m.transpose()); }

struct BlockColumn {
  int var;
  std::vector<int> support;
  RMatrix local;
};

struct Scaling {
  RVector w;
  RVector lambda_lp;
  std::vector<RMatrix> r;
  std::vector<RMatrix> rinv;
  std::vector<RVector> lambda_psd;
  std::vector<RMatrix> p;  // R^{-T} R^{-1}
};

class Solver {
 public:
  Solver(const ConeProblem& prob, const ConeOptions& opt) : prob_(prob), opt_(opt) {
    n_ = prob.n;
    p_ = static_cast<int>(prob.a.rows());
    l_ = static_cast<int>(prob.g_lp.rows());
    degree_ = l_;
    for (const auto& blk : prob.blocks) degree_ += blk.size;
    at_dense_ = RMatrix(prob.a.transpose());
    ata_ = RMatrix(RMatrix(prob.a.transpose()) * prob.a);
    for (const auto& blk : prob.blocks) {
      std::vector<BlockColumn> cols;
      for (std::size_t k = 0; k < blk.vars.size(); ++k) {
        BlockColumn col;
        col.var = blk.vars[k];
        for (const auto& e : blk.coeffs[k]) {
          col.support.push_back(e.row);
          col.support.push_back(e.col);
        }
        std::sort(col.support.begin(), col.support.end());
        col.support.erase(std::unique(col.support.begin(), col.support.end()), col.support.end());
        const int s = static_cast<int>(col.support.size());
        col.local = RMatrix::Zero(s, s);
        auto pos = [&](int idx) {
          return static_cast<int>(std::lower_bound(col.support.begin(), col.support.end(), idx) - col.support.begin());
        };
        for (const auto& e : blk.coeffs[k]) {
          const int i = pos(e.row), j = pos(e.col);
          col.local(i, j) += e.value;
          if (i != j) col.local(j, i) += e.value;
        }
        cols.push_back(std::move(col));
      }
      columns_.push_back(std::move(cols));
    }
    h_ = ConeVec{prob.h_lp, {}};
    for (const auto& blk : prob.blocks) h_.psd.push_back(sym(blk.h));
  }

  ConeSolution run();

 private:
  ConeVec zero_cone() const {
    ConeVec v{RVector::Zero(l_), {}};
    for (const auto& blk : prob_.blocks) v.psd.push_back(RMatrix::Zero(blk.size, blk.size));
    return v;
  }

  ConeVec identity_cone() const {
    ConeVec v{RVector::Ones(l_), {}};
    for (const auto& blk : prob_.blocks) v.psd.push_back(RMatrix::Identity(blk.size, blk.size));
    return v;
  }

  ConeVec apply_g(const RVector& x) const {
    ConeVec out = zero_cone();
    if (l_ > 0) out.lp = prob_.g_lp * x;
    for (std::size_t b = 0; b < prob_.blocks.size(); ++b) {
      const auto& blk = prob_.blocks[b];
      RMatrix& m = out.psd[b];
      for (std::size_t k = 0; k < blk.vars.size(); ++k) {
        const double xv = x[blk.vars[k]];
        if (xv == 0.0) continue;
        for (const auto& e : blk.coeffs[k]) {
          m(e.row, e.col) += e.value * xv;
          if (e.row != e.col) m(e.col, e.row) += e.value * xv;
        }
      }
    }
    return out;
  }

  RVector apply_gt(const ConeVec& u) const {
    RVector out = RVector::Zero(n_);
    if (l_ > 0) out += prob_.g_lp.transpose() * u.lp;
    for (std::size_t b = 0; b < prob_.blocks.size(); ++b) {
      const auto& blk = prob_.blocks[b];
      const RMatrix& m = u.psd[b];
      for (std::size_t k = 0; k < blk.vars.size(); ++k) {
        double acc = 0.0;
        for (const auto& e : blk.coeffs[k])
          acc += e.value * (e.row == e.col ? m(e.row, e.row) : m(e.row, e.col) + m(e.col, e.row));
        out[blk.vars[k]] += acc;
      }
    }
    return out;
  }

  // Most negative eigenvalue over all cones, negated (positive when outside the cone).
  double max_violation(const ConeVec& u) const {
    double t = -kInf;
    for (Eigen::Index i = 0; i < u.lp.size(); ++i) t = std::max(t, -u.lp[i]);
    for (const auto& m : u.psd) {
      Eigen::SelfAdjointEigenSolver<RMatrix> es(sym(m), Eigen::EigenvaluesOnly);
      t = std::max(t, -es.eigenvalues()[0]);
    }
    return t;
  }

  static Scaling identity_scaling(const ConeProblem& prob, int l) {
    Scaling sc;
    sc.w = RVector::Ones(l);
    sc.lambda_lp = RVector::Ones(l);
    for (const auto& blk : prob.blocks) {
      sc.r.push_back(RMatrix::Identity(blk.size, blk.size));
      sc.rinv.push_back(RMatrix::Identity(blk.size, blk.size));
      sc.lambda_psd.push_back(RVector::Ones(blk.size));
      sc.p.push_back(RMatrix::Identity(blk.size, blk.size));
    }
    return sc;
  }

  std::optional<Scaling> nt_scaling(const ConeVec& s, const ConeVec& z) const {
    Scaling sc;
    if (l_ > 0) {
      if ((s.lp.array() <= 0.0).any() || (z.lp.array() <= 0.0).any()) return std::nullopt;
      sc.w = (s.lp.array() / z.lp.array()).sqrt();
      sc.lambda_lp = (s.lp.array() * z.lp.array()).sqrt();
    } else {
      sc.w = RVector(0);
      sc.lambda_lp = RVector(0);
    }
    for (std::size_t b = 0; b < s.psd.size(); ++b) {
      Eigen::LLT<RMatrix> c1(sym(s.psd[b]));
      Eigen::LLT<RMatrix> c2(sym(z.psd[b]));
      if (c1.info() != Eigen::Success || c2.info() != Eigen::Success) return std::nullopt;
      const RMatrix l1 = c1.matrixL();
      const RMatrix l2 = c2.matrixL();
      Eigen::JacobiSVD<RMatrix> svd(l2.transpose() * l1, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const RVector lam = svd.singularValues();
      if (lam.minCoeff() <= 0.0 || !std::isfinite(lam.maxCoeff())) return std::nullopt;
      const RVector isq = lam.cwiseSqrt().cwiseInverse();
      const RMatrix r = l1 * svd.matrixV() * isq.asDiagonal();
      const RMatrix rinv = isq.asDiagonal() * svd.matrixU().transpose() * l2.transpose();
      sc.r.push_back(r);
      sc.rinv.push_back(rinv);
      sc.lambda_psd.push_back(lam);
      sc.p.push_back(sym(rinv.transpose() * rinv));
    }
    return sc;
  }

  // W u
  ConeVec scale_w(const Scaling& sc, const ConeVec& u) const {
    ConeVec out{sc.w.cwiseProduct(u.lp), {}};
    for (std::size_t b = 0; b < u.psd.size(); ++b) out.psd.push_back(sym(sc.r[b].transpose() * u.psd[b] * sc.r[b]));
    return out;
  }
  // W' u
  ConeVec scale_wt(const Scaling& sc, const ConeVec& u) const {
    ConeVec out{sc.w.cwiseProduct(u.lp), {}};
    for (std::size_t b = 0; b < u.psd.size(); ++b) out.psd.push_back(sym(sc.r[b] * u.psd[b] * sc.r[b].transpose()));
    return out;
  }
  // W'W u
  ConeVec scale_wtw(const Scaling& sc, const ConeVec& u) const { return scale_wt(sc, scale_w(sc, u)); }
  // W^{-1} W^{-T} u
  ConeVec scale_inv(const Scaling& sc, const ConeVec& u) const {
    ConeVec out{u.lp.cwiseQuotient(sc.w.cwiseProduct(sc.w)), {}};
    for (std::size_t b = 0; b < u.psd.size(); ++b) out.psd.push_back(sym(sc.p[b] * u.psd[b] * sc.p[b]));
    return out;
  }

  // lambda o lambda
  ConeVec lambda_sq(const Scaling& sc) const {
    ConeVec out{sc.lambda_lp.cwiseProduct(sc.lambda_lp), {}};
    for (const auto& lam : sc.lambda_psd) out.psd.push_back(RMatrix(lam.cwiseProduct(lam).asDiagonal()));
    return out;
  }

  // Solves lambda o u = d for u.
  ConeVec lambda_div(const Scaling& sc, const ConeVec& d) const {
    ConeVec out{d.lp.cwiseQuotient(sc.lambda_lp), {}};
    for (std::size_t b = 0; b < d.psd.size(); ++b) {
      const RVector& lam = sc.lambda_psd[b];
      RMatrix u = d.psd[b];
      for (Eigen::Index j = 0; j < u.cols(); ++j)
        for (Eigen::Index i = 0; i < u.rows(); ++i) u(i, j) *= 2.0 / (lam[i] + lam[j]);
      out.psd.push_back(sym(u));
    }
    return out;
  }

  static ConeVec jordan(const ConeVec& u, const ConeVec& v) {
    ConeVec out{u.lp.cwiseProduct(v.lp), {}};
    for (std::size_t b = 0; b < u.psd.size(); ++b) out.psd.push_back(sym(u.psd[b] * v.psd[b]));
    return out;
  }

  // Largest alpha with lambda + alpha * d in the cone (scaled coordinates).
  double max_step_scaled(const Scaling& sc, const ConeVec& d) const {
    double alpha = kInf;
    for (Eigen::Index i = 0; i < d.lp.size(); ++i)
      if (d.lp[i] < 0.0) alpha = std::min(alpha, -sc.lambda_lp[i] / d.lp[i]);
    for (std::size_t b = 0; b < d.psd.size(); ++b) {
      const RVector isq = sc.lambda_psd[b].cwiseSqrt().cwiseInverse();
      const RMatrix m = isq.asDiagonal() * d.psd[b] * isq.asDiagonal();
      Eigen::SelfAdjointEigenSolver<RMatrix> es(sym(m), Eigen::EigenvaluesOnly);
      const double mn = es.eigenvalues()[0];
      if (mn < 0.0) alpha = std::min(alpha, -1.0 / mn);
    }
    return alpha;
  }

  bool factor(const Scaling& sc);
  void solve_kkt_once(const Scaling& sc, const RVector& bx, const RVector& by, const ConeVec& bz, RVector& ux,
                      RVector& uy, ConeVec& uz) const;
  void solve_kkt(const Scaling& sc, const RVector& bx, const RVector& by, const ConeVec& bz, RVector& ux,
                 RVector& uy, ConeVec& uz) const;

  const ConeProblem& prob_;
  ConeOptions opt_;
  int n_ = 0, p_ = 0, l_ = 0, degree_ = 0;
  RMatrix at_dense_;
  RMatrix ata_;
  std::vector<std::vector<BlockColumn>> columns_;
  ConeVec h_;

  Eigen::LLT<RMatrix> chol_h_;
  Eigen::LLT<RMatrix> chol_s_;
  RMatrix y_;  // L^{-1} A'
};

bool Solver::factor(const Scaling& sc) {
  RMatrix h = ata_;
  if (l_ > 0) {
    const RVector d = sc.w.cwiseProduct(sc.w).cwiseInverse();
    const SparseRows scaled = d.asDiagonal() * prob_.g_lp;
    h += RMatrix(RMatrix(prob_.g_lp.transpose()) * scaled);
  }
  for (std::size_t b = 0; b < columns_.size(); ++b) {
    const auto& cols = columns_[b];
    const RMatrix& p = sc.p[b];
    std::vector<RMatrix> gp(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto& sup = cols[k].support;
      RMatrix rows(sup.size(), p.cols());
      for (std::size_t i = 0; i < sup.size(); ++i) rows.row(i) = p.row(sup[i]);
      gp[k] = cols[k].local * rows;
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto& si = cols[i].support;
      for (std::size_t j = i; j < cols.size(); ++j) {
        const auto& sj = cols[j].support;
        double acc = 0.0;
        for (std::size_t a = 0; a < si.size(); ++a)
          for (std::size_t c = 0; c < sj.size(); ++c) acc += gp[i](a, sj[c]) * gp[j](c, si[a]);
        h(cols[i].var, cols[j].var) += acc;
        if (i != j) h(cols[j].var, cols[i].var) += acc;
      }
    }
  }
  double scale = 1.0;
  for (Eigen::Index i = 0; i < n_; ++i) scale = std::max(scale, h(i, i));
  double delta = 0.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    RMatrix hr = h;
    if (delta > 0.0) hr.diagonal().array() += delta;
    chol_h_.compute(hr);
    if (chol_h_.info() == Eigen::Success) break;
    delta = delta == 0.0 ? 1e-13 * scale : delta * 100.0;
    if (attempt == 5) return false;
  }
  if (p_ > 0) {
    y_ = chol_h_.matrixL().solve(at_dense_);
    RMatrix s = y_.transpose() * y_;
    double sscale = 1.0;
    for (Eigen::Index i = 0; i < p_; ++i) sscale = std::max(sscale, s(i, i));
    double sdelta = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      RMatrix sr = s;
      if (sdelta > 0.0) sr.diagonal().array() += sdelta;
      chol_s_.compute(sr);
      if (chol_s_.info() == Eigen::Success) break;
      sdelta = sdelta == 0.0 ? 1e-13 * sscale : sdelta * 100.0;
      if (attempt == 5) return false;
    }
  }
  return true;
}

void Solver::solve_kkt_once(const Scaling& sc, const RVector& bx, const RVector& by, const ConeVec& bz, RVector& ux,
                            RVector& uy, ConeVec& uz) const {
  RVector r1 = bx + apply_gt(scale_inv(sc, bz));
  if (p_ > 0) r1 += prob_.a.transpose() * by;
  const RVector t = chol_h_.matrixL().solve(r1);
  if (p_ > 0) {
    uy = chol_s_.solve(y_.transpose() * t - by);
    ux = chol_h_.matrixU().solve(t - y_ * uy);
  } else {
    uy = RVector(0);
    ux = chol_h_.matrixU().solve(t);
  }
  ConeVec gx = apply_g(ux);
  axpy(-1.0, bz, gx);
  uz = scale_inv(sc, gx);
}

// K [ux; uy; uz] = [bx; by; bz] with K = [0 A' G'; A 0 0; G 0 -W'W], plus iterative refinement.
void Solver::solve_kkt(const Scaling& sc, const RVector& bx, const RVector& by, const ConeVec& bz, RVector& ux,
                       RVector& uy, ConeVec& uz) const {
  solve_kkt_once(sc, bx, by, bz, ux, uy, uz);
  for (int it = 0; it < 6; ++it) {
    RVector ex = bx - apply_gt(uz);
    if (p_ > 0) ex -= prob_.a.transpose() * uy;
    RVector ey = p_ > 0 ? RVector(by - prob_.a * ux) : RVector(0);
    ConeVec ez = bz;
    axpy(-1.0, apply_g(ux), ez);
    axpy(1.0, scale_wtw(sc, uz), ez);
    const double err = std::sqrt(ex.squaredNorm() + ey.squaredNorm() + dot(ez, ez));
    const double ref = std::sqrt(bx.squaredNorm() + by.squaredNorm() + dot(bz, bz));
    if (!(err > 1e-15 * std::max(1.0, ref))) break;
    RVector dx, dy;
    ConeVec dz;
    solve_kkt_once(sc, ex, ey, ez, dx, dy, dz);
    ux += dx;
    uy += dy;
    axpy(1.0, dz, uz);
  }
}

ConeSolution Solver::run() {
  ConeSolution sol;
  const RVector& c = prob_.c;
  const RVector& b = prob_.b;
  const double resx0 = std::max(1.0, c.norm());
  const double resy0 = std::max(1.0, b.norm());
  const double resz0 = std::max(1.0, norm(h_));

  // Initial point from two least-squares problems with identity scaling.
  Scaling sc = identity_scaling(prob_, l_);
  if (!factor(sc)) return sol;
  RVector x, y;
  ConeVec s, z;
  {
    RVector ux, uy;
    ConeVec uz;
    solve_kkt(sc, RVector::Zero(n_), b, h_, ux, uy, uz);
    x = ux;
    s = combine(-1.0, uz, 0.0, uz);
    solve_kkt(sc, -c, RVector::Zero(p_), zero_cone(), ux, uy, uz);
    y = uy;
    z = uz;
  }
  const ConeVec e = identity_cone();
  {
    const double ts = max_violation(s);
    if (degree_ > 0 && ts >= -1e-8 * std::max(norm(s), 1.0)) axpy(1.0 + ts, e, s);
    const double tz = max_violation(z);
    if (degree_ > 0 && tz >= -1e-8 * std::max(norm(z), 1.0)) axpy(1.0 + tz, e, z);
  }
  double tau = 1.0, kappa = 1.0;

  struct Snapshot {
    RVector x, y;
    ConeVec s, z;
    double tau = 1.0, merit = kInf, pcost = 0.0, dcost = 0.0, pres = 0.0, dres = 0.0, gap = 0.0;
    int iter = 0;
  } best;
  int since_improved = 0;

  auto finish_optimal = [&](ConeSolution& out) {
    out.status = ConeStatus::Optimal;
    out.x = x / tau;
    out.y = y / tau;
    out.z_lp = z.lp / tau;
    out.s_lp = s.lp / tau;
    for (std::size_t k = 0; k < z.psd.size(); ++k) {
      out.z_psd.push_back(sym(z.psd[k]) / tau);
      out.s_psd.push_back(sym(s.psd[k]) / tau);
    }
  };

  for (int iter = 0; iter <= opt_.max_iterations; ++iter) {
    sol.iterations = iter;
    const RVector hrx = (p_ > 0 ? RVector(prob_.a.transpose() * y) : RVector::Zero(n_)) + apply_gt(z);
    const RVector rx = hrx + tau * c;
    const RVector hry = p_ > 0 ? RVector(prob_.a * x) : RVector(0);
    const RVector ry = hry - tau * b;
    ConeVec hrz = apply_g(x);
    axpy(1.0, s, hrz);
    ConeVec rz = hrz;
    axpy(-tau, h_, rz);
    const double cx = c.dot(x), by = b.dot(y), hz = dot(h_, z);
    const double rt = kappa + cx + by + hz;
    const double sz = dot(s, z);
    const double mu = (sz + tau * kappa) / (degree_ + 1);
    const double pcost = cx / tau, dcost = -(by + hz) / tau;
    const double gap = sz / (tau * tau);
    double relgap = kInf;
    if (pcost < 0.0) relgap = gap / -pcost;
    else if (dcost > 0.0) relgap = gap / dcost;
    const double pres = std::max(ry.norm() / resy0, norm(rz) / resz0) / tau;
    const double dres = rx.norm() / resx0 / tau;
    const double pinfres = (hz + by < 0.0) ? hrx.norm() / resx0 / -(hz + by) : kInf;
    const double dinfres =
        (cx < 0.0) ? std::max(hry.norm() / resy0, norm(hrz) / resz0) / -cx : kInf;

    if (opt_.verbose)
      std::fprintf(stderr, "%3d % .8e % .8e %.2e %.2e %.2e %.2e %.2e %.2e %.2e\n", iter, pcost, dcost, gap, pres,
                   dres, tau, kappa, pinfres, dinfres);

    sol.primal_objective = pcost + prob_.c0;
    sol.dual_objective = dcost + prob_.c0;
    sol.primal_residual = pres;
    sol.dual_residual = dres;
    sol.gap = gap;
    const double merit = std::max({pres, dres, std::min(gap, relgap)});
    sol.accuracy = merit;
    if (std::isfinite(merit) && merit < best.merit) {
      since_improved = merit < 0.9 * best.merit ? 0 : since_improved + 1;
      best = {x, y, s, z, tau, merit, pcost, dcost, pres, dres, gap, iter};
    } else {
      ++since_improved;
    }

    if (pres <= opt_.tol && dres <= opt_.tol && (gap <= opt_.tol || relgap <= opt_.tol)) {
      finish_optimal(sol);
      return sol;
    }
    if (pinfres <= opt_.tol) {
      const double scale = -(hz + by);
      sol.status = ConeStatus::PrimalInfeasible;
      sol.x = RVector::Zero(n_);
      sol.y = y / scale;
      sol.z_lp = z.lp / scale;
      sol.s_lp = RVector::Zero(l_);
      for (std::size_t k = 0; k < z.psd.size(); ++k) {
        sol.z_psd.push_back(sym(z.psd[k]) / scale);
        sol.s_psd.push_back(RMatrix::Zero(z.psd[k].rows(), z.psd[k].cols()));
      }
      return sol;
    }
    if (dinfres <= opt_.tol) {
      const double scale = -cx;
      sol.status = ConeStatus::DualInfeasible;
      sol.x = x / scale;
      sol.y = RVector::Zero(p_);
      sol.s_lp = s.lp / scale;
      sol.z_lp = RVector::Zero(l_);
      for (std::size_t k = 0; k < s.psd.size(); ++k) {
        sol.s_psd.push_back(sym(s.psd[k]) / scale);
        sol.z_psd.push_back(RMatrix::Zero(s.psd[k].rows(), s.psd[k].cols()));
      }
      return sol;
    }
    if (iter == opt_.max_iterations) break;
    if (since_improved >= 8) break;

    auto nt = nt_scaling(s, z);
    if (!nt || !factor(*nt)) {
      if (pres <= 10 * opt_.tol && dres <= 10 * opt_.tol && (gap <= 10 * opt_.tol || relgap <= 10 * opt_.tol)) {
        finish_optimal(sol);
        return sol;
      }
      break;
    }
    sc = std::move(*nt);

    // Direction for the tau column: K u2 = [-c; b; h].
    RVector u2x, u2y;
    ConeVec u2z;
    solve_kkt(sc, -c, b, h_, u2x, u2y, u2z);
    const double denom_base = c.dot(u2x) + b.dot(u2y) + dot(h_, u2z);

    struct Step {
      RVector dx, dy;
      ConeVec dz, ds, ds_hat, dz_hat;
      double dtau, dkappa;
    };
    auto newton = [&](double gamma, const ConeVec& d_s, double d_kappa) {
      Step st;
      const RVector bx = -(1.0 - gamma) * rx;
      const RVector byv = -(1.0 - gamma) * ry;
      ConeVec bz = combine(-(1.0 - gamma), rz, 0.0, rz);
      const double btau = -(1.0 - gamma) * rt;
      const ConeVec lds = lambda_div(sc, d_s);
      axpy(-1.0, scale_wt(sc, lds), bz);
      RVector u1x, u1y;
      ConeVec u1z;
      solve_kkt(sc, bx, byv, bz, u1x, u1y, u1z);
      const double num = btau - d_kappa / tau - (c.dot(u1x) + b.dot(u1y) + dot(h_, u1z));
      const double den = denom_base - kappa / tau;
      st.dtau = num / den;
      st.dx = u1x + st.dtau * u2x;
      st.dy = u1y + st.dtau * u2y;
      st.dz = combine(1.0, u1z, st.dtau, u2z);
      st.dkappa = (d_kappa - kappa * st.dtau) / tau;
      st.dz_hat = scale_w(sc, st.dz);
      st.ds_hat = combine(1.0, lds, -1.0, st.dz_hat);
      st.ds = scale_wt(sc, st.ds_hat);
      return st;
    };
    auto step_length = [&](const Step& st) {
      double alpha = std::min(max_step_scaled(sc, st.ds_hat), max_step_scaled(sc, st.dz_hat));
      if (st.dtau < 0.0) alpha = std::min(alpha, -tau / st.dtau);
      if (st.dkappa < 0.0) alpha = std::min(alpha, -kappa / st.dkappa);
      return alpha;
    };

    const ConeVec lsq = lambda_sq(sc);
    const Step aff = newton(0.0, combine(-1.0, lsq, 0.0, lsq), -tau * kappa);
    const double alpha_aff = std::min(1.0, step_length(aff));
    const double sigma = std::pow(std::clamp(1.0 - alpha_aff, 0.0, 1.0), 3);

    ConeVec ds_comb = combine(-1.0, lsq, 0.0, lsq);
    axpy(-1.0, jordan(aff.ds_hat, aff.dz_hat), ds_comb);
    axpy(sigma * mu, e, ds_comb);
    const double dk_comb = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
    const Step st = newton(sigma, ds_comb, dk_comb);
    const double alpha = std::min(1.0, 0.99 * step_length(st));
    if (!(alpha > 0.0) || !std::isfinite(alpha)) break;

    x += alpha * st.dx;
    y += alpha * st.dy;
    axpy(alpha, st.ds, s);
    axpy(alpha, st.dz, z);
    tau += alpha * st.dtau;
    kappa += alpha * st.dkappa;
    for (auto& m : s.psd) m = sym(m);
    for (auto& m : z.psd) m = sym(m);
  }

  if (best.merit <= std::max(opt_.near_optimal_tol, opt_.tol)) {
    x = best.x;
    y = best.y;
    s = best.s;
    z = best.z;
    tau = best.tau;
    sol.primal_objective = best.pcost + prob_.c0;
    sol.dual_objective = best.dcost + prob_.c0;
    sol.primal_residual = best.pres;
    sol.dual_residual = best.dres;
    sol.gap = best.gap;
    sol.accuracy = best.merit;
    finish_optimal(sol);
    return sol;
  }
  sol.status = ConeStatus::NumericalFailure;
  sol.x = x / tau;
  sol.y = y / tau;
  sol.z_lp = z.lp / tau;
  sol.s_lp = s.lp / tau;
  sol.z_psd.clear();
  sol.s_psd.clear();
  for (std::size_t k = 0; k < z.psd.size(); ++k) {
    sol.z_psd.push_back(sym(z.psd[k]) / tau);
    sol.s_psd.push_back(sym(s.psd[k]) / tau);
  }
  return sol;
}

}  // namespace

ConeSolution solve_cone_ipm(const ConeProblem& problem, const ConeOptions& options) {
  ConeProblem prob = problem;
  prob.normalize_shapes();
  Solver solver(prob, options);
  return solver.run();
}

}  // namespace telent::sdp
