// Equality presolve: singleton rows fix variables, rows x_i = +-x_j merge them,
// dependent rows are dropped. Duals of eliminated rows are recovered afterwards.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "telent/sdp/cone.hpp"

namespace telent::sdp {

namespace {

struct SignedUnionFind {
  std::vector<int> parent;
  std::vector<int> sign;  // x_i = sign_i * x_parent
  std::vector<std::optional<double>> fixed;

  explicit SignedUnionFind(int n) : parent(n), sign(n, 1), fixed(n) { std::iota(parent.begin(), parent.end(), 0); }

  std::pair<int, int> find(int i) {
    if (parent[i] == i) return {i, 1};
    auto [root, s] = find(parent[i]);
    parent[i] = root;
    sign[i] *= s;
    return {root, sign[i]};
  }

  static bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

  // a * x_i = rhs. Returns false on conflict.
  bool fix(int i, double value, double tol) {
    auto [r, s] = find(i);
    const double v = s * value;
    if (fixed[r]) return close(*fixed[r], v, tol);
    fixed[r] = v;
    return true;
  }

  // x_i = t * x_j. Returns false on conflict.
  bool link(int i, int j, int t, double tol) {
    auto [ri, si] = find(i);
    auto [rj, sj] = find(j);
    if (ri == rj) {
      if (si == t * sj) return true;
      if (fixed[ri]) return close(*fixed[ri], 0.0, tol);
      fixed[ri] = 0.0;
      return true;
    }
    const int rel = si * t * sj;  // x_ri = rel * x_rj
    if (fixed[ri]) {
      const double implied = rel * *fixed[ri];
      if (fixed[rj] && !close(*fixed[rj], implied, tol)) return false;
      fixed[rj] = implied;
    }
    parent[ri] = rj;
    sign[ri] = rel;
    return true;
  }
};

struct Presolved {
  ConeProblem reduced;
  std::vector<int> col_root;    // per original column
  std::vector<int> col_sign;
  std::vector<double> col_fixed;  // NaN when free
  std::vector<int> root_newcol;   // -1 when dropped or fixed
  std::vector<int> kept_rows;     // original row index of each reduced row
  std::vector<int> simple_rows;   // rows eliminated through the union-find
  std::optional<ConeSolution> early;  // reduced-space answer found during presolve
};

Presolved presolve(const ConeProblem& prob, double tol) {
  Presolved out;
  const int n = prob.n;
  const int p = static_cast<int>(prob.a.rows());
  SignedUnionFind uf(n);
  const double fix_tol = 1e-10;

  std::vector<int> candidate_rows;
  for (int r = 0; r < p; ++r) {
    std::vector<std::pair<int, double>> nz;
    for (SparseRows::InnerIterator it(prob.a, r); it; ++it)
      if (it.value() != 0.0) nz.emplace_back(static_cast<int>(it.col()), it.value());
    bool simple = false;
    if (nz.size() == 1) {
      simple = uf.fix(nz[0].first, prob.b[r] / nz[0].second, fix_tol);
    } else if (nz.size() == 2 && prob.b[r] == 0.0 && nz[0].first != nz[1].first) {
      const double a0 = nz[0].second, a1 = nz[1].second;
      if (std::abs(std::abs(a0) - std::abs(a1)) <= 1e-12 * std::abs(a0)) {
        const int t = (a0 * a1 < 0.0) ? 1 : -1;
        simple = uf.link(nz[0].first, nz[1].first, t, fix_tol);
      }
    }
    if (simple) out.simple_rows.push_back(r);
    else candidate_rows.push_back(r);
  }

  out.col_root.resize(n);
  out.col_sign.resize(n);
  out.col_fixed.assign(n, std::nan(""));
  for (int i = 0; i < n; ++i) {
    auto [r, s] = uf.find(i);
    out.col_root[i] = r;
    out.col_sign[i] = s;
    if (uf.fixed[r]) out.col_fixed[i] = s * *uf.fixed[r];
  }

  // Usage of each free root.
  std::vector<double> root_c(n, 0.0);
  std::vector<bool> root_used(n, false);
  double c0 = prob.c0;
  for (int i = 0; i < n; ++i) {
    if (!std::isnan(out.col_fixed[i])) c0 += prob.c[i] * out.col_fixed[i];
    else root_c[out.col_root[i]] += prob.c[i] * out.col_sign[i];
  }
  auto mark_used = [&](int i) {
    if (std::isnan(out.col_fixed[i])) root_used[out.col_root[i]] = true;
  };
  for (int r : candidate_rows)
    for (SparseRows::InnerIterator it(prob.a, r); it; ++it) mark_used(static_cast<int>(it.col()));
  for (int k = 0; k < prob.g_lp.outerSize(); ++k)
    for (SparseRows::InnerIterator it(prob.g_lp, k); it; ++it) mark_used(static_cast<int>(it.col()));
  for (const auto& blk : prob.blocks)
    for (int v : blk.vars) mark_used(v);

  out.root_newcol.assign(n, -1);
  int n_new = 0;
  std::optional<int> unbounded_root;
  for (int i = 0; i < n; ++i) {
    if (out.col_root[i] != i || uf.fixed[i]) continue;
    if (root_used[i]) out.root_newcol[i] = n_new++;
    else if (std::abs(root_c[i]) > 1e-12 && !unbounded_root) unbounded_root = i;
  }

  ConeProblem& red = out.reduced;
  red.n = n_new;
  red.c = RVector::Zero(n_new);
  for (int i = 0; i < n; ++i)
    if (out.root_newcol[i] >= 0) red.c[out.root_newcol[i]] = root_c[i];
  red.c0 = c0;

  if (unbounded_root) {
    out.root_newcol[*unbounded_root] = n_new;
    red.n = n_new + 1;
    red.c.conservativeResize(n_new + 1);
    red.c[n_new] = root_c[*unbounded_root];
  }

  // Substituted equality rows.
  using Triplet = Eigen::Triplet<double>;
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> rhs;
  std::vector<int> row_origin;
  std::optional<int> empty_conflict;
  for (int r : candidate_rows) {
    std::map<int, double> acc;
    double b = prob.b[r];
    double scale = std::abs(b);
    for (SparseRows::InnerIterator it(prob.a, r); it; ++it) {
      const int i = static_cast<int>(it.col());
      scale = std::max(scale, std::abs(it.value()));
      if (!std::isnan(out.col_fixed[i])) b -= it.value() * out.col_fixed[i];
      else acc[out.root_newcol[out.col_root[i]]] += it.value() * out.col_sign[i];
    }
    std::vector<std::pair<int, double>> entries;
    for (auto [col, v] : acc)
      if (std::abs(v) > 1e-14 * std::max(1.0, scale)) entries.emplace_back(col, v);
    if (entries.empty()) {
      if (std::abs(b) > 10.0 * tol * std::max(1.0, std::abs(prob.b[r])) && !empty_conflict)
        empty_conflict = static_cast<int>(rows.size());
      else
        continue;
    }
    rows.push_back(std::move(entries));
    rhs.push_back(b);
    row_origin.push_back(r);
  }

  // Dependent rows via pivoted Cholesky of A A'.
  const int m = static_cast<int>(rows.size());
  std::vector<bool> keep(m, true);
  std::optional<RVector> dependent_cert;
  if (m > 0 && !empty_conflict) {
    RMatrix dense = RMatrix::Zero(m, n_new);
    for (int r = 0; r < m; ++r)
      for (auto [col, v] : rows[r]) dense(r, col) = v;
    const RMatrix gram = dense * dense.transpose();
    RVector d = gram.diagonal();
    RMatrix l = RMatrix::Zero(m, m);
    std::vector<int> order;
    std::vector<bool> chosen(m, false);
    for (int step = 0; step < m; ++step) {
      int best = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        if (chosen[i] || gram(i, i) <= 0.0) continue;
        const double ratio = d[i] / gram(i, i);
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best = i;
        }
      }
      if (best < 0 || best_ratio <= 1e-12) break;
      const int k = static_cast<int>(order.size());
      const double piv = std::sqrt(d[best]);
      for (int i = 0; i < m; ++i) {
        if (chosen[i] && i != best) continue;
        double v = gram(i, best);
        for (int t = 0; t < k; ++t) v -= l(i, t) * l(best, t);
        l(i, k) = v / piv;
      }
      chosen[best] = true;
      order.push_back(best);
      for (int i = 0; i < m; ++i)
        if (!chosen[i]) d[i] -= l(i, k) * l(i, k);
    }
    if (static_cast<int>(order.size()) < m) {
      const int k = static_cast<int>(order.size());
      RMatrix gk(k, k);
      RVector bk(k);
      for (int i = 0; i < k; ++i) {
        bk[i] = rhs[order[i]];
        for (int j = 0; j < k; ++j) gk(i, j) = gram(order[i], order[j]);
      }
      Eigen::LDLT<RMatrix> ldlt(gk);
      for (int r = 0; r < m; ++r) {
        if (chosen[r]) continue;
        keep[r] = false;
        RVector gr(k);
        for (int i = 0; i < k; ++i) gr[i] = gram(order[i], r);
        const RVector lambda = k > 0 ? RVector(ldlt.solve(gr)) : RVector(0);
        const double mismatch = rhs[r] - (k > 0 ? lambda.dot(bk) : 0.0);
        const double ref = std::max({1.0, std::abs(rhs[r]), k > 0 ? lambda.cwiseAbs().dot(bk.cwiseAbs()) : 0.0});
        if (std::abs(mismatch) > 10.0 * tol * ref && !dependent_cert) {
          // y = (e_r - sum lambda_i e_{order_i}) / (-mismatch) gives b'y = -1, A'y = 0.
          RVector y = RVector::Zero(m);
          y[r] = 1.0;
          for (int i = 0; i < k; ++i) y[order[i]] -= lambda[i];
          dependent_cert = y / -mismatch;
        }
      }
    }
  }

  std::vector<int> new_index(m, -1);
  std::vector<Triplet> trip;
  std::vector<double> b_red;
  for (int r = 0; r < m; ++r) {
    if (!keep[r]) continue;
    new_index[r] = static_cast<int>(out.kept_rows.size());
    out.kept_rows.push_back(row_origin[r]);
    for (auto [col, v] : rows[r]) trip.emplace_back(new_index[r], col, v);
    b_red.push_back(rhs[r]);
  }
  red.a.resize(static_cast<Eigen::Index>(out.kept_rows.size()), red.n);
  red.a.setFromTriplets(trip.begin(), trip.end());
  red.b = Eigen::Map<RVector>(b_red.data(), static_cast<Eigen::Index>(b_red.size()));

  // Cones.
  {
    std::vector<Triplet> gt;
    red.h_lp = prob.h_lp;
    for (int k = 0; k < prob.g_lp.outerSize(); ++k) {
      std::map<int, double> acc;
      for (SparseRows::InnerIterator it(prob.g_lp, k); it; ++it) {
        const int i = static_cast<int>(it.col());
        if (!std::isnan(out.col_fixed[i])) red.h_lp[k] -= it.value() * out.col_fixed[i];
        else acc[out.root_newcol[out.col_root[i]]] += it.value() * out.col_sign[i];
      }
      for (auto [col, v] : acc)
        if (v != 0.0) gt.emplace_back(k, col, v);
    }
    red.g_lp.resize(prob.g_lp.rows(), red.n);
    red.g_lp.setFromTriplets(gt.begin(), gt.end());
  }
  for (const auto& blk : prob.blocks) {
    PsdBlock nb;
    nb.size = blk.size;
    nb.h = blk.h;
    std::map<int, std::map<std::pair<int, int>, double>> acc;
    for (std::size_t k = 0; k < blk.vars.size(); ++k) {
      const int i = blk.vars[k];
      if (!std::isnan(out.col_fixed[i])) {
        for (const auto& e : blk.coeffs[k]) {
          nb.h(e.row, e.col) -= e.value * out.col_fixed[i];
          if (e.row != e.col) nb.h(e.col, e.row) -= e.value * out.col_fixed[i];
        }
        continue;
      }
      auto& target = acc[out.root_newcol[out.col_root[i]]];
      for (const auto& e : blk.coeffs[k]) target[{e.row, e.col}] += e.value * out.col_sign[i];
    }
    for (auto& [col, entries] : acc) {
      std::vector<SymEntry> list;
      for (auto& [rc, v] : entries)
        if (v != 0.0) list.push_back({rc.first, rc.second, v});
      if (list.empty()) continue;
      nb.vars.push_back(col);
      nb.coeffs.push_back(std::move(list));
    }
    red.blocks.push_back(std::move(nb));
  }

  if (unbounded_root) {
    // Ray along a column touching no constraint.
    ConeSolution ray;
    ray.status = ConeStatus::DualInfeasible;
    ray.x = RVector::Zero(red.n);
    ray.x[n_new] = -1.0 / root_c[*unbounded_root];
    ray.y = RVector::Zero(red.a.rows());
    ray.z_lp = RVector::Zero(red.h_lp.size());
    ray.s_lp = RVector::Zero(red.h_lp.size());
    for (const auto& blk : red.blocks) {
      ray.z_psd.push_back(RMatrix::Zero(blk.size, blk.size));
      ray.s_psd.push_back(RMatrix::Zero(blk.size, blk.size));
    }
    out.early = std::move(ray);
    return out;
  }
  if (empty_conflict || dependent_cert) {
    ConeSolution cert;
    cert.status = ConeStatus::PrimalInfeasible;
    cert.x = RVector::Zero(red.n);
    RVector y_full = RVector::Zero(m);
    if (empty_conflict) y_full[*empty_conflict] = -1.0 / rhs[*empty_conflict];
    else y_full = *dependent_cert;
    // Express the certificate on the kept rows plus the dropped ones it needs.
    cert.y = RVector::Zero(static_cast<Eigen::Index>(out.kept_rows.size()));
    std::vector<int> extra_rows;
    std::vector<double> extra_vals;
    for (int r = 0; r < m; ++r) {
      if (y_full[r] == 0.0) continue;
      if (new_index[r] >= 0) cert.y[new_index[r]] = y_full[r];
      else {
        extra_rows.push_back(row_origin[r]);
        extra_vals.push_back(y_full[r]);
      }
    }
    // Stash the dropped-row multipliers after the kept ones; postsolve unpacks them.
    cert.y.conservativeResize(cert.y.size() + static_cast<Eigen::Index>(extra_rows.size()));
    for (std::size_t i = 0; i < extra_rows.size(); ++i) {
      cert.y[static_cast<Eigen::Index>(out.kept_rows.size() + i)] = extra_vals[i];
      out.kept_rows.push_back(extra_rows[i]);
    }
    cert.z_lp = RVector::Zero(red.h_lp.size());
    cert.s_lp = RVector::Zero(red.h_lp.size());
    for (const auto& blk : red.blocks) {
      cert.z_psd.push_back(RMatrix::Zero(blk.size, blk.size));
      cert.s_psd.push_back(RMatrix::Zero(blk.size, blk.size));
    }
    out.early = std::move(cert);
  }
  return out;
}

RVector apply_gt_full(const ConeProblem& prob, const RVector& z_lp, const std::vector<RMatrix>& z_psd) {
  RVector out = RVector::Zero(prob.n);
  if (prob.g_lp.rows() > 0) out += prob.g_lp.transpose() * z_lp;
  for (std::size_t b = 0; b < prob.blocks.size(); ++b) {
    const auto& blk = prob.blocks[b];
    for (std::size_t k = 0; k < blk.vars.size(); ++k) {
      double acc = 0.0;
      for (const auto& e : blk.coeffs[k])
        acc += e.value * (e.row == e.col ? z_psd[b](e.row, e.row) : z_psd[b](e.row, e.col) + z_psd[b](e.col, e.row));
      out[blk.vars[k]] += acc;
    }
  }
  return out;
}

ConeSolution postsolve(const ConeProblem& prob, const Presolved& pre, const ConeSolution& red) {
  ConeSolution sol = red;
  const int n = prob.n;
  const bool ray = red.status == ConeStatus::DualInfeasible;
  const bool farkas = red.status == ConeStatus::PrimalInfeasible;

  sol.x = RVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (!std::isnan(pre.col_fixed[i])) {
      sol.x[i] = ray || farkas ? 0.0 : pre.col_fixed[i];
    } else {
      const int col = pre.root_newcol[pre.col_root[i]];
      if (col >= 0 && col < red.x.size()) sol.x[i] = pre.col_sign[i] * red.x[col];
    }
  }

  sol.y = RVector::Zero(prob.a.rows());
  for (std::size_t k = 0; k < pre.kept_rows.size() && static_cast<Eigen::Index>(k) < red.y.size(); ++k)
    sol.y[pre.kept_rows[k]] = red.y[static_cast<Eigen::Index>(k)];

  if (ray || pre.simple_rows.empty()) return sol;

  // Recover multipliers of eliminated rows class by class: A_S' y_S = -(c + A' y + G' z).
  RVector resid = apply_gt_full(prob, sol.z_lp, sol.z_psd);
  if (prob.a.rows() > 0) resid += prob.a.transpose() * sol.y;
  if (!farkas) resid += prob.c;

  std::map<int, std::vector<int>> class_rows;
  for (int r : pre.simple_rows) {
    SparseRows::InnerIterator it(prob.a, r);
    class_rows[pre.col_root[it.col()]].push_back(r);
  }
  std::map<int, std::vector<int>> class_cols;
  for (int i = 0; i < n; ++i)
    if (class_rows.count(pre.col_root[i])) class_cols[pre.col_root[i]].push_back(i);

  for (const auto& [root, rws] : class_rows) {
    const auto& cols = class_cols[root];
    RMatrix m = RMatrix::Zero(static_cast<Eigen::Index>(cols.size()), static_cast<Eigen::Index>(rws.size()));
    RVector rhs(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = -resid[cols[i]];
    for (std::size_t j = 0; j < rws.size(); ++j)
      for (SparseRows::InnerIterator it(prob.a, rws[j]); it; ++it) {
        const auto pos = std::lower_bound(cols.begin(), cols.end(), static_cast<int>(it.col())) - cols.begin();
        m(pos, static_cast<Eigen::Index>(j)) += it.value();
      }
    const RVector yr = m.completeOrthogonalDecomposition().solve(rhs);
    for (std::size_t j = 0; j < rws.size(); ++j) sol.y[rws[j]] = yr[static_cast<Eigen::Index>(j)];
  }
  return sol;
}

ConeSolution solve_without_columns(const ConeProblem& red) {
  // Only constant cone constraints remain.
  ConeSolution sol;
  sol.x = RVector(0);
  sol.y = RVector::Zero(red.a.rows());
  sol.s_lp = red.h_lp;
  sol.z_lp = RVector::Zero(red.h_lp.size());
  double worst = 0.0;
  int worst_block = -2;
  int worst_index = -1;
  RVector worst_vec;
  for (Eigen::Index i = 0; i < red.h_lp.size(); ++i)
    if (red.h_lp[i] < worst) {
      worst = red.h_lp[i];
      worst_block = -1;
      worst_index = static_cast<int>(i);
    }
  for (std::size_t b = 0; b < red.blocks.size(); ++b) {
    const RMatrix h = 0.5 * (red.blocks[b].h + red.blocks[b].h.transpose());
    sol.s_psd.push_back(h);
    sol.z_psd.push_back(RMatrix::Zero(h.rows(), h.cols()));
    Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
    if (es.eigenvalues()[0] < worst) {
      worst = es.eigenvalues()[0];
      worst_block = static_cast<int>(b);
      worst_vec = es.eigenvectors().col(0);
    }
  }
  const double hnorm = std::max(1.0, red.h_lp.norm());
  if (worst >= -1e-9 * hnorm) {
    sol.status = ConeStatus::Optimal;
    sol.primal_objective = sol.dual_objective = red.c0;
    return sol;
  }
  sol.status = ConeStatus::PrimalInfeasible;
  if (worst_block == -1) sol.z_lp[worst_index] = 1.0 / -worst;
  else sol.z_psd[worst_block] = worst_vec * worst_vec.transpose() / -worst;
  return sol;
}

}  // namespace

ConeSolution solve_cone(const ConeProblem& problem, const ConeOptions& options) {
  ConeProblem prob = problem;
  prob.normalize_shapes();
  const Presolved pre = presolve(prob, options.tol);
  ConeSolution red;
  if (pre.early) red = *pre.early;
  else if (pre.reduced.n == 0) red = solve_without_columns(pre.reduced);
  else red = solve_cone_ipm(pre.reduced, options);
  ConeSolution sol = postsolve(prob, pre, red);
  if (sol.status == ConeStatus::Optimal) {
    sol.primal_objective = prob.c.dot(sol.x) + prob.c0;
    sol.dual_objective = -prob.b.dot(sol.y) - prob.h_lp.dot(sol.z_lp) + prob.c0;
    for (std::size_t k = 0; k < prob.blocks.size(); ++k)
      sol.dual_objective -= prob.blocks[k].h.cwiseProduct(sol.z_psd[k]).sum();
  }
  return sol;
}

}  // namespace telent::sdp
