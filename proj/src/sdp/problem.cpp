#include "telent/sdp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace telent::sdp {

namespace {

// Parameter layout of a Hermitian variable: diagonal, then (Re, Im) of each k < l in row-major order.
int pair_param(int d, int k, int l) { return d + 2 * (k * d - k * (k + 1) / 2 + (l - k - 1)); }

struct FormEntry {
  int out_row;
  int out_col;
  int part;  // 0 real, 1 imaginary
  int param;
  double value;
};

// Real linear forms of the upper triangle of an expression.
std::vector<FormEntry> linear_forms(const Expr& e, const std::vector<int>& offsets, const std::vector<int>& dims) {
  std::vector<FormEntry> raw;
  for (const auto& t : e.terms()) {
    const int off = offsets[t.var.index];
    const int d = dims[t.var.index];
    for (const auto& m : t.map.entries()) {
      if (m.out_row > m.out_col) continue;
      const double cr = m.coeff.real(), ci = m.coeff.imag();
      auto push = [&](int part, int param, double v) {
        if (v != 0.0) raw.push_back({m.out_row, m.out_col, part, off + param, v});
      };
      if (m.in_row == m.in_col) {
        push(0, m.in_row, cr);
        push(1, m.in_row, ci);
      } else if (m.in_row < m.in_col) {
        const int p = pair_param(d, m.in_row, m.in_col);
        push(0, p, cr);
        push(0, p + 1, -ci);
        push(1, p, ci);
        push(1, p + 1, cr);
      } else {
        const int p = pair_param(d, m.in_col, m.in_row);
        push(0, p, cr);
        push(0, p + 1, ci);
        push(1, p, ci);
        push(1, p + 1, -cr);
      }
    }
  }
  std::sort(raw.begin(), raw.end(), [](const FormEntry& a, const FormEntry& b) {
    return std::tie(a.out_row, a.out_col, a.part, a.param) < std::tie(b.out_row, b.out_col, b.part, b.param);
  });
  std::vector<FormEntry> merged;
  for (const auto& f : raw) {
    if (!merged.empty() && merged.back().out_row == f.out_row && merged.back().out_col == f.out_col &&
        merged.back().part == f.part && merged.back().param == f.param)
      merged.back().value += f.value;
    else
      merged.push_back(f);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const FormEntry& f) { return std::abs(f.value) < 1e-15; }),
               merged.end());
  return merged;
}

CMatrix hermitian_from_params(const RVector& x, int off, int d) {
  CMatrix m(d, d);
  for (int k = 0; k < d; ++k) {
    m(k, k) = x[off + k];
    for (int l = k + 1; l < d; ++l) {
      const int p = off + pair_param(d, k, l);
      m(k, l) = Complex(x[p], x[p + 1]);
      m(l, k) = Complex(x[p], -x[p + 1]);
    }
  }
  return m;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "Optimal";
    case SolveStatus::Infeasible:
      return "Infeasible";
    case SolveStatus::Unbounded:
      return "Unbounded";
    case SolveStatus::NumericalFailure:
      return "NumericalFailure";
  }
  return "Unknown";
}

VarId SdpProblem::declare_hermitian(int dim) {
  if (dim <= 0) throw DimensionError("declare_hermitian: dimension must be positive");
  var_dims_.push_back(dim);
  return VarId{static_cast<int>(var_dims_.size()) - 1};
}

int SdpProblem::var_dim(VarId v) const {
  if (v.index < 0 || v.index >= num_vars()) throw std::out_of_range("unknown variable id");
  return var_dims_[v.index];
}

void SdpProblem::check(const Expr& e) const {
  if (e.dim() <= 0) throw DimensionError("empty expression");
  for (const auto& t : e.terms())
    if (t.map.in_dim() != var_dim(t.var)) throw DimensionError("expression term does not fit its variable");
}

ConstraintId SdpProblem::add_equality(const Expr& e) {
  check(e);
  constraints_.push_back({ConstraintKind::Equality, e});
  return ConstraintId{static_cast<int>(constraints_.size()) - 1};
}

ConstraintId SdpProblem::add_psd(const Expr& e) {
  check(e);
  constraints_.push_back({ConstraintKind::Psd, e});
  return ConstraintId{static_cast<int>(constraints_.size()) - 1};
}

void SdpProblem::set_objective(const Expr& scalar, Sense sense) {
  check(scalar);
  if (scalar.dim() != 1) throw DimensionError("objective must be a 1x1 expression");
  objective_ = scalar;
  sense_ = sense;
}

RealifiedProblem realify(const SdpProblem& p) {
  RealifiedProblem out;
  const auto& dims = p.var_dims();
  int n = 0;
  for (int d : dims) {
    out.var_offset.push_back(n);
    n += hermitian_params(d);
  }
  ConeProblem& cone = out.cone;
  cone.n = n;
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> a_trip, g_trip;
  std::vector<double> b, h_lp;

  for (const auto& con : p.constraints()) {
    RealifiedProblem::ConstraintMap cm;
    cm.kind = con.kind;
    const int m = con.expr.dim();
    cm.dim = m;
    const CMatrix& c = con.expr.constant_part();
    const auto forms = linear_forms(con.expr, out.var_offset, dims);
    if (con.kind == ConstraintKind::Equality) {
      cm.first_row = static_cast<int>(b.size());
      std::vector<std::vector<int>> re_row(m, std::vector<int>(m, -1)), im_row(m, std::vector<int>(m, -1));
      for (int r = 0; r < m; ++r)
        for (int col = r; col < m; ++col) {
          re_row[r][col] = static_cast<int>(b.size());
          b.push_back(-c(r, col).real());
          if (col > r) {
            im_row[r][col] = static_cast<int>(b.size());
            b.push_back(-c(r, col).imag());
          }
        }
      for (const auto& f : forms) {
        const int row = f.part == 0 ? re_row[f.out_row][f.out_col] : im_row[f.out_row][f.out_col];
        if (row >= 0) a_trip.emplace_back(row, f.param, f.value);
      }
    } else if (m == 1) {
      cm.lp_row = static_cast<int>(h_lp.size());
      h_lp.push_back(c(0, 0).real());
      for (const auto& f : forms)
        if (f.part == 0) g_trip.emplace_back(cm.lp_row, f.param, -f.value);
    } else {
      cm.block = static_cast<int>(cone.blocks.size());
      PsdBlock blk;
      blk.size = 2 * m;
      blk.h = realify_hermitian(hermitian_part(c));
      std::map<int, std::vector<SymEntry>> per_param;
      for (const auto& f : forms) {
        auto& list = per_param[f.param];
        const int r = f.out_row, col = f.out_col;
        if (f.part == 0) {
          list.push_back({r, col, -f.value});
          list.push_back({r + m, col + m, -f.value});
        } else if (r < col) {
          list.push_back({r, col + m, f.value});
          list.push_back({col, r + m, -f.value});
        }
      }
      for (auto& [param, list] : per_param) {
        if (list.empty()) continue;
        blk.vars.push_back(param);
        blk.coeffs.push_back(std::move(list));
      }
      cone.blocks.push_back(std::move(blk));
    }
    out.constraint_maps.push_back(cm);
  }

  cone.a.resize(static_cast<Eigen::Index>(b.size()), n);
  cone.a.setFromTriplets(a_trip.begin(), a_trip.end());
  cone.b = Eigen::Map<RVector>(b.data(), static_cast<Eigen::Index>(b.size()));
  cone.g_lp.resize(static_cast<Eigen::Index>(h_lp.size()), n);
  cone.g_lp.setFromTriplets(g_trip.begin(), g_trip.end());
  cone.h_lp = Eigen::Map<RVector>(h_lp.data(), static_cast<Eigen::Index>(h_lp.size()));

  out.objective_sign = p.sense() == Sense::Minimize ? 1.0 : -1.0;
  cone.c = RVector::Zero(n);
  for (const auto& f : linear_forms(p.objective(), out.var_offset, dims)) {
    if (f.part == 0) cone.c[f.param] += out.objective_sign * f.value;
    else if (std::abs(f.value) > 1e-12) throw std::invalid_argument("objective is not real on Hermitian arguments");
  }
  cone.c0 = out.objective_sign * p.objective().constant_part()(0, 0).real();
  return out;
}

SdpSolution solve(const SdpProblem& p, const SolveOptions& options) {
  const RealifiedProblem rp = realify(p);
  ConeOptions copt;
  copt.tol = options.tol;
  copt.max_iterations = options.max_iterations;
  copt.verbose = options.verbose;
  const ConeSolution cs = solve_cone(rp.cone, copt);

  SdpSolution sol;
  sol.solver_tolerance = std::max(options.tol, cs.accuracy);
  sol.iterations = cs.iterations;
  const double inf = std::numeric_limits<double>::infinity();
  switch (cs.status) {
    case ConeStatus::Optimal:
      sol.status = SolveStatus::Optimal;
      sol.objective_value = rp.objective_sign * cs.primal_objective;
      sol.dual_objective = rp.objective_sign * cs.dual_objective;
      break;
    case ConeStatus::PrimalInfeasible:
      sol.status = SolveStatus::Infeasible;
      sol.objective_value = sol.dual_objective = rp.objective_sign * inf;
      break;
    case ConeStatus::DualInfeasible:
      sol.status = SolveStatus::Unbounded;
      sol.objective_value = sol.dual_objective = -rp.objective_sign * inf;
      break;
    case ConeStatus::NumericalFailure:
      sol.status = SolveStatus::NumericalFailure;
      sol.objective_value = rp.objective_sign * cs.primal_objective;
      sol.dual_objective = rp.objective_sign * cs.dual_objective;
      break;
  }

  const auto& dims = p.var_dims();
  for (std::size_t v = 0; v < dims.size(); ++v)
    sol.primal.push_back(cs.x.size() == rp.cone.n ? hermitian_from_params(cs.x, rp.var_offset[v], dims[v])
                                                  : CMatrix::Zero(dims[v], dims[v]));

  if (sol.status == SolveStatus::Optimal || sol.status == SolveStatus::Infeasible) {
    for (const auto& cm : rp.constraint_maps) {
      const int m = cm.dim;
      CMatrix y = CMatrix::Zero(m, m);
      if (cm.kind == ConstraintKind::Equality) {
        int row = cm.first_row;
        for (int r = 0; r < m; ++r)
          for (int c = r; c < m; ++c) {
            if (c == r) {
              y(r, r) = cs.y[row++];
            } else {
              const double re = cs.y[row++];
              const double im = cs.y[row++];
              y(r, c) = Complex(re, im) / 2.0;
              y(c, r) = std::conj(y(r, c));
            }
          }
      } else if (cm.lp_row >= 0) {
        y(0, 0) = cs.z_lp[cm.lp_row];
      } else {
        const RMatrix& z = cs.z_psd[cm.block];
        const RMatrix re = z.topLeftCorner(m, m) + z.bottomRightCorner(m, m);
        const RMatrix im = z.bottomLeftCorner(m, m) - z.topRightCorner(m, m);
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) y(r, c) = Complex(re(r, c), im(r, c));
        y = hermitian_part(y);
      }
      sol.duals.push_back(std::move(y));
    }
  }
  return sol;
}

std::vector<CMatrix> dual_witness(const SdpSolution& sol, std::span<const ConstraintId> ids) {
  if (!sol.has_duals()) throw MissingDualsError("solution carries no dual information (status " + to_string(sol.status) + ")");
  std::vector<CMatrix> out;
  for (const auto& id : ids) out.push_back(sol.duals.at(id.index));
  return out;
}

}  // namespace telent::sdp
