#include "telent/sdp/expr.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace telent::sdp {

namespace {

std::vector<MapEntry> collect(std::unordered_map<std::uint64_t, Complex>& acc, int out_dim, int in_dim) {
  std::vector<std::pair<std::uint64_t, Complex>> sorted(acc.begin(), acc.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<MapEntry> out;
  out.reserve(sorted.size());
  const auto n_in = static_cast<std::uint64_t>(in_dim);
  const auto n_out = static_cast<std::uint64_t>(out_dim);
  for (const auto& [key, c] : sorted) {
    if (c == Complex(0.0)) continue;
    std::uint64_t k = key;
    const int in_col = static_cast<int>(k % n_in);
    k /= n_in;
    const int in_row = static_cast<int>(k % n_in);
    k /= n_in;
    const int out_col = static_cast<int>(k % n_out);
    const int out_row = static_cast<int>(k / n_out);
    out.push_back({out_row, out_col, in_row, in_col, c});
  }
  return out;
}

std::uint64_t entry_key(int out_row, int out_col, int in_row, int in_col, int out_dim, int in_dim) {
  const auto n_in = static_cast<std::uint64_t>(in_dim);
  const auto n_out = static_cast<std::uint64_t>(out_dim);
  return ((static_cast<std::uint64_t>(out_row) * n_out + static_cast<std::uint64_t>(out_col)) * n_in +
          static_cast<std::uint64_t>(in_row)) *
             n_in +
         static_cast<std::uint64_t>(in_col);
}

}  // namespace

LinearMap::LinearMap(int in_dim, int out_dim, std::vector<MapEntry> entries)
    : in_dim_(in_dim), out_dim_(out_dim), entries_(std::move(entries)) {
  for (const auto& e : entries_)
    if (e.out_row < 0 || e.out_row >= out_dim_ || e.out_col < 0 || e.out_col >= out_dim_ || e.in_row < 0 ||
        e.in_row >= in_dim_ || e.in_col < 0 || e.in_col >= in_dim_)
      throw DimensionError("linear map entry out of range");
}

LinearMap LinearMap::identity(int dim) {
  std::vector<MapEntry> entries;
  entries.reserve(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) entries.push_back({i, j, i, j, Complex(1.0)});
  return LinearMap(dim, dim, std::move(entries));
}

LinearMap LinearMap::from_function(int in_dim, int out_dim, const std::function<CMatrix(const CMatrix&)>& f) {
  std::vector<MapEntry> entries;
  CMatrix unit = CMatrix::Zero(in_dim, in_dim);
  for (int k = 0; k < in_dim; ++k) {
    for (int l = 0; l < in_dim; ++l) {
      unit(k, l) = 1.0;
      const CMatrix img = f(unit);
      unit(k, l) = 0.0;
      if (img.rows() != out_dim || img.cols() != out_dim) throw DimensionError("linear map image has wrong size");
      for (int i = 0; i < out_dim; ++i)
        for (int j = 0; j < out_dim; ++j)
          if (std::abs(img(i, j)) > 1e-15) entries.push_back({i, j, k, l, img(i, j)});
    }
  }
  return LinearMap(in_dim, out_dim, std::move(entries));
}

CMatrix LinearMap::apply(const CMatrix& x) const {
  if (x.rows() != in_dim_ || x.cols() != in_dim_) throw DimensionError("linear map applied to wrong size");
  CMatrix out = CMatrix::Zero(out_dim_, out_dim_);
  for (const auto& e : entries_) out(e.out_row, e.out_col) += e.coeff * x(e.in_row, e.in_col);
  return out;
}

LinearMap LinearMap::then(const LinearMap& outer) const {
  if (outer.in_dim() != out_dim_) throw DimensionError("linear map composition size mismatch");
  std::unordered_map<int, std::vector<int>> by_output;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    by_output[entries_[i].out_row * out_dim_ + entries_[i].out_col].push_back(static_cast<int>(i));
  std::unordered_map<std::uint64_t, Complex> acc;
  for (const auto& o : outer.entries()) {
    auto it = by_output.find(o.in_row * out_dim_ + o.in_col);
    if (it == by_output.end()) continue;
    for (int idx : it->second) {
      const auto& e = entries_[idx];
      acc[entry_key(o.out_row, o.out_col, e.in_row, e.in_col, outer.out_dim(), in_dim_)] += o.coeff * e.coeff;
    }
  }
  return LinearMap(in_dim_, outer.out_dim(), collect(acc, outer.out_dim(), in_dim_));
}

LinearMap LinearMap::scaled(Complex s) const {
  std::vector<MapEntry> entries = entries_;
  for (auto& e : entries) e.coeff *= s;
  return LinearMap(in_dim_, out_dim_, std::move(entries));
}

Expr Expr::constant(const CMatrix& c) {
  if (c.rows() != c.cols()) throw DimensionError("expression constants must be square");
  Expr e;
  e.constant_ = c;
  return e;
}

Expr Expr::zero(int dim) { return constant(CMatrix::Zero(dim, dim)); }

Expr Expr::variable(VarId v, int dim) {
  Expr e = zero(dim);
  e.terms_.push_back({v, LinearMap::identity(dim)});
  return e;
}

Expr& Expr::operator+=(const Expr& other) {
  if (dim() == 0 && terms_.empty()) {
    *this = other;
    return *this;
  }
  if (other.dim() != dim()) throw DimensionError("expression sizes differ");
  constant_ += other.constant_;
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

Expr& Expr::operator-=(const Expr& other) { return *this += Complex(-1.0) * other; }

Expr& Expr::operator*=(Complex s) {
  constant_ *= s;
  for (auto& t : terms_) t.map = t.map.scaled(s);
  return *this;
}

Expr Expr::mapped(const LinearMap& m) const {
  if (m.in_dim() != dim()) throw DimensionError("linear map does not fit expression size");
  Expr out = Expr::constant(m.apply(constant_));
  for (const auto& t : terms_) out.terms_.push_back({t.var, t.map.then(m)});
  return out;
}

Expr operator+(Expr a, const Expr& b) { return a += b; }
Expr operator-(Expr a, const Expr& b) { return a -= b; }
Expr operator-(Expr a) { return a *= Complex(-1.0); }
Expr operator*(Complex s, Expr a) { return a *= s; }
Expr operator+(Expr a, const CMatrix& c) { return a += Expr::constant(c); }
Expr operator-(Expr a, const CMatrix& c) { return a -= Expr::constant(c); }

Expr trace(const Expr& e) {
  std::vector<MapEntry> entries;
  for (int i = 0; i < e.dim(); ++i) entries.push_back({0, 0, i, i, Complex(1.0)});
  return e.mapped(LinearMap(e.dim(), 1, std::move(entries)));
}

Expr trace_with(const CMatrix& c, const Expr& e) {
  if (c.rows() != e.dim() || c.cols() != e.dim()) throw DimensionError("trace_with: size mismatch");
  std::vector<MapEntry> entries;
  for (int i = 0; i < e.dim(); ++i)
    for (int j = 0; j < e.dim(); ++j)
      if (c(j, i) != Complex(0.0)) entries.push_back({0, 0, i, j, c(j, i)});
  return e.mapped(LinearMap(e.dim(), 1, std::move(entries)));
}

Expr partial_trace(const Expr& e, const SubsystemDims& dims, std::vector<int> keep) {
  int out_dim = 1;
  for (int k : keep) out_dim *= dims[k];
  return e.mapped(LinearMap::from_function(e.dim(), out_dim, [&](const CMatrix& x) {
    return telent::partial_trace(x, dims, std::span<const int>(keep));
  }));
}

Expr partial_transpose(const Expr& e, const SubsystemDims& dims, std::vector<int> systems) {
  return e.mapped(LinearMap::from_function(e.dim(), e.dim(), [&](const CMatrix& x) {
    return telent::partial_transpose(x, dims, std::span<const int>(systems));
  }));
}

Expr permute_subsystems(const Expr& e, const SubsystemDims& dims, std::vector<int> perm) {
  return e.mapped(LinearMap::from_function(e.dim(), e.dim(), [&](const CMatrix& x) {
    return telent::permute_subsystems(x, dims, std::span<const int>(perm));
  }));
}

Expr embed_left_identity(int d, const Expr& e) {
  const CMatrix id = CMatrix::Identity(d, d);
  return e.mapped(LinearMap::from_function(e.dim(), d * e.dim(), [&](const CMatrix& x) { return kron(id, x); }));
}

Expr contract_input(const Expr& e, const CMatrix& omega, int d_b) {
  const int d_v = static_cast<int>(omega.rows());
  if (e.dim() != d_v * d_b) throw DimensionError("contract_input: size mismatch");
  std::vector<MapEntry> entries;
  for (int i = 0; i < d_v; ++i)
    for (int j = 0; j < d_v; ++j) {
      const Complex w = omega(j, i);
      if (w == Complex(0.0)) continue;
      for (int r = 0; r < d_b; ++r)
        for (int c = 0; c < d_b; ++c) entries.push_back({r, c, i * d_b + r, j * d_b + c, w});
    }
  return e.mapped(LinearMap(e.dim(), d_b, std::move(entries)));
}

Expr scalar_times_identity(const Expr& scalar, int d) {
  if (scalar.dim() != 1) throw DimensionError("scalar_times_identity: expression is not 1x1");
  std::vector<MapEntry> entries;
  for (int i = 0; i < d; ++i) entries.push_back({i, i, 0, 0, Complex(1.0)});
  return scalar.mapped(LinearMap(1, d, std::move(entries)));
}

}  // namespace telent::sdp
