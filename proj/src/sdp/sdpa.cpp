#include "telent/sdp/sdpa.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace telent::sdp {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_sdpa(const SdpProblem& p, std::ostream& out) {
  const RealifiedProblem rp = realify(p);
  ConeProblem cone = rp.cone;
  cone.normalize_shapes();
  const int n_lp = static_cast<int>(cone.g_lp.rows());
  const int n_eq = static_cast<int>(cone.a.rows());
  const int diag = n_lp + 2 * n_eq;
  const bool has_diag = diag > 0;
  const int n_blocks = static_cast<int>(cone.blocks.size()) + (has_diag ? 1 : 0);

  out << "* realified conic program; objective constant " << num(cone.c0) << "\n";
  out << cone.n << "\n" << n_blocks << "\n";
  if (has_diag) out << -diag << (cone.blocks.empty() ? "" : " ");
  for (std::size_t k = 0; k < cone.blocks.size(); ++k)
    out << cone.blocks[k].size << (k + 1 < cone.blocks.size() ? " " : "");
  out << "\n";
  for (int i = 0; i < cone.n; ++i) out << num(cone.c[i]) << (i + 1 < cone.n ? " " : "");
  out << "\n";

  auto entry = [&](int mat, int blk, int i, int j, double v) {
    if (v != 0.0) out << mat << " " << blk << " " << i + 1 << " " << j + 1 << " " << num(v) << "\n";
  };
  int blk_no = 1;
  if (has_diag) {
    for (int r = 0; r < n_lp; ++r) {
      entry(0, blk_no, r, r, -cone.h_lp[r]);
      for (SparseRows::InnerIterator it(cone.g_lp, r); it; ++it)
        entry(static_cast<int>(it.col()) + 1, blk_no, r, r, -it.value());
    }
    for (int r = 0; r < n_eq; ++r) {
      const int pos = n_lp + 2 * r, neg = pos + 1;
      entry(0, blk_no, pos, pos, cone.b[r]);
      entry(0, blk_no, neg, neg, -cone.b[r]);
      for (SparseRows::InnerIterator it(cone.a, r); it; ++it) {
        entry(static_cast<int>(it.col()) + 1, blk_no, pos, pos, it.value());
        entry(static_cast<int>(it.col()) + 1, blk_no, neg, neg, -it.value());
      }
    }
    ++blk_no;
  }
  for (const auto& blk : cone.blocks) {
    for (int i = 0; i < blk.size; ++i)
      for (int j = i; j < blk.size; ++j) entry(0, blk_no, i, j, -blk.h(i, j));
    for (std::size_t k = 0; k < blk.vars.size(); ++k)
      for (const auto& e : blk.coeffs[k]) entry(blk.vars[k] + 1, blk_no, e.row, e.col, -e.value);
    ++blk_no;
  }
}

void write_sdpa(const SdpProblem& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_sdpa(p, out);
}

}  // namespace telent::sdp
