#include "telent/sepcone.hpp"

#include <numeric>
#include <stdexcept>

namespace telent {

SeparabilityRelaxation SeparabilityRelaxation::ppt(Bipartition cut) {
  SeparabilityRelaxation r;
  r.kind = Kind::Ppt;
  r.cut = cut;
  return r;
}

SeparabilityRelaxation SeparabilityRelaxation::symmetric_extension(Bipartition cut, int k, bool with_ppt) {
  if (k < 2) throw std::invalid_argument("symmetric extension needs k >= 2");
  SeparabilityRelaxation r;
  r.kind = Kind::SymmetricExtension;
  r.k = k;
  r.with_ppt = with_ppt;
  r.cut = cut;
  return r;
}

SeparabilityRelaxation SeparabilityRelaxation::default_for(Bipartition cut) {
  if (cut.left * cut.right <= 6) return ppt(cut);
  return symmetric_extension(cut, 2, true);
}

SeparabilityRelaxation SeparabilityRelaxation::parse(const std::string& name, Bipartition cut) {
  if (name == "ppt") return ppt(cut);
  if (name.rfind("sym", 0) == 0 && name.size() > 3) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(name.substr(3), &used);
      if (used != name.size() - 3) k = 0;
    } catch (const std::exception&) {
      k = 0;
    }
    if (k >= 2) return symmetric_extension(cut, k, true);
  }
  throw std::invalid_argument("unknown relaxation '" + name + "' (expected ppt or symK with K >= 2)");
}

std::string SeparabilityRelaxation::name() const {
  if (kind == Kind::Ppt) return "ppt";
  return "sym" + std::to_string(k) + (with_ppt ? "" : "-noppt");
}

void constrain_in_relaxed_cone(sdp::SdpProblem& p, const sdp::Expr& var, const SeparabilityRelaxation& r) {
  const int dl = r.cut.left, dr = r.cut.right;
  if (var.dim() != dl * dr) throw DimensionError("constrain_in_relaxed_cone: expression does not match the cut");
  if (r.kind == SeparabilityRelaxation::Kind::Ppt) {
    p.add_psd(var);
    p.add_psd(sdp::partial_transpose(var, {dl, dr}, {0}));
    return;
  }
  if (r.k < 2) throw std::invalid_argument("symmetric extension needs k >= 2");

  // Extension E on left x right^k, subsystem 0 is the left factor.
  std::vector<int> dims_vec(1, dl);
  for (int i = 0; i < r.k; ++i) dims_vec.push_back(dr);
  const SubsystemDims dims(dims_vec);
  const sdp::VarId ext = p.declare_hermitian(dims.total());
  const sdp::Expr e = p.var(ext);
  p.add_psd(e);

  // Invariance under adjacent swaps of the copies generates the full symmetric group.
  for (int i = 1; i < r.k; ++i) {
    std::vector<int> perm(dims.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[i], perm[i + 1]);
    p.add_equality(e - sdp::permute_subsystems(e, dims, perm));
  }
  p.add_equality(sdp::partial_trace(e, dims, {0, 1}) - var);

  if (r.with_ppt) {
    // Transposing the last j copies, j = 1..k; j = k is the same cut as transposing the left factor.
    for (int j = 1; j <= r.k; ++j) {
      std::vector<int> systems;
      for (int s = r.k - j + 1; s <= r.k; ++s) systems.push_back(s);
      p.add_psd(sdp::partial_transpose(e, dims, systems));
    }
  }
}

}  // namespace telent
