#pragma once

#include <filesystem>
#include <ostream>

#include "telent/sdp/problem.hpp"

namespace telent::sdp {

/// Writes the realified problem in SDPA sparse format ("dat-s").
///
/// The dual SDPA form min c'x s.t. sum_i F_i x_i - F_0 >= 0 is used with F_0 = -h, F_i = -G_i.
/// Block 1 is diagonal: scalar nonnegativity rows first, then each equality row a'x = b as
/// the pair a'x - b >= 0, b - a'x >= 0. Blocks 2.. are the realified PSD constraints in
/// declaration order. Variables follow the Hermitian parameter layout (diagonal, then Re/Im of
/// the strict upper triangle, row-major) concatenated over declared variables. The objective
/// constant is not representable and is written as a comment.
void write_sdpa(const SdpProblem& p, std::ostream& out);
void write_sdpa(const SdpProblem& p, const std::filesystem::path& path);

}  // namespace telent::sdp
