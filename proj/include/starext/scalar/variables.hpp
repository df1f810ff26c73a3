#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace starext {

/// Index into the process-wide variable table. The table is laid out so that
/// index order is the lexicographic tie-break of the monomial order:
///   z1, zb1, z2, zb2, ..., z8, zb8   (chart coordinates, 0..15)
///   t0, t1, ..., t47                 (generators of the abstract algebra, 16..63)
///   auxiliary names                  (interned on first use, 64..)
using Var = std::uint16_t;

enum class VarKind { Holomorphic, Antiholomorphic, AlgebraGenerator, Auxiliary };

inline constexpr int kMaxChartDim = 8;
inline constexpr int kMaxGenerator = 47;
inline constexpr Var kFirstGenerator = 2 * kMaxChartDim;
inline constexpr Var kFirstAuxiliary = kFirstGenerator + kMaxGenerator + 1;

/// Holomorphic coordinate z_k, k >= 1.
Var holo(int k);
/// Antiholomorphic coordinate zb_k, k >= 1.
Var antiholo(int k);
/// Generator t_k of the abstract algebra, k >= 0.
Var generator(int k);
/// Interned auxiliary variable (covector slots, root symbols). Thread-safe.
Var auxiliary(std::string_view name);

VarKind kind_of(Var v);
/// Chart index k of z_k / zb_k, or generator index of t_k.
int index_of(Var v);
std::string name_of(Var v);

/// Resolves "z3", "zb2", "t0" or an identifier already interned as auxiliary
/// (or interns it when `intern_unknown` is set). Returns false on failure.
bool lookup_variable(std::string_view name, Var& out, bool intern_unknown);

}  // namespace starext
