#pragma once

#include "rosetta/compile/scott.hpp"

#include <vector>

namespace rosetta::compile {

using PatternRow = std::vector<trs::Term>;

/// Pattern matcher over `width` encoded subjects followed by one value per
/// row. When row p matches, the result is value p applied to the encodings
/// bound by the row's variables (left to right); when nothing matches or a
/// subject is bottom, the result is `failure`.
///
/// Columns are split on the smallest index holding a constructor pattern.
/// Throws OverlapError if two rows unify and rosetta::Error on malformed rows.
lambda::Term compile_pattern_match(const ScottContext& ctx, const std::vector<PatternRow>& rows,
                                   std::size_t width, const lambda::Term& failure);

inline lambda::Term compile_pattern_match(const ScottContext& ctx, const std::vector<PatternRow>& rows,
                                          std::size_t width) {
    return compile_pattern_match(ctx, rows, width, ctx.bottom());
}

/// H_1..H_n with H_i V_1..V_n reducing in exactly 2n CBV steps to
/// V_i (λx.H_1 V_1..V_n x) ... (λx.H_n V_1..V_n x).
std::vector<lambda::Term> fixpoint_family(std::size_t n);

/// λD.D
lambda::Term identity();

} // namespace rosetta::compile
