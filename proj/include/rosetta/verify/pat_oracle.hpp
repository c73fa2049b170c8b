#pragma once

#include "rosetta/compile/scott.hpp"
#include "rosetta/compile/pattern.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rosetta::verify {

/// Constructor terms of height at most `depth` (nullary constructors have height 0).
std::vector<trs::Term> enumerate_constructor_terms(const trs::Signature& sig, std::size_t depth);

/// Brute-force first-order selection: index of the first row matching the
/// subjects, plus the subterms bound by its variables, left to right.
struct Selection {
    std::size_t row = 0;
    std::vector<trs::Term> bound;
};
std::optional<Selection> select_row(const std::vector<compile::PatternRow>& rows,
                                    const std::vector<trs::Term>& subjects);

struct PatAgreement {
    std::size_t tuples = 0;
    std::size_t bottom_tuples = 0;
    std::size_t mismatches = 0;
    std::string first_mismatch;
};

/// Runs the compiled matcher on every tuple over `subjects` plus bottom and
/// compares the selected branch with select_row. Each row's value is a
/// selector term, so the result identifies both the row and its bindings.
PatAgreement check_pattern_match(const compile::ScottContext& ctx, const std::vector<compile::PatternRow>& rows,
                                 std::size_t width, const std::vector<trs::Term>& subjects);

} // namespace rosetta::verify
