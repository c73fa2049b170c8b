#pragma once

#include "rosetta/lambda/term.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace rosetta::lambda {

// Surface grammar:
//   term  ::= atom+                      (left-associative application)
//   atom  ::= ident | "\" ident "." term | "(" term ")"
//   ident ::= [A-Za-z][A-Za-z0-9_']*
// "λ" is accepted in place of "\". '#' starts a comment running to end of
// line. Source programs use lowercase-initial names; uppercase-initial names
// are reserved for terms emitted by the OCRS compiler.
Term parse(std::string_view source);

std::string to_string(const Term& m);
std::ostream& operator<<(std::ostream& os, const Term& m);

} // namespace rosetta::lambda
