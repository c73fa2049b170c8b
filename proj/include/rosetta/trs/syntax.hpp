#pragma once

#include "rosetta/trs/system.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace rosetta::trs {

// Line-oriented system format:
//
//   constructors: 0/0 s/1
//   functions: add/2
//   rules:
//   add(0,x) -> x
//   add(s(x),y) -> s(add(x,y))
//
// Symbol names are [A-Za-z0-9_']+. A bare name that is not declared is a
// variable. '#' starts a comment. Parsing does not validate; see validate().
RewriteSystem parse_system(std::string_view source);

/// Parses a term against a signature (undeclared bare names are variables).
Term parse_term(std::string_view source, const Signature& sig);

std::string to_string(const Term& t);
std::string to_string(const Rule& r);
std::string to_string(const RewriteSystem& sys);
std::ostream& operator<<(std::ostream& os, const Term& t);

} // namespace rosetta::trs
