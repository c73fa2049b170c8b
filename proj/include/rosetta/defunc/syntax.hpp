#pragma once

#include "rosetta/defunc/registry.hpp"

#include <string>
#include <string_view>

namespace rosetta::defunc {

// Textual form of Φ/Ψ terms:
//   app(u,v)  capp(u,v)  x  C<k>{x.body}  C<k>{x.body}(t1,...,tn)
// The body is λ-term source. On input the index k is informational: the
// constructor is looked up (or registered) by its binder and body.

std::string to_string(const trs::Term& t, const Registry& reg);
trs::Term parse_term(std::string_view source, Registry& reg);

} // namespace rosetta::defunc
