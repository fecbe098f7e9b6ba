#pragma once

#include <string>
#include <string_view>

#include "cifc/prob.hpp"

namespace cifc {

// {"roles":["X1","X2"],"cards":[4,8],"values":[...]} with values row-major in
// the listed axis order.
std::string pmf_to_json(const JointPMF& p);
JointPMF pmf_from_json(const std::string& text);

// Named input tables usable anywhere a distribution over (X1,X2) is expected.
// "exII": the 8-cell table (X1 marginal 3/8,3/8,1/8,1/8; X2 marginal
// 1/2,1/4,1/4) that drives both symmetric-clipper outputs uniform.
JointPMF builtin_input_table(std::string_view name);

} // namespace cifc
