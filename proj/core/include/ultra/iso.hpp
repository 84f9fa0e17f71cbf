// Isomorphism testing. dc mode compares distances by order position (sort
// sizes must agree, the sort bijection is then unique); isometric mode
// compares by exact value (sorts must be equal).
#pragma once

#include <optional>

#include "ultra/maps.hpp"
#include "ultra/tree.hpp"

namespace ultra {

// Decided through canonical forms of the meet trees; returns a witness
// bijective dc-map when the spaces are isomorphic.
std::optional<DcMap> is_dc_isomorphic(const UltraSpace& a, const UltraSpace& b, IsoMode mode);

// Independent path enumerating point bijections; intended for small spaces.
std::optional<DcMap> is_dc_isomorphic_brute(const UltraSpace& a, const UltraSpace& b,
                                            IsoMode mode);

}  // namespace ultra
