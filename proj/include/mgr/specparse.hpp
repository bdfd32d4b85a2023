#pragma once

#include <string>

#include "mgr/algebra.hpp"
#include "mgr/family.hpp"

namespace mgr {

/// The structure mini-language shared by the CLI and the system files.
///
/// rack specs:    dihedral <q> | cyclic <n> | conj <group-spec>
///                | ts <m> <modulus-poly> <t-poly> <s-poly>
///                | power <rack-spec> <n> <e1,..,em>/<i1,..,im>
/// group specs:   Z <n> | sym3
/// family specs:  zfamily <rack-spec>
/// mgr specs:     a family spec (its associated MGR) | conj <group-spec>
///
/// Polynomials are comma-separated coefficient lists, constant term first.
FiniteRack parse_rack_spec(const std::string& spec);
FiniteGroup parse_group_spec(const std::string& spec);
GFamily parse_family_spec(const std::string& spec);
MultipleGroupRack parse_mgr_spec(const std::string& spec);

} // namespace mgr
