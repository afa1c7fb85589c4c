//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BLOCKMOL_SCAFFOLD_HPP_
#define BLOCKMOL_SCAFFOLD_HPP_

#include <string>
#include <string_view>

#include "blockmol/molgraph.hpp"

namespace blockmol {

/// Key under which molecules are grouped as "same scaffold". Ring-free
/// molecules collapse to a distinguished empty key.
struct ScaffoldKey {
  std::string canonical_form;
  bool is_empty = false;
};

/// Printable stand-in for the empty (acyclic) scaffold.
inline constexpr std::string_view kEmptyScaffoldSentinel = "-";

/// Ring systems plus the acyclic linkers connecting them. Terminal atoms are
/// deleted iteratively; an atom double-bonded onto a ring atom survives (keeps
/// ring carbonyls). Acyclic input reduces to the empty graph.
/// Throws std::invalid_argument on multi-component input.
MolecularGraph murcko_scaffold(const MolecularGraph &g);

/// Canonical form of murcko_scaffold(g); equal keys iff isomorphic scaffolds.
ScaffoldKey scaffold_key(const MolecularGraph &g);

}  // namespace blockmol

#endif  // BLOCKMOL_SCAFFOLD_HPP_
