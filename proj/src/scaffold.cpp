//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "blockmol/scaffold.hpp"

#include <stdexcept>
#include <vector>

namespace blockmol {

MolecularGraph murcko_scaffold(const MolecularGraph &g) {
  if (g.component_count() > 1) {
    throw std::invalid_argument("scaffold requires a single-component molecule");
  }
  const int n = g.atom_count();
  // Ring membership never changes: only non-ring atoms are ever deleted.
  const std::vector<bool> in_ring = g.ring_atom_mask();
  std::vector<bool> alive(static_cast<std::size_t>(n), true);

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> doomed;
    for (int i = 0; i < n; ++i) {
      if (!alive[static_cast<std::size_t>(i)] || in_ring[static_cast<std::size_t>(i)]) {
        continue;
      }
      int alive_degree = 0;
      int last_neighbor = -1;
      int last_bond = -1;
      for (const Neighbor &nb : g.neighbors(i)) {
        if (alive[static_cast<std::size_t>(nb.atom)]) {
          ++alive_degree;
          last_neighbor = nb.atom;
          last_bond = nb.bond;
        }
      }
      if (alive_degree > 1) {
        continue;
      }
      if (alive_degree == 1 &&
          g.bond(last_bond).order == BondOrder::kDouble &&
          in_ring[static_cast<std::size_t>(last_neighbor)]) {
        continue;  // exocyclic double bond onto a ring survives
      }
      doomed.push_back(i);
    }
    for (int i : doomed) {
      alive[static_cast<std::size_t>(i)] = false;
      changed = true;
    }
  }

  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (alive[static_cast<std::size_t>(i)]) {
      keep.push_back(i);
    }
  }
  MolecularGraph scaffold = g.induced_subgraph(keep);
  scaffold.recompute_implicit_hydrogens();
  return scaffold;
}

ScaffoldKey scaffold_key(const MolecularGraph &g) {
  const MolecularGraph scaffold = murcko_scaffold(g);
  if (scaffold.atom_count() == 0) {
    return ScaffoldKey{std::string(kEmptyScaffoldSentinel), true};
  }
  return ScaffoldKey{write_smiles(scaffold), false};
}

}  // namespace blockmol
