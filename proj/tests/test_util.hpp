//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BLOCKMOL_TESTS_TEST_UTIL_HPP_
#define BLOCKMOL_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "blockmol/molgraph.hpp"

namespace blockmol::testutil {

/// Rebuild `g` with atom i stored at position perm[i]; bond insertion order is
/// shuffled as well so nothing can lean on input ordering.
inline MolecularGraph permute_graph(const MolecularGraph &g,
                                    const std::vector<int> &perm,
                                    std::mt19937 &rng) {
  MolecularGraph h;
  std::vector<int> inverse(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    inverse[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
  }
  for (std::size_t p = 0; p < perm.size(); ++p) {
    h.add_atom(g.atom(inverse[p]));
  }
  std::vector<int> bond_ids(static_cast<std::size_t>(g.bond_count()));
  std::iota(bond_ids.begin(), bond_ids.end(), 0);
  std::shuffle(bond_ids.begin(), bond_ids.end(), rng);
  for (int id : bond_ids) {
    const Bond &b = g.bond(id);
    h.add_bond(perm[static_cast<std::size_t>(b.a)],
               perm[static_cast<std::size_t>(b.b)], b.order);
  }
  h.set_multi_fragment(g.multi_fragment());
  return h;
}

inline std::vector<int> random_permutation(int n, std::mt19937 &rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace blockmol::testutil

#endif  // BLOCKMOL_TESTS_TEST_UTIL_HPP_
