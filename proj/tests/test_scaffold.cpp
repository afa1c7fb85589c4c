//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <random>
#include <string>
#include <vector>

#include "blockmol/scaffold.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace blockmol;

namespace {

std::string scaffold_smiles(const std::string &smiles) {
  return scaffold_key(parse_smiles(smiles)).canonical_form;
}

}  // namespace

TEST_SUITE("scaffold") {

TEST_CASE("ring systems survive, side chains vanish") {
  // benzene is a fixed point
  CHECK(scaffold_smiles("c1ccccc1") == write_smiles(parse_smiles("c1ccccc1")));
  // ethylbenzene and toluene collapse to benzene
  CHECK(scaffold_smiles("CCc1ccccc1") == scaffold_smiles("c1ccccc1"));
  CHECK(scaffold_smiles("Cc1ccccc1") == scaffold_smiles("c1ccccc1"));
  // biphenyl keeps its linker bond
  CHECK(scaffold_smiles("c1ccc(-c2ccccc2)cc1") ==
        write_smiles(parse_smiles("c1ccccc1-c1ccccc1")));
}

TEST_CASE("acyclic molecules give the empty key") {
  const ScaffoldKey k1 = scaffold_key(parse_smiles("CCO"));
  CHECK(k1.is_empty);
  CHECK(k1.canonical_form == std::string(kEmptyScaffoldSentinel));
  const ScaffoldKey k2 = scaffold_key(parse_smiles("CC(C)C(=O)O"));
  CHECK(k2.is_empty);
  CHECK(k1.canonical_form == k2.canonical_form);
  const ScaffoldKey single = scaffold_key(parse_smiles("C"));
  CHECK(single.is_empty);
}

TEST_CASE("exocyclic double bonds onto rings are retained") {
  // cyclohexanone keeps its carbonyl
  const MolecularGraph keto = murcko_scaffold(parse_smiles("O=C1CCCCC1"));
  CHECK(keto.atom_count() == 7);
  // acetophenone: the acyl group hangs off a non-ring carbon, so it all goes
  CHECK(scaffold_smiles("CC(=O)c1ccccc1") == scaffold_smiles("c1ccccc1"));
  // benzanilide: C and N stay as linker, the oxygen hangs off a linker atom
  const MolecularGraph amide =
      murcko_scaffold(parse_smiles("O=C(Nc1ccccc1)c1ccccc1"));
  CHECK(graphs_isomorphic(amide, parse_smiles("c1ccccc1CNc1ccccc1")));
}

TEST_CASE("linkers between rings are kept whole") {
  const std::string s = scaffold_smiles("c1ccccc1CCOCCc1ccncc1");
  CHECK(s == scaffold_smiles("c1ccccc1CCOCCc1ccncc1"));
  const MolecularGraph g = murcko_scaffold(parse_smiles("c1ccccc1CCOCCc1ccncc1"));
  CHECK(g.atom_count() == 17);
  // branch hanging off a linker disappears
  CHECK(scaffold_smiles("c1ccccc1CC(C)(CO)OCCc1ccncc1") ==
        scaffold_smiles("c1ccccc1CC(C)OCCc1ccncc1"));
}

TEST_CASE("distinct heteroatom rings get distinct keys") {
  CHECK(scaffold_smiles("c1ccccc1") != scaffold_smiles("c1ccncc1"));
  CHECK(scaffold_smiles("C1CCCCC1") != scaffold_smiles("c1ccccc1"));
}

TEST_CASE("idempotence and size monotonicity") {
  const std::vector<std::string> panel = {
      "CC(=O)Nc1ccccc1",
      "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
      "O=C1CCCCC1",
      "c1ccc2[nH]ccc2c1",
      "C1CCC2(CC1)CCCC2",
      "Clc1ccc(cc1)S(=O)(=O)NC(=O)NC1CCCCC1",
      "CCO",
  };
  for (const std::string &s : panel) {
    CAPTURE(s);
    const MolecularGraph g = parse_smiles(s);
    const MolecularGraph once = murcko_scaffold(g);
    CHECK(once.heavy_atom_count() <= g.heavy_atom_count());
    if (once.atom_count() > 0) {
      const MolecularGraph twice = murcko_scaffold(once);
      CHECK(graphs_isomorphic(once, twice));
      CHECK(write_smiles(once) == write_smiles(twice));
    }
  }
}

TEST_CASE("key is invariant under relabeling") {
  std::mt19937 rng(99);
  const MolecularGraph g = parse_smiles("CC(C)Cc1ccc(cc1)C(C)C(=O)O");
  const ScaffoldKey base = scaffold_key(g);
  for (int trial = 0; trial < 25; ++trial) {
    const std::vector<int> perm = testutil::random_permutation(g.atom_count(), rng);
    const MolecularGraph h = testutil::permute_graph(g, perm, rng);
    CHECK(scaffold_key(h).canonical_form == base.canonical_form);
  }
}

TEST_CASE("fragment sets are rejected") {
  CHECK_THROWS_AS(murcko_scaffold(parse_smiles("CC(=O)[O-].[NH4+]")),
                  std::invalid_argument);
}

}  // TEST_SUITE
