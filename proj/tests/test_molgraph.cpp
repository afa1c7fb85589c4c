//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "blockmol/molgraph.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace blockmol;

namespace {

SmilesErrorCode error_code_of(const std::string &smiles) {
  try {
    parse_smiles(smiles);
  } catch (const SmilesError &e) {
    return e.code();
  }
  FAIL("expected parse of '", smiles, "' to throw");
  return SmilesErrorCode::kSyntax;
}

std::size_t error_offset_of(const std::string &smiles) {
  try {
    parse_smiles(smiles);
  } catch (const SmilesError &e) {
    return e.offset();
  }
  FAIL("expected parse of '", smiles, "' to throw");
  return 0;
}

// Exhaustive bijection check, used as an independent oracle against
// graphs_isomorphic. Only viable for small graphs.
bool isomorphic_bruteforce(const MolecularGraph &a, const MolecularGraph &b) {
  if (a.atom_count() != b.atom_count() || a.bond_count() != b.bond_count()) {
    return false;
  }
  const int n = a.atom_count();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const Atom &x = a.atom(i);
      const Atom &y = b.atom(perm[static_cast<std::size_t>(i)]);
      ok = x.element == y.element && x.formal_charge == y.formal_charge &&
           x.aromatic == y.aromatic &&
           x.implicit_hydrogens == y.implicit_hydrogens &&
           x.map_class == y.map_class;
    }
    for (int e = 0; e < a.bond_count() && ok; ++e) {
      const Bond &bond = a.bond(e);
      const auto mapped =
          b.bond_between(perm[static_cast<std::size_t>(bond.a)],
                         perm[static_cast<std::size_t>(bond.b)]);
      ok = mapped.has_value() && b.bond(*mapped).order == bond.order;
    }
    if (ok) {
      return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::vector<int> hydrogen_profile(const MolecularGraph &g) {
  std::vector<int> h;
  for (const Atom &a : g.atoms()) {
    h.push_back(a.implicit_hydrogens);
  }
  return h;
}

}  // namespace

TEST_SUITE("molgraph") {

TEST_CASE("acetanilide golden parse") {
  const MolecularGraph g = parse_smiles("CC(=O)Nc1ccccc1");
  REQUIRE(g.atom_count() == 10);
  CHECK(g.heavy_atom_count() == 10);
  REQUIRE(g.bond_count() == 10);

  const std::vector<Element> elements = {
      Element::kC, Element::kC, Element::kO, Element::kN, Element::kC,
      Element::kC, Element::kC, Element::kC, Element::kC, Element::kC};
  const std::vector<bool> aromatic = {false, false, false, false, true,
                                      true,  true,  true,  true,  true};
  const std::vector<int> hydrogens = {3, 0, 0, 1, 0, 1, 1, 1, 1, 1};
  for (int i = 0; i < 10; ++i) {
    CAPTURE(i);
    CHECK(g.atom(i).element == elements[static_cast<std::size_t>(i)]);
    CHECK(g.atom(i).aromatic == aromatic[static_cast<std::size_t>(i)]);
    CHECK(g.atom(i).implicit_hydrogens == hydrogens[static_cast<std::size_t>(i)]);
    CHECK(g.atom(i).formal_charge == 0);
  }

  struct ExpectedBond {
    int a, b;
    BondOrder order;
  };
  const std::vector<ExpectedBond> bonds = {
      {0, 1, BondOrder::kSingle},   {1, 2, BondOrder::kDouble},
      {1, 3, BondOrder::kSingle},   {3, 4, BondOrder::kSingle},
      {4, 5, BondOrder::kAromatic}, {5, 6, BondOrder::kAromatic},
      {6, 7, BondOrder::kAromatic}, {7, 8, BondOrder::kAromatic},
      {8, 9, BondOrder::kAromatic}, {4, 9, BondOrder::kAromatic}};
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    CAPTURE(i);
    CHECK(g.bond(static_cast<int>(i)).a == bonds[i].a);
    CHECK(g.bond(static_cast<int>(i)).b == bonds[i].b);
    CHECK(g.bond(static_cast<int>(i)).order == bonds[i].order);
  }

  const std::vector<bool> ring = g.ring_atom_mask();
  for (int i = 0; i < 4; ++i) {
    CHECK_FALSE(ring[static_cast<std::size_t>(i)]);
  }
  for (int i = 4; i < 10; ++i) {
    CHECK(ring[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("implicit hydrogens on heteroaromatics") {
  // thiophene: the sulfur gets no hydrogens
  CHECK(hydrogen_profile(parse_smiles("c1ccsc1")) ==
        std::vector<int>{1, 1, 1, 0, 1});
  // pyridine nitrogen: none
  CHECK(hydrogen_profile(parse_smiles("c1ccncc1")) ==
        std::vector<int>{1, 1, 1, 0, 1, 1});
  // furan oxygen: none
  CHECK(hydrogen_profile(parse_smiles("c1ccoc1")) ==
        std::vector<int>{1, 1, 1, 0, 1});
  // pyrrole written with explicit bracket H keeps it
  CHECK(hydrogen_profile(parse_smiles("c1cc[nH]c1")) ==
        std::vector<int>{1, 1, 1, 1, 1});
  // naphthalene fusion carbons carry no hydrogen
  CHECK(hydrogen_profile(parse_smiles("c1ccc2ccccc2c1")) ==
        std::vector<int>{1, 1, 1, 0, 1, 1, 1, 1, 0, 1});
  // indole
  const MolecularGraph indole = parse_smiles("c1ccc2[nH]ccc2c1");
  CHECK(indole.atom_count() == 9);
  CHECK(indole.atom(4).implicit_hydrogens == 1);
  // caffeine-style aromatic carbonyl carbons
  const MolecularGraph caffeine = parse_smiles("Cn1cnc2c1c(=O)n(C)c(=O)n2C");
  CHECK(caffeine.atom_count() == 14);
  CHECK(caffeine.heavy_atom_count() == 14);
}

TEST_CASE("simple chains and multiple bonds") {
  CHECK(hydrogen_profile(parse_smiles("CCO")) == std::vector<int>{3, 2, 1});
  CHECK(hydrogen_profile(parse_smiles("C#N")) == std::vector<int>{1, 0});
  CHECK(hydrogen_profile(parse_smiles("O=C=O")) == std::vector<int>{0, 0, 0});
  // sulfone sulfur expands to valence 6
  CHECK(hydrogen_profile(parse_smiles("CS(=O)(=O)C")) ==
        std::vector<int>{3, 0, 0, 0, 3});
  // phosphate-like phosphorus expands to valence 5
  CHECK(hydrogen_profile(parse_smiles("OP(=O)(O)O")) ==
        std::vector<int>{1, 0, 0, 1, 1});
}

TEST_CASE("bracket atoms: hydrogens, charge, maps") {
  const MolecularGraph ammonium = parse_smiles("[NH4+]");
  CHECK(ammonium.atom(0).formal_charge == 1);
  CHECK(ammonium.atom(0).implicit_hydrogens == 4);
  CHECK(ammonium.atom(0).fixed_hydrogens);

  const MolecularGraph nitro = parse_smiles("C[N+](=O)[O-]");
  CHECK(nitro.atom(1).formal_charge == 1);
  CHECK(nitro.atom(1).implicit_hydrogens == 0);
  CHECK(nitro.atom(3).formal_charge == -1);

  const MolecularGraph tagged = parse_smiles("[*:3]c1ccccc1");
  CHECK(tagged.atom(0).element == Element::kWildcard);
  CHECK(tagged.atom(0).map_class == 3);
  CHECK(tagged.heavy_atom_count() == 6);

  const MolecularGraph doubly = parse_smiles("[O-2]");
  CHECK(doubly.atom(0).formal_charge == -2);
  const MolecularGraph doubled = parse_smiles("[O--]");
  CHECK(doubled.atom(0).formal_charge == -2);
}

TEST_CASE("stereo markers are stripped with warnings") {
  ParseReport report;
  const MolecularGraph g = parse_smiles("F/C=C/F", &report);
  CHECK(g.atom_count() == 4);
  CHECK(report.warnings.size() == 2);
  CHECK(g.bond(1).order == BondOrder::kDouble);
  CHECK(g.bond(0).order == BondOrder::kSingle);

  ParseReport report2;
  const MolecularGraph h = parse_smiles("[C@@H](N)(C)O", &report2);
  CHECK(h.atom(0).implicit_hydrogens == 1);
  CHECK(report2.warnings.size() == 1);
}

TEST_CASE("parse errors carry codes and offsets") {
  CHECK(error_code_of("") == SmilesErrorCode::kSyntax);
  CHECK(error_code_of("C(C") == SmilesErrorCode::kUnbalancedParen);
  CHECK(error_offset_of("C(C") == 1);
  CHECK(error_code_of("CC)C") == SmilesErrorCode::kUnbalancedParen);
  CHECK(error_offset_of("CC)C") == 2);
  CHECK(error_code_of("C1CC") == SmilesErrorCode::kUnmatchedRingBond);
  CHECK(error_offset_of("C1CC") == 1);
  CHECK(error_code_of("C(C)(C)(C)(C)C") == SmilesErrorCode::kValence);
  CHECK(error_code_of("[Si](C)(C)C") == SmilesErrorCode::kUnsupportedElement);
  CHECK(error_code_of("[13CH4]") == SmilesErrorCode::kUnsupportedFeature);
  CHECK(error_code_of("C=#C") == SmilesErrorCode::kSyntax);
  CHECK(error_code_of("C..C") == SmilesErrorCode::kSyntax);
  CHECK(error_code_of("C=") == SmilesErrorCode::kSyntax);
  CHECK(error_code_of("C%1CC") == SmilesErrorCode::kSyntax);
  CHECK(error_code_of("C11C") == SmilesErrorCode::kSyntax);
  CHECK(error_code_of("C-1CC=1") == SmilesErrorCode::kSyntax);
  CHECK(error_code_of("QQ") == SmilesErrorCode::kUnsupportedElement);
  // a lone aromatic pair cannot form a ring
  CHECK(error_code_of("cc") == SmilesErrorCode::kAromaticity);
  CHECK(error_code_of("c1ccccc1:C1CCCCC1") == SmilesErrorCode::kAromaticity);
  // five-bond carbon via ring closures
  CHECK(error_code_of("C12(C)(C)CC1C2") == SmilesErrorCode::kValence);
}

TEST_CASE("default bond between aromatic atoms outside a ring demotes to single") {
  const MolecularGraph biphenyl = parse_smiles("c1ccccc1c1ccccc1");
  REQUIRE(biphenyl.atom_count() == 12);
  const auto linker = biphenyl.bond_between(5, 6);
  REQUIRE(linker.has_value());
  CHECK(biphenyl.bond(*linker).order == BondOrder::kSingle);
  // explicit form parses to the same molecule
  const MolecularGraph dashed = parse_smiles("c1ccccc1-c1ccccc1");
  CHECK(write_smiles(biphenyl) == write_smiles(dashed));
}

TEST_CASE("fragment separator") {
  const MolecularGraph salt = parse_smiles("CC(=O)[O-].[NH4+]");
  CHECK(salt.multi_fragment());
  CHECK(salt.component_count() == 2);
  const std::vector<int> labels = salt.component_labels();
  CHECK(labels == std::vector<int>{0, 0, 0, 0, 1});
  const std::string out = write_smiles(salt);
  CHECK(out == write_smiles(parse_smiles("[NH4+].CC(=O)[O-]")));
  CHECK(out.find('.') != std::string::npos);
}

TEST_CASE("two-digit ring closures and digit reuse") {
  const MolecularGraph hexane = parse_smiles("C%12CCCCC%12");
  CHECK(hexane.atom_count() == 6);
  CHECK(hexane.bond_count() == 6);
  const MolecularGraph twice = parse_smiles("C1CC1C1CC1");
  CHECK(twice.atom_count() == 6);
  CHECK(twice.bond_count() == 7);
}

TEST_CASE("benzene spellings agree") {
  const std::vector<std::string> spellings = {
      "c1ccccc1", "c2ccccc2", "c%11ccccc%11", "c1ccc(cc1)", "c1cc(ccc1)"};
  std::set<std::string> outputs;
  for (const std::string &s : spellings) {
    outputs.insert(write_smiles(parse_smiles(s)));
  }
  CHECK(outputs.size() == 1);
  CHECK(*outputs.begin() == "c1ccccc1");
}

TEST_CASE("canonical string is invariant under atom relabeling") {
  const std::vector<std::string> panel = {
      "CC(=O)Nc1ccccc1",
      "CC(=O)Oc1ccccc1C(=O)O",
      "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
      "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
      "c1ccc2[nH]ccc2c1",
      "C[N+](C)(C)C",
      "CC(=O)[O-].[NH4+]",
      "[*:1]c1ccc(F)cc1",
      "OCC(O)C(O)C(O)C(O)CO",
      "Clc1ccc(cc1)S(=O)(=O)NC(=O)NC1CCCCC1",
  };
  std::mt19937 rng(12345);
  for (const std::string &s : panel) {
    CAPTURE(s);
    const MolecularGraph g = parse_smiles(s);
    const std::string reference = write_smiles(g);
    // round trip through the writer reproduces itself
    CHECK(write_smiles(parse_smiles(reference)) == reference);
    for (int trial = 0; trial < 12; ++trial) {
      const std::vector<int> perm =
          testutil::random_permutation(g.atom_count(), rng);
      const MolecularGraph h = testutil::permute_graph(g, perm, rng);
      CHECK(write_smiles(h) == reference);
    }
  }
}

TEST_CASE("canonical ranks form a permutation") {
  const MolecularGraph g = parse_smiles("CC(=O)Oc1ccccc1C(=O)O");
  const std::vector<int> ranks = canonical_ranks(g);
  std::vector<int> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(static_cast<std::size_t>(g.atom_count()));
  std::iota(expected.begin(), expected.end(), 0);
  CHECK(sorted == expected);
}

TEST_CASE("symmetry classes group equivalent atoms") {
  const MolecularGraph propane = parse_smiles("CCC");
  const std::vector<int> p = symmetry_classes(propane);
  CHECK(p[0] == p[2]);
  CHECK(p[0] != p[1]);

  const MolecularGraph benzene = parse_smiles("c1ccccc1");
  const std::vector<int> b = symmetry_classes(benzene);
  CHECK(std::set<int>(b.begin(), b.end()).size() == 1);

  // acetanilide: methyl, carbonyl C, O, N, ipso, ortho x2, meta x2, para
  const MolecularGraph acet = parse_smiles("CC(=O)Nc1ccccc1");
  const std::vector<int> a = symmetry_classes(acet);
  CHECK(std::set<int>(a.begin(), a.end()).size() == 8);
  CHECK(a[5] == a[9]);  // ortho pair
  CHECK(a[6] == a[8]);  // meta pair
  CHECK(a[5] != a[6]);

  // ethylamine written C(N)C: the two carbons are not equivalent
  const MolecularGraph ea = parse_smiles("C(N)C");
  const std::vector<int> e = symmetry_classes(ea);
  CHECK(e[0] != e[2]);
}

TEST_CASE("symmetry classes are invariant under relabeling") {
  std::mt19937 rng(777);
  const MolecularGraph g = parse_smiles("CC(C)Cc1ccc(cc1)C(C)C(=O)O");
  const std::vector<int> base = symmetry_classes(g);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<int> perm = testutil::random_permutation(g.atom_count(), rng);
    const MolecularGraph h = testutil::permute_graph(g, perm, rng);
    const std::vector<int> moved = symmetry_classes(h);
    for (int i = 0; i < g.atom_count(); ++i) {
      CHECK(moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] ==
            base[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("isomorphism agrees with exhaustive oracle") {
  const std::vector<std::pair<std::string, std::string>> same = {
      {"CCO", "OCC"},
      {"CC(=O)O", "OC(C)=O"},
      {"c1ccncc1", "n1ccccc1"},
      {"C1CC1C", "CC1CC1"},
      {"C[N+](C)(C)C", "C[N+](C)(C)C"},
  };
  for (const auto &[x, y] : same) {
    CAPTURE(x);
    CAPTURE(y);
    const MolecularGraph a = parse_smiles(x);
    const MolecularGraph b = parse_smiles(y);
    CHECK(isomorphic_bruteforce(a, b));
    CHECK(graphs_isomorphic(a, b));
  }

  const std::vector<std::pair<std::string, std::string>> different = {
      {"CCO", "COC"},
      {"C1CCCCC1", "CC1CCCC1"},
      {"CC(=O)O", "COC=O"},
      {"c1ccncc1", "c1ccccc1"},
      {"CCN", "CC[NH3+]"},
  };
  for (const auto &[x, y] : different) {
    CAPTURE(x);
    CAPTURE(y);
    const MolecularGraph a = parse_smiles(x);
    const MolecularGraph b = parse_smiles(y);
    CHECK_FALSE(isomorphic_bruteforce(a, b));
    CHECK_FALSE(graphs_isomorphic(a, b));
  }
}

TEST_CASE("isomorphism on relabeled graphs, both routes") {
  std::mt19937 rng(4242);
  const std::vector<std::string> panel = {"CC(=O)Nc1ccccc1", "c1cc[nH]c1",
                                          "CC(C)C(=O)O", "C1CC2CC1C2"};
  for (const std::string &s : panel) {
    const MolecularGraph g = parse_smiles(s);
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<int> perm = testutil::random_permutation(g.atom_count(), rng);
      const MolecularGraph h = testutil::permute_graph(g, perm, rng);
      CHECK(graphs_isomorphic(g, h));
      if (g.atom_count() <= 8) {
        CHECK(isomorphic_bruteforce(g, h));
      }
    }
  }
}

TEST_CASE("graph surgery helpers") {
  MolecularGraph g = parse_smiles("CCO");
  CHECK_THROWS_AS(g.add_bond(0, 0, BondOrder::kSingle), std::invalid_argument);
  CHECK_THROWS_AS(g.add_bond(0, 7, BondOrder::kSingle), std::invalid_argument);
  CHECK_THROWS_AS(g.add_bond(0, 1, BondOrder::kSingle), std::invalid_argument);

  const MolecularGraph aspirin = parse_smiles("CC(=O)Oc1ccccc1C(=O)O");
  const std::vector<int> keep = {4, 5, 6, 7, 8, 9};
  const MolecularGraph sub = aspirin.induced_subgraph(keep);
  CHECK(sub.atom_count() == 6);
  CHECK(sub.bond_count() == 6);
  MolecularGraph sub2 = sub;
  sub2.recompute_implicit_hydrogens();
  // ring atoms freed from substituents pick up hydrogens
  for (int i = 0; i < 6; ++i) {
    CHECK(sub2.atom(i).implicit_hydrogens == 1);
  }
}

TEST_CASE("valence validation after surgery") {
  MolecularGraph g = parse_smiles("CC");
  g.add_bond(0, 1 == 1 ? g.add_atom(Atom{}) : -1, BondOrder::kSingle);
  g.recompute_implicit_hydrogens();
  CHECK_NOTHROW(g.validate_valences());
  // force an over-valent carbon
  MolecularGraph bad = parse_smiles("C(C)(C)(C)C");
  const int extra = bad.add_atom(Atom{});
  bad.add_bond(0, extra, BondOrder::kSingle);
  bad.recompute_implicit_hydrogens();
  CHECK_THROWS_AS(bad.validate_valences(), SmilesError);
}

}  // TEST_SUITE
