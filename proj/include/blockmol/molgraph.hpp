//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BLOCKMOL_MOLGRAPH_HPP_
#define BLOCKMOL_MOLGRAPH_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blockmol/element.hpp"

namespace blockmol {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

/// Twice the effective order used for valence accounting (aromatic counts 1.5).
int bond_order_sum2(BondOrder order);

struct Atom {
  Element element = Element::kC;
  std::int8_t formal_charge = 0;
  bool aromatic = false;
  // Bracket atoms carry their hydrogen count verbatim; for all other atoms the
  // count is derived from valence and recomputed after graph surgery.
  bool fixed_hydrogens = false;
  std::uint8_t implicit_hydrogens = 0;
  // Atom-map class ([*:k]). Zero means absent.
  int map_class = 0;
};

struct Bond {
  int a = -1;
  int b = -1;
  BondOrder order = BondOrder::kSingle;

  int other(int atom) const { return atom == a ? b : a; }
};

struct Neighbor {
  int atom = -1;
  int bond = -1;
};

enum class SmilesErrorCode {
  kSyntax,
  kUnbalancedParen,
  kUnmatchedRingBond,
  kUnsupportedElement,
  kUnsupportedFeature,
  kValence,
  kAromaticity,
};

/// Parse or validation failure with the character offset it was detected at.
class SmilesError : public std::runtime_error {
 public:
  SmilesError(SmilesErrorCode code, std::size_t offset, const std::string &what);

  SmilesErrorCode code() const { return code_; }
  std::size_t offset() const { return offset_; }

 private:
  SmilesErrorCode code_;
  std::size_t offset_;
};

class MolecularGraph {
 public:
  MolecularGraph() = default;

  int add_atom(const Atom &atom);
  /// Throws std::invalid_argument on self-loops, out-of-range endpoints, or
  /// duplicate atom pairs.
  int add_bond(int a, int b, BondOrder order);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  int heavy_atom_count() const;

  const Atom &atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  Atom &atom(int i) { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond &bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }
  std::span<const Neighbor> neighbors(int atom) const {
    return adjacency_[static_cast<std::size_t>(atom)];
  }
  int degree(int atom) const {
    return static_cast<int>(adjacency_[static_cast<std::size_t>(atom)].size());
  }
  std::optional<int> bond_between(int a, int b) const;

  bool multi_fragment() const { return multi_fragment_; }
  void set_multi_fragment(bool flag) { multi_fragment_ = flag; }

  /// Twice the bond-order sum incident to the atom (aromatic bonds count 3).
  int atom_bond_sum2(int atom) const;

  int component_count() const;
  /// Dense component label per atom, assigned in order of first appearance.
  std::vector<int> component_labels() const;

  /// True per bond iff it lies on a cycle (i.e. it is not a bridge).
  std::vector<bool> ring_bond_mask() const;
  /// True per atom iff it lies on a cycle.
  std::vector<bool> ring_atom_mask() const;

  /// Subgraph induced by `atom_ids`; atoms are renumbered in the given order.
  MolecularGraph induced_subgraph(std::span<const int> atom_ids) const;

  /// Refresh implicit hydrogen counts of atoms without fixed counts.
  void recompute_implicit_hydrogens();

  /// Valence check over all atoms; throws SmilesError(kValence) on violation.
  void validate_valences() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  bool multi_fragment_ = false;
};

/// Hydrogen count an atom would receive from the standard valence rule given
/// twice its bond-order sum. Aromatic atoms fill only to the lowest valence.
int derive_implicit_hydrogens(Element element, int formal_charge, bool aromatic,
                              int bond_sum2);

struct ParseReport {
  std::vector<std::string> warnings;
};

/// Parse a SMILES string from the supported subset. Stereo markers are
/// stripped with a warning. Throws SmilesError with character offsets.
MolecularGraph parse_smiles(std::string_view text, ParseReport *report = nullptr);

/// Canonical SMILES. Isomorphic graphs produce byte-identical strings.
std::string write_smiles(const MolecularGraph &g);

/// Position of each atom in the canonical output order (0 = written first).
std::vector<int> canonical_ranks(const MolecularGraph &g);

/// Stable-partition label per atom from iterative neighborhood refinement.
/// Invariant under atom relabeling; automorphic atoms share a class.
std::vector<int> symmetry_classes(const MolecularGraph &g);

/// Element/charge/aromaticity/hydrogen/bond-order preserving bijection test.
/// Backtracking search, independent of the canonicalization path.
bool graphs_isomorphic(const MolecularGraph &a, const MolecularGraph &b);

}  // namespace blockmol

#endif  // BLOCKMOL_MOLGRAPH_HPP_
