//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "blockmol/molgraph.hpp"

namespace blockmol {

namespace {

// Intrinsic per-atom key; independent of atom numbering.
std::vector<int> initial_codes(const MolecularGraph &g) {
  const int n = g.atom_count();
  std::vector<std::vector<int>> keys(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Atom &a = g.atom(i);
    keys[static_cast<std::size_t>(i)] = {
        static_cast<int>(a.element), a.formal_charge, a.aromatic ? 1 : 0,
        g.degree(i),                 a.implicit_hydrogens,
        a.map_class};
  }
  std::vector<std::vector<int>> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> codes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    codes[static_cast<std::size_t>(i)] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(),
                         keys[static_cast<std::size_t>(i)]) -
        sorted.begin());
  }
  return codes;
}

int distinct_count(const std::vector<int> &codes) {
  std::vector<int> copy = codes;
  std::sort(copy.begin(), copy.end());
  copy.erase(std::unique(copy.begin(), copy.end()), copy.end());
  return static_cast<int>(copy.size());
}

// Neighborhood refinement: each sweep extends an atom's key with the sorted
// multiset of (bond order, neighbor code) pairs, then re-densifies. Classes
// only ever split, so a stable distinct count means a stable partition.
std::vector<int> refine_codes(const MolecularGraph &g, std::vector<int> codes) {
  const int n = g.atom_count();
  int classes = distinct_count(codes);
  while (true) {
    std::vector<std::vector<int>> keys(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::vector<int> &key = keys[static_cast<std::size_t>(i)];
      key.push_back(codes[static_cast<std::size_t>(i)]);
      std::vector<std::pair<int, int>> nbrs;
      for (const Neighbor &nb : g.neighbors(i)) {
        nbrs.emplace_back(static_cast<int>(g.bond(nb.bond).order),
                          codes[static_cast<std::size_t>(nb.atom)]);
      }
      std::sort(nbrs.begin(), nbrs.end());
      for (const auto &[order, code] : nbrs) {
        key.push_back(order);
        key.push_back(code);
      }
    }
    std::vector<std::vector<int>> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int i = 0; i < n; ++i) {
      codes[static_cast<std::size_t>(i)] = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(),
                           keys[static_cast<std::size_t>(i)]) -
          sorted.begin());
    }
    const int new_classes = static_cast<int>(sorted.size());
    if (new_classes == classes) {
      return codes;
    }
    classes = new_classes;
  }
}

// Flat integer encoding of a fully labeled graph; lexicographic comparison
// picks the canonical labeling.
std::vector<int> certificate(const MolecularGraph &g,
                             const std::vector<int> &positions) {
  const int n = g.atom_count();
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    order[static_cast<std::size_t>(positions[static_cast<std::size_t>(i)])] = i;
  }
  std::vector<int> cert;
  cert.reserve(static_cast<std::size_t>(n) * 6 + static_cast<std::size_t>(g.bond_count()) * 3);
  for (int p = 0; p < n; ++p) {
    const Atom &a = g.atom(order[static_cast<std::size_t>(p)]);
    cert.push_back(static_cast<int>(a.element));
    cert.push_back(a.formal_charge);
    cert.push_back(a.aromatic ? 1 : 0);
    cert.push_back(a.implicit_hydrogens);
    cert.push_back(a.map_class);
  }
  std::vector<std::array<int, 3>> edges;
  edges.reserve(static_cast<std::size_t>(g.bond_count()));
  for (const Bond &b : g.bonds()) {
    const int pa = positions[static_cast<std::size_t>(b.a)];
    const int pb = positions[static_cast<std::size_t>(b.b)];
    edges.push_back({std::min(pa, pb), std::max(pa, pb), static_cast<int>(b.order)});
  }
  std::sort(edges.begin(), edges.end());
  for (const auto &e : edges) {
    cert.insert(cert.end(), e.begin(), e.end());
  }
  return cert;
}

// Turn a discrete (all-singleton) code vector into positions 0..n-1.
std::vector<int> codes_to_positions(const std::vector<int> &codes) {
  const int n = static_cast<int>(codes.size());
  std::vector<std::pair<int, int>> by_code(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    by_code[static_cast<std::size_t>(i)] = {codes[static_cast<std::size_t>(i)], i};
  }
  std::sort(by_code.begin(), by_code.end());
  std::vector<int> positions(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    positions[static_cast<std::size_t>(by_code[static_cast<std::size_t>(p)].second)] = p;
  }
  return positions;
}

struct CanonSearch {
  const MolecularGraph &g;
  std::vector<int> best_cert;
  std::vector<int> best_positions;
  bool have_best = false;

  explicit CanonSearch(const MolecularGraph &graph) : g(graph) {}

  void descend(std::vector<int> codes) {
    codes = refine_codes(g, codes);
    const int n = g.atom_count();
    if (distinct_count(codes) == n) {
      std::vector<int> positions = codes_to_positions(codes);
      std::vector<int> cert = certificate(g, positions);
      if (!have_best || cert < best_cert) {
        best_cert = std::move(cert);
        best_positions = std::move(positions);
        have_best = true;
      }
      return;
    }
    // Individualize each member of the first (lowest-code) non-singleton cell.
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    for (int c : codes) {
      ++counts[static_cast<std::size_t>(c)];
    }
    int target_code = -1;
    for (int c = 0; c < n; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 1) {
        target_code = c;
        break;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (codes[static_cast<std::size_t>(i)] != target_code) {
        continue;
      }
      std::vector<int> child(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        child[static_cast<std::size_t>(j)] =
            codes[static_cast<std::size_t>(j)] * 2 +
            (j == i || codes[static_cast<std::size_t>(j)] != target_code ? 0 : 1);
      }
      child[static_cast<std::size_t>(i)] = target_code * 2;
      descend(std::move(child));
    }
  }
};

}  // namespace

std::vector<int> symmetry_classes(const MolecularGraph &g) {
  if (g.atom_count() == 0) {
    return {};
  }
  return refine_codes(g, initial_codes(g));
}

std::vector<int> canonical_ranks(const MolecularGraph &g) {
  if (g.atom_count() == 0) {
    return {};
  }
  CanonSearch search(g);
  search.descend(initial_codes(g));
  return search.best_positions;
}

namespace {

bool is_bare_safe(const MolecularGraph &g, int atom_id) {
  const Atom &a = g.atom(atom_id);
  if (a.formal_charge != 0 || a.map_class != 0) {
    return false;
  }
  if (a.element == Element::kWildcard) {
    return a.implicit_hydrogens == 0;
  }
  const int derived = derive_implicit_hydrogens(a.element, 0, a.aromatic,
                                                g.atom_bond_sum2(atom_id));
  return a.implicit_hydrogens == derived;
}

std::string atom_token(const MolecularGraph &g, int atom_id) {
  const Atom &a = g.atom(atom_id);
  std::string sym(element_symbol(a.element));
  if (a.aromatic) {
    for (char &c : sym) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (is_bare_safe(g, atom_id)) {
    return sym;
  }
  std::string out = "[" + sym;
  if (a.implicit_hydrogens > 0) {
    out += 'H';
    if (a.implicit_hydrogens > 1) {
      out += std::to_string(a.implicit_hydrogens);
    }
  }
  if (a.formal_charge > 0) {
    out += '+';
    if (a.formal_charge > 1) {
      out += std::to_string(a.formal_charge);
    }
  } else if (a.formal_charge < 0) {
    out += '-';
    if (a.formal_charge < -1) {
      out += std::to_string(-a.formal_charge);
    }
  }
  if (a.map_class != 0) {
    out += ':';
    out += std::to_string(a.map_class);
  }
  out += ']';
  return out;
}

std::string bond_token(const MolecularGraph &g, int bond_id) {
  const Bond &b = g.bond(bond_id);
  const bool both_aromatic = g.atom(b.a).aromatic && g.atom(b.b).aromatic;
  switch (b.order) {
    case BondOrder::kSingle:
      // An unmarked bond between aromatic atoms would read back as aromatic.
      return both_aromatic ? "-" : "";
    case BondOrder::kDouble:
      return "=";
    case BondOrder::kTriple:
      return "#";
    case BondOrder::kAromatic:
      return both_aromatic ? "" : ":";
  }
  return "";
}

class SmilesWriter {
 public:
  SmilesWriter(const MolecularGraph &g, const std::vector<int> &ranks)
      : g_(g), ranks_(ranks), visited_(static_cast<std::size_t>(g.atom_count()), false),
        bond_used_(static_cast<std::size_t>(g.bond_count()), false) {}

  std::string component_from(int root) {
    emit_order_.clear();
    closure_bonds_.clear();
    plan(root);
    // Ring digits: allocated at the first endpoint in emission order, reused
    // after the closing endpoint releases them.
    std::map<int, int> digit_of_bond;
    std::set<int> free_digits;
    for (int d = 1; d <= 99; ++d) {
      free_digits.insert(d);
    }
    std::string out;
    write_atom(root, -1, out, digit_of_bond, free_digits);
    return out;
  }

 private:
  // First pass: establish the DFS tree (children in canonical-rank order) and
  // classify the non-tree bonds as ring closures.
  void plan(int v) {
    visited_[static_cast<std::size_t>(v)] = true;
    emit_order_.push_back(v);
    std::vector<Neighbor> nbrs(g_.neighbors(v).begin(), g_.neighbors(v).end());
    std::sort(nbrs.begin(), nbrs.end(), [&](const Neighbor &x, const Neighbor &y) {
      return ranks_[static_cast<std::size_t>(x.atom)] <
             ranks_[static_cast<std::size_t>(y.atom)];
    });
    for (const Neighbor &nb : nbrs) {
      if (bond_used_[static_cast<std::size_t>(nb.bond)]) {
        continue;
      }
      if (visited_[static_cast<std::size_t>(nb.atom)]) {
        bond_used_[static_cast<std::size_t>(nb.bond)] = true;
        closure_bonds_.insert(nb.bond);
        continue;
      }
      bond_used_[static_cast<std::size_t>(nb.bond)] = true;
      tree_children_[v].push_back(nb);
      plan(nb.atom);
    }
  }

  void write_atom(int v, int parent_bond, std::string &out,
                  std::map<int, int> &digit_of_bond, std::set<int> &free_digits) {
    if (parent_bond >= 0) {
      out += bond_token(g_, parent_bond);
    }
    out += atom_token(g_, v);

    // Closure digits incident to this atom, ordered by the emission position
    // of the partner atom.
    std::vector<std::pair<int, int>> closures;  // (partner emission pos, bond)
    for (const Neighbor &nb : g_.neighbors(v)) {
      if (closure_bonds_.count(nb.bond) != 0) {
        closures.emplace_back(emit_pos(nb.atom), nb.bond);
      }
    }
    std::sort(closures.begin(), closures.end());
    for (const auto &[pos, bond_id] : closures) {
      auto it = digit_of_bond.find(bond_id);
      if (it == digit_of_bond.end()) {
        const int digit = *free_digits.begin();
        free_digits.erase(free_digits.begin());
        digit_of_bond.emplace(bond_id, digit);
        out += bond_token(g_, bond_id);
        out += digit_text(digit);
      } else {
        out += digit_text(it->second);
        free_digits.insert(it->second);
        digit_of_bond.erase(it);
      }
    }

    const auto child_it = tree_children_.find(v);
    if (child_it == tree_children_.end()) {
      return;
    }
    const std::vector<Neighbor> &children = child_it->second;
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (i + 1 < children.size()) {
        out += '(';
        write_atom(children[i].atom, children[i].bond, out, digit_of_bond,
                   free_digits);
        out += ')';
      } else {
        write_atom(children[i].atom, children[i].bond, out, digit_of_bond,
                   free_digits);
      }
    }
  }

  int emit_pos(int atom_id) const {
    for (std::size_t i = 0; i < emit_order_.size(); ++i) {
      if (emit_order_[i] == atom_id) {
        return static_cast<int>(i);
      }
    }
    return -1;
  }

  static std::string digit_text(int digit) {
    if (digit < 10) {
      return std::string(1, static_cast<char>('0' + digit));
    }
    return "%" + std::to_string(digit / 10) + std::to_string(digit % 10);
  }

  const MolecularGraph &g_;
  const std::vector<int> &ranks_;
  std::vector<bool> visited_;
  std::vector<bool> bond_used_;
  std::vector<int> emit_order_;
  std::set<int> closure_bonds_;
  std::map<int, std::vector<Neighbor>> tree_children_;
};

}  // namespace

std::string write_smiles(const MolecularGraph &g) {
  if (g.atom_count() == 0) {
    return "";
  }
  const std::vector<int> ranks = canonical_ranks(g);
  const std::vector<int> labels = g.component_labels();
  const int components = g.component_count();

  std::vector<int> roots(static_cast<std::size_t>(components), -1);
  for (int i = 0; i < g.atom_count(); ++i) {
    int &root = roots[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    if (root < 0 || ranks[static_cast<std::size_t>(i)] <
                        ranks[static_cast<std::size_t>(root)]) {
      root = i;
    }
  }
  std::vector<std::string> parts;
  parts.reserve(static_cast<std::size_t>(components));
  for (int c = 0; c < components; ++c) {
    SmilesWriter writer(g, ranks);
    parts.push_back(writer.component_from(roots[static_cast<std::size_t>(c)]));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    out += '.';
    out += parts[i];
  }
  return out;
}

namespace {

bool atoms_compatible(const Atom &x, const Atom &y) {
  return x.element == y.element && x.formal_charge == y.formal_charge &&
         x.aromatic == y.aromatic &&
         x.implicit_hydrogens == y.implicit_hydrogens &&
         x.map_class == y.map_class;
}

// Plain backtracking over an adjacency-guided atom order. Deliberately does
// not share code with the canonical-labeling path so the two can check each
// other in tests.
struct IsoSearch {
  const MolecularGraph &a;
  const MolecularGraph &b;
  std::vector<int> order;       // a-atoms, connectivity-first
  std::vector<int> map_ab;      // a-atom -> b-atom
  std::vector<bool> used_b;

  IsoSearch(const MolecularGraph &ga, const MolecularGraph &gb)
      : a(ga), b(gb), map_ab(static_cast<std::size_t>(ga.atom_count()), -1),
        used_b(static_cast<std::size_t>(gb.atom_count()), false) {
    std::vector<bool> seen(static_cast<std::size_t>(a.atom_count()), false);
    for (int start = 0; start < a.atom_count(); ++start) {
      if (seen[static_cast<std::size_t>(start)]) {
        continue;
      }
      std::vector<int> queue = {start};
      seen[static_cast<std::size_t>(start)] = true;
      std::size_t head = 0;
      while (head < queue.size()) {
        const int v = queue[head++];
        order.push_back(v);
        for (const Neighbor &nb : a.neighbors(v)) {
          if (!seen[static_cast<std::size_t>(nb.atom)]) {
            seen[static_cast<std::size_t>(nb.atom)] = true;
            queue.push_back(nb.atom);
          }
        }
      }
    }
  }

  bool extend(std::size_t depth) {
    if (depth == order.size()) {
      return true;
    }
    const int av = order[depth];
    for (int bv = 0; bv < b.atom_count(); ++bv) {
      if (used_b[static_cast<std::size_t>(bv)] ||
          !atoms_compatible(a.atom(av), b.atom(bv)) ||
          a.degree(av) != b.degree(bv)) {
        continue;
      }
      bool ok = true;
      int mapped_neighbors_a = 0;
      for (const Neighbor &nb : a.neighbors(av)) {
        const int partner = map_ab[static_cast<std::size_t>(nb.atom)];
        if (partner < 0) {
          continue;
        }
        ++mapped_neighbors_a;
        const std::optional<int> bb = b.bond_between(bv, partner);
        if (!bb || b.bond(*bb).order != a.bond(nb.bond).order) {
          ok = false;
          break;
        }
      }
      if (ok) {
        int mapped_neighbors_b = 0;
        for (const Neighbor &nb : b.neighbors(bv)) {
          if (used_b[static_cast<std::size_t>(nb.atom)]) {
            ++mapped_neighbors_b;
          }
        }
        if (mapped_neighbors_b != mapped_neighbors_a) {
          ok = false;
        }
      }
      if (!ok) {
        continue;
      }
      map_ab[static_cast<std::size_t>(av)] = bv;
      used_b[static_cast<std::size_t>(bv)] = true;
      if (extend(depth + 1)) {
        return true;
      }
      map_ab[static_cast<std::size_t>(av)] = -1;
      used_b[static_cast<std::size_t>(bv)] = false;
    }
    return false;
  }
};

}  // namespace

bool graphs_isomorphic(const MolecularGraph &a, const MolecularGraph &b) {
  if (a.atom_count() != b.atom_count() || a.bond_count() != b.bond_count()) {
    return false;
  }
  if (a.atom_count() == 0) {
    return true;
  }
  IsoSearch search(a, b);
  return search.extend(0);
}

}  // namespace blockmol
