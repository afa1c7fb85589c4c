//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "blockmol/molgraph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <utility>

namespace blockmol {

int bond_order_sum2(BondOrder order) {
  switch (order) {
    case BondOrder::kSingle:
      return 2;
    case BondOrder::kDouble:
      return 4;
    case BondOrder::kTriple:
      return 6;
    case BondOrder::kAromatic:
      return 3;
  }
  return 2;
}

SmilesError::SmilesError(SmilesErrorCode code, std::size_t offset,
                         const std::string &what)
    : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
      code_(code), offset_(offset) {}

int MolecularGraph::add_atom(const Atom &atom) {
  atoms_.push_back(atom);
  adjacency_.emplace_back();
  return static_cast<int>(atoms_.size()) - 1;
}

int MolecularGraph::add_bond(int a, int b, BondOrder order) {
  if (a == b) {
    throw std::invalid_argument("bond endpoints must be distinct");
  }
  if (a < 0 || b < 0 || a >= atom_count() || b >= atom_count()) {
    throw std::invalid_argument("bond endpoint out of range");
  }
  if (bond_between(a, b)) {
    throw std::invalid_argument("duplicate bond between atom pair");
  }
  const int id = static_cast<int>(bonds_.size());
  bonds_.push_back(Bond{a, b, order});
  adjacency_[static_cast<std::size_t>(a)].push_back(Neighbor{b, id});
  adjacency_[static_cast<std::size_t>(b)].push_back(Neighbor{a, id});
  return id;
}

int MolecularGraph::heavy_atom_count() const {
  int n = 0;
  for (const Atom &a : atoms_) {
    if (a.element != Element::kWildcard) {
      ++n;
    }
  }
  return n;
}

std::optional<int> MolecularGraph::bond_between(int a, int b) const {
  for (const Neighbor &nb : adjacency_[static_cast<std::size_t>(a)]) {
    if (nb.atom == b) {
      return nb.bond;
    }
  }
  return std::nullopt;
}

int MolecularGraph::atom_bond_sum2(int atom) const {
  int sum2 = 0;
  for (const Neighbor &nb : adjacency_[static_cast<std::size_t>(atom)]) {
    sum2 += bond_order_sum2(bonds_[static_cast<std::size_t>(nb.bond)].order);
  }
  return sum2;
}

namespace {

// Valence units for the over-valence check. Aromatic bonds count 1 here (not
// 1.5): counting them higher would reject pyrrole [nH] and furan o, whose
// lone pairs feed the ring. Hydrogen derivation still uses the 1.5 sum.
int valence_check_units(const MolecularGraph &g, int atom_id) {
  int units = 0;
  for (const Neighbor &nb : g.neighbors(atom_id)) {
    switch (g.bond(nb.bond).order) {
      case BondOrder::kSingle:
      case BondOrder::kAromatic:
        units += 1;
        break;
      case BondOrder::kDouble:
        units += 2;
        break;
      case BondOrder::kTriple:
        units += 3;
        break;
    }
  }
  return units;
}

}  // namespace

std::vector<int> MolecularGraph::component_labels() const {
  std::vector<int> label(atoms_.size(), -1);
  int next = 0;
  std::vector<int> stack;
  for (int start = 0; start < atom_count(); ++start) {
    if (label[static_cast<std::size_t>(start)] >= 0) {
      continue;
    }
    label[static_cast<std::size_t>(start)] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const Neighbor &nb : neighbors(v)) {
        if (label[static_cast<std::size_t>(nb.atom)] < 0) {
          label[static_cast<std::size_t>(nb.atom)] = next;
          stack.push_back(nb.atom);
        }
      }
    }
    ++next;
  }
  return label;
}

int MolecularGraph::component_count() const {
  const std::vector<int> labels = component_labels();
  int max_label = -1;
  for (int l : labels) {
    max_label = std::max(max_label, l);
  }
  return max_label + 1;
}

namespace detail {

// Bridge detection over an edge list; returns true for bonds on a cycle.
std::vector<bool> ring_bonds(int atom_count, std::span<const Bond> bonds) {
  std::vector<std::vector<Neighbor>> adj(static_cast<std::size_t>(atom_count));
  for (int i = 0; i < static_cast<int>(bonds.size()); ++i) {
    const Bond &b = bonds[static_cast<std::size_t>(i)];
    adj[static_cast<std::size_t>(b.a)].push_back(Neighbor{b.b, i});
    adj[static_cast<std::size_t>(b.b)].push_back(Neighbor{b.a, i});
  }
  std::vector<bool> on_cycle(bonds.size(), false);
  std::vector<int> disc(static_cast<std::size_t>(atom_count), -1);
  std::vector<int> low(static_cast<std::size_t>(atom_count), 0);
  int timer = 0;

  std::function<void(int, int)> dfs = [&](int v, int parent_bond) {
    disc[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = timer++;
    for (const Neighbor &nb : adj[static_cast<std::size_t>(v)]) {
      if (nb.bond == parent_bond) {
        continue;
      }
      if (disc[static_cast<std::size_t>(nb.atom)] < 0) {
        dfs(nb.atom, nb.bond);
        low[static_cast<std::size_t>(v)] =
            std::min(low[static_cast<std::size_t>(v)],
                     low[static_cast<std::size_t>(nb.atom)]);
        if (low[static_cast<std::size_t>(nb.atom)] >
            disc[static_cast<std::size_t>(v)]) {
          continue;  // bridge
        }
        on_cycle[static_cast<std::size_t>(nb.bond)] = true;
      } else {
        low[static_cast<std::size_t>(v)] =
            std::min(low[static_cast<std::size_t>(v)],
                     disc[static_cast<std::size_t>(nb.atom)]);
        on_cycle[static_cast<std::size_t>(nb.bond)] = true;
      }
    }
  };
  for (int v = 0; v < atom_count; ++v) {
    if (disc[static_cast<std::size_t>(v)] < 0) {
      dfs(v, -1);
    }
  }
  return on_cycle;
}

}  // namespace detail

std::vector<bool> MolecularGraph::ring_bond_mask() const {
  return detail::ring_bonds(atom_count(), bonds_);
}

std::vector<bool> MolecularGraph::ring_atom_mask() const {
  const std::vector<bool> rb = ring_bond_mask();
  std::vector<bool> mask(atoms_.size(), false);
  for (int i = 0; i < bond_count(); ++i) {
    if (rb[static_cast<std::size_t>(i)]) {
      mask[static_cast<std::size_t>(bonds_[static_cast<std::size_t>(i)].a)] = true;
      mask[static_cast<std::size_t>(bonds_[static_cast<std::size_t>(i)].b)] = true;
    }
  }
  return mask;
}

MolecularGraph MolecularGraph::induced_subgraph(std::span<const int> atom_ids) const {
  MolecularGraph sub;
  std::vector<int> remap(atoms_.size(), -1);
  for (int old_id : atom_ids) {
    remap[static_cast<std::size_t>(old_id)] = sub.add_atom(atom(old_id));
  }
  for (const Bond &b : bonds_) {
    const int na = remap[static_cast<std::size_t>(b.a)];
    const int nb = remap[static_cast<std::size_t>(b.b)];
    if (na >= 0 && nb >= 0) {
      sub.add_bond(na, nb, b.order);
    }
  }
  return sub;
}

int derive_implicit_hydrogens(Element element, int formal_charge, bool aromatic,
                              int bond_sum2) {
  if (element == Element::kWildcard) {
    return 0;
  }
  const std::span<const int> valences = element_valences(element);
  if (formal_charge != 0) {
    const int v = element_max_valence(element, formal_charge);
    return std::max(0, (2 * v - bond_sum2) / 2);
  }
  if (aromatic) {
    // Aromatic atoms fill only to the lowest valence; the ring system accounts
    // for the rest (thiophene S, furan O get no hydrogens).
    const int v = valences[0];
    return std::max(0, (2 * v - bond_sum2) / 2);
  }
  for (int v : valences) {
    if (2 * v >= bond_sum2) {
      return (2 * v - bond_sum2) / 2;
    }
  }
  return 0;
}

void MolecularGraph::recompute_implicit_hydrogens() {
  for (int i = 0; i < atom_count(); ++i) {
    Atom &a = atoms_[static_cast<std::size_t>(i)];
    if (a.fixed_hydrogens || a.element == Element::kWildcard) {
      continue;
    }
    a.implicit_hydrogens = static_cast<std::uint8_t>(derive_implicit_hydrogens(
        a.element, a.formal_charge, a.aromatic, atom_bond_sum2(i)));
  }
}

void MolecularGraph::validate_valences() const {
  for (int i = 0; i < atom_count(); ++i) {
    const Atom &a = atoms_[static_cast<std::size_t>(i)];
    if (a.element == Element::kWildcard) {
      continue;
    }
    const int total = valence_check_units(*this, i) + a.implicit_hydrogens;
    if (total > element_max_valence(a.element, a.formal_charge)) {
      std::ostringstream msg;
      msg << "valence of " << element_symbol(a.element) << " atom " << i
          << " exceeds maximum";
      throw SmilesError(SmilesErrorCode::kValence, 0, msg.str());
    }
  }
}

namespace {

struct PendingAtom {
  Atom atom;
  std::size_t offset = 0;
};

struct PendingBond {
  int a = -1;
  int b = -1;
  BondOrder order = BondOrder::kSingle;
  bool implicit_order = false;  // order chosen by the default rule
  std::size_t offset = 0;
};

struct RingOpening {
  int atom = -1;
  std::optional<BondOrder> order;
  std::size_t offset = 0;
};

class SmilesParser {
 public:
  SmilesParser(std::string_view text, ParseReport *report)
      : text_(text), report_(report) {}

  MolecularGraph run() {
    if (text_.empty()) {
      throw SmilesError(SmilesErrorCode::kSyntax, 0, "empty SMILES");
    }
    while (pos_ < text_.size()) {
      step();
    }
    finish_checks();
    return build_graph();
  }

 private:
  [[noreturn]] void fail(SmilesErrorCode code, std::size_t offset,
                         const std::string &msg) const {
    throw SmilesError(code, offset, msg);
  }

  void warn(const std::string &msg) {
    if (report_ != nullptr) {
      report_->warnings.push_back(msg);
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void step() {
    const char c = text_[pos_];
    const std::size_t at = pos_;
    switch (c) {
      case '(':
        if (prev_atom_ < 0) {
          fail(SmilesErrorCode::kSyntax, at, "branch opened before any atom");
        }
        if (pending_order_) {
          fail(SmilesErrorCode::kSyntax, at, "bond symbol before branch open");
        }
        branch_stack_.emplace_back(prev_atom_, at);
        ++pos_;
        break;
      case ')':
        if (branch_stack_.empty()) {
          fail(SmilesErrorCode::kUnbalancedParen, at, "unmatched ')'");
        }
        if (pending_order_) {
          fail(SmilesErrorCode::kSyntax, at, "dangling bond before ')'");
        }
        prev_atom_ = branch_stack_.back().first;
        branch_stack_.pop_back();
        ++pos_;
        break;
      case '-':
        set_pending(BondOrder::kSingle, at);
        ++pos_;
        break;
      case '=':
        set_pending(BondOrder::kDouble, at);
        ++pos_;
        break;
      case '#':
        set_pending(BondOrder::kTriple, at);
        ++pos_;
        break;
      case ':':
        set_pending(BondOrder::kAromatic, at);
        ++pos_;
        break;
      case '/':
      case '\\':
        warn(std::string("stereo bond marker '") + c + "' stripped at offset " +
             std::to_string(at));
        set_pending(BondOrder::kSingle, at);
        ++pos_;
        break;
      case '.':
        if (pending_order_) {
          fail(SmilesErrorCode::kSyntax, at, "bond symbol before '.'");
        }
        if (!branch_stack_.empty()) {
          fail(SmilesErrorCode::kUnsupportedFeature, at,
               "fragment separator inside branch");
        }
        if (prev_atom_ < 0) {
          fail(SmilesErrorCode::kSyntax, at, "'.' before any atom");
        }
        dot_seen_ = true;
        expect_atom_ = true;
        prev_atom_ = -1;
        ++pos_;
        break;
      case '%':
      case '0':
      case '1':
      case '2':
      case '3':
      case '4':
      case '5':
      case '6':
      case '7':
      case '8':
      case '9':
        ring_closure(at);
        break;
      case '[':
        bracket_atom(at);
        break;
      default:
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
          fail(SmilesErrorCode::kSyntax, at, "unexpected whitespace");
        }
        organic_atom(at);
        break;
    }
  }

  void set_pending(BondOrder order, std::size_t at) {
    if (pending_order_) {
      fail(SmilesErrorCode::kSyntax, at, "repeated bond symbol");
    }
    if (prev_atom_ < 0) {
      fail(SmilesErrorCode::kSyntax, at, "bond symbol before any atom");
    }
    pending_order_ = order;
    pending_offset_ = at;
  }

  void ring_closure(std::size_t at) {
    int number;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size() ||
          std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) == 0 ||
          std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])) == 0) {
        fail(SmilesErrorCode::kSyntax, at, "'%' needs two digits");
      }
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = text_[pos_] - '0';
      ++pos_;
    }
    if (prev_atom_ < 0) {
      fail(SmilesErrorCode::kSyntax, at, "ring closure before any atom");
    }
    std::optional<BondOrder> order = pending_order_;
    pending_order_.reset();

    auto it = ring_open_.find(number);
    if (it == ring_open_.end()) {
      ring_open_.emplace(number, RingOpening{prev_atom_, order, at});
      return;
    }
    const RingOpening opening = it->second;
    ring_open_.erase(it);
    if (opening.atom == prev_atom_) {
      fail(SmilesErrorCode::kSyntax, at, "ring closure to the same atom");
    }
    BondOrder resolved;
    bool implicit = false;
    if (opening.order && order) {
      if (*opening.order != *order) {
        fail(SmilesErrorCode::kSyntax, at, "conflicting ring-closure bond orders");
      }
      resolved = *order;
    } else if (opening.order) {
      resolved = *opening.order;
    } else if (order) {
      resolved = *order;
    } else {
      implicit = true;
      resolved = default_order(opening.atom, prev_atom_);
    }
    add_pending_bond(opening.atom, prev_atom_, resolved, implicit, at);
  }

  BondOrder default_order(int a, int b) const {
    if (atoms_[static_cast<std::size_t>(a)].atom.aromatic &&
        atoms_[static_cast<std::size_t>(b)].atom.aromatic) {
      return BondOrder::kAromatic;
    }
    return BondOrder::kSingle;
  }

  void add_pending_bond(int a, int b, BondOrder order, bool implicit,
                        std::size_t at) {
    for (const PendingBond &pb : bonds_) {
      if ((pb.a == a && pb.b == b) || (pb.a == b && pb.b == a)) {
        fail(SmilesErrorCode::kSyntax, at, "duplicate bond between atom pair");
      }
    }
    bonds_.push_back(PendingBond{a, b, order, implicit, at});
  }

  void attach_atom(Atom atom, std::size_t at) {
    atoms_.push_back(PendingAtom{atom, at});
    const int id = static_cast<int>(atoms_.size()) - 1;
    if (prev_atom_ >= 0) {
      BondOrder order;
      bool implicit = false;
      if (pending_order_) {
        order = *pending_order_;
        pending_order_.reset();
      } else {
        order = default_order(prev_atom_, id);
        implicit = true;
      }
      add_pending_bond(prev_atom_, id, order, implicit, at);
    } else if (pending_order_) {
      fail(SmilesErrorCode::kSyntax, at, "bond with no preceding atom");
    }
    prev_atom_ = id;
    expect_atom_ = false;
  }

  void organic_atom(std::size_t at) {
    static constexpr std::array<std::pair<std::string_view, Element>, 2> kTwoChar = {
        {{"Cl", Element::kCl}, {"Br", Element::kBr}}};
    std::string_view rest = text_.substr(pos_);
    for (const auto &[sym, elem] : kTwoChar) {
      if (rest.starts_with(sym)) {
        Atom a;
        a.element = elem;
        pos_ += sym.size();
        attach_atom(a, at);
        return;
      }
    }
    const char c = text_[pos_];
    Atom a;
    bool aromatic = false;
    char up = c;
    if (std::islower(static_cast<unsigned char>(c)) != 0) {
      aromatic = true;
      up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (c == '*') {
      a.element = Element::kWildcard;
    } else {
      const auto elem = element_from_symbol(std::string_view(&up, 1));
      if (!elem) {
        fail(SmilesErrorCode::kUnsupportedElement, at,
             std::string("element '") + c + "' not in supported set");
      }
      if (aromatic && !element_aromatic_capable(*elem)) {
        fail(SmilesErrorCode::kUnsupportedElement, at,
             std::string("'") + c + "' cannot be aromatic");
      }
      a.element = *elem;
      a.aromatic = aromatic;
    }
    ++pos_;
    attach_atom(a, at);
  }

  void bracket_atom(std::size_t at) {
    ++pos_;  // consume '['
    if (pos_ < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
      fail(SmilesErrorCode::kUnsupportedFeature, pos_, "isotopes not supported");
    }
    Atom a;
    a.fixed_hydrogens = true;
    if (peek() == '*') {
      a.element = Element::kWildcard;
      ++pos_;
    } else {
      // A lowercase second letter always belongs to the element symbol; the
      // only uppercase continuation inside a bracket is the hydrogen count.
      const char c0 = peek();
      if (std::isalpha(static_cast<unsigned char>(c0)) == 0) {
        fail(SmilesErrorCode::kSyntax, pos_, "expected element symbol");
      }
      std::size_t len = 1;
      if (pos_ + 1 < text_.size() &&
          std::islower(static_cast<unsigned char>(text_[pos_ + 1])) != 0) {
        len = 2;
      }
      std::string sym(text_.substr(pos_, len));
      std::optional<Element> elem;
      bool aromatic = false;
      if (len == 1 && std::islower(static_cast<unsigned char>(c0)) != 0) {
        std::string upper(1, static_cast<char>(
                                 std::toupper(static_cast<unsigned char>(c0))));
        if (auto e = element_from_symbol(upper);
            e && element_aromatic_capable(*e)) {
          elem = e;
          aromatic = true;
        }
      } else {
        elem = element_from_symbol(sym);
      }
      if (!elem) {
        fail(SmilesErrorCode::kUnsupportedElement, pos_,
             "element '" + sym + "' not in supported set");
      }
      a.element = *elem;
      a.aromatic = aromatic;
      pos_ += len;
    }
    if (peek() == '@') {
      ++pos_;
      if (peek() == '@') {
        ++pos_;
      }
      if (std::isalpha(static_cast<unsigned char>(peek())) != 0 && peek() != 'H') {
        fail(SmilesErrorCode::kUnsupportedFeature, pos_,
             "named chirality classes not supported");
      }
      warn("stereocenter marker stripped at offset " + std::to_string(at));
    }
    int hydrogens = 0;
    if (peek() == 'H') {
      ++pos_;
      hydrogens = 1;
      if (std::isdigit(static_cast<unsigned char>(peek())) != 0) {
        hydrogens = text_[pos_] - '0';
        ++pos_;
      }
    }
    int charge = 0;
    if (peek() == '+' || peek() == '-') {
      const char sign_char = text_[pos_];
      const int sign = sign_char == '+' ? 1 : -1;
      ++pos_;
      if (std::isdigit(static_cast<unsigned char>(peek())) != 0) {
        charge = sign * (text_[pos_] - '0');
        ++pos_;
      } else {
        charge = sign;
        while (peek() == sign_char) {
          charge += sign;
          ++pos_;
        }
      }
    }
    if (peek() == ':') {
      ++pos_;
      if (std::isdigit(static_cast<unsigned char>(peek())) == 0) {
        fail(SmilesErrorCode::kSyntax, pos_, "atom map expects digits");
      }
      int map = 0;
      while (std::isdigit(static_cast<unsigned char>(peek())) != 0) {
        map = map * 10 + (text_[pos_] - '0');
        ++pos_;
      }
      a.map_class = map;
    }
    if (peek() != ']') {
      fail(SmilesErrorCode::kSyntax, pos_, "expected ']'");
    }
    ++pos_;
    a.implicit_hydrogens = static_cast<std::uint8_t>(std::max(hydrogens, 0));
    a.formal_charge = static_cast<std::int8_t>(charge);
    attach_atom(a, at);
  }

  void finish_checks() const {
    if (!branch_stack_.empty()) {
      fail(SmilesErrorCode::kUnbalancedParen, branch_stack_.back().second,
           "unmatched '('");
    }
    if (!ring_open_.empty()) {
      fail(SmilesErrorCode::kUnmatchedRingBond, ring_open_.begin()->second.offset,
           "unmatched ring-closure digit");
    }
    if (pending_order_) {
      fail(SmilesErrorCode::kSyntax, pending_offset_, "dangling bond at end");
    }
    if (expect_atom_) {
      fail(SmilesErrorCode::kSyntax, text_.size() - 1, "'.' with no following atom");
    }
  }

  MolecularGraph build_graph() {
    // Aromatic bonds must lie on cycles. Bonds that got the aromatic default
    // only because both endpoints are aromatic (e.g. an unmarked biphenyl
    // linker) are demoted to single; explicitly written ':' on an acyclic
    // bond is an error.
    std::vector<Bond> raw;
    raw.reserve(bonds_.size());
    for (const PendingBond &pb : bonds_) {
      raw.push_back(Bond{pb.a, pb.b, pb.order});
    }
    const std::vector<bool> on_cycle =
        detail::ring_bonds(static_cast<int>(atoms_.size()), raw);
    for (std::size_t i = 0; i < bonds_.size(); ++i) {
      if (bonds_[i].order != BondOrder::kAromatic || on_cycle[i]) {
        continue;
      }
      if (bonds_[i].implicit_order) {
        bonds_[i].order = BondOrder::kSingle;
      } else {
        fail(SmilesErrorCode::kAromaticity, bonds_[i].offset,
             "aromatic bond outside a ring");
      }
    }

    MolecularGraph g;
    for (const PendingAtom &pa : atoms_) {
      g.add_atom(pa.atom);
    }
    for (const PendingBond &pb : bonds_) {
      g.add_bond(pb.a, pb.b, pb.order);
    }
    g.set_multi_fragment(dot_seen_);

    for (int i = 0; i < g.atom_count(); ++i) {
      Atom &atom = g.atom(i);
      if (!atom.fixed_hydrogens && atom.element != Element::kWildcard) {
        atom.implicit_hydrogens = static_cast<std::uint8_t>(
            derive_implicit_hydrogens(atom.element, atom.formal_charge,
                                      atom.aromatic, g.atom_bond_sum2(i)));
      }
      const int total = valence_check_units(g, i) + atom.implicit_hydrogens;
      if (total > element_max_valence(atom.element, atom.formal_charge)) {
        fail(SmilesErrorCode::kValence, atoms_[static_cast<std::size_t>(i)].offset,
             std::string("valence of ") +
                 std::string(element_symbol(atom.element)) + " exceeds maximum");
      }
    }
    // An aromatic atom needs at least two incident aromatic bonds, otherwise
    // the written aromaticity cannot form a ring.
    for (int i = 0; i < g.atom_count(); ++i) {
      if (!g.atom(i).aromatic) {
        continue;
      }
      int aromatic_bonds = 0;
      for (const Neighbor &nb : g.neighbors(i)) {
        if (g.bond(nb.bond).order == BondOrder::kAromatic) {
          ++aromatic_bonds;
        }
      }
      if (aromatic_bonds < 2) {
        fail(SmilesErrorCode::kAromaticity,
             atoms_[static_cast<std::size_t>(i)].offset,
             "aromatic atom outside an aromatic ring");
      }
    }
    return g;
  }

  std::string_view text_;
  ParseReport *report_;
  std::size_t pos_ = 0;
  int prev_atom_ = -1;
  std::optional<BondOrder> pending_order_;
  std::size_t pending_offset_ = 0;
  bool dot_seen_ = false;
  bool expect_atom_ = false;
  std::vector<PendingAtom> atoms_;
  std::vector<PendingBond> bonds_;
  std::vector<std::pair<int, std::size_t>> branch_stack_;
  std::map<int, RingOpening> ring_open_;
};

}  // namespace

MolecularGraph parse_smiles(std::string_view text, ParseReport *report) {
  return SmilesParser(text, report).run();
}

}  // namespace blockmol
