//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "blockmol/tokenizer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace blockmol {

using ordered_json = nlohmann::ordered_json;

std::string_view reaction_name(Reaction r) {
  switch (r) {
    case Reaction::kAmide:
      return "Amide";
    case Reaction::kSuzuki:
      return "Suzuki";
    case Reaction::kBuchwald:
      return "Buchwald";
  }
  return "";
}

std::string_view side_name(Side s) {
  switch (s) {
    case Side::kAcylSide:
      return "AcylSide";
    case Side::kAmineSide:
      return "AmineSide";
    case Side::kArylSideA:
      return "ArylSideA";
    case Side::kArylSideB:
      return "ArylSideB";
  }
  return "";
}

std::optional<Reaction> reaction_from_name(std::string_view name) {
  if (name == "Amide") return Reaction::kAmide;
  if (name == "Suzuki") return Reaction::kSuzuki;
  if (name == "Buchwald") return Reaction::kBuchwald;
  return std::nullopt;
}

std::optional<Side> side_from_name(std::string_view name) {
  if (name == "AcylSide") return Side::kAcylSide;
  if (name == "AmineSide") return Side::kAmineSide;
  if (name == "ArylSideA") return Side::kArylSideA;
  if (name == "ArylSideB") return Side::kArylSideB;
  return std::nullopt;
}

bool valid_role(Reaction r, Side s) {
  switch (r) {
    case Reaction::kAmide:
      return s == Side::kAcylSide || s == Side::kAmineSide;
    case Reaction::kSuzuki:
      return s == Side::kArylSideA || s == Side::kArylSideB;
    case Reaction::kBuchwald:
      return s == Side::kArylSideA || s == Side::kAmineSide;
  }
  return false;
}

Side complementary_side(Reaction r, Side s) {
  switch (r) {
    case Reaction::kAmide:
      return s == Side::kAcylSide ? Side::kAmineSide : Side::kAcylSide;
    case Reaction::kSuzuki:
      return s == Side::kArylSideA ? Side::kArylSideB : Side::kArylSideA;
    case Reaction::kBuchwald:
      return s == Side::kArylSideA ? Side::kAmineSide : Side::kArylSideA;
  }
  return s;
}

int role_class_tag(Reaction r, Side s) {
  switch (r) {
    case Reaction::kAmide:
      return s == Side::kAcylSide ? 1 : 2;
    case Reaction::kSuzuki:
      return s == Side::kArylSideA ? 3 : 4;
    case Reaction::kBuchwald:
      return s == Side::kArylSideA ? 5 : 6;
  }
  return 0;
}

std::optional<std::pair<Reaction, Side>> role_from_tag(int tag) {
  switch (tag) {
    case 1:
      return std::make_pair(Reaction::kAmide, Side::kAcylSide);
    case 2:
      return std::make_pair(Reaction::kAmide, Side::kAmineSide);
    case 3:
      return std::make_pair(Reaction::kSuzuki, Side::kArylSideA);
    case 4:
      return std::make_pair(Reaction::kSuzuki, Side::kArylSideB);
    case 5:
      return std::make_pair(Reaction::kBuchwald, Side::kArylSideA);
    case 6:
      return std::make_pair(Reaction::kBuchwald, Side::kAmineSide);
    default:
      return std::nullopt;
  }
}

std::string_view coverage_name(Coverage c) {
  switch (c) {
    case Coverage::kComplete:
      return "Complete";
    case Coverage::kPartial:
      return "Partial";
    case Coverage::kUntokenized:
      return "Untokenized";
  }
  return "";
}

std::string_view tokenizer_kind_name(TokenizerKind k) {
  switch (k) {
    case TokenizerKind::kSynthesisGuaranteed:
      return "SynthesisGuaranteed";
    case TokenizerKind::kRuleBased:
      return "RuleBased";
    case TokenizerKind::kSingleBlock:
      return "SingleBlock";
  }
  return "";
}

std::optional<Coverage> coverage_from_name(std::string_view name) {
  if (name == "Complete") return Coverage::kComplete;
  if (name == "Partial") return Coverage::kPartial;
  if (name == "Untokenized") return Coverage::kUntokenized;
  return std::nullopt;
}

std::optional<TokenizerKind> tokenizer_kind_from_name(std::string_view name) {
  if (name == "SynthesisGuaranteed") return TokenizerKind::kSynthesisGuaranteed;
  if (name == "RuleBased") return TokenizerKind::kRuleBased;
  if (name == "SingleBlock") return TokenizerKind::kSingleBlock;
  return std::nullopt;
}

std::string_view conflict_pattern_name(ConflictPattern p) {
  switch (p) {
    case ConflictPattern::kFreeAmine:
      return "free_amine";
    case ConflictPattern::kCarboxylicAcid:
      return "carboxylic_acid";
    case ConflictPattern::kArylHalide:
      return "aryl_halide";
  }
  return "";
}

std::optional<ConflictPattern> conflict_pattern_from_name(std::string_view name) {
  if (name == "free_amine") return ConflictPattern::kFreeAmine;
  if (name == "carboxylic_acid") return ConflictPattern::kCarboxylicAcid;
  if (name == "aryl_halide") return ConflictPattern::kArylHalide;
  return std::nullopt;
}

ConflictRuleSet ConflictRuleSet::default_set() {
  ConflictRuleSet set;
  set.rules.push_back(ConflictRule{
      "free_amine",
      ConflictPattern::kFreeAmine,
      {{Reaction::kAmide, Side::kAmineSide},
       {Reaction::kBuchwald, Side::kAmineSide}}});
  set.rules.push_back(ConflictRule{"carboxylic_acid",
                                   ConflictPattern::kCarboxylicAcid,
                                   {{Reaction::kAmide, Side::kAcylSide}}});
  set.rules.push_back(ConflictRule{
      "aryl_halide",
      ConflictPattern::kArylHalide,
      {{Reaction::kSuzuki, Side::kArylSideA},
       {Reaction::kSuzuki, Side::kArylSideB},
       {Reaction::kBuchwald, Side::kArylSideA}}});
  return set;
}

ConflictRuleSet ConflictRuleSet::from_json_text(const std::string &text) {
  const ordered_json doc = ordered_json::parse(text);
  ConflictRuleSet set;
  for (const auto &entry : doc.at("rules")) {
    ConflictRule rule;
    rule.name = entry.at("name").get<std::string>();
    const auto pattern =
        conflict_pattern_from_name(entry.at("pattern").get<std::string>());
    if (!pattern) {
      throw std::invalid_argument("unknown conflict pattern: " +
                                  entry.at("pattern").get<std::string>());
    }
    rule.pattern = *pattern;
    for (const auto &pair : entry.at("applies_to")) {
      const auto reaction = reaction_from_name(pair.at(0).get<std::string>());
      const auto side = side_from_name(pair.at(1).get<std::string>());
      if (!reaction || !side || !valid_role(*reaction, *side)) {
        throw std::invalid_argument("invalid applies_to role in conflict rules");
      }
      rule.applies_to.emplace_back(*reaction, *side);
    }
    set.rules.push_back(std::move(rule));
  }
  return set;
}

std::string ConflictRuleSet::to_json_text() const {
  ordered_json doc;
  doc["rules"] = ordered_json::array();
  for (const ConflictRule &rule : rules) {
    ordered_json entry;
    entry["name"] = rule.name;
    entry["pattern"] = std::string(conflict_pattern_name(rule.pattern));
    entry["applies_to"] = ordered_json::array();
    for (const auto &[reaction, side] : rule.applies_to) {
      entry["applies_to"].push_back(
          {std::string(reaction_name(reaction)), std::string(side_name(side))});
    }
    doc["rules"].push_back(std::move(entry));
  }
  return doc.dump(2);
}

namespace {

bool has_carbonyl_neighbor(const MolecularGraph &g, int atom_id) {
  for (const Neighbor &nb : g.neighbors(atom_id)) {
    if (g.atom(nb.atom).element != Element::kC) {
      continue;
    }
    for (const Neighbor &nb2 : g.neighbors(nb.atom)) {
      if (g.bond(nb2.bond).order == BondOrder::kDouble &&
          g.atom(nb2.atom).element == Element::kO) {
        return true;
      }
    }
  }
  return false;
}

bool bears_double_bonded_oxygen(const MolecularGraph &g, int atom_id) {
  for (const Neighbor &nb : g.neighbors(atom_id)) {
    if (g.bond(nb.bond).order == BondOrder::kDouble &&
        g.atom(nb.atom).element == Element::kO) {
      return true;
    }
  }
  return false;
}

// Primary/secondary aliphatic amine: uncharged non-aromatic N with >= 1 H,
// no carbonyl neighbor (amides out), and every non-wildcard neighbor a
// non-aromatic carbon (anilines, hydrazines, sulfonamides out). Wildcard
// neighbors are allowed so amines at *other* attachment points still count.
std::vector<std::vector<int>> match_free_amine(const MolecularGraph &g) {
  std::vector<std::vector<int>> sites;
  for (int i = 0; i < g.atom_count(); ++i) {
    const Atom &a = g.atom(i);
    if (a.element != Element::kN || a.aromatic || a.formal_charge != 0 ||
        a.implicit_hydrogens < 1) {
      continue;
    }
    bool ok = true;
    for (const Neighbor &nb : g.neighbors(i)) {
      const Atom &n = g.atom(nb.atom);
      if (n.element == Element::kWildcard) {
        continue;
      }
      if (n.element != Element::kC || n.aromatic ||
          g.bond(nb.bond).order != BondOrder::kSingle) {
        ok = false;
        break;
      }
    }
    if (ok && !has_carbonyl_neighbor(g, i)) {
      sites.push_back({i});
    }
  }
  return sites;
}

std::vector<std::vector<int>> match_carboxylic_acid(const MolecularGraph &g) {
  std::vector<std::vector<int>> sites;
  for (int i = 0; i < g.atom_count(); ++i) {
    const Atom &a = g.atom(i);
    if (a.element != Element::kC || a.aromatic) {
      continue;
    }
    int double_o = -1;
    int hydroxyl_o = -1;
    for (const Neighbor &nb : g.neighbors(i)) {
      const Atom &n = g.atom(nb.atom);
      if (n.element != Element::kO) {
        continue;
      }
      if (g.bond(nb.bond).order == BondOrder::kDouble) {
        double_o = nb.atom;
      } else if (g.bond(nb.bond).order == BondOrder::kSingle &&
                 n.formal_charge == 0 && n.implicit_hydrogens >= 1) {
        hydroxyl_o = nb.atom;
      }
    }
    if (double_o >= 0 && hydroxyl_o >= 0) {
      sites.push_back({i, double_o, hydroxyl_o});
    }
  }
  return sites;
}

std::vector<std::vector<int>> match_aryl_halide(const MolecularGraph &g) {
  std::vector<std::vector<int>> sites;
  for (int i = 0; i < g.atom_count(); ++i) {
    const Element e = g.atom(i).element;
    if (e != Element::kCl && e != Element::kBr && e != Element::kI) {
      continue;
    }
    for (const Neighbor &nb : g.neighbors(i)) {
      if (g.atom(nb.atom).aromatic && g.atom(nb.atom).element == Element::kC) {
        sites.push_back({i, nb.atom});
        break;
      }
    }
  }
  return sites;
}

std::vector<std::vector<int>> match_pattern(ConflictPattern p,
                                            const MolecularGraph &g) {
  switch (p) {
    case ConflictPattern::kFreeAmine:
      return match_free_amine(g);
    case ConflictPattern::kCarboxylicAcid:
      return match_carboxylic_acid(g);
    case ConflictPattern::kArylHalide:
      return match_aryl_halide(g);
  }
  return {};
}

}  // namespace

bool conflict_check(const MolecularGraph &fragment, int wildcard_atom,
                    Reaction reaction, Side side, const ConflictRuleSet &rules) {
  std::set<int> zone = {wildcard_atom};
  for (const Neighbor &nb : fragment.neighbors(wildcard_atom)) {
    zone.insert(nb.atom);
  }
  for (const ConflictRule &rule : rules.rules) {
    const bool applies =
        std::any_of(rule.applies_to.begin(), rule.applies_to.end(),
                    [&](const std::pair<Reaction, Side> &role) {
                      return role.first == reaction && role.second == side;
                    });
    if (!applies) {
      continue;
    }
    for (const std::vector<int> &site : match_pattern(rule.pattern, fragment)) {
      const bool touches_zone =
          std::any_of(site.begin(), site.end(),
                      [&](int atom) { return zone.count(atom) != 0; });
      if (!touches_zone) {
        return true;
      }
    }
  }
  return false;
}

namespace {

// A committed or candidate disconnection. side_a / side_b are the roles of
// bond endpoints a / b.
struct CutRec {
  int bond = -1;
  Reaction reaction = Reaction::kAmide;
  int junction = -1;
  Side side_a = Side::kAcylSide;
  Side side_b = Side::kAcylSide;
};

// Classify one bond against the three coupling patterns.
std::optional<CutRec> classify_bond(const MolecularGraph &g, int bond_id,
                                    const std::vector<bool> &ring_bond,
                                    const std::vector<int> &ranks) {
  const Bond &b = g.bond(bond_id);
  if (b.order != BondOrder::kSingle || ring_bond[static_cast<std::size_t>(bond_id)]) {
    return std::nullopt;
  }
  const Atom &atom_a = g.atom(b.a);
  const Atom &atom_b = g.atom(b.b);

  auto make = [&](Reaction r, Side for_a, Side for_b) {
    CutRec rec;
    rec.bond = bond_id;
    rec.reaction = r;
    rec.side_a = for_a;
    rec.side_b = for_b;
    return rec;
  };

  // Amide: C(=O)-N
  if (atom_a.element == Element::kC && atom_b.element == Element::kN &&
      bears_double_bonded_oxygen(g, b.a)) {
    return make(Reaction::kAmide, Side::kAcylSide, Side::kAmineSide);
  }
  if (atom_b.element == Element::kC && atom_a.element == Element::kN &&
      bears_double_bonded_oxygen(g, b.b)) {
    return make(Reaction::kAmide, Side::kAmineSide, Side::kAcylSide);
  }
  // Suzuki: aromatic C - aromatic C across rings (non-ring single bond between
  // aromatic atoms is necessarily inter-ring). Side A = lower canonical rank.
  if (atom_a.element == Element::kC && atom_a.aromatic &&
      atom_b.element == Element::kC && atom_b.aromatic) {
    if (ranks[static_cast<std::size_t>(b.a)] < ranks[static_cast<std::size_t>(b.b)]) {
      return make(Reaction::kSuzuki, Side::kArylSideA, Side::kArylSideB);
    }
    return make(Reaction::kSuzuki, Side::kArylSideB, Side::kArylSideA);
  }
  // Buchwald: aromatic C - non-amide N
  if (atom_a.element == Element::kC && atom_a.aromatic &&
      atom_b.element == Element::kN && !has_carbonyl_neighbor(g, b.b)) {
    return make(Reaction::kBuchwald, Side::kArylSideA, Side::kAmineSide);
  }
  if (atom_b.element == Element::kC && atom_b.aromatic &&
      atom_a.element == Element::kN && !has_carbonyl_neighbor(g, b.a)) {
    return make(Reaction::kBuchwald, Side::kAmineSide, Side::kArylSideA);
  }
  return std::nullopt;
}

std::vector<CutRec> eligible_cuts(const MolecularGraph &g,
                                  const std::vector<int> &ranks) {
  const std::vector<bool> ring_bond = g.ring_bond_mask();
  std::vector<CutRec> cuts;
  for (int e = 0; e < g.bond_count(); ++e) {
    if (auto rec = classify_bond(g, e, ring_bond, ranks)) {
      cuts.push_back(*rec);
    }
  }
  std::sort(cuts.begin(), cuts.end(), [&](const CutRec &x, const CutRec &y) {
    const Bond &bx = g.bond(x.bond);
    const Bond &by = g.bond(y.bond);
    const auto key = [&](const Bond &b) {
      const int ra = ranks[static_cast<std::size_t>(b.a)];
      const int rb = ranks[static_cast<std::size_t>(b.b)];
      return std::make_pair(std::min(ra, rb), std::max(ra, rb));
    };
    return key(bx) < key(by);
  });
  return cuts;
}

// Atoms reachable from `start` without crossing cut bonds or `extra_cut`.
std::vector<int> component_under(const MolecularGraph &g,
                                 const std::vector<bool> &cut, int extra_cut,
                                 int start) {
  std::vector<bool> seen(static_cast<std::size_t>(g.atom_count()), false);
  std::vector<int> stack = {start};
  std::vector<int> atoms;
  seen[static_cast<std::size_t>(start)] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    atoms.push_back(v);
    for (const Neighbor &nb : g.neighbors(v)) {
      if (nb.bond == extra_cut || cut[static_cast<std::size_t>(nb.bond)]) {
        continue;
      }
      if (!seen[static_cast<std::size_t>(nb.atom)]) {
        seen[static_cast<std::size_t>(nb.atom)] = true;
        stack.push_back(nb.atom);
      }
    }
  }
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

struct Stub {
  int wildcard_local = -1;  // wildcard atom id in the piece graph
  int anchor_original = -1; // original atom the wildcard replaces a bond to
  Reaction reaction = Reaction::kAmide;
  Side side = Side::kAcylSide;
  int junction = -1;  // -1 while still a candidate
};

struct Piece {
  MolecularGraph graph;
  std::vector<Stub> stubs;
  std::vector<int> original_atoms;  // local non-wildcard id -> original id
};

// Piece graph for one component: induced subgraph plus one role-tagged
// wildcard per severed bond.
Piece build_piece(const MolecularGraph &g, const std::vector<int> &atoms,
                  const std::vector<CutRec> &cuts, int extra_index,
                  const CutRec *extra) {
  Piece piece;
  piece.original_atoms = atoms;
  piece.graph = g.induced_subgraph(atoms);
  std::vector<int> local_of(static_cast<std::size_t>(g.atom_count()), -1);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    local_of[static_cast<std::size_t>(atoms[i])] = static_cast<int>(i);
  }
  auto add_stub = [&](const CutRec &rec) {
    const Bond &b = g.bond(rec.bond);
    const bool a_inside = local_of[static_cast<std::size_t>(b.a)] >= 0;
    const bool b_inside = local_of[static_cast<std::size_t>(b.b)] >= 0;
    if (a_inside == b_inside) {
      return;  // bond fully inside or fully outside this piece
    }
    const int anchor = a_inside ? b.a : b.b;
    const Side side = a_inside ? rec.side_a : rec.side_b;
    Atom wildcard;
    wildcard.element = Element::kWildcard;
    wildcard.fixed_hydrogens = true;
    wildcard.map_class = role_class_tag(rec.reaction, side);
    const int w = piece.graph.add_atom(wildcard);
    piece.graph.add_bond(local_of[static_cast<std::size_t>(anchor)], w,
                         BondOrder::kSingle);
    piece.stubs.push_back(Stub{w, anchor, rec.reaction, side, rec.junction});
  };
  for (const CutRec &rec : cuts) {
    add_stub(rec);
  }
  if (extra != nullptr && extra_index >= 0) {
    add_stub(*extra);
  }
  return piece;
}

bool piece_has_conflict(const Piece &piece, const ConflictRuleSet &rules) {
  for (const Stub &stub : piece.stubs) {
    if (conflict_check(piece.graph, stub.wildcard_local, stub.reaction,
                       stub.side, rules)) {
      return true;
    }
  }
  return false;
}

BuildingBlock finish_block(Piece piece) {
  BuildingBlock block;
  block.canonical_form = write_smiles(piece.graph);
  const std::vector<int> ranks = canonical_ranks(piece.graph);
  std::vector<std::size_t> stub_order(piece.stubs.size());
  for (std::size_t i = 0; i < stub_order.size(); ++i) {
    stub_order[i] = i;
  }
  std::sort(stub_order.begin(), stub_order.end(),
            [&](std::size_t x, std::size_t y) {
              return ranks[static_cast<std::size_t>(
                         piece.stubs[x].wildcard_local)] <
                     ranks[static_cast<std::size_t>(
                         piece.stubs[y].wildcard_local)];
            });
  for (std::size_t idx : stub_order) {
    const Stub &stub = piece.stubs[idx];
    block.wildcard_atoms.push_back(stub.wildcard_local);
    block.attachments.push_back(
        AttachmentPoint{stub.reaction, stub.side, stub.junction});
  }
  block.kind =
      block.attachments.size() >= 2 ? BlockKind::kMid : BlockKind::kCap;
  block.graph = std::move(piece.graph);
  return block;
}

// Shared tail for both tokenizers: build pieces from the committed cut set,
// order blocks by a canonical-rank DFS over the junction tree.
TokenizationResult assemble_result(const MolecularGraph &g,
                                   const std::vector<int> &ranks,
                                   const std::vector<bool> &cut_mask,
                                   const std::vector<CutRec> &committed,
                                   Coverage coverage, TokenizerKind used) {
  TokenizationResult result;
  result.coverage = coverage;
  result.tokenizer_used = used;
  for (const CutRec &rec : committed) {
    result.junctions.push_back(Junction{rec.junction, rec.reaction});
  }

  // Components of the fragmented molecule, keyed by their smallest atom id.
  std::vector<int> piece_of_atom(static_cast<std::size_t>(g.atom_count()), -1);
  std::vector<Piece> pieces;
  for (int v = 0; v < g.atom_count(); ++v) {
    if (piece_of_atom[static_cast<std::size_t>(v)] >= 0) {
      continue;
    }
    const std::vector<int> atoms = component_under(g, cut_mask, -1, v);
    const int piece_id = static_cast<int>(pieces.size());
    for (int a : atoms) {
      piece_of_atom[static_cast<std::size_t>(a)] = piece_id;
    }
    pieces.push_back(build_piece(g, atoms, committed, -1, nullptr));
  }

  // DFS over the junction tree from the piece holding canonical rank 0;
  // edges taken in ascending anchor-rank order.
  int root_atom = 0;
  for (int v = 0; v < g.atom_count(); ++v) {
    if (ranks[static_cast<std::size_t>(v)] == 0) {
      root_atom = v;
      break;
    }
  }
  std::vector<std::vector<std::pair<int, int>>> edges(pieces.size());
  for (const CutRec &rec : committed) {
    const Bond &b = g.bond(rec.bond);
    const int pa = piece_of_atom[static_cast<std::size_t>(b.a)];
    const int pb = piece_of_atom[static_cast<std::size_t>(b.b)];
    edges[static_cast<std::size_t>(pa)].push_back(
        {ranks[static_cast<std::size_t>(b.a)], pb});
    edges[static_cast<std::size_t>(pb)].push_back(
        {ranks[static_cast<std::size_t>(b.b)], pa});
  }
  for (auto &adj : edges) {
    std::sort(adj.begin(), adj.end());
  }
  std::vector<bool> visited(pieces.size(), false);
  std::vector<int> order;
  std::vector<int> stack = {piece_of_atom[static_cast<std::size_t>(root_atom)]};
  while (!stack.empty()) {
    const int p = stack.back();
    stack.pop_back();
    if (visited[static_cast<std::size_t>(p)]) {
      continue;
    }
    visited[static_cast<std::size_t>(p)] = true;
    order.push_back(p);
    // push in reverse so the lowest-rank edge is visited first
    const auto &adj = edges[static_cast<std::size_t>(p)];
    for (auto it = adj.rbegin(); it != adj.rend(); ++it) {
      if (!visited[static_cast<std::size_t>(it->second)]) {
        stack.push_back(it->second);
      }
    }
  }
  for (int p : order) {
    result.blocks.push_back(finish_block(std::move(pieces[static_cast<std::size_t>(p)])));
  }
  return result;
}

void require_single_component(const MolecularGraph &g) {
  if (g.component_count() != 1) {
    throw std::invalid_argument("tokenizer requires a single-component molecule");
  }
}

}  // namespace

std::vector<DisconnectableBond> find_disconnectable_bonds(const MolecularGraph &g) {
  require_single_component(g);
  const std::vector<int> ranks = canonical_ranks(g);
  std::vector<DisconnectableBond> out;
  for (const CutRec &rec : eligible_cuts(g, ranks)) {
    out.push_back(DisconnectableBond{rec.bond, rec.reaction});
  }
  return out;
}

TokenizationResult synth_tokenize(const MolecularGraph &g,
                                  const ConflictRuleSet &rules) {
  require_single_component(g);
  const std::vector<int> ranks = canonical_ranks(g);
  const std::vector<CutRec> candidates = eligible_cuts(g, ranks);
  if (candidates.empty()) {
    std::vector<bool> no_cuts(static_cast<std::size_t>(g.bond_count()), false);
    return assemble_result(g, ranks, no_cuts, {}, Coverage::kComplete,
                           TokenizerKind::kSingleBlock);
  }
  std::vector<bool> cut_mask(static_cast<std::size_t>(g.bond_count()), false);
  std::vector<CutRec> committed;
  int rejected = 0;
  int next_junction = 0;
  for (CutRec rec : candidates) {
    const Bond &b = g.bond(rec.bond);
    rec.junction = next_junction;
    const Piece side_a = build_piece(
        g, component_under(g, cut_mask, rec.bond, b.a), committed, rec.bond, &rec);
    const Piece side_b = build_piece(
        g, component_under(g, cut_mask, rec.bond, b.b), committed, rec.bond, &rec);
    if (piece_has_conflict(side_a, rules) || piece_has_conflict(side_b, rules)) {
      ++rejected;
      continue;
    }
    cut_mask[static_cast<std::size_t>(rec.bond)] = true;
    committed.push_back(rec);
    ++next_junction;
  }
  const Coverage coverage =
      rejected == 0 ? Coverage::kComplete : Coverage::kPartial;
  return assemble_result(g, ranks, cut_mask, committed, coverage,
                         TokenizerKind::kSynthesisGuaranteed);
}

TokenizationResult rule_tokenize(const MolecularGraph &g, int min_block_size) {
  require_single_component(g);
  if (min_block_size < 1) {
    throw std::invalid_argument("min_block_size must be >= 1");
  }
  const std::vector<int> ranks = canonical_ranks(g);
  const std::vector<CutRec> candidates = eligible_cuts(g, ranks);
  std::vector<bool> cut_mask(static_cast<std::size_t>(g.bond_count()), false);
  std::vector<CutRec> committed;
  int next_junction = 0;
  auto heavy_atoms = [&](const std::vector<int> &atoms) {
    int n = 0;
    for (int a : atoms) {
      if (g.atom(a).element != Element::kWildcard) {
        ++n;
      }
    }
    return n;
  };
  for (CutRec rec : candidates) {
    const Bond &b = g.bond(rec.bond);
    const std::vector<int> side_a = component_under(g, cut_mask, rec.bond, b.a);
    const std::vector<int> side_b = component_under(g, cut_mask, rec.bond, b.b);
    if (heavy_atoms(side_a) < min_block_size ||
        heavy_atoms(side_b) < min_block_size) {
      continue;
    }
    rec.junction = next_junction++;
    cut_mask[static_cast<std::size_t>(rec.bond)] = true;
    committed.push_back(rec);
  }
  return assemble_result(g, ranks, cut_mask, committed, Coverage::kComplete,
                         TokenizerKind::kRuleBased);
}

TokenizationResult tokenize(const MolecularGraph &g, const ConflictRuleSet &rules,
                            int min_block_size) {
  TokenizationResult synth = synth_tokenize(g, rules);
  if (synth.coverage == Coverage::kComplete) {
    return synth;
  }
  return rule_tokenize(g, min_block_size);
}

MolecularGraph reassemble(const std::vector<BuildingBlock> &blocks,
                          const std::vector<Junction> &junctions) {
  std::map<int, Reaction> junction_reaction;
  for (const Junction &j : junctions) {
    if (!junction_reaction.emplace(j.id, j.reaction).second) {
      throw ReassemblyError(ReassemblyErrorCode::kDanglingJunction,
                            "duplicate junction id " + std::to_string(j.id));
    }
  }
  struct Endpoint {
    int block = -1;
    int attachment = -1;
  };
  std::map<int, std::vector<Endpoint>> endpoints;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const BuildingBlock &block = blocks[bi];
    if (block.wildcard_atoms.size() != block.attachments.size()) {
      throw std::invalid_argument("block wildcard/attachment lists disagree");
    }
    for (std::size_t ai = 0; ai < block.attachments.size(); ++ai) {
      const AttachmentPoint &ap = block.attachments[ai];
      const auto it = junction_reaction.find(ap.junction_id);
      if (it == junction_reaction.end()) {
        throw ReassemblyError(
            ReassemblyErrorCode::kDanglingJunction,
            "attachment references unknown junction " +
                std::to_string(ap.junction_id));
      }
      if (ap.reaction != it->second) {
        throw ReassemblyError(ReassemblyErrorCode::kRoleMismatch,
                              "attachment reaction disagrees with junction " +
                                  std::to_string(ap.junction_id));
      }
      endpoints[ap.junction_id].push_back(
          Endpoint{static_cast<int>(bi), static_cast<int>(ai)});
    }
  }
  for (const auto &[id, eps] : endpoints) {
    if (eps.size() != 2) {
      throw ReassemblyError(ReassemblyErrorCode::kDanglingJunction,
                            "junction " + std::to_string(id) + " has " +
                                std::to_string(eps.size()) +
                                " attachment(s), expected 2");
    }
  }
  for (const Junction &j : junctions) {
    const auto it = endpoints.find(j.id);
    if (it == endpoints.end()) {
      throw ReassemblyError(ReassemblyErrorCode::kDanglingJunction,
                            "junction " + std::to_string(j.id) +
                                " matched by no attachment");
    }
    const AttachmentPoint &pa =
        blocks[static_cast<std::size_t>(it->second[0].block)]
            .attachments[static_cast<std::size_t>(it->second[0].attachment)];
    const AttachmentPoint &pb =
        blocks[static_cast<std::size_t>(it->second[1].block)]
            .attachments[static_cast<std::size_t>(it->second[1].attachment)];
    if (pb.side != complementary_side(j.reaction, pa.side)) {
      throw ReassemblyError(
          ReassemblyErrorCode::kRoleMismatch,
          "junction " + std::to_string(j.id) + " joins " +
              std::string(side_name(pa.side)) + " with " +
              std::string(side_name(pb.side)));
    }
  }

  // Disjoint union of block graphs, skipping wildcards; then fuse junctions.
  MolecularGraph out;
  std::vector<std::vector<int>> global_of(blocks.size());
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const MolecularGraph &bg = blocks[bi].graph;
    global_of[bi].assign(static_cast<std::size_t>(bg.atom_count()), -1);
    for (int v = 0; v < bg.atom_count(); ++v) {
      if (bg.atom(v).element == Element::kWildcard) {
        continue;
      }
      Atom plain = bg.atom(v);
      plain.map_class = 0;
      global_of[bi][static_cast<std::size_t>(v)] = out.add_atom(plain);
    }
    for (const Bond &b : bg.bonds()) {
      const int ga = global_of[bi][static_cast<std::size_t>(b.a)];
      const int gb = global_of[bi][static_cast<std::size_t>(b.b)];
      if (ga >= 0 && gb >= 0) {
        out.add_bond(ga, gb, b.order);
      }
    }
  }
  for (const auto &[id, eps] : endpoints) {
    int anchors[2];
    BondOrder orders[2];
    for (int k = 0; k < 2; ++k) {
      const BuildingBlock &block = blocks[static_cast<std::size_t>(eps[static_cast<std::size_t>(k)].block)];
      const int w = block.wildcard_atoms[static_cast<std::size_t>(
          eps[static_cast<std::size_t>(k)].attachment)];
      if (block.graph.degree(w) != 1) {
        throw std::invalid_argument("attachment wildcard must be terminal");
      }
      const Neighbor nb = block.graph.neighbors(w)[0];
      anchors[k] = global_of[static_cast<std::size_t>(
          eps[static_cast<std::size_t>(k)].block)][static_cast<std::size_t>(nb.atom)];
      orders[k] = block.graph.bond(nb.bond).order;
    }
    if (orders[0] != orders[1]) {
      throw ReassemblyError(ReassemblyErrorCode::kRoleMismatch,
                            "junction " + std::to_string(id) +
                                " joins bonds of different orders");
    }
    out.add_bond(anchors[0], anchors[1], orders[0]);
  }
  out.recompute_implicit_hydrogens();
  out.validate_valences();
  if (out.component_count() != 1) {
    throw ReassemblyError(ReassemblyErrorCode::kDisconnected,
                          "junction graph does not connect all blocks");
  }
  return out;
}

BuildingBlock block_from_canonical(const std::string &canonical_form,
                                   const std::vector<AttachmentPoint> &attachments) {
  BuildingBlock block;
  block.graph = parse_smiles(canonical_form);
  std::vector<int> wildcards;
  for (int v = 0; v < block.graph.atom_count(); ++v) {
    if (block.graph.atom(v).element == Element::kWildcard) {
      wildcards.push_back(v);
    }
  }
  if (wildcards.size() != attachments.size()) {
    throw std::invalid_argument("attachment count does not match wildcards in " +
                                canonical_form);
  }
  const std::vector<int> ranks = canonical_ranks(block.graph);
  std::sort(wildcards.begin(), wildcards.end(), [&](int x, int y) {
    return ranks[static_cast<std::size_t>(x)] < ranks[static_cast<std::size_t>(y)];
  });
  for (std::size_t i = 0; i < wildcards.size(); ++i) {
    const AttachmentPoint &ap = attachments[i];
    if (!valid_role(ap.reaction, ap.side)) {
      throw std::invalid_argument("invalid (reaction, side) pair");
    }
    const int tag = block.graph.atom(wildcards[i]).map_class;
    if (tag != role_class_tag(ap.reaction, ap.side)) {
      throw std::invalid_argument("role tag mismatch in " + canonical_form);
    }
  }
  block.wildcard_atoms = wildcards;
  block.attachments = attachments;
  block.canonical_form = write_smiles(block.graph);
  block.kind =
      block.attachments.size() >= 2 ? BlockKind::kMid : BlockKind::kCap;
  return block;
}

std::string tokenization_to_json(const TokenizationResult &result,
                                 const std::string &smiles) {
  ordered_json doc;
  doc["smiles"] = smiles;
  doc["blocks"] = ordered_json::array();
  for (const BuildingBlock &block : result.blocks) {
    ordered_json jb;
    jb["canonical_form"] = block.canonical_form;
    jb["kind"] = block.kind == BlockKind::kMid ? "Mid" : "Cap";
    jb["attachments"] = ordered_json::array();
    for (const AttachmentPoint &ap : block.attachments) {
      ordered_json ja;
      ja["junction"] = ap.junction_id;
      ja["reaction"] = std::string(reaction_name(ap.reaction));
      ja["side"] = std::string(side_name(ap.side));
      jb["attachments"].push_back(std::move(ja));
    }
    doc["blocks"].push_back(std::move(jb));
  }
  doc["junctions"] = ordered_json::array();
  for (const Junction &j : result.junctions) {
    ordered_json jj;
    jj["id"] = j.id;
    jj["reaction"] = std::string(reaction_name(j.reaction));
    doc["junctions"].push_back(std::move(jj));
  }
  doc["coverage"] = std::string(coverage_name(result.coverage));
  doc["tokenizer"] = std::string(tokenizer_kind_name(result.tokenizer_used));
  return doc.dump();
}

TokenizationResult tokenization_from_json(const std::string &json_text,
                                          std::string *smiles_out) {
  const ordered_json doc = ordered_json::parse(json_text);
  if (smiles_out != nullptr) {
    *smiles_out = doc.at("smiles").get<std::string>();
  }
  TokenizationResult result;
  for (const auto &jb : doc.at("blocks")) {
    std::vector<AttachmentPoint> attachments;
    for (const auto &ja : jb.at("attachments")) {
      AttachmentPoint ap;
      const auto reaction = reaction_from_name(ja.at("reaction").get<std::string>());
      const auto side = side_from_name(ja.at("side").get<std::string>());
      if (!reaction || !side) {
        throw std::invalid_argument("unknown reaction/side in record");
      }
      ap.reaction = *reaction;
      ap.side = *side;
      ap.junction_id = ja.at("junction").get<int>();
      attachments.push_back(ap);
    }
    BuildingBlock block = block_from_canonical(
        jb.at("canonical_form").get<std::string>(), attachments);
    const std::string kind = jb.at("kind").get<std::string>();
    if ((kind == "Mid") != (block.kind == BlockKind::kMid)) {
      throw std::invalid_argument("block kind does not match attachment count");
    }
    result.blocks.push_back(std::move(block));
  }
  for (const auto &jj : doc.at("junctions")) {
    Junction j;
    j.id = jj.at("id").get<int>();
    const auto reaction = reaction_from_name(jj.at("reaction").get<std::string>());
    if (!reaction) {
      throw std::invalid_argument("unknown junction reaction");
    }
    j.reaction = *reaction;
    result.junctions.push_back(j);
  }
  const auto coverage = coverage_from_name(doc.at("coverage").get<std::string>());
  const auto used = tokenizer_kind_from_name(doc.at("tokenizer").get<std::string>());
  if (!coverage || !used) {
    throw std::invalid_argument("unknown coverage/tokenizer tag");
  }
  result.coverage = *coverage;
  result.tokenizer_used = *used;
  return result;
}

}  // namespace blockmol
