//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BLOCKMOL_TOKENIZER_HPP_
#define BLOCKMOL_TOKENIZER_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blockmol/molgraph.hpp"

namespace blockmol {

enum class Reaction : std::uint8_t { kAmide, kSuzuki, kBuchwald };
enum class Side : std::uint8_t { kAcylSide, kAmineSide, kArylSideA, kArylSideB };

std::string_view reaction_name(Reaction r);
std::string_view side_name(Side s);
std::optional<Reaction> reaction_from_name(std::string_view name);
std::optional<Side> side_from_name(std::string_view name);

/// The partner role across a junction of the given reaction.
Side complementary_side(Reaction r, Side s);
/// True iff (r, s) is one of the six valid role pairs.
bool valid_role(Reaction r, Side s);

/// Wildcard atom-map tag encoding a (reaction, side) role; stable across the
/// serialization format. Tags run 1..6.
int role_class_tag(Reaction r, Side s);
std::optional<std::pair<Reaction, Side>> role_from_tag(int tag);

struct AttachmentPoint {
  Reaction reaction = Reaction::kAmide;
  Side side = Side::kAcylSide;
  int junction_id = -1;
};

enum class BlockKind : std::uint8_t { kCap, kMid };

struct BuildingBlock {
  MolecularGraph graph;  // wildcard attachment atoms carry role tags
  /// Wildcard atom ids in canonical-rank order; attachments aligned to it.
  std::vector<int> wildcard_atoms;
  std::vector<AttachmentPoint> attachments;
  std::string canonical_form;
  BlockKind kind = BlockKind::kCap;
};

struct Junction {
  int id = -1;
  Reaction reaction = Reaction::kAmide;
};

enum class Coverage : std::uint8_t { kComplete, kPartial, kUntokenized };
enum class TokenizerKind : std::uint8_t {
  kSynthesisGuaranteed,
  kRuleBased,
  kSingleBlock,
};

std::string_view coverage_name(Coverage c);
std::string_view tokenizer_kind_name(TokenizerKind k);
std::optional<Coverage> coverage_from_name(std::string_view name);
std::optional<TokenizerKind> tokenizer_kind_from_name(std::string_view name);

struct TokenizationResult {
  std::vector<BuildingBlock> blocks;
  std::vector<Junction> junctions;
  Coverage coverage = Coverage::kUntokenized;
  TokenizerKind tokenizer_used = TokenizerKind::kSingleBlock;
};

/// Named substructure matchers for competing-reactivity checks. A closed set:
/// patterns are code, which rule applies to which role is configuration.
enum class ConflictPattern : std::uint8_t {
  kFreeAmine,       // primary/secondary aliphatic amine
  kCarboxylicAcid,  // C(=O)OH
  kArylHalide,      // Cl/Br/I on an aromatic carbon
};

std::string_view conflict_pattern_name(ConflictPattern p);
std::optional<ConflictPattern> conflict_pattern_from_name(std::string_view name);

struct ConflictRule {
  std::string name;
  ConflictPattern pattern = ConflictPattern::kFreeAmine;
  std::vector<std::pair<Reaction, Side>> applies_to;
};

struct ConflictRuleSet {
  std::vector<ConflictRule> rules;

  static ConflictRuleSet default_set();
  /// Parses {"rules":[{"name","pattern","applies_to":[["Amide","AmineSide"],..]}]}.
  static ConflictRuleSet from_json_text(const std::string &text);
  std::string to_json_text() const;
};

struct DisconnectableBond {
  int bond = -1;
  Reaction reaction = Reaction::kAmide;
};

/// Every bond that one of the three couplings could have formed: a non-ring
/// single bond matching Amide (C(=O)-N), Suzuki (aromatic C - aromatic C), or
/// Buchwald (aromatic C - non-amide N). Ordered by canonical bond rank.
std::vector<DisconnectableBond> find_disconnectable_bonds(const MolecularGraph &g);

/// True (= conflict) iff a rule configured for the attachment's role matches
/// the fragment anywhere outside the attachment site (the wildcard atom and
/// the atom it is bonded to).
bool conflict_check(const MolecularGraph &fragment, int wildcard_atom,
                    Reaction reaction, Side side, const ConflictRuleSet &rules);

/// Greedy single pass over the disconnectable bonds in canonical order; each
/// cut is committed only if every attachment on both resulting pieces passes
/// the conflict rules. Any vetoed cut downgrades coverage to Partial.
TokenizationResult synth_tokenize(const MolecularGraph &g,
                                  const ConflictRuleSet &rules);

/// Same bond classes, no conflict rules; a cut is skipped iff a resulting
/// piece would have fewer than min_block_size heavy atoms.
TokenizationResult rule_tokenize(const MolecularGraph &g, int min_block_size);

inline constexpr int kDefaultMinBlockSize = 3;

/// Pipeline entry: synthesis-guaranteed pass, falling back to the rule-based
/// tokenizer when coverage is not Complete.
TokenizationResult tokenize(const MolecularGraph &g, const ConflictRuleSet &rules,
                            int min_block_size = kDefaultMinBlockSize);

enum class ReassemblyErrorCode {
  kDanglingJunction,
  kRoleMismatch,
  kDisconnected,
};

class ReassemblyError : public std::runtime_error {
 public:
  ReassemblyError(ReassemblyErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ReassemblyErrorCode code() const { return code_; }

 private:
  ReassemblyErrorCode code_;
};

/// Fuse junction pairs: both wildcards are deleted and their anchor atoms
/// bonded with the order the disconnection removed (single for all three
/// couplings). Throws ReassemblyError on dangling ids, role mismatches, or a
/// disconnected junction graph.
MolecularGraph reassemble(const std::vector<BuildingBlock> &blocks,
                          const std::vector<Junction> &junctions);

/// Rebuild a block from its serialized canonical form plus role/junction
/// annotations (attachments listed in canonical wildcard order). Throws
/// std::invalid_argument if annotations disagree with the embedded role tags.
BuildingBlock block_from_canonical(const std::string &canonical_form,
                                   const std::vector<AttachmentPoint> &attachments);

/// JSONL record payload for one molecule.
std::string tokenization_to_json(const TokenizationResult &result,
                                 const std::string &smiles);
/// Inverse of tokenization_to_json; `smiles_out` receives the stored source
/// string when non-null.
TokenizationResult tokenization_from_json(const std::string &json_text,
                                          std::string *smiles_out = nullptr);

}  // namespace blockmol

#endif  // BLOCKMOL_TOKENIZER_HPP_
