//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BLOCKMOL_VOCAB_HPP_
#define BLOCKMOL_VOCAB_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blockmol/tokenizer.hpp"

namespace blockmol {

/// Frequency-ranked building-block vocabulary with separate cap/mid budgets.
class Vocabulary {
 public:
  struct Entry {
    int id = -1;
    std::string canonical_form;
    BlockKind kind = BlockKind::kCap;
    std::uint64_t frequency = 0;
    std::optional<std::vector<double>> embedding;
  };

  Vocabulary() = default;

  int size() const { return static_cast<int>(entries_.size()); }
  const Entry &by_id(int id) const;
  /// nullptr when the form is out of vocabulary.
  const Entry *find(const std::string &canonical_form) const;
  const std::vector<Entry> &entries() const { return entries_; }

  int cap_budget() const { return cap_budget_; }
  int mid_budget() const { return mid_budget_; }
  std::uint64_t corpus_hash() const { return corpus_hash_; }

  void set_embedding(int id, std::vector<double> embedding);

  /// Header line plus one record per entry; byte-deterministic.
  std::string to_jsonl() const;
  static Vocabulary from_jsonl(const std::string &text);

  /// Multi-line human-readable frequency report.
  std::string stats_report() const;

 private:
  friend class VocabBuilder;
  std::vector<Entry> entries_;                  // dense by id
  std::map<std::string, int> id_of_form_;
  int cap_budget_ = 0;
  int mid_budget_ = 0;
  std::uint64_t corpus_hash_ = 0;
};

/// Associative corpus counter: shards may be counted separately and merged in
/// any order without changing the built vocabulary.
class VocabBuilder {
 public:
  void add_result(const TokenizationResult &result);
  void add_count(const std::string &canonical_form, BlockKind kind,
                 std::uint64_t count);
  void merge(const VocabBuilder &other);

  /// Top cap_budget caps and mid_budget mids by (frequency desc, form asc);
  /// ids assigned over the union in the same order.
  Vocabulary build(int cap_budget, int mid_budget) const;

 private:
  std::map<std::string, std::pair<BlockKind, std::uint64_t>> counts_;
};

struct EncodeOutcome {
  std::vector<int> ids;              // aligned with the result's block order
  std::vector<std::string> oov;      // canonical forms missing from the vocab
  bool in_vocabulary() const { return oov.empty(); }
};

/// Block-id sequence for a Complete tokenization; unknown blocks land in the
/// OOV report (id -1 at their position) instead of raising.
EncodeOutcome encode(const TokenizationResult &result, const Vocabulary &vocab);

/// Junction wiring needed to invert encode: the junction list plus, per block,
/// the junction id of each attachment in canonical wildcard order.
struct JunctionPlan {
  std::vector<Junction> junctions;
  std::vector<std::vector<int>> assignments;
};

JunctionPlan junction_plan_of(const TokenizationResult &result);

/// Look up blocks by id, wire them per the plan, reassemble. Roles come from
/// the role tags embedded in the stored canonical forms.
MolecularGraph decode(const std::vector<int> &ids, const JunctionPlan &plan,
                      const Vocabulary &vocab);

}  // namespace blockmol

#endif  // BLOCKMOL_VOCAB_HPP_
