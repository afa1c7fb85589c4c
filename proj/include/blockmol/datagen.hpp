//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Instruction-data generation: mines activity-cliff molecule pairs from
// property records and renders records/pairs into prompt-response
// examples whose molecules appear as inline block sequences.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockmol/oracle.hpp"
#include "blockmol/scaffold.hpp"
#include "blockmol/vocab.hpp"

namespace blockmol {

enum class CliffRelation : std::uint8_t {
  kSameScaffoldOppositeLabel,
  kSameScaffoldDeltaGE1Sigma,
  kDiffScaffoldSameProperty,
};

std::string_view cliff_relation_name(CliffRelation relation);
std::optional<CliffRelation> cliff_relation_from_name(std::string_view name);

struct ActivityCliffPair {
  std::string mol_a;  // canonical; the worse / first molecule
  std::string mol_b;  // canonical; the better / second molecule
  std::string property;
  CliffRelation relation = CliffRelation::kSameScaffoldOppositeLabel;
  double delta = 0.0;  // value_b - value_a for numerical pairs
};

struct CliffMiningOptions {
  // Ring-free molecules share the empty scaffold; pairing them is noise
  // for scaffold-centric tasks, so it is off by default.
  bool include_empty_scaffold = false;
  // Per-molecule cap on emitted different-scaffold pairs.
  int fan_out_cap = 5;
};

// Population standard deviation (the n-denominator variant).
double population_sigma(const std::vector<double> &values);

// Same-scaffold pairs for one property. Nominal records pair on opposite
// labels (mol_a negative, mol_b positive); numerical records pair when
// the value gap reaches one population sigma of the deduplicated record
// set (mol_a lower). Duplicated molecules keep their first record.
// Output sorted by (mol_a, mol_b).
std::vector<ActivityCliffPair> mine_cliffs_same_scaffold(
    const std::vector<PropertyRecord> &records,
    const CliffMiningOptions &options = {});

// Positive-positive pairs across distinct scaffolds, nominal records
// only, greedily capped per molecule in lexicographic pair order.
std::vector<ActivityCliffPair> mine_pairs_diff_scaffold_same_property(
    const std::vector<PropertyRecord> &records,
    const CliffMiningOptions &options = {});

std::string cliffs_to_jsonl(const std::vector<ActivityCliffPair> &pairs);
std::vector<ActivityCliffPair> cliffs_from_jsonl(const std::string &text);

enum class TaskKind : std::uint8_t {
  kClassification,
  kRegression,
  kPropertyToMolecule,
  kMultiPropertyToMolecule,
  kScaffoldPropertyToMolecule,
  kMoleculeGeneration,
  kPosNegSameScaffold,
  kPosPosDiffScaffold,
};

inline constexpr int kTaskKindCount = 8;

std::string_view task_name(TaskKind task);
std::optional<TaskKind> task_from_name(std::string_view name);

struct InstructionExample {
  TaskKind task = TaskKind::kClassification;
  std::string prompt;
  std::string response;
  std::string source;
  std::uint64_t seed = 0;
  // Every block form appearing inside the example's molecule segments;
  // this is what vocabulary filtering checks.
  std::vector<std::string> blocks;
};

// Question and answer templates per task, with {placeholder} slots.
class TemplateSet {
 public:
  void set(TaskKind task, std::vector<std::string> questions,
           std::vector<std::string> answers);
  bool has(TaskKind task) const;
  const std::vector<std::string> &questions(TaskKind task) const;
  const std::vector<std::string> &answers(TaskKind task) const;

  static TemplateSet from_json_text(const std::string &text);
  std::string to_json_text() const;
  // The inventory shipped with the repo; covers every task.
  static TemplateSet builtin_demo();

 private:
  struct Entry {
    std::vector<std::string> questions;
    std::vector<std::string> answers;
  };
  std::vector<std::optional<Entry>> entries_ =
      std::vector<std::optional<Entry>>(kTaskKindCount);
};

struct DatagenReport {
  std::vector<std::string> diagnostics;
};

// "[MOL]form form ...[/MOL]" with the molecule's block forms in block
// order; the forms are also appended to blocks_out when given.
std::string molecule_segment(const MolecularGraph &g,
                             const ConflictRuleSet &rules,
                             std::vector<std::string> *blocks_out = nullptr);

// One example per usable input item, in input order; question/answer
// templates drawn from a generator seeded once with `seed`. Items a task
// cannot use (wrong record kind, empty scaffold, unparseable molecule)
// are skipped with a diagnostic.
std::vector<InstructionExample> gen_from_records(
    TaskKind task, const std::vector<PropertyRecord> &records,
    const TemplateSet &templates, const ConflictRuleSet &rules,
    std::uint64_t seed, const std::string &source = "",
    DatagenReport *report = nullptr);

// Pair tasks: kPosNegSameScaffold and kPosPosDiffScaffold.
std::vector<InstructionExample> gen_from_cliffs(
    TaskKind task, const std::vector<ActivityCliffPair> &pairs,
    const TemplateSet &templates, const ConflictRuleSet &rules,
    std::uint64_t seed, const std::string &source = "",
    DatagenReport *report = nullptr);

// Keeps examples whose every block form is in the vocabulary.
std::vector<InstructionExample> filter_by_vocab(
    const std::vector<InstructionExample> &examples, const Vocabulary &vocab);

std::string examples_to_jsonl(const std::vector<InstructionExample> &examples);
std::vector<InstructionExample> examples_from_jsonl(const std::string &text);

// Labels molecules with the surrogate oracle: nominal records whose
// label applies the property's own threshold to the predicted score.
std::vector<PropertyRecord> oracle_label_records(
    const std::vector<std::string> &molecules, const std::string &property,
    const ContributionTable &table, const ConflictRuleSet &rules);

}  // namespace blockmol
