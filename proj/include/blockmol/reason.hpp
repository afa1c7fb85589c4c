//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Block-level molecule refinement: exhaustively enumerate single-block
// edits (replace / add / remove), score them with the contribution-table
// oracle, and greedily accept strict improvements of the weighted
// objective until nothing improves or the iteration budget runs out.
// Plus the modification-frequency tally over finished traces.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockmol/oracle.hpp"
#include "blockmol/vocab.hpp"

namespace blockmol {

enum class Direction : std::uint8_t { kMaximize, kMinimize };

std::string_view direction_name(Direction direction);
std::optional<Direction> direction_from_name(std::string_view name);

struct Objective {
  std::string property;
  Direction direction = Direction::kMaximize;
  double weight = 1.0;  // finite and positive
};

enum class EditKind : std::uint8_t { kReplaceBlock, kAddBlock, kRemoveBlock };

std::string_view edit_kind_name(EditKind kind);

struct CandidateEdit {
  EditKind kind = EditKind::kReplaceBlock;
  // Block index for Replace/Remove; junction id for Add.
  int position = -1;
  // Present for Replace/Add; junction ids already assigned.
  std::optional<BuildingBlock> new_block;
};

inline constexpr double kDefaultAcceptEpsilon = 1e-9;

// Every legal single-block edit of the tokenization against the
// vocabulary, ordered by (kind, position, vocabulary id):
//  - ReplaceBlock for vocabulary entries whose role multiset matches the
//    replaced block (identical forms skipped),
//  - AddBlock splicing a two-attachment Mid with complementary roles of
//    the junction's reaction into that junction,
//  - RemoveBlock for two-attachment Mids whose own roles are
//    complementary, so the neighbors fuse into a valid junction.
// Throws std::invalid_argument unless coverage is Complete.
std::vector<CandidateEdit> enumerate_candidates(
    const TokenizationResult &current, const Vocabulary &vocab);

// Applies the edit to the tokenization and reassembles the molecule.
MolecularGraph apply_edit(const TokenizationResult &current,
                          const CandidateEdit &edit);

// Weighted signed score change: sum of weight * (after - before) for
// maximized objectives and weight * (before - after) for minimized ones.
double aggregate_delta(const std::vector<Objective> &objectives,
                       const std::vector<double> &before,
                       const std::vector<double> &after);

struct StepResult {
  std::optional<CandidateEdit> edit;  // empty: nothing clears the epsilon
  MolecularGraph result;              // molecule after the edit, if any
  std::vector<double> scores_before;  // aligned with the objective list
  std::vector<double> scores_after;
  double aggregate = 0.0;
};

// Scores every candidate and returns the one with the largest aggregate
// improvement, or none when the best improvement is within epsilon.
// Candidates that fail to assemble or score are skipped with a
// diagnostic. Ties keep the earliest candidate in enumeration order.
StepResult refine_step(const MolecularGraph &molecule,
                       const std::vector<Objective> &objectives,
                       const ContributionTable &oracle,
                       const Vocabulary &vocab, const ConflictRuleSet &rules,
                       double epsilon = kDefaultAcceptEpsilon,
                       std::vector<std::string> *diagnostics = nullptr);

enum class StopReason : std::uint8_t { kNoImprovingCandidate, kMaxIterations };

std::string_view stop_reason_name(StopReason reason);

struct TraceStep {
  EditKind kind = EditKind::kReplaceBlock;
  int position = -1;
  std::string old_form;  // replaced/removed block, empty for Add
  std::string new_form;  // inserted block, empty for Remove
  std::string molecule;  // canonical form after the step
  std::vector<double> scores_before;
  std::vector<double> scores_after;
  double aggregate = 0.0;
  bool accepted = true;
};

struct RefinementTrace {
  std::string initial;
  std::vector<Objective> objectives;
  std::vector<TraceStep> steps;
  std::string final;
  StopReason stop_reason = StopReason::kNoImprovingCandidate;
};

// Greedy loop of refine_step; requires max_iter >= 1.
RefinementTrace refine(const MolecularGraph &molecule,
                       const std::vector<Objective> &objectives,
                       const ContributionTable &oracle,
                       const Vocabulary &vocab, const ConflictRuleSet &rules,
                       int max_iter, double epsilon = kDefaultAcceptEpsilon,
                       std::vector<std::string> *diagnostics = nullptr);

// One round per objective set, each starting from the previous final.
std::vector<RefinementTrace> refine_sequential(
    const MolecularGraph &molecule,
    const std::vector<std::vector<Objective>> &rounds,
    const ContributionTable &oracle, const Vocabulary &vocab,
    const ConflictRuleSet &rules, int max_iter_per_round,
    double epsilon = kDefaultAcceptEpsilon,
    std::vector<std::string> *diagnostics = nullptr);

std::string trace_to_json_text(const RefinementTrace &trace);
RefinementTrace trace_from_json_text(const std::string &text);

struct ModificationCount {
  std::string old_form;
  std::string new_form;
  std::uint64_t count = 0;
};

// Accepted ReplaceBlock edits tallied by (old form, new form),
// descending count, ties lexicographic by (old, new).
std::vector<ModificationCount> modification_frequencies(
    const std::vector<RefinementTrace> &traces);

// "old<TAB>new<TAB>count" lines in ranked order, with a header row.
std::string modification_table_tsv(
    const std::vector<ModificationCount> &counts);

}  // namespace blockmol
