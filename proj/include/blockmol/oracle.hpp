//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Property scoring against a deterministic block-contribution surrogate:
// a molecule's score is a logistic over the summed contributions of its
// building blocks. Ground-truth property records load from CSV.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "blockmol/tokenizer.hpp"

namespace blockmol {

enum class PropertyKind { kNominal, kNumerical };

const char *property_kind_name(PropertyKind kind);

struct PropertyRecord {
  std::string molecule;  // canonical form
  std::string property;  // upper-cased
  double value = 0.0;    // 0/1 for nominal records
  PropertyKind kind = PropertyKind::kNominal;
};

struct PropertyContribution {
  std::map<std::string, double> contributions;  // canonical block form -> weight
  double bias = 0.0;
  double threshold = 0.5;  // strictly inside (0, 1)
};

class ContributionTable {
 public:
  void set(const std::string &property, PropertyContribution contribution);
  bool has(const std::string &property) const;
  const PropertyContribution &at(const std::string &property) const;
  std::vector<std::string> property_names() const;

  static ContributionTable from_json_text(const std::string &text);
  std::string to_json_text() const;

 private:
  std::map<std::string, PropertyContribution> properties_;
};

// Normalizes a property name to its canonical upper-case spelling.
std::string normalize_property_name(const std::string &name);

// 1 / (1 + exp(-x)), overflow-safe on both tails.
double logistic(double x);

// Tokenizes the molecule (rule-based fallback keeps coverage complete)
// and scores logistic(bias + sum of block contributions). Blocks missing
// from the table contribute 0.
double predict(const MolecularGraph &g, const std::string &property,
               const ContributionTable &table, const ConflictRuleSet &rules);

// Positive iff score >= threshold.
bool classify(double score, double threshold);

// Threshold with maximal F1 over candidates at each distinct score and
// each midpoint between consecutive distinct scores; F1 ties break
// toward the lower threshold. Requires both classes present.
double fit_threshold(const std::vector<double> &scores,
                     const std::vector<bool> &labels);

struct RecordLoadReport {
  std::vector<std::string> diagnostics;  // one "line N: ..." per bad line
};

// CSV with header `smiles,property,value`. Bad lines are skipped and
// reported; a missing or wrong header throws.
std::vector<PropertyRecord> load_records(const std::string &csv_text,
                                         RecordLoadReport *report = nullptr);

}  // namespace blockmol
