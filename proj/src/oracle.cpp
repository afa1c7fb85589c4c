//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "blockmol/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace blockmol {

namespace {

void require(bool ok, const std::string &message) {
  if (!ok) {
    throw std::invalid_argument(message);
  }
}

void check_contribution(const std::string &property,
                        const PropertyContribution &c) {
  require(std::isfinite(c.bias), "property " + property + ": bias not finite");
  require(c.threshold > 0.0 && c.threshold < 1.0,
          "property " + property + ": threshold must lie inside (0, 1)");
  for (const auto &[form, weight] : c.contributions) {
    require(std::isfinite(weight),
            "property " + property + ": contribution for " + form +
                " not finite");
  }
}

std::string trim(const std::string &s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return s.substr(b, e - b);
}

}  // namespace

const char *property_kind_name(PropertyKind kind) {
  return kind == PropertyKind::kNominal ? "nominal" : "numerical";
}

std::string normalize_property_name(const std::string &name) {
  std::string out = trim(name);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return out;
}

void ContributionTable::set(const std::string &property,
                            PropertyContribution contribution) {
  const std::string key = normalize_property_name(property);
  check_contribution(key, contribution);
  properties_[key] = std::move(contribution);
}

bool ContributionTable::has(const std::string &property) const {
  return properties_.count(normalize_property_name(property)) > 0;
}

const PropertyContribution &ContributionTable::at(
    const std::string &property) const {
  const auto it = properties_.find(normalize_property_name(property));
  if (it == properties_.end()) {
    throw std::out_of_range("unknown property " + property);
  }
  return it->second;
}

std::vector<std::string> ContributionTable::property_names() const {
  std::vector<std::string> names;
  names.reserve(properties_.size());
  for (const auto &[name, unused] : properties_) {
    names.push_back(name);
  }
  return names;
}

ContributionTable ContributionTable::from_json_text(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("contribution table: bad JSON: ") +
                                e.what());
  }
  require(doc.is_object() && doc.value("type", "") == "contributions",
          "contribution table: wrong container type");
  require(doc.value("version", 0) == 1,
          "contribution table: unsupported version");
  require(doc.contains("properties") && doc["properties"].is_object(),
          "contribution table: missing properties object");
  ContributionTable table;
  for (const auto &[name, body] : doc["properties"].items()) {
    require(body.is_object(), "contribution table: property " + name +
                                  " is not an object");
    PropertyContribution c;
    c.bias = body.value("bias", 0.0);
    c.threshold = body.value("threshold", 0.5);
    if (body.contains("contributions")) {
      require(body["contributions"].is_object(),
              "contribution table: contributions of " + name +
                  " is not an object");
      for (const auto &[form, weight] : body["contributions"].items()) {
        require(weight.is_number(), "contribution table: weight for " + form +
                                        " is not a number");
        c.contributions[form] = weight.get<double>();
      }
    }
    table.set(name, std::move(c));
  }
  return table;
}

std::string ContributionTable::to_json_text() const {
  nlohmann::ordered_json props = nlohmann::ordered_json::object();
  for (const auto &[name, c] : properties_) {
    nlohmann::ordered_json contributions = nlohmann::ordered_json::object();
    for (const auto &[form, weight] : c.contributions) {
      contributions[form] = weight;
    }
    props[name] = {{"bias", c.bias},
                   {"threshold", c.threshold},
                   {"contributions", std::move(contributions)}};
  }
  nlohmann::ordered_json doc;
  doc["type"] = "contributions";
  doc["version"] = 1;
  doc["properties"] = std::move(props);
  return doc.dump();
}

double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double predict(const MolecularGraph &g, const std::string &property,
               const ContributionTable &table, const ConflictRuleSet &rules) {
  const PropertyContribution &c = table.at(property);
  const TokenizationResult tokens = tokenize(g, rules);
  double total = c.bias;
  for (const BuildingBlock &block : tokens.blocks) {
    const auto it = c.contributions.find(block.canonical_form);
    if (it != c.contributions.end()) {
      total += it->second;
    }
  }
  return logistic(total);
}

bool classify(double score, double threshold) { return score >= threshold; }

namespace {

struct F1Counts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

F1Counts count_at(const std::vector<double> &scores,
                  const std::vector<bool> &labels, double threshold) {
  F1Counts counts;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = classify(scores[i], threshold);
    if (predicted && labels[i]) {
      ++counts.tp;
    } else if (predicted && !labels[i]) {
      ++counts.fp;
    } else if (!predicted && labels[i]) {
      ++counts.fn;
    }
  }
  return counts;
}

// F1 = 2tp / (2tp + fp + fn); comparison done by integer
// cross-multiplication so ties are exact.
bool f1_greater(const F1Counts &a, const F1Counts &b) {
  const std::int64_t num_a = 2 * a.tp;
  const std::int64_t den_a = 2 * a.tp + a.fp + a.fn;
  const std::int64_t num_b = 2 * b.tp;
  const std::int64_t den_b = 2 * b.tp + b.fp + b.fn;
  if (den_a == 0 || den_b == 0) {
    // empty input only; treat as equal
    return false;
  }
  return num_a * den_b > num_b * den_a;
}

}  // namespace

double fit_threshold(const std::vector<double> &scores,
                     const std::vector<bool> &labels) {
  require(scores.size() == labels.size(),
          "fit_threshold: score/label length mismatch");
  require(!scores.empty(), "fit_threshold: empty input");
  const bool has_pos = std::find(labels.begin(), labels.end(), true) !=
                       labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), false) !=
                       labels.end();
  require(has_pos && has_neg, "fit_threshold: both classes required");

  std::set<double> distinct(scores.begin(), scores.end());
  std::vector<double> candidates(distinct.begin(), distinct.end());
  for (auto it = distinct.begin(); std::next(it) != distinct.end(); ++it) {
    candidates.push_back((*it + *std::next(it)) / 2.0);
  }
  std::sort(candidates.begin(), candidates.end());

  double best_threshold = candidates.front();
  F1Counts best = count_at(scores, labels, best_threshold);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const F1Counts counts = count_at(scores, labels, candidates[i]);
    if (f1_greater(counts, best)) {
      best = counts;
      best_threshold = candidates[i];
    }
  }
  return best_threshold;
}

std::vector<PropertyRecord> load_records(const std::string &csv_text,
                                         RecordLoadReport *report) {
  std::istringstream in(csv_text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)),
          "property records: empty input");
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  require(trim(line) == "smiles,property,value",
          "property records: expected header smiles,property,value");

  std::vector<PropertyRecord> records;
  std::size_t line_number = 1;
  auto diagnose = [&](const std::string &message) {
    if (report != nullptr) {
      report->diagnostics.push_back("line " + std::to_string(line_number) +
                                    ": " + message);
    }
  };
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (trim(line).empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) {
        break;
      }
      start = comma + 1;
    }
    if (fields.size() != 3) {
      diagnose("expected 3 comma-separated fields, found " +
               std::to_string(fields.size()));
      continue;
    }
    PropertyRecord record;
    try {
      record.molecule = write_smiles(parse_smiles(trim(fields[0])));
    } catch (const SmilesError &e) {
      diagnose(std::string("bad SMILES: ") + e.what());
      continue;
    }
    record.property = normalize_property_name(fields[1]);
    if (record.property.empty()) {
      diagnose("empty property name");
      continue;
    }
    const std::string value = trim(fields[2]);
    if (value == "0" || value == "1") {
      record.kind = PropertyKind::kNominal;
      record.value = value == "1" ? 1.0 : 0.0;
    } else {
      record.kind = PropertyKind::kNumerical;
      std::size_t used = 0;
      try {
        record.value = std::stod(value, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != value.size() || !std::isfinite(record.value)) {
        diagnose("bad value " + value);
        continue;
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace blockmol
