//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "blockmol/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
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

constexpr std::string_view kCliffRelationNames[] = {
    "SameScaffoldOppositeLabel",
    "SameScaffoldDeltaGE1Sigma",
    "DiffScaffoldSameProperty",
};

constexpr std::string_view kTaskNames[] = {
    "Classification",
    "Regression",
    "PropertyToMolecule",
    "MultiPropertyToMolecule",
    "ScaffoldPropertyToMolecule",
    "MoleculeGeneration",
    "PosNegSameScaffold",
    "PosPosDiffScaffold",
};

std::string format_value(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

std::string label_text(double value) {
  return value != 0.0 ? "positive" : "negative";
}

}  // namespace

std::string_view cliff_relation_name(CliffRelation relation) {
  return kCliffRelationNames[static_cast<std::size_t>(relation)];
}

std::optional<CliffRelation> cliff_relation_from_name(std::string_view name) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (kCliffRelationNames[i] == name) {
      return static_cast<CliffRelation>(i);
    }
  }
  return std::nullopt;
}

std::string_view task_name(TaskKind task) {
  return kTaskNames[static_cast<std::size_t>(task)];
}

std::optional<TaskKind> task_from_name(std::string_view name) {
  for (int i = 0; i < kTaskKindCount; ++i) {
    if (kTaskNames[i] == name) {
      return static_cast<TaskKind>(i);
    }
  }
  return std::nullopt;
}

double population_sigma(const std::vector<double> &values) {
  if (values.empty()) {
    return 0.0;
  }
  double mean = 0.0;
  for (double v : values) {
    mean += v;
  }
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return std::sqrt(ss / static_cast<double>(values.size()));
}

namespace {

struct MinedItem {
  const PropertyRecord *record;
  std::string scaffold;
  bool empty_scaffold;
};

// First record per canonical molecule; later duplicates are dropped.
std::vector<const PropertyRecord *> dedup_records(
    const std::vector<PropertyRecord> &records) {
  std::vector<const PropertyRecord *> unique;
  std::set<std::string> seen;
  for (const PropertyRecord &r : records) {
    if (seen.insert(r.molecule).second) {
      unique.push_back(&r);
    }
  }
  return unique;
}

void check_single_property(const std::vector<PropertyRecord> &records) {
  for (const PropertyRecord &r : records) {
    require(r.property == records.front().property,
            "cliff mining: records span multiple properties");
    require(r.kind == records.front().kind,
            "cliff mining: records mix nominal and numerical values");
  }
}

std::vector<MinedItem> scaffolded_items(
    const std::vector<const PropertyRecord *> &unique,
    const CliffMiningOptions &options) {
  std::vector<MinedItem> items;
  for (const PropertyRecord *r : unique) {
    const MolecularGraph g = parse_smiles(r->molecule);
    if (g.component_count() > 1) {
      continue;  // fragment sets have no single scaffold
    }
    const ScaffoldKey key = scaffold_key(g);
    if (key.is_empty && !options.include_empty_scaffold) {
      continue;
    }
    items.push_back({r, key.canonical_form, key.is_empty});
  }
  return items;
}

void sort_pairs(std::vector<ActivityCliffPair> &pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const ActivityCliffPair &a, const ActivityCliffPair &b) {
              if (a.mol_a != b.mol_a) {
                return a.mol_a < b.mol_a;
              }
              return a.mol_b < b.mol_b;
            });
}

}  // namespace

std::vector<ActivityCliffPair> mine_cliffs_same_scaffold(
    const std::vector<PropertyRecord> &records,
    const CliffMiningOptions &options) {
  if (records.empty()) {
    return {};
  }
  check_single_property(records);
  const PropertyKind kind = records.front().kind;
  const std::vector<const PropertyRecord *> unique = dedup_records(records);

  double sigma = 0.0;
  if (kind == PropertyKind::kNumerical) {
    std::vector<double> values;
    values.reserve(unique.size());
    for (const PropertyRecord *r : unique) {
      values.push_back(r->value);
    }
    sigma = population_sigma(values);
  }

  std::map<std::string, std::vector<const PropertyRecord *>> groups;
  for (const MinedItem &item : scaffolded_items(unique, options)) {
    groups[item.scaffold].push_back(item.record);
  }

  std::vector<ActivityCliffPair> pairs;
  for (auto &[scaffold, members] : groups) {
    std::sort(members.begin(), members.end(),
              [](const PropertyRecord *a, const PropertyRecord *b) {
                return a->molecule < b->molecule;
              });
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const PropertyRecord *a = members[i];
        const PropertyRecord *b = members[j];
        ActivityCliffPair pair;
        pair.property = a->property;
        if (kind == PropertyKind::kNominal) {
          if (a->value == b->value) {
            continue;
          }
          if (a->value != 0.0) {
            std::swap(a, b);  // mol_a carries the negative label
          }
          pair.relation = CliffRelation::kSameScaffoldOppositeLabel;
          pair.delta = 1.0;
        } else {
          if (std::abs(a->value - b->value) < sigma) {
            continue;
          }
          if (a->value > b->value) {
            std::swap(a, b);  // mol_a carries the lower value
          }
          pair.relation = CliffRelation::kSameScaffoldDeltaGE1Sigma;
          pair.delta = b->value - a->value;
        }
        pair.mol_a = a->molecule;
        pair.mol_b = b->molecule;
        pairs.push_back(std::move(pair));
      }
    }
  }
  sort_pairs(pairs);
  return pairs;
}

std::vector<ActivityCliffPair> mine_pairs_diff_scaffold_same_property(
    const std::vector<PropertyRecord> &records,
    const CliffMiningOptions &options) {
  if (records.empty()) {
    return {};
  }
  check_single_property(records);
  require(records.front().kind == PropertyKind::kNominal,
          "cliff mining: different-scaffold pairing needs nominal records");
  require(options.fan_out_cap > 0, "cliff mining: fan-out cap must be positive");

  std::vector<MinedItem> positives;
  for (const MinedItem &item :
       scaffolded_items(dedup_records(records), options)) {
    if (item.record->value != 0.0) {
      positives.push_back(item);
    }
  }
  std::sort(positives.begin(), positives.end(),
            [](const MinedItem &a, const MinedItem &b) {
              return a.record->molecule < b.record->molecule;
            });

  std::vector<int> used(positives.size(), 0);
  std::vector<ActivityCliffPair> pairs;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    for (std::size_t j = i + 1;
         j < positives.size() && used[i] < options.fan_out_cap; ++j) {
      if (used[j] >= options.fan_out_cap ||
          positives[i].scaffold == positives[j].scaffold) {
        continue;
      }
      ActivityCliffPair pair;
      pair.mol_a = positives[i].record->molecule;
      pair.mol_b = positives[j].record->molecule;
      pair.property = positives[i].record->property;
      pair.relation = CliffRelation::kDiffScaffoldSameProperty;
      pair.delta = 0.0;
      pairs.push_back(std::move(pair));
      ++used[i];
      ++used[j];
    }
  }
  sort_pairs(pairs);
  return pairs;
}

std::string cliffs_to_jsonl(const std::vector<ActivityCliffPair> &pairs) {
  std::string out;
  for (const ActivityCliffPair &pair : pairs) {
    nlohmann::ordered_json line;
    line["mol_a"] = pair.mol_a;
    line["mol_b"] = pair.mol_b;
    line["property"] = pair.property;
    line["relation"] = std::string(cliff_relation_name(pair.relation));
    line["delta"] = pair.delta;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<ActivityCliffPair> cliffs_from_jsonl(const std::string &text) {
  std::vector<ActivityCliffPair> pairs;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      throw std::invalid_argument("cliff line " + std::to_string(line_number) +
                                  ": bad JSON: " + e.what());
    }
    ActivityCliffPair pair;
    try {
      pair.mol_a = doc.at("mol_a").get<std::string>();
      pair.mol_b = doc.at("mol_b").get<std::string>();
      pair.property = doc.at("property").get<std::string>();
      pair.delta = doc.value("delta", 0.0);
      const auto relation =
          cliff_relation_from_name(doc.at("relation").get<std::string>());
      require(relation.has_value(), "unknown relation");
      pair.relation = *relation;
    } catch (const nlohmann::json::exception &e) {
      throw std::invalid_argument("cliff line " + std::to_string(line_number) +
                                  ": " + e.what());
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

void TemplateSet::set(TaskKind task, std::vector<std::string> questions,
                      std::vector<std::string> answers) {
  require(!questions.empty() && !answers.empty(),
          "template set: every task needs at least one question and answer");
  entries_[static_cast<std::size_t>(task)] =
      Entry{std::move(questions), std::move(answers)};
}

bool TemplateSet::has(TaskKind task) const {
  return entries_[static_cast<std::size_t>(task)].has_value();
}

const std::vector<std::string> &TemplateSet::questions(TaskKind task) const {
  const auto &entry = entries_[static_cast<std::size_t>(task)];
  if (!entry.has_value()) {
    throw std::out_of_range("template set: no templates for task " +
                            std::string(task_name(task)));
  }
  return entry->questions;
}

const std::vector<std::string> &TemplateSet::answers(TaskKind task) const {
  const auto &entry = entries_[static_cast<std::size_t>(task)];
  if (!entry.has_value()) {
    throw std::out_of_range("template set: no templates for task " +
                            std::string(task_name(task)));
  }
  return entry->answers;
}

TemplateSet TemplateSet::from_json_text(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("template set: bad JSON: ") +
                                e.what());
  }
  require(doc.is_object(), "template set: top level must be an object");
  TemplateSet set;
  for (const auto &[name, body] : doc.items()) {
    const auto task = task_from_name(name);
    require(task.has_value(), "template set: unknown task " + name);
    require(body.is_object() && body.contains("questions") &&
                body.contains("answers"),
            "template set: task " + name + " needs questions and answers");
    set.set(*task, body["questions"].get<std::vector<std::string>>(),
            body["answers"].get<std::vector<std::string>>());
  }
  return set;
}

std::string TemplateSet::to_json_text() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (int i = 0; i < kTaskKindCount; ++i) {
    const auto &entry = entries_[static_cast<std::size_t>(i)];
    if (!entry.has_value()) {
      continue;
    }
    doc[std::string(kTaskNames[i])] = {{"questions", entry->questions},
                                       {"answers", entry->answers}};
  }
  return doc.dump(2) + "\n";
}

TemplateSet TemplateSet::builtin_demo() {
  TemplateSet set;
  set.set(TaskKind::kClassification,
          {"Here is a molecule: {molecule} Is it {property}-positive?",
           "Consider {molecule} and judge its {property} assay outcome."},
          {"The molecule is {label} for {property}.",
           "{property} assessment: {label}."});
  set.set(TaskKind::kRegression,
          {"Here is a molecule: {molecule} Estimate its {property} value.",
           "Predict {property} for {molecule}."},
          {"The predicted {property} value is {value}.",
           "{property} = {value}."});
  set.set(TaskKind::kPropertyToMolecule,
          {"Design a molecule that is {label} for {property}.",
           "Give one molecule expected to be {label} in the {property} assay."},
          {"A candidate molecule: {molecule}",
           "Here is one option: {molecule}"});
  set.set(TaskKind::kMultiPropertyToMolecule,
          {"Design a molecule meeting all of these endpoints: {properties}.",
           "Propose a molecule that satisfies: {properties}."},
          {"A molecule consistent with those endpoints: {molecule}",
           "This candidate fits the profile: {molecule}"});
  set.set(TaskKind::kScaffoldPropertyToMolecule,
          {"Using the scaffold {scaffold}, design a molecule that is {label} "
           "for {property}.",
           "Decorate the scaffold {scaffold} into a {property}-{label} "
           "molecule."},
          {"Built on that scaffold: {molecule}",
           "A decorated analog: {molecule}"});
  set.set(TaskKind::kMoleculeGeneration,
          {"Generate a drug-like molecule.",
           "Write down a plausible small molecule."},
          {"{molecule}", "One example: {molecule}"});
  set.set(TaskKind::kPosNegSameScaffold,
          {"The molecule {molecule_a} is inactive for {property}. Keep its "
           "scaffold but make it active.",
           "Improve {molecule_a} so that it becomes {property}-positive "
           "without changing the scaffold."},
          {"An improved analog: {molecule_b}",
           "This analog should be active: {molecule_b}"});
  set.set(TaskKind::kPosPosDiffScaffold,
          {"The molecule {molecule_a} is active for {property}. Find an "
           "active molecule with a different scaffold.",
           "Suggest a scaffold hop from {molecule_a} that keeps {property} "
           "activity."},
          {"A different-scaffold active: {molecule_b}",
           "Scaffold hop candidate: {molecule_b}"});
  return set;
}

std::string molecule_segment(const MolecularGraph &g,
                             const ConflictRuleSet &rules,
                             std::vector<std::string> *blocks_out) {
  const TokenizationResult tokens = tokenize(g, rules);
  std::string segment = "[MOL]";
  for (std::size_t i = 0; i < tokens.blocks.size(); ++i) {
    if (i > 0) {
      segment += ' ';
    }
    segment += tokens.blocks[i].canonical_form;
    if (blocks_out != nullptr) {
      blocks_out->push_back(tokens.blocks[i].canonical_form);
    }
  }
  segment += "[/MOL]";
  return segment;
}

namespace {

std::string substitute(const std::string &text,
                       const std::map<std::string, std::string> &values) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{') {
      out += text[i++];
      continue;
    }
    const std::size_t close = text.find('}', i);
    require(close != std::string::npos,
            "template: unterminated placeholder in \"" + text + "\"");
    const std::string key = text.substr(i + 1, close - i - 1);
    const auto it = values.find(key);
    require(it != values.end(),
            "template: no value for placeholder {" + key + "}");
    out += it->second;
    i = close + 1;
  }
  return out;
}

void finish_example(InstructionExample &example) {
  std::sort(example.blocks.begin(), example.blocks.end());
  example.blocks.erase(
      std::unique(example.blocks.begin(), example.blocks.end()),
      example.blocks.end());
}

}  // namespace

std::vector<InstructionExample> gen_from_records(
    TaskKind task, const std::vector<PropertyRecord> &records,
    const TemplateSet &templates, const ConflictRuleSet &rules,
    std::uint64_t seed, const std::string &source, DatagenReport *report) {
  require(task != TaskKind::kPosNegSameScaffold &&
              task != TaskKind::kPosPosDiffScaffold,
          "gen_from_records: pair tasks take mined pairs");
  const std::vector<std::string> &questions = templates.questions(task);
  const std::vector<std::string> &answers = templates.answers(task);
  std::mt19937_64 rng(seed);
  std::vector<InstructionExample> out;

  auto diagnose = [&](const std::string &message) {
    if (report != nullptr) {
      report->diagnostics.push_back(message);
    }
  };
  auto emit = [&](std::map<std::string, std::string> values,
                  std::vector<std::string> blocks) {
    InstructionExample example;
    example.task = task;
    example.source = source;
    example.seed = seed;
    example.blocks = std::move(blocks);
    const std::size_t qi = rng() % questions.size();
    const std::size_t ai = rng() % answers.size();
    example.prompt = substitute(questions[qi], values);
    example.response = substitute(answers[ai], values);
    finish_example(example);
    out.push_back(std::move(example));
  };

  if (task == TaskKind::kMultiPropertyToMolecule) {
    // group records by molecule, first-seen order, one property kept each
    std::vector<std::string> order;
    std::map<std::string, std::vector<const PropertyRecord *>> grouped;
    for (const PropertyRecord &r : records) {
      auto &list = grouped[r.molecule];
      if (list.empty()) {
        order.push_back(r.molecule);
      }
      const bool duplicate =
          std::any_of(list.begin(), list.end(), [&](const PropertyRecord *p) {
            return p->property == r.property;
          });
      if (!duplicate) {
        list.push_back(&r);
      }
    }
    for (const std::string &molecule : order) {
      auto &list = grouped[molecule];
      if (list.size() < 2) {
        diagnose(molecule + ": fewer than 2 properties, skipped");
        continue;
      }
      std::sort(list.begin(), list.end(),
                [](const PropertyRecord *a, const PropertyRecord *b) {
                  return a->property < b->property;
                });
      std::string profile;
      for (const PropertyRecord *r : list) {
        if (!profile.empty()) {
          profile += ", ";
        }
        profile += r->property;
        profile += ' ';
        profile += r->kind == PropertyKind::kNominal ? label_text(r->value)
                                                     : format_value(r->value);
      }
      MolecularGraph g;
      try {
        g = parse_smiles(molecule);
      } catch (const SmilesError &e) {
        diagnose(molecule + ": " + e.what());
        continue;
      }
      std::vector<std::string> blocks;
      std::map<std::string, std::string> values;
      values["properties"] = profile;
      values["molecule"] = molecule_segment(g, rules, &blocks);
      emit(std::move(values), std::move(blocks));
    }
    return out;
  }

  for (const PropertyRecord &record : records) {
    MolecularGraph g;
    try {
      g = parse_smiles(record.molecule);
    } catch (const SmilesError &e) {
      diagnose(record.molecule + ": " + e.what());
      continue;
    }
    std::map<std::string, std::string> values;
    values["property"] = record.property;
    switch (task) {
      case TaskKind::kClassification:
      case TaskKind::kPropertyToMolecule:
        if (record.kind != PropertyKind::kNominal) {
          diagnose(record.molecule + ": needs a nominal label, skipped");
          continue;
        }
        values["label"] = label_text(record.value);
        break;
      case TaskKind::kRegression:
        if (record.kind != PropertyKind::kNumerical) {
          diagnose(record.molecule + ": needs a numerical value, skipped");
          continue;
        }
        values["value"] = format_value(record.value);
        break;
      case TaskKind::kScaffoldPropertyToMolecule: {
        if (record.kind != PropertyKind::kNominal) {
          diagnose(record.molecule + ": needs a nominal label, skipped");
          continue;
        }
        if (g.component_count() > 1) {
          diagnose(record.molecule + ": fragment set has no scaffold");
          continue;
        }
        const ScaffoldKey key = scaffold_key(g);
        if (key.is_empty) {
          diagnose(record.molecule + ": empty scaffold, skipped");
          continue;
        }
        values["label"] = label_text(record.value);
        values["scaffold"] = key.canonical_form;
        break;
      }
      case TaskKind::kMoleculeGeneration:
        break;
      default:
        break;
    }
    std::vector<std::string> blocks;
    values["molecule"] = molecule_segment(g, rules, &blocks);
    emit(std::move(values), std::move(blocks));
  }
  return out;
}

std::vector<InstructionExample> gen_from_cliffs(
    TaskKind task, const std::vector<ActivityCliffPair> &pairs,
    const TemplateSet &templates, const ConflictRuleSet &rules,
    std::uint64_t seed, const std::string &source, DatagenReport *report) {
  require(task == TaskKind::kPosNegSameScaffold ||
              task == TaskKind::kPosPosDiffScaffold,
          "gen_from_cliffs: only pair tasks take mined pairs");
  const std::vector<std::string> &questions = templates.questions(task);
  const std::vector<std::string> &answers = templates.answers(task);
  std::mt19937_64 rng(seed);
  std::vector<InstructionExample> out;
  for (const ActivityCliffPair &pair : pairs) {
    MolecularGraph a;
    MolecularGraph b;
    try {
      a = parse_smiles(pair.mol_a);
      b = parse_smiles(pair.mol_b);
    } catch (const SmilesError &e) {
      if (report != nullptr) {
        report->diagnostics.push_back(pair.mol_a + "/" + pair.mol_b + ": " +
                                      e.what());
      }
      continue;
    }
    InstructionExample example;
    example.task = task;
    example.source = source;
    example.seed = seed;
    std::map<std::string, std::string> values;
    values["property"] = pair.property;
    values["molecule_a"] = molecule_segment(a, rules, &example.blocks);
    values["molecule_b"] = molecule_segment(b, rules, &example.blocks);
    const std::size_t qi = rng() % questions.size();
    const std::size_t ai = rng() % answers.size();
    example.prompt = substitute(questions[qi], values);
    example.response = substitute(answers[ai], values);
    finish_example(example);
    out.push_back(std::move(example));
  }
  return out;
}

std::vector<InstructionExample> filter_by_vocab(
    const std::vector<InstructionExample> &examples, const Vocabulary &vocab) {
  std::vector<InstructionExample> kept;
  for (const InstructionExample &example : examples) {
    const bool covered =
        std::all_of(example.blocks.begin(), example.blocks.end(),
                    [&vocab](const std::string &form) {
                      return vocab.find(form) != nullptr;
                    });
    if (covered) {
      kept.push_back(example);
    }
  }
  return kept;
}

std::string examples_to_jsonl(const std::vector<InstructionExample> &examples) {
  std::string out;
  for (const InstructionExample &example : examples) {
    nlohmann::ordered_json line;
    line["task"] = std::string(task_name(example.task));
    line["prompt"] = example.prompt;
    line["response"] = example.response;
    line["source"] = example.source;
    line["seed"] = example.seed;
    line["blocks"] = example.blocks;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<InstructionExample> examples_from_jsonl(const std::string &text) {
  std::vector<InstructionExample> examples;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      throw std::invalid_argument("example line " +
                                  std::to_string(line_number) +
                                  ": bad JSON: " + e.what());
    }
    InstructionExample example;
    try {
      const auto task = task_from_name(doc.at("task").get<std::string>());
      require(task.has_value(), "unknown task");
      example.task = *task;
      example.prompt = doc.at("prompt").get<std::string>();
      example.response = doc.at("response").get<std::string>();
      example.source = doc.value("source", "");
      example.seed = doc.value("seed", std::uint64_t{0});
      if (doc.contains("blocks")) {
        example.blocks = doc["blocks"].get<std::vector<std::string>>();
      }
    } catch (const nlohmann::json::exception &e) {
      throw std::invalid_argument("example line " +
                                  std::to_string(line_number) + ": " +
                                  e.what());
    }
    examples.push_back(std::move(example));
  }
  return examples;
}

std::vector<PropertyRecord> oracle_label_records(
    const std::vector<std::string> &molecules, const std::string &property,
    const ContributionTable &table, const ConflictRuleSet &rules) {
  const double threshold = table.at(property).threshold;
  std::vector<PropertyRecord> records;
  records.reserve(molecules.size());
  for (const std::string &molecule : molecules) {
    const MolecularGraph g = parse_smiles(molecule);
    PropertyRecord record;
    record.molecule = write_smiles(g);
    record.property = normalize_property_name(property);
    record.kind = PropertyKind::kNominal;
    record.value =
        classify(predict(g, property, table, rules), threshold) ? 1.0 : 0.0;
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace blockmol
