//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "blockmol/oracle.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace blockmol;

namespace {

const ConflictRuleSet &default_rules() {
  static const ConflictRuleSet rules = ConflictRuleSet::default_set();
  return rules;
}

double test_f1(const std::vector<double> &scores,
               const std::vector<bool> &labels, double threshold) {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    tp += predicted && labels[i] ? 1.0 : 0.0;
    fp += predicted && !labels[i] ? 1.0 : 0.0;
    fn += !predicted && labels[i] ? 1.0 : 0.0;
  }
  const double denom = 2.0 * tp + fp + fn;
  return denom == 0.0 ? 0.0 : 2.0 * tp / denom;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("logistic anchors") {
  CHECK(logistic(0.0) == 0.5);
  CHECK(logistic(2.0) == doctest::Approx(0.8807970779778823).epsilon(1e-12));
  CHECK(logistic(-2.0) ==
        doctest::Approx(1.0 - 0.8807970779778823).epsilon(1e-12));
  CHECK(logistic(800.0) == 1.0);
  CHECK(logistic(-800.0) == 0.0);
}

TEST_CASE("empty table scores one half everywhere") {
  ContributionTable table;
  table.set("AMES", PropertyContribution{});
  for (const char *s :
       {"C", "CC(=O)Nc1ccccc1", "c1ccc(-c2ccccc2)cc1", "OP(=O)(O)O"}) {
    CHECK(predict(parse_smiles(s), "AMES", table, default_rules()) == 0.5);
  }
}

TEST_CASE("single block contribution through the logistic") {
  ContributionTable table;
  PropertyContribution c;
  c.contributions["C"] = 2.0;
  table.set("AMES", c);
  CHECK(predict(parse_smiles("C"), "AMES", table, default_rules()) ==
        doctest::Approx(0.8807970779778823).epsilon(1e-12));
  // property lookup is case-insensitive
  CHECK(predict(parse_smiles("C"), "ames", table, default_rules()) ==
        doctest::Approx(0.8807970779778823).epsilon(1e-12));
}

TEST_CASE("multi-block molecule sums its block weights") {
  // acetanilide splits into an acetyl cap and an aniline cap
  const std::string acetyl = write_smiles(parse_smiles("CC(=O)[*:1]"));
  const std::string aniline = write_smiles(parse_smiles("[*:2]Nc1ccccc1"));
  ContributionTable table;
  PropertyContribution c;
  c.bias = 0.4;
  c.contributions[acetyl] = 0.7;
  c.contributions[aniline] = -0.2;
  table.set("DILI", c);
  const double expected = 1.0 / (1.0 + std::exp(-(0.4 + 0.7 - 0.2)));
  CHECK(predict(parse_smiles("CC(=O)Nc1ccccc1"), "DILI", table,
                default_rules()) == doctest::Approx(expected).epsilon(1e-12));

  // unknown blocks are neutral
  PropertyContribution partial;
  partial.bias = 0.4;
  partial.contributions[acetyl] = 0.7;
  table.set("DILI", partial);
  const double neutral = 1.0 / (1.0 + std::exp(-(0.4 + 0.7)));
  CHECK(predict(parse_smiles("CC(=O)Nc1ccccc1"), "DILI", table,
                default_rules()) == doctest::Approx(neutral).epsilon(1e-12));

  CHECK_THROWS_AS(
      predict(parse_smiles("C"), "UNKNOWN", table, default_rules()),
      std::out_of_range);
}

TEST_CASE("prediction only depends on the canonical blocks") {
  ContributionTable table;
  PropertyContribution c;
  c.bias = -0.3;
  c.contributions[write_smiles(parse_smiles("CC(=O)[*:1]"))] = 1.1;
  c.contributions[write_smiles(parse_smiles("[*:2]Nc1ccccc1"))] = 0.4;
  table.set("BBBP", c);
  const double base =
      predict(parse_smiles("CC(=O)Nc1ccccc1"), "BBBP", table, default_rules());
  // same molecule, different input spellings
  for (const char *s : {"O=C(C)Nc1ccccc1", "c1ccccc1NC(C)=O",
                        "c1ccc(NC(=O)C)cc1"}) {
    CHECK(predict(parse_smiles(s), "BBBP", table, default_rules()) == base);
  }
}

TEST_CASE("raising a present contribution raises the score") {
  const MolecularGraph g = parse_smiles("CC(=O)Nc1ccccc1");
  const std::string acetyl = write_smiles(parse_smiles("CC(=O)[*:1]"));
  double previous = -1.0;
  for (double w : {-1.0, 0.0, 0.5, 2.0}) {
    ContributionTable table;
    PropertyContribution c;
    c.contributions[acetyl] = w;
    table.set("AMES", c);
    const double score = predict(g, "AMES", table, default_rules());
    CHECK(score > previous);
    previous = score;
  }
}

TEST_CASE("classification boundary uses >=") {
  CHECK(classify(0.5, 0.5));
  CHECK_FALSE(classify(0.2, 0.5));
  CHECK_FALSE(classify(0.9, 0.95));
  CHECK(classify(0.95, 0.95));
}

TEST_CASE("threshold fitting on separated classes picks the low midpoint") {
  const std::vector<double> scores = {0.1, 0.2, 0.8, 0.9};
  const std::vector<bool> labels = {false, false, true, true};
  CHECK(fit_threshold(scores, labels) == 0.5);
}

TEST_CASE("threshold fitting degenerate cases") {
  // all scores identical: threshold sits at that score, all predicted positive
  CHECK(fit_threshold({0.7, 0.7, 0.7}, {true, false, true}) == 0.7);
  CHECK_THROWS_AS(fit_threshold({0.1, 0.9}, {true, true}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_threshold({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(fit_threshold({0.1}, {true, false}), std::invalid_argument);
}

TEST_CASE("threshold fitting beats every alternative cut") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> score_dist(0.0, 1.0);
  std::bernoulli_distribution label_dist(0.5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 60);
    std::vector<double> scores;
    std::vector<bool> labels;
    bool pos = false;
    bool neg = false;
    for (int i = 0; i < n; ++i) {
      scores.push_back(score_dist(rng));
      labels.push_back(label_dist(rng));
      (labels.back() ? pos : neg) = true;
    }
    if (!pos || !neg) {
      continue;
    }
    const double chosen = fit_threshold(scores, labels);
    const double achieved = test_f1(scores, labels, chosen);
    // every prediction vector is reachable from some cut in this grid
    std::vector<double> grid = scores;
    std::sort(grid.begin(), grid.end());
    const std::size_t base_size = grid.size();
    for (std::size_t i = 1; i < base_size; ++i) {
      grid.push_back((grid[i - 1] + grid[i]) / 2.0);
    }
    grid.push_back(grid.front() - 0.125);
    grid.push_back(1.5);
    CAPTURE(trial);
    for (double alternative : grid) {
      CHECK(achieved >= test_f1(scores, labels, alternative) - 1e-12);
    }
  }
}

TEST_CASE("one swapped pair still matches the exhaustive best") {
  const std::vector<double> scores = {0.1, 0.6, 0.4, 0.9};
  const std::vector<bool> labels = {false, false, true, true};
  const double chosen = fit_threshold(scores, labels);
  const double achieved = test_f1(scores, labels, chosen);
  double best = 0.0;
  for (double alternative :
       {0.05, 0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 0.95}) {
    best = std::max(best, test_f1(scores, labels, alternative));
  }
  CHECK(achieved == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("record loading") {
  RecordLoadReport report;
  const std::string csv =
      "smiles,property,value\n"
      "CC(=O)Nc1ccccc1,ames,1\n"
      "C(N)C,BBBP,0\n"
      "CCO,logS,-0.77\n"
      "not_a_molecule,AMES,1\n"
      "CCN,AMES\n"
      "\n"
      "CCO,AMES,abc\n";
  const std::vector<PropertyRecord> records = load_records(csv, &report);
  REQUIRE(records.size() == 3);
  CHECK(records[0].property == "AMES");
  CHECK(records[0].kind == PropertyKind::kNominal);
  CHECK(records[0].value == 1.0);
  CHECK(records[1].molecule == write_smiles(parse_smiles("NCC")));
  CHECK(records[1].value == 0.0);
  CHECK(records[2].property == "LOGS");
  CHECK(records[2].kind == PropertyKind::kNumerical);
  CHECK(records[2].value == -0.77);
  REQUIRE(report.diagnostics.size() == 3);
  CHECK(report.diagnostics[0].find("line 5") != std::string::npos);
  CHECK(report.diagnostics[1].find("line 6") != std::string::npos);
  CHECK(report.diagnostics[2].find("line 8") != std::string::npos);

  CHECK(load_records("smiles,property,value\n").empty());
  CHECK_THROWS_AS(load_records("smiles,value\nC,1\n"), std::invalid_argument);
  CHECK_THROWS_AS(load_records(""), std::invalid_argument);
}

TEST_CASE("contribution table JSON round trip") {
  ContributionTable table;
  PropertyContribution ames;
  ames.bias = -0.25;
  ames.threshold = 0.4;
  ames.contributions["CC(=O)[*:1]"] = 0.875;
  ames.contributions["[*:2]Nc1ccccc1"] = -1.5;
  table.set("AMES", ames);
  PropertyContribution bbbp;
  bbbp.bias = 0.1;
  table.set("bbbp", bbbp);

  const std::string text = table.to_json_text();
  const ContributionTable back = ContributionTable::from_json_text(text);
  CHECK(back.to_json_text() == text);
  CHECK(back.property_names() == std::vector<std::string>{"AMES", "BBBP"});
  CHECK(back.at("AMES").threshold == 0.4);
  CHECK(back.at("AMES").contributions.at("CC(=O)[*:1]") == 0.875);

  PropertyContribution bad;
  bad.threshold = 1.0;
  CHECK_THROWS_AS(table.set("X", bad), std::invalid_argument);
  bad.threshold = 0.0;
  CHECK_THROWS_AS(table.set("X", bad), std::invalid_argument);
  CHECK_THROWS_AS(ContributionTable::from_json_text("[]"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ContributionTable::from_json_text("{\"type\":\"x\"}"),
                  std::invalid_argument);
}

}  // TEST_SUITE
