//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "blockmol/embed.hpp"
#include "blockmol/kernels.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace blockmol;

namespace {

const ConflictRuleSet &default_rules() {
  static const ConflictRuleSet rules = ConflictRuleSet::default_set();
  return rules;
}

Vocabulary demo_vocab() {
  VocabBuilder builder;
  for (const char *s : {"CC(=O)Nc1ccccc1", "CC(=O)Nc1ccc(-c2ccccc2)cc1",
                        "O=C(NC1CCCCC1)c1cccs1", "c1ccc(-c2ccncc2)cc1"}) {
    builder.add_result(tokenize(parse_smiles(s), default_rules()));
  }
  return builder.build(50, 50);
}

}  // namespace

TEST_SUITE("embed") {

TEST_CASE("node feature layout") {
  // lone carbon: element slot 1, charge 0 slot, non-aromatic, degree 0
  const MolecularGraph methane = parse_smiles("C");
  std::vector<double> expected(EncoderModel::kFeatureDim, 0.0);
  expected[1] = 1.0;
  expected[13] = 1.0;
  expected[16] = 1.0;
  expected[18] = 1.0;
  CHECK(node_features(methane, 0) == expected);

  const MolecularGraph ammonium = parse_smiles("[NH4+]");
  const std::vector<double> f = node_features(ammonium, 0);
  CHECK(f[2] == 1.0);   // nitrogen
  CHECK(f[14] == 1.0);  // +1
  CHECK(f[13] == 0.0);

  const MolecularGraph tagged = parse_smiles("[*:3]CO");
  const std::vector<double> w = node_features(tagged, 0);
  CHECK(w[10] == 1.0);  // wildcard element class
  CHECK(w[19] == 1.0);  // degree 1

  const MolecularGraph benzene = parse_smiles("c1ccccc1");
  CHECK(node_features(benzene, 0)[17] == 1.0);  // aromatic flag
  CHECK(node_features(benzene, 0)[20] == 1.0);  // degree 2
}

TEST_CASE("zero model maps every block to the zero vector") {
  const EncoderModel zero = EncoderModel::zero(2, 8, 6);
  const TokenizationResult r =
      tokenize(parse_smiles("CC(=O)Nc1ccc(-c2ccccc2)cc1"), default_rules());
  for (const BuildingBlock &block : r.blocks) {
    const std::vector<double> e = gnn_forward(block, zero);
    REQUIRE(e.size() == 6);
    for (double v : e) {
      CHECK(v == 0.0);
    }
  }
}

TEST_CASE("identity-like single layer equals adapter of raw features") {
  // one hidden layer = 25x25 identity, bias 0; adapter rows A[r][c] = 100r+c,
  // bias 0.5. A lone carbon has ones at feature slots 1, 13, 16, 18, so
  // row r of the output is (100r+1)+(100r+13)+(100r+16)+(100r+18)+0.5.
  DenseLayer hidden;
  hidden.in_dim = EncoderModel::kFeatureDim;
  hidden.out_dim = EncoderModel::kFeatureDim;
  hidden.weight.assign(hidden.in_dim * hidden.out_dim, 0.0);
  for (std::size_t i = 0; i < hidden.in_dim; ++i) {
    hidden.weight[i * hidden.in_dim + i] = 1.0;
  }
  hidden.bias.assign(hidden.out_dim, 0.0);
  DenseLayer adapter;
  adapter.in_dim = EncoderModel::kFeatureDim;
  adapter.out_dim = 3;
  for (std::size_t r = 0; r < adapter.out_dim; ++r) {
    for (std::size_t c = 0; c < adapter.in_dim; ++c) {
      adapter.weight.push_back(static_cast<double>(100 * r + c));
    }
  }
  adapter.bias.assign(adapter.out_dim, 0.5);
  const EncoderModel model({hidden}, adapter);
  const std::vector<double> e = gnn_forward(parse_smiles("C"), model);
  CHECK(e == std::vector<double>{48.5, 448.5, 848.5});
}

TEST_CASE("embeddings are invariant under atom relabeling") {
  const EncoderModel model = EncoderModel::seeded(41, 3, 16, 8);
  std::mt19937 rng(99);
  const TokenizationResult r =
      tokenize(parse_smiles("CC(=O)Nc1ccc(-c2ccccc2)cc1"), default_rules());
  for (const BuildingBlock &block : r.blocks) {
    const std::vector<double> base = gnn_forward(block.graph, model);
    for (int trial = 0; trial < 6; ++trial) {
      const MolecularGraph shuffled = testutil::permute_graph(
          block.graph,
          testutil::random_permutation(block.graph.atom_count(), rng), rng);
      CHECK(gnn_forward(shuffled, model) == base);  // bit-identical
    }
  }
}

TEST_CASE("block logits against an independent dot product") {
  Vocabulary vocab = demo_vocab();
  const EncoderModel model = EncoderModel::seeded(7, 2, 12, 5);
  populate_block_embeddings(vocab, model);
  std::vector<std::pair<std::string, std::vector<double>>> text;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> v(5);
    for (double &x : v) {
      x = dist(rng);
    }
    text.emplace_back("tok" + std::to_string(t), v);
  }
  const CombinedVocab cv = make_combined_vocab(text, vocab);
  REQUIRE(cv.combined_size() == text.size() + static_cast<std::size_t>(vocab.size()));

  std::vector<double> c(5);
  for (double &x : c) {
    x = dist(rng);
  }
  const std::vector<double> logits = block_logits(c, cv);
  REQUIRE(logits.size() == cv.combined_size());
  for (std::size_t i = 0; i < cv.combined_size(); ++i) {
    const std::vector<double> &e =
        i < cv.text_count()
            ? cv.text_embeddings[i]
            : *cv.blocks.by_id(static_cast<int>(i - cv.text_count())).embedding;
    long double expected = 0.0L;
    for (std::size_t k = 0; k < c.size(); ++k) {
      expected += static_cast<long double>(c[k]) * e[k];
    }
    CHECK(logits[i] ==
          doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
  }

  // linearity in the context vector
  std::vector<double> scaled = c;
  for (double &x : scaled) {
    x *= 2.5;
  }
  const std::vector<double> scaled_logits = block_logits(scaled, cv);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    CHECK(scaled_logits[i] ==
          doctest::Approx(2.5 * logits[i]).epsilon(1e-9));
  }

  // softmax over the combined space normalizes
  const double lse = kernels::log_sum_exp(logits.data(), logits.size());
  double total = 0.0;
  for (double l : logits) {
    total += std::exp(l - lse);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("zero context gives a uniform distribution") {
  std::vector<std::pair<std::string, std::vector<double>>> text = {
      {"a", {1.0, 0.0, 0.0}}, {"b", {0.0, 1.0, 0.0}}, {"c", {0.0, 0.0, 1.0}}};
  const CombinedVocab cv =
      make_combined_vocab(text, VocabBuilder{}.build(0, 0));
  const std::vector<double> logits = block_logits({0.0, 0.0, 0.0}, cv);
  for (double l : logits) {
    CHECK(l == 0.0);
  }
  // orthonormal text embeddings: context equal to one of them wins
  const std::vector<double> hit = block_logits({0.0, 1.0, 0.0}, cv);
  CHECK(hit[1] == 1.0);
  CHECK(hit[0] == 0.0);
  CHECK(hit[2] == 0.0);
}

TEST_CASE("cce loss analytic anchors") {
  for (std::size_t v : {2u, 10u, 1000u}) {
    const std::vector<std::vector<double>> rows = {
        std::vector<double>(v, 0.0)};
    CHECK(cce_loss(rows, {0}) ==
          doctest::Approx(std::log(static_cast<double>(v))).epsilon(1e-9));
  }
  std::vector<double> margin(5, 0.0);
  margin[2] = 50.0;
  const double small = cce_loss({margin}, {2});
  CHECK(small >= 0.0);
  CHECK(small < 1e-20);
}

TEST_CASE("cce loss matches a brute-force softmax") {
  const std::vector<std::vector<double>> rows = {
      {1.0, 2.0, 3.0}, {0.5, 0.5}, {-1.0, 0.0, 1.0, 2.0}};
  const std::vector<int> targets = {2, 0, 1};
  long double total = 0.0L;
  for (std::size_t pos = 0; pos < rows.size(); ++pos) {
    long double z = 0.0L;
    for (double v : rows[pos]) {
      z += expl(static_cast<long double>(v));
    }
    const long double p =
        expl(static_cast<long double>(
            rows[pos][static_cast<std::size_t>(targets[pos])])) /
        z;
    total += -logl(p);
  }
  CHECK(cce_loss(rows, targets) ==
        doctest::Approx(static_cast<double>(total / 3.0L)).epsilon(1e-12));

  CHECK_THROWS_AS(cce_loss(rows, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(cce_loss(rows, {2, 0, 7}), std::out_of_range);
  CHECK_THROWS_AS(cce_loss({}, {}), std::invalid_argument);
}

TEST_CASE("nearest neighbors ranks the query first") {
  Vocabulary vocab = demo_vocab();
  const EncoderModel model = EncoderModel::seeded(13, 2, 10, 6);
  populate_block_embeddings(vocab, model);
  const CombinedVocab cv = make_combined_vocab({}, vocab);

  const TokenizationResult r =
      tokenize(parse_smiles("CC(=O)Nc1ccccc1"), default_rules());
  for (const BuildingBlock &block : r.blocks) {
    const auto ranked = nearest_neighbors(block, cv, cv.blocks.size());
    REQUIRE(!ranked.empty());
    const Vocabulary::Entry *self = cv.blocks.find(block.canonical_form);
    REQUIRE(self != nullptr);
    CHECK(ranked.front().first == self->id);
    CHECK(ranked.front().second == doctest::Approx(1.0).epsilon(1e-12));
    // full k is a permutation of all ids
    std::vector<int> ids;
    for (const auto &[id, sim] : ranked) {
      ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    for (int id = 0; id < cv.blocks.size(); ++id) {
      CHECK(ids[static_cast<std::size_t>(id)] == id);
    }
    // similarities never increase down the list
    for (std::size_t i = 1; i < ranked.size(); ++i) {
      CHECK(ranked[i].second <= ranked[i - 1].second + 1e-15);
    }
  }
}

TEST_CASE("nearest neighbor ties break toward the lower id") {
  VocabBuilder builder;
  builder.add_count("CC(=O)[*:1]", BlockKind::kCap, 3);
  builder.add_count("[*:2]NCC", BlockKind::kCap, 2);
  builder.add_count("[*:2]NCCC", BlockKind::kCap, 1);
  Vocabulary vocab = builder.build(10, 10);
  vocab.set_embedding(0, {1.0, 0.0});
  vocab.set_embedding(1, {1.0, 0.0});  // duplicate of id 0
  vocab.set_embedding(2, {0.0, 1.0});
  const auto ranked = nearest_neighbors(std::vector<double>{2.0, 0.0}, vocab, 3);
  CHECK(ranked[0].first == 0);
  CHECK(ranked[1].first == 1);
  CHECK(ranked[2].first == 2);
  CHECK_THROWS_AS(nearest_neighbors(std::vector<double>{1.0, 0.0}, vocab, 4),
                  std::invalid_argument);
}

TEST_CASE("model JSON container round trips bit for bit") {
  const EncoderModel model = EncoderModel::seeded(11, 2, 6, 4);
  const std::string text = model.to_json_text();
  const EncoderModel back = EncoderModel::from_json_text(text);
  CHECK(back.to_json_text() == text);
  const MolecularGraph g = parse_smiles("CC(=O)Nc1ccccc1");
  CHECK(gnn_forward(g, back) == gnn_forward(g, model));

  CHECK_THROWS_AS(EncoderModel::from_json_text("{}"), std::invalid_argument);
  CHECK_THROWS_AS(EncoderModel::from_json_text("not json"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      EncoderModel::from_json_text(
          R"({"type":"encoder","version":1,"feature_dim":25,"layers":1,)"
          R"("tensors":[{"name":"layer.0.weight","shape":[2,25],"data":[1.0]}]})"),
      std::invalid_argument);
}

TEST_CASE("text embedding TSV parsing") {
  const auto rows =
      read_text_embeddings_tsv("hello\t1\t2\t3\n\nworld\t-0.5\t0\t2.25\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].first == "hello");
  CHECK(rows[0].second == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(rows[1].second == std::vector<double>{-0.5, 0.0, 2.25});
  CHECK_THROWS_AS(read_text_embeddings_tsv("a\t1\t2\nb\t1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(read_text_embeddings_tsv("a\tx\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_text_embeddings_tsv("label-only\n"),
                  std::invalid_argument);
}

TEST_CASE("block embedding TSV export") {
  Vocabulary vocab = demo_vocab();
  const EncoderModel model = EncoderModel::seeded(5, 1, 4, 3);
  populate_block_embeddings(vocab, model);
  const std::string tsv = block_embeddings_tsv(vocab);
  const auto parsed = read_text_embeddings_tsv(tsv);
  REQUIRE(parsed.size() == static_cast<std::size_t>(vocab.size()));
  for (int id = 0; id < vocab.size(); ++id) {
    CHECK(parsed[static_cast<std::size_t>(id)].first == std::to_string(id));
    CHECK(parsed[static_cast<std::size_t>(id)].second ==
          *vocab.by_id(id).embedding);  // %.17g round trips exactly
  }
}

}  // TEST_SUITE
