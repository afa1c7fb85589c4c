//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Forward-only block embedding: a small sum-aggregation message-passing
// encoder over block graphs, plus the logit / cross-entropy math that
// scores a combined text-and-block vocabulary against a context vector.
// No training happens here; weights are loaded from a file or seeded.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "blockmol/tokenizer.hpp"
#include "blockmol/vocab.hpp"

namespace blockmol {

struct DenseLayer {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> weight;  // row-major, out_dim x in_dim
  std::vector<double> bias;    // out_dim
};

// Immutable after construction; forward passes are pure.
class EncoderModel {
 public:
  // element(11) + charge one-hot over [-2,+2] (5) + aromatic flag (2) +
  // degree one-hot over 0..6 (7)
  static constexpr std::size_t kFeatureDim = 25;
  static constexpr std::size_t kDefaultLayers = 3;
  static constexpr std::size_t kDefaultHidden = 64;
  static constexpr std::size_t kDefaultEmbedding = 128;

  EncoderModel(std::vector<DenseLayer> layers, DenseLayer adapter);

  static EncoderModel zero(std::size_t layers = kDefaultLayers,
                           std::size_t hidden = kDefaultHidden,
                           std::size_t embedding = kDefaultEmbedding);
  // Weights uniform in [-0.1, 0.1] from a fixed 64-bit generator; the
  // same seed and shape always produce the same model.
  static EncoderModel seeded(std::uint64_t seed,
                             std::size_t layers = kDefaultLayers,
                             std::size_t hidden = kDefaultHidden,
                             std::size_t embedding = kDefaultEmbedding);

  // Versioned JSON tensor container with explicit shapes.
  static EncoderModel from_json_text(const std::string &text);
  std::string to_json_text() const;

  std::size_t layer_count() const { return layers_.size(); }
  std::size_t hidden_dim() const { return layers_.back().out_dim; }
  std::size_t embedding_dim() const { return adapter_.out_dim; }
  const std::vector<DenseLayer> &layers() const { return layers_; }
  const DenseLayer &adapter() const { return adapter_; }

 private:
  std::vector<DenseLayer> layers_;
  DenseLayer adapter_;
  void check_shapes() const;
};

// One-hot node feature vector of length EncoderModel::kFeatureDim.
// Charges outside [-2, 2] clamp to the boundary; degrees above 6 share
// the top bucket. Wildcard atoms are their own element class.
std::vector<double> node_features(const MolecularGraph &g, int atom);

// L rounds of message passing (node + neighbor-sum aggregation, ReLU
// between rounds), mean-pool readout, affine adapter. Atoms are visited
// in canonical order, so relabeled copies of a graph produce
// bit-identical embeddings.
std::vector<double> gnn_forward(const MolecularGraph &g,
                                const EncoderModel &model);
std::vector<double> gnn_forward(const BuildingBlock &block,
                                const EncoderModel &model);

// Computes embeddings for every vocabulary entry from its canonical form.
void populate_block_embeddings(Vocabulary &vocab, const EncoderModel &model);

// Text half plus block half of one logit space. Combined index space:
// text entries first (0..text_count-1, in load order), then block entries
// at text_count + block_id — the two halves can never collide.
struct CombinedVocab {
  std::vector<std::string> text_labels;
  std::vector<std::vector<double>> text_embeddings;
  Vocabulary blocks;

  std::size_t text_count() const { return text_labels.size(); }
  std::size_t block_count() const {
    return static_cast<std::size_t>(blocks.size());
  }
  std::size_t combined_size() const { return text_count() + block_count(); }
};

CombinedVocab make_combined_vocab(
    std::vector<std::pair<std::string, std::vector<double>>> text,
    Vocabulary blocks);

// logit[v] = context . embedding[v] over the combined index space.
// Throws std::invalid_argument on a dimension mismatch or a block entry
// without an embedding.
std::vector<double> block_logits(const std::vector<double> &context,
                                 const CombinedVocab &vocab);

// Mean over positions of -log softmax(logits[pos])[target[pos]].
double cce_loss(const std::vector<std::vector<double>> &logit_sequences,
                const std::vector<int> &targets);

// k (block_id, cosine similarity) pairs, descending similarity, ties by
// lower block id.
std::vector<std::pair<int, double>> nearest_neighbors(
    const std::vector<double> &query, const Vocabulary &blocks, int k);
// Looks the block up by canonical form and queries with its stored
// embedding; throws std::invalid_argument if it is not in the vocabulary.
std::vector<std::pair<int, double>> nearest_neighbors(
    const BuildingBlock &block, const CombinedVocab &vocab, int k);

// One text token per line: label TAB value TAB value ...
std::vector<std::pair<std::string, std::vector<double>>>
read_text_embeddings_tsv(const std::string &text);

// One vocabulary entry per line: block_id TAB value TAB value ...
std::string block_embeddings_tsv(const Vocabulary &vocab);

}  // namespace blockmol
