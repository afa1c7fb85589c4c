//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "blockmol/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "blockmol/kernels.hpp"
#include "json.hpp"

namespace blockmol {

namespace {

void require(bool ok, const std::string &message) {
  if (!ok) {
    throw std::invalid_argument(message);
  }
}

// y = W x + b for a row-major W.
std::vector<double> affine(const DenseLayer &layer,
                           const std::vector<double> &x) {
  std::vector<double> y(layer.out_dim);
  for (std::size_t row = 0; row < layer.out_dim; ++row) {
    y[row] = layer.bias[row] +
             kernels::dot(layer.weight.data() + row * layer.in_dim, x.data(),
                          layer.in_dim);
  }
  return y;
}

void check_layer(const DenseLayer &layer, const std::string &name) {
  require(layer.in_dim > 0 && layer.out_dim > 0, name + ": empty shape");
  require(layer.weight.size() == layer.in_dim * layer.out_dim,
          name + ": weight size does not match shape");
  require(layer.bias.size() == layer.out_dim,
          name + ": bias size does not match shape");
}

DenseLayer make_layer(std::size_t in_dim, std::size_t out_dim) {
  DenseLayer layer;
  layer.in_dim = in_dim;
  layer.out_dim = out_dim;
  layer.weight.assign(in_dim * out_dim, 0.0);
  layer.bias.assign(out_dim, 0.0);
  return layer;
}

}  // namespace

EncoderModel::EncoderModel(std::vector<DenseLayer> layers, DenseLayer adapter)
    : layers_(std::move(layers)), adapter_(std::move(adapter)) {
  check_shapes();
}

void EncoderModel::check_shapes() const {
  require(!layers_.empty(), "encoder: at least one layer required");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    check_layer(layers_[i], "encoder layer " + std::to_string(i));
    const std::size_t expected_in =
        i == 0 ? kFeatureDim : layers_[i - 1].out_dim;
    require(layers_[i].in_dim == expected_in,
            "encoder layer " + std::to_string(i) + ": input width mismatch");
  }
  check_layer(adapter_, "encoder adapter");
  require(adapter_.in_dim == layers_.back().out_dim,
          "encoder adapter: input width mismatch");
}

EncoderModel EncoderModel::zero(std::size_t layers, std::size_t hidden,
                                std::size_t embedding) {
  std::vector<DenseLayer> stack;
  for (std::size_t i = 0; i < layers; ++i) {
    stack.push_back(make_layer(i == 0 ? kFeatureDim : hidden, hidden));
  }
  return EncoderModel(std::move(stack), make_layer(hidden, embedding));
}

EncoderModel EncoderModel::seeded(std::uint64_t seed, std::size_t layers,
                                  std::size_t hidden, std::size_t embedding) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  EncoderModel model = zero(layers, hidden, embedding);
  auto fill = [&](DenseLayer &layer) {
    for (double &w : layer.weight) {
      w = dist(rng);
    }
    for (double &b : layer.bias) {
      b = dist(rng);
    }
  };
  for (DenseLayer &layer : model.layers_) {
    fill(layer);
  }
  fill(model.adapter_);
  return model;
}

std::string EncoderModel::to_json_text() const {
  nlohmann::ordered_json doc;
  doc["type"] = "encoder";
  doc["version"] = 1;
  doc["feature_dim"] = kFeatureDim;
  doc["hidden_dim"] = hidden_dim();
  doc["embedding_dim"] = embedding_dim();
  doc["layers"] = layer_count();
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  auto emit = [&tensors](const std::string &name, const DenseLayer &layer) {
    tensors.push_back({{"name", name + ".weight"},
                       {"shape", {layer.out_dim, layer.in_dim}},
                       {"data", layer.weight}});
    tensors.push_back({{"name", name + ".bias"},
                       {"shape", {layer.out_dim}},
                       {"data", layer.bias}});
  };
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    emit("layer." + std::to_string(i), layers_[i]);
  }
  emit("adapter", adapter_);
  doc["tensors"] = std::move(tensors);
  return doc.dump();
}

EncoderModel EncoderModel::from_json_text(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("encoder model: bad JSON: ") +
                                e.what());
  }
  require(doc.is_object() && doc.value("type", "") == "encoder",
          "encoder model: wrong container type");
  require(doc.value("version", 0) == 1, "encoder model: unsupported version");
  require(doc.value("feature_dim", std::size_t{0}) == kFeatureDim,
          "encoder model: unsupported feature layout");
  const auto layer_total = doc.value("layers", std::size_t{0});
  require(layer_total >= 1, "encoder model: at least one layer required");
  require(doc.contains("tensors") && doc["tensors"].is_array(),
          "encoder model: missing tensors");

  std::map<std::string, DenseLayer> parts;
  for (const auto &tensor : doc["tensors"]) {
    require(tensor.is_object() && tensor.contains("name") &&
                tensor.contains("shape") && tensor.contains("data"),
            "encoder model: malformed tensor entry");
    const std::string name = tensor["name"].get<std::string>();
    const auto shape = tensor["shape"].get<std::vector<std::size_t>>();
    const auto data = tensor["data"].get<std::vector<double>>();
    const bool is_weight = name.size() > 7 &&
                           name.compare(name.size() - 7, 7, ".weight") == 0;
    const bool is_bias =
        name.size() > 5 && name.compare(name.size() - 5, 5, ".bias") == 0;
    require(is_weight || is_bias, "encoder model: unknown tensor " + name);
    const std::string base =
        name.substr(0, name.size() - (is_weight ? 7 : 5));
    DenseLayer &layer = parts[base];
    if (is_weight) {
      require(shape.size() == 2, "encoder model: " + name + " needs 2-d shape");
      require(data.size() == shape[0] * shape[1],
              "encoder model: " + name + " data does not match shape");
      layer.out_dim = shape[0];
      layer.in_dim = shape[1];
      layer.weight = data;
    } else {
      require(shape.size() == 1, "encoder model: " + name + " needs 1-d shape");
      require(data.size() == shape[0],
              "encoder model: " + name + " data does not match shape");
      layer.bias = data;
    }
  }

  std::vector<DenseLayer> stack;
  for (std::size_t i = 0; i < layer_total; ++i) {
    const auto it = parts.find("layer." + std::to_string(i));
    require(it != parts.end(),
            "encoder model: missing tensors for layer " + std::to_string(i));
    stack.push_back(it->second);
  }
  const auto adapter_it = parts.find("adapter");
  require(adapter_it != parts.end(), "encoder model: missing adapter tensors");
  return EncoderModel(std::move(stack), adapter_it->second);
}

std::vector<double> node_features(const MolecularGraph &g, int atom) {
  std::vector<double> f(EncoderModel::kFeatureDim, 0.0);
  const Atom &a = g.atom(atom);
  f[static_cast<std::size_t>(a.element)] = 1.0;
  const int charge = std::clamp(static_cast<int>(a.formal_charge), -2, 2);
  f[11 + static_cast<std::size_t>(charge + 2)] = 1.0;
  f[16 + (a.aromatic ? 1 : 0)] = 1.0;
  const int degree = std::min(g.degree(atom), 6);
  f[18 + static_cast<std::size_t>(degree)] = 1.0;
  return f;
}

std::vector<double> gnn_forward(const MolecularGraph &g,
                                const EncoderModel &model) {
  const int n = g.atom_count();
  require(n > 0, "gnn_forward: empty graph");

  // Position atoms by canonical rank so the summation order, and with it
  // every output bit, is independent of the input numbering.
  const std::vector<int> ranks = canonical_ranks(g);
  std::vector<int> atom_at(n);
  for (int a = 0; a < n; ++a) {
    atom_at[static_cast<std::size_t>(ranks[static_cast<std::size_t>(a)])] = a;
  }
  std::vector<std::vector<int>> adjacency(n);
  for (const Bond &b : g.bonds()) {
    adjacency[static_cast<std::size_t>(ranks[static_cast<std::size_t>(b.a)])]
        .push_back(ranks[static_cast<std::size_t>(b.b)]);
    adjacency[static_cast<std::size_t>(ranks[static_cast<std::size_t>(b.b)])]
        .push_back(ranks[static_cast<std::size_t>(b.a)]);
  }
  for (auto &list : adjacency) {
    std::sort(list.begin(), list.end());
  }

  std::vector<std::vector<double>> h(static_cast<std::size_t>(n));
  for (int pos = 0; pos < n; ++pos) {
    h[static_cast<std::size_t>(pos)] =
        node_features(g, atom_at[static_cast<std::size_t>(pos)]);
  }

  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const DenseLayer &layer = model.layers()[l];
    const bool last_round = l + 1 == model.layer_count();
    std::vector<std::vector<double>> next(static_cast<std::size_t>(n));
    for (int pos = 0; pos < n; ++pos) {
      std::vector<double> message = h[static_cast<std::size_t>(pos)];
      for (int nbr : adjacency[static_cast<std::size_t>(pos)]) {
        const std::vector<double> &other = h[static_cast<std::size_t>(nbr)];
        for (std::size_t k = 0; k < message.size(); ++k) {
          message[k] += other[k];
        }
      }
      std::vector<double> z = affine(layer, message);
      if (!last_round) {
        for (double &v : z) {
          v = v > 0.0 ? v : 0.0;
        }
      }
      next[static_cast<std::size_t>(pos)] = std::move(z);
    }
    h = std::move(next);
  }

  std::vector<double> pooled(model.hidden_dim(), 0.0);
  for (const std::vector<double> &row : h) {
    for (std::size_t k = 0; k < pooled.size(); ++k) {
      pooled[k] += row[k];
    }
  }
  for (double &v : pooled) {
    v /= static_cast<double>(n);
  }
  return affine(model.adapter(), pooled);
}

std::vector<double> gnn_forward(const BuildingBlock &block,
                                const EncoderModel &model) {
  return gnn_forward(block.graph, model);
}

void populate_block_embeddings(Vocabulary &vocab, const EncoderModel &model) {
  for (int id = 0; id < vocab.size(); ++id) {
    const MolecularGraph g = parse_smiles(vocab.by_id(id).canonical_form);
    vocab.set_embedding(id, gnn_forward(g, model));
  }
}

CombinedVocab make_combined_vocab(
    std::vector<std::pair<std::string, std::vector<double>>> text,
    Vocabulary blocks) {
  CombinedVocab cv;
  cv.blocks = std::move(blocks);
  std::size_t dim = 0;
  for (int id = 0; id < cv.blocks.size(); ++id) {
    const auto &embedding = cv.blocks.by_id(id).embedding;
    if (embedding.has_value()) {
      dim = embedding->size();
      break;
    }
  }
  for (auto &[label, values] : text) {
    if (dim == 0) {
      dim = values.size();
    }
    require(values.size() == dim,
            "combined vocabulary: embedding width mismatch for " + label);
    cv.text_labels.push_back(std::move(label));
    cv.text_embeddings.push_back(std::move(values));
  }
  for (int id = 0; id < cv.blocks.size(); ++id) {
    const auto &embedding = cv.blocks.by_id(id).embedding;
    require(!embedding.has_value() || embedding->size() == dim,
            "combined vocabulary: embedding width mismatch for block " +
                std::to_string(id));
  }
  return cv;
}

std::vector<double> block_logits(const std::vector<double> &context,
                                 const CombinedVocab &vocab) {
  std::vector<double> logits;
  logits.reserve(vocab.combined_size());
  for (std::size_t t = 0; t < vocab.text_count(); ++t) {
    const std::vector<double> &e = vocab.text_embeddings[t];
    require(e.size() == context.size(),
            "block_logits: text embedding width mismatch");
    logits.push_back(kernels::dot(context.data(), e.data(), e.size()));
  }
  for (int id = 0; id < vocab.blocks.size(); ++id) {
    const auto &embedding = vocab.blocks.by_id(id).embedding;
    require(embedding.has_value(), "block_logits: block " +
                                       std::to_string(id) +
                                       " has no embedding");
    require(embedding->size() == context.size(),
            "block_logits: block embedding width mismatch");
    logits.push_back(
        kernels::dot(context.data(), embedding->data(), embedding->size()));
  }
  return logits;
}

double cce_loss(const std::vector<std::vector<double>> &logit_sequences,
                const std::vector<int> &targets) {
  require(logit_sequences.size() == targets.size(),
          "cce_loss: one target per position required");
  require(!logit_sequences.empty(), "cce_loss: empty sequence");
  double total = 0.0;
  for (std::size_t pos = 0; pos < targets.size(); ++pos) {
    const std::vector<double> &row = logit_sequences[pos];
    const int target = targets[pos];
    if (target < 0 || static_cast<std::size_t>(target) >= row.size()) {
      throw std::out_of_range("cce_loss: target id out of range");
    }
    total += kernels::log_sum_exp(row.data(), row.size()) -
             row[static_cast<std::size_t>(target)];
  }
  return total / static_cast<double>(targets.size());
}

std::vector<std::pair<int, double>> nearest_neighbors(
    const std::vector<double> &query, const Vocabulary &blocks, int k) {
  require(k >= 0 && k <= blocks.size(),
          "nearest_neighbors: k outside [0, block count]");
  std::vector<std::pair<int, double>> scored;
  scored.reserve(static_cast<std::size_t>(blocks.size()));
  for (int id = 0; id < blocks.size(); ++id) {
    const auto &embedding = blocks.by_id(id).embedding;
    require(embedding.has_value(), "nearest_neighbors: block " +
                                       std::to_string(id) +
                                       " has no embedding");
    require(embedding->size() == query.size(),
            "nearest_neighbors: embedding width mismatch");
    scored.emplace_back(
        id, kernels::cosine(query.data(), embedding->data(), query.size()));
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto &a, const auto &b) {
              if (a.second != b.second) {
                return a.second > b.second;
              }
              return a.first < b.first;
            });
  scored.resize(static_cast<std::size_t>(k));
  return scored;
}

std::vector<std::pair<int, double>> nearest_neighbors(
    const BuildingBlock &block, const CombinedVocab &vocab, int k) {
  const Vocabulary::Entry *entry = vocab.blocks.find(block.canonical_form);
  require(entry != nullptr,
          "nearest_neighbors: query block not in vocabulary");
  require(entry->embedding.has_value(),
          "nearest_neighbors: query block has no embedding");
  return nearest_neighbors(*entry->embedding, vocab.blocks, k);
}

std::vector<std::pair<std::string, std::vector<double>>>
read_text_embeddings_tsv(const std::string &text) {
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) {
        break;
      }
      start = tab + 1;
    }
    require(fields.size() >= 2, "text embeddings: row needs label and values");
    std::vector<double> values;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[i], &used);
      } catch (const std::exception &) {
        throw std::invalid_argument("text embeddings: bad value " + fields[i]);
      }
      require(used == fields[i].size(),
              "text embeddings: bad value " + fields[i]);
      values.push_back(v);
    }
    if (dim == 0) {
      dim = values.size();
    }
    require(values.size() == dim, "text embeddings: inconsistent width");
    rows.emplace_back(fields[0], std::move(values));
  }
  return rows;
}

std::string block_embeddings_tsv(const Vocabulary &vocab) {
  std::string out;
  char buffer[64];
  for (int id = 0; id < vocab.size(); ++id) {
    const auto &embedding = vocab.by_id(id).embedding;
    require(embedding.has_value(), "block embeddings: block " +
                                       std::to_string(id) +
                                       " has no embedding");
    out += std::to_string(id);
    for (double v : *embedding) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", v);
      out += '\t';
      out += buffer;
    }
    out += '\n';
  }
  return out;
}

}  // namespace blockmol
