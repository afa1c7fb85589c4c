//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "blockmol/vocab.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace blockmol {

using ordered_json = nlohmann::ordered_json;

const Vocabulary::Entry &Vocabulary::by_id(int id) const {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("block id " + std::to_string(id) +
                            " outside vocabulary of size " +
                            std::to_string(size()));
  }
  return entries_[static_cast<std::size_t>(id)];
}

const Vocabulary::Entry *Vocabulary::find(const std::string &canonical_form) const {
  const auto it = id_of_form_.find(canonical_form);
  if (it == id_of_form_.end()) {
    return nullptr;
  }
  return &entries_[static_cast<std::size_t>(it->second)];
}

void Vocabulary::set_embedding(int id, std::vector<double> embedding) {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("block id outside vocabulary");
  }
  entries_[static_cast<std::size_t>(id)].embedding = std::move(embedding);
}

std::string Vocabulary::to_jsonl() const {
  std::ostringstream out;
  ordered_json header;
  header["type"] = "vocab";
  header["version"] = 1;
  header["cap_budget"] = cap_budget_;
  header["mid_budget"] = mid_budget_;
  {
    std::ostringstream hex;
    hex << std::hex << corpus_hash_;
    header["corpus_hash"] = hex.str();
  }
  header["entries"] = size();
  out << header.dump() << '\n';
  for (const Entry &e : entries_) {
    ordered_json line;
    line["id"] = e.id;
    line["canonical_form"] = e.canonical_form;
    line["kind"] = e.kind == BlockKind::kMid ? "Mid" : "Cap";
    line["frequency"] = e.frequency;
    if (e.embedding) {
      line["embedding"] = *e.embedding;
    }
    out << line.dump() << '\n';
  }
  return out.str();
}

Vocabulary Vocabulary::from_jsonl(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("empty vocabulary file");
  }
  const ordered_json header = ordered_json::parse(line);
  if (header.at("type").get<std::string>() != "vocab" ||
      header.at("version").get<int>() != 1) {
    throw std::invalid_argument("not a version-1 vocabulary file");
  }
  Vocabulary vocab;
  vocab.cap_budget_ = header.at("cap_budget").get<int>();
  vocab.mid_budget_ = header.at("mid_budget").get<int>();
  vocab.corpus_hash_ =
      std::stoull(header.at("corpus_hash").get<std::string>(), nullptr, 16);
  const int expected = header.at("entries").get<int>();
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const ordered_json rec = ordered_json::parse(line);
    Entry e;
    e.id = rec.at("id").get<int>();
    e.canonical_form = rec.at("canonical_form").get<std::string>();
    e.kind = rec.at("kind").get<std::string>() == "Mid" ? BlockKind::kMid
                                                        : BlockKind::kCap;
    e.frequency = rec.at("frequency").get<std::uint64_t>();
    if (rec.contains("embedding")) {
      e.embedding = rec.at("embedding").get<std::vector<double>>();
    }
    if (e.id != static_cast<int>(vocab.entries_.size())) {
      throw std::invalid_argument("vocabulary ids must be dense and ordered");
    }
    vocab.id_of_form_[e.canonical_form] = e.id;
    vocab.entries_.push_back(std::move(e));
  }
  if (vocab.size() != expected) {
    throw std::invalid_argument("vocabulary entry count disagrees with header");
  }
  return vocab;
}

std::string Vocabulary::stats_report() const {
  std::uint64_t total = 0;
  int caps = 0;
  int mids = 0;
  for (const Entry &e : entries_) {
    total += e.frequency;
    if (e.kind == BlockKind::kMid) {
      ++mids;
    } else {
      ++caps;
    }
  }
  std::ostringstream out;
  out << "vocabulary entries: " << size() << " (" << caps << " cap, " << mids
      << " mid)\n";
  out << "budgets: cap " << cap_budget_ << ", mid " << mid_budget_ << '\n';
  out << "total block occurrences: " << total << '\n';
  {
    std::ostringstream hex;
    hex << std::hex << corpus_hash_;
    out << "corpus hash: " << hex.str() << '\n';
  }
  // power-of-two frequency histogram
  std::map<std::uint64_t, int> buckets;
  for (const Entry &e : entries_) {
    std::uint64_t lo = 1;
    while (lo * 2 <= e.frequency) {
      lo *= 2;
    }
    ++buckets[lo];
  }
  out << "frequency histogram (bucket lower bound: entries):\n";
  for (const auto &[lo, n] : buckets) {
    out << "  " << lo << ": " << n << '\n';
  }
  const int show = std::min(10, size());
  out << "top " << show << " entries:\n";
  for (int i = 0; i < show; ++i) {
    const Entry &e = entries_[static_cast<std::size_t>(i)];
    out << "  [" << e.id << "] " << e.canonical_form << " x" << e.frequency
        << (e.kind == BlockKind::kMid ? " (mid)" : " (cap)") << '\n';
  }
  return out.str();
}

void VocabBuilder::add_result(const TokenizationResult &result) {
  for (const BuildingBlock &b : result.blocks) {
    add_count(b.canonical_form, b.kind, 1);
  }
}

void VocabBuilder::add_count(const std::string &canonical_form, BlockKind kind,
                             std::uint64_t count) {
  auto [it, inserted] = counts_.try_emplace(canonical_form, kind, count);
  if (!inserted) {
    if (it->second.first != kind) {
      throw std::invalid_argument("block kind flip for " + canonical_form);
    }
    it->second.second += count;
  }
}

void VocabBuilder::merge(const VocabBuilder &other) {
  for (const auto &[form, entry] : other.counts_) {
    add_count(form, entry.first, entry.second);
  }
}

namespace {

std::uint64_t fnv1a_extend(std::uint64_t hash, std::string_view bytes) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace

Vocabulary VocabBuilder::build(int cap_budget, int mid_budget) const {
  if (cap_budget < 0 || mid_budget < 0) {
    throw std::invalid_argument("budgets must be >= 0");
  }
  // Corpus hash over the sorted full count map: shard/insertion order free.
  std::uint64_t hash = 14695981039346656037ULL;
  for (const auto &[form, entry] : counts_) {  // std::map iterates sorted
    hash = fnv1a_extend(hash, form);
    hash = fnv1a_extend(hash, "\x1f");
    hash = fnv1a_extend(hash, std::to_string(entry.second));
    hash = fnv1a_extend(hash, "\n");
  }

  struct Candidate {
    std::string form;
    BlockKind kind;
    std::uint64_t frequency;
  };
  std::vector<Candidate> caps;
  std::vector<Candidate> mids;
  for (const auto &[form, entry] : counts_) {
    (entry.first == BlockKind::kMid ? mids : caps)
        .push_back(Candidate{form, entry.first, entry.second});
  }
  const auto by_rank = [](const Candidate &x, const Candidate &y) {
    if (x.frequency != y.frequency) {
      return x.frequency > y.frequency;
    }
    return x.form < y.form;
  };
  std::sort(caps.begin(), caps.end(), by_rank);
  std::sort(mids.begin(), mids.end(), by_rank);
  if (static_cast<int>(caps.size()) > cap_budget) {
    caps.resize(static_cast<std::size_t>(cap_budget));
  }
  if (static_cast<int>(mids.size()) > mid_budget) {
    mids.resize(static_cast<std::size_t>(mid_budget));
  }
  std::vector<Candidate> kept;
  kept.reserve(caps.size() + mids.size());
  kept.insert(kept.end(), caps.begin(), caps.end());
  kept.insert(kept.end(), mids.begin(), mids.end());
  std::sort(kept.begin(), kept.end(), by_rank);

  Vocabulary vocab;
  vocab.cap_budget_ = cap_budget;
  vocab.mid_budget_ = mid_budget;
  vocab.corpus_hash_ = hash;
  for (const Candidate &c : kept) {
    Vocabulary::Entry e;
    e.id = static_cast<int>(vocab.entries_.size());
    e.canonical_form = c.form;
    e.kind = c.kind;
    e.frequency = c.frequency;
    vocab.id_of_form_[e.canonical_form] = e.id;
    vocab.entries_.push_back(std::move(e));
  }
  return vocab;
}

EncodeOutcome encode(const TokenizationResult &result, const Vocabulary &vocab) {
  if (result.coverage != Coverage::kComplete) {
    throw std::invalid_argument("encode requires Complete coverage");
  }
  EncodeOutcome outcome;
  for (const BuildingBlock &b : result.blocks) {
    const Vocabulary::Entry *entry = vocab.find(b.canonical_form);
    if (entry == nullptr) {
      outcome.ids.push_back(-1);
      outcome.oov.push_back(b.canonical_form);
    } else {
      outcome.ids.push_back(entry->id);
    }
  }
  return outcome;
}

JunctionPlan junction_plan_of(const TokenizationResult &result) {
  JunctionPlan plan;
  plan.junctions = result.junctions;
  for (const BuildingBlock &b : result.blocks) {
    std::vector<int> row;
    for (const AttachmentPoint &ap : b.attachments) {
      row.push_back(ap.junction_id);
    }
    plan.assignments.push_back(std::move(row));
  }
  return plan;
}

MolecularGraph decode(const std::vector<int> &ids, const JunctionPlan &plan,
                      const Vocabulary &vocab) {
  if (ids.size() != plan.assignments.size()) {
    throw std::invalid_argument("id sequence and junction plan disagree");
  }
  std::map<int, Reaction> reaction_of;
  for (const Junction &j : plan.junctions) {
    reaction_of[j.id] = j.reaction;
  }
  std::vector<BuildingBlock> blocks;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Vocabulary::Entry &entry = vocab.by_id(ids[i]);
    // Roles are read back from the role tags inside the canonical form.
    const MolecularGraph g = parse_smiles(entry.canonical_form);
    std::vector<int> wildcards;
    for (int v = 0; v < g.atom_count(); ++v) {
      if (g.atom(v).element == Element::kWildcard) {
        wildcards.push_back(v);
      }
    }
    const std::vector<int> ranks = canonical_ranks(g);
    std::sort(wildcards.begin(), wildcards.end(), [&](int x, int y) {
      return ranks[static_cast<std::size_t>(x)] <
             ranks[static_cast<std::size_t>(y)];
    });
    if (wildcards.size() != plan.assignments[i].size()) {
      throw std::invalid_argument("junction assignment arity mismatch for " +
                                  entry.canonical_form);
    }
    std::vector<AttachmentPoint> attachments;
    for (std::size_t k = 0; k < wildcards.size(); ++k) {
      const auto role = role_from_tag(g.atom(wildcards[k]).map_class);
      if (!role) {
        throw std::invalid_argument("stored block lacks a role tag: " +
                                    entry.canonical_form);
      }
      AttachmentPoint ap;
      ap.reaction = role->first;
      ap.side = role->second;
      ap.junction_id = plan.assignments[i][k];
      attachments.push_back(ap);
    }
    blocks.push_back(block_from_canonical(entry.canonical_form, attachments));
  }
  return reassemble(blocks, plan.junctions);
}

}  // namespace blockmol
