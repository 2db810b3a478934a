#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kmas/types.hpp"

namespace kmas {

// Dense string -> id vocabulary, first-occurrence order.
class Vocab {
 public:
  std::int32_t get_or_add(std::string_view s) {
    auto it = index_.find(std::string(s));
    if (it != index_.end()) return it->second;
    const auto id = static_cast<std::int32_t>(names_.size());
    names_.emplace_back(s);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<std::int32_t> find(std::string_view s) const {
    auto it = index_.find(std::string(s));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(std::int32_t id) const { return names_.at(id); }
  std::int32_t size() const { return static_cast<std::int32_t>(names_.size()); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::int32_t> index_;
};

struct RawTriple {
  std::string head, rel, tail;
};

// Indexed, optionally inverse-augmented knowledge graph. Immutable after
// construction; safe to share read-only across threads.
//
// With inverse augmentation, relation ids [0, inverse_offset) are the
// original relations and id r maps to its inverse r + inverse_offset.
// triples[] stores the deduplicated originals first, then the inverses,
// so [0, num_original_triples) is the positive-sampling pool.
class KnowledgeGraph {
 public:
  Vocab entities;
  Vocab relations;  // original relation names only
  std::vector<Triple> triples;
  std::size_t num_original_triples = 0;
  bool has_inverses = false;

  // Per (augmented) relation id: sorted unique entity ids seen in that role.
  std::vector<std::vector<EntityId>> tails_of;
  std::vector<std::vector<EntityId>> heads_of;

  // Per entity: incoming triples (src head, rel) — message-passing adjacency.
  std::vector<std::vector<std::pair<EntityId, RelationId>>> in_triples;

  std::int32_t num_entities() const { return entities.size(); }
  std::int32_t num_relations() const {
    return has_inverses ? 2 * relations.size() : relations.size();
  }
  RelationId inverse_offset() const { return relations.size(); }

  RelationId inverse_of(RelationId r) const {
    const RelationId off = inverse_offset();
    return r < off ? r + off : r - off;
  }

  bool valid_relation(RelationId r) const { return r >= 0 && r < num_relations(); }
  bool valid_entity(EntityId e) const { return e >= 0 && e < num_entities(); }

  std::string relation_name(RelationId r) const;
  // Resolves an original name or "<name>^-1" for the inverse.
  std::optional<RelationId> find_relation(std::string_view name) const;

  // {e : exists h with (h, rel, e) in triples}; sorted ascending.
  const std::vector<EntityId>& candidate_tails(RelationId rel) const;
  const std::vector<EntityId>& candidate_heads(RelationId rel) const;
};

// Membership index over a set of triples, keyed (head, rel) -> sorted tails.
class TripleIndex {
 public:
  void add(const Triple& t);
  void finalize();  // sort + dedup buckets; call once after the last add
  bool contains(EntityId h, RelationId r, EntityId t) const;

 private:
  std::unordered_map<std::uint64_t, std::vector<EntityId>> buckets_;
};

enum class Setting { Transductive, InductiveE, InductiveER };

// One dataset directory: the observed (message-passing) graph plus query
// triples mapped into its vocabulary.
struct SplitDataset {
  KnowledgeGraph graph;
  std::vector<Triple> train_queries;
  std::vector<Triple> valid_queries;
  std::vector<Triple> test_queries;
  Setting setting = Setting::Transductive;
  bool tails_only = false;
  std::string name;

  // Queries dropped at load because an entity/relation is absent from the
  // graph vocabulary (possible in inductive splits).
  long skipped_train = 0;
  long skipped_valid = 0;
  long skipped_test = 0;
};

// Reads one triple per nonempty line, exactly three tab-separated fields.
// Preserves file order; no deduplication. Throws ParseError (with line
// number) on malformed lines, DataError if the file cannot be read.
std::vector<RawTriple> load_triples(const std::string& path);

// Assigns dense ids in first-occurrence order (head, tail, then next triple;
// relations likewise), drops duplicate triples, builds occurrence indices,
// and, if add_inverses, doubles the relation space with reversed triples.
KnowledgeGraph build_graph(const std::vector<RawTriple>& raw, bool add_inverses = true);

// Loads a dataset directory: graph.txt if present (else train.txt) becomes
// the message-passing graph; train/valid/test.txt become query lists.
SplitDataset load_split(const std::string& dir, bool add_inverses = true);

}  // namespace kmas
