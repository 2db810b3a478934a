#include "kmas/kg.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <unordered_set>

namespace kmas {

namespace {

struct TripleHash {
  std::size_t operator()(const Triple& t) const {
    std::uint64_t x = static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.head));
    x = x * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(t.rel);
    x = x * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(t.tail);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return static_cast<std::size_t>(x);
  }
};

std::uint64_t pair_key(EntityId h, RelationId r) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(h)) << 32) |
         static_cast<std::uint32_t>(r);
}

void sort_unique(std::vector<EntityId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::string KnowledgeGraph::relation_name(RelationId r) const {
  const RelationId off = inverse_offset();
  if (has_inverses && r >= off) return relations.name(r - off) + "^-1";
  return relations.name(r);
}

std::optional<RelationId> KnowledgeGraph::find_relation(std::string_view name) const {
  if (auto id = relations.find(name)) return *id;
  constexpr std::string_view suffix = "^-1";
  if (has_inverses && name.size() > suffix.size() && name.ends_with(suffix)) {
    if (auto id = relations.find(name.substr(0, name.size() - suffix.size())))
      return *id + inverse_offset();
  }
  return std::nullopt;
}

const std::vector<EntityId>& KnowledgeGraph::candidate_tails(RelationId rel) const {
  if (!valid_relation(rel))
    throw DataError("candidate_tails: invalid relation id " + std::to_string(rel));
  return tails_of[rel];
}

const std::vector<EntityId>& KnowledgeGraph::candidate_heads(RelationId rel) const {
  if (!valid_relation(rel))
    throw DataError("candidate_heads: invalid relation id " + std::to_string(rel));
  return heads_of[rel];
}

void TripleIndex::add(const Triple& t) {
  buckets_[pair_key(t.head, t.rel)].push_back(t.tail);
}

void TripleIndex::finalize() {
  for (auto& [key, tails] : buckets_) sort_unique(tails);
}

bool TripleIndex::contains(EntityId h, RelationId r, EntityId t) const {
  auto it = buckets_.find(pair_key(h, r));
  if (it == buckets_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), t);
}

std::vector<RawTriple> load_triples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open triple file: " + path);

  std::vector<RawTriple> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto first = line.find('\t');
    const auto second = first == std::string::npos ? std::string::npos
                                                   : line.find('\t', first + 1);
    if (first == std::string::npos || second == std::string::npos ||
        line.find('\t', second + 1) != std::string::npos)
      throw ParseError("expected exactly three tab-separated fields", path, line_no);

    RawTriple t{line.substr(0, first), line.substr(first + 1, second - first - 1),
                line.substr(second + 1)};
    if (t.head.empty() || t.rel.empty() || t.tail.empty())
      throw ParseError("empty field in triple", path, line_no);
    out.push_back(std::move(t));
  }
  if (in.bad()) throw DataError("I/O error while reading " + path);
  return out;
}

KnowledgeGraph build_graph(const std::vector<RawTriple>& raw, bool add_inverses) {
  KnowledgeGraph g;
  g.has_inverses = add_inverses;

  std::unordered_set<Triple, TripleHash> seen;
  seen.reserve(raw.size() * 2);
  for (const RawTriple& rt : raw) {
    Triple t;
    t.head = g.entities.get_or_add(rt.head);
    t.tail = g.entities.get_or_add(rt.tail);
    t.rel = g.relations.get_or_add(rt.rel);
    if (seen.insert(t).second) g.triples.push_back(t);
  }
  g.num_original_triples = g.triples.size();

  if (add_inverses) {
    const RelationId off = g.inverse_offset();
    g.triples.reserve(2 * g.num_original_triples);
    for (std::size_t i = 0; i < g.num_original_triples; ++i) {
      const Triple& t = g.triples[i];
      g.triples.push_back(Triple{t.tail, static_cast<RelationId>(t.rel + off), t.head});
    }
  }

  const auto num_rel = static_cast<std::size_t>(g.num_relations());
  g.tails_of.resize(num_rel);
  g.heads_of.resize(num_rel);
  g.in_triples.resize(g.num_entities());
  for (const Triple& t : g.triples) {
    g.tails_of[t.rel].push_back(t.tail);
    g.heads_of[t.rel].push_back(t.head);
    g.in_triples[t.tail].emplace_back(t.head, t.rel);
  }
  for (auto& v : g.tails_of) sort_unique(v);
  for (auto& v : g.heads_of) sort_unique(v);
  return g;
}

namespace {

// Maps raw query triples into the graph's vocabulary; unmappable ones are
// counted, not loaded.
long map_queries(const KnowledgeGraph& g, const std::vector<RawTriple>& raw,
                 std::vector<Triple>& out) {
  long skipped = 0;
  out.reserve(raw.size());
  for (const RawTriple& rt : raw) {
    const auto h = g.entities.find(rt.head);
    const auto r = g.relations.find(rt.rel);
    const auto t = g.entities.find(rt.tail);
    if (!h || !r || !t) {
      ++skipped;
      continue;
    }
    out.push_back(Triple{*h, *r, *t});
  }
  return skipped;
}

}  // namespace

SplitDataset load_split(const std::string& dir, bool add_inverses) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  if (!fs::is_directory(base)) throw DataError("dataset directory not found: " + dir);

  const fs::path graph_file =
      fs::exists(base / "graph.txt") ? base / "graph.txt" : base / "train.txt";
  if (!fs::exists(graph_file))
    throw DataError("dataset has neither graph.txt nor train.txt: " + dir);

  SplitDataset split;
  split.name = base.filename().string();
  split.setting = fs::exists(base / "graph.txt") ? Setting::InductiveE
                                                 : Setting::Transductive;
  split.graph = build_graph(load_triples(graph_file.string()), add_inverses);

  const auto load_queries = [&](const char* file, std::vector<Triple>& out) -> long {
    const fs::path p = base / file;
    if (!fs::exists(p)) return 0;
    return map_queries(split.graph, load_triples(p.string()), out);
  };
  split.skipped_train = load_queries("train.txt", split.train_queries);
  split.skipped_valid = load_queries("valid.txt", split.valid_queries);
  split.skipped_test = load_queries("test.txt", split.test_queries);
  return split;
}

}  // namespace kmas
