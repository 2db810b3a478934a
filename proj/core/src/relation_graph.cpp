#include "kmas/relation_graph.hpp"

#include <algorithm>
#include <unordered_set>

namespace kmas {

const char* to_string(EdgeType t) {
  switch (t) {
    case EdgeType::H2H: return "h2h";
    case EdgeType::T2T: return "t2t";
    case EdgeType::H2T: return "h2t";
    case EdgeType::T2H: return "t2h";
  }
  return "?";
}

RelationGraph build_relation_graph(const KnowledgeGraph& g) {
  RelationGraph rg;
  rg.num_relations = g.num_relations();

  // Invert the occurrence indices: which relations use entity e as head/tail.
  const auto n_ent = static_cast<std::size_t>(g.num_entities());
  std::vector<std::vector<RelationId>> rels_by_head(n_ent), rels_by_tail(n_ent);
  for (RelationId r = 0; r < rg.num_relations; ++r) {
    for (EntityId e : g.heads_of[r]) rels_by_head[e].push_back(r);
    for (EntityId e : g.tails_of[r]) rels_by_tail[e].push_back(r);
  }

  std::unordered_set<std::uint64_t> seen;
  const auto key = [](EdgeType t, RelationId i, RelationId j) {
    return (static_cast<std::uint64_t>(t) << 60) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 30) |
           static_cast<std::uint32_t>(j);
  };
  const auto emit = [&](EdgeType t, RelationId i, RelationId j) {
    if (seen.insert(key(t, i, j)).second) rg.edges.push_back(RelEdge{i, j, t});
  };

  for (std::size_t e = 0; e < n_ent; ++e) {
    const auto& hs = rels_by_head[e];
    const auto& ts = rels_by_tail[e];
    for (RelationId ri : hs)
      for (RelationId rj : hs) emit(EdgeType::H2H, ri, rj);
    for (RelationId ri : ts)
      for (RelationId rj : ts) emit(EdgeType::T2T, ri, rj);
    for (RelationId ri : hs)
      for (RelationId rj : ts) {
        emit(EdgeType::H2T, ri, rj);
        emit(EdgeType::T2H, rj, ri);
      }
  }

  std::sort(rg.edges.begin(), rg.edges.end(), [](const RelEdge& a, const RelEdge& b) {
    if (a.etype != b.etype) return a.etype < b.etype;
    if (a.src != b.src) return a.src < b.src;
    return a.dst < b.dst;
  });

  rg.in_edges.resize(rg.num_relations);
  for (const RelEdge& e : rg.edges) rg.in_edges[e.dst].emplace_back(e.src, e.etype);
  return rg;
}

}  // namespace kmas
