#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kmas/kg.hpp"
#include "kmas/types.hpp"

namespace kmas {

// How two relations share an entity: the first letter is the role of the
// entity in the source relation's triple, the second its role in the
// destination's. H2T(i, j) holds iff some head of r_i equals some tail of r_j.
enum class EdgeType : std::uint8_t { H2H = 0, T2T = 1, H2T = 2, T2H = 3 };

inline constexpr int kNumEdgeTypes = 4;

const char* to_string(EdgeType t);

struct RelEdge {
  RelationId src;
  RelationId dst;
  EdgeType etype;

  friend bool operator==(const RelEdge&, const RelEdge&) = default;
};

// Directed multigraph over relations with typed edges. Edges are unique per
// (src, dst, etype) and sorted by (etype, src, dst). Immutable once built.
struct RelationGraph {
  std::int32_t num_relations = 0;
  std::vector<RelEdge> edges;

  // Per destination relation: incoming (src, etype), in edge-sort order.
  std::vector<std::vector<std::pair<RelationId, EdgeType>>> in_edges;
};

// Enumerates the witnessed typed edges via entity -> (relation, role)
// inverted indices: O(|T| * max entity degree), not the O(|T|^2) pairwise
// scan. A triple can pair with itself, so (a, r, a) yields all four
// self-edges on r and (a, r, b) yields (r, r, H2H) and (r, r, T2T).
RelationGraph build_relation_graph(const KnowledgeGraph& g);

}  // namespace kmas
