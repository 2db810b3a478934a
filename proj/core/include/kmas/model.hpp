#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kmas/kg.hpp"
#include "kmas/relation_graph.hpp"
#include "kmas/rng.hpp"
#include "kmas/types.hpp"

namespace kmas {

// One message-passing layer: state[v] <- act(weight * (agg[v] + state[v]) + bias).
struct LayerParams {
  Eigen::MatrixXd weight;  // d x d
  Eigen::VectorXd bias;    // d
};

// Two-layer score head: d -> d (ReLU) -> 1.
struct ScoreMlp {
  Eigen::MatrixXd w1;  // d x d
  Eigen::VectorXd b1;  // d
  Eigen::VectorXd w2;  // d
  double b2 = 0.0;
};

// Named view over one parameter tensor's storage; the canonical tensor
// order (etype_embed, rel.*, ent.*, score.*) is what the initializer,
// optimizer, and checkpoint all iterate.
struct TensorRef {
  std::string name;
  double* data;
  Eigen::Index size;
};

// All learnable state of the host model. Doubles as the gradient
// accumulator (see zeros_like).
struct ModelParams {
  int d = 32;
  Eigen::MatrixXd etype_embed;  // kNumEdgeTypes x d, learnable interaction embeddings
  std::vector<LayerParams> rel_layers;
  std::vector<LayerParams> ent_layers;
  ScoreMlp score_mlp;

  // All tensors uniform in [-1/sqrt(d), 1/sqrt(d)], reproducible by seed.
  static ModelParams init(int d, int num_rel_layers, int num_ent_layers,
                          std::uint64_t seed);
  static ModelParams zeros_like(const ModelParams& other);

  std::vector<TensorRef> tensors();
  void set_zero();
  void add_scaled(const ModelParams& other, double scale);  // this += scale * other
  bool all_finite() const;
  bool same_shape(const ModelParams& other) const;
};

// Forward record of one encoder run: per-layer input states and the
// pre-linear sums (aggregate + state) needed for exact reverse-mode
// gradients.
struct EncodeTape {
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<Eigen::MatrixXd> pre_linear;
};

// Conditional relation embeddings: the query relation starts at all-ones,
// every other node at zero; messages are state[src] .* etype_embed[etype],
// sum-aggregated, ReLU between layers, linear last layer. Different query
// relations generally produce different outputs.
Eigen::MatrixXd encode_relations(const ModelParams& p, const RelationGraph& rg,
                                 RelationId query_rel, EncodeTape* tape = nullptr);

// Conditional entity embeddings: X0[head] = H[rel], zeros elsewhere; the
// message along triple (u, r', v) is state[u] .* H[r'].
Eigen::MatrixXd encode_entities(const ModelParams& p, const KnowledgeGraph& g,
                                const Eigen::MatrixXd& H, EntityId head,
                                RelationId rel, EncodeTape* tape = nullptr);

// Score head on one row of X.
double score(const ModelParams& p, const Eigen::MatrixXd& X, EntityId candidate);

// Full record of one conditional scoring pass (relation encoder -> entity
// encoder -> score head over a candidate list); everything backward() needs.
struct GradTape {
  const RelationGraph* rg = nullptr;
  const KnowledgeGraph* g = nullptr;
  RelationId query_rel = -1;
  EntityId head = -1;
  EncodeTape rel_tape;
  EncodeTape ent_tape;
  Eigen::MatrixXd H;  // relation encoder output
  Eigen::MatrixXd X;  // entity encoder output
  std::vector<EntityId> candidates;
  Eigen::MatrixXd mlp_hidden_pre;  // n_candidates x d, pre-activation
  Eigen::VectorXd scores;
};

// Scores every candidate of the query (head, rel, ?) from one conditional
// pass. Pass a tape to record the forward for backward().
Eigen::VectorXd score_query(const ModelParams& p, const RelationGraph& rg,
                            const KnowledgeGraph& g, EntityId head, RelationId rel,
                            std::span<const EntityId> candidates,
                            GradTape* tape = nullptr);

// Exact reverse-mode gradients: accumulates d(loss)/d(params) into grads
// given d(loss)/d(score_i) for each scored candidate.
void backward(const GradTape& tape, const ModelParams& p,
              const Eigen::VectorXd& dscores, ModelParams& grads);

}  // namespace kmas
