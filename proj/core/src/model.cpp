#include "kmas/model.hpp"

#include <cmath>

namespace kmas {

namespace {

void check(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

// One round of message passing shared by both encoders. InEdges is a
// vector<vector<pair<id, factor-index>>> (incoming adjacency); factors is
// the matrix whose rows modulate messages (etype embeddings or H).
template <typename InEdges>
Eigen::MatrixXd run_layers(const std::vector<LayerParams>& layers,
                           const InEdges& in_edges, const Eigen::MatrixXd& factors,
                           Eigen::MatrixXd state, EncodeTape* tape) {
  const auto n = state.rows();
  const auto d = state.cols();
  const std::size_t num_layers = layers.size();
  if (tape) {
    tape->inputs.clear();
    tape->pre_linear.clear();
    tape->inputs.reserve(num_layers);
    tape->pre_linear.reserve(num_layers);
  }

  Eigen::MatrixXd agg(n, d);
  for (std::size_t l = 0; l < num_layers; ++l) {
    const LayerParams& layer = layers[l];
    check(layer.weight.rows() == d && layer.weight.cols() == d &&
              layer.bias.size() == d,
          "encoder layer dimensions do not match embedding width");

    agg.setZero();
    for (Eigen::Index v = 0; v < n; ++v)
      for (const auto& [u, k] : in_edges[v])
        agg.row(v) +=
            state.row(u).cwiseProduct(factors.row(static_cast<Eigen::Index>(k)));

    Eigen::MatrixXd pre = agg + state;
    if (tape) tape->inputs.push_back(std::move(state));
    Eigen::MatrixXd z = (pre * layer.weight.transpose()).rowwise() +
                        layer.bias.transpose();
    if (tape) tape->pre_linear.push_back(std::move(pre));
    state = (l + 1 < num_layers) ? z.cwiseMax(0.0) : std::move(z);
  }
  return state;
}

// Reverse of run_layers. d_factors may be null when factor gradients are
// not needed (relation encoder initial states are constants, but its
// factors — the etype embeddings — are learnable; for the entity encoder
// the factors are H). Returns the gradient w.r.t. the initial state.
template <typename InEdges>
Eigen::MatrixXd run_layers_backward(const std::vector<LayerParams>& layers,
                                    const InEdges& in_edges,
                                    const Eigen::MatrixXd& factors,
                                    const EncodeTape& tape,
                                    const Eigen::MatrixXd& final_output,
                                    Eigen::MatrixXd d_out,
                                    std::vector<LayerParams>& layer_grads,
                                    Eigen::MatrixXd* d_factors) {
  const auto n = d_out.rows();
  for (std::size_t l = layers.size(); l-- > 0;) {
    const LayerParams& layer = layers[l];
    const Eigen::MatrixXd& out =
        (l + 1 < layers.size()) ? tape.inputs[l + 1] : final_output;
    // Linear last layer; ReLU mask otherwise (derivative 0 at exactly 0).
    Eigen::MatrixXd dz = (l + 1 < layers.size())
                             ? d_out.cwiseProduct(
                                   (out.array() > 0.0).cast<double>().matrix())
                             : std::move(d_out);
    layer_grads[l].bias += dz.colwise().sum();
    layer_grads[l].weight += dz.transpose() * tape.pre_linear[l];
    Eigen::MatrixXd d_pre = dz * layer.weight;

    Eigen::MatrixXd d_state = d_pre;  // the `+ state` skip term
    const Eigen::MatrixXd& in = tape.inputs[l];
    for (Eigen::Index v = 0; v < n; ++v)
      for (const auto& [u, k] : in_edges[v]) {
        const auto f = static_cast<Eigen::Index>(k);
        d_state.row(u) += d_pre.row(v).cwiseProduct(factors.row(f));
        if (d_factors) d_factors->row(f) += d_pre.row(v).cwiseProduct(in.row(u));
      }
    d_out = std::move(d_state);
  }
  return d_out;
}

}  // namespace

ModelParams ModelParams::init(int d, int num_rel_layers, int num_ent_layers,
                              std::uint64_t seed) {
  check(d >= 1, "embedding width must be >= 1");
  check(num_rel_layers >= 0 && num_ent_layers >= 0, "layer counts must be >= 0");
  ModelParams p;
  p.d = d;
  p.etype_embed.resize(kNumEdgeTypes, d);
  p.rel_layers.resize(num_rel_layers);
  p.ent_layers.resize(num_ent_layers);
  for (auto* layers : {&p.rel_layers, &p.ent_layers})
    for (LayerParams& l : *layers) {
      l.weight.resize(d, d);
      l.bias.resize(d);
    }
  p.score_mlp.w1.resize(d, d);
  p.score_mlp.b1.resize(d);
  p.score_mlp.w2.resize(d);
  p.score_mlp.b2 = 0.0;

  Rng rng = Rng::stream(seed, {kStreamParamInit});
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (TensorRef& t : p.tensors())
    for (Eigen::Index i = 0; i < t.size; ++i)
      t.data[i] = (2.0 * rng.uniform() - 1.0) * s;
  return p;
}

ModelParams ModelParams::zeros_like(const ModelParams& other) {
  ModelParams p = other;
  p.set_zero();
  return p;
}

std::vector<TensorRef> ModelParams::tensors() {
  std::vector<TensorRef> out;
  out.push_back({"etype_embed", etype_embed.data(), etype_embed.size()});
  for (std::size_t l = 0; l < rel_layers.size(); ++l) {
    const std::string base = "rel." + std::to_string(l);
    out.push_back({base + ".weight", rel_layers[l].weight.data(),
                   rel_layers[l].weight.size()});
    out.push_back({base + ".bias", rel_layers[l].bias.data(), rel_layers[l].bias.size()});
  }
  for (std::size_t l = 0; l < ent_layers.size(); ++l) {
    const std::string base = "ent." + std::to_string(l);
    out.push_back({base + ".weight", ent_layers[l].weight.data(),
                   ent_layers[l].weight.size()});
    out.push_back({base + ".bias", ent_layers[l].bias.data(), ent_layers[l].bias.size()});
  }
  out.push_back({"score.w1", score_mlp.w1.data(), score_mlp.w1.size()});
  out.push_back({"score.b1", score_mlp.b1.data(), score_mlp.b1.size()});
  out.push_back({"score.w2", score_mlp.w2.data(), score_mlp.w2.size()});
  out.push_back({"score.b2", &score_mlp.b2, 1});
  return out;
}

void ModelParams::set_zero() {
  for (TensorRef& t : tensors())
    for (Eigen::Index i = 0; i < t.size; ++i) t.data[i] = 0.0;
}

void ModelParams::add_scaled(const ModelParams& other, double scale) {
  auto dst = tensors();
  auto src = const_cast<ModelParams&>(other).tensors();
  check(dst.size() == src.size(), "parameter shape mismatch in add_scaled");
  for (std::size_t i = 0; i < dst.size(); ++i) {
    check(dst[i].size == src[i].size, "parameter shape mismatch in add_scaled");
    for (Eigen::Index j = 0; j < dst[i].size; ++j)
      dst[i].data[j] += scale * src[i].data[j];
  }
}

bool ModelParams::all_finite() const {
  auto views = const_cast<ModelParams*>(this)->tensors();
  for (const TensorRef& t : views)
    for (Eigen::Index i = 0; i < t.size; ++i)
      if (!std::isfinite(t.data[i])) return false;
  return true;
}

bool ModelParams::same_shape(const ModelParams& other) const {
  if (d != other.d || rel_layers.size() != other.rel_layers.size() ||
      ent_layers.size() != other.ent_layers.size())
    return false;
  auto a = const_cast<ModelParams*>(this)->tensors();
  auto b = const_cast<ModelParams&>(other).tensors();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].size != b[i].size) return false;
  return true;
}

Eigen::MatrixXd encode_relations(const ModelParams& p, const RelationGraph& rg,
                                 RelationId query_rel, EncodeTape* tape) {
  check(p.etype_embed.cols() == p.d && p.etype_embed.rows() == kNumEdgeTypes,
        "etype embedding shape does not match embedding width");
  if (query_rel < 0 || query_rel >= rg.num_relations)
    throw DataError("encode_relations: invalid query relation id " +
                    std::to_string(query_rel));

  // Labeling trick: the query relation is the distinguished all-ones node.
  Eigen::MatrixXd state = Eigen::MatrixXd::Zero(rg.num_relations, p.d);
  state.row(query_rel).setOnes();
  return run_layers(p.rel_layers, rg.in_edges, p.etype_embed, std::move(state), tape);
}

Eigen::MatrixXd encode_entities(const ModelParams& p, const KnowledgeGraph& g,
                                const Eigen::MatrixXd& H, EntityId head,
                                RelationId rel, EncodeTape* tape) {
  check(H.cols() == p.d, "H width does not match embedding width");
  if (!g.valid_entity(head) || !g.valid_relation(rel))
    throw DataError("encode_entities: invalid query");
  if (H.rows() != g.num_relations())
    throw ConfigError("H row count does not match the graph's relation count");

  Eigen::MatrixXd state = Eigen::MatrixXd::Zero(g.num_entities(), p.d);
  state.row(head) = H.row(rel);
  return run_layers(p.ent_layers, g.in_triples, H, std::move(state), tape);
}

double score(const ModelParams& p, const Eigen::MatrixXd& X, EntityId candidate) {
  if (candidate < 0 || candidate >= X.rows())
    throw DataError("score: invalid candidate id " + std::to_string(candidate));
  const Eigen::VectorXd hidden =
      (p.score_mlp.w1 * X.row(candidate).transpose() + p.score_mlp.b1).cwiseMax(0.0);
  return p.score_mlp.w2.dot(hidden) + p.score_mlp.b2;
}

Eigen::VectorXd score_query(const ModelParams& p, const RelationGraph& rg,
                            const KnowledgeGraph& g, EntityId head, RelationId rel,
                            std::span<const EntityId> candidates, GradTape* tape) {
  EncodeTape* rel_tape = tape ? &tape->rel_tape : nullptr;
  EncodeTape* ent_tape = tape ? &tape->ent_tape : nullptr;
  Eigen::MatrixXd H = encode_relations(p, rg, rel, rel_tape);
  Eigen::MatrixXd X = encode_entities(p, g, H, head, rel, ent_tape);

  const auto n = static_cast<Eigen::Index>(candidates.size());
  Eigen::MatrixXd gathered(n, p.d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const EntityId c = candidates[i];
    if (!g.valid_entity(c))
      throw DataError("score_query: invalid candidate id " + std::to_string(c));
    gathered.row(i) = X.row(c);
  }
  Eigen::MatrixXd hidden_pre = (gathered * p.score_mlp.w1.transpose()).rowwise() +
                               p.score_mlp.b1.transpose();
  Eigen::VectorXd scores =
      hidden_pre.cwiseMax(0.0) * p.score_mlp.w2 +
      Eigen::VectorXd::Constant(n, p.score_mlp.b2);

  if (tape) {
    tape->rg = &rg;
    tape->g = &g;
    tape->query_rel = rel;
    tape->head = head;
    tape->H = std::move(H);
    tape->X = std::move(X);
    tape->candidates.assign(candidates.begin(), candidates.end());
    tape->mlp_hidden_pre = std::move(hidden_pre);
    tape->scores = scores;
  }
  return scores;
}

void backward(const GradTape& tape, const ModelParams& p,
              const Eigen::VectorXd& dscores, ModelParams& grads) {
  if (!tape.rg || !tape.g) throw Error("backward: tape does not record a forward pass");
  if (dscores.size() != static_cast<Eigen::Index>(tape.candidates.size()))
    throw Error("backward: dscores length does not match scored candidates");
  if (!grads.same_shape(p)) throw Error("backward: gradient shape mismatch");

  // Score head.
  const auto n_cand = static_cast<Eigen::Index>(tape.candidates.size());
  const Eigen::MatrixXd hidden = tape.mlp_hidden_pre.cwiseMax(0.0);
  Eigen::MatrixXd gathered(n_cand, p.d);
  for (Eigen::Index i = 0; i < n_cand; ++i)
    gathered.row(i) = tape.X.row(tape.candidates[i]);

  grads.score_mlp.w2 += hidden.transpose() * dscores;
  grads.score_mlp.b2 += dscores.sum();
  Eigen::MatrixXd d_hidden = dscores * p.score_mlp.w2.transpose();
  Eigen::MatrixXd d_pre = d_hidden.cwiseProduct(
      (tape.mlp_hidden_pre.array() > 0.0).cast<double>().matrix());
  grads.score_mlp.w1 += d_pre.transpose() * gathered;
  grads.score_mlp.b1 += d_pre.colwise().sum();
  Eigen::MatrixXd d_gathered = d_pre * p.score_mlp.w1;

  Eigen::MatrixXd dX = Eigen::MatrixXd::Zero(tape.X.rows(), p.d);
  for (Eigen::Index i = 0; i < n_cand; ++i)
    dX.row(tape.candidates[i]) += d_gathered.row(i);

  // Entity encoder: factor gradients flow into H.
  Eigen::MatrixXd dH = Eigen::MatrixXd::Zero(tape.H.rows(), p.d);
  Eigen::MatrixXd dX0 =
      run_layers_backward(p.ent_layers, tape.g->in_triples, tape.H, tape.ent_tape,
                          tape.X, std::move(dX), grads.ent_layers, &dH);
  // Initialization X0[head] = H[rel].
  dH.row(tape.query_rel) += dX0.row(tape.head);

  // Relation encoder: its initial state is constant, factors are the
  // learnable etype embeddings.
  run_layers_backward(p.rel_layers, tape.rg->in_edges, p.etype_embed, tape.rel_tape,
                      tape.H, std::move(dH), grads.rel_layers, &grads.etype_embed);
}

}  // namespace kmas
