#pragma once

#include <unordered_map>
#include <vector>

#include "padyn/matrix.hpp"
#include "padyn/series.hpp"

namespace padyn {

/// Incremental composition of outer series with an inner tuple that becomes
/// known one degree at a time.
///
/// Each monomial of degree >= 2 in the outer series is a node of a trie whose
/// product g^I = g^{parent} * g_k is built layer by layer. Layer d of any such
/// product only needs inner layers of degree < d, so the nonlinear part of
/// outer∘inner in degree d is available before the inner layer d is chosen.
template <class C>
class ComposeEngine {
 public:
  using Layer = typename MultiSeries<C>::Layer;

  ComposeEngine(const SeriesTuple<C>& outer, int trunc_degree) : trunc_(trunc_degree) {
    if (outer.empty()) throw InputError("compose: empty outer tuple");
    outer_vars_ = outer.front().num_vars();
    inner_.assign(static_cast<std::size_t>(outer_vars_), std::vector<Layer>(static_cast<std::size_t>(trunc_) + 1));
    outer_terms_.resize(outer.size());
    for (std::size_t j = 0; j < outer.size(); ++j) {
      if (outer[j].num_vars() != outer_vars_) throw InputError("compose: outer series disagree on variable count");
      outer[j].for_each([&](Monomial m, const C& c) {
        int d = monomial_degree(m);
        if (d < 2 || d > trunc_) return;
        outer_terms_[j].emplace_back(node_for(m), c);
      });
    }
  }

  int outer_vars() const { return outer_vars_; }

  /// Supplies degree-d layers of all inner components (d >= 1, increasing).
  void push_inner(int d, std::vector<Layer> layers) {
    if (static_cast<int>(layers.size()) != outer_vars_) throw InputError("compose: wrong inner layer count");
    if (d != pushed_ + 1) throw InputError("compose: inner layers must arrive in order");
    for (int k = 0; k < outer_vars_; ++k) inner_[k][d] = std::move(layers[k]);
    pushed_ = d;
  }

  /// Degree-d layer of sum_{|I|>=2} a_I g^I for each outer component.
  /// Requires inner layers 1..d-1.
  std::vector<Layer> nonlinear_layer(int d) {
    if (d > pushed_ + 1) throw InputError("compose: inner layers missing");
    if (d != computed_ + 1) throw InputError("compose: layers must be requested in order");
    computed_ = d;
    std::vector<Layer> out(outer_terms_.size());
    if (d < 2 || d > trunc_) return out;
    for (auto& node : nodes_) {
      if (node.degree > d || static_cast<int>(node.layers.size()) > d) continue;
      std::unordered_map<Monomial, C> acc;
      const int parent_deg = node.degree - 1;
      for (int a = parent_deg; a <= d - 1; ++a) {
        const Layer& pl = parent_layer(node, a);
        const Layer& gl = inner_[node.var][d - a];
        MultiSeries<C>::accumulate_product(acc, pl, gl);
      }
      node.layers.resize(static_cast<std::size_t>(d) + 1);
      node.layers[d] = MultiSeries<C>::drain(acc);
    }
    for (std::size_t j = 0; j < outer_terms_.size(); ++j) {
      std::unordered_map<Monomial, C> acc;
      for (const auto& [id, c] : outer_terms_[j]) {
        const Node& node = nodes_[id];
        if (node.degree > d) continue;
        for (const auto& [m, v] : node.layers[d]) {
          auto [it, inserted] = acc.try_emplace(m, c * v);
          if (!inserted) it->second += c * v;
        }
      }
      out[j] = MultiSeries<C>::drain(acc);
    }
    return out;
  }

 private:
  struct Node {
    int parent;  // -1 when the parent is a single variable
    int var;
    int degree;
    Monomial parent_monomial;
    std::vector<Layer> layers;  // layers[d] valid once computed
  };

  const Layer& parent_layer(const Node& node, int a) const {
    if (node.parent < 0) return inner_[exponent_var(node.parent_monomial)][a];
    const Node& p = nodes_[node.parent];
    static const Layer empty;
    if (a < p.degree || a >= static_cast<int>(p.layers.size())) return empty;
    return p.layers[a];
  }

  static int exponent_var(Monomial m) {
    for (int i = 0; i < kMaxVariables; ++i) {
      if (exponent(m, i) > 0) return i;
    }
    return 0;
  }

  int node_for(Monomial m) {
    auto it = index_.find(m);
    if (it != index_.end()) return it->second;
    int var = kMaxVariables - 1;
    while (exponent(m, var) == 0) --var;
    Monomial parent = m - variable_monomial(var);
    int parent_id = monomial_degree(parent) >= 2 ? node_for(parent) : -1;
    Node node{parent_id, var, monomial_degree(m), parent, {}};
    nodes_.push_back(std::move(node));
    int id = static_cast<int>(nodes_.size()) - 1;
    index_.emplace(m, id);
    return id;
  }

  int outer_vars_ = 0;
  int trunc_;
  int pushed_ = 0;
  int computed_ = 0;
  std::vector<std::vector<Layer>> inner_;
  std::vector<Node> nodes_;
  std::unordered_map<Monomial, int> index_;
  std::vector<std::vector<std::pair<int, C>>> outer_terms_;
};

namespace detail {

template <class C>
typename MultiSeries<C>::Layer linear_combination(const std::vector<std::pair<C, const typename MultiSeries<C>::Layer*>>& parts) {
  std::unordered_map<Monomial, C> acc;
  for (const auto& [c, layer] : parts) {
    for (const auto& [m, v] : *layer) {
      auto [it, inserted] = acc.try_emplace(m, c * v);
      if (!inserted) it->second += c * v;
    }
  }
  return MultiSeries<C>::drain(acc);
}

template <class C>
void check_inner(const SeriesTuple<C>& g) {
  if (g.empty()) throw InputError("compose: empty inner tuple");
  const int n = g.front().num_vars();
  for (const auto& s : g) {
    if (s.num_vars() != n) throw InputError("compose: inner series disagree on variable count");
    if (s.find(Monomial{0}) != nullptr) throw InputError("compose: inner series must have zero constant term");
  }
}

}  // namespace detail

/// f∘g for a tuple f of series in g.size() variables.
template <class C>
SeriesTuple<C> compose(const SeriesTuple<C>& f, const SeriesTuple<C>& g) {
  detail::check_inner(g);
  if (f.empty()) return {};
  if (f.front().num_vars() != static_cast<int>(g.size())) throw InputError("compose: arity mismatch");
  int N = tuple_trunc_degree(g);
  for (const auto& s : f) N = std::min(N, s.trunc_degree());
  const int n = g.front().num_vars();
  using Layer = typename MultiSeries<C>::Layer;

  ComposeEngine<C> engine(f, N);
  SeriesTuple<C> out(f.size(), MultiSeries<C>(n, N));
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (const C* c = f[j].find(Monomial{0})) out[j].add_term(Monomial{0}, *c);
  }
  for (int d = 1; d <= N; ++d) {
    std::vector<Layer> nl = engine.nonlinear_layer(d);
    std::vector<Layer> inner;
    for (const auto& s : g) inner.push_back(s.layer(d));
    for (std::size_t j = 0; j < f.size(); ++j) {
      std::vector<std::pair<C, const Layer*>> parts;
      for (const auto& [m, c] : f[j].layer(1)) {
        int k = 0;
        while (exponent(m, k) == 0) ++k;
        parts.emplace_back(c, &inner[k]);
      }
      Layer lin = detail::linear_combination<C>(parts);
      if (!lin.empty() || !nl[j].empty()) {
        MultiSeries<C> tmp(n, N);
        tmp.set_layer(d, std::move(lin));
        MultiSeries<C> tmp2(n, N);
        tmp2.set_layer(d, std::move(nl[j]));
        out[j].set_layer(d, (tmp + tmp2).layer(d));
      }
    }
    engine.push_inner(d, std::move(inner));
  }
  return out;
}

template <class C>
MultiSeries<C> compose(const MultiSeries<C>& phi, const SeriesTuple<C>& g) {
  return compose(SeriesTuple<C>{phi}, g).front();
}

/// Matrix of degree-one coefficients: entry (i, j) is the x_j coefficient of g_i.
template <class C>
Matrix<C> linear_part(const SeriesTuple<C>& g, const C& zero) {
  const int n = g.front().num_vars();
  Matrix<C> a(g.size(), std::vector<C>(static_cast<std::size_t>(n), zero));
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (const auto& [m, c] : g[i].layer(1)) {
      for (int j = 0; j < n; ++j) {
        if (exponent(m, j) == 1) a[i][j] = c;
      }
    }
  }
  return a;
}

/// Compositional inverse k of g (k∘... with g∘k = id through the truncation degree).
template <class C>
SeriesTuple<C> invert_tuple(const SeriesTuple<C>& g) {
  detail::check_inner(g);
  const int n = g.front().num_vars();
  if (static_cast<int>(g.size()) != n) throw InputError("invert_tuple: tuple must be square");
  const int N = tuple_trunc_degree(g);
  using Layer = typename MultiSeries<C>::Layer;

  C one{};
  bool have_one = false;
  for (const auto& s : g) {
    if (!s.layer(1).empty()) {
      one = one_like(s.layer(1).front().second);
      have_one = true;
      break;
    }
  }
  if (!have_one) throw ObstructionError("invert_tuple: singular linear part");
  C zero = one - one;
  auto ainv = inverse(linear_part(g, zero));
  if (!ainv) throw ObstructionError("invert_tuple: singular linear part");

  auto apply_inverse = [&](const std::vector<Layer>& v, bool negate) {
    std::vector<Layer> out;
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<C, const Layer*>> parts;
      for (int j = 0; j < n; ++j) {
        if (is_zero((*ainv)[i][j])) continue;
        parts.emplace_back(negate ? C(-(*ainv)[i][j]) : (*ainv)[i][j], &v[j]);
      }
      out.push_back(detail::linear_combination<C>(parts));
    }
    return out;
  };

  ComposeEngine<C> engine(g, N);
  SeriesTuple<C> k(static_cast<std::size_t>(n), MultiSeries<C>(n, N));
  for (int d = 1; d <= N; ++d) {
    std::vector<Layer> layer_d;
    std::vector<Layer> nl = engine.nonlinear_layer(d);
    if (d == 1) {
      std::vector<Layer> ids;
      for (int j = 0; j < n; ++j) ids.push_back(Layer{{variable_monomial(j), one}});
      layer_d = apply_inverse(ids, false);
    } else {
      layer_d = apply_inverse(nl, true);
    }
    for (int i = 0; i < n; ++i) k[i].set_layer(d, layer_d[i]);
    engine.push_inner(d, std::move(layer_d));
  }
  return k;
}

/// Jacobian matrix (∂g_i/∂x_j) with series entries.
template <class C>
SeriesMatrix<C> jacobian(const SeriesTuple<C>& g) {
  SeriesMatrix<C> out;
  for (const auto& s : g) {
    std::vector<MultiSeries<C>> row;
    for (int j = 0; j < s.num_vars(); ++j) row.push_back(s.derivative(j));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace padyn
