#include "hvt/flows.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace hvt {

namespace {

constexpr double kResidualEps = 1e-15;

// Residual graph with paired arcs: arc a and a ^ 1 are the two directions
// of one edge; flow[a ^ 1] == -flow[a].
class ResidualGraph {
 public:
  explicit ResidualGraph(int vertices) : adj_(static_cast<std::size_t>(vertices)) {}

  int add_edge(int from, int to, double cap) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, cap, 0.0, false});
    arcs_.push_back({from, 0.0, 0.0, false});
    adj_[static_cast<std::size_t>(from)].push_back(id);
    adj_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
  }

  double flow(int edge) const { return arcs_[static_cast<std::size_t>(edge)].flow; }
  double residual(int arc) const {
    const auto& a = arcs_[static_cast<std::size_t>(arc)];
    return a.cap - a.flow;
  }

  void push(int arc, double amount) {
    arcs_[static_cast<std::size_t>(arc)].flow += amount;
    arcs_[static_cast<std::size_t>(arc ^ 1)].flow -= amount;
  }

  // Removes both directions of an edge from every later search.
  void set_blocked(int edge, bool blocked) {
    arcs_[static_cast<std::size_t>(edge)].blocked = blocked;
    arcs_[static_cast<std::size_t>(edge ^ 1)].blocked = blocked;
  }

  // Pushes up to `limit` units from `source` to `sink` along shortest
  // augmenting paths; returns the amount pushed.
  double augment(int source, int sink, double limit) {
    const std::size_t nv = adj_.size();
    const std::size_t max_rounds = 4 * nv * arcs_.size() + 16;
    double pushed = 0.0;
    std::vector<int> via(nv);
    for (std::size_t round = 0; round < max_rounds && limit - pushed > kResidualEps; ++round) {
      std::fill(via.begin(), via.end(), -1);
      std::queue<int> frontier;
      frontier.push(source);
      via[static_cast<std::size_t>(source)] = -2;
      while (!frontier.empty() && via[static_cast<std::size_t>(sink)] == -1) {
        const int v = frontier.front();
        frontier.pop();
        for (int arc : adj_[static_cast<std::size_t>(v)]) {
          const auto& a = arcs_[static_cast<std::size_t>(arc)];
          if (a.blocked || via[static_cast<std::size_t>(a.to)] != -1) continue;
          if (a.cap - a.flow <= kResidualEps) continue;
          via[static_cast<std::size_t>(a.to)] = arc;
          frontier.push(a.to);
        }
      }
      if (via[static_cast<std::size_t>(sink)] == -1) break;

      double bottleneck = limit - pushed;
      for (int v = sink; v != source;) {
        const int arc = via[static_cast<std::size_t>(v)];
        bottleneck = std::min(bottleneck, residual(arc));
        v = arcs_[static_cast<std::size_t>(arc ^ 1)].to;
      }
      for (int v = sink; v != source;) {
        const int arc = via[static_cast<std::size_t>(v)];
        push(arc, bottleneck);
        v = arcs_[static_cast<std::size_t>(arc ^ 1)].to;
      }
      pushed += bottleneck;
    }
    return pushed;
  }

 private:
  struct Arc {
    int to;
    double cap;
    double flow;
    bool blocked;
  };
  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
};

// Vertex layout: s = 0, inputs 1..n, outputs n+1..2n, t = 2n+1.
struct Layout {
  int n;
  int source() const { return 0; }
  int input(Index i) const { return 1 + static_cast<int>(i); }
  int output(Index j) const { return 1 + n + static_cast<int>(j); }
  int sink() const { return 1 + 2 * n; }
  int vertices() const { return 2 + 2 * n; }
};

struct BuiltGraph {
  ResidualGraph graph;
  std::vector<int> source_edges;
  std::vector<int> middle_edges;  // input-major: i * n + j
};

BuiltGraph make_graph(const FlowNetwork& net) {
  const Layout lay{static_cast<int>(net.dim())};
  BuiltGraph g{ResidualGraph(lay.vertices()), {}, {}};
  const Index n = net.dim();
  for (Index i = 0; i < n; ++i)
    g.source_edges.push_back(g.graph.add_edge(lay.source(), lay.input(i), std::max(net.source_caps(i), 0.0)));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      g.middle_edges.push_back(g.graph.add_edge(lay.input(i), lay.output(j), std::max(net.middle_caps(j, i), 0.0)));
  for (Index j = 0; j < n; ++j) g.graph.add_edge(lay.output(j), lay.sink(), std::max(net.sink_caps(j), 0.0));
  return g;
}

FlowMatrix read_flow(const BuiltGraph& g, Index n) {
  FlowMatrix f(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double v = g.graph.flow(g.middle_edges[static_cast<std::size_t>(i * n + j)]);
      f(j, i) = v < kFlowFloor ? 0.0 : v;
    }
  return f;
}

}  // namespace

FlowNetwork build_network(const DensityMatrix& rho, const Unitary& u, double capacity_exponent) {
  if (rho.dim() != u.dim()) throw ValidationError("build_network: dimension mismatch");
  FlowNetwork net;
  net.source_caps = born_vector(rho);
  net.sink_caps = output_born_vector(rho, u);
  net.middle_caps = u.matrix().cwiseAbs();
  if (capacity_exponent != 1.0) net.middle_caps = net.middle_caps.array().pow(capacity_exponent).matrix();
  return net;
}

FlowNetwork relabel(const FlowNetwork& net, const Permutation& perm) {
  const Index n = net.dim();
  FlowNetwork out;
  out.source_caps.resize(n);
  out.sink_caps.resize(n);
  for (Index a = 0; a < n; ++a) {
    out.source_caps(a) = net.source_caps(perm[static_cast<std::size_t>(a)]);
    out.sink_caps(a) = net.sink_caps(perm[static_cast<std::size_t>(a)]);
  }
  out.middle_caps = relabel(net.middle_caps, perm);
  return out;
}

MaxFlowResult max_flow(const FlowNetwork& net) {
  const Index n = net.dim();
  const Layout lay{static_cast<int>(n)};
  BuiltGraph g = make_graph(net);
  g.graph.augment(lay.source(), lay.sink(), std::numeric_limits<double>::infinity());
  MaxFlowResult res;
  res.flow = read_flow(g, n);
  for (int e : g.source_edges) res.value += g.graph.flow(e);
  return res;
}

FlowMatrix lex_max_flow(const FlowNetwork& net) {
  const Index n = net.dim();
  const Layout lay{static_cast<int>(n)};
  BuiltGraph g = make_graph(net);
  g.graph.augment(lay.source(), lay.sink(), std::numeric_limits<double>::infinity());

  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const int e = g.middle_edges[static_cast<std::size_t>(i * n + j)];
      const double room = g.graph.residual(e);
      if (room > kResidualEps) {
        // Every unit routed from the edge's head back to its tail closes an
        // augmenting cycle through the edge.
        g.graph.set_blocked(e, true);
        const double gained = g.graph.augment(lay.output(j), lay.input(i), room);
        g.graph.push(e, gained);
      }
      g.graph.set_blocked(e, true);
    }
  return read_flow(g, n);
}

FlowMatrix lex_max_flow(const DensityMatrix& rho, const Unitary& u) {
  return lex_max_flow(build_network(rho, u));
}

}  // namespace hvt
