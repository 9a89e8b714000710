#include <algorithm>
#include <cmath>
#include <queue>

#include "mccl/indices.hpp"

namespace mccl {

namespace {

void multiply(const Graph& g, const std::vector<double>& x, std::vector<double>& out) {
  out.assign(x.size(), 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    double acc = 0.0;
    for (NodeId v : g.neighbors(u)) acc += x[v];
    out[u] = acc;
  }
}

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

double estimate_spectral_radius(const Graph& g, int iterations) {
  const std::size_t n = g.node_count();
  if (n == 0 || g.edge_count() == 0) return 0.0;
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> ax;
  // Power iteration on A + I: same eigenvectors, no oscillation on
  // bipartite graphs.
  for (int it = 0; it < iterations; ++it) {
    multiply(g, x, ax);
    for (std::size_t i = 0; i < n; ++i) ax[i] += x[i];
    const double nrm = norm2(ax);
    for (std::size_t i = 0; i < n; ++i) x[i] = ax[i] / nrm;
  }
  multiply(g, x, ax);
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) num += x[i] * ax[i];
  return num;  // x has unit norm
}

CentralityResult katz_centrality(const Graph& g, const KatzParams& params) {
  CentralityResult result;
  const std::size_t n = g.node_count();
  if (n == 0) {
    result.converged = true;
    return result;
  }
  double alpha = params.alpha;
  if (alpha <= 0.0) {
    const double lambda = estimate_spectral_radius(g, params.lambda_iterations);
    if (lambda <= 1e-12) {
      // No edges: x = beta everywhere.
      result.values.assign(n, params.beta);
      result.converged = true;
      return result;
    }
    alpha = params.alpha_scale / lambda;
  }

  std::vector<double> x;
  std::vector<double> ax;
  for (int attempt = 0; attempt < 60; ++attempt) {
    x.assign(n, params.beta);
    bool converged = false;
    int it = 0;
    for (; it < params.max_iter; ++it) {
      multiply(g, x, ax);
      // The step size is exactly the fixed-point residual of the current x,
      // so x is kept (not advanced) once it is small enough.
      double delta = 0.0;
      bool finite = true;
      for (std::size_t i = 0; i < n; ++i) {
        ax[i] = alpha * ax[i] + params.beta;
        finite = finite && std::isfinite(ax[i]);
        delta = std::max(delta, std::abs(ax[i] - x[i]));
      }
      if (!finite) break;
      if (delta <= params.tol) {
        converged = true;
        break;
      }
      x.swap(ax);
    }
    if (converged) {
      result.values = std::move(x);
      result.eigenvalue = alpha;
      result.iterations = it;
      result.converged = true;
      result.fallback = attempt > 0;
      return result;
    }
    alpha *= 0.5;
  }
  result.values.assign(n, params.beta);
  result.eigenvalue = alpha;
  result.fallback = true;
  return result;
}

CentralityResult eigenvector_centrality(const Graph& g, const EigenvectorParams& params) {
  CentralityResult result;
  const std::size_t n = g.node_count();
  if (n == 0) {
    result.converged = true;
    return result;
  }
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> ax;
  for (int it = 0; it < params.max_iter; ++it) {
    multiply(g, x, ax);
    double lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += x[i] * ax[i];
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(ax[i] - lambda * x[i]));
    if (residual <= params.tol) {
      result.values = x;
      result.eigenvalue = lambda;
      result.iterations = it;
      result.converged = true;
      return result;
    }
    for (std::size_t i = 0; i < n; ++i) ax[i] += x[i];
    const double nrm = norm2(ax);
    for (std::size_t i = 0; i < n; ++i) x[i] = ax[i] / nrm;
  }

  // Degree centrality scaled to unit norm.
  std::vector<double> deg(n);
  for (NodeId u = 0; u < n; ++u) deg[u] = static_cast<double>(g.degree(u));
  const double nrm = norm2(deg);
  for (double& d : deg) d = nrm > 0 ? d / nrm : 0.0;
  result.values = std::move(deg);
  result.iterations = params.max_iter;
  result.fallback = true;
  return result;
}

double closeness_of(const Graph& g, NodeId u) {
  const std::size_t n = g.node_count();
  if (n <= 1) return 0.0;
  std::vector<int> dist(n, -1);
  std::queue<NodeId> q;
  dist[u] = 0;
  q.push(u);
  std::size_t reached = 0;
  long long total = 0;
  while (!q.empty()) {
    NodeId a = q.front();
    q.pop();
    ++reached;
    total += dist[a];
    for (NodeId b : g.neighbors(a)) {
      if (dist[b] < 0) {
        dist[b] = dist[a] + 1;
        q.push(b);
      }
    }
  }
  if (total == 0) return 0.0;
  const double r = static_cast<double>(reached - 1);
  return (r / static_cast<double>(total)) * (r / static_cast<double>(n - 1));
}

std::vector<double> closeness_centrality(const Graph& g) {
  std::vector<double> out(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) out[u] = closeness_of(g, u);
  return out;
}

}  // namespace mccl
