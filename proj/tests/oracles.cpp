#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oracle {

namespace {

constexpr double kEps = 1e-11;

class Tableau {
 public:
  Tableau(Index rows, Index cols) : t_(RealMatrix::Zero(rows + 1, cols + 1)), basis_(static_cast<std::size_t>(rows)) {}

  RealMatrix& t() { return t_; }
  std::vector<Index>& basis() { return basis_; }
  Index rows() const { return t_.rows() - 1; }
  Index cols() const { return t_.cols() - 1; }
  double rhs(Index r) const { return t_(r, cols()); }

  void set_objective(const RealVector& c) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(cols()) = -c.transpose();
    for (Index r = 0; r < rows(); ++r) {
      const double cb = c(basis_[static_cast<std::size_t>(r)]);
      if (cb != 0.0) t_.row(rows()) += cb * t_.row(r);
    }
  }

  void pivot(Index r, Index col) {
    t_.row(r) /= t_(r, col);
    for (Index k = 0; k <= rows(); ++k)
      if (k != r && t_(k, col) != 0.0) t_.row(k) -= t_(k, col) * t_.row(r);
    basis_[static_cast<std::size_t>(r)] = col;
  }

  // false when unbounded.
  bool optimise(const std::vector<bool>& allowed) {
    for (int guard = 0; guard < 100000; ++guard) {
      Index enter = -1;
      for (Index j = 0; j < cols(); ++j)
        if (allowed[static_cast<std::size_t>(j)] && t_(rows(), j) < -kEps) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      Index leave = -1;
      double best = 0.0;
      for (Index r = 0; r < rows(); ++r) {
        if (t_(r, enter) <= kEps) continue;
        const double ratio = rhs(r) / t_(r, enter);
        if (leave < 0 || ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return false;
  }

 private:
  RealMatrix t_;
  std::vector<Index> basis_;
};

}  // namespace

std::optional<LpResult> simplex_max(const RealVector& c, const std::vector<Constraint>& constraints) {
  const Index n = c.size();
  const Index m = static_cast<Index>(constraints.size());
  // Normalise to b >= 0.
  std::vector<Constraint> cons = constraints;
  for (auto& k : cons)
    if (k.b < 0.0) {
      k.a = -k.a;
      k.b = -k.b;
      if (k.sense == Sense::Le)
        k.sense = Sense::Ge;
      else if (k.sense == Sense::Ge)
        k.sense = Sense::Le;
    }
  Index slack = 0, art = 0;
  for (const auto& k : cons) {
    if (k.sense != Sense::Eq) ++slack;
    if (k.sense != Sense::Le) ++art;
  }
  const Index total = n + slack + art;
  Tableau tab(m, total);
  Index s_col = n, a_col = n + slack;
  std::vector<bool> is_art(static_cast<std::size_t>(total), false);
  for (Index r = 0; r < m; ++r) {
    const auto& k = cons[static_cast<std::size_t>(r)];
    tab.t().row(r).head(n) = k.a.transpose();
    tab.t()(r, total) = k.b;
    if (k.sense == Sense::Le) {
      tab.t()(r, s_col) = 1.0;
      tab.basis()[static_cast<std::size_t>(r)] = s_col++;
    } else {
      if (k.sense == Sense::Ge) tab.t()(r, s_col++) = -1.0;
      tab.t()(r, a_col) = 1.0;
      is_art[static_cast<std::size_t>(a_col)] = true;
      tab.basis()[static_cast<std::size_t>(r)] = a_col++;
    }
  }

  std::vector<bool> all(static_cast<std::size_t>(total), true);
  if (art > 0) {
    RealVector phase1 = RealVector::Zero(total);
    for (Index j = n + slack; j < total; ++j) phase1(j) = -1.0;
    tab.set_objective(phase1);
    tab.optimise(all);
    if (tab.t()(m, total) < -1e-9) return std::nullopt;
    // Drive zero-valued artificials out of the basis where possible.
    for (Index r = 0; r < m; ++r) {
      if (!is_art[static_cast<std::size_t>(tab.basis()[static_cast<std::size_t>(r)])]) continue;
      for (Index j = 0; j < n + slack; ++j)
        if (std::abs(tab.t()(r, j)) > 1e-9) {
          tab.pivot(r, j);
          break;
        }
    }
  }
  std::vector<bool> allowed(static_cast<std::size_t>(total));
  for (Index j = 0; j < total; ++j) allowed[static_cast<std::size_t>(j)] = !is_art[static_cast<std::size_t>(j)];
  RealVector full = RealVector::Zero(total);
  full.head(n) = c;
  tab.set_objective(full);
  if (!tab.optimise(allowed)) return std::nullopt;
  LpResult res;
  res.x = RealVector::Zero(n);
  for (Index r = 0; r < m; ++r) {
    const Index b = tab.basis()[static_cast<std::size_t>(r)];
    if (b < n) res.x(b) = tab.rhs(r);
  }
  res.value = c.dot(res.x);
  return res;
}

Network network(const hvt::DensityMatrix& rho, const hvt::Unitary& u, double exponent) {
  const Index n = rho.dim();
  Network net;
  net.p = RealVector(n);
  net.q = RealVector(n);
  const hvt::ComplexMatrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  for (Index k = 0; k < n; ++k) {
    net.p(k) = std::max(0.0, rho.matrix()(k, k).real());
    net.q(k) = std::max(0.0, out(k, k).real());
  }
  net.cap = RealMatrix(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) net.cap(j, i) = std::pow(std::abs(u.matrix()(j, i)), exponent);
  return net;
}

namespace {

// Edge variable index for input i -> output j, input-major.
Index var(Index n, Index i, Index j) { return i * n + j; }

std::vector<Constraint> flow_constraints(const Network& net) {
  const Index n = net.p.size();
  const Index nv = n * n;
  std::vector<Constraint> cons;
  for (Index i = 0; i < n; ++i) {
    RealVector a = RealVector::Zero(nv);
    for (Index j = 0; j < n; ++j) a(var(n, i, j)) = 1.0;
    cons.push_back({a, Sense::Le, net.p(i)});
  }
  for (Index j = 0; j < n; ++j) {
    RealVector a = RealVector::Zero(nv);
    for (Index i = 0; i < n; ++i) a(var(n, i, j)) = 1.0;
    cons.push_back({a, Sense::Le, net.q(j)});
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      RealVector a = RealVector::Zero(nv);
      a(var(n, i, j)) = 1.0;
      cons.push_back({a, Sense::Le, net.cap(j, i)});
    }
  return cons;
}

}  // namespace

double lp_max_flow(const Network& net) {
  const Index n = net.p.size();
  const auto res = simplex_max(RealVector::Ones(n * n), flow_constraints(net));
  return res ? res->value : -1.0;
}

double min_cut(const Network& net) {
  const Index n = net.p.size();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned long mask = 0; mask < (1UL << (2 * n)); ++mask) {
    // Bit i: input i on the source side; bit n + j: output j on the source side.
    double cut = 0.0;
    for (Index i = 0; i < n; ++i) {
      const bool in_s = mask >> i & 1UL;
      if (!in_s) {
        cut += net.p(i);
        continue;
      }
      for (Index j = 0; j < n; ++j)
        if (!(mask >> (n + j) & 1UL)) cut += net.cap(j, i);
    }
    for (Index j = 0; j < n; ++j)
      if (mask >> (n + j) & 1UL) cut += net.q(j);
    best = std::min(best, cut);
  }
  return best;
}

RealMatrix lp_lex_max_flow(const Network& net) {
  const Index n = net.p.size();
  const Index nv = n * n;
  std::vector<Constraint> cons = flow_constraints(net);
  const double value = lp_max_flow(net);
  cons.push_back({RealVector::Ones(nv), Sense::Ge, value - 1e-10});
  RealMatrix f = RealMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      RealVector c = RealVector::Zero(nv);
      c(var(n, i, j)) = 1.0;
      const auto res = simplex_max(c, cons);
      const double best = res ? res->value : 0.0;
      f(j, i) = best;
      cons.push_back({c, Sense::Ge, best - 1e-11});
    }
  for (Index k = 0; k < f.size(); ++k)
    if (f.data()[k] < 1e-12) f.data()[k] = 0.0;
  return f;
}

RealMatrix ft_joint(const hvt::DensityMatrix& rho, const hvt::Unitary& u) {
  const Index n = rho.dim();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  RealMatrix sum = RealMatrix::Zero(n, n);
  long count = 0;
  do {
    // Basis state a of the relabelled system is perm[a] of the original.
    hvt::ComplexMatrix r(n, n), v(n, n);
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) {
        r(a, b) = rho.matrix()(perm[a], perm[b]);
        v(a, b) = u.matrix()(perm[a], perm[b]);
      }
    const RealMatrix f = lp_lex_max_flow(network(hvt::DensityMatrix::unchecked(r), hvt::Unitary::unchecked(v)));
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) sum(perm[a], perm[b]) += f(a, b);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / static_cast<double>(count);
}

RealMatrix dt_joint(const hvt::DensityMatrix& rho, const hvt::Unitary& u, double zero_tol) {
  const Index n = rho.dim();
  // Vertices 0..n-1 inputs, n..2n-1 outputs.
  std::vector<Index> parent(static_cast<std::size_t>(2 * n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (std::abs(u.matrix()(j, i)) > zero_tol) parent[find(i)] = find(n + j);
  const hvt::ComplexMatrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  RealMatrix P = RealMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    double mass = 0.0;
    Index width = 0;
    for (Index j = 0; j < n; ++j)
      if (find(n + j) == find(i)) {
        mass += std::max(0.0, out(j, j).real());
        ++width;
      }
    for (Index j = 0; j < n; ++j) {
      if (find(n + j) != find(i)) continue;
      const double share = mass > 1e-12 ? std::max(0.0, out(j, j).real()) / mass : 1.0 / static_cast<double>(width);
      P(j, i) = share * std::max(0.0, rho.matrix()(i, i).real());
    }
  }
  return P;
}

RealMatrix st_joint_2x2(const hvt::DensityMatrix& rho, const hvt::Unitary& u) {
  const RealMatrix A = u.matrix().cwiseAbs();
  const double p0 = rho.matrix()(0, 0).real(), p1 = rho.matrix()(1, 1).real();
  const hvt::ComplexMatrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  const double q0 = out(0, 0).real();
  const double kappa = A(0, 0) * A(1, 1) / (A(0, 1) * A(1, 0));
  // P = [[x, q0 - x], [p0 - x, p1 - q0 + x]] with x d = kappa b c.
  const double qa = 1.0 - kappa;
  const double qb = (p1 - q0) + kappa * (q0 + p0);
  const double qc = -kappa * q0 * p0;
  double x = 0.0;
  if (std::abs(qa) < 1e-14) {
    x = -qc / qb;
  } else {
    const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    const double r1 = (-qb + disc) / (2.0 * qa), r2 = (-qb - disc) / (2.0 * qa);
    auto valid = [&](double v) { return v > 0.0 && q0 - v > 0.0 && p0 - v > 0.0 && p1 - q0 + v > 0.0; };
    x = valid(r1) ? r1 : r2;
  }
  RealMatrix P(2, 2);
  P << x, q0 - x, p0 - x, p1 - q0 + x;
  return P;
}

}  // namespace oracle
