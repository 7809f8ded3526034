#include "hvt/qcore.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace hvt {

Permutation identity_permutation(Index n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Index{0});
  return p;
}

Unitary Unitary::validated(ComplexMatrix m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << "unitary: matrix must be square and non-empty, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
  if (!m.allFinite()) throw ValidationError("unitary: non-finite entry");
  const double defect =
      max_entry_norm(m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols()));
  if (defect > tol) {
    std::ostringstream os;
    os << "unitary: ||U^dagger U - I||_max = " << defect << " exceeds tolerance " << tol;
    throw ValidationError(os.str());
  }
  return Unitary(std::move(m));
}

DensityMatrix DensityMatrix::validated(ComplexMatrix m, double tol) {
  std::ostringstream os;
  if (m.rows() != m.cols() || m.rows() == 0) {
    os << "density: matrix must be square and non-empty, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
  if (!m.allFinite()) throw ValidationError("density: non-finite entry");
  const double herm = max_entry_norm(m - m.adjoint());
  if (herm > tol) {
    os << "density: not Hermitian, ||rho - rho^dagger||_max = " << herm;
    throw ValidationError(os.str());
  }
  const double trace_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_err > tol) {
    os << "density: |trace - 1| = " << trace_err << " exceeds tolerance " << tol;
    throw ValidationError(os.str());
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol) {
    os << "density: negative eigenvalue " << min_eig;
    throw ValidationError(os.str());
  }
  for (Index i = 0; i < m.rows(); ++i) {
    const double d = m(i, i).real();
    if (d < -tol || d > 1.0 + tol) {
      os << "density: diagonal entry " << i << " = " << d << " outside [0, 1]";
      throw ValidationError(os.str());
    }
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix pure_state(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ValidationError("pure_state: zero vector");
  const ComplexVector v = psi / norm;
  return DensityMatrix::unchecked(v * v.adjoint());
}

DensityMatrix maximally_mixed(Index n) {
  return DensityMatrix::unchecked(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

ComplexVector phi_state(double theta) {
  ComplexVector v(2);
  v << std::cos(theta), std::sin(theta);
  return v;
}

ComplexVector basis_state(Index n, Index k) {
  ComplexVector v = ComplexVector::Zero(n);
  v(k) = 1.0;
  return v;
}

DensityMatrix evolve(const DensityMatrix& rho, const Unitary& u) {
  if (rho.dim() != u.dim()) {
    std::ostringstream os;
    os << "evolve: dimension mismatch, rho is " << rho.dim() << ", U is " << u.dim();
    throw ValidationError(os.str());
  }
  const ComplexMatrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  return DensityMatrix::unchecked(0.5 * (out + out.adjoint()));
}

ProbVector born_vector(const DensityMatrix& rho) {
  return rho.matrix().diagonal().real().cwiseMax(0.0);
}

ProbVector output_born_vector(const DensityMatrix& rho, const Unitary& u) {
  return born_vector(evolve(rho, u));
}

Unitary rotation(double theta) {
  ComplexMatrix m(2, 2);
  const double c = std::cos(theta), s = std::sin(theta);
  m << c, -s, s, c;
  return Unitary::unchecked(m);
}

DensityMatrix regularize(const DensityMatrix& rho, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    std::ostringstream os;
    os << "regularize: eps = " << eps << " outside [0, 1]";
    throw ValidationError(os.str());
  }
  const Index n = rho.dim();
  const double floor = eps / static_cast<double>(n);
  ComplexMatrix m = (1.0 - eps) * rho.matrix();
  for (Index i = 0; i < n; ++i) m(i, i) = Complex((1.0 - eps) * std::max(rho.population(i), 0.0) + floor, 0.0);
  return DensityMatrix::unchecked(std::move(m));
}

namespace {

ComplexMatrix ginibre(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = Complex(re, im) / std::sqrt(2.0);
    }
  return z;
}

ComplexMatrix haar(Index n, std::mt19937_64& rng) {
  const ComplexMatrix z = ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    const Complex phase = mag > 0.0 ? r(k, k) / mag : Complex(1.0, 0.0);
    q.col(k) *= phase;
  }
  return q;
}

}  // namespace

Unitary random_unitary(Index n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_unitary: dimension must be >= 1");
  std::mt19937_64 rng(seed);
  return Unitary::unchecked(haar(n, rng));
}

DensityMatrix random_density(Index n, std::uint64_t seed, Index rank) {
  if (n < 1) throw ValidationError("random_density: dimension must be >= 1");
  if (rank < 1 || rank > n) {
    std::ostringstream os;
    os << "random_density: rank " << rank << " outside [1, " << n << "]";
    throw ValidationError(os.str());
  }
  std::mt19937_64 rng(seed);
  const ComplexMatrix basis = haar(n, rng);
  std::exponential_distribution<double> expo(1.0);
  RealVector w(rank);
  for (Index k = 0; k < rank; ++k) w(k) = expo(rng);
  w /= w.sum();
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (Index k = 0; k < rank; ++k) rho += w(k) * basis.col(k) * basis.col(k).adjoint();
  return DensityMatrix::unchecked(0.5 * (rho + rho.adjoint()));
}

ComplexMatrix random_hermitian(Index n, std::uint64_t seed,
                               const std::vector<std::vector<Index>>& groups) {
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = ginibre(n, n, rng);
  ComplexMatrix h = 0.5 * (g + g.adjoint());
  if (!groups.empty()) {
    ComplexMatrix masked = ComplexMatrix::Zero(n, n);
    for (const auto& grp : groups)
      for (Index a : grp)
        for (Index b : grp) masked(a, b) = h(a, b);
    h = masked;
  }
  const double scale = max_entry_norm(h);
  if (scale > 0.0) h /= scale;
  return h;
}

ComplexMatrix hermitian_exp(const ComplexMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const RealVector& d = es.eigenvalues();
  ComplexVector phases(d.size());
  for (Index k = 0; k < d.size(); ++k) phases(k) = std::polar(1.0, t * d(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Unitary perturb_unitary(const Unitary& u, double delta, std::uint64_t seed) {
  if (delta == 0.0) return u;
  return Unitary::unchecked(u.matrix() * hermitian_exp(random_hermitian(u.dim(), seed), delta));
}

Unitary perturb_unitary_within(const Unitary& u, const std::vector<std::vector<Index>>& groups,
                               double delta, std::uint64_t seed) {
  if (delta == 0.0) return u;
  const ComplexMatrix gen = hermitian_exp(random_hermitian(u.dim(), seed, groups), delta);
  // Entries outside the groups are exactly zero in exp(i delta H) up to the
  // eigensolver's rounding; wipe that noise so U's support is preserved.
  ComplexMatrix clean = ComplexMatrix::Zero(u.dim(), u.dim());
  for (const auto& grp : groups)
    for (Index a : grp)
      for (Index b : grp) clean(a, b) = gen(a, b);
  return Unitary::unchecked(u.matrix() * clean);
}

Unitary kron(const Unitary& a, const Unitary& b) {
  return Unitary::unchecked(kron(a.matrix(), b.matrix()));
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::unchecked(kron(a.matrix(), b.matrix()));
}

Unitary relabel(const Unitary& u, const Permutation& perm) {
  return Unitary::unchecked(relabel(u.matrix(), perm));
}

DensityMatrix relabel(const DensityMatrix& rho, const Permutation& perm) {
  return DensityMatrix::unchecked(relabel(rho.matrix(), perm));
}

Unitary direct_sum(const std::vector<Unitary>& blocks) {
  Index n = 0;
  for (const auto& b : blocks) n += b.dim();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  Index off = 0;
  for (const auto& b : blocks) {
    m.block(off, off, b.dim(), b.dim()) = b.matrix();
    off += b.dim();
  }
  return Unitary::unchecked(m);
}

}  // namespace hvt
