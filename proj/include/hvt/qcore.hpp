#pragma once

// Dense complex linear algebra for small quantum systems: validated unitary
// and density-matrix types, evolution, Born probabilities and seeded random
// instance generators.
//
// Storage convention: every matrix is stored (row, column) the way Eigen
// and the matrix file format expect. Transition matrices put the *input*
// basis state on the column and the *output* basis state on the row, so
// S(j, i) is the probability of moving from |i> to |j>. Unitary::entry and
// the flow/joint accessors that take (input, output) arguments expose the
// column-first indexing used when reasoning about transitions.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hvt/errors.hpp"

namespace hvt {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Length-N nonnegative reals summing to one.
using ProbVector = RealVector;

// Basis relabelling: basis state a of the relabelled system is basis state
// perm[a] of the original one.
using Permutation = std::vector<Index>;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kDensityTol = 1e-10;

template <typename Derived>
double max_entry_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

/// True iff m is square and max |(m^dagger m - I)_{ab}| <= tol.
template <typename Derived>
bool validate_unitary(const Eigen::MatrixBase<Derived>& m, double tol = kUnitaryTol) {
  if (m.rows() != m.cols()) return false;
  using Plain = typename Derived::PlainObject;
  const Plain gram = m.adjoint() * m;
  return max_entry_norm(gram - Plain::Identity(m.rows(), m.cols())) <= tol;
}

/// Tensor product with index ordering (a, b) -> a * rows(b) + b.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Index r = 0; r < a.rows(); ++r)
    for (Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

/// Q^{-1} M Q for the permutation matrix Q with Q e_a = e_{perm[a]}:
/// result(a, b) = m(perm[a], perm[b]).
template <typename Derived>
typename Derived::PlainObject relabel(const Eigen::MatrixBase<Derived>& m, const Permutation& perm) {
  typename Derived::PlainObject out(m.rows(), m.cols());
  for (Index a = 0; a < m.rows(); ++a)
    for (Index b = 0; b < m.cols(); ++b) out(a, b) = m(perm[a], perm[b]);
  return out;
}

/// Inverse of relabel: Q M Q^{-1}, result(perm[a], perm[b]) = m(a, b).
template <typename Derived>
typename Derived::PlainObject unrelabel(const Eigen::MatrixBase<Derived>& m, const Permutation& perm) {
  typename Derived::PlainObject out(m.rows(), m.cols());
  for (Index a = 0; a < m.rows(); ++a)
    for (Index b = 0; b < m.cols(); ++b) out(perm[a], perm[b]) = m(a, b);
  return out;
}

Permutation identity_permutation(Index n);

class Unitary {
 public:
  /// Throws ValidationError naming the unitarity defect when it exceeds tol.
  static Unitary validated(ComplexMatrix m, double tol = kUnitaryTol);
  /// No checks; for results of operations that preserve unitarity.
  static Unitary unchecked(ComplexMatrix m) { return Unitary(std::move(m)); }
  static Unitary identity(Index n) { return Unitary(ComplexMatrix::Identity(n, n)); }

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  // Amplitude from input |in> to output |out>.
  Complex entry(Index in, Index out) const { return m_(out, in); }
  Unitary adjoint() const { return Unitary(m_.adjoint()); }

 private:
  explicit Unitary(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

inline Unitary operator*(const Unitary& a, const Unitary& b) {
  return Unitary::unchecked(a.matrix() * b.matrix());
}

class DensityMatrix {
 public:
  /// Checks Hermiticity, unit trace, eigenvalues >= -tol and a real
  /// diagonal in [0, 1]; throws ValidationError with the violated invariant
  /// and its magnitude.
  static DensityMatrix validated(ComplexMatrix m, double tol = kDensityTol);
  static DensityMatrix unchecked(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  double population(Index i) const { return m_(i, i).real(); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// |psi><psi| for psi normalised to unit length; throws on a zero vector.
DensityMatrix pure_state(const ComplexVector& psi);
DensityMatrix maximally_mixed(Index n);
/// cos(theta)|0> + sin(theta)|1>.
ComplexVector phi_state(double theta);
/// Standard basis vector |k> in dimension n.
ComplexVector basis_state(Index n, Index k);

/// U rho U^dagger, re-Hermitised.
DensityMatrix evolve(const DensityMatrix& rho, const Unitary& u);
/// Diagonal of rho; negative rounding noise is clamped to zero.
ProbVector born_vector(const DensityMatrix& rho);
/// Born vector of U rho U^dagger.
ProbVector output_born_vector(const DensityMatrix& rho, const Unitary& u);

/// [[cos t, -sin t], [sin t, cos t]].
Unitary rotation(double theta);

/// (1 - eps) rho + eps I/N. Every diagonal entry of the result is >= eps/N.
DensityMatrix regularize(const DensityMatrix& rho, double eps);

/// Haar-distributed: QR of a complex Ginibre matrix with the phases of R's
/// diagonal folded back into Q. Deterministic per (n, seed).
Unitary random_unitary(Index n, std::uint64_t seed);

/// Mixture of `rank` orthonormal Haar-random pure states with flat-Dirichlet
/// weights.
DensityMatrix random_density(Index n, std::uint64_t seed, Index rank);

/// Random Hermitian generator: complex Gaussian entries, symmetrised, scaled
/// to max-entry norm 1. If `groups` is non-empty the generator is restricted
/// to the diagonal blocks groups[k] x groups[k].
ComplexMatrix random_hermitian(Index n, std::uint64_t seed,
                               const std::vector<std::vector<Index>>& groups = {});

/// exp(i t H) for Hermitian H, via its eigendecomposition.
ComplexMatrix hermitian_exp(const ComplexMatrix& h, double t);

/// U exp(i delta H) with H = random_hermitian(N, seed). Stays exactly in the
/// unitary group; ||U~ - U||_max <= N delta (1 + O(delta)).
Unitary perturb_unitary(const Unitary& u, double delta, std::uint64_t seed);

/// Same, with H block-diagonal over the given input-index groups. When the
/// groups are the input sets of U's minimal blocks, the perturbed unitary
/// keeps U's block structure.
Unitary perturb_unitary_within(const Unitary& u, const std::vector<std::vector<Index>>& groups,
                               double delta, std::uint64_t seed);

Unitary kron(const Unitary& a, const Unitary& b);
DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);

Unitary relabel(const Unitary& u, const Permutation& perm);
DensityMatrix relabel(const DensityMatrix& rho, const Permutation& perm);

/// Direct sum of square blocks along the diagonal.
Unitary direct_sum(const std::vector<Unitary>& blocks);

}  // namespace hvt
