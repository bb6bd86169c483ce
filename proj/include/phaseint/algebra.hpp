#pragma once

// Connection-matrix calculus: Stokes (S, S^T), reconnection (W), branch-cut
// (C), permutation (P) and diagonal (Lambda) generators, symbolic operator
// words and their reduction to a canonical S*W pair.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "phaseint/cplane.hpp"

namespace phaseint {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// An evaluated n x n connection matrix.
class ConnectionMatrix {
 public:
  ConnectionMatrix() : m_(CMatrix::Identity(2, 2)) {}
  explicit ConnectionMatrix(CMatrix m);

  static ConnectionMatrix identity(int dim) { return ConnectionMatrix(CMatrix::Identity(dim, dim)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  cplx operator()(int r, int c) const { return m_(r, c); }
  cplx det() const { return m_.determinant(); }
  ConnectionMatrix inverse() const { return ConnectionMatrix(m_.inverse()); }
  ConnectionMatrix conj() const { return ConnectionMatrix(m_.conjugate()); }

  /// Largest entrywise modulus of the difference.
  double max_diff(const ConnectionMatrix& other) const;

  friend ConnectionMatrix operator*(const ConnectionMatrix& a, const ConnectionMatrix& b);
  friend CVector operator*(const ConnectionMatrix& a, const CVector& v);

 private:
  CMatrix m_;
};

enum class GenKind { S, ST, W, C, P, Lambda };

std::string to_string(GenKind k);

/// One symbolic factor of an operator word.
struct Generator {
  GenKind kind = GenKind::S;
  /// Stokes constant for S / S^T, with an optional symbolic name.
  cplx s{};
  std::string label;
  /// Phase integrals for W (one per basis function pair / dimension);
  /// empty together with a non-empty `phase_ref` means unresolved.
  std::vector<cplx> omegas;
  std::string phase_ref;
  /// Power of C.
  int power = 1;
  /// Permutation for P: column j of the matrix has its 1 in row perm[j].
  std::vector<int> perm;
  /// Diagonal entries of Lambda.
  std::vector<cplx> diag;

  bool resolved() const { return kind != GenKind::W || !omegas.empty(); }

  friend bool operator==(const Generator&, const Generator&) = default;
};

Generator stokes(cplx s, std::string label = {});
Generator stokes_t(cplx s, std::string label = {});
Generator reconnect(cplx omega, std::string label = {});
Generator reconnect_n(std::vector<cplx> omegas);
Generator reconnect_unresolved(std::string phase_ref);
Generator branch_cut(int power = 1);
Generator permutation(std::vector<int> perm);
Generator swap2();
Generator diagonal(std::vector<cplx> entries);

/// Explicit matrix of a generator in dimension `dim`.
/// Throws DimensionMismatch for S, S^T and C outside dim 2 or for payloads of
/// the wrong size, UnresolvedPhase for an unresolved W.
ConnectionMatrix make_generator(const Generator& g, int dim);

/// Product of generators; factors apply right to left (the rightmost factor
/// acts first on psi).
struct OperatorWord {
  int dim = 2;
  std::vector<Generator> factors;

  friend bool operator==(const OperatorWord&, const OperatorWord&) = default;
};

ConnectionMatrix evaluate_word(const OperatorWord& word);

/// s'' such that S[s] W[omega] = W[omega] S[s''] (or the S^T analogue).
cplx commute_SW(cplx s, cplx omega, bool transpose);

enum class CanonicalOrder { StokesLeft, StokesRight };

/// Reduces a word of same-handed Stokes factors and W factors to
/// S[s_l] W[omega_total] (or W[omega_total] S[s_r]).
/// Throws MixedHandedness when S and S^T are both present and
/// InvalidInput for C, P or Lambda factors.
OperatorWord reduce_to_canonical(const OperatorWord& word,
                                 CanonicalOrder order = CanonicalOrder::StokesLeft);

/// W[shift] F W[-shift] for dim 2.
ConnectionMatrix conjugate_basepoint(const ConnectionMatrix& F, cplx omega_shift);
/// Diagonal generalization: W[shifts] F W[-shifts].
ConnectionMatrix conjugate_basepoint(const ConnectionMatrix& F, const std::vector<cplx>& shifts);

/// P_sigma F P_sigma for dim 2.
ConnectionMatrix conjugate_sign_change(const ConnectionMatrix& F);

/// Lambda^{-1} P^{-1} F P Lambda, the n-dimensional left-hand operator of the
/// symmetry relation.
ConnectionMatrix conjugate_by(const ConnectionMatrix& F, const std::vector<int>& perm,
                              const std::vector<cplx>& lambda);

}  // namespace phaseint
