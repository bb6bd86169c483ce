#include "phaseint/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phaseint/error.hpp"

namespace phaseint {

ConnectionMatrix::ConnectionMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw Error(Errc::DimensionMismatch, "connection matrix must be square and non-empty");
}

double ConnectionMatrix::max_diff(const ConnectionMatrix& other) const {
  if (dim() != other.dim()) throw Error(Errc::DimensionMismatch, "matrix dimensions differ");
  return (m_ - other.m_).cwiseAbs().maxCoeff();
}

ConnectionMatrix operator*(const ConnectionMatrix& a, const ConnectionMatrix& b) {
  if (a.dim() != b.dim()) throw Error(Errc::DimensionMismatch, "matrix dimensions differ");
  return ConnectionMatrix(a.m_ * b.m_);
}

CVector operator*(const ConnectionMatrix& a, const CVector& v) {
  if (a.dim() != v.size()) throw Error(Errc::DimensionMismatch, "vector dimension differs");
  return a.m_ * v;
}

std::string to_string(GenKind k) {
  switch (k) {
    case GenKind::S: return "S";
    case GenKind::ST: return "ST";
    case GenKind::W: return "W";
    case GenKind::C: return "C";
    case GenKind::P: return "P";
    case GenKind::Lambda: return "Lambda";
  }
  return "?";
}

Generator stokes(cplx s, std::string label) {
  Generator g;
  g.kind = GenKind::S;
  g.s = s;
  g.label = std::move(label);
  return g;
}

Generator stokes_t(cplx s, std::string label) {
  Generator g = stokes(s, std::move(label));
  g.kind = GenKind::ST;
  return g;
}

Generator reconnect(cplx omega, std::string label) {
  Generator g;
  g.kind = GenKind::W;
  g.omegas = {omega};
  g.label = std::move(label);
  return g;
}

Generator reconnect_n(std::vector<cplx> omegas) {
  Generator g;
  g.kind = GenKind::W;
  g.omegas = std::move(omegas);
  return g;
}

Generator reconnect_unresolved(std::string phase_ref) {
  Generator g;
  g.kind = GenKind::W;
  g.phase_ref = std::move(phase_ref);
  return g;
}

Generator branch_cut(int power) {
  Generator g;
  g.kind = GenKind::C;
  g.power = power;
  return g;
}

Generator permutation(std::vector<int> perm) {
  Generator g;
  g.kind = GenKind::P;
  g.perm = std::move(perm);
  return g;
}

Generator swap2() { return permutation({1, 0}); }

Generator diagonal(std::vector<cplx> entries) {
  Generator g;
  g.kind = GenKind::Lambda;
  g.diag = std::move(entries);
  return g;
}

namespace {

void require_dim2(int dim, const char* what) {
  if (dim != 2) throw Error(Errc::DimensionMismatch, std::string(what) + " is defined only for dim 2");
}

CMatrix permutation_matrix(const std::vector<int>& perm, int dim) {
  if (static_cast<int>(perm.size()) != dim)
    throw Error(Errc::DimensionMismatch, "permutation size differs from dim");
  std::vector<int> seen(dim, 0);
  CMatrix P = CMatrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const int i = perm[j];
    if (i < 0 || i >= dim || seen[i]++) throw Error(Errc::InvalidInput, "not a permutation");
    P(i, j) = 1.0;
  }
  return P;
}

}  // namespace

ConnectionMatrix make_generator(const Generator& g, int dim) {
  if (dim <= 0) throw Error(Errc::DimensionMismatch, "dimension must be positive");
  switch (g.kind) {
    case GenKind::S:
    case GenKind::ST: {
      require_dim2(dim, "Stokes operator");
      CMatrix m = CMatrix::Identity(2, 2);
      if (g.kind == GenKind::S) m(1, 0) = g.s;
      else m(0, 1) = g.s;
      return ConnectionMatrix(m);
    }
    case GenKind::W: {
      if (!g.resolved())
        throw Error(Errc::UnresolvedPhase, "W factor references unintegrated path '" + g.phase_ref + "'");
      CMatrix m = CMatrix::Zero(dim, dim);
      if (dim == 2 && g.omegas.size() == 1) {
        m(0, 0) = std::exp(kI * g.omegas[0]);
        m(1, 1) = std::exp(-kI * g.omegas[0]);
      } else {
        if (static_cast<int>(g.omegas.size()) != dim)
          throw Error(Errc::DimensionMismatch, "W needs one phase per dimension");
        for (int i = 0; i < dim; ++i) m(i, i) = std::exp(kI * g.omegas[i]);
      }
      return ConnectionMatrix(m);
    }
    case GenKind::C: {
      require_dim2(dim, "branch-cut operator C");
      CMatrix c(2, 2);
      c << 0.0, -kI, -kI, 0.0;
      CMatrix m = CMatrix::Identity(2, 2);
      const int p = g.power;
      // C^4 = I and C^{-1} = C^3.
      const int reduced = ((p % 4) + 4) % 4;
      for (int k = 0; k < reduced; ++k) m = c * m;
      return ConnectionMatrix(m);
    }
    case GenKind::P:
      return ConnectionMatrix(permutation_matrix(g.perm, dim));
    case GenKind::Lambda: {
      if (static_cast<int>(g.diag.size()) != dim)
        throw Error(Errc::DimensionMismatch, "Lambda needs one entry per dimension");
      CMatrix m = CMatrix::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) m(i, i) = g.diag[i];
      return ConnectionMatrix(m);
    }
  }
  throw Error(Errc::InvalidInput, "unknown generator kind");
}

ConnectionMatrix evaluate_word(const OperatorWord& word) {
  ConnectionMatrix acc = ConnectionMatrix::identity(word.dim);
  for (const auto& g : word.factors) acc = acc * make_generator(g, word.dim);
  return acc;
}

cplx commute_SW(cplx s, cplx omega, bool transpose) {
  return transpose ? s * std::exp(-2.0 * kI * omega) : s * std::exp(2.0 * kI * omega);
}

namespace {

std::string sum_label(const std::string& a, const std::string& b) {
  if (a.empty() || b.empty()) return {};
  return a + "+" + b;
}

std::string shifted_label(const std::string& l, const std::string& factor) {
  if (l.empty()) return {};
  return "(" + l + ")*" + factor;
}

}  // namespace

OperatorWord reduce_to_canonical(const OperatorWord& word, CanonicalOrder order) {
  if (word.dim != 2) throw Error(Errc::DimensionMismatch, "canonical reduction is defined for dim 2");
  bool has_s = false, has_st = false;
  for (const auto& g : word.factors) {
    if (g.kind == GenKind::S) has_s = true;
    else if (g.kind == GenKind::ST) has_st = true;
    else if (g.kind != GenKind::W)
      throw Error(Errc::InvalidInput, "only S, S^T and W factors can be reduced; move " +
                                          to_string(g.kind) + " out first");
    if (!g.resolved()) throw Error(Errc::UnresolvedPhase, "unresolved W in word");
  }
  if (has_s && has_st) throw Error(Errc::MixedHandedness, "word mixes S and S^T factors");
  const bool transpose = has_st;

  // Accumulate S[s] W[total] from the right.
  cplx s{};
  std::string label;
  bool label_known = true;
  cplx total{};
  for (auto it = word.factors.rbegin(); it != word.factors.rend(); ++it) {
    if (it->kind == GenKind::W) {
      // W[w] S[s] = S[s e^{-2iw}] W[w]  (S^T: e^{+2iw})
      const cplx w = it->omegas.at(0);
      s = commute_SW(s, w, !transpose);
      if (label_known && !label.empty())
        label = shifted_label(label, transpose ? "exp(2i*w)" : "exp(-2i*w)");
      total += w;
    } else {
      s = it->s + s;
      if (it->label.empty()) label_known = false;
      label = label.empty() ? it->label : sum_label(it->label, label);
    }
  }
  if (!label_known) label.clear();

  Generator st = transpose ? stokes_t(s, label) : stokes(s, label);
  Generator wt = reconnect(total);
  OperatorWord out{2, {}};
  if (order == CanonicalOrder::StokesLeft) {
    out.factors = {st, wt};
  } else {
    // S[s_l] W = W S[s_r]
    st.s = commute_SW(s, total, transpose);
    if (!st.label.empty()) st.label = shifted_label(st.label, transpose ? "exp(-2i*W)" : "exp(2i*W)");
    out.factors = {wt, st};
  }
  return out;
}

ConnectionMatrix conjugate_basepoint(const ConnectionMatrix& F, cplx omega_shift) {
  if (F.dim() != 2) throw Error(Errc::DimensionMismatch, "scalar shift needs dim 2");
  return make_generator(reconnect(omega_shift), 2) * F * make_generator(reconnect(-omega_shift), 2);
}

ConnectionMatrix conjugate_basepoint(const ConnectionMatrix& F, const std::vector<cplx>& shifts) {
  std::vector<cplx> neg(shifts.size());
  std::transform(shifts.begin(), shifts.end(), neg.begin(), [](cplx w) { return -w; });
  return make_generator(reconnect_n(shifts), F.dim()) * F * make_generator(reconnect_n(neg), F.dim());
}

ConnectionMatrix conjugate_sign_change(const ConnectionMatrix& F) {
  if (F.dim() != 2) throw Error(Errc::DimensionMismatch, "sign change is defined for dim 2");
  const auto P = make_generator(swap2(), 2);
  return P * F * P;
}

ConnectionMatrix conjugate_by(const ConnectionMatrix& F, const std::vector<int>& perm,
                              const std::vector<cplx>& lambda) {
  const int n = F.dim();
  const auto P = make_generator(permutation(perm), n);
  const auto L = make_generator(diagonal(lambda), n);
  return L.inverse() * P.inverse() * F * P * L;
}

}  // namespace phaseint
