#include "lis/cs_equalizer.hpp"

#include <algorithm>
#include <cmath>

#include "lis/error.hpp"

namespace lis {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DomainError(std::string(what) + " must be a nonempty square matrix");
  }
}

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

void CSConfig::validate(Eigen::Index k) const {
  if (nu < 0 || nu > k - 1) throw DomainError("nu must lie in [0, K-1]");
  if (alphabet.empty()) throw DomainError("alphabet must not be empty");
  double e = 0.0;
  for (const auto& x : alphabet) e += std::norm(x);
  e /= static_cast<double>(alphabet.size());
  if (std::abs(e - 1.0) > 1e-9) throw DomainError("alphabet must have unit mean energy");
}

std::vector<cplx> bpsk() { return {{1.0, 0.0}, {-1.0, 0.0}}; }

std::vector<cplx> qpsk() {
  const double a = 1.0 / std::sqrt(2.0);
  return {{a, a}, {-a, a}, {-a, -a}, {a, -a}};
}

CMatrix mmse_matrix(const CMatrix& g, double n0) {
  require_square(g, "Gram matrix");
  if (!(n0 > 0.0)) throw DomainError("n0 must be positive");
  const Eigen::Index k = g.rows();
  const double scale = std::max(1e-300, g.cwiseAbs().maxCoeff());
  if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw NotPsdError("Gram matrix is not Hermitian");
  }
  CMatrix shifted = g;
  shifted.diagonal().array() += 1e-8 * std::max(g.trace().real(), 0.0) / k + 1e-300;
  if (Eigen::LLT<CMatrix>(shifted).info() != Eigen::Success) {
    throw NotPsdError("Gram matrix is not positive semi-definite");
  }
  CMatrix a = g.adjoint() / n0;
  a.diagonal().array() += 1.0;
  const Eigen::LLT<CMatrix> llt(a);
  CMatrix b = llt.solve(CMatrix::Identity(k, k));
  return 0.5 * (b + b.adjoint());
}

CSFilters cs_solve(const CMatrix& b, int nu) {
  require_square(b, "MMSE matrix");
  const Eigen::Index k = b.rows();
  if (nu < 0 || nu > k - 1) throw DomainError("nu must lie in [0, K-1]");
  CSFilters f;
  f.nu = nu;
  f.h = CMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index last = std::min<Eigen::Index>(i + nu, k - 1);
    const Eigen::Index m = last - i;
    const double bkk = b(i, i).real();
    if (m == 0) {
      if (!(bkk > 0.0)) throw NumericalError("MMSE diagonal must be positive");
      f.h(i, i) = 1.0 / std::sqrt(bkk);
      continue;
    }
    const CMatrix bk = b.block(i + 1, i + 1, m, m);
    const CVector brow_h = b.block(i, i + 1, 1, m).adjoint();  // (b_k)^H
    const Eigen::LLT<CMatrix> llt(bk);
    if (llt.info() != Eigen::Success) throw NumericalError("MMSE sub-block is singular");
    const CVector x = llt.solve(brow_h);  // (B_k)^-1 (b_k)^H
    const double schur = bkk - (brow_h.adjoint() * x)(0, 0).real();
    if (!(schur > 0.0)) throw NumericalError("non-positive Schur complement in cs_solve");
    const double hkk = 1.0 / std::sqrt(schur);
    f.h(i, i) = hkk;
    f.h.block(i + 1, i, m, 1) = -hkk * x;
  }
  f.phi = f.h * f.h.adjoint();
  f.phi.diagonal().array() -= 1.0;
  // Zero the entries outside the band exactly; they are rounding residue.
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      if (std::abs(r - c) > nu) f.phi(r, c) = 0.0;
    }
  }
  f.phi = 0.5 * (f.phi + f.phi.adjoint()).eval();
  return f;
}

CMatrix prefilter_w(const CMatrix& g, double n0, const CMatrix& phi) {
  require_square(g, "Gram matrix");
  if (phi.rows() != g.rows() || phi.cols() != g.cols()) throw DomainError("Phi and G differ in size");
  if (!(n0 > 0.0)) throw DomainError("n0 must be positive");
  CMatrix a = g.adjoint();
  a.diagonal().array() += n0;
  CMatrix rhs = phi;
  rhs.diagonal().array() += 1.0;
  return a.ldlt().solve(rhs);
}

CSFilters cs_design(const CMatrix& g, double n0, int nu) {
  CSFilters f = cs_solve(mmse_matrix(g, n0), nu);
  f.w = prefilter_w(g, n0, f.phi);
  return f;
}

double air(const CMatrix& h) {
  require_square(h, "H");
  double s = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const double d = h(i, i).real();
    if (!(d > 0.0)) throw DomainError("H diagonal must be positive");
    s += std::log(d);
  }
  return 2.0 * s;
}

RMatrix bcjr_detect(const CVector& r_tilde, const CMatrix& phi, const CSConfig& cfg,
                    double max_states) {
  const Eigen::Index k = r_tilde.size();
  if (phi.rows() != k || phi.cols() != k) throw DomainError("Phi and r_tilde differ in size");
  cfg.validate(k);
  const auto m = static_cast<std::size_t>(cfg.alphabet.size());
  const int nu = cfg.nu;
  const double required = std::pow(static_cast<double>(m), nu);
  if (required > max_states) {
    throw StateBudgetError("BCJR trellis needs " + std::to_string(required) + " states", required);
  }
  const auto ns = static_cast<std::size_t>(std::llround(required));
  const std::size_t shift_mod = ns / m;  // m^(nu-1), or 0 when nu == 0
  const auto& x = cfg.alphabet;

  // State index s encodes (u_{k-1}, ..., u_{k-nu}) with u_{k-1} as the least
  // significant base-m digit. Before step nu the older digits are padding and
  // carry no metric.
  auto next_state = [&](std::size_t s, std::size_t in) {
    return nu == 0 ? std::size_t{0} : in + m * (s % std::max<std::size_t>(shift_mod, 1));
  };
  std::vector<cplx> cancel(ns);
  auto step_metrics = [&](Eigen::Index step, std::vector<double>& out) {
    for (std::size_t s = 0; s < ns; ++s) {
      cplx c = r_tilde(step);
      std::size_t rest = s;
      for (int l = 1; l <= nu; ++l) {
        const std::size_t digit = rest % m;
        rest /= m;
        if (step - l >= 0) c -= phi(step, step - l) * x[digit];
      }
      cancel[s] = c;
    }
    const double pkk = phi(step, step).real();
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t i = 0; i < m; ++i) {
        out[s * m + i] = 2.0 * (std::conj(x[i]) * cancel[s]).real() - pkk * std::norm(x[i]);
      }
    }
  };

  std::vector<std::vector<double>> gamma(static_cast<std::size_t>(k), std::vector<double>(ns * m));
  for (Eigen::Index t = 0; t < k; ++t) step_metrics(t, gamma[static_cast<std::size_t>(t)]);

  std::vector<std::vector<double>> alpha(static_cast<std::size_t>(k) + 1,
                                         std::vector<double>(ns, -kInf));
  alpha[0][0] = 0.0;
  for (Eigen::Index t = 0; t < k; ++t) {
    const auto& a = alpha[static_cast<std::size_t>(t)];
    auto& an = alpha[static_cast<std::size_t>(t) + 1];
    const auto& g = gamma[static_cast<std::size_t>(t)];
    for (std::size_t s = 0; s < ns; ++s) {
      if (a[s] == -kInf) continue;
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t sn = next_state(s, i);
        an[sn] = log_sum_exp(an[sn], a[s] + g[s * m + i]);
      }
    }
  }

  RMatrix post(k, static_cast<Eigen::Index>(m));
  std::vector<double> beta(ns, 0.0), beta_prev(ns);
  for (Eigen::Index t = k - 1; t >= 0; --t) {
    const auto& a = alpha[static_cast<std::size_t>(t)];
    const auto& g = gamma[static_cast<std::size_t>(t)];
    std::vector<double> lp(m, -kInf);
    std::fill(beta_prev.begin(), beta_prev.end(), -kInf);
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t sn = next_state(s, i);
        const double through = g[s * m + i] + beta[sn];
        beta_prev[s] = log_sum_exp(beta_prev[s], through);
        if (a[s] != -kInf) lp[i] = log_sum_exp(lp[i], a[s] + through);
      }
    }
    double norm = -kInf;
    for (double v : lp) norm = log_sum_exp(norm, v);
    for (std::size_t i = 0; i < m; ++i) post(t, static_cast<Eigen::Index>(i)) = std::exp(lp[i] - norm);
    beta.swap(beta_prev);
  }
  return post;
}

CMatrix psd_sqrt(const CMatrix& g) {
  require_square(g, "Gram matrix");
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const RVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

SymbolFrame simulate_frame(const CMatrix& g, const CMatrix& g_sqrt, double n0, const CMatrix& w,
                           const std::vector<cplx>& alphabet, Rng& rng) {
  const Eigen::Index k = g.rows();
  if (alphabet.empty()) throw DomainError("alphabet must not be empty");
  SymbolFrame f;
  f.u.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) f.u(i) = alphabet[rng.index(alphabet.size())];
  CVector n(k);
  const double sd = std::sqrt(0.5);
  for (Eigen::Index i = 0; i < k; ++i) n(i) = cplx(sd * rng.normal(), sd * rng.normal());
  f.r = g * f.u + std::sqrt(n0) * (g_sqrt * n);
  f.r_tilde = w.adjoint() * f.r;
  return f;
}

}  // namespace lis
