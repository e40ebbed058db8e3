#pragma once

// Channel-shortening demodulator on the matched-filter outputs r = G u + w,
// w ~ CN(0, N0 G). Terminals are indexed k = 0..K-1 and play the role of
// time steps of an ISI channel; nu is the retained interference depth
// (nu = 0 is LMMSE, nu = K-1 is exact).

#include <vector>

#include "lis/rng.hpp"
#include "lis/types.hpp"

namespace lis {

struct CSConfig {
  int nu = 0;
  std::vector<cplx> alphabet;

  /// 0 <= nu <= k - 1, nonempty alphabet with unit mean energy.
  void validate(Eigen::Index k) const;
};

std::vector<cplx> bpsk();
std::vector<cplx> qpsk();

struct CSFilters {
  int nu = 0;
  CMatrix h;    // lower triangular, bandwidth nu, positive real diagonal
  CMatrix phi;  // H H^H - I, 2 nu + 1 diagonals
  CMatrix w;    // prefilter; r_tilde = W^H r
};

/// B = (G / N0 + I)^-1. Raises NotPsdError for non-PSD G.
CMatrix mmse_matrix(const CMatrix& g, double n0);

/// H and Phi from the MMSE matrix (W is left empty; see prefilter_w).
CSFilters cs_solve(const CMatrix& b, int nu);

/// W = (G + N0 I)^-1 (I + Phi).
CMatrix prefilter_w(const CMatrix& g, double n0, const CMatrix& phi);

/// Convenience: mmse_matrix, cs_solve and prefilter_w in one go.
CSFilters cs_design(const CMatrix& g, double n0, int nu);

/// 2 sum_k log h_kk, nats per channel use summed over the K terminals.
double air(const CMatrix& h);

/// Per-symbol posteriors (K rows, |X| columns) from forward-backward
/// recursion over |X|^nu states with log-metric
///   sum_k 2 Re{u_k^* (r_tilde_k - sum_{l=1..nu} Phi(k, k-l) u_{k-l})} - Phi(k, k) |u_k|^2,
/// i.e. 2 Re{u^H r_tilde} - u^H Phi u restricted to the band. Raises
/// StateBudgetError when |X|^nu exceeds max_states.
RMatrix bcjr_detect(const CVector& r_tilde, const CMatrix& phi, const CSConfig& cfg,
                    double max_states = 1e6);

struct SymbolFrame {
  CVector u;        // transmitted symbols
  CVector r;        // matched-filter outputs G u + w
  CVector r_tilde;  // W^H r
};

/// Hermitian PSD square root via eigendecomposition (negative eigenvalues
/// clamped to zero).
CMatrix psd_sqrt(const CMatrix& g);

/// Draws u uniformly from the alphabet and w with covariance N0 G, where
/// `g_sqrt` is a square root of G.
SymbolFrame simulate_frame(const CMatrix& g, const CMatrix& g_sqrt, double n0, const CMatrix& w,
                           const std::vector<cplx>& alphabet, Rng& rng);

}  // namespace lis
