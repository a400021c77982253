#pragma once

// Parameter calculus for the chirp construction: the sumset-growth exponent
// tau, the energy-decay exponent gamma, the cancellation exponent eps1, the
// final order gain eps = 2 eps1 - 2 eps1^2, and the sweep over m.
//
// tau is the root in (1/2, 1) of (1/M)^(2 tau) + ((M-1)/M)^tau = 1. For
// full-scale m, M = 2^(2.01 m - 1) is far outside double range, so the
// root is found for t = 2 tau - 1 in log space instead.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ripchirp/construction.hpp"
#include "ripchirp/error.hpp"

namespace ripchirp {

/// Additive-combinatorics exponents. c1 and c4 hold 7/2 + eta and 3/4 + eta;
/// with eta = 1e-100 the sums round to 3.5 and 0.75 exactly, and gamma is
/// decreasing in both, so the computed gamma sits on the conservative side.
struct CombinatorialConstants {
  double c0 = 1.0 / 3.0;
  double c1 = 3.5 + 1e-100;
  double c4 = 0.75 + 1e-100;
  double eta = 1e-100;
  std::optional<double> c5;

  void validate() const {
    if (!(c0 > 0.0 && c0 <= 1.0)) throw Error(ErrorCode::InvalidArgument, "c0 must lie in (0, 1]");
    if (!(c1 > 0.0) || !(c4 > 0.0)) throw Error(ErrorCode::InvalidArgument, "c1 and c4 must be positive");
    if (c5 && !(*c5 > 0.0)) throw Error(ErrorCode::InvalidArgument, "c5 must be positive");
  }
};

/// Above this log2 M the direct equation is not evaluated.
inline constexpr double kLogSpaceThreshold = 200.0;

/// (1/M)^(2 tau) + ((M-1)/M)^tau - 1, rewritten with expm1/log1p.
inline double tau_residual(double log2M, double tau) {
  const double u = std::exp2(-log2M);
  return std::exp2(-2.0 * tau * log2M) + std::expm1(tau * std::log1p(-u));
}

/// Bisection on [1/2, 1] for the direct equation; returns tau.
inline double solve_tau_direct(double log2M) {
  if (!(log2M >= 1.0)) throw Error(ErrorCode::InvalidArgument, "log2M must be >= 1");
  if (log2M > 1000.0) throw Error(ErrorCode::InvalidArgument, "direct tau solve needs log2M <= 1000");
  double lo = 0.5;  // residual > 0
  double hi = 1.0;  // residual < 0
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (tau_residual(log2M, mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(tau_residual(log2M, lo)) <= std::abs(tau_residual(log2M, hi)) ? lo : hi;
}

/// ln(1 - (1-u)^tau) - ln u, evaluated without forming u when it underflows.
inline double log_gap_over_u(double log2M, double tau) {
  if (log2M <= 1000.0) {
    const double u = std::exp2(-log2M);
    return std::log(-std::expm1(tau * std::log1p(-u))) + log2M * std::numbers::ln2;
  }
  // 1 - (1-u)^tau = tau u (1 + (1 - tau) u / 2 + O(u^2)); u < 2^-1000 here
  return std::log(tau);
}

/// Fixed-point iteration t <- -L((1+t)/2) / ln M for t = 2 tau - 1, where
/// L = log_gap_over_u. Contracts for large M; returns t.
inline double solve_two_tau_minus_1_logspace(double log2M) {
  if (!(log2M >= 16.0)) throw Error(ErrorCode::InvalidArgument, "log-space tau solve needs log2M >= 16");
  const double lnM = log2M * std::numbers::ln2;
  double t = std::numbers::ln2 / lnM;
  for (int iter = 0; iter < 1000; ++iter) {
    const double next = -log_gap_over_u(log2M, 0.5 * (1.0 + t)) / lnM;
    if (std::abs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(next)) return next;
    t = next;
  }
  throw Error(ErrorCode::NoConvergence, "log-space tau iteration did not converge");
}

/// 2 tau - 1, dispatching on the size of M.
inline double solve_two_tau_minus_1(double log2M) {
  if (log2M > kLogSpaceThreshold) return solve_two_tau_minus_1_logspace(log2M);
  return 2.0 * solve_tau_direct(log2M) - 1.0;
}

inline double solve_tau(double log2M) {
  if (log2M > kLogSpaceThreshold) return 0.5 * (1.0 + solve_two_tau_minus_1_logspace(log2M));
  return solve_tau_direct(log2M);
}

struct TauBounds {
  double lo = 0;  // (ln 2 / ln M)(1 - 1/ln M)
  double hi = 0;  // ln 2 / ln M
};

/// Bounds on 2 tau - 1 (natural logarithms).
inline TauBounds tau_bounds(double log2M) {
  if (!(log2M >= 1.0)) throw Error(ErrorCode::InvalidArgument, "log2M must be >= 1");
  const double lnM = log2M * std::numbers::ln2;
  const double hi = std::numbers::ln2 / lnM;
  return {hi * (1.0 - 1.0 / lnM), hi};
}

/// 0.49 (2tau-1) / (c1 + c4 (2tau-1)), taking 2 tau - 1 directly.
inline double gamma_from_two_tau_minus_1(double t, const CombinatorialConstants& k) {
  return 0.49 * t / (k.c1 + k.c4 * t);
}

inline double gamma_from_tau(double tau, const CombinatorialConstants& k) {
  if (!(tau > 0.5 && tau < 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in (1/2, 1)");
  return gamma_from_two_tau_minus_1(2.0 * tau - 1.0, k);
}

inline double epsilon1_numerator(u64 m, double gamma, double c0) {
  const double md = static_cast<double>(m);
  const double alpha = 1.0 / (2.0 * md);
  return c0 * gamma / 8.0 - (47.0 * alpha - 23.0 * gamma) / (2.0 * md);
}

/// (c0 gamma/8 - (47 alpha - 23 gamma)/(2m)) / (1 + 93/m + c0/2), alpha = 1/(2m).
/// Negative values mean m is infeasible and are returned unchanged.
inline double epsilon1(u64 m, double gamma, double c0) {
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "m must be >= 2");
  const double md = static_cast<double>(m);
  return epsilon1_numerator(m, gamma, c0) / (1.0 + 93.0 / md + c0 / 2.0);
}

inline double epsilon_total(double eps1) { return 2.0 * eps1 - 2.0 * eps1 * eps1; }

inline constexpr std::uint64_t kFlatLemmaMinK = 1024;

struct FlatLemmaResult {
  std::uint64_t order = 0;  // 2 s k
  double constant = 0;      // 44 s sqrt(delta) ln k
  bool hypothesis_ok = false;
};

/// RIP order and constant deduced from flat-vector pair sums bounded by delta k.
/// "log k" is the natural logarithm.
inline FlatLemmaResult flat_lemma_apply(std::uint64_t k, std::uint64_t s, double delta) {
  if (k < 2 || s < 1 || !(delta >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "flat lemma needs k >= 2, s >= 1, delta >= 0");
  }
  FlatLemmaResult res;
  res.order = 2 * s * k;
  res.constant = 44.0 * static_cast<double>(s) * std::sqrt(delta) * std::log(static_cast<double>(k));
  res.hypothesis_ok = k >= kFlatLemmaMinK;
  return res;
}

struct RipExponents {
  std::optional<std::uint64_t> k;  // floor(sqrt p)
  std::optional<std::uint64_t> s;  // floor(p^eps0)
  double order_exponent = 0;       // 1/2 + eps0
  double decay_exponent = 0;       // eps1/2 - eps0, up to a (log p)^3 factor
  double eps = 0;                  // 4 eps0 / (1 + 2 eps0)
  double eps_from_eps1 = 0;        // 2 eps1 - 2 eps1^2
};

/// Final deduction for a chosen eps0 in (0, eps1/2). p is optional; without it
/// only the exponents are reported.
inline RipExponents rip_exponents(std::optional<u64> p, double eps1, double eps0) {
  if (!(eps0 > 0.0 && eps0 < eps1 / 2.0)) {
    throw Error(ErrorCode::InvalidEps0, "eps0 must lie in (0, eps1/2)");
  }
  RipExponents res;
  if (p) {
    u64 k = static_cast<u64>(std::sqrt(static_cast<double>(*p)));
    while (static_cast<u128>(k) * k > *p) --k;
    while (static_cast<u128>(k + 1) * (k + 1) <= *p) ++k;
    res.k = k;
    res.s = static_cast<u64>(std::floor(std::pow(static_cast<double>(*p), eps0)));
  }
  res.order_exponent = 0.5 + eps0;
  res.decay_exponent = eps1 / 2.0 - eps0;
  res.eps = 4.0 * eps0 / (1.0 + 2.0 * eps0);
  res.eps_from_eps1 = epsilon_total(eps1);
  return res;
}

inline constexpr const char* kLogBaseNote =
    "tau bounds and the flat-lemma constant use natural logarithms; M is taken as 2^log2M without the floor";

struct ParameterReport {
  u64 m = 0;
  double log2M = 0;
  double tau = 0;
  double two_tau_minus_1 = 0;
  double gamma = 0;
  double alpha = 0;
  double eps1 = 0;
  double eps = 0;
  double eps_prime_exponent = 0;  // eps1/2 - eps0 at eps0 = eps1/2 (1 - 1e-3)
  bool feasible_gamma = false;    // gamma <= 1/(4m)
  bool feasible_eps = false;      // eps <= 1/(403m)
  bool feasible_eps1 = false;     // eps1 numerator > 0

  bool feasible() const { return feasible_gamma && feasible_eps && feasible_eps1; }
};

/// Full pipeline for one m, with M = 2^(2.01 m - 1).
inline ParameterReport parameter_report(u64 m, const CombinatorialConstants& k) {
  if (m < 2 || m % 2 != 0) throw Error(ErrorCode::InvalidArgument, "m must be an even integer >= 2");
  k.validate();
  ParameterReport rep;
  const double md = static_cast<double>(m);
  rep.m = m;
  rep.log2M = log2_digit_bound(m);
  rep.two_tau_minus_1 = solve_two_tau_minus_1(rep.log2M);
  rep.tau = 0.5 * (1.0 + rep.two_tau_minus_1);
  rep.gamma = gamma_from_two_tau_minus_1(rep.two_tau_minus_1, k);
  rep.alpha = 1.0 / (2.0 * md);
  rep.eps1 = epsilon1(m, rep.gamma, k.c0);
  rep.eps = epsilon_total(rep.eps1);
  rep.eps_prime_exponent = rep.eps1 / 2.0 - rep.eps1 / 2.0 * (1.0 - 1e-3);
  rep.feasible_gamma = rep.gamma <= 1.0 / (4.0 * md);
  rep.feasible_eps = rep.eps <= 1.0 / (403.0 * md);
  rep.feasible_eps1 = epsilon1_numerator(m, rep.gamma, k.c0) > 0.0;
  return rep;
}

struct SweepResult {
  ParameterReport best;
  std::vector<ParameterReport> table;
};

/// Evaluates every even m in [m_min, m_max] and keeps the feasible m with the
/// largest eps (ties go to the smaller m).
inline SweepResult optimize_m(u64 m_min, u64 m_max, const CombinatorialConstants& k) {
  if (m_min < kStrictMinM || m_min > m_max) {
    throw Error(ErrorCode::InvalidArgument, "need 100 <= m_min <= m_max");
  }
  SweepResult res;
  std::optional<std::size_t> best;
  for (u64 m = m_min + (m_min % 2); m <= m_max; m += 2) {
    res.table.push_back(parameter_report(m, k));
    const auto& rep = res.table.back();
    if (rep.feasible() && (!best || rep.eps > res.table[*best].eps)) best = res.table.size() - 1;
  }
  if (!best) {
    throw Error(ErrorCode::NoFeasibleM, "no even m in [" + std::to_string(m_min) + ", " +
                                            std::to_string(m_max) + "] is feasible");
  }
  res.best = res.table[*best];
  return res;
}

/// delta sqrt(n) ln n / ln N.
inline double baseline_k(u64 n, u64 N, double delta) {
  if (n < 2 || n > N) throw Error(ErrorCode::InvalidArgument, "baseline needs 2 <= n <= N");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
  const double nd = static_cast<double>(n);
  return delta * std::sqrt(nd) * std::log(nd) / std::log(static_cast<double>(N));
}

}  // namespace ripchirp
