#pragma once

// Both sides of the refutation min-max identity on graphs with at most five
// vertices, against Q = G(nv, 1/2). With uniform Q the non-constant monomials
// are orthonormal, so for a distribution p on R:
//   sup over mean-zero, unit-norm f of E_p f = ||m(p)||,
// where m(p)_alpha = E_p[Y^alpha] over 1 <= |alpha| <= D. The primal side is
// max over ||c|| <= 1 of min over X in R of <c, m(X)>; the dual side is
// min over p of Adv(p, Q) = sqrt(1 + ||m(p)||^2).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lowcolor/colorability.hpp"
#include "lowcolor/graph.hpp"
#include "lowcolor/models.hpp"

namespace lowcolor {

inline constexpr int kMaxMicroVertices = 5;

struct MicroInstance {
  int nv = 0;
  int q = 0;
  int D = 0;
  // Graphs as edge masks (bit e set iff edge e present); the universe is
  // every mask in [0, 2^C(nv,2)).
  std::uint64_t universe_size = 0;
  std::vector<double> q_weights;      // per universe mask, uniform
  std::vector<std::uint64_t> R;       // ascending
  std::vector<std::uint64_t> monomials;  // edge masks with 1 <= |alpha| <= D

  // Y^alpha at graph x.
  static double monomial(std::uint64_t alpha, std::uint64_t x) {
    return std::popcount(alpha & ~x) % 2 ? -1.0 : 1.0;
  }
  Eigen::VectorXd features(std::uint64_t x) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(monomials.size()));
    for (std::size_t i = 0; i < monomials.size(); ++i) v(static_cast<Eigen::Index>(i)) = monomial(monomials[i], x);
    return v;
  }
  // Columns are features of R members, in R order.
  Eigen::MatrixXd feature_matrix() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(monomials.size()), static_cast<Eigen::Index>(R.size()));
    for (std::size_t j = 0; j < R.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = features(R[j]);
    return m;
  }
};

inline std::vector<std::uint64_t> micro_monomials(int nv, int D) {
  const int pairs = static_cast<int>(num_pairs(nv));
  std::vector<std::uint64_t> out;
  for (int s = 1; s <= std::min(D, pairs); ++s)
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << pairs); ++a)
      if (std::popcount(a) == s) out.push_back(a);
  return out;
}

// Q uniform and R = the q-colourable graphs on nv vertices.
inline MicroInstance build_coloring_instance(int nv, int q, int D) {
  if (nv < 1 || nv > kMaxMicroVertices) throw ParameterError("build_coloring_instance: need 1 <= nv <= 5");
  if (q < 1) throw ParameterError("build_coloring_instance: need q >= 1");
  if (D < 0) throw ParameterError("build_coloring_instance: need D >= 0");
  MicroInstance inst;
  inst.nv = nv;
  inst.q = q;
  inst.D = D;
  const int pairs = static_cast<int>(num_pairs(nv));
  inst.universe_size = std::uint64_t{1} << pairs;
  inst.q_weights.assign(inst.universe_size, 1.0 / static_cast<double>(inst.universe_size));
  for (std::uint64_t x = 0; x < inst.universe_size; ++x)
    if (is_q_colorable(graph_from_mask(nv, x), q)) inst.R.push_back(x);
  if (inst.R.empty()) throw std::logic_error("build_coloring_instance: empty property");
  inst.monomials = micro_monomials(nv, D);
  return inst;
}

struct PrimalResult {
  double value = 0.0;  // min over R of <c, m(X)> for the returned c
  Eigen::VectorXd coefficients;  // ||c|| <= 1, indexed like inst.monomials
  double averaged_value = 0.0;
  double best_iterate_value = 0.0;
  int iterations = 0;
  // Best single-iterate value at iterations 1, 2, 4, 8, ...
  std::vector<double> trace;
};

struct DualResult {
  double adv = 1.0;        // sqrt(1 + objective)
  double objective = 0.0;  // ||m(p)||^2
  std::vector<double> p;   // indexed like inst.R
  double fw_gap = 0.0;     // final Frank-Wolfe gap, >= objective - optimum
  int iterations = 0;
  int monotonicity_violations = 0;
  std::vector<double> trace;  // sqrt(objective) at iterations 1, 2, 4, 8, ...
};

struct SolverOptions {
  int max_iterations = 100000;
  double tol = 1e-9;
};

namespace detail {
inline double min_over_columns(const Eigen::MatrixXd& feats, const Eigen::VectorXd& c, Eigen::Index* arg = nullptr) {
  Eigen::Index i = 0;
  const double v = (feats.transpose() * c).minCoeff(&i);
  if (arg) *arg = i;
  return v;
}
inline void project_unit_ball(Eigen::VectorXd& c) {
  const double nrm = c.norm();
  if (nrm > 1.0) c /= nrm;
}
inline bool is_checkpoint(int t) { return (t & (t - 1)) == 0; }
}  // namespace detail

// Projected supergradient ascent on the concave map c -> min_X <c, m(X)> over
// the unit ball, step 1/(||g|| sqrt(t)), averaging the iterates of the second
// half of the run. The better of the average and the best single iterate is
// returned; both are feasible.
inline PrimalResult primal_value(const MicroInstance& inst, const SolverOptions& opt = {}) {
  PrimalResult res;
  const auto d = static_cast<Eigen::Index>(inst.monomials.size());
  res.coefficients = Eigen::VectorXd::Zero(d);
  if (d == 0) return res;
  const Eigen::MatrixXd feats = inst.feature_matrix();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd best = c;
  double best_val = detail::min_over_columns(feats, c);
  double weight_sum = 0.0;
  for (int t = 1; t <= opt.max_iterations; ++t) {
    Eigen::Index arg = 0;
    const double val = detail::min_over_columns(feats, c, &arg);
    if (val > best_val) {
      best_val = val;
      best = c;
    }
    const double step = 1.0 / (feats.col(arg).norm() * std::sqrt(static_cast<double>(t)));
    c += step * feats.col(arg);
    detail::project_unit_ball(c);
    if (2 * t > opt.max_iterations) {
      avg += step * c;
      weight_sum += step;
    }
    res.iterations = t;
    if (detail::is_checkpoint(t)) res.trace.push_back(best_val);
  }
  Eigen::VectorXd a = weight_sum > 0 ? Eigen::VectorXd(avg / weight_sum) : Eigen::VectorXd(c);
  detail::project_unit_ball(a);
  res.averaged_value = detail::min_over_columns(feats, a);
  res.best_iterate_value = best_val;
  if (res.averaged_value >= best_val) {
    res.value = res.averaged_value;
    res.coefficients = a;
  } else {
    res.value = best_val;
    res.coefficients = best;
  }
  return res;
}

// Frank-Wolfe with exact line search for min over the simplex on R of
// ||m(p)||^2. Each step moves toward the R member minimising <m(p), m(X)>,
// or, when it is better, along a pairwise direction that shifts mass from the
// worst active member to that vertex.
inline DualResult dual_value(const MicroInstance& inst, const SolverOptions& opt = {}) {
  DualResult res;
  const auto d = static_cast<Eigen::Index>(inst.monomials.size());
  const auto r = static_cast<Eigen::Index>(inst.R.size());
  res.p.assign(inst.R.size(), 0.0);
  if (d == 0) {
    res.p.assign(inst.R.size(), 1.0 / static_cast<double>(r));
    return res;
  }
  const Eigen::MatrixXd feats = inst.feature_matrix();
  Eigen::VectorXd p = Eigen::VectorXd::Constant(r, 1.0 / static_cast<double>(r));
  Eigen::VectorXd v = feats * p;
  double obj = v.squaredNorm();
  for (int t = 1; t <= opt.max_iterations; ++t) {
    const Eigen::VectorXd scores = feats.transpose() * v;  // half the gradient in p
    Eigen::Index s = 0;
    scores.minCoeff(&s);
    res.fw_gap = 2.0 * (v.squaredNorm() - scores(s));
    res.iterations = t;
    if (res.fw_gap <= opt.tol) break;

    // Away vertex: the active member with the largest score.
    Eigen::Index a = -1;
    for (Eigen::Index j = 0; j < r; ++j)
      if (p(j) > 0.0 && (a < 0 || scores(j) > scores(a))) a = j;

    Eigen::VectorXd dir;
    double max_step = 1.0;
    bool pairwise = a >= 0 && a != s && p(a) < 1.0;
    if (pairwise) {
      dir = feats.col(s) - feats.col(a);
      max_step = p(a);
    } else {
      dir = feats.col(s) - v;
    }
    const double dd = dir.squaredNorm();
    if (dd <= 0.0) break;
    const double gamma = std::clamp(-v.dot(dir) / dd, 0.0, max_step);
    if (gamma <= 0.0) {
      if (!pairwise) break;
      // Fall back to a plain step toward s.
      dir = feats.col(s) - v;
      const double dd2 = dir.squaredNorm();
      const double g2 = dd2 > 0.0 ? std::clamp(-v.dot(dir) / dd2, 0.0, 1.0) : 0.0;
      if (g2 <= 0.0) break;
      p *= (1.0 - g2);
      p(s) += g2;
      v += g2 * dir;
    } else if (pairwise) {
      p(a) -= gamma;
      if (p(a) < 1e-15) p(a) = 0.0;
      p(s) += gamma;
      v += gamma * dir;
    } else {
      p *= (1.0 - gamma);
      p(s) += gamma;
      v += gamma * dir;
    }
    if (t % 1024 == 0) v = feats * p;  // limit drift from incremental updates
    const double next = v.squaredNorm();
    if (next > obj + 1e-14) ++res.monotonicity_violations;
    obj = next;
    if (detail::is_checkpoint(t)) res.trace.push_back(std::sqrt(obj));
  }
  v = feats * p;
  res.objective = v.squaredNorm();
  res.adv = std::sqrt(1.0 + res.objective);
  for (Eigen::Index j = 0; j < r; ++j) res.p[j] = p(j);
  return res;
}

struct DualityReport {
  PrimalResult primal;
  DualResult dual;
  double primal_value = 0.0;
  double dual_adv = 1.0;
  double gap = 0.0;  // |primal - sqrt(dual_adv^2 - 1)|
};

inline DualityReport solve_duality(const MicroInstance& inst, const SolverOptions& opt = {}) {
  DualityReport rep;
  rep.primal = primal_value(inst, opt);
  rep.dual = dual_value(inst, opt);
  rep.primal_value = rep.primal.value;
  rep.dual_adv = rep.dual.adv;
  rep.gap = std::abs(rep.primal_value - std::sqrt(std::max(0.0, rep.dual_adv * rep.dual_adv - 1.0)));
  return rep;
}

struct AdvMeanIdentity {
  double sup_mean = 0.0;  // sup over f in F of E_p f
  double adv_squared = 1.0;  // c^T G^+ c over all |alpha| <= D
  double residual = 0.0;  // |sup_mean^2 + 1 - adv_squared|
};

// p is a distribution on inst.R. The supremum comes from the orthonormal
// expansion; Adv^2 is solved from the Gram matrix of all monomials of degree
// <= D, built by summing over the whole universe with the Q weights.
inline AdvMeanIdentity adv_mean_identity_check(const MicroInstance& inst, const std::vector<double>& p) {
  if (p.size() != inst.R.size()) throw ParameterError("adv_mean_identity_check: p must match R");
  double total = 0.0;
  for (double x : p) {
    if (x < 0.0) throw ParameterError("adv_mean_identity_check: negative probability");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ParameterError("adv_mean_identity_check: p must sum to 1");

  AdvMeanIdentity out;
  double s2 = 0.0;
  for (auto alpha : inst.monomials) {
    double m = 0.0;
    for (std::size_t j = 0; j < inst.R.size(); ++j) m += p[j] * MicroInstance::monomial(alpha, inst.R[j]);
    s2 += m * m;
  }
  out.sup_mean = std::sqrt(s2);

  std::vector<std::uint64_t> basis{0};
  basis.insert(basis.end(), inst.monomials.begin(), inst.monomials.end());
  const auto b = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(b, b);
  for (std::uint64_t x = 0; x < inst.universe_size; ++x) {
    Eigen::VectorXd f(b);
    for (Eigen::Index i = 0; i < b; ++i) f(i) = MicroInstance::monomial(basis[i], x);
    g.noalias() += inst.q_weights[x] * f * f.transpose();
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(b);
  for (std::size_t j = 0; j < inst.R.size(); ++j)
    for (Eigen::Index i = 0; i < b; ++i) c(i) += p[j] * MicroInstance::monomial(basis[i], inst.R[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const auto& lam = es.eigenvalues();
  const double cutoff = 1e-10 * lam.maxCoeff();
  const Eigen::VectorXd proj = es.eigenvectors().transpose() * c;
  double adv2 = 0.0;
  for (Eigen::Index i = 0; i < b; ++i)
    if (lam(i) > cutoff) adv2 += proj(i) * proj(i) / lam(i);
  out.adv_squared = adv2;
  out.residual = std::abs(out.sup_mean * out.sup_mean + 1.0 - out.adv_squared);
  return out;
}

}  // namespace lowcolor
