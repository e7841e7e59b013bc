#ifndef COMMAVG_PROJECTOR_HPP
#define COMMAVG_PROJECTOR_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "actions.hpp"
#include "averages.hpp"
#include "spaces.hpp"

namespace commavg {

/// Gram-Schmidt drops candidates whose residual falls below this norm.
inline constexpr double kResidualDrop = 1e-10;

/**
 * Orthogonal projections P onto W_{T/S} and Q onto W_{S/T} in L^2(mu).
 *
 * Bases are stored column-wise and are orthonormal for the weighted inner
 * product; P = B_TS B_TS^T D with D = diag(mu), likewise Q.
 */
class CharacteristicProjector {
public:
  CharacteristicProjector(std::vector<double> weights, Eigen::MatrixXd basis_ts, Eigen::MatrixXd basis_st)
      : weights_(std::move(weights)), basis_ts_(std::move(basis_ts)), basis_st_(std::move(basis_st)) {
    const auto n = static_cast<Eigen::Index>(weights_.size());
    d_ = Eigen::VectorXd(n);
    for (Eigen::Index i = 0; i < n; ++i) d_(i) = weights_[static_cast<std::size_t>(i)];
    p_ = basis_ts_ * basis_ts_.transpose() * d_.asDiagonal();
    q_ = basis_st_ * basis_st_.transpose() * d_.asDiagonal();
  }

  const Eigen::MatrixXd& basis_ts() const noexcept { return basis_ts_; }
  const Eigen::MatrixXd& basis_st() const noexcept { return basis_st_; }
  const Eigen::MatrixXd& P() const noexcept { return p_; }
  const Eigen::MatrixXd& Q() const noexcept { return q_; }
  std::size_t dimension_ts() const noexcept { return static_cast<std::size_t>(basis_ts_.cols()); }
  std::size_t dimension_st() const noexcept { return static_cast<std::size_t>(basis_st_.cols()); }

  template <class V> Observable<V> apply_p(const Observable<V>& f) const { return apply(p_, f); }
  template <class V> Observable<V> apply_q(const Observable<V>& f) const { return apply(q_, f); }
  /// f - Pf, the component orthogonal to W_{T/S}.
  template <class V> Observable<V> complement(const Observable<V>& f) const { return f - apply_p(f); }

  /// Operator norm on L^2(mu): || D^{1/2} M D^{-1/2} ||_2.
  double op_norm(const Eigen::MatrixXd& m) const {
    Eigen::VectorXd s = d_.cwiseSqrt();
    Eigen::MatrixXd conj = s.asDiagonal() * m * s.cwiseInverse().asDiagonal();
    if (conj.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(conj);
    return svd.singularValues()(0);
  }

  /// Adjoint in L^2(mu): D^{-1} M^T D.
  Eigen::MatrixXd adjoint(const Eigen::MatrixXd& m) const {
    return d_.cwiseInverse().asDiagonal() * m.transpose() * d_.asDiagonal();
  }

  double idempotence_defect_p() const { return op_norm(p_ * p_ - p_); }
  double idempotence_defect_q() const { return op_norm(q_ * q_ - q_); }
  double self_adjoint_defect_p() const { return op_norm(p_ - adjoint(p_)); }
  double self_adjoint_defect_q() const { return op_norm(q_ - adjoint(q_)); }
  /// ||P - Q||_op; zero iff the ranges coincide.
  double range_distance() const { return op_norm(p_ - q_); }

  /// ||f - Pf||_2
  template <class V> double residual_off_range(const Observable<V>& f) const {
    auto r = complement(f);
    double total = 0.0;
    for (std::size_t x = 0; x < r.size(); ++x) total += weights_[x] * abs_double(r[x]) * abs_double(r[x]);
    return std::sqrt(total);
  }

private:
  template <class V> Observable<V> apply(const Eigen::MatrixXd& m, const Observable<V>& f) const {
    detail::require_same_size(weights_.size(), f.size(), "projector");
    const auto n = static_cast<Eigen::Index>(f.size());
    Observable<V> out(f.size(), V(0));
    if constexpr (is_complex<V>::value) {
      Eigen::VectorXcd v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = f[static_cast<std::size_t>(i)];
      Eigen::VectorXcd r = m.cast<std::complex<double>>() * v;
      for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = r(i);
    } else {
      Eigen::VectorXd v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = to_double(f[static_cast<std::size_t>(i)]);
      Eigen::VectorXd r = m * v;
      for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = from_real<V>(r(i));
    }
    return out;
  }

  std::vector<double> weights_;
  Eigen::VectorXd d_;
  Eigen::MatrixXd basis_ts_;
  Eigen::MatrixXd basis_st_;
  Eigen::MatrixXd p_;
  Eigen::MatrixXd q_;
};

namespace detail {

/**
 * Orthonormal basis (weighted by mu) of span{ k(x) = int H(x,z) phi(z) d mu_{pi(x)}(z) }
 * with H over the orbit indicators of `ro` and phi over point masses.
 */
template <class R> Eigen::MatrixXd characteristic_basis(const FiniteSpace<R>& sp, const RelativeOrbits<R>& ro) {
  const std::size_t n = sp.size();
  std::vector<double> w(n);
  for (std::size_t x = 0; x < n; ++x) w[x] = to_double(sp.weight(x));

  auto dot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double s = 0.0;
    for (std::size_t x = 0; x < n; ++x) s += w[x] * a(static_cast<Eigen::Index>(x)) * b(static_cast<Eigen::Index>(x));
    return s;
  };

  auto members = ro.orbits.members();
  std::vector<Eigen::VectorXd> basis;
  for (const auto& orbit : members) {
    if (basis.size() == n) break;
    // Group the orbit's pairs (x, z) by second coordinate z = phi's point.
    std::vector<std::vector<std::size_t>> rows_for(n);
    for (auto i : orbit) {
      auto [x, z] = ro.pairs.support()[i];
      rows_for[z].push_back(x);
    }
    for (std::size_t b = 0; b < n && basis.size() < n; ++b) {
      if (rows_for[b].empty()) continue;
      Eigen::VectorXd k = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      for (auto x : rows_for[b])
        k(static_cast<Eigen::Index>(x)) =
            w[b] / to_double(ro.base_mass[ro.base_partition.block_of(x)]);
      double norm0 = std::sqrt(dot(k, k));
      if (norm0 == 0.0) continue;
      k /= norm0;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& e : basis) k -= dot(k, e) * e;
      double r = std::sqrt(dot(k, k));
      if (r < kResidualDrop) continue;
      basis.push_back(k / r);
    }
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = basis[j];
  return out;
}

} // namespace detail

/// Builds P and Q by sweeping kernels H (orbit indicators) and point masses phi.
template <class R> CharacteristicProjector wts_subspace(const CommutingPair<R>& pair) {
  const auto& sp = pair.space();
  auto ts = relative_orbits(sp, pair.T(), pair.S());
  auto st = relative_orbits(sp, pair.S(), pair.T());
  std::vector<double> w(sp.size());
  for (std::size_t x = 0; x < sp.size(); ++x) w[x] = to_double(sp.weight(x));
  return CharacteristicProjector(std::move(w), detail::characteristic_basis(sp, ts), detail::characteristic_basis(sp, st));
}

} // namespace commavg

#endif // COMMAVG_PROJECTOR_HPP
