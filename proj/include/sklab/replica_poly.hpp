#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>

#include "sklab/gibbs.hpp"

namespace sklab {

/// Polynomial in the spins of several replicas, reduced with s^2 = 1.
///
/// A monomial is one site mask per replica; its Gibbs expectation under the
/// product measure is the product of single-replica spin moments, so any
/// polynomial observable reduces to the 2^N moments of one table.
class ReplicaPolynomial
{
  public:
    static constexpr int kMaxReplicas = 8;
    using Key = std::array<std::uint32_t, kMaxReplicas>;

    ReplicaPolynomial() = default;

    static ReplicaPolynomial constant(double c);

    /// s_site of replica `replica` (both 1-based).
    static ReplicaPolynomial spin(int replica, int site);

    ReplicaPolynomial& operator+=(const ReplicaPolynomial& other);
    ReplicaPolynomial& operator-=(const ReplicaPolynomial& other);
    ReplicaPolynomial& operator*=(double c);
    friend ReplicaPolynomial operator+(ReplicaPolynomial a, const ReplicaPolynomial& b) { return a += b; }
    friend ReplicaPolynomial operator-(ReplicaPolynomial a, const ReplicaPolynomial& b) { return a -= b; }
    friend ReplicaPolynomial operator*(ReplicaPolynomial a, double c) { return a *= c; }
    friend ReplicaPolynomial operator*(double c, ReplicaPolynomial a) { return a *= c; }
    friend ReplicaPolynomial operator*(const ReplicaPolynomial& a, const ReplicaPolynomial& b);

    /// Highest replica index carrying a non-trivial mask (0 for constants).
    int replica_count() const noexcept;

    /// Highest site index appearing (0 for constants).
    int max_site() const noexcept;

    std::size_t term_count() const noexcept { return terms_.size(); }
    const std::map<Key, double>& terms() const noexcept { return terms_; }

    /// sum_terms coef prod_l moments[mask_l].
    double expectation(std::span<const double> moments) const;

    /// Value on explicit replica configurations (replicas[l-1] is replica l).
    double evaluate(std::span<const SpinConfiguration> replicas) const;

  private:
    void add_term(const Key& key, double coef);

    std::map<Key, double> terms_;
};

/// <P>_t under the table's product measure.
double replica_expectation(const GibbsTable& table, const ReplicaPolynomial& poly);

/// eps^l = s_N of replica l.
ReplicaPolynomial cavity_spin(int replica, int n);

/// s~_site^r = s_site^{2r-1} - s_site^{2r}.
ReplicaPolynomial tilde_spin(int r, int site);

/// R^-(s^{l1}, s^{l2}) - q2 = N^-1 sum_{i<N} s_i^{l1} s_i^{l2} - q2.
ReplicaPolynomial r_minus_dot(int l1, int l2, int n, double q2);

/// R^-(s~^r, s~^s) = N^-1 sum_{i<N} s~_i^r s~_i^s.
ReplicaPolynomial tilde_overlap_minus(int r, int s, int n);

}  // namespace sklab
