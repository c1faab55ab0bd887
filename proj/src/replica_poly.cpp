#include "sklab/replica_poly.hpp"

#include <bit>

#include "sklab/error.hpp"

namespace sklab {

ReplicaPolynomial ReplicaPolynomial::constant(double c)
{
    ReplicaPolynomial p;
    p.add_term(Key{}, c);
    return p;
}

ReplicaPolynomial ReplicaPolynomial::spin(int replica, int site)
{
    if (replica < 1 || replica > kMaxReplicas) throw ParameterError("replica index out of range");
    if (site < 1 || site > 32) throw ParameterError("site index out of range");
    Key key{};
    key[replica - 1] = std::uint32_t{1} << (site - 1);
    ReplicaPolynomial p;
    p.add_term(key, 1.0);
    return p;
}

void ReplicaPolynomial::add_term(const Key& key, double coef)
{
    auto [it, inserted] = terms_.try_emplace(key, coef);
    if (!inserted) it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
}

ReplicaPolynomial& ReplicaPolynomial::operator+=(const ReplicaPolynomial& other)
{
    for (const auto& [key, coef] : other.terms_) add_term(key, coef);
    return *this;
}

ReplicaPolynomial& ReplicaPolynomial::operator-=(const ReplicaPolynomial& other)
{
    for (const auto& [key, coef] : other.terms_) add_term(key, -coef);
    return *this;
}

ReplicaPolynomial& ReplicaPolynomial::operator*=(double c)
{
    if (c == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [key, coef] : terms_) coef *= c;
    return *this;
}

ReplicaPolynomial operator*(const ReplicaPolynomial& a, const ReplicaPolynomial& b)
{
    ReplicaPolynomial out;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            ReplicaPolynomial::Key key;
            for (int l = 0; l < ReplicaPolynomial::kMaxReplicas; ++l) key[l] = ka[l] ^ kb[l];
            out.add_term(key, ca * cb);
        }
    }
    return out;
}

int ReplicaPolynomial::replica_count() const noexcept
{
    int count = 0;
    for (const auto& [key, coef] : terms_) {
        for (int l = kMaxReplicas; l >= 1; --l) {
            if (key[l - 1] != 0) {
                count = std::max(count, l);
                break;
            }
        }
    }
    return count;
}

int ReplicaPolynomial::max_site() const noexcept
{
    int site = 0;
    for (const auto& [key, coef] : terms_) {
        for (std::uint32_t m : key) site = std::max(site, static_cast<int>(std::bit_width(m)));
    }
    return site;
}

double ReplicaPolynomial::expectation(std::span<const double> moments) const
{
    double total = 0.0;
    for (const auto& [key, coef] : terms_) {
        double term = coef;
        for (std::uint32_t mask : key) {
            if (mask == 0) continue;
            if (mask >= moments.size()) throw ParameterError("monomial uses sites beyond the table");
            term *= moments[mask];
        }
        total += term;
    }
    return total;
}

double ReplicaPolynomial::evaluate(std::span<const SpinConfiguration> replicas) const
{
    double total = 0.0;
    for (const auto& [key, coef] : terms_) {
        double term = coef;
        for (int l = 0; l < kMaxReplicas; ++l) {
            if (key[l] == 0) continue;
            if (static_cast<std::size_t>(l) >= replicas.size()) {
                throw ParameterError("polynomial uses more replicas than supplied");
            }
            // prod_{i in mask} s_i = (-1)^{number of down spins in mask}
            const int down = std::popcount(key[l] & ~replicas[l].bits());
            if (down % 2 == 1) term = -term;
        }
        total += term;
    }
    return total;
}

double replica_expectation(const GibbsTable& table, const ReplicaPolynomial& poly)
{
    if (poly.max_site() > table.n()) throw ParameterError("polynomial uses sites beyond N");
    const auto moments = table.spin_moments();
    return poly.expectation(moments);
}

ReplicaPolynomial cavity_spin(int replica, int n) { return ReplicaPolynomial::spin(replica, n); }

ReplicaPolynomial tilde_spin(int r, int site)
{
    return ReplicaPolynomial::spin(2 * r - 1, site) - ReplicaPolynomial::spin(2 * r, site);
}

ReplicaPolynomial r_minus_dot(int l1, int l2, int n, double q2)
{
    ReplicaPolynomial p = ReplicaPolynomial::constant(-q2);
    for (int i = 1; i < n; ++i) {
        p += (1.0 / n) * (ReplicaPolynomial::spin(l1, i) * ReplicaPolynomial::spin(l2, i));
    }
    return p;
}

ReplicaPolynomial tilde_overlap_minus(int r, int s, int n)
{
    ReplicaPolynomial p;
    for (int i = 1; i < n; ++i) p += (1.0 / n) * (tilde_spin(r, i) * tilde_spin(s, i));
    return p;
}

}  // namespace sklab
