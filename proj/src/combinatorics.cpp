#include "sklab/combinatorics.hpp"

#include <bit>
#include <cmath>

#include "sklab/error.hpp"

namespace sklab {

Doublet::Doublet(int lo_, int hi_) : lo(lo_), hi(hi_)
{
    if (lo < 1 || hi <= lo) throw ParameterError("doublet requires 1 <= lo < hi");
}

CanonicalSet::CanonicalSet(int p, std::uint32_t choice_bits) : p_(p), bits_(choice_bits)
{
    if (p < 1 || p > kMaxCanonicalP) throw ParameterError("canonical set size out of range");
    if (p < 32 && (choice_bits >> p) != 0) throw ParameterError("choice bits beyond p");
}

int CanonicalSet::element(int r) const
{
    if (r < 1 || r > p_) throw ParameterError("canonical element index out of range");
    return ((bits_ >> (r - 1)) & 1u) ? 2 * r : 2 * r - 1;
}

std::vector<int> CanonicalSet::elements() const
{
    std::vector<int> out;
    out.reserve(p_);
    for (int r = 1; r <= p_; ++r) out.push_back(element(r));
    return out;
}

std::uint64_t CanonicalSet::mask() const noexcept
{
    std::uint64_t m = 0;
    for (int r = 1; r <= p_; ++r) {
        const int x = ((bits_ >> (r - 1)) & 1u) ? 2 * r : 2 * r - 1;
        m |= std::uint64_t{1} << (x - 1);
    }
    return m;
}

std::vector<CanonicalSet> enumerate_canonical(int p)
{
    if (p < 1 || p > kMaxCanonicalP) throw ParameterError("enumerate_canonical requires 1 <= p <= 12");
    std::vector<CanonicalSet> out;
    out.reserve(std::size_t{1} << p);
    for (std::uint32_t bits = 0; bits < (1u << p); ++bits) out.emplace_back(p, bits);
    return out;
}

bool is_canonical(int p, std::uint64_t mask) noexcept
{
    if (p < 1 || 2 * p > 64) return false;
    if (2 * p < 64 && (mask >> (2 * p)) != 0) return false;
    for (int r = 0; r < p; ++r) {
        if (((mask >> (2 * r)) & 3u) == 0 || ((mask >> (2 * r)) & 3u) == 3) return false;
    }
    return true;
}

long long r_of(const std::vector<int>& set)
{
    long long r = 0;
    for (int x : set) r += x + 1;
    return r;
}

long long r_of_mask(std::uint64_t mask) noexcept
{
    long long r = 0;
    while (mask != 0) {
        const int bit = std::countr_zero(mask);
        r += bit + 2;  // element bit+1, plus one
        mask &= mask - 1;
    }
    return r;
}

double f_sum(int p, std::uint64_t bhat_mask, double y)
{
    if (p < 1 || p > kMaxCanonicalP) throw ParameterError("f_sum requires 1 <= p <= 12");
    if ((bhat_mask >> (2 * p)) != 0) throw ParameterError("Bhat must lie within {1..2p}");
    const double th = std::tanh(y);
    double total = 0.0;
    for (const auto& b : enumerate_canonical(p)) {
        const std::uint64_t m = b.mask();
        const double sign = (r_of_mask(m) % 2 == 0) ? 1.0 : -1.0;
        total += sign * std::pow(th, std::popcount(m ^ bhat_mask));
    }
    return total;
}

double f_sum(int p, const std::vector<int>& bhat, double y)
{
    std::uint64_t mask = 0;
    for (int x : bhat) {
        if (x < 1 || x > 2 * p) throw ParameterError("Bhat must lie within {1..2p}");
        mask |= std::uint64_t{1} << (x - 1);
    }
    return f_sum(p, mask, y);
}

double f_sum_closed_form(int p, std::uint64_t bhat_mask, double y)
{
    if (!is_canonical(p, bhat_mask)) return 0.0;
    const double sign = (r_of_mask(bhat_mask) % 2 == 0) ? 1.0 : -1.0;
    return sign / std::pow(std::cosh(y), 2 * p);
}

namespace {

void pair_up(std::vector<int>& remaining, std::vector<Doublet>& current, int q,
             std::vector<Pairing>& out)
{
    if (remaining.empty()) {
        out.push_back({q, current});
        return;
    }
    const int first = remaining.front();
    for (std::size_t k = 1; k < remaining.size(); ++k) {
        const int partner = remaining[k];
        std::vector<int> rest;
        rest.reserve(remaining.size() - 2);
        for (std::size_t m = 1; m < remaining.size(); ++m) {
            if (m != k) rest.push_back(remaining[m]);
        }
        current.emplace_back(first, partner);
        pair_up(rest, current, q, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<Pairing> enumerate_pairings(int q)
{
    if (q < 1 || q > kMaxPairingQ) throw ParameterError("enumerate_pairings requires 1 <= q <= 8");
    std::vector<int> all(2 * q);
    for (int i = 0; i < 2 * q; ++i) all[i] = i + 1;
    std::vector<Pairing> out;
    out.reserve(static_cast<std::size_t>(pairing_count(q)));
    std::vector<Doublet> current;
    pair_up(all, current, q, out);
    return out;
}

long long pairing_count(int q)
{
    if (q < 0) throw ParameterError("pairing_count requires q >= 0");
    long long c = 1;
    for (int k = 1; k <= q; ++k) c *= 2 * k - 1;
    return c;
}

std::vector<Doublet> enumerate_doublets(int n)
{
    if (n < 2) throw ParameterError("enumerate_doublets requires n >= 2");
    std::vector<Doublet> out;
    out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int lo = 1; lo < n; ++lo) {
        for (int hi = lo + 1; hi <= n; ++hi) out.emplace_back(lo, hi);
    }
    return out;
}

long long c_coefficient(const Doublet& j, int n)
{
    if (n < 1) throw ParameterError("c_coefficient requires n >= 1");
    if (j.lo < 1 || j.hi <= j.lo || j.hi > n + 2) {
        throw ParameterError("doublet must lie within {1..n+2}");
    }
    if (j.hi <= n) return 1;
    if (j.hi == n + 1) return -static_cast<long long>(n);
    if (j.lo == n + 1) return static_cast<long long>(n) * (n + 1) / 2;
    return 0;  // {l, n+2} with l <= n
}

}  // namespace sklab
