#pragma once

// Replica-index combinatorics: doublets, canonical sets, pairings of
// {1..2q}, the signed canonical sums behind the cancellation lemma, and the
// coefficients of the smart-path derivative formula.
//
// All integers here are 1-based replica indices.

#include <cstdint>
#include <vector>

namespace sklab {

/// Two-element subset {lo, hi}, lo < hi.
struct Doublet {
    int lo = 0;
    int hi = 0;

    Doublet() = default;
    Doublet(int lo_, int hi_);  // throws ParameterError unless 1 <= lo < hi

    bool contains(int x) const noexcept { return x == lo || x == hi; }
    friend bool operator==(const Doublet&, const Doublet&) = default;
    friend auto operator<=>(const Doublet&, const Doublet&) = default;
};

/// Subset of {1..2p} holding exactly one element of each doublet {2r-1, 2r}.
///
/// Stored as a p-bit choice word: bit r-1 set means the r-th element is 2r,
/// clear means 2r-1.
class CanonicalSet
{
  public:
    CanonicalSet(int p, std::uint32_t choice_bits);

    int p() const noexcept { return p_; }
    std::uint32_t choice_bits() const noexcept { return bits_; }

    /// The r-th element a_r, in {2r-1, 2r}.
    int element(int r) const;

    /// Elements a_1 < a_2 < ... < a_p.
    std::vector<int> elements() const;

    /// Membership as a bitmask over {1..2p}; bit x-1 represents x.
    std::uint64_t mask() const noexcept;

    friend bool operator==(const CanonicalSet&, const CanonicalSet&) = default;

  private:
    int p_;
    std::uint32_t bits_;
};

/// Partition of {1..2q} into q doublets, listed with increasing lo
/// (the naturally ordered listing).
struct Pairing {
    int q = 0;
    std::vector<Doublet> doublets;
};

inline constexpr int kMaxCanonicalP = 12;
inline constexpr int kMaxPairingQ = 8;

/// All 2^p canonical sets, in increasing choice-word order. Requires 1 <= p <= 12.
std::vector<CanonicalSet> enumerate_canonical(int p);

/// True when the set (given as a mask over {1..2p}) is canonical.
bool is_canonical(int p, std::uint64_t mask) noexcept;

/// r(B) = sum over x in B of (x + 1).
long long r_of(const std::vector<int>& set);
long long r_of_mask(std::uint64_t mask) noexcept;

/// Brute-force sum over canonical B of (-1)^{r(B)} tanh(y)^{|B xor Bhat|},
/// with Bhat given as a mask over {1..2p}.
double f_sum(int p, std::uint64_t bhat_mask, double y);
double f_sum(int p, const std::vector<int>& bhat, double y);

/// Closed form of the same sum: 0 when Bhat is not canonical, otherwise
/// (-1)^{r(Bhat)} / cosh^{2p}(y).
double f_sum_closed_form(int p, std::uint64_t bhat_mask, double y);

/// All (2q)!/(2^q q!) pairings of {1..2q}, built by pairing the smallest
/// unpaired element with each remaining one. Requires 1 <= q <= 8.
std::vector<Pairing> enumerate_pairings(int q);

/// (2q)! / (2^q q!).
long long pairing_count(int q);

/// All n(n-1)/2 doublets of {1..n} in lexicographic order. Requires n >= 2.
std::vector<Doublet> enumerate_doublets(int n);

/// Coefficient c_J(n) of the derivative formula, J within {1..n+2}:
///   1          if J lies in {1..n}
///   -n         if hi(J) = n+1
///   n(n+1)/2   if J = {n+1, n+2}
///   0          if J = {l, n+2}, l <= n
long long c_coefficient(const Doublet& j, int n);

}  // namespace sklab
