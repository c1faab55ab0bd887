#include "doctest.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "sklab/combinatorics.hpp"
#include "sklab/error.hpp"

using namespace sklab;

namespace {

std::uint64_t mask_of(std::initializer_list<int> xs)
{
    std::uint64_t m = 0;
    for (int x : xs) m |= std::uint64_t{1} << (x - 1);
    return m;
}

// Sum over canonical sets written out from the element lists, no masks.
double slow_f_sum(int p, const std::set<int>& bhat, double y)
{
    const double th = std::tanh(y);
    double total = 0.0;
    for (const auto& b : enumerate_canonical(p)) {
        const auto elems = b.elements();
        std::set<int> sym(bhat);
        long long r = 0;
        for (int x : elems) {
            r += x + 1;
            if (!sym.erase(x)) sym.insert(x);
        }
        total += (r % 2 ? -1.0 : 1.0) * std::pow(th, static_cast<double>(sym.size()));
    }
    return total;
}

}  // namespace

TEST_CASE("doublets")
{
    CHECK_THROWS_AS(Doublet(2, 2), ParameterError);
    CHECK_THROWS_AS(Doublet(3, 1), ParameterError);
    CHECK_THROWS_AS(Doublet(0, 1), ParameterError);
    CHECK(Doublet(1, 4).contains(4));

    CHECK(enumerate_doublets(2) == std::vector<Doublet>{Doublet(1, 2)});
    CHECK(enumerate_doublets(3).size() == 3);
    const auto d4 = enumerate_doublets(4);
    CHECK(d4.size() == 6);
    CHECK(std::is_sorted(d4.begin(), d4.end()));
    CHECK_THROWS_AS(enumerate_doublets(1), ParameterError);
}

TEST_CASE("canonical sets")
{
    const auto c1 = enumerate_canonical(1);
    REQUIRE(c1.size() == 2);
    CHECK(c1[0].elements() == std::vector<int>{1});
    CHECK(c1[1].elements() == std::vector<int>{2});

    const auto c3 = enumerate_canonical(3);
    CHECK(c3.size() == 8);
    CHECK(std::any_of(c3.begin(), c3.end(),
                      [](const CanonicalSet& b) { return b.elements() == std::vector<int>{1, 3, 6}; }));
    CHECK(std::none_of(c3.begin(), c3.end(),
                       [](const CanonicalSet& b) { return b.elements() == std::vector<int>{1, 2, 5}; }));

    for (int p = 1; p <= 6; ++p) {
        const auto all = enumerate_canonical(p);
        CHECK(all.size() == (std::size_t{1} << p));
        std::set<std::uint64_t> seen;
        for (const auto& b : all) {
            CHECK(is_canonical(p, b.mask()));
            CHECK(std::popcount(b.mask()) == p);
            for (int r = 1; r <= p; ++r) CHECK((b.element(r) == 2 * r - 1 || b.element(r) == 2 * r));
            seen.insert(b.mask());
        }
        CHECK(seen.size() == all.size());
        // canonical count among all subsets is exactly 2^p
        int count = 0;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << (2 * p)); ++m) count += is_canonical(p, m);
        CHECK(count == (1 << p));
    }
    CHECK(is_canonical(3, mask_of({1, 3, 6})));
    CHECK_FALSE(is_canonical(3, mask_of({1, 2, 5})));
    CHECK_FALSE(is_canonical(3, mask_of({1, 3})));
    CHECK_THROWS_AS(enumerate_canonical(0), ParameterError);
    CHECK_THROWS_AS(enumerate_canonical(13), ParameterError);
}

TEST_CASE("r of a set")
{
    CHECK(r_of({}) == 0);
    CHECK(r_of({1, 2}) == 5);
    CHECK(r_of({1, 3}) == 6);
    CHECK(r_of_mask(mask_of({1, 3})) == 6);
    CHECK(r_of_mask(mask_of({2, 5, 7})) == r_of({2, 5, 7}));
}

TEST_CASE("canonical sums")
{
    for (double y : {-1.0, 0.3, 2.0}) {
        CHECK(f_sum(1, mask_of({1}), y) == doctest::Approx(1.0 / std::pow(std::cosh(y), 2)).epsilon(1e-14));
        CHECK(f_sum(1, 0, y) == doctest::Approx(0.0));
        CHECK(f_sum(2, mask_of({1, 2}), y) == doctest::Approx(0.0));
        CHECK(f_sum(2, mask_of({1, 2, 3}), y) == doctest::Approx(0.0));
        CHECK(f_sum(1, std::vector<int>{2}, y) == doctest::Approx(-1.0 / std::pow(std::cosh(y), 2)));
    }
    for (int p = 1; p <= 6; ++p) CHECK(std::abs(f_sum(p, 0, 0.9)) < 1e-14);

    // closed form against an element-list expansion, all subsets, p <= 5
    for (int p = 1; p <= 5; ++p) {
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << (2 * p)); ++m) {
            std::set<int> bhat;
            for (int x = 1; x <= 2 * p; ++x) {
                if (m >> (x - 1) & 1) bhat.insert(x);
            }
            for (double y : {-1.0, -0.3, 0.0, 0.7, 2.0}) {
                const double slow = slow_f_sum(p, bhat, y);
                CHECK(std::abs(f_sum(p, m, y) - slow) < 1e-12);
                CHECK(std::abs(f_sum_closed_form(p, m, y) - slow) < 1e-12);
            }
        }
    }
}

TEST_CASE("full doublet in the reference set cancels pairwise")
{
    const double th = std::tanh(0.7);
    for (int p = 1; p <= 4; ++p) {
        for (std::uint64_t bhat = 0; bhat < (std::uint64_t{1} << (2 * p)); ++bhat) {
            for (int l = 1; l <= p; ++l) {
                const std::uint64_t pair = std::uint64_t{3} << (2 * l - 2);
                if ((bhat & pair) != pair) continue;
                for (const auto& b : enumerate_canonical(p)) {
                    const std::uint64_t bl = b.mask() ^ pair;
                    const double f = (r_of_mask(b.mask()) % 2 ? -1 : 1) * std::pow(th, std::popcount(b.mask() ^ bhat));
                    const double fl = (r_of_mask(bl) % 2 ? -1 : 1) * std::pow(th, std::popcount(bl ^ bhat));
                    CHECK(f == -fl);
                }
            }
        }
    }
}

TEST_CASE("pairings")
{
    const long long expected[] = {1, 3, 15, 105, 945, 10395};
    for (int q = 1; q <= 6; ++q) {
        const auto all = enumerate_pairings(q);
        CHECK(static_cast<long long>(all.size()) == expected[q - 1]);
        CHECK(pairing_count(q) == expected[q - 1]);
        std::set<std::vector<Doublet>> distinct;
        for (const auto& pi : all) {
            CHECK(pi.q == q);
            REQUIRE(pi.doublets.size() == static_cast<std::size_t>(q));
            std::uint64_t covered = 0;
            for (const auto& d : pi.doublets) {
                CHECK(d.hi <= 2 * q);
                CHECK((covered & mask_of({d.lo, d.hi})) == 0);
                covered |= mask_of({d.lo, d.hi});
            }
            CHECK(covered == (std::uint64_t{1} << (2 * q)) - 1);
            distinct.insert(pi.doublets);
        }
        CHECK(distinct.size() == all.size());
    }
    const auto two = enumerate_pairings(2);
    CHECK(two[0].doublets == std::vector<Doublet>{Doublet(1, 2), Doublet(3, 4)});
    CHECK(two[1].doublets == std::vector<Doublet>{Doublet(1, 3), Doublet(2, 4)});
    CHECK(two[2].doublets == std::vector<Doublet>{Doublet(1, 4), Doublet(2, 3)});
    CHECK_THROWS_AS(enumerate_pairings(0), ParameterError);
}

TEST_CASE("derivative coefficients")
{
    CHECK(c_coefficient(Doublet(1, 2), 3) == 1);
    CHECK(c_coefficient(Doublet(2, 4), 3) == -3);
    CHECK(c_coefficient(Doublet(4, 5), 3) == 6);
    CHECK(c_coefficient(Doublet(2, 5), 3) == 0);

    // n = 1: D^1(3) = {1,2}, {1,3}, {2,3}
    std::vector<long long> n1;
    for (const auto& j : enumerate_doublets(3)) n1.push_back(c_coefficient(j, 1));
    CHECK(n1 == std::vector<long long>{-1, 0, 1});

    for (int n = 1; n <= 4; ++n) {
        for (const auto& j : enumerate_doublets(n + 2)) {
            const auto c = c_coefficient(j, n);
            if (j.hi <= n) CHECK(c == 1);
            else if (j.hi == n + 1) CHECK(c == -n);
            else if (j.lo == n + 1) CHECK(c == n * (n + 1) / 2);
            else CHECK(c == 0);
        }
    }
    CHECK_THROWS_AS(c_coefficient(Doublet(1, 6), 3), ParameterError);
}
