#include "doctest.h"

#include <cmath>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "tdl/torus.hpp"

using namespace tdl;

namespace {

const u64 kSmallPrimes[] = {2, 3, 5, 7, 11, 13};

oracle::M2 to_m2(const FpMatrix& m) { return {(oracle::ll)m(0, 0), (oracle::ll)m(0, 1), (oracle::ll)m(1, 0), (oracle::ll)m(1, 1)}; }

} // namespace

TEST_CASE("diagonal torus descriptions")
{
    const auto gl = standard_torus(GroupModelSpec::gl(2, 5));
    CHECK(gl.rank_r == 2);
    CHECK(gl.conjugator.is_identity());
    CHECK(gl.weights == std::vector<Character>{{1, 0}, {0, 1}});
    CHECK(gl.roots.size() == 2);
    CHECK(gl.homothety == Character{1, 1});

    const auto gsp = standard_torus(GroupModelSpec::gsp(4, 5));
    CHECK(gsp.rank_r == 3);
    CHECK(gsp.weights == std::vector<Character>{{1, 0, 0}, {0, 1, 0}, {0, -1, 1}, {-1, 0, 1}});
    CHECK(gsp.roots.size() == 8);
    CHECK(gsp.homothety == Character{1, 1, 2});

    auto trivial = GroupModelSpec::explicit_group(ExplicitGroup(2, 5, {FpMatrix::identity(2, 5)}), 0);
    CHECK_THROWS_AS(standard_torus(trivial), Error);
}

TEST_CASE("weights evaluate to 1 at the identity coordinates")
{
    for (const auto& spec : {GroupModelSpec::gl(3, 7), GroupModelSpec::gsp(4, 7)}) {
        const auto desc = standard_torus(spec);
        std::vector<u64> ones(static_cast<std::size_t>(desc.rank_r), 1);
        for (const auto& w : desc.weights)
            CHECK(eval_character(w, ones, 7) == 1);
        CHECK(torus_matrix(desc, ones).is_identity());
        CHECK_FALSE(desc.weights.empty());
        CHECK_FALSE(desc.roots.empty());
    }
}

TEST_CASE("homotheties lie in the torus")
{
    for (const auto& spec : {GroupModelSpec::gl(2, 7), GroupModelSpec::gsp(4, 7)}) {
        const auto desc = standard_torus(spec);
        for (u64 lam = 1; lam < 7; ++lam) {
            std::vector<u64> c(desc.homothety.size());
            for (std::size_t i = 0; i < c.size(); ++i)
                c[i] = powmod(lam, static_cast<u64>(desc.homothety[i]), 7);
            CHECK(torus_matrix(desc, c) == FpMatrix::identity(spec.dim, 7).scaled(lam));
        }
    }
}

TEST_CASE("torus points")
{
    const auto d3 = standard_torus(GroupModelSpec::gl(2, 3));
    CHECK(enumerate_torus_points(d3).size() == 4);
    const auto pts = enumerate_torus_points(standard_torus(GroupModelSpec::gl(2, 5)));
    REQUIRE(pts.size() == 16);
    for (const auto& pt : pts) {
        const u64 d[] = {pt.coords[0], pt.coords[1]};
        CHECK(pt.matrix == FpMatrix::diagonal(d, 5));
    }
    CHECK(pts.front().coords == std::vector<u64>{1, 1});
    CHECK(pts.back().coords == std::vector<u64>{4, 4});

    const auto gsp = GroupModelSpec::gsp(4, 5);
    u64 n = 0;
    for_each_torus_point(standard_torus(gsp), [&](const TorusPoint& pt) {
        ++n;
        CHECK(mat_det(pt.matrix) != 0);
        CHECK(gsp.contains(pt.matrix));
    });
    CHECK(n == 64);
    CHECK_THROWS_AS(enumerate_torus_points(standard_torus(GroupModelSpec::gl(3, 7)), Budget{100}), Error);
}

TEST_CASE("regularity")
{
    const auto desc = standard_torus(GroupModelSpec::gl(2, 5));
    const u64 id[] = {1, 1}, reg[] = {1, 2};
    CHECK_FALSE(is_regular(id, desc));
    CHECK(is_regular(reg, desc));
    u64 nonregular = 0;
    for (const auto& pt : enumerate_torus_points(desc))
        nonregular += !is_regular(pt.coords, desc);
    CHECK(nonregular == 4);
}

TEST_CASE("non-regular set is the union of root kernels, pointwise for l <= 13")
{
    for (u64 p : kSmallPrimes) {
        for (const auto& spec : {GroupModelSpec::gl(2, p), GroupModelSpec::gl(3, p), GroupModelSpec::gsp(4, p)}) {
            const auto desc = standard_torus(spec);
            bool ok = true;
            for_each_torus_point(desc, [&](const TorusPoint& pt) {
                bool in_kernel = false;
                for (const auto& a : desc.roots)
                    in_kernel = in_kernel || eval_character(a, pt.coords, p) == 1;
                // independently: a repeated diagonal entry
                std::set<u64> diag;
                for (std::size_t i = 0; i < spec.dim; ++i)
                    diag.insert(pt.matrix(i, i));
                const bool repeated = diag.size() < spec.dim;
                ok = ok && (is_regular(pt.coords, desc) == !in_kernel) && (in_kernel == repeated);
            });
            CHECK_MESSAGE(ok, spec.name(), " l = ", p);
        }
    }
}

TEST_CASE("split tori of GL(2)")
{
    CHECK(enumerate_split_tori(GroupModelSpec::gl(2, 3)).size() == 6);
    CHECK(enumerate_split_tori(GroupModelSpec::gl(2, 5)).size() == 15);
    CHECK(enumerate_split_tori(GroupModelSpec::gl(2, 2)).size() == 3);
    CHECK(torus_count_formula(GroupModelSpec::gl(2, 3)) == 6);
    CHECK(torus_count_formula(GroupModelSpec::gl(2, 7)) == 28);
    for (u64 p : {2, 3, 5, 7}) {
        const auto spec = GroupModelSpec::gl(2, p);
        CHECK(torus_count_formula(spec) == enumerate_split_tori(spec).size());
        // F_2 has a single unit, so no element separates two eigenlines there
        if (p > 2)
            CHECK(torus_count_formula(spec) == oracle::split_tori_by_eigenlines((oracle::ll)p).size());
    }
    CHECK_THROWS_AS(enumerate_split_tori(GroupModelSpec::gl(3, 3)), Error);
    CHECK_THROWS_AS(enumerate_split_tori(GroupModelSpec::gsp(4, 3)), Error);
}

TEST_CASE("split tori are distinct subgroups")
{
    for (u64 p : {3, 5, 7}) {
        const auto tori = enumerate_split_tori(GroupModelSpec::gl(2, p));
        std::set<std::vector<u64>> seen;
        for (const auto& t : tori) {
            std::set<u64> keys;
            for (const auto& pt : enumerate_torus_points(t)) {
                CHECK(mat_det(pt.matrix) != 0);
                keys.insert(matrix_index(pt.matrix));
            }
            CHECK(keys.size() == (p - 1) * (p - 1));
            seen.insert(std::vector<u64>(keys.begin(), keys.end()));
        }
        CHECK(seen.size() == tori.size());
    }
}

TEST_CASE("torus count formula for GSp(4)")
{
    // |GSp4(F_3)| / (8 * 2^3)
    CHECK(torus_count_formula(GroupModelSpec::gsp(4, 3)) == 103680 / 64);
}

TEST_CASE("W-variety scan at B = I, N = 1, l = 5")
{
    const auto desc = standard_torus(GroupModelSpec::gl(2, 5));
    const auto r = scan_W_variety(FpMatrix::identity(2, 5), 1, desc);
    CHECK(r.w_count == 7);
    CHECK(r.regular_count == 6);
    CHECK(r.irregular_in_W == 1);
    CHECK(r.fiber_sizes == std::vector<u64>{1, 2, 2, 2});
    CHECK(r.degree_d == 2);
}

TEST_CASE("B = I, N = 1 gives 2(l - 2) regular points")
{
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
        const auto r = scan_W_variety(FpMatrix::identity(2, p), 1, standard_torus(GroupModelSpec::gl(2, p)));
        CHECK(r.regular_count == 2 * (p - 2));
        CHECK(r.w_count == 2 * (p - 1) - 1);
    }
}

TEST_CASE("W-variety scans agree with a direct oracle and satisfy the report invariants")
{
    for (u64 p : {3, 5, 7, 11, 13}) {
        const auto spec = GroupModelSpec::gl(2, p);
        const auto desc = standard_torus(spec);
        for (unsigned N : {1u, 2u, 3u}) {
            for (u64 b = 0; b < 25; ++b) {
                CounterRng rng{99, p, N, b};
                const FpMatrix B = sample_uniform(spec, rng);
                const auto r = scan_W_variety(B, N, desc);
                const auto o = oracle::w_scan_gl2(to_m2(B), N, (oracle::ll)p);
                REQUIRE(r.w_count == static_cast<u64>(o.w));
                REQUIRE(r.regular_count == static_cast<u64>(o.regular));
                CHECK(r.regular_count + r.irregular_in_W == r.w_count);
                CHECK(std::accumulate(r.fiber_sizes.begin(), r.fiber_sizes.end(), u64{0}) == r.w_count);
                CHECK(r.degree_d <= 2 * N);
                CHECK(r.fiber_sizes.size() == p - 1);
            }
        }
    }
}

TEST_CASE("fiber sizes count distinct roots of det(x^N I - B t^N)")
{
    // fiber over the orbit of t is #{lambda : det(I - lambda^N B t^N) = 0}, which is
    // the number of distinct F_l-roots of the reversed characteristic polynomial
    for (u64 p : {5, 7, 11}) {
        const auto spec = GroupModelSpec::gl(2, p);
        const auto desc = standard_torus(spec);
        for (unsigned N : {1u, 2u}) {
            CounterRng rng{5, p, N};
            const FpMatrix B = sample_uniform(spec, rng);
            const auto r = scan_W_variety(B, N, desc);
            std::vector<u64> expected;
            for (u64 s = 1; s < p; ++s) {
                const u64 d[] = {1, s};
                const FpMatrix bt = B * FpMatrix::diagonal(d, p).pow(N);
                u64 lambdas = 0;
                for (u64 lam = 1; lam < p; ++lam)
                    lambdas += det_one_minus(bt.scaled(powmod(lam, N, p))) == 0;
                expected.push_back(lambdas);
            }
            std::sort(expected.begin(), expected.end());
            CHECK(r.fiber_sizes == expected);
        }
    }
}

TEST_CASE("W-variety scan on the GSp(4) torus")
{
    const auto spec = GroupModelSpec::gsp(4, 5);
    const auto desc = standard_torus(spec);
    const auto r = scan_W_variety(FpMatrix::identity(4, 5), 1, desc);
    // brute force over the 64 torus points
    u64 w = 0, reg = 0;
    for (const auto& pt : enumerate_torus_points(desc))
        if (det_one_minus(pt.matrix) == 0) {
            ++w;
            reg += is_regular(pt.coords, desc);
        }
    CHECK(r.w_count == w);
    CHECK(r.regular_count == reg);
    CHECK(std::accumulate(r.fiber_sizes.begin(), r.fiber_sizes.end(), u64{0}) == r.w_count);
    CHECK(r.degree_d <= 4);
}

TEST_CASE("split tori other than the diagonal give the same W counts up to conjugating B")
{
    const u64 p = 7;
    const auto spec = GroupModelSpec::gl(2, p);
    CounterRng rng{17};
    const FpMatrix B = sample_uniform(spec, rng);
    for (const auto& t : enumerate_split_tori(spec)) {
        // direct scan over the points of t
        u64 w = 0;
        for (const auto& pt : enumerate_torus_points(t))
            w += det_one_minus(B * pt.matrix) == 0;
        CHECK(scan_W_variety(B, 1, t).w_count == w);
    }
}

TEST_CASE("union bound")
{
    const auto u5 = union_lower_bound(FpMatrix::identity(2, 5), 1, GroupModelSpec::gl(2, 5));
    CHECK(u5.exact_union == 90);
    CHECK(u5.disjoint);
    CHECK(u5.exact_union == static_cast<u64>(oracle::gl2_split_eigen1(5)));
    const auto u2 = union_lower_bound(FpMatrix::identity(2, 2), 1, GroupModelSpec::gl(2, 2));
    CHECK(u2.exact_union == 0);
    CHECK_THROWS_AS(union_lower_bound(FpMatrix::identity(3, 5), 1, GroupModelSpec::gl(3, 5)), Error);
}

TEST_CASE("union bound is disjoint and below count_eigen1 for l <= 13")
{
    for (u64 p : kSmallPrimes) {
        const auto spec = GroupModelSpec::gl(2, p);
        const u64 total = count_eigen1(spec);
        for (unsigned N : {1u, 2u}) {
            for (u64 b = 0; b < 10; ++b) {
                CounterRng rng{3, p, b};
                const FpMatrix B = sample_uniform(spec, rng);
                const auto u = union_lower_bound(B, N, spec);
                CHECK(u.disjoint);
                CHECK(u.exact_union <= total);
                CHECK(u.exact_union >= u.divided_estimate);
                if (N == 1) {
                    CHECK(u.exact_union == u.sum_regular);
                    CHECK(u.divided_estimate == u.sum_regular);
                }
            }
        }
    }
}

TEST_CASE("union images are the split regular elements of B * GL(2) with eigenvalue 1")
{
    for (u64 p : {3, 5, 7}) {
        const auto u = union_lower_bound(FpMatrix::identity(2, p), 1, GroupModelSpec::gl(2, p));
        CHECK(u.exact_union == static_cast<u64>(oracle::gl2_split_eigen1((oracle::ll)p)));
        CHECK(u.exact_union == (p - 2) * p * (p + 1));
    }
}

TEST_CASE("irregular power bound")
{
    const auto d5 = standard_torus(GroupModelSpec::gl(2, 5));
    auto ib = irregular_power_bound(1, d5);
    CHECK(ib.irregular_power_count == 4);
    CHECK(ib.bound == 4);
    ib = irregular_power_bound(2, d5);
    u64 expected = 0;
    for (u64 a = 1; a < 5; ++a)
        for (u64 b = 1; b < 5; ++b)
            expected += mulmod(a, a, 5) == mulmod(b, b, 5);
    CHECK(ib.irregular_power_count == expected);
    CHECK(ib.irregular_power_count <= 16);
    ib = irregular_power_bound(1, standard_torus(GroupModelSpec::gl(2, 2)));
    CHECK(ib.irregular_power_count == 1);
    CHECK(ib.bound == 1);
    for (u64 p : kSmallPrimes)
        for (unsigned N : {1u, 2u, 3u, 4u}) {
            const auto r = irregular_power_bound(N, standard_torus(GroupModelSpec::gsp(4, p)));
            CHECK(r.irregular_power_count <= r.bound);
        }
}

TEST_CASE("split separable B")
{
    const u64 d[] = {2, 3};
    CHECK(split_separable_power(FpMatrix::diagonal(d, 7), 1));
    CHECK_FALSE(split_separable_power(FpMatrix::identity(2, 7), 1));
    // x^2 + 1 has no roots in F_7
    CHECK_FALSE(split_separable_power(FpMatrix::from_signed(2, 7, {0, -1, 1, 0}), 1));
    // squares 2 and 4 mod 7 give four distinct square roots
    const u64 sq[] = {2, 4};
    CHECK(split_separable_power(FpMatrix::diagonal(sq, 7), 2));
    CHECK_FALSE(split_separable_power(FpMatrix::diagonal(d, 7), 2)); // 3 is a nonsquare
    auto drawn = sample_split_separable(GroupModelSpec::gl(2, 11), 2, 1, 0);
    REQUIRE(drawn);
    CHECK(split_separable_power(*drawn, 2));
    CHECK_FALSE(sample_split_separable(GroupModelSpec::gl(2, 3), 2, 1, 0, 500));
}

TEST_CASE("CSV rows")
{
    const auto r = scan_W_variety(FpMatrix::identity(2, 5), 1, standard_torus(GroupModelSpec::gl(2, 5)));
    CHECK(torus_csv_header() == "ell,N,B_index,w_count,regular_count,irregular_in_W,degree_d,fiber_sizes");
    CHECK(torus_csv_row(r, 3) == "5,1,3,7,6,1,2,1;2;2;2");
}
