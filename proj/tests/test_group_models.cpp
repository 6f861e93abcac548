#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "tdl/group_models.hpp"

using namespace tdl;

namespace {

u64 gl_order_formula(u64 n, u64 q)
{
    u64 qn = 1;
    for (u64 i = 0; i < n; ++i)
        qn *= q;
    u64 order = 1, qi = 1;
    for (u64 i = 0; i < n; ++i) {
        order *= qn - qi;
        qi *= q;
    }
    return order;
}

ExplicitGroup special_linear(u64 ell)
{
    std::vector<FpMatrix> sl;
    for (const auto& g : enumerate_group(GroupModelSpec::gl(2, ell)))
        if (mat_det(g) == 1)
            sl.push_back(g);
    return ExplicitGroup(2, ell, std::move(sl));
}

oracle::M2 to_m2(const FpMatrix& m) { return {(oracle::ll)m(0, 0), (oracle::ll)m(0, 1), (oracle::ll)m(1, 0), (oracle::ll)m(1, 1)}; }

} // namespace

TEST_CASE("group orders")
{
    CHECK(group_order(GroupModelSpec::gl(2, 3)) == 48);
    CHECK(group_order(GroupModelSpec::gl(2, 2)) == 6);
    CHECK(group_order(GroupModelSpec::gsp(4, 3)) == 103680);
    CHECK(group_order(GroupModelSpec::gsp(4, 2)) == 720);
    CHECK(group_order(GroupModelSpec::gsp(2, 5)) == gl_order_formula(2, 5)); // GSp(2) = GL(2)
    auto trivial = GroupModelSpec::explicit_group(ExplicitGroup(2, 5, {FpMatrix::identity(2, 5)}), 0);
    CHECK(group_order(trivial) == 1);
}

TEST_CASE("rank and index exponent of the models")
{
    CHECK(GroupModelSpec::gl(3, 5).rank_r == 3);
    CHECK(GroupModelSpec::gsp(4, 5).rank_r == 3);
    CHECK_THROWS_AS(GroupModelSpec::gl(2, 5, 0), Error);
    CHECK_THROWS_AS(GroupModelSpec::gsp(3, 5), Error);
    CHECK_THROWS_AS(GroupModelSpec::gl(2, 9), Error);
}

TEST_CASE("enumeration length matches the order formula for GL(n)")
{
    // every (n, l) with l^(n^2) <= 10^8
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31})
        CHECK(enumerate_group(GroupModelSpec::gl(1, p)).size() == p - 1);
    for (u64 p = 2; p * p * p * p <= 100'000'000; ++p) {
        if (!is_prime(p))
            continue;
        u64 n = 0;
        for_each_element(GroupModelSpec::gl(2, p), [&](const FpMatrix&) { ++n; });
        CHECK_MESSAGE(n == gl_order_formula(2, p), "l = ", p);
    }
    for (u64 p : {2, 3, 5, 7}) {
        u64 n = 0;
        for_each_element(GroupModelSpec::gl(3, p), [&](const FpMatrix&) { ++n; });
        CHECK(n == gl_order_formula(3, p));
    }
    for (u64 p : {2, 3}) {
        u64 n = 0;
        for_each_element(GroupModelSpec::gl(4, p), [&](const FpMatrix&) { ++n; });
        CHECK(n == gl_order_formula(4, p));
    }
}

TEST_CASE("GL(2, F_2) enumeration is ordered and complete")
{
    auto els = enumerate_group(GroupModelSpec::gl(2, 2));
    REQUIRE(els.size() == 6);
    for (std::size_t i = 1; i < els.size(); ++i)
        CHECK(matrix_index(els[i - 1]) < matrix_index(els[i]));
    for (const auto& g : els)
        CHECK(mat_det(g) != 0);
}

TEST_CASE("matrix index round trip")
{
    for (u64 idx = 0; idx < 81; ++idx)
        CHECK(matrix_index(matrix_from_index(idx, 2, 3)) == idx);
    CHECK(matrix_index(FpMatrix::from_signed(2, 3, {1, 0, 0, 0})) == 27);
}

TEST_CASE("GSp(4) enumeration matches the similitude filter")
{
    for (u64 p : {2, 3}) {
        const auto spec = GroupModelSpec::gsp(4, p);
        auto els = enumerate_group(spec);
        CHECK(els.size() == group_order(spec));
        // re-verify membership with plain integer arithmetic: M^T J M = mu J
        const oracle::ll J[4][4] = {{0, 0, 0, 1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {-1, 0, 0, 0}};
        const auto P = static_cast<oracle::ll>(p);
        std::size_t checked = 0;
        for (std::size_t k = 0; k < els.size(); k += 97) {
            const auto& m = els[k];
            oracle::ll prod[4][4];
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    oracle::ll s = 0;
                    for (int a = 0; a < 4; ++a)
                        for (int b = 0; b < 4; ++b)
                            s += (oracle::ll)m(a, i) * J[a][b] * (oracle::ll)m(b, j);
                    prod[i][j] = oracle::md(s, P);
                }
            const oracle::ll mu = prod[0][3];
            bool ok = mu != 0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    ok = ok && prod[i][j] == oracle::md(mu * J[i][j], P);
            CHECK(ok);
            CHECK(mat_det(m) != 0);
            ++checked;
        }
        CHECK(checked > 0);
        for (std::size_t i = 1; i < els.size(); ++i)
            REQUIRE(matrix_index(els[i - 1]) < matrix_index(els[i]));
    }
}

TEST_CASE("GSp(4, F_2) by brute-force filter of all 2^16 matrices")
{
    const auto J = symplectic_form(4, 2);
    u64 n = 0;
    for (u64 idx = 0; idx < (1u << 16); ++idx) {
        FpMatrix m = matrix_from_index(idx, 4, 2);
        if (mat_det(m) == 0)
            continue;
        // over F_2 the multiplier is 1 and the condition is M^T J M = J
        n += m.transpose() * J * m == J;
    }
    CHECK(n == 720);
}

TEST_CASE("similitude multiplier")
{
    const auto J = symplectic_form(4, 5);
    CHECK((J * J) == FpMatrix::identity(4, 5).scaled(4)); // J^2 = -I
    CHECK(similitude_multiplier(FpMatrix::identity(4, 5)) == 1);
    CHECK(similitude_multiplier(FpMatrix::identity(4, 5).scaled(2)) == 4);
    // diag(t1, t2, mu/t2, mu/t1) with t1 = 2, t2 = 3, mu = 1
    const u64 f[] = {2, 3, 2, 3};
    CHECK(similitude_multiplier(FpMatrix::diagonal(f, 5)) == 1);
    // slots 3 and 4 force different multipliers (4 and 2)
    const u64 g[] = {2, 3, 3, 1};
    CHECK(similitude_multiplier(FpMatrix::diagonal(g, 5)) == 0);
}

TEST_CASE("eigenvalue-1 counts")
{
    CHECK(count_eigen1(GroupModelSpec::gl(2, 2)) == 4);
    CHECK(count_eigen1(GroupModelSpec::gl(2, 3)) == 21);
    auto trivial = GroupModelSpec::explicit_group(ExplicitGroup(2, 5, {FpMatrix::identity(2, 5)}), 0);
    CHECK(count_eigen1(trivial) == 1);
}

TEST_CASE("GL(2) eigenvalue-1 counts agree with a brute-force oracle and the class census")
{
    for (u64 p : {2, 3, 5, 7, 11, 13}) {
        const auto [hits, order] = oracle::gl2_eigen1(static_cast<oracle::ll>(p));
        CHECK(count_eigen1(GroupModelSpec::gl(2, p)) == static_cast<u64>(hits));
        CHECK(group_order(GroupModelSpec::gl(2, p)) == static_cast<u64>(order));
        CHECK(gl2_eigen1_by_classes(p) == static_cast<u64>(hits));
        CHECK(gl2_eigen1_by_classes(p) == p * p * p - 2 * p);
    }
}

TEST_CASE("eigenvalue-1 density is at least 1/(2l) for l <= 31")
{
    for (u64 p = 2; p <= 31; ++p) {
        if (!is_prime(p))
            continue;
        const u64 c = count_eigen1(GroupModelSpec::gl(2, p));
        const u64 o = group_order(GroupModelSpec::gl(2, p));
        CHECK_MESSAGE(2 * p * c >= o, "l = ", p);
    }
}

TEST_CASE("explicit groups")
{
    const FpMatrix I = FpMatrix::identity(2, 5);
    ExplicitGroup pm(2, 5, {I, I.scaled(4)});
    auto spec = GroupModelSpec::explicit_group(pm, 0);
    auto els = enumerate_group(spec);
    REQUIRE(els.size() == 2);
    CHECK(std::find(els.begin(), els.end(), I) != els.end());
    CHECK(std::find(els.begin(), els.end(), I.scaled(4)) != els.end());
    CHECK(spec.contains(I.scaled(4)));
    CHECK_FALSE(spec.contains(I.scaled(2)));
    // duplicates collapse
    CHECK(ExplicitGroup(2, 5, {I, I, I.scaled(4)}).size() == 2);
    // {I, 2I} is not closed
    CHECK_THROWS_AS(ExplicitGroup(2, 5, {I, I.scaled(2)}), Error);
    try {
        ExplicitGroup(2, 5, {I.scaled(4)});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAGroup);
    }
}

TEST_CASE("coset counts agree with an element-by-element scan")
{
    for (u64 p : {3, 5}) {
        const auto sl = GroupModelSpec::explicit_group(special_linear(p), 2);
        CHECK(group_order(sl) == gl_order_formula(2, p) / (p - 1));
        for (u64 b = 1; b < p; ++b) {
            const FpMatrix B = FpMatrix::from_signed(2, p, {static_cast<i64>(b), 1, 0, 1});
            CosetSpec coset(sl, B);
            u64 scan = 0;
            for (const auto& g : sl.group->elements())
                scan += oracle::eigen1_2(oracle::mul2(to_m2(B), to_m2(g), (oracle::ll)p), (oracle::ll)p);
            CHECK(count_eigen1(coset) == scan);
            CHECK(target_order(EventTarget{coset}) == sl.group->size());
        }
    }
    CHECK_THROWS_AS(CosetSpec(GroupModelSpec::gl(2, 3), FpMatrix(2, 3)), Error);
}

TEST_CASE("full-group coset equals the group")
{
    const u64 d[] = {2, 1};
    CosetSpec coset(GroupModelSpec::gl(2, 3), FpMatrix::diagonal(d, 3));
    CHECK(count_eigen1(coset) == 21);
    CHECK(target_order(EventTarget{coset}) == 48);
}

TEST_CASE("sampling is deterministic")
{
    const auto spec = GroupModelSpec::gl(2, 5);
    CounterRng a{42, 5, 0}, b{42, 5, 0}, c{43, 5, 0};
    const FpMatrix x = sample_uniform(spec, a);
    CHECK(x == sample_uniform(spec, b));
    CHECK(mat_det(x) != 0);
    bool differs = false;
    for (int k = 0; k < 8; ++k)
        differs = differs || sample_uniform(spec, c) != x;
    CHECK(differs);
}

TEST_CASE("uniform sampling of GL(2, F_3): every element within 5 sigma of 1/48")
{
    const auto spec = GroupModelSpec::gl(2, 3);
    const u64 draws = 1'000'000;
    std::map<u64, u64> freq;
    CounterRng rng{2024};
    for (u64 i = 0; i < draws; ++i)
        ++freq[matrix_index(sample_uniform(spec, rng))];
    CHECK(freq.size() == 48);
    const double p = 1.0 / 48.0, sigma = std::sqrt(draws * p * (1 - p));
    for (const auto& [idx, n] : freq)
        CHECK_MESSAGE(std::abs(static_cast<double>(n) - draws * p) <= 5 * sigma, "element ", idx);
}

TEST_CASE("coset sampling by diag(2,1) is uniform on GL(2, F_3)")
{
    const u64 d[] = {2, 1};
    EventTarget coset = CosetSpec(GroupModelSpec::gl(2, 3), FpMatrix::diagonal(d, 3));
    const u64 draws = 480'000;
    std::map<u64, u64> freq;
    CounterRng rng{7};
    for (u64 i = 0; i < draws; ++i)
        ++freq[matrix_index(sample_uniform(coset, rng))];
    CHECK(freq.size() == 48);
    const double p = 1.0 / 48.0, sigma = std::sqrt(draws * p * (1 - p));
    for (const auto& [idx, n] : freq)
        CHECK(std::abs(static_cast<double>(n) - draws * p) <= 5 * sigma);
}

TEST_CASE("index condition")
{
    const auto gl = GroupModelSpec::gl(2, 3);
    CHECK(check_index_condition(ExplicitGroup(2, 3, enumerate_group(gl)), gl, 1));
    CHECK(check_index_condition(special_linear(3), gl, 2));
    CHECK_FALSE(check_index_condition(special_linear(3), gl, 1));
    CHECK_FALSE(check_index_condition(ExplicitGroup(2, 3, {FpMatrix::identity(2, 3)}), gl, 1));
}

TEST_CASE("budget is enforced")
{
    CHECK_THROWS_AS(enumerate_group(GroupModelSpec::gl(2, 101)), Error);
    try {
        count_eigen1(GroupModelSpec::gl(2, 11), Budget{1000});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLarge);
    }
    CHECK_THROWS_AS(count_eigen1(GroupModelSpec::gl(3, 11)), Error);
}

TEST_CASE("matrix text format round trip")
{
    std::vector<FpMatrix> mats = {FpMatrix::identity(2, 5), FpMatrix::from_signed(2, 5, {1, 2, 3, 4})};
    std::ostringstream os;
    write_matrices(os, 2, 5, mats);
    CHECK(os.str() == "2 5\n1 0 0 1\n1 2 3 4\n");
    std::istringstream is("\n2 5\n1 0 0 1\n\n1 2 3 4\n");
    std::size_t n = 0;
    u64 ell = 0;
    CHECK(read_matrices(is, &n, &ell) == mats);
    CHECK(n == 2);
    CHECK(ell == 5);
    std::istringstream bad("2 5\n1 2 3\n");
    CHECK_THROWS_AS(read_matrices(bad), Error);
    std::istringstream badhdr("two five\n");
    CHECK_THROWS_AS(read_matrices(badhdr), Error);
}

TEST_CASE("explicit group loaded from the bundled file")
{
    std::ifstream in(TDL_TEST_DATA "/sl2_f3.txt");
    REQUIRE(in);
    std::size_t n = 0;
    u64 ell = 0;
    auto mats = read_matrices(in, &n, &ell);
    ExplicitGroup g(n, ell, std::move(mats));
    CHECK(g.size() == 24);
    CHECK(count_eigen1(GroupModelSpec::explicit_group(g, 2)) == static_cast<u64>(
        std::count_if(g.elements().begin(), g.elements().end(), [](const FpMatrix& h) { return has_eigenvalue_one(h); })));
}
