#pragma once

// Brute-force point counts of affine varieties over F_q and an exact integer
// check of |V(F_q)| against m q^dim + C q^(dim - 1/2) with the Betti-sum
// constant C = 6 (3 + r d)^(n + 1) 2^r.

#include <iosfwd>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tdl/budget.hpp"
#include "tdl/ff_core.hpp"

namespace tdl {

using BigInt = boost::multiprecision::cpp_int;

struct Term {
    i64 coeff = 0;
    std::vector<unsigned> exponents;
};

/// A multivariate polynomial as a list of terms.
using MultiPoly = std::vector<Term>;

/// Parses "c:e1,...,en;c:e1,...,en". Every term must carry the same number of
/// exponents; that number is the variable count.
MultiPoly parse_multipoly(const std::string& text);
std::string format_multipoly(const MultiPoly& poly);
unsigned total_degree(const MultiPoly& poly);

struct PolySystem {
    unsigned n = 0;
    u64 q = 0;
    std::vector<MultiPoly> polys;
    int declared_dim = 0;
    int declared_m = 0;

    /// Validates shapes and 0 <= declared_dim <= n.
    PolySystem(unsigned n, u64 q, std::vector<MultiPoly> polys, int declared_dim, int declared_m);

    unsigned r() const { return static_cast<unsigned>(polys.size()); }
    /// Maximum total degree, at least 1 (a constant has degree at most 1).
    unsigned d() const;
};

/// #{x in F_q^n : every polynomial vanishes}. Splits the cube by the leading
/// coordinate across `jobs` threads.
u64 brute_variety_count(const PolySystem& sys, const Budget& budget = {}, unsigned jobs = 1);

/// 6 (3 + r d)^(n + 1) 2^r. Throws InvalidArgument unless n > 1, r >= 1, d >= 1.
BigInt katz_constant(unsigned n, unsigned r, unsigned d);

struct WeilReport {
    u64 count = 0;
    BigInt main_term;  // m q^dim
    BigInt deviation;  // count - m q^dim
    BigInt constant;   // C
    BigInt lhs;        // deviation^2 q
    BigInt rhs;        // C^2 q^(2 dim)
    bool two_sided = false;
    bool holds = false;
    /// rhs - lhs (meaningful when the squared comparison decides the verdict)
    BigInt slack;
};

/// One line of a system corpus: "name dim m poly [poly ...]"; '#' starts a comment.
struct CorpusEntry {
    std::string name;
    int declared_dim = 0;
    int declared_m = 0;
    std::vector<MultiPoly> polys;

    unsigned n() const { return static_cast<unsigned>(polys.front().front().exponents.size()); }
    PolySystem at(u64 q) const { return PolySystem(n(), q, polys, declared_dim, declared_m); }
};

std::vector<CorpusEntry> read_weil_corpus(std::istream& in);

WeilReport check_weil_inequality(const PolySystem& sys, bool two_sided, const Budget& budget = {},
                                 unsigned jobs = 1);

} // namespace tdl
