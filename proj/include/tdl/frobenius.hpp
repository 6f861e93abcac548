#pragma once

// Elliptic curves y^2 = x^3 + a x + b over Q: traces of Frobenius, the
// Frobenius polynomial x^2 - a_p x + p and its reductions mod l, and the
// prime set S cut out by root conditions on a witness polynomial.

#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tdl/ff_core.hpp"

namespace tdl {

using BigRational = boost::multiprecision::cpp_rational;

struct CurveSpec {
    i64 a = 0;
    i64 b = 0;

    /// Throws InvalidArgument for singular curves or coefficients beyond 10^6.
    CurveSpec(i64 a, i64 b);

    /// -16 (4 a^3 + 27 b^2)
    i64 discriminant() const { return disc_; }

private:
    i64 disc_ = 0;
};

/// p prime, p does not divide the discriminant, and p > 3.
bool good_reduction(const CurveSpec& curve, u64 p);
/// p odd prime not dividing the discriminant: the reduction is a smooth
/// short Weierstrass curve and the character sum below is valid.
bool nonsingular_reduction(const CurveSpec& curve, u64 p);

/// a_p = -sum_x chi(x^3 + a x + b) with chi the quadratic character.
/// Throws BadReduction unless nonsingular_reduction holds.
i64 a_p(const CurveSpec& curve, u64 p);
/// #E(F_p) from a scan of all (x, y) plus the point at infinity.
u64 point_count_naive(const CurveSpec& curve, u64 p);

struct FrobeniusRecord {
    u64 p = 0;
    i64 ap = 0;

    /// Integer coefficients of x^2 - a_p x + p, lowest degree first.
    std::vector<i64> poly() const { return {static_cast<i64>(p), -ap, 1}; }
};

FrobeniusRecord frobenius_record(const CurveSpec& curve, u64 p);

/// x^(2N) - a_p x^N + p over F_l. Throws PrimeClash when l = p.
FpPoly frobenius_mod_ell(const FrobeniusRecord& record, unsigned N, u64 ell);

/// Number of distinct complex roots of an integer polynomial, as
/// deg f - deg gcd(f, f') computed exactly over Q.
int qbar_distinct_roots(const std::vector<i64>& coeffs);

/// Cache of a_p values for one curve, persisted as "curve a b" followed by
/// "p a_p" lines. Loaded entries are recomputed and rejected on mismatch.
class ApCache {
public:
    explicit ApCache(const CurveSpec& curve) : curve_(curve) {}

    /// Reads an existing file (if any) and remembers the path for flush().
    void attach(const std::filesystem::path& path);
    i64 get(u64 p);
    /// Appends every value computed since the last flush.
    void flush();

    std::size_t size() const { return values_.size(); }
    std::size_t computed() const { return computed_; }

private:
    CurveSpec curve_;
    std::map<u64, i64> values_;
    std::vector<std::pair<u64, i64>> pending_;
    std::optional<std::filesystem::path> path_;
    std::size_t computed_ = 0;
};

struct DcScan {
    int d_C = 0;
    u64 witness_p = 0;
};

/// Maximizes the number of distinct roots over Q-bar of x^(2N) - a_p x^N + p
/// over good primes p in [p_lo, p_hi]; returns the first maximizer.
DcScan dC_scan(const CurveSpec& curve, unsigned N, u64 p_lo, u64 p_hi, ApCache* cache = nullptr);

struct PrimeSetSpec {
    CurveSpec curve;
    unsigned N = 1;
    u64 witness_p = 0;
    u64 kappa_min = 2;
    /// l = 1 mod modulus_m stands in for splitting completely in M
    u64 modulus_m = 1;
    u64 cutoff_X = 0;
};

/// Primes l <= X with l >= kappa, l != witness, l = 1 mod m, and the witness
/// polynomial x^(2N) - a x^N + p having d_C distinct roots in F_l, where d_C is
/// its distinct-root count over Q-bar.
std::vector<u64> build_S(const PrimeSetSpec& spec, ApCache* cache = nullptr);

std::vector<u64> primes_up_to(u64 x);

/// |S| / pi(X).
BigRational density_estimate(const std::vector<u64>& s, u64 X);

} // namespace tdl
