#include "tdl/frobenius.hpp"

#include <fstream>
#include <sstream>

namespace tdl {

CurveSpec::CurveSpec(i64 a_, i64 b_) : a(a_), b(b_)
{
    constexpr i64 kLimit = 1'000'000;
    if (a > kLimit || a < -kLimit || b > kLimit || b < -kLimit)
        throw Error(ErrorCode::InvalidArgument, "curve coefficients must lie in [-10^6, 10^6]");
    disc_ = -16 * (4 * a * a * a + 27 * b * b);
    if (disc_ == 0)
        throw Error(ErrorCode::InvalidArgument,
                    "singular curve y^2 = x^3 + " + std::to_string(a) + "x + " + std::to_string(b));
}

bool nonsingular_reduction(const CurveSpec& curve, u64 p)
{
    if (p < 3 || !is_prime(p))
        return false;
    return curve.discriminant() % static_cast<i64>(p) != 0;
}

bool good_reduction(const CurveSpec& curve, u64 p) { return p > 3 && nonsingular_reduction(curve, p); }

namespace {

void require_nonsingular(const CurveSpec& curve, u64 p)
{
    if (!nonsingular_reduction(curve, p))
        throw Error(ErrorCode::BadReduction, "curve (" + std::to_string(curve.a) + ", " + std::to_string(curve.b) +
                                                 ") has no usable reduction at p = " + std::to_string(p));
}

} // namespace

i64 a_p(const CurveSpec& curve, u64 p)
{
    require_nonsingular(curve, p);
    const u64 a = reduce(curve.a, p);
    const u64 b = reduce(curve.b, p);
    const u64 half = (p - 1) / 2;
    i64 sum = 0;
    for (u64 x = 0; x < p; ++x) {
        u64 v = addmod(addmod(mulmod(mulmod(x, x, p), x, p), mulmod(a, x, p), p), b, p);
        if (v == 0)
            continue;
        // Euler's criterion
        sum += powmod(v, half, p) == 1 ? 1 : -1;
    }
    return -sum;
}

u64 point_count_naive(const CurveSpec& curve, u64 p)
{
    require_nonsingular(curve, p);
    const u64 a = reduce(curve.a, p);
    const u64 b = reduce(curve.b, p);
    u64 count = 1;
    for (u64 x = 0; x < p; ++x) {
        u64 rhs = addmod(addmod(mulmod(mulmod(x, x, p), x, p), mulmod(a, x, p), p), b, p);
        for (u64 y = 0; y < p; ++y)
            count += mulmod(y, y, p) == rhs;
    }
    return count;
}

FrobeniusRecord frobenius_record(const CurveSpec& curve, u64 p) { return {p, a_p(curve, p)}; }

FpPoly frobenius_mod_ell(const FrobeniusRecord& record, unsigned N, u64 ell)
{
    require_field_modulus(ell);
    if (ell == record.p)
        throw Error(ErrorCode::PrimeClash, "l = p = " + std::to_string(ell));
    if (N == 0)
        throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    FpPoly base = FpPoly::from_signed({static_cast<i64>(record.p), -record.ap, 1}, ell);
    return substitute_power(base, N);
}

namespace {

using RatPoly = std::vector<BigRational>;

void strip(RatPoly& f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

RatPoly rat_rem(RatPoly a, const RatPoly& b)
{
    while (a.size() >= b.size() && !a.empty()) {
        BigRational c = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] -= c * b[i];
        a.pop_back();
        strip(a);
    }
    return a;
}

} // namespace

int qbar_distinct_roots(const std::vector<i64>& coeffs)
{
    RatPoly f(coeffs.begin(), coeffs.end());
    strip(f);
    if (f.empty())
        throw Error(ErrorCode::ZeroPolynomial, "distinct roots of the zero polynomial");
    const int deg = static_cast<int>(f.size()) - 1;
    if (deg == 0)
        return 0;
    RatPoly d(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i)
        d[i - 1] = f[i] * static_cast<long long>(i);
    strip(d);
    RatPoly a = f, b = d;
    while (!b.empty()) {
        RatPoly r = rat_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return deg - (static_cast<int>(a.size()) - 1);
}

// --- cache ----------------------------------------------------------------

void ApCache::attach(const std::filesystem::path& path)
{
    path_ = path;
    std::ifstream in(path);
    if (!in)
        return;
    std::string line;
    if (!std::getline(in, line))
        return;
    {
        std::istringstream hs(line);
        std::string tag;
        i64 a = 0, b = 0;
        if (!(hs >> tag >> a >> b) || tag != "curve")
            throw Error(ErrorCode::Parse, "cache " + path.string() + ": bad header '" + line + "'");
        if (a != curve_.a || b != curve_.b)
            throw Error(ErrorCode::InvalidArgument, "cache " + path.string() + " belongs to curve (" +
                                                        std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        u64 p = 0;
        i64 ap = 0;
        if (!(ls >> p >> ap))
            throw Error(ErrorCode::Parse, "cache " + path.string() + ": bad line '" + line + "'");
        if (a_p(curve_, p) != ap)
            throw Error(ErrorCode::Parse, "cache " + path.string() + ": wrong a_p at p = " + std::to_string(p));
        values_[p] = ap;
    }
}

i64 ApCache::get(u64 p)
{
    if (auto it = values_.find(p); it != values_.end())
        return it->second;
    i64 ap = a_p(curve_, p);
    values_[p] = ap;
    pending_.emplace_back(p, ap);
    ++computed_;
    return ap;
}

void ApCache::flush()
{
    if (!path_ || pending_.empty())
        return;
    const bool fresh = !std::filesystem::exists(*path_) || std::filesystem::file_size(*path_) == 0;
    std::ofstream out(*path_, std::ios::app);
    if (!out)
        throw Error(ErrorCode::Io, "cannot write cache " + path_->string());
    if (fresh)
        out << "curve " << curve_.a << ' ' << curve_.b << '\n';
    for (const auto& [p, ap] : pending_)
        out << p << ' ' << ap << '\n';
    pending_.clear();
}

// --- d_C and S ------------------------------------------------------------

namespace {

std::vector<i64> witness_poly(i64 ap, u64 p, unsigned N)
{
    std::vector<i64> c(2 * N + 1, 0);
    c[0] = static_cast<i64>(p);
    c[N] = -ap;
    c[2 * N] = 1;
    return c;
}

} // namespace

DcScan dC_scan(const CurveSpec& curve, unsigned N, u64 p_lo, u64 p_hi, ApCache* cache)
{
    if (N == 0)
        throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    DcScan best;
    for (u64 p = p_lo; p <= p_hi; ++p) {
        if (!good_reduction(curve, p))
            continue;
        const i64 ap = cache ? cache->get(p) : a_p(curve, p);
        const int d = qbar_distinct_roots(witness_poly(ap, p, N));
        if (d > best.d_C) {
            best.d_C = d;
            best.witness_p = p;
        }
    }
    if (best.witness_p == 0)
        throw Error(ErrorCode::InvalidArgument, "no prime of good reduction in [" + std::to_string(p_lo) + ", " +
                                                    std::to_string(p_hi) + "]");
    return best;
}

std::vector<u64> primes_up_to(u64 x)
{
    std::vector<u64> primes;
    if (x < 2)
        return primes;
    std::vector<bool> composite(x + 1, false);
    for (u64 i = 2; i <= x; ++i) {
        if (composite[i])
            continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= x; j += i)
            composite[j] = true;
    }
    return primes;
}

std::vector<u64> build_S(const PrimeSetSpec& spec, ApCache* cache)
{
    if (spec.kappa_min < 2 || spec.modulus_m == 0 || spec.N == 0)
        throw Error(ErrorCode::InvalidArgument, "prime set needs kappa >= 2, modulus >= 1 and N >= 1");
    const u64 w = spec.witness_p;
    const i64 ap = cache ? cache->get(w) : a_p(spec.curve, w);
    const FrobeniusRecord rec{w, ap};
    const int d_C = qbar_distinct_roots(witness_poly(ap, w, spec.N));

    std::vector<u64> s;
    for (u64 ell : primes_up_to(spec.cutoff_X)) {
        if (ell < spec.kappa_min || ell == w || (ell - 1) % spec.modulus_m != 0)
            continue;
        if (distinct_root_counts(frobenius_mod_ell(rec, spec.N, ell)).in_field == d_C)
            s.push_back(ell);
    }
    return s;
}

BigRational density_estimate(const std::vector<u64>& s, u64 X)
{
    const auto pi = primes_up_to(X).size();
    if (pi == 0)
        return BigRational(0);
    return BigRational(static_cast<long long>(s.size()), static_cast<long long>(pi));
}

} // namespace tdl
