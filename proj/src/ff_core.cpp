#include "tdl/ff_core.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace tdl {

bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    if (n % 2 == 0)
        return n == 2;
    for (u64 d = 3; d * d <= n; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

u64 powmod(u64 a, u64 e, u64 p)
{
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p)
{
    a %= p;
    if (a == 0)
        throw Error(ErrorCode::ZeroInverse, "inverse of 0 mod " + std::to_string(p));
    // extended Euclid on signed values; p < 2^31
    i64 t = 0, new_t = 1;
    i64 r = static_cast<i64>(p), new_r = static_cast<i64>(a);
    while (new_r != 0) {
        i64 q = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    return reduce(t, p);
}

u64 reduce(i64 v, u64 p)
{
    i64 m = v % static_cast<i64>(p);
    return static_cast<u64>(m < 0 ? m + static_cast<i64>(p) : m);
}

void require_field_modulus(u64 p)
{
    if (p >= (u64{1} << 31) || !is_prime(p))
        throw Error(ErrorCode::InvalidArgument,
                    "modulus " + std::to_string(p) + " is not a prime below 2^31");
}

// --- Fp -------------------------------------------------------------------

Fp::Fp(i64 value, u64 modulus) : value_(0), modulus_(modulus)
{
    require_field_modulus(modulus);
    value_ = reduce(value, modulus);
}

void Fp::check_same(const Fp& o) const
{
    if (modulus_ != o.modulus_)
        throw Error(ErrorCode::InvalidArgument, "mixed moduli in Fp arithmetic");
}

Fp Fp::operator+(const Fp& o) const
{
    check_same(o);
    return Fp(Raw{}, addmod(value_, o.value_, modulus_), modulus_);
}

Fp Fp::operator-(const Fp& o) const
{
    check_same(o);
    return Fp(Raw{}, submod(value_, o.value_, modulus_), modulus_);
}

Fp Fp::operator*(const Fp& o) const
{
    check_same(o);
    return Fp(Raw{}, mulmod(value_, o.value_, modulus_), modulus_);
}

Fp Fp::operator-() const { return Fp(Raw{}, submod(0, value_, modulus_), modulus_); }

Fp field_inv(const Fp& a) { return Fp(Fp::Raw{}, invmod(a.value_, a.modulus_), a.modulus_); }

// --- FpPoly ---------------------------------------------------------------

FpPoly::FpPoly(u64 modulus) : modulus_(modulus) {}

FpPoly::FpPoly(std::vector<u64> coeffs, u64 modulus) : coeffs_(std::move(coeffs)), modulus_(modulus)
{
    for (auto& c : coeffs_)
        c %= modulus_;
    normalize();
}

FpPoly FpPoly::from_signed(std::initializer_list<i64> coeffs, u64 modulus)
{
    std::vector<u64> c;
    c.reserve(coeffs.size());
    for (i64 v : coeffs)
        c.push_back(reduce(v, modulus));
    return FpPoly(std::move(c), modulus);
}

FpPoly FpPoly::monomial(u64 coeff, std::size_t degree, u64 modulus)
{
    std::vector<u64> c(degree + 1, 0);
    c[degree] = coeff;
    return FpPoly(std::move(c), modulus);
}

void FpPoly::normalize()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

void FpPoly::check_same(const FpPoly& o) const
{
    if (modulus_ != o.modulus_)
        throw Error(ErrorCode::InvalidArgument, "mixed moduli in polynomial arithmetic");
}

u64 FpPoly::eval(u64 x) const
{
    u64 acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = addmod(mulmod(acc, x, modulus_), *it, modulus_);
    return acc;
}

FpPoly FpPoly::derivative() const
{
    if (coeffs_.size() <= 1)
        return FpPoly(modulus_);
    std::vector<u64> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        d[i - 1] = mulmod(coeffs_[i], i % modulus_, modulus_);
    return FpPoly(std::move(d), modulus_);
}

FpPoly FpPoly::monic() const
{
    if (is_zero())
        return *this;
    return scaled(invmod(leading(), modulus_));
}

FpPoly FpPoly::operator+(const FpPoly& o) const
{
    check_same(o);
    std::vector<u64> r(std::max(coeffs_.size(), o.coeffs_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = addmod(coeff(i), o.coeff(i), modulus_);
    return FpPoly(std::move(r), modulus_);
}

FpPoly FpPoly::operator-(const FpPoly& o) const
{
    check_same(o);
    std::vector<u64> r(std::max(coeffs_.size(), o.coeffs_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = submod(coeff(i), o.coeff(i), modulus_);
    return FpPoly(std::move(r), modulus_);
}

FpPoly FpPoly::operator*(const FpPoly& o) const
{
    check_same(o);
    if (is_zero() || o.is_zero())
        return FpPoly(modulus_);
    std::vector<u64> r(coeffs_.size() + o.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            r[i + j] = addmod(r[i + j], mulmod(coeffs_[i], o.coeffs_[j], modulus_), modulus_);
    return FpPoly(std::move(r), modulus_);
}

FpPoly FpPoly::scaled(u64 c) const
{
    std::vector<u64> r(coeffs_);
    for (auto& v : r)
        v = mulmod(v, c % modulus_, modulus_);
    return FpPoly(std::move(r), modulus_);
}

std::pair<FpPoly, FpPoly> FpPoly::divmod(const FpPoly& divisor) const
{
    check_same(divisor);
    if (divisor.is_zero())
        throw Error(ErrorCode::ZeroPolynomial, "polynomial division by zero");
    std::vector<u64> rem(coeffs_);
    const int dd = divisor.degree();
    if (degree() < dd)
        return {FpPoly(modulus_), *this};
    std::vector<u64> quot(static_cast<std::size_t>(degree() - dd + 1), 0);
    const u64 lead_inv = invmod(divisor.leading(), modulus_);
    for (int k = degree(); k >= dd; --k) {
        u64 c = mulmod(rem[static_cast<std::size_t>(k)], lead_inv, modulus_);
        quot[static_cast<std::size_t>(k - dd)] = c;
        if (c == 0)
            continue;
        for (int j = 0; j <= dd; ++j) {
            auto idx = static_cast<std::size_t>(k - dd + j);
            rem[idx] = submod(rem[idx], mulmod(c, divisor.coeffs_[static_cast<std::size_t>(j)], modulus_),
                              modulus_);
        }
    }
    return {FpPoly(std::move(quot), modulus_), FpPoly(std::move(rem), modulus_)};
}

std::string FpPoly::to_string() const
{
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        u64 c = coeffs_[static_cast<std::size_t>(k)];
        if (c == 0)
            continue;
        if (!first)
            os << " + ";
        first = false;
        if (k == 0 || c != 1)
            os << c;
        if (k >= 1)
            os << 'x';
        if (k >= 2)
            os << '^' << k;
    }
    return os.str();
}

FpPoly poly_gcd(FpPoly a, FpPoly b)
{
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

namespace {

// g(x) with f = g(x^p); valid because Frobenius fixes F_p.
FpPoly pth_root(const FpPoly& f)
{
    const u64 p = f.modulus();
    std::vector<u64> r(static_cast<std::size_t>(f.degree()) / p + 1, 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = f.coeff(i * p);
    return FpPoly(std::move(r), p);
}

// Degree of the radical of f. In characteristic p a root whose multiplicity
// is divisible by p survives in gcd(f, f'), so those roots are peeled off by
// taking p-th roots.
int radical_degree(const FpPoly& f)
{
    if (f.degree() <= 0)
        return 0;
    FpPoly d = f.derivative();
    if (d.is_zero())
        return radical_degree(pth_root(f));
    FpPoly g = poly_gcd(f, d);
    FpPoly w = f.divmod(g).first;
    for (;;) {
        FpPoly h = poly_gcd(g, w);
        if (h.degree() <= 0)
            break;
        g = g.divmod(h).first;
    }
    return w.degree() + radical_degree(g);
}

} // namespace

RootCounts distinct_root_counts(const FpPoly& f)
{
    if (f.is_zero())
        throw Error(ErrorCode::ZeroPolynomial, "distinct_root_counts of the zero polynomial");
    RootCounts rc;
    for (u64 x = 0; x < f.modulus(); ++x)
        if (f.eval(x) == 0)
            ++rc.in_field;
    rc.in_closure = radical_degree(f);
    return rc;
}

FpPoly substitute_power(const FpPoly& f, unsigned N)
{
    if (N == 0)
        throw Error(ErrorCode::InvalidArgument, "substitute_power needs N >= 1");
    if (f.is_zero())
        return f;
    std::vector<u64> r(static_cast<std::size_t>(f.degree()) * N + 1, 0);
    for (std::size_t i = 0; i < f.coeffs().size(); ++i)
        r[i * N] = f.coeffs()[i];
    return FpPoly(std::move(r), f.modulus());
}

// --- FpMatrix -------------------------------------------------------------

FpMatrix::FpMatrix(std::size_t n, u64 modulus) : n_(n), modulus_(modulus), entries_(n * n, 0)
{
    if (n == 0)
        throw Error(ErrorCode::InvalidArgument, "matrix dimension must be >= 1");
}

FpMatrix::FpMatrix(std::size_t n, u64 modulus, std::vector<u64> entries)
    : n_(n), modulus_(modulus), entries_(std::move(entries))
{
    if (n == 0 || entries_.size() != n * n)
        throw Error(ErrorCode::InvalidArgument, "matrix needs n*n entries with n >= 1");
    for (auto& e : entries_)
        e %= modulus_;
}

FpMatrix FpMatrix::identity(std::size_t n, u64 modulus)
{
    FpMatrix m(n, modulus);
    for (std::size_t i = 0; i < n; ++i)
        m.entries_[i * n + i] = 1 % modulus;
    return m;
}

FpMatrix FpMatrix::from_signed(std::size_t n, u64 modulus, std::initializer_list<i64> entries)
{
    std::vector<u64> e;
    e.reserve(entries.size());
    for (i64 v : entries)
        e.push_back(reduce(v, modulus));
    return FpMatrix(n, modulus, std::move(e));
}

FpMatrix FpMatrix::diagonal(std::span<const u64> diag, u64 modulus)
{
    FpMatrix m(diag.size(), modulus);
    for (std::size_t i = 0; i < diag.size(); ++i)
        m.entries_[i * diag.size() + i] = diag[i] % modulus;
    return m;
}

void FpMatrix::check_same(const FpMatrix& o) const
{
    if (n_ != o.n_ || modulus_ != o.modulus_)
        throw Error(ErrorCode::InvalidArgument, "matrix shape or modulus mismatch");
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const
{
    check_same(o);
    FpMatrix r(n_, modulus_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            u64 a = entries_[i * n_ + k];
            if (a == 0)
                continue;
            for (std::size_t j = 0; j < n_; ++j)
                r.entries_[i * n_ + j] =
                    addmod(r.entries_[i * n_ + j], mulmod(a, o.entries_[k * n_ + j], modulus_), modulus_);
        }
    return r;
}

FpMatrix FpMatrix::operator+(const FpMatrix& o) const
{
    check_same(o);
    FpMatrix r(*this);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        r.entries_[i] = addmod(entries_[i], o.entries_[i], modulus_);
    return r;
}

FpMatrix FpMatrix::operator-(const FpMatrix& o) const
{
    check_same(o);
    FpMatrix r(*this);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        r.entries_[i] = submod(entries_[i], o.entries_[i], modulus_);
    return r;
}

FpMatrix FpMatrix::scaled(u64 c) const
{
    FpMatrix r(*this);
    for (auto& e : r.entries_)
        e = mulmod(e, c % modulus_, modulus_);
    return r;
}

FpMatrix FpMatrix::transpose() const
{
    FpMatrix r(n_, modulus_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            r.entries_[j * n_ + i] = entries_[i * n_ + j];
    return r;
}

FpMatrix FpMatrix::pow(u64 e) const
{
    FpMatrix r = identity(n_, modulus_);
    FpMatrix b(*this);
    while (e) {
        if (e & 1)
            r = r * b;
        e >>= 1;
        if (e)
            b = b * b;
    }
    return r;
}

FpMatrix FpMatrix::inverse() const
{
    const std::size_t n = n_;
    const u64 p = modulus_;
    std::vector<u64> a(entries_);
    FpMatrix inv = identity(n, p);
    auto& b = inv.entries_;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv * n + col] == 0)
            ++piv;
        if (piv == n)
            throw Error(ErrorCode::ZeroInverse, "matrix is singular");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a[piv * n + j], a[col * n + j]);
                std::swap(b[piv * n + j], b[col * n + j]);
            }
        u64 s = invmod(a[col * n + col], p);
        for (std::size_t j = 0; j < n; ++j) {
            a[col * n + j] = mulmod(a[col * n + j], s, p);
            b[col * n + j] = mulmod(b[col * n + j], s, p);
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row * n + col] == 0)
                continue;
            u64 f = a[row * n + col];
            for (std::size_t j = 0; j < n; ++j) {
                a[row * n + j] = submod(a[row * n + j], mulmod(f, a[col * n + j], p), p);
                b[row * n + j] = submod(b[row * n + j], mulmod(f, b[col * n + j], p), p);
            }
        }
    }
    return inv;
}

bool FpMatrix::is_identity() const { return *this == identity(n_, modulus_); }

std::string FpMatrix::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < n_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < n_; ++j)
            os << (j ? " " : "") << entries_[i * n_ + j];
        os << ']';
    }
    os << ']';
    return os.str();
}

u64 det_in_place(std::span<u64> a, std::size_t n, u64 p)
{
    if (n == 1)
        return a[0];
    if (n == 2)
        return submod(mulmod(a[0], a[3], p), mulmod(a[1], a[2], p), p);
    u64 det = 1 % p;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv * n + col] == 0)
            ++piv;
        if (piv == n)
            return 0;
        if (piv != col) {
            for (std::size_t j = col; j < n; ++j)
                std::swap(a[piv * n + j], a[col * n + j]);
            det = submod(0, det, p);
        }
        const u64 pv = a[col * n + col];
        det = mulmod(det, pv, p);
        const u64 pinv = invmod(pv, p);
        for (std::size_t row = col + 1; row < n; ++row) {
            u64 f = mulmod(a[row * n + col], pinv, p);
            if (f == 0)
                continue;
            for (std::size_t j = col; j < n; ++j)
                a[row * n + j] = submod(a[row * n + j], mulmod(f, a[col * n + j], p), p);
        }
    }
    return det;
}

u64 mat_det(const FpMatrix& m)
{
    std::vector<u64> a(m.entries());
    return det_in_place(a, m.n(), m.modulus());
}

u64 det_one_minus(const FpMatrix& m)
{
    const std::size_t n = m.n();
    const u64 p = m.modulus();
    std::vector<u64> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i * n + j] = submod(i == j ? 1 % p : 0, m(i, j), p);
    return det_in_place(a, n, p);
}

// Berkowitz: division-free, so it works for every prime including 2.
FpPoly charpoly(const FpMatrix& m)
{
    const std::size_t n = m.n();
    const u64 p = m.modulus();
    // coefficients highest degree first
    std::vector<u64> poly{1 % p, submod(0, m(0, 0), p)};
    for (std::size_t k = 1; k < n; ++k) {
        // q = [1, -a_kk, -R S, -R M S, ..., -R M^{k-1} S]
        std::vector<u64> q(k + 2);
        q[0] = 1 % p;
        q[1] = submod(0, m(k, k), p);
        std::vector<u64> v(k);
        for (std::size_t i = 0; i < k; ++i)
            v[i] = m(i, k);
        for (std::size_t j = 0; j < k; ++j) {
            u64 rv = 0;
            for (std::size_t i = 0; i < k; ++i)
                rv = addmod(rv, mulmod(m(k, i), v[i], p), p);
            q[j + 2] = submod(0, rv, p);
            std::vector<u64> next(k, 0);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t l = 0; l < k; ++l)
                    next[i] = addmod(next[i], mulmod(m(i, l), v[l], p), p);
            v = std::move(next);
        }
        std::vector<u64> out(k + 2, 0);
        for (std::size_t i = 0; i < k + 2; ++i)
            for (std::size_t j = 0; j <= std::min(i, k); ++j)
                out[i] = addmod(out[i], mulmod(q[i - j], poly[j], p), p);
        poly = std::move(out);
    }
    std::reverse(poly.begin(), poly.end());
    return FpPoly(std::move(poly), p);
}

} // namespace tdl
