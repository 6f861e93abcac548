#pragma once

// Prime-field arithmetic: elements, univariate polynomials and square
// matrices over F_l. Moduli are l = 2 or odd primes below 2^31, so every
// product of two reduced residues fits in 64 bits.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tdl/error.hpp"

namespace tdl {

using u64 = std::uint64_t;
using i64 = std::int64_t;

bool is_prime(u64 n);

inline u64 mulmod(u64 a, u64 b, u64 p) { return a * b % p; }
inline u64 addmod(u64 a, u64 b, u64 p) { u64 s = a + b; return s >= p ? s - p : s; }
inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
u64 powmod(u64 a, u64 e, u64 p);
/// Inverse of a nonzero residue; throws ZeroInverse for 0.
u64 invmod(u64 a, u64 p);
/// Reduces any signed integer into [0, p).
u64 reduce(i64 v, u64 p);

/// Throws InvalidArgument unless p is 2 or an odd prime below 2^31.
void require_field_modulus(u64 p);

class Fp {
public:
    Fp(i64 value, u64 modulus);

    u64 value() const { return value_; }
    u64 modulus() const { return modulus_; }
    bool is_zero() const { return value_ == 0; }

    Fp operator+(const Fp& o) const;
    Fp operator-(const Fp& o) const;
    Fp operator*(const Fp& o) const;
    Fp operator-() const;

    bool operator==(const Fp&) const = default;

private:
    struct Raw {};
    Fp(Raw, u64 value, u64 modulus) : value_(value), modulus_(modulus) {}

    void check_same(const Fp& o) const;

    u64 value_;
    u64 modulus_;

    friend Fp field_inv(const Fp& a);
};

Fp field_inv(const Fp& a);

/// Univariate polynomial over F_l, lowest-degree coefficient first and always
/// normalized (no trailing zeros, so the zero polynomial has no coefficients).
class FpPoly {
public:
    explicit FpPoly(u64 modulus);
    FpPoly(std::vector<u64> coeffs, u64 modulus);
    static FpPoly from_signed(std::initializer_list<i64> coeffs, u64 modulus);
    static FpPoly monomial(u64 coeff, std::size_t degree, u64 modulus);

    u64 modulus() const { return modulus_; }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<u64>& coeffs() const { return coeffs_; }
    u64 coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
    u64 leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }

    u64 eval(u64 x) const;
    FpPoly derivative() const;
    FpPoly monic() const;

    FpPoly operator+(const FpPoly& o) const;
    FpPoly operator-(const FpPoly& o) const;
    FpPoly operator*(const FpPoly& o) const;
    FpPoly scaled(u64 c) const;

    /// Quotient and remainder; throws ZeroPolynomial on division by zero.
    std::pair<FpPoly, FpPoly> divmod(const FpPoly& divisor) const;

    bool operator==(const FpPoly&) const = default;

    /// e.g. "x^2 + 2x + 2"
    std::string to_string() const;

private:
    void normalize();
    void check_same(const FpPoly& o) const;

    std::vector<u64> coeffs_;
    u64 modulus_;
};

/// Monic gcd (zero if both inputs are zero).
FpPoly poly_gcd(FpPoly a, FpPoly b);

struct RootCounts {
    int in_field = 0;
    int in_closure = 0;
};

/// Distinct roots of f in F_l (full scan) and in the algebraic closure
/// (degree of the radical). Throws ZeroPolynomial for f = 0.
RootCounts distinct_root_counts(const FpPoly& f);

/// f(x^N).
FpPoly substitute_power(const FpPoly& f, unsigned N);

/// Dense n x n matrix over F_l, row-major.
class FpMatrix {
public:
    FpMatrix(std::size_t n, u64 modulus);
    FpMatrix(std::size_t n, u64 modulus, std::vector<u64> entries);
    static FpMatrix identity(std::size_t n, u64 modulus);
    static FpMatrix from_signed(std::size_t n, u64 modulus, std::initializer_list<i64> entries);
    static FpMatrix diagonal(std::span<const u64> diag, u64 modulus);

    std::size_t n() const { return n_; }
    u64 modulus() const { return modulus_; }
    u64 operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, u64 v) { entries_[i * n_ + j] = v % modulus_; }
    const std::vector<u64>& entries() const { return entries_; }

    FpMatrix operator*(const FpMatrix& o) const;
    FpMatrix operator+(const FpMatrix& o) const;
    FpMatrix operator-(const FpMatrix& o) const;
    FpMatrix scaled(u64 c) const;
    FpMatrix transpose() const;
    FpMatrix pow(u64 e) const;
    /// Throws ZeroInverse for singular matrices.
    FpMatrix inverse() const;

    bool is_identity() const;

    auto operator<=>(const FpMatrix&) const = default;
    bool operator==(const FpMatrix&) const = default;

    std::string to_string() const;

private:
    void check_same(const FpMatrix& o) const;

    std::size_t n_;
    u64 modulus_;
    std::vector<u64> entries_;
};

u64 mat_det(const FpMatrix& m);
/// det(I - M), i.e. zero exactly when M has eigenvalue 1.
u64 det_one_minus(const FpMatrix& m);
/// det(xI - M), monic of degree n.
FpPoly charpoly(const FpMatrix& m);

/// In-place determinant of a row-major n x n buffer (destroys the buffer).
u64 det_in_place(std::span<u64> a, std::size_t n, u64 p);

} // namespace tdl
