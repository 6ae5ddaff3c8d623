// Copyright 2026 The loopgas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOOPGAS_SCALAR_HPP
#define LOOPGAS_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace loopgas {

using BigInt = boost::multiprecision::cpp_int;

/// Exact element of the ring Z[1/2, sqrt(2)], stored as (a + b*sqrt(2)) / 2^k.
///
/// Every amplitude and operator entry of the merged spin-1 model lives in this
/// ring: the merge factor 1/sqrt(2) is (0 + 1*sqrt(2))/2, spin-1 S^x entries are
/// 1/sqrt(2), and the duality matrix has entries in {0, +-1/2, +-1/sqrt(2)}.
///
/// The representation is canonical: either k == 0, or a and b are not both
/// even. Zero is (0, 0, 0). Canonical form makes structural equality coincide
/// with numerical equality.
class ExactScalar {
   public:
    ExactScalar() = default;
    ExactScalar(long long a) : a_(a) {}  // NOLINT(google-explicit-constructor)
    ExactScalar(BigInt a, BigInt b, std::uint32_t k) : a_(std::move(a)), b_(std::move(b)), k_(k) {
        normalize();
    }

    static ExactScalar zero() { return {}; }
    static ExactScalar one() { return ExactScalar(1); }
    static ExactScalar sqrt2() { return ExactScalar(0, 1, 0); }
    static ExactScalar inv_sqrt2() { return ExactScalar(0, 1, 1); }
    static ExactScalar half() { return ExactScalar(1, 0, 1); }
    /// 2^-n.
    static ExactScalar inv_pow2(std::uint32_t n) { return ExactScalar(1, 0, n); }
    /// (1/sqrt(2))^n.
    static ExactScalar inv_sqrt2_pow(std::uint32_t n) {
        // (1/sqrt2)^(2m) = 2^-m ; (1/sqrt2)^(2m+1) = sqrt2 / 2^(m+1)
        if (n % 2 == 0) return ExactScalar(1, 0, n / 2);
        return ExactScalar(0, 1, n / 2 + 1);
    }

    const BigInt &a() const { return a_; }
    const BigInt &b() const { return b_; }
    std::uint32_t k() const { return k_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

    /// Sign of the real number (a + b*sqrt(2)) / 2^k, decided exactly.
    int sign() const {
        int sa = a_.sign();
        int sb = b_.sign();
        if (sa == 0) return sb;
        if (sb == 0 || sa == sb) return sa;
        // Opposite signs: compare a^2 with 2 b^2.
        BigInt lhs = a_ * a_;
        BigInt rhs = 2 * b_ * b_;
        return lhs > rhs ? sa : sb;
    }

    ExactScalar operator-() const {
        ExactScalar r = *this;
        r.a_ = -r.a_;
        r.b_ = -r.b_;
        return r;
    }

    ExactScalar &operator+=(const ExactScalar &o) {
        if (o.is_zero()) return *this;
        if (is_zero()) return *this = o;
        if (k_ == o.k_) {
            a_ += o.a_;
            b_ += o.b_;
        } else if (k_ > o.k_) {
            std::uint32_t s = k_ - o.k_;
            a_ += o.a_ << s;
            b_ += o.b_ << s;
        } else {
            std::uint32_t s = o.k_ - k_;
            a_ = (a_ << s) + o.a_;
            b_ = (b_ << s) + o.b_;
            k_ = o.k_;
        }
        normalize();
        return *this;
    }
    ExactScalar &operator-=(const ExactScalar &o) { return *this += -o; }
    ExactScalar &operator*=(const ExactScalar &o) {
        if (is_zero() || o.is_zero()) return *this = ExactScalar();
        BigInt na = a_ * o.a_ + 2 * b_ * o.b_;
        BigInt nb = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(na);
        b_ = std::move(nb);
        k_ += o.k_;
        normalize();
        return *this;
    }

    friend ExactScalar operator+(ExactScalar x, const ExactScalar &y) { return x += y; }
    friend ExactScalar operator-(ExactScalar x, const ExactScalar &y) { return x -= y; }
    friend ExactScalar operator*(ExactScalar x, const ExactScalar &y) { return x *= y; }

    friend bool operator==(const ExactScalar &x, const ExactScalar &y) {
        return x.k_ == y.k_ && x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const ExactScalar &x, const ExactScalar &y) { return !(x == y); }

    /// Multiplies by 2^n (n may be negative).
    ExactScalar scaled_pow2(int n) const {
        ExactScalar r = *this;
        if (r.is_zero()) return r;
        if (n < 0) {
            r.k_ += static_cast<std::uint32_t>(-n);
        } else {
            auto m = static_cast<std::uint32_t>(n);
            std::uint32_t take = std::min(m, r.k_);
            r.k_ -= take;
            m -= take;
            r.a_ <<= m;
            r.b_ <<= m;
        }
        r.normalize();
        return r;
    }

    /// Conjugate a - b*sqrt(2); x * conj(x) = (a^2 - 2b^2)/4^k is rational.
    ExactScalar conj() const { return ExactScalar(a_, -b_, k_); }

    /// Nearest double up to one ulp.
    double to_double() const {
        if (is_zero()) return 0.0;
        if (b_.is_zero()) return ldexp_big(a_, -static_cast<long long>(k_));
        if (a_.is_zero()) {
            // b*sqrt(2)/2^k computed through an integer square root of 2*b^2*4^s.
            return scaled_sqrt_term(b_, 0);
        }
        return scaled_sqrt_term(b_, 1);
    }

    std::string to_string() const {
        std::string s = "(" + a_.str() + " + " + b_.str() + "*sqrt2)";
        if (k_ > 0) s += "/2^" + std::to_string(k_);
        return s;
    }

    std::size_t hash() const {
        std::size_t h = std::hash<std::string>()(a_.str());
        h ^= std::hash<std::string>()(b_.str()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<std::uint32_t>()(k_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

   private:
    void normalize() {
        if (a_.is_zero() && b_.is_zero()) {
            k_ = 0;
            return;
        }
        while (k_ > 0 && !bit_test(a_, 0) && !bit_test(b_, 0)) {
            a_ >>= 1;
            b_ >>= 1;
            --k_;
        }
    }

    static bool bit_test(const BigInt &x, unsigned bit) {
        return boost::multiprecision::bit_test(x, bit);
    }

    // x * 2^e as a double, rounding through the top 64 significant bits.
    static double ldexp_big(const BigInt &x, long long e) {
        if (x.is_zero()) return 0.0;
        BigInt m = boost::multiprecision::abs(x);
        long long bits = static_cast<long long>(boost::multiprecision::msb(m)) + 1;
        long long shift = bits > 64 ? bits - 64 : 0;
        if (shift > 0) m >>= static_cast<unsigned>(shift);
        auto top = m.convert_to<std::uint64_t>();
        long double v = std::ldexp(static_cast<long double>(top), static_cast<int>(shift + e));
        double r = static_cast<double>(v);
        return x.sign() < 0 ? -r : r;
    }

    // (a*with_a + b*sqrt(2)) / 2^k evaluated with >= 80 bits beyond cancellation.
    double scaled_sqrt_term(const BigInt &b, int with_a) const {
        // Choose s so that sqrt(2 b^2 4^s) carries enough bits to survive the
        // cancellation with a: |a + b sqrt2| >= 1 / (|a| + |b| sqrt2 + 1).
        long long width = static_cast<long long>(boost::multiprecision::msb(boost::multiprecision::abs(b))) + 1;
        if (with_a) {
            long long wa =
                static_cast<long long>(boost::multiprecision::msb(boost::multiprecision::abs(a_))) + 1;
            width = std::max(width, wa);
        }
        long long s = 2 * width + 96;
        BigInt sq = 2 * b * b;
        sq <<= static_cast<unsigned>(2 * s);
        BigInt root = boost::multiprecision::sqrt(sq);
        if (b.sign() < 0) root = -root;
        BigInt total = root;
        if (with_a) total += a_ << static_cast<unsigned>(s);
        return ldexp_big(total, -s - static_cast<long long>(k_));
    }

    BigInt a_{0};
    BigInt b_{0};
    std::uint32_t k_{0};
};

inline std::ostream &operator<<(std::ostream &os, const ExactScalar &x) { return os << x.to_string(); }

/// Quotient num/den of two ring elements, kept unevaluated (den != 0).
/// Comparisons are decided exactly by cross-multiplication.
struct ExactRatio {
    ExactScalar num;
    ExactScalar den = ExactScalar(1);

    int sign() const { return num.sign() * den.sign(); }
    bool equals(const ExactScalar &x) const { return num == x * den; }
    bool operator==(const ExactRatio &o) const { return num * o.den == o.num * den; }
    double to_double() const { return num.to_double() / den.to_double(); }
    std::string to_string() const { return num.to_string() + " / " + den.to_string(); }
};

}  // namespace loopgas

template <>
struct std::hash<loopgas::ExactScalar> {
    std::size_t operator()(const loopgas::ExactScalar &x) const { return x.hash(); }
};

#endif
