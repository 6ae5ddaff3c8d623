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

#ifndef LOOPGAS_BITVECTOR_HPP
#define LOOPGAS_BITVECTOR_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopgas {

/// Fixed-length packed vector over GF(2).
///
/// Used for edge subsets (loop configurations, strings, cuts), vertex parity
/// vectors and rows of GF(2) systems. Bits beyond size() are kept zero so that
/// word-level comparison and hashing are exact.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}
    BitVector(std::size_t n, std::initializer_list<std::size_t> ones) : BitVector(n) {
        for (auto i : ones) set(i);
    }

    static BitVector from_indices(std::size_t n, const std::vector<int> &ones) {
        BitVector r(n);
        for (int i : ones) r.set(static_cast<std::size_t>(i));
        return r;
    }

    std::size_t size() const { return n_; }
    std::size_t num_words() const { return words_.size(); }
    const std::vector<std::uint64_t> &words() const { return words_; }
    std::uint64_t word(std::size_t w) const { return words_[w]; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    bool operator[](std::size_t i) const { return test(i); }
    void set(std::size_t i, bool v = true) {
        check(i);
        if (v) {
            words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        } else {
            words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
        }
    }
    void flip(std::size_t i) {
        check(i);
        words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool none() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool any() const { return !none(); }

    /// Parity of |this AND other|.
    bool dot(const BitVector &o) const {
        same_size(o);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
        return std::popcount(acc) & 1;
    }
    bool is_subset_of(const BitVector &o) const {
        same_size(o);
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~o.words_[w]) return false;
        return true;
    }

    BitVector &operator^=(const BitVector &o) {
        same_size(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
        return *this;
    }
    BitVector &operator&=(const BitVector &o) {
        same_size(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
        return *this;
    }
    BitVector &operator|=(const BitVector &o) {
        same_size(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
        return *this;
    }
    /// Set difference this \ o.
    BitVector &subtract(const BitVector &o) {
        same_size(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
        return *this;
    }
    BitVector complement() const {
        BitVector r = *this;
        for (auto &w : r.words_) w = ~w;
        r.trim();
        return r;
    }

    friend BitVector operator^(BitVector x, const BitVector &y) { return x ^= y; }
    friend BitVector operator&(BitVector x, const BitVector &y) { return x &= y; }
    friend BitVector operator|(BitVector x, const BitVector &y) { return x |= y; }
    friend BitVector operator-(BitVector x, const BitVector &y) { return x.subtract(y); }

    friend bool operator==(const BitVector &x, const BitVector &y) {
        return x.n_ == y.n_ && x.words_ == y.words_;
    }
    friend bool operator!=(const BitVector &x, const BitVector &y) { return !(x == y); }
    friend bool operator<(const BitVector &x, const BitVector &y) {
        if (x.n_ != y.n_) return x.n_ < y.n_;
        for (std::size_t w = x.words_.size(); w-- > 0;)
            if (x.words_[w] != y.words_[w]) return x.words_[w] < y.words_[w];
        return false;
    }

    /// Indices of set bits in increasing order.
    std::vector<int> ones() const {
        std::vector<int> r;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t x = words_[w];
            while (x) {
                int b = std::countr_zero(x);
                r.push_back(static_cast<int>(w * 64 + b));
                x &= x - 1;
            }
        }
        return r;
    }

    /// Hex string, least significant nibble first: character i holds bits 4i..4i+3.
    std::string to_hex() const {
        static const char *digits = "0123456789abcdef";
        std::string s((n_ + 3) / 4, '0');
        for (std::size_t i = 0; i < s.size(); ++i) {
            unsigned nib = (words_[(4 * i) >> 6] >> ((4 * i) & 63)) & 0xF;
            s[i] = digits[nib];
        }
        return s;
    }
    static BitVector from_hex(std::size_t n, const std::string &s) {
        if (s.size() != (n + 3) / 4) throw std::invalid_argument("hex bit string has wrong length for " + std::to_string(n) + " bits");
        BitVector r(n);
        for (std::size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            unsigned nib;
            if (c >= '0' && c <= '9') {
                nib = static_cast<unsigned>(c - '0');
            } else if (c >= 'a' && c <= 'f') {
                nib = static_cast<unsigned>(c - 'a' + 10);
            } else if (c >= 'A' && c <= 'F') {
                nib = static_cast<unsigned>(c - 'A' + 10);
            } else {
                throw std::invalid_argument(std::string("invalid hex digit '") + c + "'");
            }
            for (unsigned b = 0; b < 4; ++b) {
                std::size_t idx = 4 * i + b;
                if ((nib >> b) & 1U) {
                    if (idx >= n) throw std::invalid_argument("hex bit string sets bits beyond its length");
                    r.set(idx);
                }
            }
        }
        return r;
    }

    std::string to_bit_string() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (test(i)) s[i] = '1';
        return s;
    }

    std::size_t hash() const {
        std::size_t h = n_;
        for (auto w : words_) h ^= std::hash<std::uint64_t>()(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

   private:
    void check(std::size_t i) const {
        if (i >= n_) throw std::out_of_range("bit index " + std::to_string(i) + " out of range " + std::to_string(n_));
    }
    void same_size(const BitVector &o) const {
        if (o.n_ != n_) throw std::invalid_argument("bit vectors of different length");
    }
    void trim() {
        if (n_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// A set of edges of a fixed geometry, one bit per edge.
using EdgeSubset = BitVector;
/// One parity bit per vertex.
using VertexParity = BitVector;

}  // namespace loopgas

template <>
struct std::hash<loopgas::BitVector> {
    std::size_t operator()(const loopgas::BitVector &x) const { return x.hash(); }
};

#endif
