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

#ifndef LOOPGAS_STATE_HPP
#define LOOPGAS_STATE_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "loopgas/lattice.hpp"
#include "loopgas/scalar.hpp"

namespace loopgas {

/// Finitely supported, unnormalized vector over configurations of type Config
/// with exact real amplitudes. Entries are kept sorted by configuration, and
/// zero amplitudes are never stored, so equality is exact state equality.
template <class Config>
class SparseState {
   public:
    using Map = std::map<Config, ExactScalar>;

    SparseState() = default;
    explicit SparseState(GeometryPtr g) : geometry_(std::move(g)) {}

    const GeometryPtr &geometry_ptr() const { return geometry_; }
    const LatticeGeometry &geometry() const { return *geometry_; }

    std::size_t size() const { return amps_.size(); }
    bool empty() const { return amps_.empty(); }
    const Map &entries() const { return amps_; }
    auto begin() const { return amps_.begin(); }
    auto end() const { return amps_.end(); }

    ExactScalar amplitude(const Config &c) const {
        auto it = amps_.find(c);
        return it == amps_.end() ? ExactScalar() : it->second;
    }

    void add(const Config &c, const ExactScalar &amp) {
        if (amp.is_zero()) return;
        auto [it, inserted] = amps_.try_emplace(c, amp);
        if (!inserted) {
            it->second += amp;
            if (it->second.is_zero()) amps_.erase(it);
        }
    }
    void add(Config &&c, const ExactScalar &amp) {
        if (amp.is_zero()) return;
        auto [it, inserted] = amps_.try_emplace(std::move(c), amp);
        if (!inserted) {
            it->second += amp;
            if (it->second.is_zero()) amps_.erase(it);
        }
    }
    void set(const Config &c, const ExactScalar &amp) {
        if (amp.is_zero()) {
            amps_.erase(c);
        } else {
            amps_[c] = amp;
        }
    }

    SparseState scaled(const ExactScalar &s) const {
        SparseState r(geometry_);
        if (s.is_zero()) return r;
        for (const auto &[c, a] : amps_) r.amps_.emplace_hint(r.amps_.end(), c, a * s);
        return r;
    }

    SparseState &operator+=(const SparseState &o) {
        check_same(o);
        for (const auto &[c, a] : o.amps_) add(c, a);
        return *this;
    }
    SparseState &operator-=(const SparseState &o) {
        check_same(o);
        for (const auto &[c, a] : o.amps_) add(c, -a);
        return *this;
    }
    friend SparseState operator+(SparseState x, const SparseState &y) { return x += y; }
    friend SparseState operator-(SparseState x, const SparseState &y) { return x -= y; }

    friend bool operator==(const SparseState &x, const SparseState &y) { return x.amps_ == y.amps_; }
    friend bool operator!=(const SparseState &x, const SparseState &y) { return !(x == y); }

    /// Exact <this|other> (amplitudes are real).
    ExactScalar inner(const SparseState &o) const {
        check_same(o);
        ExactScalar acc;
        const SparseState &small = size() <= o.size() ? *this : o;
        const SparseState &large = size() <= o.size() ? o : *this;
        for (const auto &[c, a] : small.amps_) {
            auto it = large.amps_.find(c);
            if (it != large.amps_.end()) acc += a * it->second;
        }
        return acc;
    }
    ExactScalar norm_squared() const { return inner(*this); }

    /// Ratio r with other == r * this, if the two states are proportional and this is nonzero.
    std::optional<ExactRatio> ratio_to(const SparseState &o) const {
        check_same(o);
        if (empty() || size() != o.size()) return std::nullopt;
        const auto &[c0, a0] = *amps_.begin();
        ExactScalar b0 = o.amplitude(c0);
        for (const auto &[c, a] : amps_) {
            auto it = o.amps_.find(c);
            if (it == o.amps_.end()) return std::nullopt;
            if (a * b0 != it->second * a0) return std::nullopt;
        }
        return ExactRatio{b0, a0};
    }

   protected:
    void check_same(const SparseState &o) const {
        if (geometry_ && o.geometry_ && geometry_ != o.geometry_ && geometry_->hash() != o.geometry_->hash())
            throw std::invalid_argument("states belong to different geometries");
    }

    GeometryPtr geometry_;
    Map amps_;
};

}  // namespace loopgas

#endif
