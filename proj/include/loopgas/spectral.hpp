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

#ifndef LOOPGAS_SPECTRAL_HPP
#define LOOPGAS_SPECTRAL_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopgas/gf2.hpp"
#include "loopgas/merge.hpp"
#include "loopgas/parallel.hpp"
#include "loopgas/spin1ops.hpp"

namespace loopgas {

// ---------------------------------------------------------------------------
// Basis
// ---------------------------------------------------------------------------

/// Full: all 3^N configurations. Sector: configurations whose single lines
/// form a closed subgraph (every A1v = +1). H conserves every A1v, and a
/// state with some A1v = -1 has energy >= J, so the kernel and all
/// eigenvalues below J live in the sector.
enum class BasisKind { Sector, Full };

inline std::string to_string(BasisKind k) { return k == BasisKind::Sector ? "sector" : "full"; }
inline BasisKind parse_basis_kind(const std::string &s) {
    if (s == "sector") return BasisKind::Sector;
    if (s == "full") return BasisKind::Full;
    throw std::invalid_argument("unknown basis kind: " + s);
}

/// Default cap on basis dimension before any allocation (3^14).
inline constexpr std::uint64_t kDefaultMaxDim = 4782969;

/// Configurations encoded as base-3 integers, digit e = label of edge e.
class SpinBasis {
   public:
    static SpinBasis full(const GeometryPtr &g, std::uint64_t max_dim = kDefaultMaxDim) {
        SpinBasis b(g, BasisKind::Full);
        b.dim_ = b.pow3_.back();
        if (b.dim_ > max_dim)
            throw std::length_error("full basis dimension " + std::to_string(b.dim_) + " exceeds cap " +
                                    std::to_string(max_dim));
        return b;
    }

    static SpinBasis sector(const GeometryPtr &g, std::uint64_t max_dim = kDefaultMaxDim) {
        SpinBasis b(g, BasisKind::Sector);
        std::uint64_t dim = sector_dimension(*g);
        if (dim > max_dim)
            throw std::length_error("sector basis dimension " + std::to_string(dim) + " exceeds cap " +
                                    std::to_string(max_dim));
        b.codes_.reserve(dim);
        auto n = static_cast<std::size_t>(g->num_edges());
        for_each_in_span(cycle_basis(*g), g->empty_subset(), [&](const EdgeSubset &s) {
            std::uint64_t base = 0;
            std::vector<std::uint64_t> free;
            for (std::size_t e = 0; e < n; ++e) {
                if (s.test(e))
                    base += b.pow3_[e];
                else
                    free.push_back(2 * b.pow3_[e]);
            }
            const std::uint64_t total = std::uint64_t{1} << free.size();
            for (std::uint64_t m = 0; m < total; ++m) {
                std::uint64_t c = base;
                for (std::size_t i = 0; i < free.size(); ++i)
                    if ((m >> i) & 1U) c += free[i];
                b.codes_.push_back(c);
            }
        });
        std::sort(b.codes_.begin(), b.codes_.end());
        b.dim_ = b.codes_.size();
        return b;
    }

    static SpinBasis make(const GeometryPtr &g, BasisKind kind, std::uint64_t max_dim = kDefaultMaxDim) {
        return kind == BasisKind::Sector ? sector(g, max_dim) : full(g, max_dim);
    }

    /// Sum over closed single-line sets S of 2^(N - |S|), without enumerating configurations.
    static std::uint64_t sector_dimension(const LatticeGeometry &g) {
        std::uint64_t dim = 0;
        auto n = static_cast<std::uint64_t>(g.num_edges());
        if (n > 60) throw std::length_error("sector too large");
        for_each_in_span(cycle_basis(g), g.empty_subset(),
                         [&](const EdgeSubset &s) { dim += std::uint64_t{1} << (n - s.count()); });
        return dim;
    }

    const GeometryPtr &geometry_ptr() const { return geometry_; }
    BasisKind kind() const { return kind_; }
    std::uint64_t dim() const { return dim_; }
    std::uint64_t pow3(std::size_t e) const { return pow3_[e]; }

    std::uint64_t code(std::uint64_t i) const { return kind_ == BasisKind::Full ? i : codes_[i]; }
    std::optional<std::uint64_t> index(std::uint64_t c) const {
        if (kind_ == BasisKind::Full) {
            if (c < dim_) return c;
            return std::nullopt;
        }
        auto it = std::lower_bound(codes_.begin(), codes_.end(), c);
        if (it == codes_.end() || *it != c) return std::nullopt;
        return static_cast<std::uint64_t>(it - codes_.begin());
    }

    std::uint64_t encode(const Spin1Config &m) const {
        std::uint64_t c = 0;
        for (std::size_t e = 0; e < m.size(); ++e) c += static_cast<std::uint64_t>(m.label(e)) * pow3_[e];
        return c;
    }
    Spin1Config decode(std::uint64_t c) const {
        Spin1Config m(static_cast<std::size_t>(geometry_->num_edges()));
        for (std::size_t e = 0; e < m.size(); ++e) {
            m.set(e, static_cast<int>(c % 3));
            c /= 3;
        }
        return m;
    }

    /// Amplitudes of a merged state as a dense float vector in this basis.
    Eigen::VectorXd to_vector(const MergedState &s) const {
        if (s.geometry().hash() != geometry_->hash()) throw std::invalid_argument("state geometry differs from basis");
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
        for (const auto &[cfg, amp] : s) {
            auto i = index(encode(cfg));
            if (!i) throw std::invalid_argument("state has weight outside the basis: " + cfg.to_ternary());
            v(static_cast<Eigen::Index>(*i)) = amp.to_double();
        }
        return v;
    }

   private:
    SpinBasis(GeometryPtr g, BasisKind kind) : geometry_(std::move(g)), kind_(kind) {
        auto n = static_cast<std::size_t>(geometry_->num_edges());
        if (n > 40) throw std::length_error("base-3 codes limited to 40 edges");
        pow3_.assign(n + 1, 1);
        for (std::size_t e = 1; e <= n; ++e) pow3_[e] = 3 * pow3_[e - 1];
    }

    GeometryPtr geometry_;
    BasisKind kind_;
    std::uint64_t dim_ = 0;
    std::vector<std::uint64_t> pow3_;
    std::vector<std::uint64_t> codes_;
};

// ---------------------------------------------------------------------------
// Float operator
// ---------------------------------------------------------------------------

/// A stamped term converted to doubles, indexed by label: m[out][in].
struct FloatTerm {
    double coefficient = 1.0;
    std::vector<int> sites;
    std::vector<std::array<std::array<double, 3>, 3>> mats;
};

inline std::vector<FloatTerm> float_terms(const LatticeOperator &op) {
    std::vector<FloatTerm> out;
    for (const auto &t : op.terms()) {
        FloatTerm f;
        f.coefficient = t.coefficient.to_double();
        if (f.coefficient == 0.0) continue;
        for (const auto &st : t.stamps) {
            f.sites.push_back(st.site);
            std::array<std::array<double, 3>, 3> m{};
            for (int lo = 0; lo < 3; ++lo)
                for (int li = 0; li < 3; ++li) m[lo][li] = st.matrix(site_index(lo), site_index(li)).to_double();
            f.mats.push_back(m);
        }
        out.push_back(std::move(f));
    }
    return out;
}

/// Visits (code', value) for every nonzero <code'|term|code>.
template <class Visit>
void apply_float_term(const FloatTerm &t, const SpinBasis &b, std::uint64_t code, Visit &&visit) {
    const std::size_t k = t.sites.size();
    std::array<int, 16> in{};
    if (k > in.size()) throw std::length_error("term acts on too many sites");
    for (std::size_t s = 0; s < k; ++s)
        in[s] = static_cast<int>((code / b.pow3(static_cast<std::size_t>(t.sites[s]))) % 3);
    // Odometer over output labels, skipping zero matrix entries.
    std::array<int, 16> out{};
    std::size_t s = 0;
    std::array<double, 17> partial{};
    std::array<std::int64_t, 17> delta{};
    partial[0] = t.coefficient;
    out.fill(-1);
    while (true) {
        if (s == k) {
            auto c = static_cast<std::uint64_t>(static_cast<std::int64_t>(code) + delta[k]);
            visit(c, partial[k]);
            if (k == 0) return;
            --s;
            continue;
        }
        int next = out[s] + 1;
        while (next < 3 && t.mats[s][static_cast<std::size_t>(next)][static_cast<std::size_t>(in[s])] == 0.0) ++next;
        if (next == 3) {
            out[s] = -1;
            if (s == 0) return;
            --s;
            continue;
        }
        out[s] = next;
        partial[s + 1] = partial[s] * t.mats[s][static_cast<std::size_t>(next)][static_cast<std::size_t>(in[s])];
        delta[s + 1] = delta[s] + static_cast<std::int64_t>(next - in[s]) *
                                      static_cast<std::int64_t>(b.pow3(static_cast<std::size_t>(t.sites[s])));
        ++s;
    }
}

/// Symmetric real linear map on a basis. Either a stored CSR matrix or the
/// matrix-free stamped path; both gather row by row, so results do not depend
/// on the worker count.
class HamiltonianMap {
   public:
    /// Builds CSR when store is true, otherwise keeps only the stamped terms.
    HamiltonianMap(const LatticeOperator &op, const SpinBasis &basis, bool store)
        : basis_(&basis), terms_(float_terms(op)) {
        if (op.geometry_ptr() && op.geometry_ptr()->hash() != basis.geometry_ptr()->hash())
            throw std::invalid_argument("operator geometry differs from basis");
        if (store) build_csr();
    }

    std::uint64_t dim() const { return basis_->dim(); }
    bool stored() const { return !row_ptr_.empty(); }
    std::size_t nonzeros() const { return cols_.size(); }

    /// Row i of the matrix as (column, value), columns ascending and merged.
    std::vector<std::pair<std::uint64_t, double>> row(std::uint64_t i) const {
        std::vector<std::pair<std::uint64_t, double>> r;
        std::uint64_t code = basis_->code(i);
        for (const auto &t : terms_) {
            apply_float_term(t, *basis_, code, [&](std::uint64_t c, double v) {
                auto j = basis_->index(c);
                if (!j) throw std::logic_error("operator leaves the basis");
                r.emplace_back(*j, v);
            });
        }
        std::sort(r.begin(), r.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
        std::vector<std::pair<std::uint64_t, double>> merged;
        for (const auto &[j, v] : r) {
            if (!merged.empty() && merged.back().first == j)
                merged.back().second += v;
            else
                merged.emplace_back(j, v);
        }
        std::erase_if(merged, [](const auto &x) { return x.second == 0.0; });
        return merged;
    }

    void apply(const double *x, double *y) const {
        const auto n = static_cast<std::size_t>(dim());
        if (stored()) {
            parallel_for(n, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i) {
                    double acc = 0.0;
                    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) acc += vals_[p] * x[cols_[p]];
                    y[i] = acc;
                }
            });
            return;
        }
        // Gather form: every stamped factor is a symmetric matrix, so
        // <code'|t|code> = <code|t|code'>.
        parallel_for(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                double acc = 0.0;
                std::uint64_t code = basis_->code(i);
                for (const auto &t : terms_) {
                    apply_float_term(t, *basis_, code, [&](std::uint64_t c, double v) {
                        auto j = basis_->index(c);
                        if (!j) throw std::logic_error("operator leaves the basis");
                        acc += v * x[*j];
                    });
                }
                y[i] = acc;
            }
        });
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd &x) const {
        Eigen::MatrixXd y(x.rows(), x.cols());
        for (Eigen::Index c = 0; c < x.cols(); ++c) apply(x.col(c).data(), y.col(c).data());
        return y;
    }

    Eigen::MatrixXd dense() const {
        auto n = static_cast<Eigen::Index>(dim());
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (const auto &[j, v] : row(static_cast<std::uint64_t>(i))) m(i, static_cast<Eigen::Index>(j)) = v;
        return m;
    }

    /// max_i sum_j |H_ij|, an upper bound on the spectral norm.
    double gershgorin_bound() const {
        double best = 0.0;
        for (std::uint64_t i = 0; i < dim(); ++i) {
            double s = 0.0;
            for (const auto &[j, v] : row(i)) s += std::abs(v);
            best = std::max(best, s);
        }
        return best;
    }

   private:
    void build_csr() {
        const auto n = static_cast<std::size_t>(dim());
        std::vector<std::vector<std::pair<std::uint64_t, double>>> rows(n);
        parallel_for(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) rows[i] = row(i);
        });
        row_ptr_.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) row_ptr_[i + 1] = row_ptr_[i] + rows[i].size();
        cols_.resize(row_ptr_[n]);
        vals_.resize(row_ptr_[n]);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t p = row_ptr_[i];
            for (const auto &[j, v] : rows[i]) {
                cols_[p] = j;
                vals_[p++] = v;
            }
            std::vector<std::pair<std::uint64_t, double>>().swap(rows[i]);
        }
    }

    const SpinBasis *basis_;
    std::vector<FloatTerm> terms_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint64_t> cols_;
    std::vector<double> vals_;
};

// ---------------------------------------------------------------------------
// Eigensolver
// ---------------------------------------------------------------------------

struct SpectralOptions {
    int k = 16;                       ///< eigenvalues requested (grown while all are in the kernel)
    double j = 1.0;                   ///< coupling; eigenvalues are reported in units of J
    double kernel_tol = 1e-9;         ///< relative to J
    double residual_tol = 1e-8;       ///< relative to the norm estimate of H
    BasisKind basis = BasisKind::Sector;
    std::uint64_t max_dim = kDefaultMaxDim;
    std::uint64_t dense_max_dim = 2187;  ///< 3^7
    std::uint64_t seed = 20260101;
    int max_restarts = 300;
    int max_k = 64;
    std::size_t memory_budget = std::size_t{2} << 30;  ///< bytes for Krylov storage
};

struct SpectralReport {
    std::string geometry;
    BasisKind basis = BasisKind::Sector;
    std::uint64_t dim = 0;
    std::string method;
    std::vector<double> eigenvalues;  ///< ascending, units of J
    std::vector<double> residuals;    ///< ||Hx - lambda x|| per eigenpair, units of J
    int kernel_dim = 0;
    double kernel_tol = 0;
    double residual_tol = 0;  ///< absolute bound applied to residuals
    double norm_estimate = 0;
    std::optional<double> next_eigenvalue;
    bool converged = false;
    bool ambiguous = false;  ///< next eigenvalue within 100x of the kernel tolerance, or not resolved
    int restarts = 0;
    std::uint64_t matvecs = 0;
    double seconds = 0;
    std::string diagnostics;
    Eigen::MatrixXd kernel_vectors;  ///< dim x kernel_dim, orthonormal
};

namespace detail {

/// Orthonormalizes column c of v against columns [0, c) (two passes),
/// refilling from rng when the column is numerically dependent.
inline bool orthonormalize_column(Eigen::MatrixXd &v, Eigen::Index c, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss;
    for (int attempt = 0; attempt < 5; ++attempt) {
        double before = v.col(c).norm();
        for (int pass = 0; pass < 2; ++pass) {
            if (c > 0) {
                Eigen::VectorXd proj = v.leftCols(c).transpose() * v.col(c);
                v.col(c).noalias() -= v.leftCols(c) * proj;
            }
        }
        double after = v.col(c).norm();
        if (after > 1e-10 * before && after > 1e-300) {
            v.col(c) /= after;
            return true;
        }
        for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, c) = gauss(rng);
    }
    return false;
}

inline void finish_kernel(SpectralReport &r, const SpectralOptions &o) {
    r.kernel_tol = o.kernel_tol;
    r.kernel_dim = 0;
    while (r.kernel_dim < static_cast<int>(r.eigenvalues.size()) &&
           r.eigenvalues[static_cast<std::size_t>(r.kernel_dim)] < o.kernel_tol)
        ++r.kernel_dim;
    if (r.kernel_dim < static_cast<int>(r.eigenvalues.size()))
        r.next_eigenvalue = r.eigenvalues[static_cast<std::size_t>(r.kernel_dim)];
    r.ambiguous = !r.next_eigenvalue || *r.next_eigenvalue < 100.0 * o.kernel_tol || !r.converged;
}

inline SpectralReport dense_solve(const HamiltonianMap &h, const SpectralOptions &o) {
    SpectralReport r;
    r.method = "dense";
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense() / o.j);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    const auto &ev = es.eigenvalues();
    const auto n = ev.size();
    r.norm_estimate = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
    r.residual_tol = o.residual_tol * std::max(1.0, r.norm_estimate);
    auto keep = std::min<Eigen::Index>(n, o.k);
    Eigen::MatrixXd x = es.eigenvectors().leftCols(keep);
    Eigen::MatrixXd hx = h.apply(x) / o.j;
    for (Eigen::Index i = 0; i < keep; ++i) {
        r.eigenvalues.push_back(ev(i));
        r.residuals.push_back((hx.col(i) - ev(i) * x.col(i)).norm());
    }
    r.converged = std::all_of(r.residuals.begin(), r.residuals.end(), [&](double v) { return v <= r.residual_tol; });
    // All eigenvalues are known, so grow past a kernel that fills the request.
    while (keep < n && ev(keep - 1) < o.kernel_tol) {
        r.eigenvalues.push_back(ev(keep));
        Eigen::VectorXd xi = es.eigenvectors().col(keep);
        Eigen::VectorXd hxi(n);
        h.apply(xi.data(), hxi.data());
        r.residuals.push_back((hxi / o.j - ev(keep) * xi).norm());
        ++keep;
    }
    finish_kernel(r, o);
    r.kernel_vectors = es.eigenvectors().leftCols(r.kernel_dim);
    return r;
}

/// Restarted block Krylov with Rayleigh-Ritz and full reorthogonalization.
inline SpectralReport block_lanczos(const HamiltonianMap &h, const SpectralOptions &o, int k) {
    SpectralReport r;
    r.method = "block-lanczos";
    const auto n = static_cast<Eigen::Index>(h.dim());
    const Eigen::Index block = std::min<Eigen::Index>(n, k + 8);
    // Two n x m panels (basis and its image) within the memory budget.
    auto by_memory = static_cast<Eigen::Index>(o.memory_budget / (2 * sizeof(double) * static_cast<std::size_t>(n)));
    Eigen::Index m = std::min<Eigen::Index>({n, std::max<Eigen::Index>(by_memory, 2 * block), 480});
    m = std::max<Eigen::Index>(block, (m / block) * block);
    if (2 * static_cast<std::size_t>(m) * static_cast<std::size_t>(n) * sizeof(double) > 2 * o.memory_budget)
        throw std::length_error("Krylov storage exceeds memory budget");

    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd v(n, m), w(n, m);
    for (Eigen::Index c = 0; c < block; ++c)
        for (Eigen::Index i = 0; i < n; ++i) v(i, c) = gauss(rng);

    double norm_est = 0.0;
    Eigen::VectorXd theta;
    Eigen::MatrixXd ritz, hritz;
    std::vector<double> res;
    for (int cycle = 0; cycle < o.max_restarts; ++cycle) {
        r.restarts = cycle + 1;
        Eigen::Index filled = 0;
        // The first block holds the previous Ritz vectors (or the random start).
        for (Eigen::Index c = 0; c < block; ++c) {
            if (!orthonormalize_column(v, c, rng)) throw std::runtime_error("failed to build an orthonormal start block");
        }
        for (Eigen::Index c = 0; c < block; ++c) h.apply(v.col(c).data(), w.col(c).data());
        r.matvecs += static_cast<std::uint64_t>(block);
        filled = block;
        while (filled + block <= m) {
            for (Eigen::Index c = 0; c < block; ++c) {
                v.col(filled + c) = w.col(filled - block + c);
                if (!orthonormalize_column(v, filled + c, rng)) throw std::runtime_error("Krylov basis lost rank");
                h.apply(v.col(filled + c).data(), w.col(filled + c).data());
            }
            r.matvecs += static_cast<std::uint64_t>(block);
            filled += block;
        }
        Eigen::MatrixXd t = v.leftCols(filled).transpose() * w.leftCols(filled);
        t = 0.5 * (t + t.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        if (es.info() != Eigen::Success) throw std::runtime_error("projected eigensolver failed");
        theta = es.eigenvalues();
        norm_est = std::max({norm_est, std::abs(theta(0)), std::abs(theta(filled - 1))});
        ritz = v.leftCols(filled) * es.eigenvectors().leftCols(block);
        hritz = w.leftCols(filled) * es.eigenvectors().leftCols(block);
        res.assign(static_cast<std::size_t>(k), 0.0);
        double tol = o.residual_tol * std::max(o.j, norm_est);
        bool done = true;
        for (Eigen::Index i = 0; i < k; ++i) {
            res[static_cast<std::size_t>(i)] = (hritz.col(i) - theta(i) * ritz.col(i)).norm();
            if (res[static_cast<std::size_t>(i)] > tol) done = false;
        }
        v.leftCols(block) = ritz;
        if (done) {
            r.converged = true;
            break;
        }
    }
    r.norm_estimate = norm_est / o.j;
    r.residual_tol = o.residual_tol * std::max(1.0, r.norm_estimate);
    for (Eigen::Index i = 0; i < k; ++i) {
        r.eigenvalues.push_back(theta(i) / o.j);
        r.residuals.push_back(res[static_cast<std::size_t>(i)] / o.j);
    }
    if (!r.converged) {
        double worst = *std::max_element(r.residuals.begin(), r.residuals.end());
        r.diagnostics = "not converged after " + std::to_string(r.restarts) + " restarts (" +
                        std::to_string(r.matvecs) + " matvecs); worst residual " + std::to_string(worst) +
                        " vs bound " + std::to_string(r.residual_tol);
    }
    finish_kernel(r, o);
    r.kernel_vectors = ritz.leftCols(r.kernel_dim);
    return r;
}

}  // namespace detail

/// k lowest eigenvalues of op (units of J) on the chosen basis. Dense below
/// opts.dense_max_dim, otherwise block Lanczos; k is doubled while every
/// computed eigenvalue lies in the kernel.
inline SpectralReport lowest_eigenvalues(const LatticeOperator &op, const SpectralOptions &opts = {}) {
    if (opts.k < 1) throw std::invalid_argument("k must be at least 1");
    if (opts.j <= 0) throw std::invalid_argument("J must be positive");
    auto start = std::chrono::steady_clock::now();
    auto basis = SpinBasis::make(op.geometry_ptr(), opts.basis, opts.max_dim);
    bool small = basis.dim() <= opts.dense_max_dim;
    // A stored matrix costs ~16 bytes per nonzero; the sector Hamiltonians
    // have ~100 per row.
    bool store = small || basis.dim() * 100 * 16 < opts.memory_budget / 2;
    HamiltonianMap h(op, basis, store);
    SpectralReport r;
    if (small) {
        r = detail::dense_solve(h, opts);
    } else {
        int k = std::min<int>(opts.k, static_cast<int>(basis.dim()) - 1);
        while (true) {
            r = detail::block_lanczos(h, opts, k);
            if (r.kernel_dim < k || 2 * k > opts.max_k || 2 * k >= static_cast<int>(basis.dim())) break;
            k *= 2;
        }
    }
    r.geometry = op.geometry_ptr()->hash();
    r.basis = opts.basis;
    r.dim = basis.dim();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ---------------------------------------------------------------------------
// Kernel confirmation
// ---------------------------------------------------------------------------

struct KernelConfirmation {
    int merged_rank = 0;              ///< numerical rank of the merged states
    int kernel_dim = 0;
    int unexplained_directions = 0;   ///< kernel directions outside the merged span
    int merged_outside_kernel = 0;    ///< merged directions not in the computed kernel
    double max_residual = 0;          ///< largest distance of a kernel vector from the merged span
    std::vector<double> residual_singular_values;
};

/// Projects kernel vectors onto the span of the given merged states.
inline KernelConfirmation confirm_kernel(const SpectralReport &r, const SpinBasis &basis,
                                         const std::vector<MergedState> &states, double tol = 1e-6) {
    KernelConfirmation out;
    out.kernel_dim = r.kernel_dim;
    const auto n = static_cast<Eigen::Index>(basis.dim());
    Eigen::MatrixXd m(n, static_cast<Eigen::Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) {
        Eigen::VectorXd col = basis.to_vector(states[i]);
        double nrm = col.norm();
        m.col(static_cast<Eigen::Index>(i)) = nrm > 0 ? Eigen::VectorXd(col / nrm) : col;
    }
    Eigen::MatrixXd q(n, 0);
    if (m.cols() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > tol) ++out.merged_rank;
        q = svd.matrixU().leftCols(out.merged_rank);
    }
    const Eigen::MatrixXd &k = r.kernel_vectors;
    if (k.cols() > 0) {
        Eigen::MatrixXd rest = k - q * (q.transpose() * k);
        for (Eigen::Index c = 0; c < rest.cols(); ++c) out.max_residual = std::max(out.max_residual, rest.col(c).norm());
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(rest);
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            out.residual_singular_values.push_back(svd.singularValues()(i));
            if (svd.singularValues()(i) > tol) ++out.unexplained_directions;
        }
    }
    if (out.merged_rank > 0) {
        Eigen::MatrixXd rest = q - k * (k.transpose() * q);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(rest);
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > tol) ++out.merged_outside_kernel;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact overlaps
// ---------------------------------------------------------------------------

struct GramResult {
    std::vector<std::vector<ExactScalar>> gram;
    int rank = 0;
};

namespace detail {

/// Scales a row of Q(sqrt2) entries to coprime integers (the row space is unchanged).
inline void reduce_row(std::vector<ExactScalar> &row) {
    std::uint32_t kmax = 0;
    for (const auto &x : row) kmax = std::max(kmax, x.k());
    BigInt g = 0;
    for (auto &x : row) {
        x = x.scaled_pow2(static_cast<int>(kmax));
        g = boost::multiprecision::gcd(g, boost::multiprecision::gcd(x.a(), x.b()));
    }
    if (g > 1)
        for (auto &x : row) x = ExactScalar(x.a() / g, x.b() / g, 0);
}

}  // namespace detail

/// Rank over Q(sqrt2) by elimination without division.
inline int exact_rank(std::vector<std::vector<ExactScalar>> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    int rank = 0;
    std::size_t r0 = 0;
    for (std::size_t c = 0; c < cols && r0 < rows.size(); ++c) {
        std::size_t piv = r0;
        while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r0], rows[piv]);
        for (std::size_t i = r0 + 1; i < rows.size(); ++i) {
            if (rows[i][c].is_zero()) continue;
            ExactScalar f = rows[i][c];
            ExactScalar p = rows[r0][c];
            for (std::size_t j = c; j < cols; ++j) rows[i][j] = p * rows[i][j] - f * rows[r0][j];
            detail::reduce_row(rows[i]);
        }
        ++r0;
        ++rank;
    }
    return rank;
}

inline GramResult gram_rank(const std::vector<MergedState> &states) {
    GramResult out;
    const std::size_t n = states.size();
    out.gram.assign(n, std::vector<ExactScalar>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            out.gram[i][j] = states[i].inner(states[j]);
            out.gram[j][i] = out.gram[i][j];
        }
    out.rank = exact_rank(out.gram);
    return out;
}

/// <psi|op|psi> / <psi|psi>, exact.
inline ExactRatio expectation(const LatticeOperator &op, const MergedState &state) {
    ExactScalar den = state.norm_squared();
    if (den.is_zero()) throw std::invalid_argument("expectation of a zero-norm state");
    return {state.inner(apply(op, state)), den};
}

}  // namespace loopgas

#endif
