#pragma once

#include "derham/error.hpp"
#include "derham/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace derham {

/// Sparse exact matrix. Rows are ordered maps column -> nonzero value; zero
/// entries are never stored.
class RationalMatrix {
  public:
    using Row = std::map<std::size_t, Rational>;

    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.set(i, i, 1);
        return m;
    }

    static RationalMatrix from_rows(const std::vector<std::vector<Rational>> &rows) {
        std::size_t cols = rows.empty() ? 0 : rows.front().size();
        RationalMatrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols)
                throw Error(ErrorCode::InvalidArgument, "ragged row list");
            for (std::size_t c = 0; c < cols; ++c)
                m.set(r, c, rows[r][c]);
        }
        return m;
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    void set(std::size_t r, std::size_t c, const Rational &v) {
        check_index(r, c);
        if (is_zero(v))
            rows_[r].erase(c);
        else
            rows_[r][c] = v;
    }

    void add_to(std::size_t r, std::size_t c, const Rational &v) {
        check_index(r, c);
        if (is_zero(v))
            return;
        auto [it, inserted] = rows_[r].try_emplace(c, v);
        if (!inserted) {
            it->second += v;
            if (is_zero(it->second))
                rows_[r].erase(it);
        }
    }

    Rational at(std::size_t r, std::size_t c) const {
        check_index(r, c);
        auto it = rows_[r].find(c);
        return it == rows_[r].end() ? Rational(0) : it->second;
    }

    const Row &row(std::size_t r) const { return rows_.at(r); }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto &r : rows_)
            n += r.size();
        return n;
    }

    bool is_zero_matrix() const { return nonzeros() == 0; }

    RationalMatrix transpose() const {
        RationalMatrix t(cols_, rows());
        for (std::size_t r = 0; r < rows(); ++r)
            for (const auto &[c, v] : rows_[r])
                t.rows_[c].emplace(r, v);
        return t;
    }

    RationalMatrix &operator+=(const RationalMatrix &o) {
        require_same_shape(o);
        for (std::size_t r = 0; r < rows(); ++r)
            for (const auto &[c, v] : o.rows_[r])
                add_to(r, c, v);
        return *this;
    }

    RationalMatrix &operator*=(const Rational &s) {
        if (is_zero(s)) {
            for (auto &r : rows_)
                r.clear();
            return *this;
        }
        for (auto &r : rows_)
            for (auto &[c, v] : r)
                v *= s;
        return *this;
    }

    friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix &b) { return a += b; }
    friend RationalMatrix operator*(RationalMatrix a, const Rational &s) { return a *= s; }
    friend RationalMatrix operator-(RationalMatrix a, const RationalMatrix &b) {
        RationalMatrix nb = b;
        nb *= Rational(-1);
        return a += nb;
    }

    friend RationalMatrix operator*(const RationalMatrix &a, const RationalMatrix &b) {
        if (a.cols() != b.rows())
            throw Error(ErrorCode::InvalidArgument, "matrix product shape mismatch");
        RationalMatrix p(a.rows(), b.cols());
        for (std::size_t r = 0; r < a.rows(); ++r) {
            Row acc;
            for (const auto &[k, av] : a.rows_[r]) {
                for (const auto &[c, bv] : b.rows_[k]) {
                    auto [it, inserted] = acc.try_emplace(c, av * bv);
                    if (!inserted)
                        it->second += av * bv;
                }
            }
            for (auto it = acc.begin(); it != acc.end();)
                it = is_zero(it->second) ? acc.erase(it) : std::next(it);
            p.rows_[r] = std::move(acc);
        }
        return p;
    }

    friend bool operator==(const RationalMatrix &a, const RationalMatrix &b) {
        return a.cols_ == b.cols_ && a.rows_ == b.rows_;
    }

    /// Columns of `a` followed by columns of `b`.
    static RationalMatrix hstack(const RationalMatrix &a, const RationalMatrix &b) {
        if (a.rows() != b.rows())
            throw Error(ErrorCode::InvalidArgument, "hstack row mismatch");
        RationalMatrix m(a.rows(), a.cols() + b.cols());
        for (std::size_t r = 0; r < a.rows(); ++r) {
            m.rows_[r] = a.rows_[r];
            for (const auto &[c, v] : b.rows_[r])
                m.rows_[r].emplace(a.cols() + c, v);
        }
        return m;
    }

    RationalMatrix select_rows(const std::vector<std::size_t> &which) const {
        RationalMatrix m(which.size(), cols_);
        for (std::size_t i = 0; i < which.size(); ++i)
            m.rows_[i] = rows_.at(which[i]);
        return m;
    }

    RationalMatrix select_cols(const std::vector<std::size_t> &which) const {
        std::vector<std::ptrdiff_t> where(cols_, -1);
        for (std::size_t i = 0; i < which.size(); ++i)
            where.at(which[i]) = static_cast<std::ptrdiff_t>(i);
        RationalMatrix m(rows(), which.size());
        for (std::size_t r = 0; r < rows(); ++r)
            for (const auto &[c, v] : rows_[r])
                if (where[c] >= 0)
                    m.rows_[r].emplace(static_cast<std::size_t>(where[c]), v);
        return m;
    }

  private:
    void check_index(std::size_t r, std::size_t c) const {
        if (r >= rows_.size() || c >= cols_)
            throw Error(ErrorCode::IndexOutOfRange, "matrix index (" + std::to_string(r) + ", " +
                                                        std::to_string(c) + ") outside " +
                                                        std::to_string(rows_.size()) + "x" +
                                                        std::to_string(cols_));
    }

    void require_same_shape(const RationalMatrix &o) const {
        if (o.rows() != rows() || o.cols() != cols())
            throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch");
    }

    std::size_t cols_ = 0;
    std::vector<Row> rows_;
};

namespace detail {

// Integer row in elimination order: parallel arrays of (position, value),
// positions strictly increasing.
struct IntRow {
    std::vector<std::size_t> pos;
    std::vector<Integer> val;

    bool empty() const { return pos.empty(); }
};

inline void remove_content(IntRow &row) {
    if (row.empty())
        return;
    Integer g = abs(row.val[0]);
    for (std::size_t i = 1; i < row.val.size() && g != 1; ++i)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), row.val[i].get_mpz_t());
    bool flip = sgn(row.val[0]) < 0;
    if (g == 1 && !flip)
        return;
    for (auto &v : row.val) {
        if (g != 1)
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
        if (flip)
            v = -v;
    }
}

inline IntRow integer_row(const RationalMatrix::Row &row, const std::vector<std::size_t> &position) {
    Integer l = 1;
    for (const auto &entry : row)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), entry.second.get_den_mpz_t());
    std::vector<std::pair<std::size_t, Integer>> tmp;
    tmp.reserve(row.size());
    for (const auto &[c, q] : row) {
        Integer scaled = l / q.get_den();
        tmp.emplace_back(position[c], q.get_num() * scaled);
    }
    std::sort(tmp.begin(), tmp.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    IntRow out;
    out.pos.reserve(tmp.size());
    out.val.reserve(tmp.size());
    for (auto &[p, v] : tmp) {
        out.pos.push_back(p);
        out.val.push_back(std::move(v));
    }
    remove_content(out);
    return out;
}

// a*r - b*p; the leading entries are assumed to cancel.
inline IntRow combine(const Integer &a, const IntRow &r, const Integer &b, const IntRow &p) {
    IntRow out;
    out.pos.reserve(r.pos.size() + p.pos.size());
    out.val.reserve(r.pos.size() + p.pos.size());
    std::size_t i = 0, j = 0;
    Integer tmp;
    while (i < r.pos.size() || j < p.pos.size()) {
        if (j == p.pos.size() || (i < r.pos.size() && r.pos[i] < p.pos[j])) {
            out.pos.push_back(r.pos[i]);
            out.val.push_back(a * r.val[i]);
            ++i;
        } else if (i == r.pos.size() || p.pos[j] < r.pos[i]) {
            out.pos.push_back(p.pos[j]);
            out.val.push_back(-b * p.val[j]);
            ++j;
        } else {
            tmp = a * r.val[i] - b * p.val[j];
            if (sgn(tmp) != 0) {
                out.pos.push_back(r.pos[i]);
                out.val.push_back(tmp);
            }
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace detail

/// Exact rank over Q by sparse fraction-free elimination: rows are scaled to
/// primitive integer vectors and combined pairwise by cross-multiplication of
/// leading entries, then divided by their content. Columns are visited in
/// order of increasing density to limit fill-in. Rows flagged in
/// `drop_rows` are ignored.
inline std::size_t rank(const RationalMatrix &m, const std::vector<bool> *drop_rows = nullptr) {
    const std::size_t cols = m.cols();
    if (cols == 0 || m.rows() == 0)
        return 0;
    std::vector<std::size_t> density(cols, 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (drop_rows && (*drop_rows)[r])
            continue;
        for (const auto &entry : m.row(r))
            ++density[entry.first];
    }
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return density[a] < density[b]; });
    std::vector<std::size_t> position(cols);
    for (std::size_t i = 0; i < cols; ++i)
        position[order[i]] = i;

    std::vector<detail::IntRow> pending;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if ((drop_rows && (*drop_rows)[r]) || m.row(r).empty())
            continue;
        pending.push_back(detail::integer_row(m.row(r), position));
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [](const auto &a, const auto &b) { return a.pos.size() < b.pos.size(); });

    std::vector<std::ptrdiff_t> pivot_at(cols, -1);
    std::vector<detail::IntRow> pivots;
    Integer g, a, b;
    for (auto &row : pending) {
        while (!row.empty()) {
            std::ptrdiff_t p = pivot_at[row.pos[0]];
            if (p < 0) {
                pivot_at[row.pos[0]] = static_cast<std::ptrdiff_t>(pivots.size());
                pivots.push_back(std::move(row));
                break;
            }
            const detail::IntRow &piv = pivots[static_cast<std::size_t>(p)];
            mpz_gcd(g.get_mpz_t(), piv.val[0].get_mpz_t(), row.val[0].get_mpz_t());
            a = piv.val[0] / g;
            b = row.val[0] / g;
            row = detail::combine(a, row, b, piv);
            detail::remove_content(row);
        }
    }
    return pivots.size();
}

/// Dense Bareiss elimination with column skipping (rank-revealing echelon
/// form). Pivot choice: smallest nonzero magnitude in the active column.
inline std::size_t rank_bareiss(const RationalMatrix &m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        Integer l = 1;
        for (const auto &entry : m.row(r))
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), entry.second.get_den_mpz_t());
        for (const auto &[c, q] : m.row(r))
            a[r][c] = q.get_num() * (l / q.get_den());
    }
    Integer prev = 1;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::ptrdiff_t best = -1;
        for (std::size_t r = rank; r < rows; ++r) {
            if (sgn(a[r][c]) == 0)
                continue;
            if (best < 0 || mpz_cmpabs(a[r][c].get_mpz_t(), a[static_cast<std::size_t>(best)][c].get_mpz_t()) < 0)
                best = static_cast<std::ptrdiff_t>(r);
        }
        if (best < 0)
            continue;
        std::swap(a[rank], a[static_cast<std::size_t>(best)]);
        const Integer pivot = a[rank][c];
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t k = c + 1; k < cols; ++k) {
                a[r][k] = pivot * a[r][k] - a[r][c] * a[rank][k];
                mpz_divexact(a[r][k].get_mpz_t(), a[r][k].get_mpz_t(), prev.get_mpz_t());
            }
            a[r][c] = 0;
        }
        prev = pivot;
        ++rank;
    }
    return rank;
}

/// Basis of the right kernel, one basis vector per column of the result.
inline RationalMatrix nullspace(const RationalMatrix &m) {
    const std::size_t cols = m.cols();
    std::map<std::size_t, RationalMatrix::Row> reduced; // pivot column -> row with 1 at pivot
    for (std::size_t r = 0; r < m.rows(); ++r) {
        RationalMatrix::Row row = m.row(r);
        std::vector<std::size_t> hits;
        for (const auto &entry : row)
            if (reduced.count(entry.first))
                hits.push_back(entry.first);
        for (std::size_t pc : hits) {
            auto it = row.find(pc);
            if (it == row.end())
                continue;
            Rational factor = it->second;
            for (const auto &[c, v] : reduced[pc]) {
                auto [jt, inserted] = row.try_emplace(c, -factor * v);
                if (!inserted) {
                    jt->second -= factor * v;
                    if (is_zero(jt->second))
                        row.erase(jt);
                }
            }
        }
        if (row.empty())
            continue;
        std::size_t pc = row.begin()->first;
        Rational inv = 1 / row.begin()->second;
        for (auto &entry : row)
            entry.second *= inv;
        for (auto &[other_pc, other] : reduced) {
            auto it = other.find(pc);
            if (it == other.end())
                continue;
            Rational factor = it->second;
            for (const auto &[c, v] : row) {
                auto [jt, inserted] = other.try_emplace(c, -factor * v);
                if (!inserted) {
                    jt->second -= factor * v;
                    if (is_zero(jt->second))
                        other.erase(jt);
                }
            }
        }
        reduced.emplace(pc, std::move(row));
    }
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < cols; ++c)
        if (!reduced.count(c))
            free_cols.push_back(c);
    RationalMatrix basis(cols, free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        basis.set(free_cols[k], k, 1);
        for (const auto &[pc, row] : reduced) {
            auto it = row.find(free_cols[k]);
            if (it != row.end())
                basis.set(pc, k, -it->second);
        }
    }
    return basis;
}

/// Inverse of a square matrix, or nullopt when singular.
inline std::optional<RationalMatrix> inverse(const RationalMatrix &m) {
    const std::size_t n = m.rows();
    if (m.cols() != n)
        throw Error(ErrorCode::InvalidArgument, "inverse of a non-square matrix");
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
    for (std::size_t r = 0; r < n; ++r) {
        for (const auto &[c, v] : m.row(r))
            a[r][c] = v;
        a[r][n + r] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && is_zero(a[p][c]))
            ++p;
        if (p == n)
            return std::nullopt;
        std::swap(a[p], a[c]);
        Rational inv = 1 / a[c][c];
        for (auto &v : a[c])
            v *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || is_zero(a[r][c]))
                continue;
            Rational f = a[r][c];
            for (std::size_t k = 0; k < 2 * n; ++k)
                a[r][k] -= f * a[c][k];
        }
    }
    RationalMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            out.set(r, c, a[r][n + c]);
    return out;
}

/// Finite chain complex 0 -> C_m -> ... -> C_1 -> C_0 -> 0 with
/// differential(i) : C_i -> C_{i-1}, shaped dim(i-1) x dim(i).
class ChainComplex {
  public:
    ChainComplex() = default;

    /// `differentials[k]` is the map C_{k+1} -> C_k.
    ChainComplex(std::vector<std::size_t> dims, std::vector<RationalMatrix> differentials)
        : dims_(std::move(dims)), differentials_(std::move(differentials)) {
        if (dims_.empty() ? !differentials_.empty() : differentials_.size() != dims_.size() - 1)
            throw Error(ErrorCode::InvalidArgument, "chain complex needs one differential per adjacent pair");
        for (std::size_t i = 1; i < dims_.size(); ++i) {
            const auto &d = differential(i);
            if (d.rows() != dims_[i - 1] || d.cols() != dims_[i])
                throw Error(ErrorCode::InvalidArgument,
                            "differential " + std::to_string(i) + " has the wrong shape");
        }
    }

    std::size_t size() const { return dims_.size(); }
    std::size_t dim(std::size_t i) const { return dims_.at(i); }
    const std::vector<std::size_t> &dims() const { return dims_; }
    const RationalMatrix &differential(std::size_t i) const { return differentials_.at(i - 1); }

  private:
    std::vector<std::size_t> dims_;
    std::vector<RationalMatrix> differentials_;
};

/// Throws CompositeNotZero unless differential(i) * differential(i+1) = 0 for all i.
inline void check_composites(const ChainComplex &c) {
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        if (c.differential(i).cols() == 0 || c.differential(i + 1).cols() == 0)
            continue;
        if (!(c.differential(i) * c.differential(i + 1)).is_zero_matrix())
            throw Error(ErrorCode::CompositeNotZero,
                        "d_" + std::to_string(i) + " o d_" + std::to_string(i + 1) + " != 0");
    }
}

namespace detail {

inline long long alternating_sum(const std::vector<std::size_t> &v) {
    long long s = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i % 2 == 0 ? 1 : -1) * static_cast<long long>(v[i]);
    return s;
}

inline std::vector<std::size_t> differential_ranks(const ChainComplex &c) {
    // ranks[i] = rank of differential(i); ranks[0] and ranks[size] are zero maps.
    std::vector<std::size_t> ranks(c.size() + 1, 0);
    for (std::size_t i = 1; i < c.size(); ++i)
        ranks[i] = rank(c.differential(i));
    return ranks;
}

} // namespace detail

/// h_i = d_i - rank(differential_i) - rank(differential_{i+1}).
inline std::vector<std::size_t> homology_dims(const ChainComplex &c) {
    check_composites(c);
    auto ranks = detail::differential_ranks(c);
    std::vector<std::size_t> h(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        h[i] = c.dim(i) - ranks[i] - ranks[i + 1];
    if (detail::alternating_sum(h) != detail::alternating_sum(c.dims()))
        throw std::logic_error("Euler characteristic mismatch");
    return h;
}

struct PersistentHomology {
    std::vector<std::size_t> raw;   // homology of the inner complex
    std::vector<std::size_t> image; // image of H(inner) in H(outer)
};

/// Homology of a subcomplex `inner` of `outer` together with the image of
/// H_i(inner) -> H_i(outer). inclusion[i][k] is the outer index of inner
/// basis vector k in degree i. The image has dimension
///   rank[d'_{i+1} | incl_i] - rank d'_{i+1} - rank d_i,
/// which for coordinate inclusions is dim C_i + rank(d'_{i+1} without the
/// included rows) - rank d'_{i+1} - rank d_i.
inline PersistentHomology persistent_homology(const ChainComplex &inner, const ChainComplex &outer,
                                              const std::vector<std::vector<std::size_t>> &inclusion) {
    if (inner.size() != outer.size() || inclusion.size() != inner.size())
        throw Error(ErrorCode::InvalidArgument, "inner/outer complexes are not aligned");
    check_composites(inner);
    check_composites(outer);
    auto inner_ranks = detail::differential_ranks(inner);
    PersistentHomology out;
    out.raw.resize(inner.size());
    out.image.resize(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i)
        out.raw[i] = inner.dim(i) - inner_ranks[i] - inner_ranks[i + 1];
    if (detail::alternating_sum(out.raw) != detail::alternating_sum(inner.dims()))
        throw std::logic_error("Euler characteristic mismatch");
    for (std::size_t i = 0; i < inner.size(); ++i) {
        if (inclusion[i].size() != inner.dim(i))
            throw Error(ErrorCode::InvalidArgument, "inclusion size mismatch");
        if (out.raw[i] == 0)
            continue;
        std::size_t outer_rank = 0, outer_rank_dropped = 0;
        if (i + 1 < outer.size()) {
            const auto &d = outer.differential(i + 1);
            std::vector<bool> drop(d.rows(), false);
            for (std::size_t k : inclusion[i])
                drop.at(k) = true;
            outer_rank = rank(d);
            outer_rank_dropped = rank(d, &drop);
        }
        out.image[i] = inner.dim(i) + outer_rank_dropped - outer_rank - inner_ranks[i];
    }
    return out;
}

inline std::vector<std::size_t> image_homology_dims(const ChainComplex &inner, const ChainComplex &outer,
                                                    const std::vector<std::vector<std::size_t>> &inclusion) {
    return persistent_homology(inner, outer, inclusion).image;
}

} // namespace derham
