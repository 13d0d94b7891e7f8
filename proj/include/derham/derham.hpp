#pragma once

#include "derham/dmodrep.hpp"
#include "derham/error.hpp"
#include "derham/linalg.hpp"
#include "derham/weyl.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace derham {

/// Rows are operators D_i = sum_u F_iu d_u.
using Operators = std::vector<std::vector<Rational>>;

inline Operators standard_partials(std::size_t n) {
    Operators f(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        f[i][i] = 1;
    return f;
}

inline Operators operators_for(const AffineChange &t) {
    RationalMatrix m = operator_matrix(t);
    Operators f(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (const auto &[j, v] : m.row(i))
            f[i][j] = v;
    return f;
}

inline Operators operators_from_weyl(const std::vector<WeylElement> &ops) {
    Operators f;
    for (const auto &w : ops) {
        auto c = constant_partial_coefficients(w);
        if (!c)
            throw Error(ErrorCode::InvalidArgument, "operator is not a constant combination of partials");
        f.push_back(std::move(*c));
    }
    return f;
}

/// A double complex layout: blocks at Cech positions, each a module family.
/// A single family is the one-position case.
class Layout {
  public:
    struct Block {
        std::size_t position;
        FamilyPtr family;
        std::vector<std::size_t> subset;
    };

    static Layout single(FamilyPtr family) {
        Layout l;
        l.n_ = family->ambient();
        l.blocks_.push_back({0, std::move(family), {}});
        l.positions_ = 1;
        return l;
    }

    static Layout cech(std::shared_ptr<const CechSpec> spec) {
        Layout l;
        l.n_ = spec->ambient();
        l.positions_ = spec->positions();
        for (std::size_t p = 0; p < spec->positions(); ++p) {
            for (const auto &t : spec->subsets(p)) {
                l.index_.emplace(t, l.blocks_.size());
                l.blocks_.push_back({p, spec->family(t), t});
            }
        }
        l.cech_ = std::move(spec);
        return l;
    }

    std::size_t ambient() const { return n_; }
    std::size_t positions() const { return positions_; }
    const std::vector<Block> &blocks() const { return blocks_; }
    const CechSpec *cech_spec() const { return cech_.get(); }
    std::size_t block_of(const std::vector<std::size_t> &t) const { return index_.at(t); }

  private:
    std::size_t n_ = 0;
    std::size_t positions_ = 0;
    std::vector<Block> blocks_;
    std::shared_ptr<const CechSpec> cech_;
    std::map<std::vector<std::size_t>, std::size_t> index_;
};

/// An integer grading of the variables under which every family and every
/// operator is homogeneous; shift[i] is the weight lost by applying D_i.
struct Grading {
    std::string name;
    std::vector<int> weights;
    std::vector<long> shift;
};

inline std::vector<Grading> valid_gradings(const Layout &layout, const Operators &ops) {
    const std::size_t n = layout.ambient();
    std::vector<Grading> candidates;
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<int> w(n, 0);
        w[v] = 1;
        candidates.push_back({"x" + std::to_string(v + 1), w, {}});
    }
    candidates.push_back({"total", std::vector<int>(n, 1), {}});
    std::vector<Grading> out;
    for (auto &g : candidates) {
        bool ok = std::all_of(layout.blocks().begin(), layout.blocks().end(),
                              [&](const Layout::Block &b) { return b.family->homogeneous(g.weights); });
        for (std::size_t i = 0; i < ops.size() && ok; ++i) {
            std::optional<long> w;
            for (std::size_t u = 0; u < n; ++u) {
                if (is_zero(ops[i][u]))
                    continue;
                if (w && *w != g.weights[u])
                    ok = false;
                w = g.weights[u];
            }
            g.shift.push_back(w.value_or(0));
        }
        if (ok)
            out.push_back(std::move(g));
    }
    return out;
}

/// Basis vector of the total complex: block, Koszul subset (bitmask), label.
struct TotKey {
    std::size_t block;
    std::uint32_t subset;
    Label label;
    auto operator<=>(const TotKey &) const = default;
};

/// Total complex with cohomological grading m = position + |S|, where S is
/// the exterior (Koszul) subset. Differential: d_Cech + (-1)^p d_Koszul,
/// with Koszul sign (-1)^{#{s in S : s < i}}.
struct TotComplex {
    std::vector<std::vector<TotKey>> basis;
    std::vector<RationalMatrix> d; // d[m] : Tot^m -> Tot^{m+1}

    std::size_t top() const { return basis.size() - 1; }

    std::size_t size() const {
        std::size_t s = 0;
        for (const auto &b : basis)
            s += b.size();
        return s;
    }

    /// Homological view: C_i = Tot^{top - i}.
    ChainComplex homological() const {
        std::vector<std::size_t> dims;
        std::vector<RationalMatrix> diffs;
        for (std::size_t i = 0; i <= top(); ++i)
            dims.push_back(basis[top() - i].size());
        for (std::size_t k = 0; k < top(); ++k)
            diffs.push_back(d[top() - k - 1]);
        return ChainComplex(std::move(dims), std::move(diffs));
    }
};

struct AssemblyWindow {
    int base_level = 4;
    int span = 2;
};

namespace detail {

inline long strand_weight(const Layout &layout, const Grading &g, const TotKey &k) {
    long w = *layout.blocks()[k.block].family->weight(k.label, g.weights);
    for (std::size_t i = 0; i < g.shift.size(); ++i)
        if (k.subset & (1u << i))
            w += g.shift[i];
    return w;
}

} // namespace detail

/// Builds the total complex on the window, keeping only the strand of total
/// weight zero under every grading given (the other strands are acyclic).
inline TotComplex assemble(const Layout &layout, const Operators &ops, const AssemblyWindow &w,
                           const std::vector<Grading> &gradings) {
    const std::size_t m_ops = ops.size();
    if (m_ops > 30)
        throw Error(ErrorCode::InvalidArgument, "too many operators");
    for (const auto &row : ops)
        if (row.size() != layout.ambient())
            throw Error(ErrorCode::AmbientMismatch, "operator row has the wrong length");
    const std::size_t top = layout.positions() - 1 + m_ops;
    TotComplex tot;
    tot.basis.resize(top + 1);
    for (std::size_t b = 0; b < layout.blocks().size(); ++b) {
        const auto &block = layout.blocks()[b];
        std::map<int, std::vector<Label>> by_level;
        for (std::uint32_t s = 0; s < (1u << m_ops); ++s) {
            int q = std::popcount(s);
            int level = w.base_level + q;
            auto it = by_level.find(level);
            if (it == by_level.end())
                it = by_level.emplace(level, block.family->basis(level, w.span)).first;
            for (const auto &l : it->second) {
                TotKey key{b, s, l};
                bool keep = std::all_of(gradings.begin(), gradings.end(), [&](const Grading &g) {
                    return detail::strand_weight(layout, g, key) == 0;
                });
                if (keep)
                    tot.basis[block.position + static_cast<std::size_t>(q)].push_back(std::move(key));
            }
        }
    }
    for (auto &b : tot.basis)
        std::sort(b.begin(), b.end());

    const CechSpec *cech = layout.cech_spec();
    for (std::size_t m = 0; m < top; ++m) {
        std::map<TotKey, std::size_t> target;
        for (std::size_t k = 0; k < tot.basis[m + 1].size(); ++k)
            target.emplace(tot.basis[m + 1][k], k);
        RationalMatrix d(tot.basis[m + 1].size(), tot.basis[m].size());
        auto put = [&](std::size_t col, TotKey key, const Rational &v) {
            auto it = target.find(key);
            if (it == target.end())
                throw std::logic_error("differential leaves the window at " +
                                       layout.blocks()[key.block].family->describe(key.label));
            d.add_to(it->second, col, v);
        };
        for (std::size_t col = 0; col < tot.basis[m].size(); ++col) {
            const TotKey &key = tot.basis[m][col];
            const auto &block = layout.blocks()[key.block];
            if (cech) {
                for (std::size_t i = 0; i < cech->generators().size(); ++i) {
                    if (std::binary_search(block.subset.begin(), block.subset.end(), i))
                        continue;
                    auto grown = block.subset;
                    grown.insert(std::upper_bound(grown.begin(), grown.end(), i), i);
                    std::size_t nb = layout.block_of(grown);
                    int sign = CechSpec::sign(block.subset, i);
                    for (const auto &[l2, v] : cech->extend(block.subset, i, key.label))
                        put(col, {nb, key.subset, l2}, v * sign);
                }
            }
            const int psign = block.position % 2 == 0 ? 1 : -1;
            for (std::size_t i = 0; i < m_ops; ++i) {
                if (key.subset & (1u << i))
                    continue;
                int sign = psign * (std::popcount(key.subset & ((1u << i) - 1)) % 2 == 0 ? 1 : -1);
                LinComb image;
                for (std::size_t u = 0; u < layout.ambient(); ++u)
                    if (!is_zero(ops[i][u]))
                        add_scaled(image, block.family->partial(u, key.label), ops[i][u]);
                for (const auto &[l2, v] : image)
                    put(col, {key.block, key.subset | (1u << i), l2}, v * sign);
            }
        }
        tot.d.push_back(std::move(d));
    }
    return tot;
}

/// Throws NonCommuting when D_i D_j != D_j D_i on some basis vector of the window.
inline void check_commuting(const ModuleFamily &f, const Operators &ops, int level, int span) {
    auto apply = [&](std::size_t i, const LinComb &x) {
        LinComb out;
        for (const auto &[l, c] : x)
            for (std::size_t u = 0; u < f.ambient(); ++u)
                if (!is_zero(ops[i][u]))
                    add_scaled(out, f.partial(u, l), c * ops[i][u]);
        return out;
    };
    for (const auto &l : f.basis(level, span)) {
        LinComb unit{{l, Rational(1)}};
        for (std::size_t i = 0; i < ops.size(); ++i)
            for (std::size_t j = i + 1; j < ops.size(); ++j)
                if (apply(i, apply(j, unit)) != apply(j, apply(i, unit)))
                    throw Error(ErrorCode::NonCommuting,
                                "operators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                    " do not commute on " + f.describe(l));
    }
}

/// Koszul complex of commuting endomorphisms of K^dim (homological indexing).
inline ChainComplex koszul_complex(std::size_t dim, const std::vector<RationalMatrix> &ops) {
    for (const auto &a : ops)
        if (a.rows() != dim || a.cols() != dim)
            throw Error(ErrorCode::InvalidArgument, "operator has the wrong shape");
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j)
            if (!(ops[i] * ops[j] - ops[j] * ops[i]).is_zero_matrix())
                throw Error(ErrorCode::NonCommuting,
                            "operators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " do not commute");
    const std::size_t m = ops.size();
    std::vector<std::vector<std::uint32_t>> subsets(m + 1);
    for (std::uint32_t s = 0; s < (1u << m); ++s)
        subsets[static_cast<std::size_t>(std::popcount(s))].push_back(s);
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i <= m; ++i)
        dims.push_back(subsets[m - i].size() * dim);
    std::vector<RationalMatrix> diffs;
    for (std::size_t k = 0; k < m; ++k) {
        // C_{k+1} = exterior degree q = m-k-1  ->  C_k = degree q+1.
        const auto &src = subsets[m - k - 1];
        const auto &dst = subsets[m - k];
        std::map<std::uint32_t, std::size_t> pos;
        for (std::size_t t = 0; t < dst.size(); ++t)
            pos.emplace(dst[t], t);
        RationalMatrix d(dst.size() * dim, src.size() * dim);
        for (std::size_t a = 0; a < src.size(); ++a) {
            for (std::size_t i = 0; i < m; ++i) {
                if (src[a] & (1u << i))
                    continue;
                int sign = std::popcount(src[a] & ((1u << i) - 1)) % 2 == 0 ? 1 : -1;
                std::size_t b = pos.at(src[a] | (1u << i));
                for (std::size_t r = 0; r < dim; ++r)
                    for (const auto &[c, v] : ops[i].row(r))
                        d.add_to(b * dim + r, a * dim + c, v * sign);
            }
        }
        diffs.push_back(std::move(d));
    }
    return ChainComplex(std::move(dims), std::move(diffs));
}

enum class Strategy { Graded, Filtered };

inline const char *to_string(Strategy s) { return s == Strategy::Graded ? "graded" : "filtered"; }

struct StabilizationOptions {
    std::vector<int> caps{4, 6, 8, 10, 12};
    int degree_span = 2;
    std::size_t window = 2; // consecutive caps that must agree
    int gap = 2;            // outer window sits this many levels above the inner one
    Strategy strategy = Strategy::Graded;
};

inline std::vector<int> cap_schedule(int first, int last) {
    std::vector<int> caps;
    for (int k = first; k <= last; k += 2)
        caps.push_back(k);
    return caps;
}

/// One inner/outer window pair. Dims are cohomological degrees of the total complex.
struct WindowRecord {
    int k_cap = 0;
    int outer_k_cap = 0;
    int degree_span = 0;
    std::size_t inner_size = 0;
    std::size_t outer_size = 0;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> raw_dims;
    std::vector<std::size_t> widened_dims;

    bool span_stable() const { return dims == widened_dims; }
};

struct DeRhamResult {
    std::size_t n = 0;
    std::size_t c = 0;
    std::vector<std::size_t> homological_dims;
    std::vector<std::size_t> cohomological_dims;
    std::vector<std::size_t> tot_dims;
    std::vector<WindowRecord> window_trace;
    std::vector<std::string> gradings;
    Strategy strategy = Strategy::Graded;
    bool stabilized = false;
    bool concentrated = true; // total cohomology vanishes outside [c, c + n]
};

class NoStabilizationError : public Error {
  public:
    explicit NoStabilizationError(DeRhamResult partial)
        : Error(ErrorCode::NoStabilization, "dimensions did not settle within the cap schedule"),
          partial_(std::move(partial)) {}

    const DeRhamResult &partial() const { return partial_; }

  private:
    DeRhamResult partial_;
};

namespace detail {

struct WindowDims {
    std::vector<std::size_t> image;
    std::vector<std::size_t> raw;
    std::size_t inner_size;
    std::size_t outer_size;
};

inline std::vector<std::vector<std::size_t>> inclusion(const TotComplex &inner, const TotComplex &outer) {
    std::vector<std::vector<std::size_t>> inc(inner.top() + 1);
    for (std::size_t i = 0; i <= inner.top(); ++i) {
        const auto &ib = inner.basis[inner.top() - i];
        const auto &ob = outer.basis[outer.top() - i];
        for (const auto &key : ib) {
            auto it = std::lower_bound(ob.begin(), ob.end(), key);
            if (it == ob.end() || *it != key)
                throw std::logic_error("inner window is not contained in the outer window");
            inc[i].push_back(static_cast<std::size_t>(it - ob.begin()));
        }
    }
    return inc;
}

inline WindowDims window_dims(const Layout &layout, const Operators &ops, const std::vector<Grading> &gradings,
                              int inner_level, int outer_level, int span) {
    TotComplex inner = assemble(layout, ops, {inner_level, span}, gradings);
    TotComplex outer = assemble(layout, ops, {outer_level, span}, gradings);
    auto ph = persistent_homology(inner.homological(), outer.homological(), inclusion(inner, outer));
    std::reverse(ph.image.begin(), ph.image.end());
    std::reverse(ph.raw.begin(), ph.raw.end());
    return {ph.image, ph.raw, inner.size(), outer.size()};
}

inline void fill_dims(DeRhamResult &r, const std::vector<std::size_t> &tot) {
    r.tot_dims = tot;
    r.cohomological_dims.assign(r.n + 1, 0);
    r.concentrated = true;
    for (std::size_t m = 0; m < tot.size(); ++m) {
        if (m >= r.c && m <= r.c + r.n)
            r.cohomological_dims[m - r.c] = tot[m];
        else if (tot[m] != 0)
            r.concentrated = false;
    }
    r.homological_dims.assign(r.cohomological_dims.rbegin(), r.cohomological_dims.rend());
}

} // namespace detail

/// Grows the windows along the cap schedule until the last `window` caps
/// agree and each agrees with a window widened by two in degree span.
/// Never throws NoStabilization; check `stabilized`.
inline DeRhamResult derham_dims(const Layout &layout, const Operators &ops, std::size_t c,
                                const StabilizationOptions &opts) {
    if (opts.caps.empty() || opts.window == 0 || opts.gap <= 0 || opts.degree_span < 0)
        throw Error(ErrorCode::InvalidArgument, "bad stabilization options");
    if (ops.size() != layout.ambient())
        throw Error(ErrorCode::InvalidArgument, "need one operator per variable");
    for (const auto &b : layout.blocks())
        check_commuting(*b.family, ops, opts.caps.front(), opts.degree_span);
    DeRhamResult r;
    r.n = layout.ambient();
    r.c = c;
    r.strategy = opts.strategy;
    std::vector<Grading> gradings;
    if (opts.strategy == Strategy::Graded)
        gradings = valid_gradings(layout, ops);
    for (const auto &g : gradings)
        r.gradings.push_back(g.name);
    for (int cap : opts.caps) {
        WindowRecord rec;
        rec.k_cap = cap;
        rec.outer_k_cap = cap + opts.gap;
        rec.degree_span = opts.degree_span;
        auto base = detail::window_dims(layout, ops, gradings, cap, cap + opts.gap, opts.degree_span);
        auto wide = detail::window_dims(layout, ops, gradings, cap, cap + opts.gap, opts.degree_span + 2);
        rec.dims = base.image;
        rec.raw_dims = base.raw;
        rec.widened_dims = wide.image;
        rec.inner_size = base.inner_size;
        rec.outer_size = base.outer_size;
        r.window_trace.push_back(std::move(rec));
        const auto &trace = r.window_trace;
        if (trace.size() >= opts.window) {
            bool agree = true;
            for (std::size_t k = trace.size() - opts.window; k < trace.size(); ++k)
                agree = agree && trace[k].span_stable() && trace[k].dims == trace.back().dims;
            if (agree) {
                r.stabilized = true;
                break;
            }
        }
    }
    detail::fill_dims(r, r.window_trace.back().dims);
    return r;
}

inline DeRhamResult require_stabilized(DeRhamResult r) {
    if (!r.stabilized)
        throw NoStabilizationError(std::move(r));
    return r;
}

inline DeRhamResult stabilized_derham(FamilyPtr family, const Operators &ops, const StabilizationOptions &opts = {}) {
    return require_stabilized(derham_dims(Layout::single(std::move(family)), ops, 0, opts));
}

inline DeRhamResult stabilized_derham(FamilyPtr family, const StabilizationOptions &opts = {}) {
    auto n = family->ambient();
    return stabilized_derham(std::move(family), standard_partials(n), opts);
}

/// H^{m-c}(d; H^c_I(R)) read off the Cech-De Rham total complex.
inline DeRhamResult cech_derham_total(const CechSpec &spec, std::size_t c, const StabilizationOptions &opts = {},
                                      std::optional<Operators> ops = std::nullopt) {
    if (c > spec.generators().size())
        throw Error(ErrorCode::InvalidArgument, "c exceeds the number of Cech generators");
    auto layout = Layout::cech(std::make_shared<CechSpec>(spec));
    return require_stabilized(derham_dims(layout, ops ? *ops : standard_partials(spec.ambient()), c, opts));
}

enum class ModuleClass { E, R, HP, Rf, LocalCohomologyF };

inline const char *to_string(ModuleClass m) {
    switch (m) {
    case ModuleClass::E: return "E";
    case ModuleClass::R: return "R";
    case ModuleClass::HP: return "HP";
    case ModuleClass::Rf: return "Rf";
    case ModuleClass::LocalCohomologyF: return "H1f";
    }
    return "?";
}

inline ModuleClass module_class(const std::string &name) {
    for (auto m : {ModuleClass::E, ModuleClass::R, ModuleClass::HP, ModuleClass::Rf, ModuleClass::LocalCohomologyF})
        if (name == to_string(m))
            return m;
    throw Error(ErrorCode::UnknownClass, "no closed form for module class '" + name + "'");
}

/// nullopt entries match anything.
inline bool matches_pattern(const std::vector<std::optional<std::size_t>> &pattern,
                            const std::vector<std::size_t> &dims) {
    if (dims.size() != pattern.size())
        return false;
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (pattern[i] && *pattern[i] != dims[i])
            return false;
    return true;
}

/// Homological dims known in closed form; entries not fixed by the
/// formulas are nullopt.
struct ExpectedDims {
    std::vector<std::optional<std::size_t>> homological;

    bool matches(const std::vector<std::size_t> &h) const { return matches_pattern(homological, h); }
};

inline ExpectedDims closed_form(ModuleClass m, std::size_t n) {
    if (n == 0)
        throw Error(ErrorCode::InvalidArgument, "n must be positive");
    ExpectedDims e;
    switch (m) {
    case ModuleClass::E:
        e.homological.assign(n + 1, 0);
        e.homological[0] = 1;
        break;
    case ModuleClass::R:
        e.homological.assign(n + 1, 0);
        e.homological[n] = 1;
        break;
    case ModuleClass::HP:
        if (n < 2)
            throw Error(ErrorCode::InvalidArgument, "HP needs n >= 2");
        e.homological.assign(n + 1, 0);
        e.homological[1] = 1;
        break;
    case ModuleClass::Rf:
        e.homological.assign(n + 1, std::nullopt);
        e.homological[n] = 1;
        break;
    case ModuleClass::LocalCohomologyF:
        e.homological.assign(n + 1, std::nullopt);
        e.homological[n] = 0;
        break;
    }
    return e;
}

/// Both sides of the Koszul two-step sequence for splitting off operator r:
///   H^q = ker(D_r on H^q(D')) + coker(D_r on H^{q-1}(D')).
struct TwoStepReport {
    std::size_t split = 0;
    int k_cap = 0;
    std::vector<std::size_t> direct;     // cohomological H^q(D; M)
    std::vector<std::size_t> kernel_part;   // ker D_r on H^q(D')
    std::vector<std::size_t> cokernel_part; // coker D_r on H^{q-1}(D')
    bool holds = false;
};

namespace detail {

inline RationalMatrix embed_columns(const RationalMatrix &vectors, const std::vector<std::size_t> &rows_to,
                                    std::size_t target_rows) {
    RationalMatrix out(target_rows, vectors.cols());
    for (std::size_t r = 0; r < vectors.rows(); ++r)
        for (const auto &[c, v] : vectors.row(r))
            out.set(rows_to[r], c, v);
    return out;
}

inline std::size_t image_dim(const RationalMatrix &numerator, const RationalMatrix &denominator) {
    return rank(RationalMatrix::hstack(numerator, denominator)) - rank(denominator);
}

} // namespace detail

inline TwoStepReport koszul_two_step_check(FamilyPtr family, const Operators &ops, const StabilizationOptions &opts = {},
                                           std::optional<std::size_t> split = std::nullopt) {
    auto layout = Layout::single(family);
    auto settled = require_stabilized(derham_dims(layout, ops, 0, opts));
    TwoStepReport rep;
    rep.split = split.value_or(ops.size() - 1);
    if (rep.split >= ops.size())
        throw Error(ErrorCode::IndexOutOfRange, "split index out of range");
    rep.k_cap = settled.window_trace.back().k_cap;
    std::vector<Grading> gradings;
    if (opts.strategy == Strategy::Graded)
        gradings = valid_gradings(layout, ops);
    TotComplex inner = assemble(layout, ops, {rep.k_cap, opts.degree_span}, gradings);
    TotComplex outer = assemble(layout, ops, {rep.k_cap + opts.gap, opts.degree_span}, gradings);
    auto dims = detail::window_dims(layout, ops, gradings, rep.k_cap, rep.k_cap + opts.gap, opts.degree_span);
    rep.direct = dims.image;
    const std::uint32_t bit = 1u << rep.split;
    const std::size_t top = inner.top();

    // Split each degree into col0 (r not in S) and col1 (r in S).
    auto columns = [&](const TotComplex &t, std::size_t m, bool with_r) {
        std::vector<std::size_t> idx;
        if (m > t.top())
            return idx;
        for (std::size_t k = 0; k < t.basis[m].size(); ++k)
            if (((t.basis[m][k].subset & bit) != 0) == with_r)
                idx.push_back(k);
        return idx;
    };
    auto block = [&](const TotComplex &t, std::size_t m, bool from_r, bool to_r) {
        // d^m restricted to col(from) at m -> col(to) at m+1.
        auto cols = columns(t, m, from_r);
        if (m >= t.top())
            return RationalMatrix(0, cols.size());
        return t.d[m].select_rows(columns(t, m + 1, to_r)).select_cols(cols);
    };
    auto outer_positions = [&](std::size_t m, bool with_r) {
        // inner index within col -> outer index within col
        auto in_cols = columns(inner, m, with_r);
        auto out_cols = columns(outer, m, with_r);
        std::map<TotKey, std::size_t> where;
        for (std::size_t k = 0; k < out_cols.size(); ++k)
            where.emplace(outer.basis[m][out_cols[k]], k);
        std::vector<std::size_t> pos;
        for (std::size_t k : in_cols)
            pos.push_back(where.at(inner.basis[m][k]));
        return std::make_pair(pos, out_cols.size());
    };

    for (std::size_t m = 0; m <= top; ++m) {
        // ker(D_r) on H^m(D'): cycles z in col0 with D_r z a D'-boundary.
        auto col0 = columns(inner, m, false);
        auto [pos0, out0] = outer_positions(m, false);
        RationalMatrix kernel_full = m < top ? nullspace(inner.d[m]) : RationalMatrix::identity(inner.basis[m].size());
        RationalMatrix z = kernel_full.select_rows(col0);
        RationalMatrix num0 = detail::embed_columns(z, pos0, out0);
        RationalMatrix den0 = m > 0 ? block(outer, m - 1, false, false) : RationalMatrix(out0, 0);
        rep.kernel_part.push_back(detail::image_dim(num0, den0));

        // coker(D_r) on H^{m-1}(D'): D'-cycles in col1 modulo D'-boundaries and D_r of D'-cycles.
        auto [pos1, out1] = outer_positions(m, true);
        RationalMatrix c_inner = block(inner, m, true, true);
        RationalMatrix w = nullspace(c_inner);
        RationalMatrix num1 = detail::embed_columns(w, pos1, out1);
        RationalMatrix den1(out1, 0);
        if (m > 0) {
            RationalMatrix c_prev = block(outer, m - 1, true, true);
            RationalMatrix a_prev = block(outer, m - 1, false, false);
            RationalMatrix b_prev = block(outer, m - 1, false, true);
            den1 = RationalMatrix::hstack(c_prev, b_prev * nullspace(a_prev));
        }
        rep.cokernel_part.push_back(detail::image_dim(num1, den1));
    }
    rep.holds = true;
    for (std::size_t m = 0; m <= top; ++m)
        rep.holds = rep.holds && rep.direct[m] == rep.kernel_part[m] + rep.cokernel_part[m];
    return rep;
}

inline TwoStepReport koszul_two_step_check(FamilyPtr family, const StabilizationOptions &opts = {}) {
    auto n = family->ambient();
    return koszul_two_step_check(std::move(family), standard_partials(n), opts);
}

} // namespace derham
