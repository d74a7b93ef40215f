#include "bbinterp/polytope.hpp"
#include "bbinterp/errors.hpp"
#include "bbinterp/lp.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace bbinterp {

std::size_t matrix_rank(std::vector<RatVector> rows)
{
    if (rows.empty())
        return 0;
    const std::size_t n = rows[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0)
            ++pivot;
        if (pivot == rows.size())
            continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t i = rank + 1; i < rows.size(); ++i) {
            if (rows[i][col] == 0)
                continue;
            Rational factor = rows[i][col] / rows[rank][col];
            for (std::size_t j = col; j < n; ++j)
                rows[i][j] -= factor * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

namespace {

    // Unique solution of the square system M x = r, if any.
    std::optional<RatVector> solve_square(std::vector<RatVector> m, RatVector r)
    {
        const std::size_t n = r.size();
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t pivot = col;
            while (pivot < n && m[pivot][col] == 0)
                ++pivot;
            if (pivot == n)
                return std::nullopt;
            std::swap(m[col], m[pivot]);
            std::swap(r[col], r[pivot]);
            for (std::size_t i = 0; i < n; ++i) {
                if (i == col || m[i][col] == 0)
                    continue;
                Rational factor = m[i][col] / m[col][col];
                for (std::size_t j = col; j < n; ++j)
                    m[i][j] -= factor * m[col][j];
                r[i] -= factor * r[col];
            }
        }
        RatVector x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = r[i] / m[i][i];
        return x;
    }

    Rational dot(const RatVector& a, const RatVector& x)
    {
        Rational s = 0;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[j] != 0)
                s += a[j] * x[j];
        return s;
    }

    bool bounded(const LinSystem& sys)
    {
        const std::size_t n = sys.num_vars();
        for (std::size_t j = 0; j < n; ++j) {
            for (int sign : {1, -1}) {
                LinSystem cone(n);
                for (std::size_t i = 0; i < sys.num_rows(); ++i)
                    cone.add_row(sys.row(i), 0);
                IntVector e(n, 0);
                e[j] = -sign;
                cone.add_row(std::move(e), -1);
                if (! is_infeasible(lp_solve(cone)))
                    return false;
            }
        }
        return true;
    }

}  // namespace

Polytope Polytope::from_system(const LinSystem& sys)
{
    Polytope p;
    p.n_ = sys.num_vars();
    for (std::size_t i = 0; i < sys.num_rows(); ++i) {
        RatVector a(p.n_);
        for (std::size_t j = 0; j < p.n_; ++j)
            a[j] = sys.row(i)[j];
        p.a_.push_back(std::move(a));
        p.b_.push_back(Rational(sys.rhs(i)));
    }
    if (is_infeasible(lp_solve(sys)))
        return p;
    if (! bounded(sys))
        throw Error("polytope construction needs a bounded system");

    const std::size_t m = p.a_.size(), n = p.n_;
    if (n == 0) {
        p.vertices_.push_back(Vertex{});
        p.recompute_tight(p.vertices_.back());
        return p;
    }
    std::map<RatVector, bool> seen;
    std::vector<std::size_t> pick(n);
    for (std::size_t k = 0; k < n; ++k)
        pick[k] = k;
    while (true) {
        std::vector<RatVector> mat;
        RatVector rhs;
        for (auto i : pick) {
            mat.push_back(p.a_[i]);
            rhs.push_back(p.b_[i]);
        }
        if (auto x = solve_square(std::move(mat), std::move(rhs))) {
            bool inside = true;
            for (std::size_t i = 0; i < m && inside; ++i)
                inside = dot(p.a_[i], *x) <= p.b_[i];
            if (inside && seen.emplace(*x, true).second) {
                Vertex v{*x, {}};
                p.recompute_tight(v);
                p.vertices_.push_back(std::move(v));
            }
        }
        // next n-subset in lexicographic order
        std::size_t k = n;
        while (k > 0 && pick[k - 1] == m - n + k - 1)
            --k;
        if (k == 0)
            break;
        ++pick[k - 1];
        for (std::size_t t = k; t < n; ++t)
            pick[t] = pick[t - 1] + 1;
    }
    if (p.vertices_.empty())
        throw InvariantViolation("feasible bounded system without vertices");
    return p;
}

void Polytope::recompute_tight(Vertex& v) const
{
    v.tight.clear();
    for (std::size_t i = 0; i < a_.size(); ++i)
        if (dot(a_[i], v.x) == b_[i])
            v.tight.push_back(static_cast<int>(i));
}

Polytope Polytope::cut(const RatVector& a, const Rational& b) const
{
    Polytope out;
    out.n_ = n_;
    out.a_ = a_;
    out.b_ = b_;
    out.a_.push_back(a);
    out.b_.push_back(b);
    const int new_row = static_cast<int>(a_.size());

    std::vector<Rational> value(vertices_.size());
    std::vector<std::size_t> inside, outside;
    for (std::size_t k = 0; k < vertices_.size(); ++k) {
        value[k] = dot(a, vertices_[k].x);
        if (value[k] <= b) {
            Vertex v = vertices_[k];
            if (value[k] == b)
                v.tight.push_back(new_row);
            out.vertices_.push_back(std::move(v));
            if (value[k] < b)
                inside.push_back(k);
        }
        else
            outside.push_back(k);
    }
    if (outside.empty())
        return out;

    std::map<RatVector, bool> seen;
    for (const auto& v : out.vertices_)
        seen.emplace(v.x, true);
    for (auto u : inside) {
        for (auto w : outside) {
            std::vector<int> common;
            std::set_intersection(vertices_[u].tight.begin(), vertices_[u].tight.end(), vertices_[w].tight.begin(),
                vertices_[w].tight.end(), std::back_inserter(common));
            if (common.size() + 1 < n_)
                continue;
            std::vector<RatVector> rows;
            for (int i : common)
                rows.push_back(a_[static_cast<std::size_t>(i)]);
            if (matrix_rank(std::move(rows)) + 1 != n_)
                continue;
            Rational t = (b - value[u]) / (value[w] - value[u]);
            RatVector x(n_);
            for (std::size_t j = 0; j < n_; ++j)
                x[j] = vertices_[u].x[j] + t * (vertices_[w].x[j] - vertices_[u].x[j]);
            if (! seen.emplace(x, true).second)
                continue;
            Vertex v{std::move(x), {}};
            out.recompute_tight(v);
            out.vertices_.push_back(std::move(v));
        }
    }
    return out;
}

std::pair<Rational, Rational> Polytope::range(const RatVector& a) const
{
    if (vertices_.empty())
        throw Error("range of an empty polytope");
    Rational lo = dot(a, vertices_[0].x), hi = lo;
    for (std::size_t k = 1; k < vertices_.size(); ++k) {
        Rational v = dot(a, vertices_[k].x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

std::vector<RatVector> Polytope::key() const
{
    std::vector<RatVector> k;
    k.reserve(vertices_.size());
    for (const auto& v : vertices_)
        k.push_back(v.x);
    std::sort(k.begin(), k.end());
    return k;
}

}  // namespace bbinterp
