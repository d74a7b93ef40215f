#include "bbinterp/experiment.hpp"
#include "bbinterp/errors.hpp"
#include "bbinterp/interpolant.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace bbinterp {

void ExperimentSpec::validate() const
{
    if (grid.empty())
        throw Error("experiment grid is empty");
    if (seeds.empty())
        throw Error("no seeds given");
    if (cap_enum <= 0 || cap_depth == 0 || cap_depth < -1)
        throw Error("caps must be positive");
    if (witnesses <= 0 || sampled_subsets <= 0 || k <= 0 || m < 0)
        throw Error("counts must be positive");
    for (int g : grid)
        if (g <= 0)
            throw Error("grid values must be positive");
}

namespace {

    using Clock = std::chrono::steady_clock;

    bool oracle_feasible(const LinSystem& sys, long cap)
    {
        return integer_feasible_oracle(sys, unit_box(sys.num_vars()), cap).has_value();
    }

    ReportRow clique_colouring_point(const ExperimentSpec& spec, int r, std::uint64_t seed)
    {
        ReportRow row;
        const int k = std::min(spec.k, r);
        row.instance_id = "cc_r" + std::to_string(r) + "_k" + std::to_string(k) + "_s" + std::to_string(seed);
        auto inst = gen_cc_instance(r, k);
        row.n = inst.num_vars();
        row.n3 = inst.n3;
        auto tree = solve_bb(inst.full_system(), spec.strategy, spec.cap_depth);
        row.tree_size = tree_size(tree.tree);
        Circuit c = compile_interpolant(inst, tree);
        row.circuit_size = circuit_size(c);
        row.bound_log2 = size_bound_log2(row.n, row.tree_size);

        std::mt19937_64 rng(seed);
        bool ok = true;
        for (ZSide side : {ZSide::Z1, ZSide::Z2})
            for (int w = 0; w < spec.witnesses && ok; ++w) {
                auto z = gen_z_witness(r, k, side, rng).z;
                auto prod = inst.product_at(z);
                bool p_feasible = oracle_feasible(prod.p, spec.cap_enum);
                bool q_feasible = oracle_feasible(prod.q, spec.cap_enum);
                int expect = side == ZSide::Z2 ? 1 : 0;
                ok = (side == ZSide::Z1 ? p_feasible : q_feasible) && eval_interpolant(c, z) == expect;
            }
        row.separated = ok;
        return row;
    }

    ReportRow cnf_point(const ExperimentSpec& spec, int n, std::uint64_t seed)
    {
        ReportRow row;
        const int m = spec.m > 0 ? spec.m
                                 : static_cast<int>(std::floor((std::log(2.0) + 0.1) * std::ldexp(1.0, spec.k) * n));
        // First unsatisfiable draw among seed, seed + 1, ...
        RandomCnf draw;
        bool found = false;
        std::uint64_t used = seed;
        for (int attempt = 0; attempt < 64 && ! found; ++attempt) {
            used = seed + static_cast<std::uint64_t>(attempt);
            draw = gen_random_kcnf(n, spec.k, m, used);
            found = ! satisfiable(draw.cnf);
        }
        row.instance_id = "cnf_n" + std::to_string(n) + "_k" + std::to_string(spec.k) + "_m" + std::to_string(m) +
            "_s" + std::to_string(used);
        if (! found)
            throw Error("no unsatisfiable draw within 64 seeds");
        std::vector<int> x0, x1;
        for (int v = 0; v < n; ++v)
            (v < n / 2 ? x0 : x1).push_back(v);
        auto split = split_cnf(draw.cnf, x0, x1);
        auto inst = split.instance();
        row.n = inst.num_vars();
        row.n3 = inst.n3;
        auto tree = solve_bb(cnf_to_ilp(draw.cnf), spec.strategy, spec.cap_depth);
        row.tree_size = tree_size(tree.tree);
        Circuit c = certificate_from_tree(split, tree.tree);
        row.circuit_size = circuit_size(c);
        row.bound_log2 = size_bound_log2(row.n, row.tree_size);

        bool ok = true;
        if (split.m() <= 10) {
            for (const auto& a : all_z(split.m()))
                ok = ok && check_certificate(c, split, a);
        }
        else {
            std::mt19937_64 rng(used);
            for (int t = 0; t < spec.sampled_subsets && ok; ++t) {
                std::vector<int> a(split.m());
                for (auto& v : a)
                    v = static_cast<int>(rng() & 1U);
                ok = check_certificate(c, split, a);
            }
        }
        row.separated = ok;
        return row;
    }

    std::string format_bound(double log2_bound)
    {
        char buf[64];
        if (log2_bound < 1000)
            std::snprintf(buf, sizeof buf, "%.6e", std::exp2(log2_bound));
        else
            std::snprintf(buf, sizeof buf, "2^%.4f", log2_bound);
        return buf;
    }

}  // namespace

Report run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    Report report;
    for (int g : spec.grid)
        for (std::uint64_t seed : spec.seeds) {
            auto start = Clock::now();
            ReportRow row;
            try {
                row = spec.family == Family::CliqueColouring ? clique_colouring_point(spec, g, seed)
                                                             : cnf_point(spec, g, seed);
            }
            catch (const std::exception& e) {
                row.instance_id = (spec.family == Family::CliqueColouring ? "cc_r" : "cnf_n") + std::to_string(g) +
                    "_s" + std::to_string(seed);
                row.separated = false;
                row.error = e.what();
            }
            auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
            row.ms = spec.stable ? 0 : static_cast<long>(elapsed.count());
            report.rows.push_back(std::move(row));
        }
    return report;
}

std::string report_csv(const Report& r)
{
    std::ostringstream out;
    out << "instance_id,n,n3,tree_size,circuit_size,thm3_bound,separated,ms\n";
    for (const auto& row : r.rows)
        out << row.instance_id << ',' << row.n << ',' << row.n3 << ',' << row.tree_size << ',' << row.circuit_size
            << ',' << (row.error.empty() ? format_bound(row.bound_log2) : "") << ','
            << (row.separated ? "true" : "false") << ',' << row.ms << '\n';
    return out.str();
}

std::string report_svg(const Report& r)
{
    // log2 of tree size, circuit size and bound against the total variable count.
    const double w = 640, h = 400, left = 60, right = 20, top = 30, bottom = 50;
    std::vector<const ReportRow*> rows;
    for (const auto& row : r.rows)
        if (row.error.empty())
            rows.push_back(&row);
    double xmax = 1, ymax = 1;
    for (const auto* row : rows) {
        xmax = std::max(xmax, static_cast<double>(row->n));
        ymax = std::max(ymax, row->bound_log2);
    }
    auto px = [&](double x) { return left + (w - left - right) * x / xmax; };
    auto py = [&](double y) { return h - bottom - (h - top - bottom) * y / ymax; };

    std::ostringstream out;
    char buf[160];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left, h - bottom,
        w - right, h - bottom);
    out << buf;
    std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left, top, left,
        h - bottom);
    out << buf;
    out << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"13\">n (variables)</text>\n";
    out << "<text x=\"16\" y=\"" << h / 2 << "\" font-size=\"13\" transform=\"rotate(-90 16 " << h / 2
        << ")\" text-anchor=\"middle\">log2 size</text>\n";
    for (int t = 0; t <= 4; ++t) {
        double yv = ymax * t / 4, xv = xmax * t / 4;
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"end\">%.0f</text>\n",
            left - 4, py(yv) + 3, yv);
        out << buf;
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"middle\">%.0f</text>\n",
            px(xv), h - bottom + 14, xv);
        out << buf;
    }
    struct Series {
        const char* name;
        const char* colour;
        double (*value)(const ReportRow&);
    };
    const Series series[] = {
        {"tree size", "#1f77b4", [](const ReportRow& row) { return std::log2(std::max<double>(1, row.tree_size)); }},
        {"circuit size", "#d62728", [](const ReportRow& row) { return std::log2(std::max<double>(1, row.circuit_size)); }},
        {"size bound", "#7f7f7f", [](const ReportRow& row) { return row.bound_log2; }},
    };
    int legend = 0;
    for (const auto& s : series) {
        for (const auto* row : rows) {
            std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n",
                px(static_cast<double>(row->n)), py(s.value(*row)), s.colour);
            out << buf;
        }
        std::snprintf(buf, sizeof buf,
            "<circle cx=\"%g\" cy=\"%d\" r=\"4\" fill=\"%s\"/><text x=\"%g\" y=\"%d\" font-size=\"11\">%s</text>\n",
            w - 130, 44 + 14 * legend, s.colour, w - 122, 48 + 14 * legend, s.name);
        out << buf;
        ++legend;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace bbinterp
