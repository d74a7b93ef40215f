#include "bbinterp/cnf.hpp"
#include "bbinterp/errors.hpp"
#include "bbinterp/experiment.hpp"
#include "bbinterp/interpolant.hpp"
#include "bbinterp/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <random>

using namespace bbinterp;

namespace {

constexpr int kOk = 0, kVerifyFailed = 1, kUsage = 2;

// Thrown for inputs that are well-formed but unusable (missing options and the like).
struct UsageError : Error {
    using Error::Error;
};

template <typename F>
auto load(const std::string& path, F parse)
{
    Json j = read_json_file(path);
    try {
        return parse(j);
    }
    catch (const FormatError& e) {
        throw FormatError(path + "#" + (e.where.empty() ? "/" : e.where), e.detail);
    }
}

void emit(const std::string& out, const std::string& text)
{
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_text_file(out, text);
}

std::string point_text(const RatVector& p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i)
        s += (i ? ", " : "") + to_string(p[i]);
    return s + ")";
}

BranchingStrategy parse_strategy(const std::string& s)
{
    if (s == "variable")
        return BranchingStrategy::VariableBranching;
    if (s == "most-fractional")
        return BranchingStrategy::MostFractional;
    throw UsageError("unknown strategy '" + s + "'");
}

std::vector<int> half_split(int n, bool first)
{
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if ((v < n / 2) == first)
            out.push_back(v);
    return out;
}

// The system a tree refers to: --system, the full system of --instance, or the ILP of --cnf.
LinSystem target_system(const std::string& system, const std::string& instance, const std::string& cnf)
{
    int given = !system.empty() + !instance.empty() + !cnf.empty();
    if (given != 1)
        throw UsageError("give exactly one of --system, --instance, --cnf");
    if (!system.empty())
        return load(system, linsystem_from_json);
    if (!instance.empty())
        return load(instance, instance_from_json).full_system();
    return cnf_to_ilp(parse_dimacs(read_text_file(cnf)));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Branch-and-bound trees, conforming decompositions and monotone interpolants"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate instances and fixtures");
    std::string gen_family, gen_out, gen_side = "z2", gen_tree_out;
    int gen_r = 4, gen_k = 3, gen_n = 8, gen_m = 63;
    std::uint64_t seed = 1;
    gen->add_option("family", gen_family, "cc | witness | cnf | cross-polytope | fixture")->required();
    gen->add_option("--r", gen_r, "vertices of the clique-colouring graph")->capture_default_str();
    gen->add_option("--k", gen_k, "clique size, or clause width for cnf")->capture_default_str();
    gen->add_option("--n", gen_n, "CNF variables")->capture_default_str();
    gen->add_option("--m", gen_m, "CNF clause draws")->capture_default_str();
    gen->add_option("--side", gen_side, "witness side: z1 (colourable) or z2 (has a clique)")->capture_default_str();
    gen->add_option("--seed", seed, "64-bit seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output file (default stdout)");
    gen->add_option("--tree-out", gen_tree_out, "fixture: where to write its certified tree");

    // solve
    auto* solve = app.add_subcommand("solve", "Branch and bound with Farkas certificates at the leaves");
    std::string sys_path, inst_path, cnf_path, tree_path, out_path, strategy = "variable";
    int cap_depth = -1;
    long cap_enum = 1L << 22;
    solve->add_option("--system", sys_path, "LinSystem JSON");
    solve->add_option("--instance", inst_path, "interpolation instance JSON (solves its full system)");
    solve->add_option("--cnf", cnf_path, "DIMACS file (solves its ILP)");
    solve->add_option("--strategy", strategy, "variable | most-fractional")->capture_default_str();
    solve->add_option("--cap-depth", cap_depth, "depth cap, -1 for 2n")->capture_default_str();
    solve->add_option("--out", out_path, "tree JSON (default stdout)");

    // validate
    auto* validate = app.add_subcommand("validate", "Check a tree against a system");
    validate->add_option("--system", sys_path, "LinSystem JSON");
    validate->add_option("--instance", inst_path, "interpolation instance JSON");
    validate->add_option("--cnf", cnf_path, "DIMACS file");
    validate->add_option("--tree", tree_path, "tree JSON")->required();

    // decompose
    auto* decompose = app.add_subcommand("decompose", "Conforming quasi-certified tree for one factor");
    std::string z_path;
    long n1 = -1;
    decompose->add_option("--system", sys_path, "labelled product system JSON");
    decompose->add_option("--n1", n1, "variables of the first factor (with --system)");
    decompose->add_option("--instance", inst_path, "interpolation instance JSON (with --z)");
    decompose->add_option("--z", z_path, "0/1 assignment of the coupling variables");
    decompose->add_option("--tree", tree_path, "certified tree JSON")->required();
    decompose->add_option("--out", out_path, "quasi-certified tree JSON (default stdout)");

    // compile
    auto* compile = app.add_subcommand("compile", "Compile a certified tree into a monotone interpolant");
    compile->add_option("--instance", inst_path, "interpolation instance JSON")->required();
    compile->add_option("--tree", tree_path, "certified tree JSON")->required();
    compile->add_option("--out", out_path, "circuit JSON (default stdout)");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a circuit");
    std::string circ_path;
    std::vector<std::string> assignments;
    eval->add_option("--circuit", circ_path, "circuit JSON")->required();
    eval->add_option("--z", z_path, "0/1 array bound to z1, z2, ...");
    eval->add_option("--input", assignments, "name=value (rational), repeatable");

    // certify-cnf
    auto* certify = app.add_subcommand("certify-cnf", "Infeasibility certificate for a split CNF");
    std::vector<int> x0;
    int samples = 100;
    certify->add_option("--cnf", cnf_path, "DIMACS file")->required();
    certify->add_option("--x0", x0, "0-based variables of X0 (default: first half)");
    certify->add_option("--tree", tree_path, "tree for the CNF's ILP (default: solve)");
    certify->add_option("--samples", samples, "subsets to check when m > 10")->capture_default_str();
    certify->add_option("--seed", seed, "seed for sampled subsets")->capture_default_str();
    certify->add_option("--cap-depth", cap_depth, "depth cap when solving, -1 for 2n")->capture_default_str();
    certify->add_option("--out", out_path, "circuit JSON");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Size experiment over a parameter grid");
    ExperimentSpec spec;
    std::string family = "cc", exp_out = "report";
    std::vector<std::uint64_t> seeds{1};
    experiment->add_option("--family", family, "cc | cnf")->capture_default_str();
    experiment->add_option("--grid", spec.grid, "r values (cc) or n values (cnf)")->delimiter(',');
    experiment->add_option("--k", spec.k, "clique size or clause width")->capture_default_str();
    experiment->add_option("--m", spec.m, "CNF clause draws, 0 for floor((ln 2 + 0.1) 2^k n)")->capture_default_str();
    experiment->add_option("--seed", seeds, "seeds, comma separated")->delimiter(',')->capture_default_str();
    experiment->add_option("--witnesses", spec.witnesses, "witnesses per side (cc)")->capture_default_str();
    experiment->add_option("--samples", spec.sampled_subsets, "subsets per CNF when m > 10")->capture_default_str();
    experiment->add_option("--strategy", strategy, "variable | most-fractional")->capture_default_str();
    experiment->add_option("--cap-enum", cap_enum, "largest box the integer oracle enumerates")->capture_default_str();
    experiment->add_option("--cap-depth", cap_depth, "branch-and-bound depth cap, -1 for 2n")->capture_default_str();
    experiment->add_option("--out", exp_out, "output directory")->capture_default_str();
    experiment->add_flag("--stable", spec.stable, "write ms = 0 so reruns are byte-identical");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed()) {
            if (gen_family == "cc") {
                emit(gen_out, to_json(gen_cc_instance(gen_r, gen_k)).dump(2) + "\n");
            }
            else if (gen_family == "witness") {
                if (gen_side != "z1" && gen_side != "z2")
                    throw UsageError("--side must be z1 or z2");
                std::mt19937_64 rng(seed);
                auto w = gen_z_witness(gen_r, gen_k, gen_side == "z1" ? ZSide::Z1 : ZSide::Z2, rng);
                Json j;
                j["z"] = w.z;
                j["point"] = w.point;
                j["side"] = gen_side;
                j["seed"] = seed;
                emit(gen_out, j.dump(2) + "\n");
            }
            else if (gen_family == "cnf") {
                auto r = gen_random_kcnf(gen_n, gen_k, gen_m, seed);
                emit(gen_out, "c seed " + std::to_string(seed) + " draws " + std::to_string(r.draws.size()) + "\n" +
                        to_dimacs(r.cnf));
            }
            else if (gen_family == "cross-polytope" || gen_family == "fixture") {
                auto fx = cross_polytope_fixture();
                emit(gen_out, to_json(fx.product.combined).dump(2) + "\n");
                if (gen_family == "fixture") {
                    if (gen_tree_out.empty())
                        throw UsageError("fixture needs --tree-out");
                    write_text_file(gen_tree_out, to_json(fx.tree).dump(2) + "\n");
                }
            }
            else
                throw UsageError("unknown family '" + gen_family + "'");
            return kOk;
        }

        if (solve->parsed()) {
            LinSystem sys = target_system(sys_path, inst_path, cnf_path);
            auto tree = solve_bb(sys, parse_strategy(strategy), cap_depth);
            emit(out_path, to_json(tree).dump(2) + "\n");
            std::cerr << "leaves: " << tree_size(tree.tree) << "\n";
            return kOk;
        }

        if (validate->parsed()) {
            LinSystem sys = target_system(sys_path, inst_path, cnf_path);
            CertifiedTree tree = load(tree_path, tree_from_json);
            if (auto defect = find_feasible_leaf(tree.tree, sys)) {
                std::cerr << "invalid tree: leaf " << defect->leaf << " is LP-feasible, witness "
                          << point_text(defect->witness) << "\n";
                return kVerifyFailed;
            }
            bool has_certs = false;
            for (int leaf : tree.tree.leaves())
                has_certs = has_certs || !tree.cert(leaf).empty();
            if (has_certs && !check_certified_tree(tree, sys)) {
                std::cerr << "valid tree, but some leaf certificate is not a Farkas certificate\n";
                return kVerifyFailed;
            }
            std::cout << "valid: " << tree_size(tree.tree) << " leaves" << (has_certs ? ", certificates checked" : "")
                      << "\n";
            return kOk;
        }

        if (decompose->parsed()) {
            CertifiedTree tree = load(tree_path, tree_from_json);
            ProductSystem prod;
            if (!inst_path.empty()) {
                if (z_path.empty())
                    throw UsageError("--instance needs --z");
                auto inst = load(inst_path, instance_from_json);
                auto z = load(z_path, z_from_json);
                if (z.size() != inst.n3)
                    throw UsageError("--z has " + std::to_string(z.size()) + " entries, expected " +
                        std::to_string(inst.n3));
                prod = inst.product_at(z);
                tree = instantiate_tree(tree, inst, z);
            }
            else if (!sys_path.empty()) {
                if (n1 < 0)
                    throw UsageError("--system needs --n1");
                prod = ProductSystem::from_combined(load(sys_path, linsystem_from_json), static_cast<std::size_t>(n1));
            }
            else
                throw UsageError("give --system with --n1, or --instance with --z");
            if (!check_certified_tree(tree, prod.combined)) {
                std::cerr << "tree is not certified for the product\n";
                return kVerifyFailed;
            }
            auto d = decompose_conforming(tree, prod, Box::unit(prod.n1()), Box::unit(prod.n2()));
            const LinSystem& side_sys = d.side == Side::P ? prod.p : prod.q;
            emit(out_path, to_json(d.result, side_sys).dump(2) + "\n");
            std::cerr << "side: " << (d.side == Side::P ? "P" : "Q") << "\n";
            return check_conforming(tree.tree, prod, d) ? kOk : kVerifyFailed;
        }

        if (compile->parsed()) {
            auto inst = load(inst_path, instance_from_json);
            CertifiedTree tree = load(tree_path, tree_from_json);
            if (!check_certified_tree(tree, inst.full_system())) {
                std::cerr << "tree is not certified against the instance\n";
                return kVerifyFailed;
            }
            Circuit c = compile_interpolant(inst, tree);
            emit(out_path, to_json(c).dump(2) + "\n");
            std::cerr << "gates: " << circuit_size(c) << ", log2 bound: "
                      << size_bound_log2(inst.num_vars(), tree_size(tree.tree)) << "\n";
            return kOk;
        }

        if (eval->parsed()) {
            Circuit c = load(circ_path, circuit_from_json);
            Assignment a;
            if (!z_path.empty()) {
                auto z = load(z_path, z_from_json);
                for (std::size_t j = 0; j < z.size(); ++j)
                    a[z_input(j)] = z[j];
            }
            for (const auto& s : assignments) {
                auto eq = s.find('=');
                if (eq == std::string::npos)
                    throw UsageError("--input expects name=value, got '" + s + "'");
                try {
                    a[s.substr(0, eq)] = parse_rational(s.substr(eq + 1));
                }
                catch (const std::invalid_argument&) {
                    throw UsageError("bad rational in '" + s + "'");
                }
            }
            try {
                std::cout << to_string(eval_circuit_ext(c, a)) << "\n";
            }
            catch (const UnboundVariable& e) {
                throw UsageError(e.what());
            }
            return kOk;
        }

        if (certify->parsed()) {
            CNF cnf = parse_dimacs(read_text_file(cnf_path));
            if (x0.empty())
                x0 = half_split(cnf.n, true);
            std::vector<int> x1;
            for (int v = 0; v < cnf.n; ++v)
                if (std::find(x0.begin(), x0.end(), v) == x0.end())
                    x1.push_back(v);
            auto split = split_cnf(cnf, x0, x1);
            BBTree tree = tree_path.empty() ? solve_bb(cnf_to_ilp(cnf), BranchingStrategy::VariableBranching, cap_depth).tree
                                            : load(tree_path, tree_from_json).tree;
            Circuit c = certificate_from_tree(split, tree);
            if (!out_path.empty())
                write_text_file(out_path, to_json(c).dump(2) + "\n");
            long checked = 0, failed = 0;
            auto check = [&](const std::vector<int>& a) {
                ++checked;
                failed += !check_certificate(c, split, a);
            };
            if (split.m() <= 10)
                for (const auto& a : all_z(split.m()))
                    check(a);
            else {
                std::mt19937_64 rng(seed);
                for (int t = 0; t < samples; ++t) {
                    std::vector<int> a(split.m());
                    for (auto& v : a)
                        v = static_cast<int>(rng() & 1U);
                    check(a);
                }
            }
            std::cout << "gates: " << circuit_size(c) << ", subsets checked: " << checked << ", failures: " << failed
                      << "\n";
            return failed == 0 ? kOk : kVerifyFailed;
        }

        if (experiment->parsed()) {
            if (family == "cc")
                spec.family = Family::CliqueColouring;
            else if (family == "cnf")
                spec.family = Family::RandomCnf;
            else
                throw UsageError("unknown family '" + family + "'");
            spec.seeds = seeds;
            spec.strategy = parse_strategy(strategy);
            spec.cap_enum = cap_enum;
            spec.cap_depth = cap_depth;
            try {
                spec.validate();
            }
            catch (const Error& e) {
                throw UsageError(e.what());
            }
            Report r = run_experiment(spec);
            std::filesystem::create_directories(exp_out);
            write_text_file(exp_out + "/report.csv", report_csv(r));
            write_text_file(exp_out + "/report.svg", report_svg(r));
            bool all = true;
            for (const auto& row : r.rows) {
                if (!row.error.empty())
                    std::cerr << row.instance_id << ": " << row.error << "\n";
                all = all && row.separated;
            }
            std::cout << report_csv(r);
            return all ? kOk : kVerifyFailed;
        }
    }
    catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    catch (const FormatError& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return kUsage;
    }
    catch (const FeasibleLeaf& e) {
        std::cerr << "invalid tree: leaf " << e.leaf << " is LP-feasible, witness " << point_text(e.witness) << "\n";
        return kVerifyFailed;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerifyFailed;
    }
    return kUsage;
}
