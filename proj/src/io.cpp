#include "bbinterp/io.hpp"
#include "bbinterp/errors.hpp"

#include <fstream>
#include <sstream>

namespace bbinterp {

FormatError::FormatError(std::string at, const std::string& what)
    : Error((at.empty() ? std::string("/") : at) + ": " + what), where(std::move(at)), detail(what)
{
}

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const Integer& z)
{
    if (fits_int64(z))
        return static_cast<std::int64_t>(z.get_si());
    return to_string(z);
}

namespace {

    Json ints(const IntVector& v)
    {
        Json a = Json::array();
        for (const auto& x : v)
            a.push_back(to_json(x));
        return a;
    }

    // Read access that remembers where it is for error messages.
    struct At {
        const Json& j;
        std::string path;

        At operator[](const std::string& key) const
        {
            if (! j.is_object())
                throw FormatError(path, "expected an object");
            auto it = j.find(key);
            if (it == j.end())
                throw FormatError(path + "/" + key, "missing field");
            return At{*it, path + "/" + key};
        }
        At operator[](std::size_t i) const { return At{j.at(i), path + "/" + std::to_string(i)}; }
        bool has(const std::string& key) const { return j.is_object() && j.contains(key); }

        const Json& array() const
        {
            if (! j.is_array())
                throw FormatError(path, "expected an array");
            return j;
        }
        std::size_t size() const { return array().size(); }

        Integer integer() const
        {
            if (j.is_number_integer())
                return Integer(std::to_string(j.get<std::int64_t>()));
            if (j.is_string()) {
                Integer z;
                if (z.set_str(j.get<std::string>(), 10) == 0)
                    return z;
            }
            throw FormatError(path, "expected an integer");
        }
        Rational rational() const
        {
            if (j.is_number_integer())
                return Rational(integer());
            if (j.is_string()) {
                try {
                    return parse_rational(j.get<std::string>());
                }
                catch (const std::invalid_argument&) {
                }
            }
            throw FormatError(path, "expected a rational \"p/q\"");
        }
        long small() const
        {
            Integer z = integer();
            if (! z.fits_slong_p())
                throw FormatError(path, "integer out of range");
            return z.get_si();
        }
        std::string string() const
        {
            if (! j.is_string())
                throw FormatError(path, "expected a string");
            return j.get<std::string>();
        }
        bool boolean() const
        {
            if (! j.is_boolean())
                throw FormatError(path, "expected a boolean");
            return j.get<bool>();
        }
        IntVector ints() const
        {
            IntVector out;
            for (std::size_t i = 0; i < size(); ++i)
                out.push_back((*this)[i].integer());
            return out;
        }
        std::vector<IntVector> matrix(std::size_t cols) const
        {
            std::vector<IntVector> out;
            for (std::size_t i = 0; i < size(); ++i) {
                out.push_back((*this)[i].ints());
                if (out.back().size() != cols)
                    throw FormatError((*this)[i].path, "expected " + std::to_string(cols) + " entries");
            }
            return out;
        }
    };

    void tree_node_to_json(const BBTree& t, int id, const std::vector<FarkasCertificate>* certs, Json& out)
    {
        if (t.is_leaf(id)) {
            out["leaf"] = true;
            if (certs && static_cast<std::size_t>(id) < certs->size())
                out["cert"] = ints(certs->at(static_cast<std::size_t>(id)));
            return;
        }
        const auto& d = t.disjunction(id);
        Json node;
        node["alpha"] = ints(d.alpha);
        node["delta"] = to_json(d.delta);
        tree_node_to_json(t, t.left(id), certs, node["left"]);
        tree_node_to_json(t, t.right(id), certs, node["right"]);
        out["node"] = std::move(node);
    }

    void tree_node_from_json(const At& j, BBTree& t, int id, std::vector<FarkasCertificate>& certs,
        std::size_t& dim)
    {
        if (j.has("leaf")) {
            if (! j["leaf"].boolean())
                throw FormatError(j.path + "/leaf", "must be true");
            if (certs.size() <= static_cast<std::size_t>(id))
                certs.resize(static_cast<std::size_t>(id) + 1);
            if (j.has("cert"))
                certs[static_cast<std::size_t>(id)] = j["cert"].ints();
            return;
        }
        At n = j["node"];
        IntVector alpha = n["alpha"].ints();
        if (dim == 0)
            dim = alpha.size();
        else if (alpha.size() != dim)
            throw FormatError(n.path + "/alpha", "dimension differs from the root's");
        int l = t.split(id, Disjunction{std::move(alpha), n["delta"].integer()});
        tree_node_from_json(n["left"], t, l, certs, dim);
        tree_node_from_json(n["right"], t, l + 1, certs, dim);
    }

    void add_quasi_cases(const QuasiCertifiedTree& q, const LinSystem& sys, int id, Json& out)
    {
        if (q.tree.is_leaf(id)) {
            out["quasi_case"] = quasi_case(q, id, sys);
            return;
        }
        add_quasi_cases(q, sys, q.tree.left(id), out["node"]["left"]);
        add_quasi_cases(q, sys, q.tree.right(id), out["node"]["right"]);
    }

    GateFn gatefn_at(const At& j)
    {
        Template t;
        try {
            t = parse_template(j["template"].string());
        }
        catch (const Error& e) {
            throw FormatError(j.path + "/template", e.what());
        }
        Expr e{t, {}, {}, nullptr};
        if (j.has("params"))
            for (std::size_t i = 0; i < j["params"].size(); ++i)
                e.params.push_back(j["params"][i].rational());
        if (j.has("args"))
            for (std::size_t i = 0; i < j["args"].size(); ++i)
                e.args.push_back(gatefn_at(j["args"][i]));
        if (j.has("inner"))
            e.inner = gatefn_at(j["inner"]);
        auto f = std::make_shared<const Expr>(std::move(e));
        if (! admissible(f))
            throw FormatError(j.path, "gate function is malformed or not monotone: " + describe(f));
        return f;
    }

}  // namespace

Json to_json(const LinSystem& sys)
{
    Json j;
    j["n"] = sys.num_vars();
    j["m"] = sys.num_rows();
    Json a = Json::array(), b = Json::array(), labels = Json::array();
    for (std::size_t i = 0; i < sys.num_rows(); ++i) {
        a.push_back(ints(sys.row(i)));
        b.push_back(to_json(sys.rhs(i)));
        labels.push_back(to_string(sys.label(i)));
    }
    j["A"] = std::move(a);
    j["b"] = std::move(b);
    j["labels"] = std::move(labels);
    return j;
}

LinSystem linsystem_from_json(const Json& doc)
{
    At j{doc, ""};
    const long n = j["n"].small();
    const long m = j["m"].small();
    if (n < 0 || m < 0)
        throw FormatError("/n", "negative dimension");
    auto rows = j["A"].matrix(static_cast<std::size_t>(n));
    IntVector b = j["b"].ints();
    if (rows.size() != static_cast<std::size_t>(m))
        throw FormatError("/A", "expected " + std::to_string(m) + " rows");
    if (b.size() != rows.size())
        throw FormatError("/b", "expected " + std::to_string(m) + " entries");
    std::vector<RowLabel> labels(rows.size(), RowLabel::original_p());
    if (j.has("labels")) {
        At l = j["labels"];
        if (l.size() != rows.size())
            throw FormatError("/labels", "expected " + std::to_string(m) + " entries");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            try {
                labels[i] = parse_row_label(l[i].string());
            }
            catch (const std::invalid_argument& e) {
                throw FormatError(l[i].path, e.what());
            }
        }
    }
    LinSystem sys(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < rows.size(); ++i)
        sys.add_row(std::move(rows[i]), b[i], labels[i]);
    return sys;
}

Json to_json(const BBTree& tree)
{
    Json j;
    tree_node_to_json(tree, tree.root(), nullptr, j);
    return j;
}

Json to_json(const CertifiedTree& tree)
{
    Json j;
    tree_node_to_json(tree.tree, tree.tree.root(), &tree.certs, j);
    return j;
}

Json to_json(const QuasiCertifiedTree& tree, const LinSystem& sys)
{
    Json j;
    tree_node_to_json(tree.tree, tree.tree.root(), &tree.certs, j);
    add_quasi_cases(tree, sys, tree.tree.root(), j);
    Json box = Json::array();
    for (const auto& [lo, hi] : tree.box.bounds)
        box.push_back(Json::array({to_json(lo), to_json(hi)}));
    j["box"] = std::move(box);
    return j;
}

CertifiedTree tree_from_json(const Json& doc)
{
    CertifiedTree t;
    std::size_t dim = 0;
    tree_node_from_json(At{doc, ""}, t.tree, t.tree.root(), t.certs, dim);
    t.certs.resize(t.tree.num_nodes());
    return t;
}

QuasiCertifiedTree quasi_tree_from_json(const Json& doc)
{
    CertifiedTree t = tree_from_json(doc);
    QuasiCertifiedTree q{std::move(t.tree), std::move(t.certs), Box{}};
    At box = At{doc, ""}["box"];
    for (std::size_t i = 0; i < box.size(); ++i) {
        At pair = box[i];
        if (pair.size() != 2)
            throw FormatError(pair.path, "expected [lo, hi]");
        Rational lo = pair[0].rational(), hi = pair[1].rational();
        if (lo > hi)
            throw FormatError(pair.path, "lo exceeds hi");
        q.box.bounds.emplace_back(lo, hi);
    }
    return q;
}

Json to_json(const GateFn& f)
{
    Json j;
    j["template"] = template_name(f->kind);
    if (! f->params.empty()) {
        Json p = Json::array();
        for (const auto& r : f->params)
            p.push_back(to_json(r));
        j["params"] = std::move(p);
    }
    if (! f->args.empty()) {
        Json a = Json::array();
        for (const auto& g : f->args)
            a.push_back(to_json(g));
        j["args"] = std::move(a);
    }
    if (f->inner)
        j["inner"] = to_json(f->inner);
    return j;
}

GateFn gatefn_from_json(const Json& j) { return gatefn_at(At{j, ""}); }

Json to_json(const Circuit& c)
{
    Json gates = Json::array();
    for (std::size_t id = 0; id < c.gates.size(); ++id) {
        const auto& g = c.gates[id];
        Json e;
        e["id"] = id;
        if (g.kind == Gate::Kind::Input) {
            e["kind"] = "input";
            e["var"] = g.var;
        }
        else {
            e["kind"] = "apply";
            e["fn"] = to_json(g.fn);
            e["preds"] = Json::array({g.pred1, g.pred2});
        }
        gates.push_back(std::move(e));
    }
    Json j;
    j["gates"] = std::move(gates);
    j["output"] = c.output;
    return j;
}

Circuit circuit_from_json(const Json& doc)
{
    At j{doc, ""};
    Circuit c;
    At gates = j["gates"];
    for (std::size_t i = 0; i < gates.size(); ++i) {
        At g = gates[i];
        if (g.has("id") && g["id"].small() != static_cast<long>(i))
            throw FormatError(g.path + "/id", "gate ids must be 0, 1, 2, ... in order");
        std::string kind = g["kind"].string();
        if (kind == "input")
            c.gates.push_back(Gate{Gate::Kind::Input, g["var"].string(), nullptr, -1, -1});
        else if (kind == "apply") {
            At preds = g["preds"];
            if (preds.size() != 2)
                throw FormatError(preds.path, "expected two predecessors");
            long p1 = preds[0].small(), p2 = preds[1].small();
            if (p1 < 0 || p2 < 0 || p1 >= static_cast<long>(i) || p2 >= static_cast<long>(i))
                throw FormatError(preds.path, "predecessors must be earlier gates");
            c.gates.push_back(Gate{Gate::Kind::Apply, {}, gatefn_at(g["fn"]), static_cast<int>(p1),
                static_cast<int>(p2)});
        }
        else
            throw FormatError(g.path + "/kind", "expected \"input\" or \"apply\"");
    }
    long out = j["output"].small();
    if (out < 0 || out >= static_cast<long>(c.gates.size()))
        throw FormatError("/output", "not a gate id");
    c.output = static_cast<int>(out);
    try {
        c.validate();
    }
    catch (const InvariantViolation& e) {
        throw FormatError("/gates", e.what());
    }
    return c;
}

Json to_json(const InterpolationInstance& inst)
{
    Json j;
    j["id"] = inst.id;
    j["n1"] = inst.n1;
    j["n2"] = inst.n2;
    j["n3"] = inst.n3;
    auto mat = [](const std::vector<IntVector>& rows) {
        Json a = Json::array();
        for (const auto& r : rows)
            a.push_back(ints(r));
        return a;
    };
    j["A"] = mat(inst.a_rows);
    j["C"] = mat(inst.c_rows);
    j["a"] = ints(inst.a_rhs);
    j["B"] = mat(inst.b_rows);
    j["D"] = mat(inst.d_rows);
    j["b"] = ints(inst.b_rhs);
    return j;
}

InterpolationInstance instance_from_json(const Json& doc)
{
    At j{doc, ""};
    InterpolationInstance inst;
    if (j.has("id"))
        inst.id = j["id"].string();
    auto dim = [&](const char* key) {
        long v = j[key].small();
        if (v < 0)
            throw FormatError(std::string("/") + key, "negative dimension");
        return static_cast<std::size_t>(v);
    };
    inst.n1 = dim("n1");
    inst.n2 = dim("n2");
    inst.n3 = dim("n3");
    inst.a_rows = j["A"].matrix(inst.n1);
    inst.c_rows = j["C"].matrix(inst.n3);
    inst.a_rhs = j["a"].ints();
    inst.b_rows = j["B"].matrix(inst.n2);
    inst.d_rows = j["D"].matrix(inst.n3);
    inst.b_rhs = j["b"].ints();
    if (inst.c_rows.size() != inst.a_rows.size() || inst.a_rhs.size() != inst.a_rows.size())
        throw FormatError("/C", "A, C and a must have the same number of rows");
    if (inst.d_rows.size() != inst.b_rows.size() || inst.b_rhs.size() != inst.b_rows.size())
        throw FormatError("/D", "B, D and b must have the same number of rows");
    try {
        inst.validate();
    }
    catch (const Error& e) {
        throw FormatError("", e.what());
    }
    return inst;
}

std::vector<int> z_from_json(const Json& doc)
{
    At j{doc, ""};
    At arr = doc.is_object() ? j["z"] : j;
    std::vector<int> z;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        long v = arr[i].small();
        if (v != 0 && v != 1)
            throw FormatError(arr[i].path, "expected 0 or 1");
        z.push_back(static_cast<int>(v));
    }
    return z;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (! out)
        throw Error("cannot write '" + path + "'");
    out << text;
    if (! out)
        throw Error("write to '" + path + "' failed");
}

Json read_json_file(const std::string& path)
{
    try {
        return Json::parse(read_text_file(path));
    }
    catch (const Json::parse_error& e) {
        throw FormatError("", path + ": " + e.what());
    }
}

}  // namespace bbinterp
