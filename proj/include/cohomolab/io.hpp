#pragma once

// JSON reading and writing of complexes, covers, cochain data, charted paths
// and surfaces. Writers emit a canonical form; parsing it and writing again
// gives the same bytes.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cechgeom.hpp"
#include "spectral.hpp"

namespace cohomolab::io {

using Json = nlohmann::ordered_json;

namespace detail {
inline bool is_leaf(const Json& j)
{
    if (!j.is_array()) return !j.is_object();
    for (auto& x : j)
        if (x.is_array() || x.is_object()) return false;
    return true;
}

// Objects are indented; arrays of scalars stay on one line.
inline void write(std::ostream& os, const Json& j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    if (is_leaf(j)) {
        os << j.dump();
    } else if (j.is_array()) {
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            os << pad;
            write(os, j[i], indent + 2);
            os << (i + 1 < j.size() ? ",\n" : "\n");
        }
        os << std::string(static_cast<std::size_t>(indent), ' ') << "]";
    } else if (j.empty()) {
        os << "{}";
    } else {
        os << "{\n";
        std::size_t i = 0;
        for (auto& [k, v] : j.items()) {
            os << pad << Json(k).dump() << ": ";
            write(os, v, indent + 2);
            os << (++i < j.size() ? ",\n" : "\n");
        }
        os << std::string(static_cast<std::size_t>(indent), ' ') << "}";
    }
}
} // namespace detail

inline std::string dump(const Json& j)
{
    std::ostringstream os;
    detail::write(os, j, 0);
    os << "\n";
    return os.str();
}

inline Json parse_text(const std::string& text, const std::string& origin = "input")
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

inline Json read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Field access with path diagnostics.

inline const Json& field(const Json& j, const std::string& key, const std::string& where)
{
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing field \"" + key + "\"");
    return *it;
}

inline long long as_int(const Json& j, const std::string& where)
{
    if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
    return j.get<long long>();
}

inline double as_number(const Json& j, const std::string& where)
{
    if (!j.is_number()) throw ParseError(where + ": expected a number");
    return j.get<double>();
}

inline std::vector<int> int_list(const Json& j, const std::string& where)
{
    if (!j.is_array()) throw ParseError(where + ": expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(static_cast<int>(as_int(j[i], where + "[" + std::to_string(i) + "]")));
    return out;
}

inline std::string join(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

inline std::vector<std::string> split(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<int> parse_int_key(const std::string& key, const std::string& where)
{
    std::vector<int> out;
    for (auto& part : split(key)) {
        try {
            std::size_t used = 0;
            int v = std::stoi(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ParseError(where + ": bad integer key \"" + key + "\"");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Simplicial complexes: {"vertices": n, "simplices": [[v0,...], ...]}

inline std::vector<Simplex> maximal_simplices(const SimplicialComplex& K)
{
    std::vector<Simplex> out;
    for (int k = 0; k <= K.dimension(); ++k)
        for (auto& s : K.simplices(k)) {
            bool maximal = true;
            for (auto& t : K.simplices(k + 1))
                if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
                    maximal = false;
                    break;
                }
            if (maximal) out.push_back(s);
        }
    return out;
}

inline std::vector<Simplex> simplex_list(const Json& j, std::size_t vertex_count, const std::string& where)
{
    if (!j.is_array()) throw ParseError(where + ": expected an array of simplices");
    std::vector<Simplex> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        Simplex s = int_list(j[i], w);
        if (s.empty()) throw ParseError(w + ": empty simplex");
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (s[k] < 0 || static_cast<std::size_t>(s[k]) >= vertex_count)
                throw ParseError(w + ": vertex " + std::to_string(s[k]) + " out of range");
            if (k && s[k] <= s[k - 1]) throw ParseError(w + ": vertex list must be strictly increasing");
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline SimplicialComplex complex_from_json(const Json& j, const std::string& where = "complex")
{
    long long n = as_int(field(j, "vertices", where), where + ".vertices");
    if (n < 0) throw ParseError(where + ".vertices: negative vertex count");
    auto list = simplex_list(field(j, "simplices", where), static_cast<std::size_t>(n), where + ".simplices");
    return SimplicialComplex::from_maximal(static_cast<std::size_t>(n), list);
}

inline Json simplices_to_json(const std::vector<Simplex>& list)
{
    Json a = Json::array();
    for (auto& s : list) a.push_back(s);
    return a;
}

inline Json complex_to_json(const SimplicialComplex& K)
{
    Json j;
    j["vertices"] = K.vertex_count();
    j["simplices"] = simplices_to_json(maximal_simplices(K));
    return j;
}

// ---------------------------------------------------------------------------
// Integer matrices (row-major) and filtered complexes:
// {"ranks": {n: r}, "differentials": {n: matrix}, "filtration": {n: [p...]}, "length": l}

inline IntMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const std::string& where)
{
    if (!j.is_array() || j.size() != rows)
        throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
    IntMatrix M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != cols)
            throw ParseError(w + ": expected " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) M(i, c) = Integer(as_int(j[i][c], w));
    }
    return M;
}

inline Json matrix_to_json(const IntMatrix& M)
{
    Json a = Json::array();
    for (std::size_t i = 0; i < M.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t c = 0; c < M.cols(); ++c) row.push_back(static_cast<long long>(M(i, c)));
        a.push_back(row);
    }
    return a;
}

inline FilteredComplex filtered_from_json(const Json& j, const std::string& where = "filtered")
{
    const Json& rk = field(j, "ranks", where);
    if (!rk.is_object() || rk.empty()) throw ParseError(where + ".ranks: expected a non-empty object");
    std::map<int, std::size_t> ranks;
    for (auto& [k, v] : rk.items()) {
        auto deg = parse_int_key(k, where + ".ranks");
        if (deg.size() != 1) throw ParseError(where + ".ranks: degree key \"" + k + "\"");
        long long r = as_int(v, where + ".ranks." + k);
        if (r < 0) throw ParseError(where + ".ranks." + k + ": negative rank");
        ranks[deg[0]] = static_cast<std::size_t>(r);
    }
    const int lo = ranks.begin()->first, hi = ranks.rbegin()->first;
    std::vector<std::size_t> rv;
    for (int n = lo; n <= hi; ++n) rv.push_back(ranks.count(n) ? ranks[n] : 0);
    auto rank = [&](int n) { return n >= lo && n <= hi ? rv[static_cast<std::size_t>(n - lo)] : 0; };

    const Json& dj = field(j, "differentials", where);
    const Json& fj = field(j, "filtration", where);
    std::vector<IntMatrix> diff;
    std::vector<std::vector<int>> filt;
    for (int n = lo; n <= hi; ++n) {
        const std::string key = std::to_string(n);
        if (dj.contains(key))
            diff.push_back(matrix_from_json(dj[key], rank(n + 1), rank(n), where + ".differentials." + key));
        else
            diff.emplace_back(rank(n + 1), rank(n));
        if (fj.contains(key)) {
            filt.push_back(int_list(fj[key], where + ".filtration." + key));
        } else if (rank(n) == 0) {
            filt.emplace_back();
        } else {
            throw ParseError(where + ".filtration: missing degree " + key);
        }
    }
    std::optional<int> length;
    if (j.contains("length")) length = static_cast<int>(as_int(j["length"], where + ".length"));
    return FilteredComplex(ChainComplex(true, lo, rv, diff), filt, length);
}

inline Json filtered_to_json(const FilteredComplex& F)
{
    const ChainComplex& C = F.complex();
    Json j;
    Json r = Json::object(), d = Json::object(), f = Json::object();
    for (int n = C.lo; n <= C.hi(); ++n) {
        const std::string key = std::to_string(n);
        r[key] = C.rank(n);
        IntMatrix M = C.outgoing(n);
        if (M.rows() && M.cols()) d[key] = matrix_to_json(M);
        f[key] = F.filtration()[static_cast<std::size_t>(n - C.lo)];
    }
    j["ranks"] = r;
    j["differentials"] = d;
    j["filtration"] = f;
    j["length"] = F.length();
    return j;
}

// {"ranks": {"p,q": r}, "d1": {"p,q": matrix}, "d2": {"p,q": matrix}}
inline DoubleComplex double_from_json(const Json& j, const std::string& where = "double")
{
    DoubleComplex D;
    const Json& rk = field(j, "ranks", where);
    if (!rk.is_object()) throw ParseError(where + ".ranks: expected an object");
    for (auto& [k, v] : rk.items()) {
        auto b = parse_int_key(k, where + ".ranks");
        if (b.size() != 2) throw ParseError(where + ".ranks: bidegree key \"" + k + "\"");
        long long r = as_int(v, where + ".ranks." + k);
        if (r < 0) throw ParseError(where + ".ranks." + k + ": negative rank");
        D.ranks[{b[0], b[1]}] = static_cast<std::size_t>(r);
    }
    auto read = [&](const char* name, int dp, int dq, std::map<Bidegree, IntMatrix>& out) {
        if (!j.contains(name)) return;
        for (auto& [k, v] : j[name].items()) {
            auto b = parse_int_key(k, where + "." + name);
            if (b.size() != 2) throw ParseError(where + "." + name + ": bidegree key \"" + k + "\"");
            out[{b[0], b[1]}] = matrix_from_json(v, D.rank(b[0] + dp, b[1] + dq), D.rank(b[0], b[1]),
                                                 where + "." + name + "." + k);
        }
    };
    read("d1", 1, 0, D.d1);
    read("d2", 0, 1, D.d2);
    return D;
}

inline Json double_to_json(const DoubleComplex& D)
{
    Json j;
    auto key = [](const Bidegree& b) { return std::to_string(b.first) + "," + std::to_string(b.second); };
    Json r = Json::object(), a = Json::object(), b = Json::object();
    for (auto& [k, v] : D.ranks) r[key(k)] = v;
    for (auto& [k, m] : D.d1) a[key(k)] = matrix_to_json(m);
    for (auto& [k, m] : D.d2) b[key(k)] = matrix_to_json(m);
    j["ranks"] = r;
    j["d1"] = a;
    j["d2"] = b;
    return j;
}

// ---------------------------------------------------------------------------
// Covers and cochain data. Charts are named; cochain keys are comma separated
// chart names (in chart order) mapping to comma separated sorted simplices.

inline Json cover_to_json(const Cover& U)
{
    Json c = Json::object();
    for (std::size_t a = 0; a < U.size(); ++a) c[U.names()[a]] = simplices_to_json(maximal_simplices(U.chart(int(a))));
    return c;
}

inline Cover cover_from_json(const Json& j, const std::string& where = "data")
{
    SimplicialComplex base = complex_from_json(field(j, "base", where), where + ".base");
    const Json& cj = field(j, "charts", where);
    if (!cj.is_object() || cj.empty()) throw ParseError(where + ".charts: expected a non-empty object");
    std::vector<SimplicialComplex> charts;
    std::vector<std::string> names;
    for (auto& [name, list] : cj.items()) {
        if (name.empty() || name.find(',') != std::string::npos)
            throw ParseError(where + ".charts: chart names must be non-empty and comma free");
        auto s = simplex_list(list, base.vertex_count(), where + ".charts." + name);
        charts.push_back(SimplicialComplex::from_maximal(base.vertex_count(), s));
        names.push_back(name);
    }
    return Cover(base, charts, names);
}

inline int chart_index(const Cover& U, const std::string& name, const std::string& where)
{
    for (std::size_t a = 0; a < U.size(); ++a)
        if (U.names()[a] == name) return static_cast<int>(a);
    throw ParseError(where + ": unknown chart \"" + name + "\"");
}

inline CDCochain cochain_from_json(const Cover& U, const Json& j, int p, int q, const std::string& where)
{
    CDCochain c(p, q);
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (auto& [tk, inner] : j.items()) {
        std::vector<int> tuple;
        for (auto& n : split(tk)) tuple.push_back(chart_index(U, n, where));
        if (static_cast<int>(tuple.size()) != p + 1)
            throw ParseError(where + ": key \"" + tk + "\" should name " + std::to_string(p + 1) + " charts");
        for (std::size_t i = 1; i < tuple.size(); ++i)
            if (tuple[i] <= tuple[i - 1]) throw ParseError(where + ": chart tuple \"" + tk + "\" is not sorted");
        if (!inner.is_object()) throw ParseError(where + "." + tk + ": expected an object");
        for (auto& [sk, v] : inner.items()) {
            Simplex s = parse_int_key(sk, where + "." + tk);
            if (static_cast<int>(s.size()) != q + 1)
                throw ParseError(where + "." + tk + ": key \"" + sk + "\" is not a " + std::to_string(q) + "-simplex");
            for (std::size_t i = 1; i < s.size(); ++i)
                if (s[i] <= s[i - 1]) throw ParseError(where + "." + tk + ": simplex \"" + sk + "\" is not sorted");
            if (!U.in_all(tuple, s))
                throw ParseError(where + "." + tk + "." + sk + ": simplex outside the chart intersection");
            c.set(tuple, s, as_number(v, where + "." + tk + "." + sk));
        }
    }
    return c;
}

inline Json cochain_to_json(const Cover& U, const CDCochain& c)
{
    Json j = Json::object();
    for (auto& [tuple, f] : c.values) {
        Json inner = Json::object();
        for (auto& [s, v] : f)
            if (v != 0.0) inner[join(s)] = v;
        if (inner.empty()) continue;
        std::string key;
        for (std::size_t i = 0; i < tuple.size(); ++i) key += (i ? "," : "") + U.names()[static_cast<std::size_t>(tuple[i])];
        j[key] = inner;
    }
    return j;
}

// Bidegrees of the named cochain fields of a data file.
inline std::pair<int, int> field_bidegree(const std::string& name, bool gerbe)
{
    if (name == "rho") return gerbe ? std::pair{2, 0} : std::pair{1, 0};
    if (name == "A") return {0, 1};
    if (name == "Lambda") return {1, 1};
    if (name == "B") return {0, 2};
    if (name == "trivialization") return {0, 0};
    if (name == "h") return {1, 0};
    throw ParseError("unknown cochain field \"" + name + "\"");
}

// A data file: base, charts and named cochains.
struct CechData {
    Cover cover;
    std::map<std::string, CDCochain> cochains;
    bool gerbe = false;

    bool has(const std::string& n) const { return cochains.count(n) > 0; }
    const CDCochain& get(const std::string& n) const
    {
        auto it = cochains.find(n);
        if (it == cochains.end()) throw ParseError("data file has no \"" + n + "\" field");
        return it->second;
    }
    LineData line() const { return {get("rho"), get("A")}; }
    GerbeData gerbe_data() const { return {get("rho"), get("Lambda"), get("B")}; }
};

inline const std::vector<std::string>& cochain_fields()
{
    static const std::vector<std::string> f{"rho", "A", "Lambda", "B", "trivialization", "h"};
    return f;
}

inline CechData data_from_json(const Json& j, const std::string& where = "data")
{
    CechData d;
    d.cover = cover_from_json(j, where);
    d.gerbe = j.contains("Lambda") || j.contains("B");
    for (auto& name : cochain_fields()) {
        auto [p, q] = field_bidegree(name, d.gerbe);
        if (j.contains(name))
            d.cochains.emplace(name, cochain_from_json(d.cover, j[name], p, q, where + "." + name));
        else if (name == "rho" || (name == "A" && !d.gerbe) || (d.gerbe && (name == "Lambda" || name == "B")))
            d.cochains.emplace(name, CDCochain(p, q));
    }
    return d;
}

inline Json data_to_json(const CechData& d)
{
    Json j;
    j["base"] = complex_to_json(d.cover.base());
    j["charts"] = cover_to_json(d.cover);
    for (auto& name : cochain_fields())
        if (d.has(name)) j[name] = cochain_to_json(d.cover, d.get(name));
    return j;
}

// ---------------------------------------------------------------------------
// Paths and surfaces:
// {"loop": {"vertices": [...], "charts": [names], "closed": true},
//  "surface": {"triangles": [[a,b,c], ...], "charts": [names]}}

inline std::vector<int> chart_list(const Cover& U, const Json& j, const std::string& where)
{
    if (!j.is_array()) throw ParseError(where + ": expected an array of chart names");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) throw ParseError(where + "[" + std::to_string(i) + "]: expected a chart name");
        out.push_back(chart_index(U, j[i].get<std::string>(), where));
    }
    return out;
}

inline Json chart_names(const Cover& U, const std::vector<int>& charts)
{
    Json a = Json::array();
    for (int c : charts) a.push_back(U.names()[static_cast<std::size_t>(c)]);
    return a;
}

inline ChartedPath path_from_json(const Cover& U, const Json& j, const std::string& where = "loop")
{
    ChartedPath g;
    g.vertices = int_list(field(j, "vertices", where), where + ".vertices");
    g.charts = chart_list(U, field(j, "charts", where), where + ".charts");
    if (j.contains("closed")) {
        if (!j["closed"].is_boolean()) throw ParseError(where + ".closed: expected true or false");
        g.closed = j["closed"].get<bool>();
    }
    return g;
}

inline Json path_to_json(const Cover& U, const ChartedPath& g)
{
    Json j;
    j["vertices"] = g.vertices;
    j["charts"] = chart_names(U, g.charts);
    j["closed"] = g.closed;
    return j;
}

inline ChartedSurface surface_from_json(const Cover& U, const Json& j, const std::string& where = "surface")
{
    const Json& tj = field(j, "triangles", where);
    if (!tj.is_array()) throw ParseError(where + ".triangles: expected an array");
    std::vector<std::array<int, 3>> tri;
    for (std::size_t i = 0; i < tj.size(); ++i) {
        auto t = int_list(tj[i], where + ".triangles[" + std::to_string(i) + "]");
        if (t.size() != 3) throw ParseError(where + ".triangles[" + std::to_string(i) + "]: expected three vertices");
        tri.push_back({t[0], t[1], t[2]});
    }
    return ChartedSurface(tri, chart_list(U, field(j, "charts", where), where + ".charts"));
}

inline Json surface_to_json(const Cover& U, const ChartedSurface& S)
{
    Json j;
    Json t = Json::array();
    for (auto& x : S.triangles()) t.push_back(std::vector<int>{x[0], x[1], x[2]});
    j["triangles"] = t;
    j["charts"] = chart_names(U, S.charts());
    return j;
}

} // namespace cohomolab::io
