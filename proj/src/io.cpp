#include "gwp/io.hpp"

#include "gwp/error.hpp"

#include <algorithm>
#include <fstream>

namespace gwp::io {

namespace {

/// Runs f, turning JSON type and key errors into ParseError with a context prefix.
template <class F>
auto guarded(const std::string& what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

const Json& field(const Json& j, const char* key, const std::string& what) {
    if (!j.is_object()) throw ParseError(what + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(what + ": missing field '" + std::string(key) + "'");
    return *it;
}

GaussianRational number(const Json& j) {
    if (j.is_number_integer()) return GaussianRational(j.get<long>());
    if (!j.is_string()) throw ParseError("expected an exact number string, got " + j.dump());
    return GaussianRational::parse(j.get<std::string>());
}

Rational rational(const Json& j) {
    const GaussianRational g = number(j);
    if (sgn(g.im()) != 0) throw ParseError("expected a rational number, got " + j.dump());
    return g.re();
}

long integer(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ParseError(what + ": expected an integer, got " + j.dump());
    return j.get<long>();
}

std::vector<long> integers(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + ": expected an array of integers");
    std::vector<long> out;
    for (const auto& x : j) out.push_back(integer(x, what));
    return out;
}

std::vector<GaussianRational> numbers(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + ": expected an array of numbers");
    std::vector<GaussianRational> out;
    for (const auto& x : j) out.push_back(number(x));
    return out;
}

Json poly_to_json(const Poly& p) {
    Json out = Json::array();
    for (const auto& c : p.coeffs()) out.push_back(c.to_string());
    return out;
}

std::string strip_spaces(std::string s) {
    std::erase_if(s, [](char c) { return c == ' '; });
    return s;
}

std::optional<long> optional_trunc(const Json& j) {
    auto it = j.find("trunc");
    if (it == j.end() || it->is_null()) return std::nullopt;
    return integer(*it, "trunc");
}

std::string monomial_to_string(const std::vector<Descendent>& m, const GradedRing& ring) {
    if (m.empty()) return "1";
    std::string out;
    for (const auto& d : m)
        out += (out.empty() ? "" : "*") + ("tau_" + std::to_string(d.level) + "(" + ring.name(d.basis) + ")");
    return out;
}

}  // namespace

Json document() {
    Json j = Json::object();
    j["format"] = kFormat;
    return j;
}

void check_format(const Json& j) {
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    auto it = j.find("format");
    if (it == j.end()) throw ParseError("document has no \"format\" field (expected \"gwp/1\")");
    if (!it->is_string() || it->get<std::string>() != kFormat)
        throw ParseError("unsupported document format " + it->dump() + " (expected \"gwp/1\")");
}

Json read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    out << dump(j);
}

Json series_to_json(const HalfSeries& x) {
    Json j = Json::object();
    j["var"] = to_string(x.var());
    j["trunc"] = x.trunc() ? Json(*x.trunc()) : Json(nullptr);
    Json c = Json::object();
    for (const auto& [e, v] : x.coeffs()) c[std::to_string(e)] = v.to_string();
    j["coeffs"] = std::move(c);
    return j;
}

HalfSeries series_from_json(const Json& j) {
    return guarded("series", [&] {
        const Var var = parse_var(field(j, "var", "series").get<std::string>());
        const Json& cj = field(j, "coeffs", "series");
        if (!cj.is_object()) throw ParseError("series: \"coeffs\" must map exponents to numbers");
        HalfSeries::Coeffs c;
        for (const auto& [k, v] : cj.items()) {
            long e = 0;
            try {
                std::size_t used = 0;
                e = std::stol(k, &used);
                if (used != k.size()) throw std::invalid_argument(k);
            } catch (const std::exception&) {
                throw ParseError("series: exponent '" + k + "' is not an integer");
            }
            c.emplace(e, number(v));
        }
        return HalfSeries(var, std::move(c), optional_trunc(j));
    });
}

Json ratfun_to_json(const RationalFunction& r) {
    Json j = Json::object();
    j["var"] = to_string(r.var());
    j["num"] = poly_to_json(r.num());
    j["den"] = poly_to_json(r.den());
    return j;
}

RationalFunction ratfun_from_json(const Json& j) {
    return guarded("rational function", [&] {
        const Var var = parse_var(field(j, "var", "rational function").get<std::string>());
        if (var == Var::u) throw ParseError("rational functions are in q or s, not u");
        Poly num(numbers(field(j, "num", "rational function"), "num"));
        Poly den(numbers(field(j, "den", "rational function"), "den"));
        return RationalFunction(var, std::move(num), std::move(den));
    });
}

CurveClass class_from_json(const Json& j) { return CurveClass{integers(j, "class")}; }

Json class_to_json(const CurveClass& c) { return Json(c.coords); }

Json bps_to_json(const BpsTable& t) {
    Json j = Json::object();
    j["rank"] = t.rank;
    j["degree_fn"] = t.degree_fn;
    j["box"] = t.class_box;
    j["max_genus"] = t.max_genus;
    Json list = Json::array();
    for (const auto& [key, n] : t.entries) {
        Json e = Json::object();
        e["g"] = key.first;
        e["class"] = class_to_json(key.second);
        e["n"] = n.get_str();
        list.push_back(std::move(e));
    }
    j["bps"] = std::move(list);
    return j;
}

BpsTable bps_from_json(const Json& j) {
    return guarded("bps table", [&] {
        BpsTable t;
        t.rank = static_cast<int>(integer(field(j, "rank", "bps table"), "rank"));
        if (t.rank < 1) throw ParseError("bps table: rank must be positive");
        t.degree_fn = j.contains("degree_fn") ? integers(j["degree_fn"], "degree_fn")
                                              : std::vector<long>(static_cast<std::size_t>(t.rank), 1);
        t.max_genus = static_cast<int>(integer(field(j, "max_genus", "bps table"), "max_genus"));
        if (static_cast<int>(t.degree_fn.size()) != t.rank) throw ParseError("bps table: degree_fn has the wrong length");
        if (t.max_genus < 0) throw ParseError("bps table: max_genus must be >= 0");
        const Json& list = field(j, "bps", "bps table");
        if (!list.is_array()) throw ParseError("bps table: \"bps\" must be an array");
        std::vector<long> box(static_cast<std::size_t>(t.rank), 0);
        std::vector<std::pair<std::pair<int, CurveClass>, Rational>> items;
        for (const auto& e : list) {
            const int g = static_cast<int>(integer(field(e, "g", "bps entry"), "g"));
            const CurveClass beta = class_from_json(field(e, "class", "bps entry"));
            if (static_cast<int>(beta.coords.size()) != t.rank) throw ParseError("bps entry: class has the wrong rank");
            if (g < 0 || g > t.max_genus) throw ParseError("bps entry: genus outside 0..max_genus");
            for (std::size_t k = 0; k < box.size(); ++k) box[k] = std::max(box[k], beta.coords[k]);
            items.push_back({{g, beta}, rational(field(e, "n", "bps entry"))});
        }
        t.class_box = j.contains("box") ? integers(j["box"], "box") : box;
        if (static_cast<int>(t.class_box.size()) != t.rank) throw ParseError("bps table: box has the wrong length");
        for (auto& [key, n] : items) {
            if (!t.in_box(key.second))
                throw ParseError("bps entry: class " + key.second.to_string() + " lies outside the box");
            t.set(key.first, key.second, n);
        }
        return t;
    });
}

Json ring_to_json(const GradedRing& r) {
    Json j = Json::object();
    Json basis = Json::array(), deg = Json::array(), parity = Json::array();
    for (int i = 0; i < r.size(); ++i) {
        basis.push_back(r.name(i));
        deg.push_back(r.deg(i).get_str());
        parity.push_back(r.odd(i) ? "odd" : "even");
    }
    j["basis"] = std::move(basis);
    j["deg"] = std::move(deg);
    j["parity"] = std::move(parity);
    Json pairing = Json::array();
    for (const auto& row : r.pairing()) {
        Json jr = Json::array();
        for (const auto& x : row) jr.push_back(x.to_string());
        pairing.push_back(std::move(jr));
    }
    j["pairing"] = std::move(pairing);
    Json mult = Json::array();
    for (const auto& row : r.mult()) {
        Json jr = Json::array();
        for (const auto& prod : row) {
            Json jp = Json::array();
            for (const auto& x : prod) jp.push_back(x.to_string());
            jr.push_back(std::move(jp));
        }
        mult.push_back(std::move(jr));
    }
    j["mult"] = std::move(mult);
    return j;
}

GradedRing ring_from_json(const Json& j) {
    return guarded("ring", [&] {
        const Json& basis = field(j, "basis", "ring");
        if (!basis.is_array() || basis.empty()) throw ParseError("ring: \"basis\" must be a nonempty array of names");
        std::vector<std::string> names;
        for (const auto& n : basis) names.push_back(n.get<std::string>());
        std::vector<Rational> deg;
        for (const auto& d : field(j, "deg", "ring")) deg.push_back(rational(d));
        std::vector<bool> odd;
        for (const auto& p : field(j, "parity", "ring")) {
            if (p.is_boolean()) odd.push_back(p.get<bool>());
            else if (p == "odd" || p == 1) odd.push_back(true);
            else if (p == "even" || p == 0) odd.push_back(false);
            else throw ParseError("ring: parity must be \"even\" or \"odd\", got " + p.dump());
        }
        Matrix pairing;
        for (const auto& row : field(j, "pairing", "ring")) pairing.push_back(numbers(row, "pairing"));
        std::vector<std::vector<RingElement>> mult;
        for (const auto& row : field(j, "mult", "ring")) {
            if (!row.is_array()) throw ParseError("ring: \"mult\" must be a 3-dimensional array");
            std::vector<RingElement> r;
            for (const auto& prod : row) r.push_back(numbers(prod, "mult"));
            mult.push_back(std::move(r));
        }
        return GradedRing(std::move(names), std::move(deg), std::move(odd), std::move(pairing), std::move(mult));
    });
}

ChernParams chern_from_json(const Json& j, const GradedRing& ring) {
    return guarded("chern parameters", [&] {
        ChernParams c{ring.parse_element(field(j, "c1", "chern parameters").get<std::string>()),
                      ring.parse_element(field(j, "c2", "chern parameters").get<std::string>()),
                      ring.parse_element(field(j, "c3", "chern parameters").get<std::string>())};
        c.validate(ring);
        return c;
    });
}

CorrMatrix corr_matrix_from_json(const Json& j) {
    return guarded("correspondence matrix", [&] {
        CorrMatrix k;
        if (j.contains("rows"))
            for (const auto& r : j["rows"]) k.declare_row(parse_partition(r.get<std::string>()));
        const Json& entries = field(j, "entries", "correspondence matrix");
        if (!entries.is_object()) throw ParseError("correspondence matrix: \"entries\" must be an object");
        for (const auto& [key, v] : entries.items()) {
            const auto bar = key.find('|');
            if (bar == std::string::npos || key.find('|', bar + 1) != std::string::npos)
                throw ParseError("correspondence matrix: key '" + key + "' is not \"alpha|alpha_hat\"");
            const Partition alpha = parse_partition(key.substr(0, bar));
            const Partition alpha_hat = parse_partition(key.substr(bar + 1));
            CorrEntry e;
            e.trunc = optional_trunc(v);
            const Json& terms = field(v, "terms", "correspondence entry '" + key + "'");
            if (!terms.is_object()) throw ParseError("correspondence entry '" + key + "': \"terms\" must be an object");
            for (const auto& [exp, poly] : terms.items()) {
                long ex = 0;
                try {
                    std::size_t used = 0;
                    ex = std::stol(exp, &used);
                    if (used != exp.size()) throw std::invalid_argument(exp);
                } catch (const std::exception&) {
                    throw ParseError("correspondence entry '" + key + "': exponent '" + exp + "' is not an integer");
                }
                if (e.trunc && ex >= *e.trunc)
                    throw ParseError("correspondence entry '" + key + "': term at u^" + exp + " beyond its truncation");
                e.terms.emplace(ex, ChernPoly::parse(poly.get<std::string>()));
            }
            k.set(alpha, alpha_hat, std::move(e));
        }
        return k;
    });
}

Json corr_matrix_to_json(const CorrMatrix& k) {
    Json j = document();
    Json rows = Json::array();
    for (const auto& r : k.rows()) rows.push_back(partition_to_string(r));
    j["rows"] = std::move(rows);
    Json entries = Json::object();
    for (const auto& [alpha, row] : k.entries()) {
        for (const auto& [alpha_hat, e] : row) {
            Json v = Json::object();
            v["trunc"] = e.trunc ? Json(*e.trunc) : Json(nullptr);
            Json terms = Json::object();
            for (const auto& [ex, p] : e.terms) terms[std::to_string(ex)] = p.to_string();
            v["terms"] = std::move(terms);
            entries[partition_to_string(alpha) + "|" + partition_to_string(alpha_hat)] = std::move(v);
        }
    }
    j["entries"] = std::move(entries);
    return j;
}

Json descendent_sum_to_json(const DescendentSum& s, const GradedRing& ring) {
    Json j = Json::object();
    j["trunc"] = s.trunc ? Json(*s.trunc) : Json(nullptr);
    Json terms = Json::array();
    for (const auto& [m, c] : s.terms) {
        Json t = Json::object();
        t["monomial"] = monomial_to_string(m, ring);
        t["series"] = series_to_json(c);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

Json table_to_json(const TheoryTable& t) {
    Json j = document();
    j["side"] = to_string(t.side());
    j["ring"] = ring_to_json(t.ring());
    j["divisor_degree"] = t.divisor_degree();
    Json entries = Json::array();
    for (const auto& [slot, row] : t.entries()) {
        for (const auto& [mu, v] : row) {
            Json e = Json::object();
            e["class"] = class_to_json(slot.beta);
            e["labels"] = slot.labels;
            e["boundary"] = mu.to_string(t.ring());
            e["series"] = series_to_json(v);
            entries.push_back(std::move(e));
        }
    }
    j["entries"] = std::move(entries);
    return j;
}

TheoryTable table_from_json(const Json& j) {
    return guarded("theory table", [&] {
        const Side side = parse_side(field(j, "side", "theory table").get<std::string>());
        const GradedRing ring = j.contains("ring") ? ring_from_json(j["ring"]) : GradedRing::point();
        const Json& entries = field(j, "entries", "theory table");
        if (!entries.is_array()) throw ParseError("theory table: \"entries\" must be an array");
        std::vector<long> dd;
        if (j.contains("divisor_degree")) {
            dd = integers(j["divisor_degree"], "divisor_degree");
        } else {
            if (entries.empty()) throw ParseError("theory table: cannot infer the class rank of an empty table");
            dd.assign(field(entries[0], "class", "table entry").size(), 0);
        }
        TheoryTable t(side, ring, dd);
        for (const auto& e : entries) {
            Slot slot{class_from_json(field(e, "class", "table entry")), {}};
            if (e.contains("labels"))
                for (const auto& l : e["labels"]) slot.labels.push_back(l.get<std::string>());
            const std::string text = e.contains("boundary") ? e["boundary"].get<std::string>() : "";
            const WeightedPartition mu = WeightedPartition::parse(text, ring);
            if (mu.to_string(ring) != strip_spaces(text)) {
                throw ParseError("table entry: boundary '" + text + "' is not in canonical order (expected '" +
                                 mu.to_string(ring) + "')");
            }
            if (t.contains(slot, mu))
                throw ParseError("table entry: duplicate key " + slot_to_string(slot) + ", boundary '" + text + "'");
            t.insert(slot, mu, series_from_json(field(e, "series", "table entry")));
        }
        return t;
    });
}

std::vector<PipelineNode> pipeline_from_json(const Json& j) {
    return guarded("pipeline", [&] {
        const Json& nodes = field(j, "nodes", "pipeline");
        if (!nodes.is_array()) throw ParseError("pipeline: \"nodes\" must be an array");
        std::vector<PipelineNode> out;
        for (const auto& n : nodes) {
            PipelineNode node;
            const std::string op = field(n, "op", "pipeline node").get<std::string>();
            if (op == "glue") node.op = PipelineOp::glue;
            else if (op == "invert") node.op = PipelineOp::invert;
            else throw ParseError("pipeline node: unknown op '" + op + "'");
            node.side = parse_side(field(n, "side", "pipeline node").get<std::string>());
            for (const auto& in : field(n, "inputs", "pipeline node")) node.inputs.push_back(in.get<std::string>());
            node.output = field(n, "output", "pipeline node").get<std::string>();
            if (n.contains("rule")) node.rule = parse_split_rule(n["rule"].get<std::string>());
            if (n.contains("unknown")) node.unknown = parse_unknown_side(n["unknown"].get<std::string>());
            if (n.contains("divisor_degree") && !n["divisor_degree"].is_null())
                node.divisor_degree = integers(n["divisor_degree"], "divisor_degree");
            if (n.contains("order")) node.order = integer(n["order"], "order");
            out.push_back(std::move(node));
        }
        return out;
    });
}

Json pipeline_to_json(const std::vector<PipelineNode>& nodes) {
    Json j = document();
    Json list = Json::array();
    for (const auto& n : nodes) {
        Json o = Json::object();
        o["op"] = n.op == PipelineOp::glue ? "glue" : "invert";
        o["side"] = to_string(n.side);
        o["inputs"] = n.inputs;
        o["output"] = n.output;
        o["rule"] = to_string(n.rule);
        if (n.op == PipelineOp::invert) {
            o["unknown"] = to_string(n.unknown);
            o["order"] = n.order;
        }
        if (n.divisor_degree) o["divisor_degree"] = *n.divisor_degree;
        list.push_back(std::move(o));
    }
    j["nodes"] = std::move(list);
    return j;
}

std::map<std::string, TheoryTable> load_tables(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw ParseError("'" + dir.string() + "' is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& f : std::filesystem::directory_iterator(dir))
        if (f.is_regular_file() && f.path().extension() == ".json") files.push_back(f.path());
    std::sort(files.begin(), files.end());
    std::map<std::string, TheoryTable> out;
    for (const auto& f : files) {
        const Json j = read_file(f);
        check_format(j);
        const std::string name = j.contains("name") ? j["name"].get<std::string>() : f.stem().string();
        if (out.count(name)) throw ParseError("two leaf files define table '" + name + "'");
        out.emplace(name, table_from_json(j));
    }
    return out;
}

Json error_document(const std::string& kind, const std::string& code, const std::string& message) {
    Json j = document();
    Json e = Json::object();
    e["kind"] = kind;
    e["code"] = code;
    e["message"] = message;
    j["error"] = std::move(e);
    return j;
}

}  // namespace gwp::io
