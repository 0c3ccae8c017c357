// Batch front end: one command per invocation, JSON in and out.
//
// Exit codes: 0 success, 2 parse or usage error, 3 precondition failure,
// 4 insufficient precision, 1 anything unexpected. Failures also write an
// error document to stdout.

#include "gwp/bps.hpp"
#include "gwp/corr.hpp"
#include "gwp/error.hpp"
#include "gwp/glue.hpp"
#include "gwp/io.hpp"
#include "gwp/ratfun.hpp"
#include "gwp/series.hpp"

#include "CLI11.hpp"

#include <functional>
#include <iostream>
#include <set>

using gwp::io::Json;

namespace {

struct Common {
    std::string out;
    unsigned jobs = 1;
};

void emit(const Common& c, const Json& j) {
    if (c.out.empty()) std::cout << gwp::io::dump(j);
    else gwp::io::write_file(c.out, j);
}

Json load(const std::string& path) {
    Json j = gwp::io::read_file(path);
    gwp::io::check_format(j);
    return j;
}

/// The payload under `key`, or the document itself when it already has the payload's shape.
const Json& payload(const Json& doc, const char* key, const char* marker) {
    if (doc.contains(key)) return doc[key];
    if (doc.contains(marker)) return doc;
    throw gwp::ParseError(std::string("document has neither a \"") + key + "\" object nor \"" + marker + "\"");
}

gwp::CurveClass parse_class(const std::string& text) {
    gwp::CurveClass c;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(start, comma - start);
        try {
            std::size_t used = 0;
            c.coords.push_back(std::stol(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw gwp::ParseError("class '" + text + "' is not a comma-separated integer vector");
        }
        start = comma + 1;
    }
    return c;
}

long checked_order(long order) {
    if (order < 0) throw gwp::PreconditionError("bad-order", "orders must be nonnegative");
    gwp::check_order_cap(order);
    return order;
}

Json residual_json(const std::vector<gwp::ResidualEntry>& residual) {
    Json list = Json::array();
    for (const auto& r : residual) {
        Json e = Json::object();
        e["class"] = gwp::io::class_to_json(r.slot.beta);
        e["labels"] = r.slot.labels;
        e["series"] = gwp::io::series_to_json(r.value);
        list.push_back(std::move(e));
    }
    return list;
}

int fail(const char* kind, const std::string& code, const std::string& message, int status) {
    std::cout << gwp::io::dump(gwp::io::error_document(kind, code, message));
    std::cerr << "gwp: " << message << "\n";
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact series kernel for the GW/pairs correspondence"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--out", common.out, "Write the result document here instead of stdout");
    app.add_option("--jobs", common.jobs, "Worker threads for independent classes")->check(CLI::Range(1u, 256u));

    std::function<Json()> job;

    // bps-forward
    auto* fwd = app.add_subcommand("bps-forward", "Connected series of a class from a BPS table");
    std::string fwd_in, fwd_class;
    long fwd_order = 20;
    bool fwd_q = false;
    fwd->add_option("--in", fwd_in, "BPS table document")->required();
    fwd->add_option("--class", fwd_class, "Curve class, e.g. 1 or 2,1")->required();
    fwd->add_option("--order", fwd_order, "u-series known below u^order");
    fwd->add_flag("--q", fwd_q, "Emit the rational function in q instead of the u-series");
    fwd->callback([&] {
        job = [&] {
            const auto t = gwp::io::bps_from_json(payload(load(fwd_in), "table", "bps"));
            const auto beta = parse_class(fwd_class);
            Json out = gwp::io::document();
            out["class"] = gwp::io::class_to_json(beta);
            if (fwd_q) out["ratfun"] = gwp::io::ratfun_to_json(gwp::gv_forward_q(t, beta));
            else out["series"] = gwp::io::series_to_json(gwp::gv_forward(t, beta, checked_order(fwd_order)));
            return out;
        };
    });

    // bps-invert
    auto* inv = app.add_subcommand("bps-invert", "BPS numbers from connected u-series");
    std::string inv_in;
    int inv_genus = 0;
    inv->add_option("--in", inv_in, "Document {\"series\": [{\"class\", \"series\"}]}")->required();
    inv->add_option("--max-genus", inv_genus, "Largest genus to extract")->required()->check(CLI::NonNegativeNumber);
    inv->callback([&] {
        job = [&] {
            const Json doc = load(inv_in);
            std::map<gwp::CurveClass, gwp::HalfSeries> f;
            std::vector<gwp::CurveClass> classes;
            const Json& list = payload(doc, "series", "series");
            if (!list.is_array()) throw gwp::ParseError("\"series\" must be an array of {class, series}");
            for (const auto& e : list) {
                if (!e.is_object() || !e.contains("class") || !e.contains("series"))
                    throw gwp::ParseError("each series entry needs \"class\" and \"series\"");
                const auto beta = gwp::io::class_from_json(e["class"]);
                if (!f.emplace(beta, gwp::io::series_from_json(e["series"])).second)
                    throw gwp::ParseError("class " + beta.to_string() + " listed twice");
                classes.push_back(beta);
            }
            Json out = gwp::io::document();
            out["table"] = gwp::io::bps_to_json(gwp::gv_invert(f, classes, inv_genus));
            return out;
        };
    });

    // bps-report
    auto* rep = app.add_subcommand("bps-report", "Integrality and genus report of a BPS table");
    std::string rep_in;
    rep->add_option("--in", rep_in, "BPS table document")->required();
    rep->callback([&] {
        job = [&] {
            const auto r = gwp::integrality_report(gwp::io::bps_from_json(payload(load(rep_in), "table", "bps")));
            Json out = gwp::io::document();
            Json v = Json::array();
            for (const auto& x : r.violations) {
                Json e = Json::object();
                e["g"] = x.genus;
                e["class"] = gwp::io::class_to_json(x.beta);
                e["n"] = x.value.get_str();
                v.push_back(std::move(e));
            }
            out["integral"] = r.violations.empty();
            out["violations"] = std::move(v);
            Json top = Json::array();
            for (const auto& [beta, g] : r.top_genus) {
                Json e = Json::object();
                e["class"] = gwp::io::class_to_json(beta);
                e["g"] = g;
                top.push_back(std::move(e));
            }
            out["top_genus"] = std::move(top);
            return out;
        };
    });

    // to-u
    auto* tou = app.add_subcommand("to-u", "Substitute -q = e^{iu} (s = e^{iu/2})");
    std::string tou_in;
    long tou_order = 20;
    tou->add_option("--in", tou_in, "Exact s-series or rational function document")->required();
    tou->add_option("--order", tou_order, "Result known below u^order");
    tou->callback([&] {
        job = [&] {
            const Json doc = load(tou_in);
            const long order = checked_order(tou_order);
            gwp::HalfSeries u;
            if (doc.contains("ratfun") || doc.contains("num")) {
                u = gwp::ratfun_to_u(gwp::io::ratfun_from_json(payload(doc, "ratfun", "num")), order);
            } else {
                gwp::HalfSeries x = gwp::io::series_from_json(payload(doc, "series", "coeffs"));
                if (x.var() == gwp::Var::q) x = gwp::q_to_s(x);
                if (x.var() != gwp::Var::s) throw gwp::PreconditionError("variable-mismatch", "to-u needs an s- or q-series");
                u = gwp::to_u(x, order);
            }
            Json out = gwp::io::document();
            out["series"] = gwp::io::series_to_json(u);
            return out;
        };
    });

    // ratrec
    auto* rr = app.add_subcommand("ratrec", "Rational reconstruction of a truncated series");
    std::string rr_in;
    long rr_num = -1, rr_den = -1;
    rr->add_option("--in", rr_in, "Series document")->required();
    auto* num_opt = rr->add_option("--num-deg", rr_num, "Numerator degree bound")->check(CLI::NonNegativeNumber);
    auto* den_opt = rr->add_option("--den-deg", rr_den, "Denominator degree bound")->check(CLI::NonNegativeNumber);
    num_opt->needs(den_opt);
    den_opt->needs(num_opt);
    rr->callback([&] {
        job = [&] {
            const auto x = gwp::io::series_from_json(payload(load(rr_in), "series", "coeffs"));
            Json out = gwp::io::document();
            std::optional<gwp::RationalFunction> r;
            long nb = rr_num, db = rr_den;
            if (rr_num >= 0) {
                r = gwp::reconstruct(x, rr_num, rr_den);
            } else {
                auto a = gwp::reconstruct_auto(x);
                r = a.result;
                nb = a.num_bound;
                db = a.den_bound;
            }
            out["bounds"] = Json::array({nb, db});
            out["status"] = r ? "found" : "no-solution";
            out["ratfun"] = r ? gwp::io::ratfun_to_json(*r) : Json(nullptr);
            return out;
        };
    });

    // symcheck
    auto* sym = app.add_subcommand("symcheck", "Check R(q) = R(1/q)");
    std::string sym_in;
    sym->add_option("--in", sym_in, "Rational function document")->required();
    sym->callback([&] {
        job = [&] {
            const auto r = gwp::io::ratfun_from_json(payload(load(sym_in), "ratfun", "num"));
            Json out = gwp::io::document();
            out["ratfun"] = gwp::io::ratfun_to_json(r);
            out["symmetric"] = gwp::check_q_symmetry(r);
            return out;
        };
    });

    // overline
    auto* ov = app.add_subcommand("overline", "Expand a descendent monomial through the correspondence matrix");
    std::string ov_ring, ov_matrix, ov_chern, ov_monomial;
    ov->add_option("--ring", ov_ring, "Ring document")->required();
    ov->add_option("--matrix", ov_matrix, "Correspondence matrix document")->required();
    ov->add_option("--chern", ov_chern, "Chern class document {c1, c2, c3}")->required();
    ov->add_option("--monomial", ov_monomial, "e.g. \"tau_0(p)*tau_2(H)\"")->required();
    ov->callback([&] {
        job = [&] {
            const auto ring = gwp::io::ring_from_json(payload(load(ov_ring), "ring", "basis"));
            const auto k = gwp::io::corr_matrix_from_json(load(ov_matrix));
            const auto c = gwp::io::chern_from_json(payload(load(ov_chern), "chern", "c1"), ring);
            const auto res = gwp::overline(gwp::parse_monomial(ov_monomial, ring), k, c, ring);
            Json out = gwp::io::document();
            out["set_partition_terms"] = res.set_partition_terms;
            out["sum"] = gwp::io::descendent_sum_to_json(res.sum, ring);
            return out;
        };
    });

    // glue
    auto* gl = app.add_subcommand("glue", "Glue two relative tables along their common divisor");
    std::string gl_left, gl_right, gl_rule = "additive";
    gl->add_option("--left", gl_left, "Left table document")->required();
    gl->add_option("--right", gl_right, "Right table document")->required();
    gl->add_option("--rule", gl_rule, "additive or diagonal");
    gl->callback([&] {
        job = [&] {
            return gwp::io::table_to_json(gwp::glue(gwp::io::table_from_json(load(gl_left)),
                                                    gwp::io::table_from_json(load(gl_right)),
                                                    gwp::parse_split_rule(gl_rule)));
        };
    });

    // invert
    auto* iv = app.add_subcommand("invert", "Solve absolute = glue(unknown, known) for the unknown table");
    std::string iv_abs, iv_known, iv_unknown = "left", iv_rule = "additive", iv_dd;
    long iv_order = 24;
    iv->add_option("--absolute", iv_abs, "Absolute table document")->required();
    iv->add_option("--known", iv_known, "Known relative table document")->required();
    iv->add_option("--unknown", iv_unknown, "Side of the unknown table: left or right");
    iv->add_option("--rule", iv_rule, "additive or diagonal");
    iv->add_option("--divisor-degree", iv_dd, "Divisor degree of the unknown table, e.g. 0,1");
    iv->add_option("--order", iv_order, "Expansion order for non-polynomial solutions");
    iv->callback([&] {
        job = [&] {
            gwp::InvertOptions opts;
            opts.rule = gwp::parse_split_rule(iv_rule);
            opts.order = checked_order(iv_order);
            opts.jobs = common.jobs;
            if (!iv_dd.empty()) opts.divisor_degree = parse_class(iv_dd).coords;
            const auto res = gwp::invert_step(gwp::io::table_from_json(load(iv_abs)),
                                              gwp::io::table_from_json(load(iv_known)),
                                              gwp::parse_unknown_side(iv_unknown), opts);
            Json out = gwp::io::table_to_json(res.table);
            out["zero_residual"] = res.zero_residual();
            out["residual"] = residual_json(res.residual);
            return out;
        };
    });

    // pipeline
    auto* pl = app.add_subcommand("pipeline", "Run a glue/invert DAG over leaf tables");
    std::string pl_spec, pl_leaves;
    bool pl_all = false;
    pl->add_option("--spec", pl_spec, "Pipeline document")->required();
    pl->add_option("--leaves", pl_leaves, "Directory of leaf table documents")->required();
    pl->add_flag("--all", pl_all, "Emit every produced table, not only the targets");
    pl->callback([&] {
        job = [&] {
            const auto nodes = gwp::io::pipeline_from_json(load(pl_spec));
            for (const auto& n : nodes) checked_order(n.order);
            const auto leaves = gwp::io::load_tables(pl_leaves);
            const auto res = gwp::reduction_pipeline(nodes, leaves, common.jobs);
            std::set<std::string> consumed;
            for (const auto& n : nodes) consumed.insert(n.inputs.begin(), n.inputs.end());
            Json out = gwp::io::document();
            Json steps = Json::array();
            for (const auto& s : res.steps) {
                Json e = Json::object();
                e["node"] = s.node;
                e["op"] = s.op == gwp::PipelineOp::glue ? "glue" : "invert";
                e["output"] = s.output;
                if (s.op == gwp::PipelineOp::invert) e["residual_entries"] = s.residual_entries;
                steps.push_back(std::move(e));
            }
            out["steps"] = std::move(steps);
            Json tables = Json::object();
            for (const auto& s : res.steps) {
                if (!pl_all && consumed.count(s.output)) continue;
                Json t = gwp::io::table_to_json(res.tables.at(s.output));
                t.erase("format");
                tables[s.output] = std::move(t);
            }
            out["tables"] = std::move(tables);
            return out;
        };
    });

    // predicate
    auto* pr = app.add_subcommand("predicate", "Check the GW/pairs correspondence for one series pair");
    std::string pr_zp, pr_zgw;
    long pr_d = 0, pr_l = 0, pr_order = 20;
    pr->add_option("--zp", pr_zp, "Pairs side: rational function in q or s")->required();
    pr->add_option("--zgw", pr_zgw, "GW side: u-series")->required();
    pr->add_option("--d", pr_d, "d_beta")->required();
    pr->add_option("--l-minus-abs", pr_l, "l(mu) - |mu|");
    pr->add_option("--order", pr_order, "Compare below u^order");
    pr->callback([&] {
        job = [&] {
            const auto zp = gwp::io::ratfun_from_json(payload(load(pr_zp), "ratfun", "num"));
            const auto zgw = gwp::io::series_from_json(payload(load(pr_zgw), "series", "coeffs"));
            Json out = gwp::io::document();
            out["holds"] = gwp::correspondence_predicate(zp, zgw, pr_d, pr_l, checked_order(pr_order));
            return out;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("parse", "usage", e.what(), 2);
    }

    try {
        emit(common, job());
        return 0;
    } catch (const gwp::Error& e) {
        switch (e.kind()) {
            case gwp::ErrorKind::parse: return fail("parse", e.code(), e.what(), 2);
            case gwp::ErrorKind::precondition: return fail("precondition", e.code(), e.what(), 3);
            case gwp::ErrorKind::precision: return fail("precision", e.code(), e.what(), 4);
        }
    } catch (const std::exception& e) {
        return fail("internal", "internal", e.what(), 1);
    }
    return 1;
}
