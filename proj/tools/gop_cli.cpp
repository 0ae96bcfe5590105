// gop: load documents, run check suites, print JSON reports.
// Exit codes: 0 pass, 1 violations, 2 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gop/documents.hpp"
#include "gop/error.hpp"
#include "gop/homs.hpp"
#include "gop/lifting.hpp"

using namespace gop;

namespace {

struct Options {
    int max_nodes = 5;
    int path_bound = 8;
    int stage_bound = 16;
    unsigned long seed = 0;
    int jobs = 1;
    bool pretty = false;
    std::string file, second, contraction, gamma, tree, name;
    bool unital = false, check = false, free = false;
};

json read_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw Error("'" + path + "' is not valid json: " + e.what());
    }
}

std::string doc_type(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) throw Error("document has no \"type\"");
    return j["type"].get<std::string>();
}

// Pointed collection of a reduced operad, or the collection document as given.
Collection load_collection(const json& j, int bound) {
    if (doc_type(j) == "collection") return collection_from_json(j);
    auto A = operad_from_json(j, bound);
    if (is_reduced(*A, bound)) return derive_pointing(*A, bound);
    return to_collection(*A, bound);
}

ContractionChoice choose_contraction(const Collection& P, const Options& o) {
    if (!o.contraction.empty()) return contraction_from_json(read_document(o.contraction));
    if (o.gamma.empty()) throw Error("give --gamma or --contraction");
    if (o.gamma == "search") {
        auto s = search_contraction(P, true);
        if (!s.found) throw Error("no unital contraction found");
        return s.choice;
    }
    return bracketing_contraction(P, o.gamma);
}

json fibre_sizes(const Operad& A, int bound) {
    json j = json::object();
    for (const auto& p : trees_by_size(1, A.dim(), bound)) j[tree_key(p)] = A.ops(p).size();
    return j;
}

Report validate_document(const json& j, const Options& o) {
    Report rep("validate");
    const std::string type = doc_type(j);
    rep.details["type"] = type;
    if (type == "collection") {
        rep.merge(validate(collection_from_json(j)));
    } else if (type == "operad") {
        rep.merge(validate(to_collection(*operad_from_json(j, o.max_nodes), o.max_nodes)));
    } else if (type == "contraction") {
        contraction_from_json(j);
    } else if (type == "scheme") {
        scheme_from_json(j);
    } else if (type == "multicategory") {
        rep.merge(check_multicategory(multicategory_from_json(j)));
    } else if (type == "enriched") {
        auto e = enriched_from_json(j);
        rep.merge(check_multicategory(e.C));
        for (const auto& f : e.functors) rep.merge(check_functor(e.C, f));
    } else {
        throw Error("unknown document type '" + type + "'");
    }
    ++rep.instances;
    return rep;
}

Enriched load_enriched(const Options& o) { return enriched_from_json(read_document(o.file)); }

Report run(const std::string& cmd, const Options& o, json& raw) {
    const int bound = o.max_nodes;
    if (cmd == "validate") return validate_document(read_document(o.file), o);
    if (cmd == "check-operad") return check_operad(*operad_from_json(read_document(o.file), bound), bound);
    if (cmd == "check-contraction" || cmd == "check-unital") {
        auto P = load_collection(read_document(o.file), bound);
        auto g = choose_contraction(P, o);
        Report rep(cmd);
        rep.merge(check_contraction(P, g));
        if (cmd == "check-unital") rep.merge(check_unital(P, g));
        return rep;
    }
    if (cmd == "check-top-strict") return check_top_strict(load_collection(read_document(o.file), bound));
    if (cmd == "search-contraction") {
        auto s = search_contraction(load_collection(read_document(o.file), bound), o.unital);
        s.report.details["found"] = s.found;
        if (s.found)
            s.report.details["contraction"] = contraction_to_json(s.choice);
        else
            s.report.fail("no-contraction", {{"unital", o.unital}});
        return s.report;
    }
    if (cmd == "shuffle") {
        Tree p = parse_tree(o.tree);
        auto orders = shuffle_orders(p);
        Report rep("shuffle");
        rep.instances = static_cast<long>(orders.size());
        json os = json::array();
        for (const auto& ord : orders) {
            json cells = json::array();
            for (const auto& [c, r] : ord) cells.push_back({c, r});
            os.push_back(cells);
        }
        rep.details = {{"tree", tree_key(p)}, {"columns", column_sizes(p)}, {"count", orders.size()}, {"orders", os}};
        return rep;
    }
    if (cmd == "check-scheme") return check_scheme_unital(scheme_from_json(read_document(o.file)), bound);
    if (cmd == "gamma") {
        auto e = load_enriched(o);
        if (!e.graph) throw Error("gamma needs a document with a \"graph\"");
        auto g = gamma_apply(e.C, *e.graph, o.path_bound);
        Report rep("gamma");
        rep.instances = 1;
        rep.details = {{"exact", g.exact}, {"graph", graph_to_json(e.C, g.graph)}, {"info", g.details}};
        if (!g.exact) rep.fail("inexact", g.details);
        if (o.check) {
            rep.merge(check_monad_laws(e.C, *e.graph, o.path_bound));
            GammaFunctor T(e.C, o.path_bound);
            rep.merge(check_path_like(T, *e.graph, o.path_bound));
        }
        return rep;
    }
    if (cmd == "convolve") {
        auto e = load_enriched(o);
        auto conv = convolve(e.C, e.functors);
        Report rep("convolve");
        rep.instances = 1;
        rep.details = {{"functor", functor_to_json(e.C, conv.functor)}, {"raw", family_to_json(e.C, conv.raw)}};
        return rep;
    }
    if (cmd == "lift") {
        auto e = load_enriched(o);
        auto lt = lift_multitensor(e.C, e.functors, o.stage_bound, o.path_bound);
        Report rep = lt.report;
        rep.merge(lt.lift.report);
        rep.details["value"] = functor_to_json(e.C, lt.value);
        rep.details["stabilized"] = lt.lift.stabilized;
        rep.details["stage"] = lt.lift.stage;
        return rep;
    }
    if (cmd == "day-compare") {
        auto e = load_enriched(o);
        if (o.free) return recover_on_free(e.C, e.families, o.stage_bound, o.path_bound);
        return day_compare(e.C, e.functors, o.stage_bound, o.path_bound);
    }
    if (cmd == "h" || cmd == "r") {
        json doc = read_document(o.file);
        json out = operad_rule(cmd);
        out.erase("dim");
        out["of"] = doc;
        auto X = operad_from_json(out, bound);
        Report rep = check_operad(*X, bound);
        rep.suite = cmd;
        rep.details = {{"document", out}, {"dim", X->dim()}, {"fibre_sizes", fibre_sizes(*X, bound)}};
        return rep;
    }
    if (cmd == "nu") {
        auto nu = compute_nu(operad_from_json(read_document(o.file), bound + 1), bound);
        return check_nu_operadic(nu, bound);
    }
    if (cmd == "check-adjunction") {
        auto B = operad_from_json(read_document(o.file), bound + 1);
        auto A = o.second.empty() ? apply_h(B, bound + 1) : operad_from_json(read_document(o.second), bound + 1);
        return check_adjunction(A, B, bound);
    }
    if (cmd == "examples") {
        if (o.name.empty()) {
            raw = example_names();
        } else {
            raw = example_document(o.name);
        }
        return Report("examples");
    }
    throw Error("unknown subcommand '" + cmd + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"globular operad toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--max-nodes", o.max_nodes, "tree size bound")->check(CLI::Range(0, 12));
    app.add_option("--path-bound", o.path_bound, "path length bound for Gamma")->check(CLI::Range(0, 64));
    app.add_option("--stage-bound", o.stage_bound, "stage bound for the lifting")->check(CLI::Range(0, 256));
    app.add_option("--seed", o.seed, "seed (reports are deterministic given it)");
    app.add_option("--jobs", o.jobs, "worker count")->check(CLI::PositiveNumber);
    app.add_flag("--pretty", o.pretty, "indent the json output");

    auto file_cmd = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("file", o.file, "document")->required();
        return s;
    };
    file_cmd("validate", "parse a document and check its structure");
    file_cmd("check-operad", "operad axioms within --max-nodes");
    for (const char* name : {"check-contraction", "check-unital"}) {
        auto* s = file_cmd(name, "check a contraction on a pointed operad");
        s->add_option("--contraction", o.contraction, "contraction document");
        s->add_option("--gamma", o.gamma, "left, right, parity, parity-rl or search");
    }
    file_cmd("check-top-strict", "unique fillers at the top stage");
    file_cmd("search-contraction", "search for a contraction")->add_flag("--unital", o.unital, "require unitality");
    app.add_subcommand("shuffle", "compatible shuffles of a stage-2 tree")
        ->add_option("tree", o.tree, "tree, e.g. [[*,*],[],[*]]")
        ->required();
    file_cmd("check-scheme", "unit compatibility of a shuffle scheme");
    file_cmd("gamma", "Gamma E on the graph of an enriched document")->add_flag("--check", o.check, "monad laws");
    file_cmd("convolve", "convolution of the functors of an enriched document");
    file_cmd("lift", "lifted tensor of the functors of an enriched document");
    file_cmd("day-compare", "lifted tensor against convolution")
        ->add_flag("--free", o.free, "compare free algebras on the document's families instead");
    file_cmd("h", "h of an operad");
    file_cmd("r", "r of an operad");
    file_cmd("nu", "nu as an operad map");
    file_cmd("check-adjunction", "triangle identities and nu")->add_option("--lower", o.second, "operad one dimension down (default h of the input)");
    app.add_subcommand("examples", "stock documents")->add_option("name", o.name, "example name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        json raw;
        Report rep = run(cmd, o, raw);
        json out = cmd == "examples" ? raw : rep.to_json();
        std::cout << (o.pretty ? out.dump(2) : out.dump()) << "\n";
        return rep.exit_code();
    } catch (const Error& e) {
        std::cerr << "gop " << cmd << ": " << e.what() << "\n";
    } catch (const json::exception& e) {
        std::cerr << "gop " << cmd << ": malformed document: " << e.what() << "\n";
    } catch (const std::out_of_range& e) {
        std::cerr << "gop " << cmd << ": " << e.what() << "\n";
    }
    return 2;
}
