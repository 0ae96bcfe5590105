#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "enrich_fixtures.hpp"
#include "gop/documents.hpp"
#include "gop/error.hpp"

using namespace gop;

namespace {

struct Run {
    int code = -1;
    std::string out;
    json doc() const { return json::parse(out); }
};

Run gop_run(const std::string& args) {
    const std::string cmd = std::string(GOP_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    Run r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(GOP_DATA_DIR) + "/" + name + ".json"; }

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = "gop_cli_test_" + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("collections survive a round trip") {
    auto P = derive_pointing(*bracketing_operad(), 4);
    auto j = collection_to_json(P);
    auto Q = collection_from_json(json::parse(j.dump()));
    CHECK(Q.fibres == P.fibres);
    CHECK(Q.act == P.act);
    CHECK(Q.kind == P.kind);
    CHECK(Q.dim == P.dim);
}

TEST_CASE("table operads survive a round trip and still pass the checker") {
    auto t = materialize(*terminal_operad(2), 3);
    auto back = operad_from_json(json::parse(operad_to_json(*t).dump()), 3);
    CHECK(check_operad(*back, 3).ok());
    auto* tb = dynamic_cast<const TableOperad*>(back.get());
    REQUIRE(tb != nullptr);
    CHECK(tb->table == t->table);
    CHECK(tb->units == t->units);
}

TEST_CASE("contractions and schemes survive a round trip") {
    auto P = derive_pointing(*bracketing_operad(), 4);
    auto g = bracketing_contraction(P, "left");
    CHECK(contraction_from_json(json::parse(contraction_to_json(g).dump())) == g);

    ShuffleScheme s = named_scheme("table");
    s.name = "custom";
    Tree p = parse_tree("[[*,*],[*]]");
    s.table[tree_key(p)] = shuffle_orders(p).back();
    auto s2 = scheme_from_json(scheme_to_json(s));
    CHECK(s2.name == "custom");
    CHECK(s2.table == s.table);
    CHECK(scheme_from_json(scheme_to_json(named_scheme("col-rl"))).name == "col-rl");
}

TEST_CASE("multicategories, graphs and functors survive a round trip") {
    auto C = one_arrow_multicategory(3);
    auto C2 = multicategory_from_json(json::parse(multicategory_to_json(C).dump()));
    CHECK(C2.objects == C.objects);
    CHECK(C2.table == C.table);
    CHECK(C2.identities == C.identities);
    CHECK(check_multicategory(C2).ok());
    for (const auto& f : fixtures::small_functors()) {
        auto f2 = functor_from_json(C, functor_to_json(C, f));
        CHECK(f2.values == f.values);
        CHECK(f2.action == f.action);
    }
    Family x, y;
    x.at = {ESet{json("a")}, ESet{}};
    y.at = {ESet{}, ESet{json("b"), json("c")}};
    Graph g = sequence_graph({x, y}, 2);
    CHECK(graph_from_json(C, graph_to_json(C, g)) == g);
}

TEST_CASE("malformed documents raise errors") {
    CHECK_THROWS_AS(collection_from_json(json::parse(R"({"dim": 1})")), Error);
    CHECK_THROWS_AS(collection_from_json(json::parse(R"({"dim": 1, "fibres": {"[*": ["a"]}})")), Error);
    CHECK_THROWS_AS(collection_from_json(json::parse(R"({"dim": 1, "fibres": {"[*]": ["a", "a"]}})")), Error);
    CHECK_THROWS_AS(operad_from_json(json::parse(R"({"type": "operad", "rule": "nope"})"), 3), Error);
    CHECK_THROWS_AS(operad_from_json(json::parse(R"({"type": "scheme", "rule": "col-lr"})"), 3), Error);
    CHECK_THROWS_AS(scheme_from_json(json::parse(R"({"type": "scheme", "table": {"[[*,*]]": [[0,1],[0,0]]}})")), Error);
    CHECK_THROWS_AS(multicategory_from_json(json::parse(R"({"rule": "free", "objects": ["a"],
        "generators": [{"name": "g", "in": ["b"], "out": "a"}]})")), Error);
    CHECK_THROWS_AS(example_document("terminal-"), Error);
    CHECK_THROWS_AS(example_document("nothing"), Error);
}

TEST_CASE("the data directory holds the stock examples") {
    for (const auto& name : example_names()) {
        std::ifstream in(data(name));
        REQUIRE_MESSAGE(in.good(), name);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK_MESSAGE(json::parse(ss.str()) == example_document(name), name);
    }
}

TEST_CASE("examples lists names and emits valid documents") {
    auto names = gop_run("examples");
    CHECK(names.code == 0);
    CHECK(names.doc().size() == example_names().size());
    auto t2 = gop_run("examples terminal-2");
    CHECK(t2.code == 0);
    CHECK(t2.doc() == example_document("terminal-2"));
    auto path = write_temp("terminal2.json", t2.out);
    auto v = gop_run("validate " + path);
    CHECK(v.code == 0);
    CHECK(v.doc()["ok"] == true);
    for (const auto& name : example_names()) CHECK_MESSAGE(gop_run("validate " + data(name)).code == 0, name);
    CHECK(gop_run("examples nothing").code == 2);
}

TEST_CASE("bracketing2 passes the operad checker at 5 nodes") {
    auto r = gop_run("check-operad " + data("bracketing2") + " --max-nodes 5");
    CHECK(r.code == 0);
    CHECK(r.doc()["violation_count"] == 0);
}

TEST_CASE("left and right bracketings are unital, parity is not") {
    CHECK(gop_run("check-unital " + data("bracketing2") + " --gamma left --max-nodes 5").code == 0);
    CHECK(gop_run("check-unital " + data("bracketing2") + " --gamma right --max-nodes 5").code == 0);
    auto parity = gop_run("check-unital " + data("bracketing2") + " --gamma parity --max-nodes 5");
    CHECK(parity.code == 1);
    CHECK(parity.doc()["violations"][0]["law"] == "unitality");
}

TEST_CASE("contraction documents feed check-contraction") {
    auto P = derive_pointing(*bracketing_operad(), 4);
    auto path = write_temp("left.json", contraction_to_json(bracketing_contraction(P, "left")).dump());
    CHECK(gop_run("check-contraction " + data("bracketing2") + " --max-nodes 4 --contraction " + path).code == 0);
    CHECK(gop_run("check-unital " + data("bracketing2") + " --max-nodes 4 --contraction " + path).code == 0);
    CHECK(gop_run("check-top-strict " + data("bracketing2") + " --max-nodes 4").code == 0);
    CHECK(gop_run("search-contraction " + data("bracketing2") + " --max-nodes 4 --unital").code == 0);
}

TEST_CASE("row-reading scheme fails with the swapped pair") {
    auto r = gop_run("check-scheme " + data("shuffle-row-reading"));
    CHECK(r.code == 1);
    const json w = r.doc()["violations"][0]["witness"];
    CHECK(w["small"] == "[[*],[*]]");
    CHECK(w["large"] == "[[*,*],[*]]");
    CHECK(w["order_small"] == json::parse("[[0,0],[1,0]]"));
    CHECK(w["restricted"] == json::parse("[[1,0],[0,0]]"));
    CHECK(gop_run("check-scheme " + data("shuffle-col-lr")).code == 0);
    CHECK(gop_run("check-scheme " + data("shuffle-col-rl")).code == 0);
}

TEST_CASE("shuffle counts the compatible orders") {
    auto r = gop_run("shuffle '[[*,*],[],[*],[*,*,*,*]]'");
    CHECK(r.code == 0);
    CHECK(r.doc()["details"]["count"] == 105);
}

TEST_CASE("enriched documents drive gamma, convolve, lift and day-compare") {
    CHECK(gop_run("day-compare " + data("one-arrow-multicat")).code == 0);
    CHECK(gop_run("day-compare " + data("one-arrow-multicat") + " --free").code == 0);
    auto lift = gop_run("lift " + data("one-arrow-multicat"));
    CHECK(lift.code == 0);
    CHECK(lift.doc()["details"]["stabilized"] == true);
    auto conv = gop_run("convolve " + data("one-arrow-multicat"));
    CHECK(conv.code == 0);
    CHECK(conv.doc()["details"]["functor"]["values"]["D'"].size() == lift.doc()["details"]["value"]["values"]["D'"].size());
    auto g = gop_run("gamma " + data("chain-3") + " --check");
    CHECK(g.code == 0);
    CHECK(g.doc()["details"]["exact"] == true);
    CHECK(gop_run("lift " + data("one-arrow-multicat") + " --stage-bound 0").code == 1);
}

TEST_CASE("h, r, nu and check-adjunction") {
    auto h = gop_run("h " + data("bracketing2") + " --max-nodes 4");
    CHECK(h.code == 0);
    CHECK(h.doc()["details"]["dim"] == 1);
    auto r = gop_run("r " + data("terminal-1") + " --max-nodes 4");
    CHECK(r.code == 0);
    CHECK(r.doc()["details"]["dim"] == 2);
    CHECK(gop_run("nu " + data("bracketing2") + " --max-nodes 4").code == 0);
    CHECK(gop_run("check-adjunction " + data("terminal-2")).code == 0);
    CHECK(gop_run("check-adjunction " + data("terminal-2") + " --lower " + data("terminal-1")).code == 0);
    CHECK(gop_run("check-adjunction " + data("terminal-2") + " --lower " + data("terminal-2")).code == 2);
}

TEST_CASE("reports are deterministic") {
    for (const std::string& args : {"check-unital " + data("bracketing2") + " --gamma parity --max-nodes 4 --seed 3",
                                   "lift " + data("one-arrow-multicat") + " --jobs 4",
                                   "check-scheme " + data("shuffle-row-reading") + " --pretty"}) {
        auto a = gop_run(args), b = gop_run(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        CHECK_FALSE(a.out.empty());
    }
}

TEST_CASE("input errors exit with 2, unknown subcommands fail") {
    auto bad = write_temp("bad.json", "{\"type\": \"operad\", ");
    CHECK(gop_run("check-operad " + bad).code == 2);
    auto wrong = write_temp("wrong.json", R"({"type": "operad", "dim": 1, "fibres": {"[*]": 3}, "units": [], "subst": []})");
    CHECK(gop_run("check-operad " + wrong).code == 2);
    CHECK(gop_run("check-operad does-not-exist.json").code == 2);
    CHECK(gop_run("check-unital " + data("bracketing2")).code == 2);
    CHECK(gop_run("shuffle '[[*'").code == 2);
    CHECK(gop_run("frobnicate").code != 0);
    CHECK(gop_run("").code != 0);
}
