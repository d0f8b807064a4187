#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "doctest.h"
#include "fadapt/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "fadapt");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = fadapt::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("fadapt_cli_test_" + std::to_string(::getpid()) + "_" +
                                             std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& content) const {
        const auto p = path_ / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("predict") {
    TempDir dir;
    const auto p3 = dir.write("p3.tsv", "0\t1\n1\t2\n");
    const auto probs = dir.write("probs.csv", "0,2\n0.5,0.5\n1,0\n");
    auto r = run({"predict", p3, "--probs", probs});
    CHECK(r.code == 0);
    CHECK(r.out == "sample_index,canonical_label,tie_set_size\n0,1,1\n1,0,1\n");

    r = run({"predict", p3, "--probs", probs, "--beta", "1"});
    CHECK(r.code == 0);
    CHECK(lines(r.out)[1] == "0,0,3");

    SUBCASE("complete graph reproduces argmax") {
        const auto k4 = dir.write("k4.tsv", fadapt::io::write_edge_list(fadapt::make_complete(4)));
        const auto p = dir.write("p4.csv", "0,1,2,3\n0.1,0.6,0.2,0.1\n0.4,0.1,0.1,0.4\n0.1,0.1,0.1,0.7\n");
        const auto out = run({"predict", k4, "--probs", p}).out;
        CHECK(out == "sample_index,canonical_label,tie_set_size\n0,1,1\n1,0,2\n2,3,1\n");
    }
    SUBCASE("temperature treats rows as logits") {
        const auto logits = dir.write("logits.csv", "0,2\n2,0\n");
        CHECK(lines(run({"predict", p3, "--probs", logits, "--temperature", "1"}).out)[1] == "0,0,1");
        CHECK(lines(run({"predict", p3, "--probs", logits, "--temperature", "4"}).out)[1] == "0,1,1");
    }
    SUBCASE("embeddings instead of a graph") {
        const auto emb = dir.write("emb.csv", "0\n1\n2\n");
        const auto out = run({"predict", "--embeddings", emb, "--probs", probs}).out;
        CHECK(lines(out)[1] == "0,1,1");
    }
    SUBCASE("errors exit 1") {
        CHECK(run({"predict", p3, "--probs", dir.write("bad.csv", "0,7\n0.5,0.5\n")}).code == 1);
        CHECK(run({"predict", p3, "--probs", dir.write("neg.csv", "0,2\n-1,2\n")}).code == 1);
        CHECK(run({"predict", p3, "--probs", probs, "--lambda", "0,1"}).code == 1);
        CHECK(run({"predict", dir.file("missing.tsv"), "--probs", probs}).code == 1);
        const auto bad = run({"predict", dir.write("bad.tsv", "0 1\n1 x\n"), "--probs", probs});
        CHECK(bad.code == 1);
        CHECK(bad.err.find("line 2") != std::string::npos);
        CHECK(run({"predict"}).code == 1);
    }
}

TEST_CASE("locus") {
    TempDir dir;
    const auto tree = dir.write("tree.tsv", "0 1\n1 2\n1 3\n3 4\n");
    auto r = run({"locus", tree, "--lambda", "0,2,4"});
    CHECK(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == "label,w_0,w_2,w_4");
    for (int v = 0; v < 5; ++v) CHECK(rows[v + 1].rfind(std::to_string(v) + ",", 0) == 0);

    const auto k4 = dir.write("k4.tsv", fadapt::io::write_edge_list(fadapt::make_complete(4)));
    r = run({"locus", k4, "--lambda", "1,3", "--report", dir.file("rep.json")});
    CHECK(r.code == 0);
    CHECK(lines(r.out).size() == 3);
    const auto rep = nlohmann::json::parse(slurp(dir.file("rep.json")));
    CHECK(rep["members"] == nlohmann::json::array({1, 3}));
    CHECK(rep["method"] == "general");

    SUBCASE("method mismatch is flagged") {
        const double h = std::sqrt(3.0) / 2.0;
        const auto m = fadapt::metric_from_embeddings(
            {{0, 0}, {1, 0}, {0.5, h}, {0.5, 0}, {0.75, h / 2}, {0.25, h / 2}, {0.5, h / 3}});
        const auto tri = dir.write("tri.tsv", fadapt::io::write_edge_list(m.space.graph()));
        r = run({"locus", tri, "--lambda", "0,1,2", "--method", "both", "--resolution", "12", "--report",
                 dir.file("both.json")});
        CHECK(r.code == 0);
        CHECK(r.err.find("differ") != std::string::npos);
        const auto both = nlohmann::json::parse(slurp(dir.file("both.json")));
        CHECK(both["decomposable"] == false);
        CHECK(both["counterexample"] == 6);
    }
    SUBCASE("budget exit code") {
        r = run({"locus", k4, "--lambda", "0,1,2,3", "--method", "general", "--resolution", "1000"});
        CHECK(r.code == 2);
        CHECK(r.err.find("budget") != std::string::npos);
        r = run({"locus", k4, "--lambda", "0,1,2", "--method", "general", "--resolution", "9", "--budget", "100"});
        CHECK(r.code == 2);
    }
    CHECK(run({"locus", tree, "--lambda", "0,9"}).code == 1);
    CHECK(run({"locus", tree, "--lambda", "0,2", "--method", "magic"}).code == 1);
}

TEST_CASE("cover") {
    TempDir dir;
    const auto grid = dir.write("grid.tsv", fadapt::io::write_edge_list(fadapt::make_grid(3, 3)));
    auto r = run({"cover", grid});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["cover"] == nlohmann::json::array({0, 8}));
    CHECK(j["is_locus_cover"] == true);

    j = nlohmann::json::parse(run({"cover", grid, "--type", "identifying"}).out);
    CHECK(j["cover"] == nlohmann::json::array({0, 2, 6, 8}));
    CHECK(j["is_identifying"] == true);

    const auto star = dir.write("star.tsv", "#labels: 1,2,3\n0 1\n0 2\n0 3\n");
    j = nlohmann::json::parse(run({"cover", star}).out);
    CHECK(j["cover"].size() == 3);
    CHECK(j["construction"] == "phylogenetic_greedy");

    const auto k4 = dir.write("k4.tsv", fadapt::io::write_edge_list(fadapt::make_complete(4)));
    r = run({"cover", k4});
    CHECK(r.code == 0);
    CHECK(r.err.find("no nontrivial cover exists") != std::string::npos);
    CHECK(nlohmann::json::parse(r.out)["nontrivial"] == false);

    const auto cycle = dir.write("c4.tsv", "0 1\n1 2\n2 3\n3 0\n");
    CHECK(run({"cover", cycle}).code == 1);
    CHECK(run({"cover", grid, "--type", "tree"}).code == 1);
}

TEST_CASE("active") {
    TempDir dir;
    const auto p5 = dir.write("p5.tsv", "0 1\n1 2\n2 3\n3 4\n");
    auto r = run({"active", p5, "--lambda", "0,1", "--rounds", "1", "--policy", "active"});
    CHECK(r.code == 0);
    CHECK(r.out == "trial,round,num_observed,locus_size,policy,seed\n0,0,2,2,active,0\n0,1,3,5,active,0\n");

    SUBCASE("seeded runs are byte-identical") {
        fadapt::RandomGraphParams p{fadapt::RandomFamily::tree, 30};
        const auto t = dir.write("t.tsv", fadapt::io::write_edge_list(fadapt::generate_random(p, 5)));
        const std::vector<std::string> args{"active", t, "--gibbs-theta", "0.5", "--k", "3", "--rounds", "5",
                                            "--trials", "10", "--seed", "42", "--summary", dir.file("s1.csv")};
        const auto a = run(args);
        auto args2 = args;
        args2.back() = dir.file("s2.csv");
        const auto b = run(args2);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(slurp(dir.file("s1.csv")) == slurp(dir.file("s2.csv")));
        CHECK(lines(a.out).size() == 1 + 10 * 2 * 6);
        CHECK(lines(slurp(dir.file("s1.csv"))).size() == 1 + 2 * 6);
    }
    SUBCASE("active leads passive on a large tree") {
        fadapt::RandomGraphParams p{fadapt::RandomFamily::tree, 100};
        const auto t = dir.write("big.tsv", fadapt::io::write_edge_list(fadapt::generate_random(p, 1)));
        r = run({"active", t, "--gibbs-theta", "0", "--k", "3", "--rounds", "20", "--trials", "10", "--seed", "3",
                 "--summary", dir.file("sum.csv")});
        REQUIRE(r.code == 0);
        const auto rows = lines(slurp(dir.file("sum.csv")));
        REQUIRE(rows.size() == 1 + 2 * 21);
        for (std::size_t i = 1; i <= 21; ++i) {
            auto field = [](const std::string& row, int col) {
                std::istringstream in(row);
                std::string f;
                for (int c = 0; c <= col; ++c) std::getline(in, f, ',');
                return std::stod(f);
            };
            CHECK(field(rows[i], 4) >= field(rows[i + 21], 4));
        }
    }
    SUBCASE("non-trees need --mst") {
        const auto cycle = dir.write("c5.tsv", "0 1\n1 2\n2 3\n3 4\n4 0\n");
        r = run({"active", cycle, "--lambda", "0,1"});
        CHECK(r.code == 1);
        CHECK(r.err.find("--mst") != std::string::npos);
        r = run({"active", cycle, "--lambda", "0,1", "--mst"});
        CHECK(r.code == 0);
        CHECK(r.err.find("approximate") != std::string::npos);
    }
    CHECK(run({"active", p5}).code == 1);
    CHECK(run({"active", p5, "--lambda", "0", "--gibbs-theta", "1", "--k", "2"}).code == 1);
}

TEST_CASE("eval") {
    TempDir dir;
    const auto p3 = dir.write("p3.tsv", "0 1\n1 2\n");
    const auto preds = dir.write("preds.csv", "sample_index,canonical_label,tie_set_size\n0,2,1\n");
    const auto truths = dir.write("truths.csv", "truth\n0\n");
    auto r = run({"eval", p3, "--predictions", preds, "--truths", truths});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["mean_sq_distance"] == 4.0);
    CHECK(j["normalized_msd"] == 1.0);

    const auto k4 = dir.write("k4.tsv", fadapt::io::write_edge_list(fadapt::make_complete(4)));
    j = nlohmann::json::parse(
        run({"eval", k4, "--predictions", dir.write("p.csv", "0\n1\n2\n3\n"), "--truths", dir.write("t.csv", "0\n1\n3\n2\n")})
            .out);
    CHECK(j["mean_sq_distance"] == 0.5);
    CHECK(j["zero_one_error"] == 0.5);

    const auto logits = dir.write("logits.csv", "0,2\n2,0\n2,0\n0,2\n");
    const auto mids = dir.write("mids.csv", "1\n1\n1\n");
    r = run({"eval", p3, "--logits", logits, "--truths", mids, "--temperatures", "1,4"});
    CHECK(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["best_msd_temperature"] == 4.0);
    CHECK(j["points"].size() == 2);

    CHECK(run({"eval", p3, "--predictions", preds, "--truths", dir.write("t2.csv", "0\n1\n")}).code == 1);
    CHECK(run({"eval", p3, "--truths", truths}).code == 1);
}

TEST_CASE("gen and summarize") {
    TempDir dir;
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"gen", "tree", "--n", "5", "--seed", "1"},
          {"gen", "phylo", "--n", "4", "--seed", "2"},
          {"gen", "er", "--n", "10", "--p", "0.5", "--seed", "7"},
          {"gen", "ws", "--n", "12", "--k", "4", "--p", "0.2"},
          {"gen", "ba", "--n", "12", "--m", "2"},
          {"gen", "grid", "--rows", "3", "--cols", "4"},
          {"gen", "complete", "--n", "5"}}) {
        const auto r = run(args);
        REQUIRE(r.code == 0);
        CHECK(r.out == run(args).out);
        CHECK_NOTHROW(fadapt::io::parse_edge_list(r.out));
    }
    const auto tree = run({"gen", "tree", "--n", "5", "--seed", "1"}).out;
    CHECK(fadapt::io::parse_edge_list(tree).num_edges() == 4);
    const auto phylo = fadapt::io::parse_edge_list(run({"gen", "phylo", "--n", "4"}).out);
    CHECK(phylo.kind() == fadapt::GraphKind::phylogenetic_tree);
    CHECK(phylo.num_labels() == 4);
    CHECK(run({"gen", "er", "--n", "30", "--p", "0.001", "--max-retries", "3"}).code == 1);
    CHECK(run({"gen", "hypercube", "--n", "3"}).code == 1);

    const auto g = dir.write("g.tsv", run({"gen", "tree", "--n", "50", "--seed", "4"}).out);
    const auto r = run({"summarize", g, "--target", "10", "--seed", "8", "--mapping", dir.file("map.csv")});
    CHECK(r.code == 0);
    const auto q = fadapt::io::parse_edge_list(r.out);
    CHECK(q.num_vertices() <= 10);
    const auto map = lines(slurp(dir.file("map.csv")));
    CHECK(map.size() == 51);
    CHECK(map[0] == "vertex,supernode");
}

TEST_CASE("regions") {
    TempDir dir;
    const auto k3 = dir.write("k3.tsv", "0 1\n1 2\n2 0\n");
    const auto r = run({"regions", k3, "--lambda", "0,1,2", "--resolution", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "a,b,c,label\n2,0,0,0\n1,1,0,0\n1,0,1,0\n0,2,0,1\n0,1,1,1\n0,0,2,2\n");
    CHECK(lines(run({"regions", k3, "--lambda", "0,1,2"}).out).size() == 1 + 61 * 62 / 2);
    CHECK(run({"regions", k3, "--lambda", "0,1"}).code == 1);
}

TEST_CASE("help documents formats") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    for (const char* needle : {"#labels:", "sample_index,canonical_label,tie_set_size", "a,b,c,label",
                               "trial,round,num_observed,locus_size,policy,seed", "Exit codes"})
        CHECK(r.out.find(needle) != std::string::npos);
    const auto sub = run({"predict", "--help"});
    CHECK(sub.code == 0);
    CHECK(sub.out.find("Scores (CSV") != std::string::npos);
}
