#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fadapt/active.hpp"
#include "fadapt/eval.hpp"
#include "fadapt/frechet.hpp"
#include "fadapt/io.hpp"
#include "fadapt/locus.hpp"
#include "fadapt/metric_space.hpp"

namespace fadapt::cli {

namespace {

// -----------------------------
// Format reference for --help
// -----------------------------

constexpr const char* kGraphFormat =
    "Graph (edge list, whitespace separated, 0-based ids, optional weight):\n"
    "    #labels: 1,2,3\n"
    "    0\t1\n"
    "    0\t2\t2.5\n"
    "  Optional headers: '#vertices: N', '#kind: tree|phylogenetic_tree|grid R C|complete|generic'.\n";

constexpr const char* kNamesFormat =
    "Names (one per line, line i names vertex i):\n"
    "    animal\n"
    "    cat\n"
    "    dog\n";

constexpr const char* kEmbeddingsFormat =
    "Embeddings (CSV, one row of floats per class):\n"
    "    0.1,0.7,0.2\n"
    "    0.3,0.1,0.9\n"
    "    0.5,0.5,0.0\n";

constexpr const char* kScoresFormat =
    "Scores (CSV, header of observed class ids, one row per sample):\n"
    "    0,2,4\n"
    "    0.5,0.3,0.2\n"
    "    0.1,0.1,0.8\n";

constexpr const char* kPredictionsFormat =
    "Predictions (CSV):\n"
    "    sample_index,canonical_label,tie_set_size\n"
    "    0,1,1\n"
    "    1,4,2\n";

constexpr const char* kTruthsFormat =
    "Truths (CSV, 'truth' column or the first column):\n"
    "    truth\n"
    "    1\n"
    "    4\n";

constexpr const char* kLocusFormat =
    "Locus (CSV, member labels with witness weights over the observed classes):\n"
    "    label,w_0,w_4\n"
    "    0,1,0\n"
    "    2,0.5,0.5\n";

constexpr const char* kTrajectoryFormat =
    "Trajectory (CSV):\n"
    "    trial,round,num_observed,locus_size,policy,seed\n"
    "    0,0,2,5,active,7\n"
    "    0,1,3,9,active,7\n";

constexpr const char* kSummaryFormat =
    "Summary (CSV, per policy and round over trials):\n"
    "    policy,round,trials,mean_observed,mean_locus_size,stderr_locus_size\n"
    "    active,1,10,3,9.4,0.31\n"
    "    passive,1,10,3,7.1,0.52\n";

constexpr const char* kRegionsFormat =
    "Regions (CSV, integer weights a+b+c=R on the three anchors, predicted label):\n"
    "    a,b,c,label\n"
    "    60,0,0,0\n"
    "    59,1,0,0\n";

constexpr const char* kMappingFormat =
    "Mapping (CSV, original vertex to supernode):\n"
    "    vertex,supernode\n"
    "    0,0\n"
    "    1,0\n";

constexpr const char* kReportFormat =
    "Reports are JSON objects, e.g.\n"
    "    {\"mean_sq_distance\": 0.5,\n"
    "     \"zero_one_error\": 0.5,\n"
    "     \"normalized_msd\": 0.125, \"n_samples\": 2}\n";

// -----------------------------
// File helpers
// -----------------------------

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return in;
}

MetricSpace load_space(const std::string& path) {
    auto in = open_input(path);
    return MetricSpace(io::read_edge_list(in));
}

// Writes to `path`, or to `fallback` when the path is empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            stream_ = &fallback;
            return;
        }
        file_.open(path);
        if (!file_) throw ValidationError("cannot write '" + path + "'");
        stream_ = &file_;
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

ObservedSet parse_observed(const std::string& text, const MetricSpace& space) {
    ObservedSet obs(io::parse_id_list(text));
    obs.validate(space);
    return obs;
}

// -----------------------------
// Subcommands
// -----------------------------

struct PredictArgs {
    std::string graph, embeddings, probs, lambda, output;
    double beta = 2.0;
    double temperature = 1.0;
    CLI::Option* temperature_opt = nullptr;
};

void cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
    if (a.graph.empty() == a.embeddings.empty()) throw ValidationError("give exactly one of GRAPH or --embeddings");
    std::optional<MetricSpace> space;
    if (!a.embeddings.empty()) {
        auto in = open_input(a.embeddings);
        auto metric = metric_from_embeddings(io::read_embeddings(in));
        for (const auto& w : metric.warnings) err << "warning: " << w << '\n';
        space.emplace(std::move(metric.space));
    } else {
        space.emplace(load_space(a.graph));
    }
    auto in = open_input(a.probs);
    const auto scores = io::read_score_matrix(in);
    ObservedSet observed(scores.classes);
    if (!a.lambda.empty() && io::parse_id_list(a.lambda) != scores.classes)
        throw ValidationError("--lambda does not match the class ids in the score header");
    observed.validate(*space);

    const DistanceAdaptor adaptor(*space, observed);
    const bool logits = a.temperature_opt->count() > 0;
    std::vector<TieSet> predictions;
    predictions.reserve(scores.rows.size());
    for (const auto& row : scores.rows) {
        const auto w = logits ? softmax_with_temperature(row, a.temperature) : row;
        validate_weights(w, observed.size());
        predictions.push_back(a.beta == 2.0 ? adaptor.predict(w) : beta_predict(*space, observed, w, a.beta));
    }
    Sink sink(a.output, out);
    io::write_predictions(*sink, predictions);
}

struct LocusArgs {
    std::string graph, lambda, method = "auto", names, output, report;
    std::size_t resolution = 0;
    double budget = kDefaultSweepBudget;
    CLI::Option* resolution_opt = nullptr;
};

void cmd_locus(const LocusArgs& a, std::ostream& out, std::ostream& err) {
    const auto space = load_space(a.graph);
    const auto observed = parse_observed(a.lambda, space);
    std::optional<std::size_t> resolution;
    if (a.resolution_opt->count()) resolution = a.resolution;

    std::vector<std::string> names;
    if (!a.names.empty()) {
        auto in = open_input(a.names);
        names = io::read_names(in);
    }

    Locus locus;
    nlohmann::json report;
    if (a.method == "both") {
        auto check = check_pairwise_decomposable(space, observed, resolution, a.budget);
        if (!check.decomposable)
            err << "warning: pairwise and general loci differ (first at vertex " << *check.counterexample << ")\n";
        report = {{"decomposable", check.decomposable},
                  {"counterexample", check.counterexample ? nlohmann::json(*check.counterexample) : nlohmann::json()},
                  {"pairwise", io::to_json(check.pairwise, observed)},
                  {"general", io::to_json(check.general, observed)}};
        locus = std::move(check.general);
    } else {
        if (a.method == "pairwise")
            locus = locus_pairwise(space, observed, resolution);
        else if (a.method == "general")
            locus = locus_general(space, observed, resolution, a.budget);
        else
            locus = compute_locus(space, observed, resolution, a.budget);
        report = io::to_json(locus, observed);
    }
    if (locus.lower_bound) err << "note: the swept locus is a lower bound for this space\n";

    Sink sink(a.output, out);
    io::write_locus_csv(*sink, locus, observed, names.empty() ? nullptr : &names);
    if (!a.report.empty()) {
        Sink rep(a.report, out);
        *rep << report.dump(2) << '\n';
    }
}

struct CoverArgs {
    std::string graph, type = "auto", output;
};

void cmd_cover(const CoverArgs& a, std::ostream& out, std::ostream& err) {
    const auto space = load_space(a.graph);
    const auto kind = space.graph().kind();
    CoverReport report;
    std::string type = a.type;
    if (type == "auto") {
        switch (kind) {
            case GraphKind::tree: type = "tree"; break;
            case GraphKind::phylogenetic_tree: type = "phylo"; break;
            case GraphKind::grid: type = "grid"; break;
            case GraphKind::complete: type = "complete"; break;
            default:
                throw ValidationError("no cover construction for " + to_string(kind) +
                                      " graphs; use `locus` to test candidate sets");
        }
    }
    if (type == "tree")
        report = min_cover_tree(space);
    else if (type == "phylo")
        report = phylo_cover(space);
    else if (type == "grid")
        report = min_cover_grid(space);
    else if (type == "identifying")
        report = identifying_cover_grid(space);
    else
        report = complete_cover(space);
    if (!report.message.empty()) err << report.message << '\n';
    Sink sink(a.output, out);
    *sink << io::to_json(report).dump(2) << '\n';
}

struct ActiveArgs {
    std::string graph, lambda, policy = "both", output, summary;
    double theta = 0.0;
    std::size_t k = 0, rounds = 20, trials = 1;
    std::uint64_t seed = 0;
    bool mst = false;
    CLI::Option* theta_opt = nullptr;
};

void cmd_active(const ActiveArgs& a, std::ostream& out, std::ostream& err) {
    auto graph = [&] {
        auto in = open_input(a.graph);
        return io::read_edge_list(in);
    }();
    if (graph.kind() != GraphKind::tree) {
        if (!a.mst)
            throw ValidationError("class selection needs a tree, got a " + to_string(graph.kind()) +
                                  " graph; pass --mst to run on its minimum spanning tree (approximate)");
        err << "note: running on the minimum spanning tree; results are approximate\n";
        graph = minimum_spanning_tree(graph);
    }
    const MetricSpace space(std::move(graph));

    const bool gibbs = a.theta_opt->count() > 0;
    if (gibbs == !a.lambda.empty()) throw ValidationError("give exactly one of --lambda or --gibbs-theta");
    if (gibbs && a.k == 0) throw ValidationError("--gibbs-theta needs --k");
    std::optional<ObservedSet> fixed;
    if (!gibbs) fixed = parse_observed(a.lambda, space);

    std::vector<Policy> policies;
    if (a.policy != "passive") policies.push_back(Policy::active);
    if (a.policy != "active") policies.push_back(Policy::passive);

    std::vector<Trajectory> trajectories;
    for (std::size_t t = 0; t < a.trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(a.seed, "trial", t);
        const ObservedSet initial = gibbs ? gibbs_sample_classes(space, a.k, a.theta, trial_seed).observed : *fixed;
        for (Policy p : policies) {
            auto traj = run_selection(space, initial, a.rounds, p, trial_seed);
            traj.trial = t;
            traj.seed = a.seed;
            trajectories.push_back(std::move(traj));
        }
    }
    Sink sink(a.output, out);
    io::write_trajectory_csv(*sink, trajectories);
    if (!a.summary.empty()) {
        Sink sum(a.summary, out);
        io::write_summary_csv(*sum, compare_policies(trajectories));
    }
}

struct EvalArgs {
    std::string graph, predictions, truths, logits, lambda, output;
    std::vector<double> temperatures;
    std::size_t bins = 10;
};

void cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream&) {
    const auto space = load_space(a.graph);
    auto truth_in = open_input(a.truths);
    const auto truths = io::read_label_column(truth_in, "truth");
    nlohmann::json report;
    if (!a.logits.empty()) {
        if (!a.predictions.empty()) throw ValidationError("give either --predictions or --logits, not both");
        auto in = open_input(a.logits);
        const auto scores = io::read_score_matrix(in);
        ObservedSet observed(scores.classes);
        observed.validate(space);
        const std::vector<double> temps = a.temperatures.empty() ? std::vector<double>{1.0} : a.temperatures;
        report = io::to_json(temperature_sweep(space, observed, scores.rows, truths, temps, a.bins));
    } else {
        if (a.predictions.empty()) throw ValidationError("give --predictions or --logits");
        auto in = open_input(a.predictions);
        const auto preds = io::read_label_column(in, "canonical_label");
        report = io::to_json(evaluate(space, preds, truths));
    }
    Sink sink(a.output, out);
    *sink << report.dump(2) << '\n';
}

struct GenArgs {
    std::string family, output;
    std::size_t n = 0, k = 4, m = 2, rows = 0, cols = 0, max_retries = 100;
    double p = 0.1;
    std::uint64_t seed = 0;
};

void cmd_gen(const GenArgs& a, std::ostream& out, std::ostream&) {
    std::optional<LabelGraph> g;
    if (a.family == "grid") {
        g.emplace(make_grid(a.rows, a.cols));
    } else if (a.family == "complete") {
        g.emplace(make_complete(a.n));
    } else {
        RandomGraphParams params;
        params.n = a.n;
        params.k = a.k;
        params.p = a.p;
        params.m = a.m;
        params.max_retries = a.max_retries;
        if (a.family == "tree") params.family = RandomFamily::tree;
        else if (a.family == "phylo") params.family = RandomFamily::phylo_tree;
        else if (a.family == "ws") params.family = RandomFamily::watts_strogatz;
        else if (a.family == "er") params.family = RandomFamily::erdos_renyi;
        else params.family = RandomFamily::barabasi_albert;
        g.emplace(generate_random(params, a.seed));
    }
    Sink sink(a.output, out);
    *sink << io::write_edge_list(*g);
}

struct SummarizeArgs {
    std::string graph, output, mapping;
    std::size_t target = 1;
    std::uint64_t seed = 0;
};

void cmd_summarize(const SummarizeArgs& a, std::ostream& out, std::ostream&) {
    auto in = open_input(a.graph);
    const auto graph = io::read_edge_list(in);
    const auto summary = summarize_graph(graph, a.target, a.seed);
    Sink sink(a.output, out);
    *sink << io::write_edge_list(summary.graph);
    if (!a.mapping.empty()) {
        Sink map(a.mapping, out);
        *map << "vertex,supernode\n";
        for (std::size_t v = 0; v < summary.mapping.size(); ++v) *map << v << ',' << summary.mapping[v] << '\n';
    }
}

struct RegionsArgs {
    std::string graph, lambda, output;
    std::size_t resolution = 60;
};

void cmd_regions(const RegionsArgs& a, std::ostream& out, std::ostream&) {
    const auto space = load_space(a.graph);
    const auto anchors = parse_observed(a.lambda, space);
    Sink sink(a.output, out);
    io::write_regions_csv(*sink, simplex_regions(space, anchors, a.resolution));
}

std::string join(std::initializer_list<const char*> parts) {
    std::string s;
    for (const char* p : parts) s += std::string(p) + "\n";
    return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fréchet-mean prediction over metric label spaces, loci, covers and class selection.", "fadapt"};
    app.require_subcommand(1);
    app.footer(join({kGraphFormat, kNamesFormat, kEmbeddingsFormat, kScoresFormat, kPredictionsFormat, kTruthsFormat,
                     kLocusFormat, kTrajectoryFormat, kSummaryFormat, kRegionsFormat, kMappingFormat, kReportFormat,
                     "Exit codes: 0 success, 1 invalid input, 2 locus sweep over budget."}));

    PredictArgs pa;
    auto* predict = app.add_subcommand("predict", "Predict labels from per-class scores");
    predict->add_option("graph", pa.graph, "Label graph (edge list)");
    predict->add_option("--embeddings", pa.embeddings, "Class embeddings CSV instead of a graph");
    predict->add_option("--probs", pa.probs, "Score matrix CSV")->required();
    predict->add_option("--lambda", pa.lambda, "Observed class ids; must match the score header");
    predict->add_option("--beta", pa.beta, "Distance exponent (2 = Fréchet mean, 1 = median)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    pa.temperature_opt = predict->add_option("--temperature", pa.temperature, "Treat rows as logits, softmax at T")
                             ->check(CLI::PositiveNumber);
    predict->add_option("-o,--output", pa.output, "Predictions CSV (default stdout)");
    predict->footer(join({kGraphFormat, kEmbeddingsFormat, kScoresFormat, kPredictionsFormat}));

    LocusArgs la;
    auto* locus = app.add_subcommand("locus", "Compute the locus of an observed class set");
    locus->add_option("graph", la.graph, "Label graph")->required();
    locus->add_option("--lambda", la.lambda, "Observed class ids, e.g. 0,4,7")->required();
    locus->add_option("--method", la.method, "auto|pairwise|general|both")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "pairwise", "general", "both"}));
    la.resolution_opt =
        locus->add_option("--resolution", la.resolution, "Weight grid steps (default ceil(diameter))")->check(CLI::PositiveNumber);
    locus->add_option("--budget", la.budget, "Largest weight grid the general sweep may visit")->capture_default_str();
    locus->add_option("--names", la.names, "Names file for an extra name column");
    locus->add_option("-o,--output", la.output, "Locus CSV (default stdout)");
    locus->add_option("--report", la.report, "Write a JSON report here");
    locus->footer(join({kGraphFormat, kNamesFormat, kLocusFormat}));

    CoverArgs ca;
    auto* cover = app.add_subcommand("cover", "Construct a locus cover");
    cover->add_option("graph", ca.graph, "Label graph")->required();
    cover->add_option("--type", ca.type, "auto|tree|grid|phylo|identifying|complete")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "tree", "grid", "phylo", "identifying", "complete"}));
    cover->add_option("-o,--output", ca.output, "Cover report JSON (default stdout)");
    cover->footer(join({kGraphFormat,
                        "Cover report (JSON):\n"
                        "    {\"construction\": \"grid_opposite_corners\", \"cover\": [0, 8],\n"
                        "     \"is_locus_cover\": true, \"nontrivial\": true,\n"
                        "     \"certificates\": [{\"vertex\": 4, \"weights\": [0.5, 0.5], \"singleton\": true}]}\n"}));

    ActiveArgs aa;
    auto* active = app.add_subcommand("active", "Compare active and passive class selection");
    active->add_option("graph", aa.graph, "Label graph (a tree, or any graph with --mst)")->required();
    active->add_option("--lambda", aa.lambda, "Initial observed classes");
    aa.theta_opt = active->add_option("--gibbs-theta", aa.theta, "Draw the initial classes with this concentration")
                       ->check(CLI::NonNegativeNumber);
    active->add_option("--k", aa.k, "Number of initial classes drawn with --gibbs-theta");
    active->add_option("--rounds", aa.rounds, "Selection rounds")->capture_default_str();
    active->add_option("--trials", aa.trials, "Independent trials")->capture_default_str()->check(CLI::PositiveNumber);
    active->add_option("--policy", aa.policy, "active|passive|both")
        ->capture_default_str()
        ->check(CLI::IsMember({"active", "passive", "both"}));
    active->add_option("--seed", aa.seed, "Seed")->capture_default_str();
    active->add_flag("--mst", aa.mst, "Run on the minimum spanning tree of a non-tree graph (approximate)");
    active->add_option("-o,--output", aa.output, "Trajectory CSV (default stdout)");
    active->add_option("--summary", aa.summary, "Write per-round policy means here");
    active->footer(join({kGraphFormat, kTrajectoryFormat, kSummaryFormat}));

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Score predictions or sweep softmax temperatures");
    eval->add_option("graph", ea.graph, "Label graph")->required();
    eval->add_option("--truths", ea.truths, "Ground-truth labels CSV")->required();
    eval->add_option("--predictions", ea.predictions, "Predictions CSV");
    eval->add_option("--logits", ea.logits, "Logit matrix CSV for a temperature sweep");
    eval->add_option("--temperatures", ea.temperatures, "Temperatures, e.g. 0.5,1,2")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    eval->add_option("--bins", ea.bins, "Calibration bins")->capture_default_str()->check(CLI::PositiveNumber);
    eval->add_option("-o,--output", ea.output, "Report JSON (default stdout)");
    eval->footer(join({kGraphFormat, kPredictionsFormat, kTruthsFormat, kScoresFormat, kReportFormat}));

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "Generate a label graph");
    gen->add_option("family", ga.family, "tree|phylo|ws|er|ba|grid|complete")
        ->required()
        ->check(CLI::IsMember({"tree", "phylo", "ws", "er", "ba", "grid", "complete"}));
    gen->add_option("--n", ga.n, "Vertices (leaves for phylo)");
    gen->add_option("--k", ga.k, "Watts-Strogatz ring degree")->capture_default_str();
    gen->add_option("--p", ga.p, "Rewiring (ws) or edge (er) probability")->capture_default_str();
    gen->add_option("--m", ga.m, "Barabasi-Albert edges per vertex")->capture_default_str();
    gen->add_option("--rows", ga.rows, "Grid rows");
    gen->add_option("--cols", ga.cols, "Grid columns");
    gen->add_option("--max-retries", ga.max_retries, "Redraws allowed for disconnected samples")->capture_default_str();
    gen->add_option("--seed", ga.seed, "Seed")->capture_default_str();
    gen->add_option("-o,--output", ga.output, "Edge list (default stdout)");
    gen->footer(kGraphFormat);

    SummarizeArgs sa;
    auto* summarize = app.add_subcommand("summarize", "Merge neighbourhoods into supernodes");
    summarize->add_option("graph", sa.graph, "Label graph")->required();
    summarize->add_option("--target", sa.target, "Largest number of supernodes to keep")
        ->required()
        ->check(CLI::PositiveNumber);
    summarize->add_option("--seed", sa.seed, "Seed")->capture_default_str();
    summarize->add_option("-o,--output", sa.output, "Quotient edge list (default stdout)");
    summarize->add_option("--mapping", sa.mapping, "Write the vertex to supernode mapping here");
    summarize->footer(join({kGraphFormat, kMappingFormat}));

    RegionsArgs ra;
    auto* regions = app.add_subcommand("regions", "Label predicted at each point of a simplex grid");
    regions->add_option("graph", ra.graph, "Label graph")->required();
    regions->add_option("--lambda", ra.lambda, "Exactly three observed classes")->required();
    regions->add_option("--resolution", ra.resolution, "Grid steps per side")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    regions->add_option("-o,--output", ra.output, "Region CSV (default stdout)");
    regions->footer(join({kGraphFormat, kRegionsFormat}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        if (predict->parsed()) cmd_predict(pa, out, err);
        else if (locus->parsed()) cmd_locus(la, out, err);
        else if (cover->parsed()) cmd_cover(ca, out, err);
        else if (active->parsed()) cmd_active(aa, out, err);
        else if (eval->parsed()) cmd_eval(ea, out, err);
        else if (gen->parsed()) cmd_gen(ga, out, err);
        else if (summarize->parsed()) cmd_summarize(sa, out, err);
        else if (regions->parsed()) cmd_regions(ra, out, err);
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "; lower --resolution, raise --budget, or use --method pairwise\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    out.flush();
    return 0;
}

}  // namespace fadapt::cli
