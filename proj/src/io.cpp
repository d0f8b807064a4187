#include "fadapt/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace fadapt::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const std::size_t b = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    T value{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

std::optional<VertexId> parse_id(std::string_view s) {
    const auto v = parse_number<std::uint64_t>(s);
    if (!v || *v >= std::numeric_limits<VertexId>::max()) return std::nullopt;
    return static_cast<VertexId>(*v);
}

std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
    return lines;
}

std::vector<double> parse_double_row(std::string_view line, std::size_t line_no) {
    std::vector<double> row;
    for (auto field : split(line, ',')) {
        const auto v = parse_number<double>(field);
        if (!v) throw ParseError(line_no, "expected a number, got '" + std::string(field) + "'");
        if (!std::isfinite(*v)) throw ParseError(line_no, "non-finite value '" + std::string(field) + "'");
        row.push_back(*v);
    }
    return row;
}

bool looks_numeric(std::string_view line) {
    const auto fields = split(line, ',');
    return std::all_of(fields.begin(), fields.end(), [](auto f) { return parse_number<double>(f).has_value(); });
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, ptr);
}

std::vector<VertexId> parse_id_list(std::string_view text) {
    std::vector<VertexId> ids;
    text = trim(text);
    if (text.empty()) return ids;
    for (auto field : split(text, ',')) {
        const auto id = parse_id(field);
        if (!id) throw ValidationError("invalid vertex id '" + std::string(field) + "'");
        ids.push_back(*id);
    }
    return ids;
}

LabelGraph parse_edge_list(std::string_view text) {
    std::vector<Edge> edges;
    std::optional<std::vector<VertexId>> labels;
    std::optional<std::size_t> declared_vertices;
    std::optional<GraphKind> kind;
    GridShape shape;
    std::size_t max_id_plus_one = 0;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        const auto raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto body = trim(line.substr(1));
            const auto colon = body.find(':');
            if (colon == std::string_view::npos) continue;
            const auto key = trim(body.substr(0, colon));
            const auto value = trim(body.substr(colon + 1));
            if (key == "labels") {
                try {
                    labels = parse_id_list(value);
                } catch (const ValidationError& e) {
                    throw ParseError(line_no, e.what());
                }
            } else if (key == "vertices") {
                const auto n = parse_number<std::size_t>(value);
                if (!n) throw ParseError(line_no, "invalid vertex count '" + std::string(value) + "'");
                declared_vertices = *n;
            } else if (key == "kind") {
                const auto parts = split_ws(value);
                if (parts.empty()) throw ParseError(line_no, "empty kind header");
                try {
                    kind = graph_kind_from_string(std::string(parts[0]));
                } catch (const ValidationError& e) {
                    throw ParseError(line_no, e.what());
                }
                if (*kind == GraphKind::grid) {
                    const auto rows = parts.size() == 3 ? parse_number<std::size_t>(parts[1]) : std::nullopt;
                    const auto cols = parts.size() == 3 ? parse_number<std::size_t>(parts[2]) : std::nullopt;
                    if (!rows || !cols) throw ParseError(line_no, "grid kind needs '#kind: grid ROWS COLS'");
                    shape = {*rows, *cols};
                } else if (parts.size() != 1) {
                    throw ParseError(line_no, "unexpected tokens after kind '" + std::string(parts[0]) + "'");
                }
            }
            continue;
        }
        const auto fields = split_ws(line);
        if (fields.size() != 2 && fields.size() != 3)
            throw ParseError(line_no, "expected 'u v [w]', got " + std::to_string(fields.size()) + " fields");
        const auto u = parse_id(fields[0]);
        const auto v = parse_id(fields[1]);
        if (!u || !v) throw ParseError(line_no, "vertex ids must be nonnegative integers");
        Edge e{*u, *v, 1.0};
        if (fields.size() == 3) {
            const auto w = parse_number<double>(fields[2]);
            if (!w || !std::isfinite(*w)) throw ParseError(line_no, "invalid weight '" + std::string(fields[2]) + "'");
            if (*w <= 0.0) throw ParseError(line_no, "edge weight must be positive, got " + std::string(fields[2]));
            e.weight = *w;
        }
        if (e.u == e.v) throw ParseError(line_no, "self-loop on vertex " + std::to_string(e.u));
        max_id_plus_one = std::max<std::size_t>(max_id_plus_one, std::max(e.u, e.v) + std::size_t{1});
        edges.push_back(e);
    }

    std::size_t n = max_id_plus_one;
    if (declared_vertices) {
        if (*declared_vertices < max_id_plus_one)
            throw ValidationError("edge list mentions vertex " + std::to_string(max_id_plus_one - 1) + " but declares " +
                                  std::to_string(*declared_vertices) + " vertices");
        n = *declared_vertices;
    }
    if (n == 0) throw ValidationError("edge list has no vertices");
    if (kind) return LabelGraph::create(n, std::move(edges), *kind, std::move(labels), shape);
    return LabelGraph::infer(n, std::move(edges), std::move(labels));
}

LabelGraph read_edge_list(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_edge_list(text);
}

std::string write_edge_list(const LabelGraph& graph) {
    std::ostringstream out;
    out << "#vertices: " << graph.num_vertices() << '\n';
    out << "#kind: " << to_string(graph.kind());
    if (graph.kind() == GraphKind::grid) out << ' ' << graph.grid_shape().rows << ' ' << graph.grid_shape().cols;
    out << '\n';
    if (graph.num_labels() != graph.num_vertices()) {
        out << "#labels: ";
        for (std::size_t i = 0; i < graph.labels().size(); ++i) out << (i ? "," : "") << graph.labels()[i];
        out << '\n';
    }
    for (const auto& e : graph.edges()) {
        out << e.u << '\t' << e.v;
        if (e.weight != 1.0) out << '\t' << format_double(e.weight);
        out << '\n';
    }
    return out.str();
}

std::vector<std::string> read_names(std::istream& in) {
    auto lines = read_lines(in);
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r') l.pop_back();
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

std::vector<std::vector<double>> read_embeddings(std::istream& in) {
    std::vector<std::vector<double>> rows;
    const auto lines = read_lines(in);
    bool first = true;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        if (first && !looks_numeric(line)) {
            first = false;
            continue;
        }
        first = false;
        rows.push_back(parse_double_row(line, i + 1));
    }
    return rows;
}

ScoreMatrix read_score_matrix(std::istream& in) {
    ScoreMatrix m;
    const auto lines = read_lines(in);
    bool have_header = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        if (!have_header) {
            for (auto field : split(line, ',')) {
                const auto id = parse_id(field);
                if (!id) throw ParseError(i + 1, "header must list observed class ids, got '" + std::string(field) + "'");
                m.classes.push_back(*id);
            }
            have_header = true;
            continue;
        }
        auto row = parse_double_row(line, i + 1);
        if (row.size() != m.classes.size())
            throw ParseError(i + 1, "expected " + std::to_string(m.classes.size()) + " values, got " +
                                        std::to_string(row.size()));
        m.rows.push_back(std::move(row));
    }
    if (!have_header) throw ValidationError("score matrix is empty");
    return m;
}

std::vector<VertexId> read_label_column(std::istream& in, const std::string& column) {
    const auto lines = read_lines(in);
    std::vector<VertexId> out;
    std::size_t col = 0;
    bool first = true;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (first) {
            first = false;
            if (!parse_id(fields[0])) {
                const auto it = std::find(fields.begin(), fields.end(), std::string_view(column));
                col = it == fields.end() ? 0 : static_cast<std::size_t>(it - fields.begin());
                continue;
            }
        }
        if (col >= fields.size()) throw ParseError(i + 1, "missing column " + std::to_string(col + 1));
        const auto id = parse_id(fields[col]);
        if (!id) throw ParseError(i + 1, "invalid label '" + std::string(fields[col]) + "'");
        out.push_back(*id);
    }
    return out;
}

void write_predictions(std::ostream& out, const std::vector<TieSet>& predictions) {
    out << "sample_index,canonical_label,tie_set_size\n";
    for (std::size_t i = 0; i < predictions.size(); ++i)
        out << i << ',' << predictions[i].canonical() << ',' << predictions[i].size() << '\n';
}

void write_locus_csv(std::ostream& out, const Locus& locus, const ObservedSet& observed,
                     const std::vector<std::string>* names) {
    out << "label";
    if (names) out << ",name";
    for (VertexId a : observed.ids()) out << ",w_" << a;
    out << '\n';
    for (std::size_t i = 0; i < locus.members.size(); ++i) {
        const VertexId v = locus.members[i];
        out << v;
        if (names) out << ',' << (v < names->size() ? (*names)[v] : std::string());
        for (double w : locus.witnesses[i]) out << ',' << format_double(w);
        out << '\n';
    }
}

void write_regions_csv(std::ostream& out, const SimplexRegionGrid& grid) {
    out << "a,b,c,label\n";
    for (const auto& c : grid.cells) out << c.a << ',' << c.b << ',' << c.c << ',' << c.label << '\n';
}

void write_trajectory_csv(std::ostream& out, const std::vector<Trajectory>& trajectories) {
    out << "trial,round,num_observed,locus_size,policy,seed\n";
    for (const auto& t : trajectories)
        for (const auto& p : t.points)
            out << t.trial << ',' << p.round << ',' << p.num_observed << ',' << p.locus_size << ',' << to_string(t.policy)
                << ',' << t.seed << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<PolicyRoundSummary>& summary) {
    out << "policy,round,trials,mean_observed,mean_locus_size,stderr_locus_size\n";
    for (const auto& s : summary)
        out << to_string(s.policy) << ',' << s.round << ',' << s.trials << ',' << format_double(s.mean_observed) << ','
            << format_double(s.mean_locus_size) << ',' << format_double(s.stderr_locus_size) << '\n';
}

nlohmann::json to_json(const EvalReport& r) {
    return {{"mean_sq_distance", r.mean_sq_distance},
            {"zero_one_error", r.zero_one_error},
            {"normalized_msd", r.normalized_msd},
            {"n_samples", r.n_samples}};
}

nlohmann::json to_json(const CalibrationReport& r) {
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : r.bins)
        bins.push_back({{"lower", b.lower},
                        {"upper", b.upper},
                        {"mean_confidence", b.mean_confidence},
                        {"accuracy", b.accuracy},
                        {"count", b.count}});
    return {{"temperature", r.temperature}, {"ece", r.ece}, {"bins", bins}};
}

nlohmann::json to_json(const TemperatureSweep& sweep) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : sweep.points)
        points.push_back({{"temperature", p.temperature}, {"eval", to_json(p.eval)}, {"calibration", to_json(p.calibration)}});
    return {{"points", points},
            {"best_msd_temperature", sweep.best_msd_temperature},
            {"best_ece_temperature", sweep.best_ece_temperature}};
}

nlohmann::json to_json(const CoverReport& r) {
    nlohmann::json certs = nlohmann::json::array();
    for (const auto& c : r.certificates) {
        nlohmann::json j = {{"vertex", c.vertex}, {"singleton", c.singleton}};
        j["weights"] = c.weights.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.weights);
        certs.push_back(std::move(j));
    }
    nlohmann::json j = {{"construction", r.construction},
                        {"cover", r.cover.ids()},
                        {"is_locus_cover", r.is_locus_cover},
                        {"nontrivial", r.nontrivial},
                        {"certificates", certs}};
    j["is_identifying"] = r.is_identifying ? nlohmann::json(*r.is_identifying) : nlohmann::json(nullptr);
    j["failure_vertex"] = r.failure_vertex ? nlohmann::json(*r.failure_vertex) : nlohmann::json(nullptr);
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

nlohmann::json to_json(const Locus& locus, const ObservedSet& observed) {
    return {{"observed", observed.ids()},
            {"method", to_string(locus.method)},
            {"resolution", locus.resolution},
            {"lower_bound", locus.lower_bound},
            {"members", locus.members},
            {"size", locus.size()}};
}

}  // namespace fadapt::io
