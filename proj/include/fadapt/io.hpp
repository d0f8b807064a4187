#pragma once
// Text formats.
//
// Edge list (TSV or whitespace separated), one edge per row:
//     u<TAB>v[<TAB>w]          0-based ids, weight defaults to 1
// Optional header lines:
//     #vertices: N             vertex count (needed for edgeless graphs)
//     #labels: i,j,...         label set; only the leaves of a tree
//     #kind: grid M N          | tree | phylogenetic_tree | complete | generic
// Other lines starting with '#' are comments.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fadapt/active.hpp"
#include "fadapt/eval.hpp"
#include "fadapt/frechet.hpp"
#include "fadapt/locus.hpp"
#include "fadapt/metric_space.hpp"

namespace fadapt::io {

// Throws ParseError (with line number) or ValidationError.
LabelGraph parse_edge_list(std::string_view text);
LabelGraph read_edge_list(std::istream& in);
std::string write_edge_list(const LabelGraph& graph);

// One name per line; line i names vertex i.
std::vector<std::string> read_names(std::istream& in);

// CSV, one row of floats per class. A non-numeric first row is a header.
std::vector<std::vector<double>> read_embeddings(std::istream& in);

// Header row of observed class ids, then one row of scores per sample.
struct ScoreMatrix {
    std::vector<VertexId> classes;
    std::vector<std::vector<double>> rows;
};
ScoreMatrix read_score_matrix(std::istream& in);

// `sample_index,canonical_label,tie_set_size` with a header row.
void write_predictions(std::ostream& out, const std::vector<TieSet>& predictions);

// Integer labels from the column named `column` (when a header has it) or
// the first column. Blank lines are skipped.
std::vector<VertexId> read_label_column(std::istream& in, const std::string& column);

// Comma-separated vertex ids, e.g. "0,4,7".
std::vector<VertexId> parse_id_list(std::string_view text);

// `label[,name],w_1..w_K` with a header row.
void write_locus_csv(std::ostream& out, const Locus& locus, const ObservedSet& observed,
                     const std::vector<std::string>* names = nullptr);

// `a,b,c,label` with a header row.
void write_regions_csv(std::ostream& out, const SimplexRegionGrid& grid);

// `trial,round,num_observed,locus_size,policy,seed` with a header row.
void write_trajectory_csv(std::ostream& out, const std::vector<Trajectory>& trajectories);

// `policy,round,trials,mean_observed,mean_locus_size,stderr_locus_size`.
void write_summary_csv(std::ostream& out, const std::vector<PolicyRoundSummary>& summary);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const CalibrationReport& report);
nlohmann::json to_json(const TemperatureSweep& sweep);
nlohmann::json to_json(const CoverReport& report);
nlohmann::json to_json(const Locus& locus, const ObservedSet& observed);

// Shortest round-trippable decimal form.
std::string format_double(double x);

}  // namespace fadapt::io
