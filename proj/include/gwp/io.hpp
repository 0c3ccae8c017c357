#pragma once

/**
 * JSON documents for every kernel type. Top-level documents carry
 * "format": "gwp/1"; nested values (a series inside a table) do not.
 * Numbers are exact strings ("3/4", "1-2*i"); objects are written with a
 * fixed key order so equal inputs give byte-identical output.
 */

#include "gwp/bps.hpp"
#include "gwp/cohring.hpp"
#include "gwp/corr.hpp"
#include "gwp/glue.hpp"
#include "gwp/ratfun.hpp"
#include "gwp/series.hpp"

#include "json.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace gwp::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormat = "gwp/1";

/// {"format": "gwp/1"}
Json document();
/// ParseError unless j is an object with "format": "gwp/1".
void check_format(const Json& j);

Json read_file(const std::filesystem::path& path);
std::string dump(const Json& j);
void write_file(const std::filesystem::path& path, const Json& j);

/// {"var": "u", "trunc": 12 | null, "coeffs": {"-2": "1", "0": "1/12"}}
Json series_to_json(const HalfSeries& x);
HalfSeries series_from_json(const Json& j);

/// {"var": "q", "num": ["0", "1"], "den": ["1", "2", "1"]}, low degree first.
Json ratfun_to_json(const RationalFunction& r);
RationalFunction ratfun_from_json(const Json& j);

/// {"rank", "degree_fn", "box", "max_genus", "bps": [{"g", "class", "n"}]}; "box"
/// defaults to the componentwise maximum of the listed classes.
Json bps_to_json(const BpsTable& t);
BpsTable bps_from_json(const Json& j);

CurveClass class_from_json(const Json& j);
Json class_to_json(const CurveClass& c);

/**
 * {"basis": ["1", "p"], "deg": ["0", "1"], "parity": ["even", "even"],
 *  "pairing": [["0","1"],["1","0"]], "mult": [[["1","0"],["0","1"]],[["0","1"],["0","0"]]]}
 * with mult[i][j] the coordinates of phi_i * phi_j.
 */
Json ring_to_json(const GradedRing& r);
GradedRing ring_from_json(const Json& j);

/// {"c1": "...", "c2": "...", "c3": "..."} as ring element strings.
ChernParams chern_from_json(const Json& j, const GradedRing& ring);

/**
 * {"rows": ["1", "2,1"], "entries": {"2,1|1": {"trunc": null, "terms": {"-1": "c1 + i"}}}}.
 * Every row named in a key is declared. Entries with |alpha_hat| > |alpha|
 * are rejected with PreconditionError("not-triangular").
 */
CorrMatrix corr_matrix_from_json(const Json& j);
Json corr_matrix_to_json(const CorrMatrix& k);

Json descendent_sum_to_json(const DescendentSum& s, const GradedRing& ring);

/**
 * {"side": "gw", "ring": {...}, "divisor_degree": [1, 0],
 *  "entries": [{"class": [1, 0], "labels": ["a"], "boundary": "1:p", "series": {...}}]}
 * An absolute table may omit "ring" (the point) and "divisor_degree" (zero).
 */
Json table_to_json(const TheoryTable& t);
TheoryTable table_from_json(const Json& j);

/// {"nodes": [{"op", "side", "inputs", "output", "rule", "unknown", "divisor_degree", "order"}]}
std::vector<PipelineNode> pipeline_from_json(const Json& j);
Json pipeline_to_json(const std::vector<PipelineNode>& nodes);

/// Table documents in a directory, keyed by their "name" field (file stem when absent).
std::map<std::string, TheoryTable> load_tables(const std::filesystem::path& dir);

/// {"format", "error": {"kind", "code", "message"}}
Json error_document(const std::string& kind, const std::string& code, const std::string& message);

}  // namespace gwp::io
