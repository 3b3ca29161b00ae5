#pragma once

#include <string>
#include <vector>

#include "amreval/graph.hpp"

namespace amreval {

// Parses a single penman expression, optionally preceded by `# ::` metadata
// lines. Inverse relations (:ARG0-of) are normalized to forward edges when
// the value is a variable. Re-entrant mentions resolve to one node; a bare
// token that names no defined variable becomes an attribute constant.
// Throws ParseError (with line/column) on malformed input.
AmrGraph parse_penman(const std::string& text);

// Serializes back to penman. Re-entrant nodes are emitted once with their
// concept and afterwards as bare variables; edges reached against their
// direction are emitted with an -of inversion. parse(serialize(g)) is
// isomorphic to g.
std::string serialize_penman(const AmrGraph& g);

// Reads an AMR corpus file: UTF-8, graphs separated by blank lines, optional
// `# ::` metadata attached to the following graph. Parse errors carry
// file-relative line numbers.
std::vector<AmrGraph> read_amr_file(const std::string& path);

// Same, from an in-memory string (used by tests).
std::vector<AmrGraph> read_amr_string(const std::string& text);

}  // namespace amreval
