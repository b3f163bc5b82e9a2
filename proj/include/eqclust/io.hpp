#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eqclust/core.hpp"
#include "eqclust/generators.hpp"

namespace eqclust {

// Text formats. Tokens are whitespace separated; every reader throws
// FormatError on malformed input, including trailing tokens.
//
//   instance    ECL 1 / p d n k B / n rows of d integers (ids 0..n-1)
//   clustering  ASSIGN 1 n k / n cluster indices, 1-based
//   hypergraph  RSM r n m / m rows of r vertex indices, 1-based
//   3dm         TDM n m / m rows "x y z", 1-based per side
//   matching    MATCH 1 c / c edge or triple indices, 1-based
//   medians     MEDIANS 1 k d / k rows of d reals

Instance read_instance(std::istream& in);
void write_instance(std::ostream& out, const Instance& inst);

Clustering read_clustering(std::istream& in);
void write_clustering(std::ostream& out, const Clustering& c);

Hypergraph read_hypergraph(std::istream& in);
void write_hypergraph(std::ostream& out, const Hypergraph& h);

TdmInstance read_tdm(std::istream& in);
void write_tdm(std::ostream& out, const TdmInstance& t);

/// 0-based indices.
std::vector<std::size_t> read_matching(std::istream& in);
void write_matching(std::ostream& out, const std::vector<std::size_t>& matching);

std::vector<Median> read_medians(std::istream& in);
void write_medians(std::ostream& out, const std::vector<Median>& medians);

/// Whole contents of `path` ("-" reads stdin). FormatError if unreadable.
std::string read_text(const std::string& path);

}  // namespace eqclust
