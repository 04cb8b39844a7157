#pragma once

#include <iosfwd>
#include <string>

#include "spamtree/dataset.hpp"

namespace spamtree {

// Reads the ARFF subset used by this toolkit: @relation, @attribute (numeric,
// or nominal via {a,b}), % comments, then @data with comma-separated rows.
// Keywords are case-insensitive and surrounding whitespace is ignored.
// The last attribute is the class and must be nominal with exactly two
// labels; nominal feature columns are not supported. Throws ParseError with
// a 1-based line number on syntax, arity, or value problems.
Dataset parse_arff(std::istream& in);
Dataset parse_arff_file(const std::string& path);

// Inverse of parse_arff for datasets this toolkit produces.
std::string serialize_arff(const Dataset& ds);

// Reads the classic 58-column spam corpus CSV (57 numeric features plus a
// 0/1 class column, no header) and attaches the canonical attribute names.
Dataset parse_spambase_csv(std::istream& in);
Dataset parse_spambase_csv_file(const std::string& path);

// The 57 canonical feature names (word_freq_make ... capital_run_length_total).
extern const char* const kSpambaseAttributeNames[57];

}  // namespace spamtree
