#pragma once

// Scheme file format (line oriented, '#' starts a comment, indentation is
// ignored, all integers decimal):
//
//   n: 4
//   u: 4
//   q: 1
//   cell_alphabet: 5
//   domain: all_bitstrings | balanced_brackets
//   encoder: builtin:<name> [key=value ...]
//   encoder: table:
//     <input bits> -> <cell> <cell> ...        one line per domain element
//   probes:
//     <cell index> <cell index> ...            n lines; "-" for an empty set
//   decoders: builtin:<name> [key=value ...]
//   decoders: table:
//     query <i>:
//       <probe values or -> -> <answer>
//
// Verification reports use the same "key: value" style (see write_report).

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cellprobe/scheme.hpp"

namespace cellprobe {

Scheme read_scheme(std::istream& in);
Scheme read_scheme_file(const std::filesystem::path& path);

void write_scheme(std::ostream& out, const Scheme& scheme);
void write_scheme_file(const std::filesystem::path& path, const Scheme& scheme);

// Field-for-field equality of everything the file format records.
bool same_scheme(const Scheme& a, const Scheme& b);

// status / checked / counterexample.
void write_report(std::ostream& out, const VerificationReport& report);

}  // namespace cellprobe
