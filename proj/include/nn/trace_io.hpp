#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nn/solvers.hpp"

namespace nn {

/// Trace CSV layout:
///   iter,comm_sends,F_value,grad_norm,weighted_grad_norm,rel_error,alpha
/// plus a trailing stage column for cascade traces. Doubles are written with
/// 17 significant digits so parsing reproduces the in-memory values exactly.
void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& records);
void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& records,
                     const std::vector<int>& stage_of_record);

struct ParsedTrace {
  std::vector<IterationRecord> records;
  std::vector<int> stages;  // empty when the trace had no stage column
};

/// Parses either layout back; throws std::invalid_argument on a malformed
/// header or row.
ParsedTrace read_trace_csv(std::istream& in);

/// Flat key-value text: one `key = value` per line, '#' starts a comment.
using KeyValues = std::map<std::string, std::string>;

KeyValues read_key_values(std::istream& in);
void write_key_values(std::ostream& out, const KeyValues& kv);

}  // namespace nn
