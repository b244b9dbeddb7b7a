#include "nn/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nn {

namespace {

const char* kHeader = "iter,comm_sends,F_value,grad_norm,weighted_grad_norm,rel_error,alpha";

std::string format_record(const IterationRecord& rec) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g",
                static_cast<long long>(rec.t), static_cast<long long>(rec.comm_sends),
                rec.F_value, rec.grad_norm, rec.weighted_grad_norm, rec.rel_error, rec.alpha);
  return buf;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& s) {
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  if (end == c) throw std::invalid_argument("trace csv: bad numeric field '" + s + "'");
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& records) {
  out << kHeader << '\n';
  for (const auto& rec : records) out << format_record(rec) << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& records,
                     const std::vector<int>& stage_of_record) {
  if (stage_of_record.size() != records.size())
    throw std::invalid_argument("trace csv: stage column length mismatch");
  out << kHeader << ",stage\n";
  for (size_t r = 0; r < records.size(); ++r)
    out << format_record(records[r]) << ',' << stage_of_record[r] << '\n';
}

ParsedTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace csv: empty stream");
  std::string header = trim(line);
  bool with_stage;
  if (header == kHeader) {
    with_stage = false;
  } else if (header == std::string(kHeader) + ",stage") {
    with_stage = true;
  } else {
    throw std::invalid_argument("trace csv: unrecognized header");
  }

  ParsedTrace out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_csv(trim(line));
    if (fields.size() != (with_stage ? 8u : 7u))
      throw std::invalid_argument("trace csv: wrong field count in row");
    IterationRecord rec;
    rec.t = static_cast<Index>(std::stoll(fields[0]));
    rec.comm_sends = std::stoll(fields[1]);
    rec.F_value = parse_double(fields[2]);
    rec.grad_norm = parse_double(fields[3]);
    rec.weighted_grad_norm = parse_double(fields[4]);
    rec.rel_error = parse_double(fields[5]);
    rec.alpha = parse_double(fields[6]);
    out.records.push_back(rec);
    if (with_stage) out.stages.push_back(std::stoi(fields[7]));
  }
  return out;
}

KeyValues read_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                 ": empty key");
    kv[key] = value;
  }
  return kv;
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
  for (const auto& [key, value] : kv) out << key << " = " << value << '\n';
}

}  // namespace nn
