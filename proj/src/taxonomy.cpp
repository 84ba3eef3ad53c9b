#include "circmech/taxonomy.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace circmech {
namespace {

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& what) {
  throw std::invalid_argument(path + ":" + std::to_string(line) + ": " + what);
}

// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv(const std::string& line,
                                   const std::string& path, int lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      if (!cur.empty()) fail(path, lineno, "quote inside unquoted field");
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) fail(path, lineno, "unterminated quoted field");
  fields.push_back(cur);
  return fields;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

MechKind parse_mech(const std::string& tok, const std::string& path, int line) {
  if (tok == "direct") return MechKind::Direct;
  if (tok == "indirect") return MechKind::Indirect;
  if (tok == "both") return MechKind::Both;
  fail(path, line, "unknown mechanism type '" + tok + "'");
}

Reducibility parse_reducible(const std::string& tok, const std::string& path,
                             int line) {
  if (tok == "reducible") return Reducibility::Reducible;
  if (tok == "irreducible") return Reducibility::Irreducible;
  if (tok == "mostly") return Reducibility::Mostly;
  fail(path, line, "unknown reducibility '" + tok + "'");
}

Unactionability parse_unactionability(const std::string& tok,
                                      const std::string& path, int line) {
  if (tok == "exogenous") return Unactionability::Exogenous;
  if (tok == "endogenous") return Unactionability::Endogenous;
  if (tok == "mixed") return Unactionability::Mixed;
  fail(path, line, "unknown unactionability '" + tok + "'");
}

}  // namespace

const char* to_string(MechKind m) {
  switch (m) {
    case MechKind::Direct: return "direct";
    case MechKind::Indirect: return "indirect";
    case MechKind::Both: return "both";
  }
  return "?";
}

std::vector<TaxonomyEntry> load_taxonomy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open taxonomy file: " + path);

  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) fail(path, 1, "empty file, header expected");
  ++lineno;
  if (line == "name,type,reducible,unactionability,note\r")
    line.pop_back();
  if (line != "name,type,reducible,unactionability,note")
    fail(path, lineno,
         "bad header, expected 'name,type,reducible,unactionability,note'");

  std::vector<TaxonomyEntry> entries;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line, path, lineno);
    if (fields.size() != 5)
      fail(path, lineno,
           "expected 5 fields, got " + std::to_string(fields.size()));
    TaxonomyEntry e;
    e.name = fields[0];
    if (e.name.empty()) fail(path, lineno, "empty mechanism name");
    e.mech_type = parse_mech(fields[1], path, lineno);
    e.reducible = parse_reducible(fields[2], path, lineno);
    e.unactionability = parse_unactionability(fields[3], path, lineno);
    e.note = fields[4];
    entries.push_back(std::move(e));
  }
  return entries;
}

std::string serialize_taxonomy(const std::vector<TaxonomyEntry>& entries) {
  std::ostringstream out;
  out << "name,type,reducible,unactionability,note\n";
  for (const auto& e : entries) {
    out << quote_if_needed(e.name) << ',' << to_string(e.mech_type) << ','
        << to_string(e.reducible) << ',' << to_string(e.unactionability) << ','
        << quote_if_needed(e.note) << '\n';
  }
  return out.str();
}

}  // namespace circmech
