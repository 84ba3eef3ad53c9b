#pragma once

#include <string>
#include <vector>

#include "circmech/construct.hpp"

namespace circmech {

enum class MechKind { Direct, Indirect, Both };

const char* to_string(MechKind m);

// One row of the mechanism taxonomy: a named mechanism family, whether its
// play is direct or indirect, whether it flattens to a direct mechanism, and
// where the levers that cannot be actioned from inside live.
struct TaxonomyEntry {
  std::string name;
  MechKind mech_type = MechKind::Direct;
  Reducibility reducible = Reducibility::Reducible;
  Unactionability unactionability = Unactionability::Exogenous;
  std::string note;

  bool operator==(const TaxonomyEntry&) const = default;
};

// CSV with header `name,type,reducible,unactionability,note`. Fields may be
// double-quoted (required when they contain commas); "" inside a quoted
// field is a literal quote. Errors carry the file name and line number and
// distinguish missing file, malformed rows, and unknown enum tokens.
std::vector<TaxonomyEntry> load_taxonomy(const std::string& path);

std::string serialize_taxonomy(const std::vector<TaxonomyEntry>& entries);

}  // namespace circmech
