#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace circmech {

// Layer graphs for mechanism constructs. A layer is either a direct
// truthful-revelation stage (every equilibrium outcome reachable by a direct
// mechanism) or an indirect stage whose strategic surface cannot be
// flattened; indirect layers carry the feature(s) that block the reduction.
enum class LayerKind { Myerson, NonMyerson };

enum class Blocker {
  RoutingStrategy,       // payoffs depend on message paths, not just reports
  TimedLottery,          // time-uncertain selection at fixed difficulty
  SelectiveDisclosure,   // agents choose which types/messages to reveal
  AsymmetricDisclosure,  // one side controls the other's information set
};

const char* to_string(Blocker b);
const char* to_string(LayerKind k);

struct Layer {
  std::string id;
  LayerKind kind = LayerKind::Myerson;
  std::set<Blocker> blockers;  // empty iff kind == Myerson
};

struct Edge {
  std::string from;
  std::string to;
  bool operator==(const Edge&) const = default;
};

// A construct is a directed graph of layers. `circular` is always recomputed
// from the edges, never trusted from input.
struct Construct {
  std::vector<Layer> layers;
  std::vector<Edge> edges;
  bool circular = false;
};

// Builds a validated construct: unique non-empty layer ids, edge endpoints
// present, Myerson layers with no blockers, non-Myerson layers with at least
// one, and the circular flag recomputed. Throws std::invalid_argument.
Construct make_construct(std::vector<Layer> layers, std::vector<Edge> edges);

// True when the edge set contains a directed cycle (self-loops count).
bool has_cycle(const std::vector<Layer>& layers, const std::vector<Edge>& edges);

// Contracts every Myerson->Myerson edge whose source has out-degree 1 and
// whose target has in-degree 1, repeatedly, so maximal linear runs of
// truthful-revelation layers merge into one layer (a pure cycle merges into
// one self-looped layer). Branching Myerson nodes are deliberately left
// alone: collapse semantics for fan-in/fan-out are undefined, so only linear
// segments reduce. Idempotent.
Construct collapse_myerson_chains(const Construct& c);

// True when every layer is a truthful-revelation stage (vacuously true for
// an empty construct); such constructs flatten completely.
bool is_reducible(const Construct& c);

// Edges whose source layer is non-Myerson, in declaration order: the points
// where information crossing the boundary is strategically filtered.
std::vector<Edge> privacy_walls(const Construct& c);

enum class Reducibility { Reducible, Irreducible, Mostly };
enum class Unactionability { Exogenous, Endogenous, Mixed };

const char* to_string(Reducibility r);
const char* to_string(Unactionability u);

struct ClassificationVerdict {
  Reducibility reducible = Reducibility::Reducible;
  Unactionability unactionability = Unactionability::Exogenous;
};

// Reducible constructs have their rules fixed from outside; irreducible
// circular constructs made entirely of non-Myerson layers generate their own
// enforcement; everything else is a hybrid.
ClassificationVerdict classify(const Construct& c);

// Line-oriented construct file format:
//   # comment
//   layer <id> myerson|nonmyerson [blocker,blocker,...]
//   edge <from> <to>
// Blocker tokens: routing_strategy, timed_lottery, selective_disclosure,
// asymmetric_disclosure.
Construct parse_construct(std::istream& in, const std::string& source_name);
Construct load_construct(const std::string& path);

// Canonical serialization: layers in declaration order (blockers in enum
// order), then edges in declaration order. serialize(parse(serialize(c)))
// is byte-identical to serialize(c).
std::string serialize_construct(const Construct& c);

}  // namespace circmech
