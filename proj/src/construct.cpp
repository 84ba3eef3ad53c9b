#include "circmech/construct.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace circmech {
namespace {

[[noreturn]] void parse_fail(const std::string& source, int line,
                             const std::string& what) {
  throw std::invalid_argument(source + ":" + std::to_string(line) + ": " + what);
}

Blocker parse_blocker(const std::string& tok, const std::string& source,
                      int line) {
  if (tok == "routing_strategy") return Blocker::RoutingStrategy;
  if (tok == "timed_lottery") return Blocker::TimedLottery;
  if (tok == "selective_disclosure") return Blocker::SelectiveDisclosure;
  if (tok == "asymmetric_disclosure") return Blocker::AsymmetricDisclosure;
  parse_fail(source, line, "unknown blocker '" + tok + "'");
}

}  // namespace

const char* to_string(Blocker b) {
  switch (b) {
    case Blocker::RoutingStrategy: return "routing_strategy";
    case Blocker::TimedLottery: return "timed_lottery";
    case Blocker::SelectiveDisclosure: return "selective_disclosure";
    case Blocker::AsymmetricDisclosure: return "asymmetric_disclosure";
  }
  return "?";
}

const char* to_string(LayerKind k) {
  return k == LayerKind::Myerson ? "myerson" : "nonmyerson";
}

const char* to_string(Reducibility r) {
  switch (r) {
    case Reducibility::Reducible: return "reducible";
    case Reducibility::Irreducible: return "irreducible";
    case Reducibility::Mostly: return "mostly";
  }
  return "?";
}

const char* to_string(Unactionability u) {
  switch (u) {
    case Unactionability::Exogenous: return "exogenous";
    case Unactionability::Endogenous: return "endogenous";
    case Unactionability::Mixed: return "mixed";
  }
  return "?";
}

bool has_cycle(const std::vector<Layer>& layers,
               const std::vector<Edge>& edges) {
  std::unordered_map<std::string, std::vector<std::string>> adj;
  for (const auto& l : layers) adj[l.id];
  for (const auto& e : edges) adj[e.from].push_back(e.to);

  // Iterative three-color DFS.
  enum { White, Grey, Black };
  std::unordered_map<std::string, int> color;
  for (const auto& l : layers) color[l.id] = White;
  for (const auto& l : layers) {
    if (color[l.id] != White) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{l.id, 0}};
    color[l.id] = Grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& out = adj[node];
      if (next < out.size()) {
        const std::string& child = out[next++];
        if (color[child] == Grey) return true;
        if (color[child] == White) {
          color[child] = Grey;
          stack.emplace_back(child, 0);
        }
      } else {
        color[node] = Black;
        stack.pop_back();
      }
    }
  }
  return false;
}

Construct make_construct(std::vector<Layer> layers, std::vector<Edge> edges) {
  std::unordered_set<std::string> ids;
  for (const auto& l : layers) {
    if (l.id.empty())
      throw std::invalid_argument("construct: empty layer id");
    if (!ids.insert(l.id).second)
      throw std::invalid_argument("construct: duplicate layer id '" + l.id + "'");
    if (l.kind == LayerKind::Myerson && !l.blockers.empty())
      throw std::invalid_argument("construct: myerson layer '" + l.id +
                                  "' must not carry blockers");
    if (l.kind == LayerKind::NonMyerson && l.blockers.empty())
      throw std::invalid_argument("construct: nonmyerson layer '" + l.id +
                                  "' needs at least one blocker");
  }
  for (const auto& e : edges) {
    if (!ids.count(e.from))
      throw std::invalid_argument("construct: edge from unknown layer '" +
                                  e.from + "'");
    if (!ids.count(e.to))
      throw std::invalid_argument("construct: edge to unknown layer '" + e.to +
                                  "'");
  }
  Construct c{std::move(layers), std::move(edges), false};
  c.circular = has_cycle(c.layers, c.edges);
  return c;
}

Construct collapse_myerson_chains(const Construct& input) {
  Construct c = make_construct(input.layers, input.edges);  // revalidate

  auto kind_of = [&](const std::string& id) {
    for (const auto& l : c.layers)
      if (l.id == id) return l.kind;
    throw std::logic_error("collapse: unknown id");
  };

  for (;;) {
    // Degrees over the whole graph.
    std::map<std::string, int> out_deg, in_deg;
    for (const auto& e : c.edges) {
      ++out_deg[e.from];
      ++in_deg[e.to];
    }

    // First contractible edge in declaration order: Myerson -> Myerson,
    // source is its only exit, target is its only entry, not a self-loop.
    std::size_t pick = c.edges.size();
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
      const Edge& e = c.edges[i];
      if (e.from == e.to) continue;
      if (kind_of(e.from) != LayerKind::Myerson) continue;
      if (kind_of(e.to) != LayerKind::Myerson) continue;
      if (out_deg[e.from] != 1 || in_deg[e.to] != 1) continue;
      pick = i;
      break;
    }
    if (pick == c.edges.size()) break;

    const std::string from = c.edges[pick].from;
    const std::string to = c.edges[pick].to;
    const std::string merged = from + "+" + to;

    std::vector<Layer> layers;
    layers.reserve(c.layers.size() - 1);
    for (const auto& l : c.layers) {
      if (l.id == to) continue;
      if (l.id == from)
        layers.push_back(Layer{merged, LayerKind::Myerson, {}});
      else
        layers.push_back(l);
    }
    std::vector<Edge> edges;
    edges.reserve(c.edges.size() - 1);
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
      if (i == pick) continue;
      Edge e = c.edges[i];
      if (e.from == from || e.from == to) e.from = merged;
      if (e.to == from || e.to == to) e.to = merged;
      edges.push_back(e);
    }
    c = make_construct(std::move(layers), std::move(edges));
  }
  return c;
}

bool is_reducible(const Construct& c) {
  return std::all_of(c.layers.begin(), c.layers.end(), [](const Layer& l) {
    return l.kind == LayerKind::Myerson;
  });
}

std::vector<Edge> privacy_walls(const Construct& c) {
  std::unordered_set<std::string> nonmyerson;
  for (const auto& l : c.layers)
    if (l.kind == LayerKind::NonMyerson) nonmyerson.insert(l.id);
  std::vector<Edge> walls;
  for (const auto& e : c.edges)
    if (nonmyerson.count(e.from)) walls.push_back(e);
  return walls;
}

ClassificationVerdict classify(const Construct& input) {
  Construct c = make_construct(input.layers, input.edges);
  if (is_reducible(c))
    return {Reducibility::Reducible, Unactionability::Exogenous};
  const bool all_nonmyerson =
      std::all_of(c.layers.begin(), c.layers.end(), [](const Layer& l) {
        return l.kind == LayerKind::NonMyerson;
      });
  if (c.circular && all_nonmyerson)
    return {Reducibility::Irreducible, Unactionability::Endogenous};
  return {Reducibility::Irreducible, Unactionability::Mixed};
}

Construct parse_construct(std::istream& in, const std::string& source_name) {
  std::vector<Layer> layers;
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;  // blank or comment-only

    if (word == "layer") {
      Layer l;
      std::string kind;
      if (!(ls >> l.id >> kind))
        parse_fail(source_name, lineno, "layer needs '<id> myerson|nonmyerson'");
      if (kind == "myerson") {
        l.kind = LayerKind::Myerson;
      } else if (kind == "nonmyerson") {
        l.kind = LayerKind::NonMyerson;
      } else {
        parse_fail(source_name, lineno, "unknown layer kind '" + kind + "'");
      }
      std::string blockers;
      if (ls >> blockers) {
        std::stringstream bs(blockers);
        std::string tok;
        while (std::getline(bs, tok, ','))
          if (!tok.empty()) l.blockers.insert(parse_blocker(tok, source_name, lineno));
      }
      std::string extra;
      if (ls >> extra)
        parse_fail(source_name, lineno, "trailing tokens after layer");
      layers.push_back(std::move(l));
    } else if (word == "edge") {
      Edge e;
      if (!(ls >> e.from >> e.to))
        parse_fail(source_name, lineno, "edge needs '<from> <to>'");
      std::string extra;
      if (ls >> extra)
        parse_fail(source_name, lineno, "trailing tokens after edge");
      edges.push_back(std::move(e));
    } else {
      parse_fail(source_name, lineno, "unknown directive '" + word + "'");
    }
  }
  try {
    return make_construct(std::move(layers), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(source_name + ": " + e.what());
  }
}

Construct load_construct(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open construct file: " + path);
  return parse_construct(in, path);
}

std::string serialize_construct(const Construct& c) {
  std::ostringstream out;
  for (const auto& l : c.layers) {
    out << "layer " << l.id << ' ' << to_string(l.kind);
    bool first = true;
    for (Blocker b : l.blockers) {  // std::set iterates in enum order
      out << (first ? " " : ",") << to_string(b);
      first = false;
    }
    out << '\n';
  }
  for (const auto& e : c.edges) out << "edge " << e.from << ' ' << e.to << '\n';
  return out.str();
}

}  // namespace circmech
