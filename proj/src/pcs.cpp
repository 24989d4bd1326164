#include "idlabel/pcs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "idlabel/choice.hpp"
#include "idlabel/csv.hpp"
#include "idlabel/error.hpp"

namespace idlabel {

SemanticNetwork::SemanticNetwork(std::vector<NetworkNode> nodes, std::vector<NetworkEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i].resting)) throw ModelError("node '" + nodes_[i].token + "' has non-finite resting level");
    if (!index_.emplace(nodes_[i].token, i).second) throw ModelError("duplicate node '" + nodes_[i].token + "'");
  }
  for (const auto& e : edges_) {
    if (!contains(e.from) || !contains(e.to)) {
      throw ModelError("edge " + e.from + " -> " + e.to + " references an unknown node");
    }
    if (e.from == e.to) throw ModelError("self-loop on node '" + e.from + "'");
    if (!std::isfinite(e.weight)) throw ModelError("edge " + e.from + " -> " + e.to + " has non-finite weight");
  }
}

std::size_t SemanticNetwork::index_of(const std::string& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) throw InputError("unknown network node '" + token + "'");
  return it->second;
}

double ActivationState::at(const std::string& token) const {
  const auto it = std::find(tokens.begin(), tokens.end(), token);
  if (it == tokens.end()) throw InputError("unknown network node '" + token + "'");
  return activation[static_cast<std::size_t>(it - tokens.begin())];
}

namespace {

struct Dynamics {
  const SemanticNetwork& net;
  const ActivationParams& params;
  std::vector<bool> clamped;
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbors;

  Dynamics(const SemanticNetwork& n, const std::vector<std::string>& cues, const ActivationParams& p)
      : net(n), params(p), clamped(n.nodes().size(), false), neighbors(n.nodes().size()) {
    if (!(p.floor < p.ceiling) || p.cue_level < p.floor || p.cue_level > p.ceiling || p.step <= 0.0 ||
        p.decay < 0.0 || p.tolerance <= 0.0 || p.max_iterations < 0) {
      throw ModelError("invalid activation parameters");
    }
    for (const auto& cue : cues) clamped[n.index_of(cue)] = true;
    for (const auto& e : n.edges()) {
      const std::size_t a = n.index_of(e.from);
      const std::size_t b = n.index_of(e.to);
      neighbors[a].emplace_back(b, e.weight);
      neighbors[b].emplace_back(a, e.weight);
    }
  }

  std::vector<double> initial() const {
    std::vector<double> act(net.nodes().size());
    for (std::size_t i = 0; i < act.size(); ++i) {
      act[i] = clamped[i] ? params.cue_level : std::clamp(net.nodes()[i].resting, params.floor, params.ceiling);
    }
    return act;
  }

  // One synchronous update; returns the largest absolute change.
  double step(std::vector<double>& act) const {
    std::vector<double> next = act;
    double largest = 0.0;
    for (std::size_t i = 0; i < act.size(); ++i) {
      if (clamped[i]) continue;
      double input = 0.0;
      for (const auto& [j, w] : neighbors[i]) input += w * std::max(act[j], 0.0);
      double delta = input > 0.0 ? input * (params.ceiling - act[i]) : input * (act[i] - params.floor);
      delta -= params.decay * (act[i] - net.nodes()[i].resting);
      next[i] = std::clamp(act[i] + params.step * delta, params.floor, params.ceiling);
      largest = std::max(largest, std::abs(next[i] - act[i]));
    }
    act = std::move(next);
    return largest;
  }

  ActivationState state(const std::vector<double>& act, int iterations, bool converged) const {
    ActivationState s;
    for (const auto& node : net.nodes()) s.tokens.push_back(node.token);
    s.activation = act;
    s.iterations = iterations;
    s.converged = converged;
    return s;
  }
};

}  // namespace

ActivationState spread_activation(const SemanticNetwork& net, const std::vector<std::string>& cues,
                                  const ActivationParams& params) {
  const Dynamics dyn(net, cues, params);
  auto act = dyn.initial();
  for (int it = 1; it <= params.max_iterations; ++it) {
    if (dyn.step(act) < params.tolerance) return dyn.state(act, it, true);
  }
  return dyn.state(act, params.max_iterations, false);
}

std::vector<ActivationState> activation_trajectory(const SemanticNetwork& net,
                                                   const std::vector<std::string>& cues, int steps,
                                                   const ActivationParams& params) {
  const Dynamics dyn(net, cues, params);
  auto act = dyn.initial();
  std::vector<ActivationState> history{dyn.state(act, 0, false)};
  for (int it = 1; it <= steps; ++it) {
    dyn.step(act);
    history.push_back(dyn.state(act, it, false));
  }
  return history;
}

double BetaScores::at(const std::string& identity) const {
  const auto it = scores.find(identity);
  if (it == scores.end()) {
    throw InputError("no score for identity '" + identity + "' under cue '" + cue + "' (task " +
                     std::to_string(task) + ")");
  }
  return it->second;
}

BetaScores beta_from_activation(const ActivationState& state, const std::vector<std::string>& identities,
                                int task, const std::string& cue) {
  BetaScores beta{task, cue, {}};
  for (const auto& id : identities) beta.scores[id] = state.at(id);
  return beta;
}

double pcs_probability(const BetaScores& beta, const std::string& answer_a, const std::string& answer_b) {
  return binary_choice_prob(beta.at(answer_a), beta.at(answer_b));
}

std::vector<BetaScores> parse_handcoded_betas(std::istream& in, const std::string& source_name) {
  std::vector<BetaScores> groups;
  for (const auto& row : csv::read(in, {"task", "cue", "identity", "beta"}, source_name)) {
    const std::string where = source_name + ":" + std::to_string(row.line);
    const long task = csv::parse_integer(row.fields[0], where);
    if (task != 1 && task != 2) throw InputError(where + ": task must be 1 or 2");
    const std::string& cue = row.fields[1];
    const std::string& identity = row.fields[2];
    if (cue.empty() || identity.empty()) throw InputError(where + ": empty cue or identity");
    const double beta = csv::parse_real(row.fields[3], where);
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const BetaScores& g) { return g.task == task && g.cue == cue; });
    if (it == groups.end()) {
      groups.push_back(BetaScores{static_cast<int>(task), cue, {}});
      it = std::prev(groups.end());
    }
    const auto [pos, inserted] = it->scores.emplace(identity, beta);
    if (!inserted && pos->second != beta) {
      throw InputError(where + ": conflicting score for (" + std::to_string(task) + ", " + cue + ", " +
                       identity + ")");
    }
  }
  return groups;
}

std::vector<BetaScores> load_handcoded_betas(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_handcoded_betas(in, path.string());
}

ScoreTable::ScoreTable(std::vector<BetaScores> groups) : groups_(std::move(groups)) {
  std::set<std::pair<int, std::string>> seen;
  for (const auto& g : groups_) {
    if (!seen.emplace(g.task, g.cue).second) {
      throw InputError("duplicate score group (" + std::to_string(g.task) + ", " + g.cue + ")");
    }
  }
}

bool ScoreTable::has_group(int task, const std::string& cue) const {
  return std::any_of(groups_.begin(), groups_.end(),
                     [&](const BetaScores& g) { return g.task == task && g.cue == cue; });
}

const BetaScores& ScoreTable::group(int task, const std::string& cue) const {
  for (const auto& g : groups_) {
    if (g.task == task && g.cue == cue) return g;
  }
  throw InputError("no score group for cue '" + cue + "' in task " + std::to_string(task));
}

double ScoreTable::score(int task, const std::string& cue, const std::string& identity) const {
  return group(task, cue).at(identity);
}

double ScoreTable::score_or_baseline(int task, const std::string& cue, const std::string& identity) const {
  if (cue == kSomeoneCue) return 0.0;
  const BetaScores& g = group(task, cue);
  if (const auto it = g.scores.find(identity); it != g.scores.end()) return it->second;
  if (g.scores.empty()) throw InputError("empty score group for cue '" + cue + "'");
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& [id, beta] : g.scores) lowest = std::min(lowest, beta);
  return lowest;
}

double ScoreTable::max_score(int task) const {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& g : groups_) {
    if (g.task != task) continue;
    for (const auto& [id, beta] : g.scores) top = std::max(top, beta);
  }
  if (!std::isfinite(top)) throw InputError("no scores for task " + std::to_string(task));
  return top;
}

namespace {

NodeRole parse_role(const std::string& text, const std::string& where) {
  if (text == "identity") return NodeRole::identity;
  if (text == "trait") return NodeRole::trait;
  if (text == "setting") return NodeRole::setting;
  if (text == "cue") return NodeRole::cue;
  if (text == "other") return NodeRole::other;
  throw InputError(where + ": unknown node role '" + text + "'");
}

}  // namespace

SemanticNetwork parse_network(std::istream& in, const std::string& source_name) {
  // Split into sections, keeping original line numbers via padding lines.
  std::string line;
  std::size_t line_no = 0;
  std::string section;
  bool have_edges = false;
  std::ostringstream nodes_text, edges_text;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = csv::trim(line);
    if (stripped == "[nodes]" || stripped == "[edges]") {
      section = stripped;
      have_edges = have_edges || section == "[edges]";
      nodes_text << '\n';
      edges_text << '\n';
      continue;
    }
    if (section.empty() && !stripped.empty() && stripped.front() != '#') {
      throw InputError(source_name + ":" + std::to_string(line_no) + ": content outside a [nodes]/[edges] section");
    }
    nodes_text << (section == "[nodes]" ? line : "") << '\n';
    edges_text << (section == "[edges]" ? line : "") << '\n';
  }
  std::istringstream node_stream(nodes_text.str());
  std::istringstream edge_stream(edges_text.str());
  std::vector<NetworkNode> nodes;
  for (const auto& row : csv::read(node_stream, {"token", "role", "resting"}, source_name)) {
    const std::string where = source_name + ":" + std::to_string(row.line);
    nodes.push_back(NetworkNode{row.fields[0], parse_role(row.fields[1], where),
                                csv::parse_real(row.fields[2], where)});
  }
  std::vector<NetworkEdge> edges;
  if (have_edges) for (const auto& row : csv::read(edge_stream, {"from", "to", "weight"}, source_name)) {
    const std::string where = source_name + ":" + std::to_string(row.line);
    edges.push_back(NetworkEdge{row.fields[0], row.fields[1], csv::parse_real(row.fields[2], where)});
  }
  try {
    return SemanticNetwork(std::move(nodes), std::move(edges));
  } catch (const ModelError& e) {
    throw InputError(source_name + ": " + e.what());
  }
}

SemanticNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_network(in, path.string());
}

}  // namespace idlabel
