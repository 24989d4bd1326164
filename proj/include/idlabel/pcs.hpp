#pragma once

// Parallel-constraint-satisfaction labeling: a spreading-activation network
// settled to a stable state, and the reduced model that scores each
// candidate identity by a final activation (beta) and compares two
// candidates through 1 / (1 + exp(beta_b - beta_a)).

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace idlabel {

enum class NodeRole { identity, trait, setting, cue, other };

struct NetworkNode {
  std::string token;
  NodeRole role = NodeRole::other;
  double resting = -0.1;
};

// Links are symmetric: activation flows both ways with the same weight.
struct NetworkEdge {
  std::string from;
  std::string to;
  double weight = 0.0;
};

class SemanticNetwork {
 public:
  SemanticNetwork(std::vector<NetworkNode> nodes, std::vector<NetworkEdge> edges);

  const std::vector<NetworkNode>& nodes() const { return nodes_; }
  const std::vector<NetworkEdge>& edges() const { return edges_; }
  bool contains(const std::string& token) const { return index_.contains(token); }
  std::size_t index_of(const std::string& token) const;  // throws InputError

 private:
  std::vector<NetworkNode> nodes_;
  std::vector<NetworkEdge> edges_;
  std::map<std::string, std::size_t> index_;
};

// Interactive-activation-and-competition style dynamics. Every node
// receives net input sum_j w_ij * max(a_j, 0); positive input drives it
// toward `ceiling`, negative toward `floor`, and `decay` pulls it back to
// its resting level. Cued nodes are held at `cue_level`.
struct ActivationParams {
  double floor = -0.2;
  double ceiling = 1.0;
  double decay = 0.1;
  double step = 0.1;
  double cue_level = 1.0;
  double tolerance = 1e-6;
  int max_iterations = 10000;
};

struct ActivationState {
  std::vector<std::string> tokens;
  std::vector<double> activation;
  int iterations = 0;
  bool converged = false;

  double at(const std::string& token) const;  // throws InputError
};

ActivationState spread_activation(const SemanticNetwork& net, const std::vector<std::string>& cues,
                                  const ActivationParams& params = {});

// Runs `steps` synchronous updates without a convergence test; the history
// includes the initial state. Used to inspect the trajectory.
std::vector<ActivationState> activation_trajectory(const SemanticNetwork& net,
                                                   const std::vector<std::string>& cues, int steps,
                                                   const ActivationParams& params = {});

// Matching scores for candidate identities under one cue.
struct BetaScores {
  int task = 0;
  std::string cue;
  std::map<std::string, double> scores;

  double at(const std::string& identity) const;  // throws InputError
};

BetaScores beta_from_activation(const ActivationState& state, const std::vector<std::string>& identities,
                                int task = 0, const std::string& cue = {});

double pcs_probability(const BetaScores& beta, const std::string& answer_a, const std::string& answer_b);

// CSV `task,cue,identity,beta`, grouped by (task, cue) in first-seen order.
// Rows repeating a (task, cue, identity) key must agree on beta.
std::vector<BetaScores> parse_handcoded_betas(std::istream& in, const std::string& source_name = "<betas>");
std::vector<BetaScores> load_handcoded_betas(const std::filesystem::path& path);

// Reserved cue token for questions that name no actor.
inline const std::string kSomeoneCue = "someone";

// Lookup over hand-coded score groups.
class ScoreTable {
 public:
  explicit ScoreTable(std::vector<BetaScores> groups);

  const std::vector<BetaScores>& groups() const { return groups_; }
  bool has_group(int task, const std::string& cue) const;
  const BetaScores& group(int task, const std::string& cue) const;  // throws InputError

  // Exact (task, cue, identity) score; throws InputError when absent.
  double score(int task, const std::string& cue, const std::string& identity) const;

  // Like score(), but an identity not listed under a named cue takes that
  // cue's lowest listed score (the "cue does not point at this identity"
  // baseline). The "someone" cue always scores 0.
  double score_or_baseline(int task, const std::string& cue, const std::string& identity) const;

  // Largest score listed anywhere in a task.
  double max_score(int task) const;

 private:
  std::vector<BetaScores> groups_;
};

// Network files: a `[nodes]` section with header `token,role,resting` and
// an `[edges]` section with header `from,to,weight`.
SemanticNetwork parse_network(std::istream& in, const std::string& source_name = "<network>");
SemanticNetwork load_network(const std::filesystem::path& path);

}  // namespace idlabel
