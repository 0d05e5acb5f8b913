// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bribery/chain/types.hpp"

namespace bribery::attacks {

using chain::Fraction;

enum class Party { Honest, Adversary };

struct Run {
  Party who = Party::Honest;
  unsigned count = 1;
  bool operator==(const Run&) const = default;
};

/// Parses "H A^2", "H^3A", "HHA A". Adjacent runs of the same party are
/// merged. Throws std::invalid_argument on bad input.
std::vector<Run> parse_chain_string(std::string_view s);
std::string format_chain_string(const std::vector<Run>& runs);

enum class ReorgKind { ExPost, ExAnte };
std::string_view to_string(ReorgKind k);

/// A parsed schedule plus attack parameters. Ex-post schedules read
/// H^h A^a; ex-ante schedules read A^a H^h A.
struct ScenarioSpec {
  ReorgKind kind = ReorgKind::ExPost;
  unsigned h = 1;
  unsigned a = 1;
  Fraction alpha{0};
  Fraction beta{0};
  Fraction p_boost{2, 5};

  void validate() const;
  std::string chain_string() const;
  /// Joint share of adversary and bribees.
  Fraction gamma() const { return alpha + (Fraction{1} - alpha) * beta; }
};

/// Classifies a schedule. Throws std::invalid_argument for shapes that are
/// neither H^h A^a nor A^a H^h A.
ScenarioSpec make_scenario(const std::vector<Run>& runs, Fraction alpha, Fraction beta,
                           Fraction p_boost = Fraction{2, 5});

bool expost_feasible(unsigned h, unsigned a, Fraction alpha, Fraction beta, Fraction p_boost);
bool exante_feasible(unsigned h, unsigned a, Fraction alpha, Fraction beta, Fraction p_boost);
bool feasible(const ScenarioSpec& s);

/// Smallest bribed share that makes the H A A ex-post reorg succeed with
/// the default boost, clamped to [0, 1].
Fraction expost_beta_min(Fraction alpha, Fraction p_boost = Fraction{2, 5});

}  // namespace bribery::attacks
