// SPDX-License-Identifier: Apache-2.0
#include "bribery/attacks/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace bribery::attacks {

std::vector<Run> parse_chain_string(std::string_view s) {
  std::vector<Run> runs;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  if (i == s.size()) throw std::invalid_argument("empty chain string");
  while (i < s.size()) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[i])));
    if (c != 'H' && c != 'A') throw std::invalid_argument(std::string("unknown symbol '") + s[i] + "' in chain string");
    ++i;
    skip_ws();
    unsigned count = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      skip_ws();
      if (i == s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
        throw std::invalid_argument("missing exponent after '^'");
      unsigned long v = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        v = v * 10 + static_cast<unsigned long>(s[i] - '0');
        if (v > 1000) throw std::invalid_argument("exponent too large");
        ++i;
      }
      if (v == 0) throw std::invalid_argument("zero exponent");
      count = static_cast<unsigned>(v);
      skip_ws();
    }
    const Party who = c == 'H' ? Party::Honest : Party::Adversary;
    if (!runs.empty() && runs.back().who == who)
      runs.back().count += count;
    else
      runs.push_back({who, count});
  }
  return runs;
}

std::string format_chain_string(const std::vector<Run>& runs) {
  std::string out;
  for (const auto& r : runs) {
    if (!out.empty()) out += ' ';
    out += r.who == Party::Honest ? 'H' : 'A';
    if (r.count != 1) out += "^" + std::to_string(r.count);
  }
  return out;
}

std::string_view to_string(ReorgKind k) { return k == ReorgKind::ExPost ? "ex-post" : "ex-ante"; }

void ScenarioSpec::validate() const {
  if (alpha < 0 || alpha > Fraction{1, 2}) throw std::invalid_argument("alpha must lie in [0, 0.5]");
  if (beta < 0 || beta > 1) throw std::invalid_argument("beta must lie in [0, 1]");
  if (p_boost < 0 || p_boost > 1) throw std::invalid_argument("p_boost must lie in [0, 1]");
  if (h < 1 || a < 1) throw std::invalid_argument("h and a must be at least 1");
}

std::string ScenarioSpec::chain_string() const {
  if (kind == ReorgKind::ExPost) return format_chain_string({{Party::Honest, h}, {Party::Adversary, a}});
  return format_chain_string({{Party::Adversary, a}, {Party::Honest, h}, {Party::Adversary, 1}});
}

ScenarioSpec make_scenario(const std::vector<Run>& runs, Fraction alpha, Fraction beta, Fraction p_boost) {
  ScenarioSpec s;
  s.alpha = alpha;
  s.beta = beta;
  s.p_boost = p_boost;
  if (runs.size() == 2 && runs[0].who == Party::Honest) {
    s.kind = ReorgKind::ExPost;
    s.h = runs[0].count;
    s.a = runs[1].count;
  } else if (runs.size() == 3 && runs[0].who == Party::Adversary && runs[2].count == 1) {
    s.kind = ReorgKind::ExAnte;
    s.a = runs[0].count;
    s.h = runs[1].count;
  } else {
    throw std::invalid_argument("unsupported schedule '" + format_chain_string(runs) +
                                "': expected H^h A^a or A^a H^h A");
  }
  s.validate();
  return s;
}

bool expost_feasible(unsigned h, unsigned a, Fraction alpha, Fraction beta, Fraction p_boost) {
  const Fraction g = alpha + (Fraction{1} - alpha) * beta;
  return Fraction(a - 1) * g + p_boost > Fraction(h + a - 1) * (Fraction{1} - g);
}

bool exante_feasible(unsigned h, unsigned a, Fraction alpha, Fraction beta, Fraction p_boost) {
  const Fraction g = alpha + (Fraction{1} - alpha) * beta;
  return Fraction(a + h) * g + p_boost > Fraction(h) * (Fraction{1} - g);
}

bool feasible(const ScenarioSpec& s) {
  return s.kind == ReorgKind::ExPost ? expost_feasible(s.h, s.a, s.alpha, s.beta, s.p_boost)
                                     : exante_feasible(s.h, s.a, s.alpha, s.beta, s.p_boost);
}

Fraction expost_beta_min(Fraction alpha, Fraction p_boost) {
  if (alpha >= 1) return Fraction{0};
  Fraction b = (Fraction{2} - Fraction{3} * alpha - p_boost) / (Fraction{3} * (Fraction{1} - alpha));
  return std::clamp(b, Fraction{0}, Fraction{1});
}

}  // namespace bribery::attacks
