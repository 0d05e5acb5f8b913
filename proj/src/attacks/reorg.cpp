// SPDX-License-Identifier: Apache-2.0
#include "bribery/attacks/reorg.hpp"

#include <map>
#include <mutex>
#include <set>

#include "bribery/contracts/pay_to_attest.hpp"
#include "bribery/util/parallel.hpp"

namespace bribery::attacks {

using chain::OrderedJson;
using chain::Root;
using chain::Slot;
using chain::ValidatorIndex;
using chain::Visibility;

namespace {

// Deterministic keys are shared across runs; keygen dominates small runs.
std::vector<crypto::KeyPair> key_pool(const crypto::SignatureScheme& scheme, std::size_t n, std::uint64_t seed) {
  static std::mutex mu;
  static std::map<std::pair<std::string, std::uint64_t>, std::vector<crypto::KeyPair>> pools;
  std::lock_guard lock(mu);
  auto& pool = pools[{std::string(scheme.name()), seed}];
  const std::string prefix = seed == 0 ? "attester-" : "attester-" + std::to_string(seed) + "-";
  while (pool.size() < n) pool.push_back(scheme.keygen(crypto::to_bytes(prefix + std::to_string(pool.size()))));
  return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n)};
}

enum class Role { Base, Honest, AdversaryPrivate, AdversaryFinal };

struct ClassCounts {
  std::size_t adversary = 0, rational = 0, altruistic = 0;
};

// Largest-remainder split of n members over three shares summing to 1,
// with at least one member for every positive share.
ClassCounts split(std::size_t n, const Fraction& wa, const Fraction& wr, const Fraction& wh) {
  const Fraction w[3] = {wa, wr, wh};
  std::size_t c[3];
  std::size_t used = 0;
  for (int i = 0; i < 3; ++i) {
    const Fraction x = w[i] * Fraction(static_cast<std::int64_t>(n));
    c[i] = static_cast<std::size_t>(boost::rational_cast<double>(x) + 0.5);
    if (w[i] > 0 && c[i] == 0) c[i] = 1;
    if (w[i] == Fraction{0}) c[i] = 0;
    used += c[i];
  }
  while (used > n) {
    int big = 0;
    for (int i = 1; i < 3; ++i)
      if (c[i] > c[big]) big = i;
    --c[big];
    --used;
  }
  while (used < n) {
    int big = 0;
    for (int i = 1; i < 3; ++i)
      if (w[i] > w[big]) big = i;
    ++c[big];
    ++used;
  }
  return {c[0], c[1], c[2]};
}

class Orchestrator {
 public:
  Orchestrator(const ScenarioSpec& spec, const AttackParams& params) : spec_(spec), params_(params) {
    spec_.validate();
    if (params_.committee_size < 3) throw std::invalid_argument("committee_size must be at least 3");

    roles_.push_back(Role::Base);
    auto push = [&](Role r, unsigned n) { roles_.insert(roles_.end(), n, r); };
    if (spec_.kind == ReorgKind::ExPost) {
      push(Role::Honest, spec_.h);
      push(Role::AdversaryPrivate, spec_.a - 1);
    } else {
      push(Role::AdversaryPrivate, spec_.a);
      push(Role::Honest, spec_.h);
    }
    push(Role::AdversaryFinal, 1);

    chain::ChainConfig cfg;
    cfg.p_boost = spec_.p_boost;
    // Slots 1..L each get their own committee.
    cfg.committees_per_epoch = roles_.size() + 1;
    if (cfg.committees_per_epoch > cfg.slots_per_epoch)
      throw std::invalid_argument("schedule longer than one epoch");

    auto scheme = crypto::make_scheme(params_.backend);
    const Fraction one{1};
    const Fraction wa = spec_.alpha, wr = (one - spec_.alpha) * spec_.beta, wh = (one - spec_.alpha) * (one - spec_.beta);
    counts_ = split(params_.committee_size, wa, wr, wh);
    const std::size_t c = cfg.committees_per_epoch, v = params_.committee_size;
    auto keys = key_pool(*scheme, c * v + 2, params_.key_seed);
    chain::ValidatorSet set;
    for (std::size_t i = 0; i < c * v; ++i) {
      const std::size_t j = i / c;
      if (j < counts_.adversary)
        set.add(keys[i], wa / Fraction(static_cast<std::int64_t>(counts_.adversary)), chain::Behavior::Adversary);
      else if (j < counts_.adversary + counts_.rational)
        set.add(keys[i], wr / Fraction(static_cast<std::int64_t>(counts_.rational)), chain::Behavior::Rational);
      else
        set.add(keys[i], wh / Fraction(static_cast<std::int64_t>(counts_.altruistic)), chain::Behavior::Altruistic);
    }
    honest_proposer_ = set.add(keys[c * v], Fraction{0}, chain::Behavior::Altruistic);
    adversary_proposer_ = set.add(keys[c * v + 1], Fraction{0}, chain::Behavior::Adversary);

    if (params_.record_transcript) transcript_ = std::make_shared<chain::Transcript>();
    chain_ = std::make_unique<chain::SimChain>(cfg, scheme, std::move(set), chain::TieBreak::FirstSeen, transcript_);
    contract_ = std::make_unique<contracts::PayToAttest>("adversary", scheme, *chain_, transcript_);
    contract_->deposit_funds("adversary", static_cast<contracts::Gwei>(v * roles_.size()) * params_.bribe_per_vote);
  }

  AttackReport run() {
    AttackReport rep;
    rep.spec = spec_;
    rep.committee_size = params_.committee_size;
    rep.predicted = feasible(spec_);
    rep.transcript = transcript_;
    auto& ch = *chain_;
    const auto& cfg = ch.config();
    const Slot final_slot = roles_.size();

    for (Slot s = 1; s <= final_slot; ++s) {
      const Role role = roles_[s - 1];
      ch.advance_to_slot(s);
      const auto t0 = ch.now();
      SlotRecord rec;
      rec.slot = s;
      rec.proposer = role == Role::Base || role == Role::Honest ? Party::Honest : Party::Adversary;

      switch (role) {
        case Role::Base:
          ch.set_proposer(s, honest_proposer_);
          base_ = ch.propose_block(s, honest_proposer_, ch.genesis_root())->root();
          adv_tip_ = base_;
          rec.block = base_;
          break;
        case Role::Honest: {
          ch.set_proposer(s, honest_proposer_);
          auto b = ch.propose_block(s, honest_proposer_, ch.head_at(t0))->root();
          honest_.insert(b);
          honest_tip_ = b;
          rec.block = b;
          break;
        }
        case Role::AdversaryPrivate: {
          ch.set_proposer(s, adversary_proposer_);
          auto b = ch.propose_block(s, adversary_proposer_, adv_tip_, true, Visibility::Private)->root();
          adversary_.insert(b);
          adv_tip_ = b;
          rec.block = b;
          rec.block_private = true;
          break;
        }
        case Role::AdversaryFinal: {
          ch.set_proposer(s, adversary_proposer_);
          ch.publish_all_private();
          auto b = ch.propose_block(s, adversary_proposer_, adv_tip_)->root();
          adversary_.insert(b);
          adv_tip_ = b;
          rec.block = b;
          const auto fc = ch.fork_choice_at(t0);
          rep.decision_slot = s;
          rep.adversary_weight = fc.weight(branch_root(b));
          rep.honest_weight = honest_tip_ ? fc.weight(branch_root(*honest_tip_)) : Fraction{0};
          break;
        }
      }
      rep.head_history.emplace_back(t0, ch.head_at(t0));

      // Coalition target for this slot; honest members follow their view.
      std::optional<Root> coalition;
      if (role == Role::Honest || role == Role::AdversaryPrivate)
        coalition = spec_.kind == ReorgKind::ExPost && role == Role::Honest ? base_ : adv_tip_;
      std::optional<contracts::OfferId> offer;
      const auto committee = ch.validators().committee(s, cfg);
      std::vector<crypto::PublicKey> bribee_pks;
      if (coalition) {
        for (auto i : committee)
          if (ch.validators().at(i).behavior == chain::Behavior::Rational) bribee_pks.push_back(ch.validators().at(i).keys.pk);
        if (!bribee_pks.empty()) {
          const auto amount = static_cast<contracts::Gwei>(bribee_pks.size()) * params_.bribe_per_vote;
          offer = contract_->attest_offer("adversary", bribee_pks, ch.attestation_data(s, *coalition),
                                          cfg.slot_start(final_slot + 1), amount);
        }
      }

      ch.advance_to_deadline(s);
      const Root view = ch.head_at(ch.now());
      rec.public_head = view;
      const Visibility coalition_vis =
          coalition && ch.block(*coalition).released ? Visibility::Public : Visibility::Private;
      std::vector<crypto::Signature> bribee_sigs;
      for (auto i : committee) {
        const auto& v = ch.validators().at(i);
        if (v.stake == Fraction{0}) continue;
        const bool follows_coalition = coalition && v.behavior != chain::Behavior::Altruistic;
        const Root target = follows_coalition ? *coalition : view;
        auto att = ch.attest(s, i, target, follows_coalition ? coalition_vis : Visibility::Public);
        if (follows_coalition && v.behavior == chain::Behavior::Rational) bribee_sigs.push_back(att.signature);
        tally(rec, target, v.stake);
      }
      if (offer) {
        const auto paid = contract_->attest_take("bribees", *offer, ch.scheme().aggregate_signatures(bribee_sigs));
        rep.payouts.push_back({s, paid, bribee_sigs.size()});
        rep.total_bribes += paid;
      }
      rep.slots.push_back(std::move(rec));
    }

    ch.advance_to_slot(final_slot + 1);
    rep.final_head = ch.head();
    rep.head_history.emplace_back(ch.now(), rep.final_head);
    rep.base = base_;
    rep.adversary_tip = adv_tip_;
    rep.honest_tip = honest_tip_.value_or(Root{});
    rep.success = rep.final_head == adv_tip_;
    rep.slashable = ch.slashable_validators().size();
    return rep;
  }

 private:
  // Child of the base block on r's ancestry.
  Root branch_root(Root r) const {
    while (chain_->block(r).header.parent_hash != base_) r = chain_->block(r).header.parent_hash;
    return r;
  }

  void tally(SlotRecord& rec, const Root& target, const Fraction& w) const {
    if (adversary_.count(target))
      rec.adversary_votes += w;
    else if (honest_.count(target))
      rec.honest_votes += w;
    else
      rec.base_votes += w;
  }

  ScenarioSpec spec_;
  AttackParams params_;
  std::vector<Role> roles_;
  ClassCounts counts_;
  ValidatorIndex honest_proposer_ = 0, adversary_proposer_ = 0;
  std::shared_ptr<chain::Transcript> transcript_;
  std::unique_ptr<chain::SimChain> chain_;
  std::unique_ptr<contracts::PayToAttest> contract_;
  Root base_{}, adv_tip_{};
  std::optional<Root> honest_tip_;
  std::set<Root> adversary_, honest_;
};

std::string frac_str(const Fraction& f) {
  return std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

}  // namespace

AttackReport run_expost(const ScenarioSpec& spec, const AttackParams& params) {
  if (spec.kind != ReorgKind::ExPost) throw std::invalid_argument("run_expost: not an ex-post schedule");
  return Orchestrator(spec, params).run();
}

AttackReport run_exante(const ScenarioSpec& spec, const AttackParams& params) {
  if (spec.kind != ReorgKind::ExAnte) throw std::invalid_argument("run_exante: not an ex-ante schedule");
  return Orchestrator(spec, params).run();
}

AttackReport run_scenario(const ScenarioSpec& spec, const AttackParams& params) {
  return Orchestrator(spec, params).run();
}

OrderedJson AttackReport::to_json() const {
  auto weight = [](const Fraction& f) { return OrderedJson{{"exact", frac_str(f)}, {"value", chain::to_double(f)}}; };
  OrderedJson j;
  j["schema_version"] = 1;
  j["spec"] = {{"kind", to_string(spec.kind)},
               {"chain", spec.chain_string()},
               {"h", spec.h},
               {"a", spec.a},
               {"alpha", weight(spec.alpha)},
               {"beta", weight(spec.beta)},
               {"p_boost", weight(spec.p_boost)},
               {"committee_size", committee_size}};
  j["predicted_success"] = predicted;
  j["success"] = success;
  j["decision"] = {{"slot", decision_slot},
                   {"adversary_weight", weight(adversary_weight)},
                   {"honest_weight", weight(honest_weight)}};
  j["base"] = crypto::to_hex(base);
  j["adversary_tip"] = crypto::to_hex(adversary_tip);
  j["honest_tip"] = crypto::to_hex(honest_tip);
  j["final_head"] = crypto::to_hex(final_head);
  auto& slots_json = j["slots"] = OrderedJson::array();
  for (const auto& s : slots) {
    slots_json.push_back({{"slot", s.slot},
                          {"proposer", s.proposer == Party::Honest ? "H" : "A"},
                          {"block", s.block ? OrderedJson(crypto::to_hex(*s.block)) : OrderedJson(nullptr)},
                          {"private", s.block_private},
                          {"adversary_votes", weight(s.adversary_votes)},
                          {"honest_votes", weight(s.honest_votes)},
                          {"base_votes", weight(s.base_votes)},
                          {"public_head", crypto::to_hex(s.public_head)}});
  }
  auto& hist = j["head_history"] = OrderedJson::array();
  for (const auto& [t, r] : head_history) hist.push_back({{"t", t}, {"head", crypto::to_hex(r)}});
  auto& pay = j["payouts"] = OrderedJson::array();
  for (const auto& p : payouts) pay.push_back({{"slot", p.slot}, {"bribees", p.bribees}, {"amount_gwei", p.amount}});
  j["total_bribes_gwei"] = total_bribes;
  j["slashable_validators"] = slashable;
  return j;
}

std::vector<Fraction> linspace(Fraction lo, Fraction hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<Fraction> out;
  const Fraction step = (hi - lo) / Fraction(static_cast<std::int64_t>(n - 1));
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo + step * Fraction(static_cast<std::int64_t>(i)));
  return out;
}

std::vector<GridCell> reorg_grid(const std::vector<unsigned>& hs, const std::vector<unsigned>& as,
                                 const std::vector<Fraction>& alphas, const std::vector<Fraction>& betas,
                                 const AttackParams& params, Fraction p_boost, unsigned threads) {
  std::vector<GridCell> cells;
  for (auto kind : {ReorgKind::ExPost, ReorgKind::ExAnte})
    for (auto h : hs)
      for (auto a : as)
        for (const auto& al : alphas)
          for (const auto& be : betas) cells.push_back({h, a, kind, al, be});

  util::parallel_for(
      cells.size(),
      [&](std::size_t i) {
        auto& c = cells[i];
        ScenarioSpec s;
        s.kind = c.kind;
        s.h = c.h;
        s.a = c.a;
        s.alpha = c.alpha;
        s.beta = c.beta;
        s.p_boost = p_boost;
        const auto rep = run_scenario(s, params);
        c.predicted = rep.predicted;
        c.simulated = rep.success;
        c.adversary_weight = rep.adversary_weight;
        c.honest_weight = rep.honest_weight;
      },
      threads);
  return cells;
}

}  // namespace bribery::attacks
