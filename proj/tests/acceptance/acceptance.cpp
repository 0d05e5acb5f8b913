// SPDX-License-Identifier: Apache-2.0
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "bribery/attacks/randao_bias.hpp"
#include "bribery/attacks/reorg.hpp"
#include "bribery/cli/run_config.hpp"
#include "bribery/contracts/pay_to_attest.hpp"
#include "bribery/contracts/pay_to_bias.hpp"
#include "bribery/contracts/pay_to_exit.hpp"
#include "bribery/crypto/merkle.hpp"
#include "bribery/economics/economics.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace bribery;
using chain::Fraction;
using contracts::ContractError;
using contracts::ContractRevert;
using contracts::Gwei;

// Collects failures; the first few are shown on the result line.
struct Outcome {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Independent transcriptions of the closed forms used as oracles.
double reward_oracle(double n) { return 32 * (2940.21 / std::sqrt(n) + 1078543.3 / n); }
double pv_oracle(double r, double y) { return (1 - std::pow(1 + r, -y)) / (100 * r); }

// --- 1 ------------------------------------------------------------------

Outcome stackelberg_chain() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = cli::load_config(std::string(BRIBERY_CONFIG_DIR) + "/sept-2025.ini");
  const auto eq = economics::solve_equilibrium(
      {cfg.validators, cfg.alpha, chain::to_double(cfg.alpha_star), 1}, cfg.econ);
  const double secs = seconds_since(t0);

  const double n = static_cast<double>(cfg.validators);
  const auto k_oracle = static_cast<std::uint64_t>(std::ceil(n * (1 - 0.239 * 3) - 1e-9));
  const double b_oracle = reward_oracle(n - static_cast<double>(k_oracle)) * pv_oracle(0.08, 9);

  o.expect(std::abs(static_cast<double>(eq.k) - 317'982) <= 30, "k* = " + std::to_string(eq.k));
  o.expect(eq.k == k_oracle, "k* differs from oracle " + std::to_string(k_oracle));
  o.expect(std::abs(eq.bribe.value - 9.23) <= 0.02, "b* = " + fmt("%.4f", eq.bribe.value));
  o.expect(std::abs(eq.bribe.value - b_oracle) <= 1e-9 * b_oracle, "b* differs from oracle");
  o.expect(std::abs(eq.bribe_usd.value - 41'333) <= 100, "b* USD = " + fmt("%.2f", eq.bribe_usd.value));
  o.expect(secs < 1.0, "runtime " + fmt("%.3f", secs) + " s");
  o.note("k*=" + std::to_string(eq.k) + " b*=" + fmt("%.4f", eq.bribe.value) + " ETH (" +
         fmt("%.2f", eq.bribe_usd.value) + " USD) in " + fmt("%.3f", secs) + " s");
  return o;
}

// --- 2 ------------------------------------------------------------------

Outcome half_life() {
  Outcome o;
  const double h = economics::half_life(0.08);
  const double oracle = std::log(2.0) / std::log(1.08);
  o.expect(std::abs(h - 9.006) <= 0.001, "half_life = " + fmt("%.5f", h));
  o.expect(std::abs(h - oracle) < 1e-12, "half_life differs from oracle");
  const double pv = economics::pv_multiplier(0.08, h);
  const double half_perp = economics::perpetuity_multiplier(0.08) / 2;
  o.expect(std::abs(pv - half_perp) <= 1e-6, "pv(half-life) = " + fmt("%.9f", pv));
  o.expect(std::abs(pv_oracle(0.08, h) - half_perp) <= 1e-6, "oracle pv(half-life) mismatch");
  o.note("half_life(0.08)=" + fmt("%.5f", h) + " pv=" + fmt("%.9f", pv) + " perpetuity/2=" + fmt("%.9f", half_perp));
  return o;
}

// --- 3 ------------------------------------------------------------------

Outcome exit_duration() {
  Outcome o;
  const double d = economics::exit_duration_days(317'982, 8, 225);
  o.expect(std::abs(d - 176.7) <= 0.5, "duration(317982) = " + fmt("%.2f", d));
  o.expect(std::abs(d - 317'982.0 / 1800) < 1e-9, "duration differs from k / (8 * 225)");

  std::ifstream in(std::string(BRIBERY_TEST_DATA) + "/exit_duration_cells.json");
  const auto data = nlohmann::json::parse(in);
  const auto ax = economics::axis(data["grid"]["lo"], data["grid"]["hi"], data["grid"]["n"]);
  const std::uint64_t n = data["n_validators"];
  double worst = 0;
  std::size_t checked = 0;
  for (const auto& c : data["cells"]) {
    const double a = ax[c["col"].get<std::size_t>()], s = ax[c["row"].get<std::size_t>()];
    const double label = std::stod(c["label"].get<std::string>());
    const double got = economics::exit_duration_days(economics::required_exits(n, a, s));
    const double rel = std::abs(got - label) / label;
    worst = std::max(worst, rel);
    o.expect(rel <= 0.05, "cell (" + fmt("%.4f", a) + ", " + fmt("%.4f", s) + ") = " + fmt("%.1f", got) +
                              " vs " + c["label"].get<std::string>());
    ++checked;
  }
  o.expect(checked == 45, "expected 45 annotated cells");
  // The example cell named in the criterion.
  const double cell = economics::exit_duration_days(economics::required_exits(n, ax[85], ax[95]));
  o.expect(std::abs(cell - 64) <= 0.05 * 64, "(0.43, 0.48) = " + fmt("%.1f", cell));
  o.note("duration(317982)=" + fmt("%.2f", d) + " d; " + std::to_string(checked) + " cells, worst rel. error " +
         fmt("%.4f", worst) + "; (" + fmt("%.3f", ax[85]) + ", " + fmt("%.3f", ax[95]) + ")=" + fmt("%.1f", cell) + " d");
  return o;
}

// --- 4 ------------------------------------------------------------------

Outcome expost_cost() {
  Outcome o;
  const auto cfg = cli::load_config(std::string(BRIBERY_CONFIG_DIR) + "/april-2025.ini");
  const auto alphas = economics::axis(cfg.alpha_axis.lo, cfg.alpha_axis.hi, cfg.alpha_axis.n);
  const auto betas = economics::axis(cfg.beta_axis.lo, cfg.beta_axis.hi, cfg.beta_axis.n);
  const auto cells = economics::expost_cost_grid(cfg.validators, cfg.stake_eth(), alphas, betas, cfg.econ);
  double max = 0;
  std::size_t feasible = 0, over = 0;
  for (const auto& c : cells) {
    if (!c.feasible) continue;
    ++feasible;
    max = std::max(max, c.value);
    if (!(c.value < 0.09)) ++over;
  }
  o.expect(std::abs(max - 0.080) <= 0.005, "max = " + fmt("%.5f", max));
  o.expect(over == 0, std::to_string(over) + " feasible cells at or above 0.09 ETH");

  // Boundary: the library's beta_min against the closed form, and in exact
  // arithmetic the H A A reorg fails at beta_min and succeeds just above it.
  for (int i = 0; i <= 200; ++i) {
    const Fraction a(i, 400);  // 0 .. 1/2
    const Fraction bmin = (Fraction(8, 5) - 3 * a) / (3 * (1 - a));
    const double ad = chain::to_double(a);
    o.expect(std::abs(economics::feasibility_boundary(ad) - std::clamp((1.6 - 3 * ad) / (3 * (1 - ad)), 0.0, 1.0)) < 1e-12,
             "beta_min mismatch at alpha=" + fmt("%.4f", ad));
    if (bmin > 0 && bmin < 1) {
      o.expect(!attacks::expost_feasible(1, 2, a, bmin, Fraction(2, 5)), "feasible at beta_min, alpha=" + fmt("%.4f", ad));
      o.expect(attacks::expost_feasible(1, 2, a, bmin + Fraction(1, 1'000'000), Fraction(2, 5)),
               "infeasible above beta_min, alpha=" + fmt("%.4f", ad));
    }
  }
  for (const auto& c : cells) {
    const bool above = c.y > std::clamp((1.6 - 3 * c.alpha) / (3 * (1 - c.alpha)), 0.0, 1.0);
    if (above != c.feasible) o.expect(false, "grid feasibility off the boundary at (" + fmt("%.4f", c.alpha) + ", " + fmt("%.4f", c.y) + ")");
  }
  o.note("N=" + std::to_string(cfg.validators) + ", " + std::to_string(feasible) + "/" + std::to_string(cells.size()) +
         " feasible, max " + fmt("%.5f", max) + " ETH");
  return o;
}

// --- 5 ------------------------------------------------------------------

Outcome predicate_agreement() {
  Outcome o;
  attacks::AttackParams params;
  params.committee_size = 20;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cells = attacks::reorg_grid({1, 2, 3}, {1, 2, 3}, attacks::linspace(Fraction{0}, Fraction{1, 2}, 21),
                                         attacks::linspace(Fraction{0}, Fraction{1}, 21), params);
  const double secs = seconds_since(t0);
  std::size_t agree = 0, exact = 0, success = 0;
  for (const auto& c : cells) {
    const Fraction g = c.alpha + (1 - c.alpha) * c.beta;
    const Fraction p{2, 5};
    const Fraction h(c.h), a(c.a);
    const Fraction adv = c.kind == attacks::ReorgKind::ExPost ? (a - 1) * g + p : (a + h) * g + p;
    const Fraction hon = c.kind == attacks::ReorgKind::ExPost ? (h + a - 1) * (1 - g) : h * (1 - g);
    const bool formula = adv > hon;
    agree += c.simulated == formula && c.predicted == formula;
    exact += c.adversary_weight == adv && c.honest_weight == hon;
    success += c.simulated;
  }
  o.expect(cells.size() == 2u * 9 * 21 * 21, "cell count " + std::to_string(cells.size()));
  o.expect(agree == cells.size(), "agreement " + std::to_string(agree) + "/" + std::to_string(cells.size()));
  o.expect(exact == cells.size(), "exact weights " + std::to_string(exact) + "/" + std::to_string(cells.size()));
  o.expect(secs < 60, "runtime " + fmt("%.1f", secs) + " s");

  // Spot check that the committee size does not move the weights.
  params.committee_size = 1000;
  for (auto [h, a] : {std::pair{1u, 2u}, std::pair{2u, 3u}}) {
    auto spec = attacks::make_scenario({{attacks::Party::Honest, h}, {attacks::Party::Adversary, a}}, Fraction(3, 10),
                                       Fraction(1, 2));
    const auto rep = attacks::run_scenario(spec, params);
    const Fraction g = Fraction(3, 10) + Fraction(7, 10) * Fraction(1, 2);
    o.expect(rep.adversary_weight == Fraction(a - 1) * g + Fraction(2, 5) &&
                 rep.honest_weight == Fraction(h + a - 1) * (1 - g),
             "committee 1000 weights differ");
  }
  o.note(std::to_string(cells.size()) + " cells (21x21 x {1..3}^2 x 2 kinds), " + std::to_string(success) +
         " successes, agreement " + std::to_string(agree) + ", exact weights " + std::to_string(exact) + ", " +
         fmt("%.1f", secs) + " s");
  return o;
}

// --- 6 ------------------------------------------------------------------

template <class F>
bool accepts(F&& verify_call) {
  try {
    return verify_call().valid;
  } catch (const crypto::DecodeError&) {
    return false;
  }
}

crypto::Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  crypto::Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

void flip_bit(crypto::Bytes& b, std::mt19937_64& rng) {
  const auto bit = rng() % (b.size() * 8);
  b[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
}

struct FuzzTally {
  std::size_t trials = 0, false_accepts = 0, false_rejects = 0;
};

// One trial exercises one verifier: the genuine input must verify and a
// single random corruption must not.
FuzzTally signature_fuzz(const crypto::SignatureScheme& s, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FuzzTally t;
  for (int trial = 0; trial < trials; ++trial, ++t.trials) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<crypto::KeyPair> kps;
    for (std::size_t i = 0; i < n; ++i) kps.push_back(s.keygen(random_bytes(rng, 16)));
    const auto m = random_bytes(rng, 1 + rng() % 48);
    const auto other = random_bytes(rng, 1 + rng() % 48);
    const auto stranger = s.keygen(random_bytes(rng, 16));
    bool genuine = false, forged = false;
    switch (trial % 3) {
      case 0: {
        auto sig = s.sign(kps[0].sk, m);
        genuine = accepts([&] { return s.verify(kps[0].pk, m, sig); });
        switch (rng() % 3) {
          case 0: forged = accepts([&] { return s.verify(stranger.pk, m, sig); }); break;
          case 1: forged = m != other && accepts([&] { return s.verify(kps[0].pk, other, sig); }); break;
          default: flip_bit(sig.bytes, rng); forged = accepts([&] { return s.verify(kps[0].pk, m, sig); });
        }
        break;
      }
      case 1: {
        std::vector<crypto::PublicKey> pks;
        std::vector<crypto::Signature> sigs;
        for (const auto& kp : kps) pks.push_back(kp.pk), sigs.push_back(s.sign(kp.sk, m));
        auto agg = s.aggregate_signatures(sigs);
        genuine = accepts([&] { return s.verify_same_message_batch(pks, m, agg); });
        switch (rng() % 4) {
          case 0:  // one signer signed something else
            if (m == other) break;
            sigs[rng() % n] = s.sign(kps[0].sk, other);
            agg = s.aggregate_signatures(sigs);
            forged = accepts([&] { return s.verify_same_message_batch(pks, m, agg); });
            break;
          case 1:  // key set claims a stranger
            pks[rng() % n] = stranger.pk;
            forged = accepts([&] { return s.verify_same_message_batch(pks, m, agg); });
            break;
          case 2:  // extra key never signed
            pks.push_back(stranger.pk);
            forged = accepts([&] { return s.verify_same_message_batch(pks, m, agg); });
            break;
          default:
            flip_bit(agg.bytes, rng);
            forged = accepts([&] { return s.verify_same_message_batch(pks, m, agg); });
        }
        break;
      }
      default: {
        std::vector<crypto::KeyMessage> pairs;
        std::vector<crypto::Signature> sigs;
        for (std::size_t i = 0; i < n; ++i) {
          auto mi = m;
          mi.push_back(static_cast<std::uint8_t>(i));
          pairs.push_back({kps[i].pk, mi});
          sigs.push_back(s.sign(kps[i].sk, mi));
        }
        auto agg = s.aggregate_signatures(sigs);
        genuine = accepts([&] { return s.verify_distinct_message_batch(pairs, agg); });
        switch (rng() % 3) {
          case 0:
            pairs[rng() % n].message = other;
            forged = accepts([&] { return s.verify_distinct_message_batch(pairs, agg); });
            break;
          case 1:
            if (n < 2) {
              pairs[0].pk = stranger.pk;
            } else {
              std::swap(pairs[0].message, pairs[1].message);
            }
            forged = accepts([&] { return s.verify_distinct_message_batch(pairs, agg); });
            break;
          default:
            flip_bit(agg.bytes, rng);
            forged = accepts([&] { return s.verify_distinct_message_batch(pairs, agg); });
        }
      }
    }
    t.false_rejects += !genuine;
    t.false_accepts += forged;
  }
  return t;
}

FuzzTally merkle_fuzz(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FuzzTally t;
  for (int trial = 0; trial < trials; ++trial, ++t.trials) {
    crypto::MerkleTree tree(6);
    const std::size_t n = 1 + rng() % 40;
    for (std::size_t i = 0; i < n; ++i) tree.append(crypto::to_bytes("d" + std::to_string(rng())));
    const std::size_t idx = rng() % n;
    crypto::Bytes leaf = tree.leaf(idx);
    auto proof = tree.prove(leaf, idx);
    t.false_rejects += !crypto::merkle_verify(tree.root(), leaf, idx, proof);
    std::uint64_t index = idx;
    switch (rng() % 3) {
      case 0: leaf[rng() % leaf.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255); break;
      case 1: index ^= std::uint64_t{1} << (rng() % 6); break;
      default: proof.siblings[rng() % proof.siblings.size()][rng() % 32] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    }
    t.false_accepts += crypto::merkle_verify(tree.root(), leaf, index, proof);
  }
  return t;
}

// Pairing counts for n in {1, 5, 25}; true when all match.
bool pairing_counts(const crypto::SignatureScheme& s, Outcome& o) {
  bool ok = true;
  const auto m = crypto::to_bytes("m");
  for (std::size_t n : {1u, 5u, 25u}) {
    std::vector<crypto::PublicKey> pks;
    std::vector<crypto::KeyMessage> pairs;
    std::vector<crypto::Signature> same, distinct;
    for (std::size_t i = 0; i < n; ++i) {
      auto kp = s.keygen(crypto::to_bytes("pc-" + std::to_string(i)));
      pks.push_back(kp.pk);
      same.push_back(s.sign(kp.sk, m));
      auto mi = crypto::to_bytes("m" + std::to_string(i));
      pairs.push_back({kp.pk, mi});
      distinct.push_back(s.sign(kp.sk, mi));
    }
    const auto before = s.pairings_evaluated();
    const auto r1 = s.verify_same_message_batch(pks, m, s.aggregate_signatures(same));
    const auto r2 = s.verify_distinct_message_batch(pairs, s.aggregate_signatures(distinct));
    const bool good = r1.valid && r2.valid && r1.pairings == 2 && r2.pairings == n + 1 &&
                      s.pairings_evaluated() - before == 2 + n + 1;
    o.expect(good, std::string(s.name()) + " n=" + std::to_string(n) + ": " + std::to_string(r1.pairings) + " vs " +
                       std::to_string(r2.pairings));
    ok = ok && good;
  }
  return ok;
}

bool g_pairing_counts_ok = false;

Outcome crypto_properties() {
  Outcome o;
  constexpr int kTrials = 10'000;
  for (const char* backend : {"mock", "bls12-381"}) {
    auto s = crypto::make_scheme(backend);
    const auto t0 = std::chrono::steady_clock::now();
    const auto t = signature_fuzz(*s, kTrials, 2024);
    o.expect(t.false_accepts == 0, std::string(backend) + ": " + std::to_string(t.false_accepts) + " false accepts");
    o.expect(t.false_rejects == 0, std::string(backend) + ": " + std::to_string(t.false_rejects) + " genuine rejected");
    o.note(std::string(backend) + " " + std::to_string(t.trials) + " trials, " + std::to_string(t.false_accepts) +
           " false accepts (" + fmt("%.1f", seconds_since(t0)) + " s)");
  }
  const auto mt = merkle_fuzz(kTrials, 99);
  o.expect(mt.false_accepts == 0, "merkle: " + std::to_string(mt.false_accepts) + " false accepts");
  o.expect(mt.false_rejects == 0, "merkle: genuine proofs rejected");
  o.note("merkle " + std::to_string(mt.trials) + " trials, " + std::to_string(mt.false_accepts) + " false accepts");

  bool counts = true;
  for (const char* backend : {"mock", "bls12-381"}) counts = pairing_counts(*crypto::make_scheme(backend), o) && counts;
  g_pairing_counts_ok = counts;
  o.note(std::string("pairings same-message=2, distinct=n+1 for n in {1,5,25}: ") + (counts ? "yes" : "no"));
  return o;
}

// --- 7 ------------------------------------------------------------------

// Code of the revert raised by f, or nullopt when f succeeds.
template <class F>
std::optional<ContractError> revert_of(F&& f) {
  try {
    f();
  } catch (const ContractRevert& e) {
    return e.code();
  }
  return std::nullopt;
}

Outcome contract_safety() {
  Outcome o;
  auto scheme = testing::mock_scheme();
  chain::SimChain ch(chain::ChainConfig{}, scheme, testing::make_validators(*scheme, 256));
  const auto block = *ch.propose_block(1, ch.scheduled_proposer(1), ch.genesis_root());
  ch.advance_to_deadline(1);
  const auto committee = ch.validators().committee(1, ch.config());
  const auto m = ch.attestation_data(1, block.root());
  std::vector<crypto::PublicKey> pks;
  std::vector<crypto::Signature> sigs;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& v = ch.validators().at(committee[i]);
    pks.push_back(v.keys.pk);
    sigs.push_back(scheme->sign(v.keys.sk, m.serialize()));
  }
  const auto sigma = scheme->aggregate_signatures(sigs);
  const auto sigma_short = scheme->aggregate_signatures(std::span(sigs).first(2));

  // Conservation against a model ledger.
  std::mt19937_64 rng(77);
  std::size_t violations = 0, takes = 0, reverts = 0;
  for (int seq = 0; seq < 10'000; ++seq) {
    contracts::PayToAttest c("briber", scheme, ch);
    Gwei bal = 0, paid = 0, withdrawn = 0;
    std::vector<std::pair<contracts::OfferId, Gwei>> offers;
    const int ops = 2 + static_cast<int>(rng() % 10);
    for (int op = 0; op < ops; ++op) {
      const auto before = c.state_digest();
      const Gwei amt = static_cast<Gwei>(rng() % 12);
      try {
        switch (rng() % 6) {
          case 0:
            c.deposit_funds(rng() % 5 ? "briber" : "mallory", amt);
            bal += amt;
            break;
          case 1:
            c.withdraw_funds("briber", amt);
            bal -= amt;
            withdrawn += amt;
            break;
          case 2:
            offers.emplace_back(c.attest_offer("briber", pks, m, ch.now() + static_cast<int>(rng() % 2), amt), amt);
            break;
          case 3:
          case 4: {
            if (offers.empty()) break;
            auto [id, a] = offers[rng() % offers.size()];
            const auto got = c.attest_take("bribee", id, rng() % 3 ? sigma : sigma_short);
            if (got != a) ++violations;
            bal -= a;
            paid += a;
            ++takes;
            break;
          }
          default:
            if (!offers.empty()) c.release_expired("briber", offers[rng() % offers.size()].first);
        }
      } catch (const ContractRevert&) {
        ++reverts;
        if (c.state_digest() != before) ++violations;
      }
      Gwei received = 0;
      for (const auto& [addr, v] : c.received()) received += v;
      if (c.balance() < 0 || c.encumbered() > c.balance() || c.balance() != bal || c.total_payouts() != paid ||
          c.total_withdrawals() != withdrawn ||
          c.total_deposits() != c.balance() + c.total_payouts() + c.total_refunds() + c.total_withdrawals() ||
          received != c.total_payouts() + c.total_refunds() + c.total_withdrawals())
        ++violations;
    }
  }
  o.expect(violations == 0, std::to_string(violations) + " conservation violations");
  o.expect(takes > 100, "too few accepted claims in the fuzz");
  o.note("10000 sequences, " + std::to_string(takes) + " paid claims, " + std::to_string(reverts) + " reverts, " +
         std::to_string(violations) + " violations");

  // Named rejections.
  std::map<std::string, std::optional<ContractError>> codes;
  {
    contracts::PayToExit c("briber", scheme, ch);
    c.deposit_funds("briber", 100);
    c.update_bribe_amnt("briber", 9);
    auto claim = [&](chain::ValidatorIndex i) {
      const auto& v = ch.validators().at(i);
      chain::VoluntaryExit e{0, i};
      return std::tuple{i, v.keys.pk, e, scheme->sign(v.keys.sk, e.serialize()), ch.validators().deposit_proof(i)};
    };
    auto [i7, pk7, e7, s7, p7] = claim(7);
    o.expect(!revert_of([&] { c.exit_take("x", i7, pk7, e7, s7, p7); }), "first exit claim rejected");
    codes["double-claim"] = revert_of([&] { c.exit_take("x", i7, pk7, e7, s7, p7); });
    auto [i8, pk8, e8, s8, p8] = claim(8);
    auto tampered = p8;
    tampered.siblings[0][0] ^= 1;
    codes["tampered merkle proof"] = revert_of([&] { c.exit_take("x", i8, pk8, e8, s8, tampered); });
    codes["wrong index"] = revert_of([&] { c.exit_take("x", 9, pk8, e8, s8, p8); });
  }
  {
    contracts::PayToAttest c("briber", scheme, ch);
    c.deposit_funds("briber", 10);
    const auto live = c.attest_offer("briber", pks, m, ch.now() + 100, 2);
    const auto stale = c.attest_offer("briber", pks, m, ch.now() + 1, 2);
    auto bad = sigma;
    bad.bytes[bad.bytes.size() / 2] ^= 0x10;
    codes["tampered attestation proof"] = revert_of([&] { c.attest_take("x", live, bad); });
    ch.advance_to(ch.now() + 2);
    codes["post-deadline claim"] = revert_of([&] { c.attest_take("x", stale, sigma); });
  }
  std::set<ContractError> distinct;
  std::string listing;
  for (const auto& [what, code] : codes) {
    o.expect(code.has_value(), what + " was accepted");
    if (code) distinct.insert(*code), listing += what + "=" + std::string(contracts::to_string(*code)) + " ";
  }
  o.expect(codes["double-claim"] == ContractError::DoubleClaim, "double-claim code");
  o.expect(codes["post-deadline claim"] == ContractError::Expired, "post-deadline code");
  o.expect(codes["tampered attestation proof"] == ContractError::InvalidSignature, "tampered proof code");
  o.expect(codes["wrong index"] == ContractError::BadMerkleProof, "wrong-index code");
  o.expect(codes["tampered merkle proof"] == ContractError::BadMerkleProof, "tampered merkle code");
  const std::set<ContractError> four = {*codes["double-claim"], *codes["post-deadline claim"],
                                        *codes["tampered attestation proof"], *codes["wrong index"]};
  o.expect(four.size() == 4, "rejection codes are not distinct");
  o.note(listing);

  // Diagonal property: every (claimed, executed) pair for k <= 6, which is
  // all 4^k pairs, so the k <= 3 exhaustive case is included.
  std::size_t pairs = 0, wrong = 0;
  for (unsigned k = 1; k <= 6; ++k) {
    const std::uint64_t n = std::uint64_t{1} << k;
    for (std::uint64_t executed = 0; executed < n; ++executed) {
      auto bc = attacks::build_bias_chain(k);
      auto& bch = *bc.chain;
      const auto& cfg = bch.config();
      std::vector<std::unique_ptr<contracts::PayToBias>> cs;
      for (std::uint64_t claimed = 0; claimed < n; ++claimed) {
        cs.push_back(std::make_unique<contracts::PayToBias>("manipulator", bch.scheme_ptr(), bch));
        cs.back()->bias_offer("manipulator", 0, bc.pks, bc.reveals, cfg.slot_start(bc.first_tail_slot),
                              cfg.slot_start(cfg.epoch_start(2)));
        cs.back()->bias_bid("bidder", 0, claimed, 1);
      }
      const auto evidence = attacks::execute_tail(bc, executed);
      for (std::uint64_t claimed = 0; claimed < n; ++claimed) {
        const auto code = revert_of([&] { cs[claimed]->bias_take("manipulator", 0, evidence); });
        const bool ok = claimed == executed ? !code : code == ContractError::TimestampGap;
        wrong += !ok;
        ++pairs;
      }
    }
  }
  o.expect(wrong == 0, std::to_string(wrong) + " diagonal violations");
  o.note("diagonal: " + std::to_string(pairs) + " (claimed, executed) pairs for k=1..6, " + std::to_string(wrong) +
         " violations");
  return o;
}

// --- 8 ------------------------------------------------------------------

Outcome randao() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t rows = 0, mismatches = 0;
  for (unsigned k = 1; k <= 10; ++k) {
    auto base = attacks::build_bias_chain(k);
    const auto table = attacks::randao_enumerate(base.chain->block(base.pre_tail).mix, base.reveals);
    o.expect(table.size() == (std::size_t{1} << k), "table size at k=" + std::to_string(k));
    std::set<chain::Root> seen;
    for (const auto& row : table) {
      auto replay = attacks::build_bias_chain(k);
      attacks::execute_tail(replay, row.config);
      mismatches += replay.chain->randao_mix(0) != row.mix;
      seen.insert(row.mix);
      ++rows;
    }
    o.expect(seen.size() == table.size(), "duplicate mixes at k=" + std::to_string(k));
  }
  o.expect(mismatches == 0, std::to_string(mismatches) + " enumerated mixes differ from replay");

  // Settlement pays the winning side's total and refunds everyone else.
  std::mt19937_64 rng(5);
  std::size_t auctions = 0;
  for (unsigned k = 1; k <= 4; ++k) {
    for (int round = 0; round < 5; ++round) {
      std::vector<contracts::Bid> bids;
      std::map<contracts::TailConfig, Gwei> totals;
      std::map<std::string, Gwei> by_bidder;
      const int nb = 1 + static_cast<int>(rng() % 6);
      for (int b = 0; b < nb; ++b) {
        const auto cfg = rng() % (std::uint64_t{1} << k);
        const Gwei amt = 1 + static_cast<Gwei>(rng() % 1000);
        const std::string who = "bidder-" + std::to_string(b);
        bids.push_back({who, cfg, amt});
        totals[cfg] += amt;
        by_bidder[who] += amt;
      }
      // Oracle winner: largest total, ties to the smallest config.
      contracts::TailConfig winner = totals.begin()->first;
      for (const auto& [c, v] : totals)
        if (v > totals[winner]) winner = c;
      const auto rep = attacks::run_bias_auction(k, bids, {});
      ++auctions;
      o.expect(rep.winner == winner, "winner differs from oracle");
      o.expect(rep.accepted, "settlement rejected: " + rep.rejection);
      o.expect(rep.payout == totals[winner], "payout " + std::to_string(rep.payout));
      o.expect(rep.realized_mix == rep.predicted_mix, "realized mix differs from table");
      const auto& rec = rep.received;
      o.expect(rec.count("manipulator") && rec.at("manipulator") == totals[winner], "manipulator not paid the total");
      for (const auto& b : bids) {
        if (b.config == winner) continue;
        o.expect(rec.count(b.bidder) && rec.at(b.bidder) >= b.amount, "losing bid not refunded");
      }
    }
  }
  o.note(std::to_string(rows) + " configurations replayed for k=1..10, " + std::to_string(mismatches) +
         " mismatches; " + std::to_string(auctions) + " auctions settled (" + fmt("%.1f", seconds_since(t0)) + " s)");
  return o;
}

// --- 9 ------------------------------------------------------------------

// These published quantities cannot be reproduced here. The criterion is
// met when each one is replaced by its stated substitute and the
// substitute holds.
Outcome not_reproducible() {
  Outcome o;
  // Gas costs: substituted by pairing counts (checked under criterion 6).
  o.expect(g_pairing_counts_ok, "pairing-count substitute for gas costs failed");
  o.note("gas costs: EVM-specific, substituted by pairing counts 2 vs n+1 (" +
         std::string(g_pairing_counts_ok ? "hold" : "FAIL") + ")");

  // Absolute USD exit-bribe cells: monotone structure only.
  const auto cfg = cli::load_config(std::string(BRIBERY_CONFIG_DIR) + "/sept-2025.ini");
  const auto ax = economics::axis(0.01, 0.5, 100);
  const auto cells = economics::exit_bribe_grid(cfg.validators, ax, ax, cfg.econ);
  auto at = [&](std::size_t i, std::size_t j) -> const economics::HeatCell& { return cells[i * ax.size() + j]; };
  std::size_t breaks = 0, pairs = 0;
  for (std::size_t i = 0; i < ax.size(); ++i)
    for (std::size_t j = 0; j < ax.size(); ++j) {
      if (!at(i, j).feasible) continue;
      if (j + 1 < ax.size()) breaks += !(at(i, j).value < at(i, j + 1).value), ++pairs;
      if (i + 1 < ax.size() && at(i + 1, j).feasible) breaks += !(at(i + 1, j).value < at(i, j).value), ++pairs;
    }
  o.expect(breaks == 0, std::to_string(breaks) + " monotonicity breaks in the exit-bribe map");
  o.note("exit-bribe USD cells: implied ETH rate inconsistent; monotone in alpha and alpha* over " +
         std::to_string(pairs) + " neighbour pairs");

  // Exogenous-profit threshold: reported next to the computed break-even.
  const auto eq = economics::solve_equilibrium({cfg.validators, cfg.alpha, chain::to_double(cfg.alpha_star), 1}, cfg.econ);
  o.expect(eq.leader.break_even.value > 0, "break-even not computed");
  o.note("exogenous-profit threshold: computed break-even " + fmt("%.1f", eq.leader.break_even.value) +
         " ETH vs published " + fmt("%.1f", cfg.reference_threshold_eth) + " ETH/year (reported, not asserted)");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"stackelberg chain (k*, b*, USD, runtime)", stackelberg_chain},
      {"half-life and pv(half-life) = perpetuity / 2", half_life},
      {"exit duration and annotated duration cells", exit_duration},
      {"ex-post cost sweep max, bound and boundary", expost_cost},
      {"predicate / simulation agreement with exact weights", predicate_agreement},
      {"crypto fuzz and pairing counts", crypto_properties},
      {"contract safety suite", contract_safety},
      {"RANDAO enumeration and auction settlement", randao},
      {"explicitly non-reproducible items and substitutes", not_reproducible},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool pass = o.failures.empty();
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ["
              << fmt("%.2f", seconds_since(t0)) << " s]\n";
    for (const auto& n : o.notes) std::cout << "    " << n << '\n';
    for (std::size_t f = 0; f < o.failures.size() && f < 5; ++f) std::cout << "    failure: " << o.failures[f] << '\n';
    if (o.failures.size() > 5) std::cout << "    ... " << o.failures.size() - 5 << " more\n";
    std::cout.flush();
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - static_cast<std::size_t>(failed) << "/"
            << criteria.size() << '\n';
  return failed ? 1 : 0;
}
