#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gramtao/derivgen.hpp"
#include "gramtao/domain.hpp"
#include "gramtao/grammar_spec.hpp"
#include "gramtao/value.hpp"

namespace gramtao {

struct EvalOutcome {
  SemValue oracle;
  TagEnv tags;
};

// Postorder evaluation of the valuation functions over the tree. Relay rules
// pass their sole child's value through; rules with no term and no single
// symbol evaluate to the text of their own yield. Tag binders record the
// node's value anchored at that node ($[0] implicitly at every node).
// Throws EvalError / UnboundTagError.
EvalOutcome evaluate(const GrammarSpec& spec, const Domain& domain, const DerivNode* root,
                     std::unordered_map<const DerivNode*, SemValue>* node_values = nullptr);

// Full re-evaluation of a (possibly just-spliced) tree; also refreshes the
// tag environment when `refreshed` is given so re-rendered text embeds
// up-to-date assertion values.
SemValue instant_oracle(const GrammarSpec& spec, const Domain& domain, const DerivNode* root,
                        TagEnv* refreshed = nullptr);

struct SeedInfo {
  uint64_t seed = 0;
  uint32_t index = 0;
};

struct TestArtifact {
  DerivationTree tree;
  std::string text;
  std::optional<SemValue> oracle;
  std::string oracle_error;  // set when evaluation failed; text is then lenient
  TagEnv tags;
  SeedInfo origin;

  explicit TestArtifact(DerivationTree t) : tree(std::move(t)) {}

  bool has_oracle() const { return oracle.has_value(); }

  // Recomputes text, oracle and tags from the current tree. Throws on
  // evaluation errors (the reducer treats those as a restore signal).
  void refresh(const Domain& domain);

  TestArtifact clone(const Domain& domain) const;
};

// Renders and evaluates a generated tree. Evaluation errors are captured in
// oracle_error instead of thrown; the text is then the lenient rendering.
TestArtifact make_artifact(DerivationTree tree, const Domain& domain, SeedInfo origin = {});

std::vector<TestArtifact> make_artifacts(const GrammarSpec& spec, const Domain& domain,
                                         const GenConfig& cfg, bool* exhausted = nullptr);

// intAdd/intSub/intMul/intDiv over Int with checked 64-bit arithmetic;
// division truncates toward zero, division by zero and overflow throw.
Domain builtin_domain_arith();

// Per-lot parking rates in cents.
struct RateTable {
  struct Rates {
    int64_t halfhour = 0;
    int64_t hour = 0;
    int64_t daymax = 0;
    int64_t weekmax = 0;
  };

  std::map<std::string, Rates> lots;

  const Rates& at(const std::string& lot) const;

  static RateTable defaults();
  static RateTable parse(std::string_view text);
  static RateTable load_file(const std::string& path);
};

// time/time24Fmt/date/simpleFmt/sfSub/price per the parking calculator
// model. The calendar is proleptic Gregorian with a fixed local epoch of
// 2014-01-01T00:00 and no DST.
Domain builtin_domain_parking(const RateTable& rates);

DomainRegistry builtin_registry(const RateTable& rates = RateTable::defaults());

// Milliseconds since the fixed 2014 epoch. Throws EvalError on an invalid
// date or time component.
int64_t parking_epoch_ms(int year, int month, int day, int hour24, int minute);

// Total fee in dollars for a stay of `duration_ms`: non-positive durations
// are free; otherwise half-hour ticks are priced (full hours at the hourly
// rate, a leftover tick at the half-hour rate), each 24h block clamps at the
// daily maximum and each 7-day block at the weekly maximum.
double parking_price(const RateTable::Rates& rates, int64_t duration_ms);

}  // namespace gramtao
