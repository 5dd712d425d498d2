#include "gramtao/semantics.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gramtao/errors.hpp"

namespace gramtao {

namespace {

struct Evaluator {
  const GrammarSpec& spec;
  const Domain& domain;
  TagEnv& tags;
  std::unordered_map<const DerivNode*, SemValue>* node_values;

  SemValue eval_node(const DerivNode* n) {
    const Production& p = *n->production;
    std::vector<std::optional<SemValue>> vals(p.rhs.size());
    std::size_t i = 0;
    for (const DerivNode* c = n->first_child; c; c = c->next_sibling, ++i) {
      if (c->label.kind == SymbolKind::Variable)
        vals[i] = eval_node(c);
      else if (c->label.kind == SymbolKind::Symbolic)
        vals[i] = SemValue::make_int(c->value);
    }

    SemValue v;
    if (p.sem) {
      v = eval_term(*p.sem, vals);
    } else if (p.relay_child >= 0) {
      v = *vals[p.relay_child];
    } else {
      // No term and no single symbol: the rule's value is its own script
      // text. Tags bound above this node are not in scope here and render
      // symbolically.
      v = SemValue::make_text(yield_text_lenient(n, tags));
    }

    tags.bind(n, 0, v);
    if (p.tag) tags.bind(n, *p.tag, v);
    if (node_values) (*node_values)[n] = v;
    return v;
  }

  SemValue eval_term(const SemTerm& t, const std::vector<std::optional<SemValue>>& vals) {
    switch (t.kind) {
      case SemTerm::Kind::ChildRef:
        return *vals[t.child_pos];
      case SemTerm::Kind::ConstText:
        return SemValue::make_text(t.text);
      case SemTerm::Kind::ConstBool:
        return SemValue::make_bool(t.flag);
      case SemTerm::Kind::Apply: {
        const Domain::Op* op = domain.find(t.name);
        if (!op) throw EvalError(t.name, "unknown operation");
        if (op->arity != static_cast<int>(t.args.size()))
          throw EvalError(t.name, "arity mismatch");
        std::vector<SemValue> args;
        args.reserve(t.args.size());
        for (const SemTerm& a : t.args) args.push_back(eval_term(a, vals));
        return op->fn(args);
      }
    }
    throw EvalError("?", "malformed term");
  }
};

}  // namespace

EvalOutcome evaluate(const GrammarSpec& spec, const Domain& domain, const DerivNode* root,
                     std::unordered_map<const DerivNode*, SemValue>* node_values) {
  EvalOutcome out;
  Evaluator ev{spec, domain, out.tags, node_values};
  out.oracle = ev.eval_node(root);
  return out;
}

SemValue instant_oracle(const GrammarSpec& spec, const Domain& domain, const DerivNode* root,
                        TagEnv* refreshed) {
  EvalOutcome out = evaluate(spec, domain, root);
  if (refreshed) *refreshed = std::move(out.tags);
  return out.oracle;
}

void TestArtifact::refresh(const Domain& domain) {
  TagEnv fresh;
  Evaluator ev{tree.spec(), domain, fresh, nullptr};
  SemValue v = ev.eval_node(tree.root());
  std::string rendered = yield_text(tree.root(), fresh);
  oracle = std::move(v);
  oracle_error.clear();
  tags = std::move(fresh);
  text = std::move(rendered);
}

TestArtifact TestArtifact::clone(const Domain& domain) const {
  TestArtifact out(tree.clone());
  out.origin = origin;
  if (has_oracle()) {
    out.refresh(domain);
  } else {
    EvalOutcome partial;
    Evaluator ev{tree.spec(), domain, partial.tags, nullptr};
    try {
      ev.eval_node(out.tree.root());
    } catch (const std::exception&) {
    }
    out.oracle_error = oracle_error;
    out.tags = std::move(partial.tags);
    out.text = yield_text_lenient(out.tree.root(), out.tags);
  }
  return out;
}

TestArtifact make_artifact(DerivationTree tree, const Domain& domain, SeedInfo origin) {
  TestArtifact art(std::move(tree));
  art.origin = origin;
  try {
    art.refresh(domain);
  } catch (const std::exception& e) {
    art.oracle.reset();
    art.oracle_error = e.what();
    TagEnv partial;
    Evaluator ev{art.tree.spec(), domain, partial, nullptr};
    try {
      ev.eval_node(art.tree.root());
    } catch (const std::exception&) {
    }
    art.tags = std::move(partial);
    art.text = yield_text_lenient(art.tree.root(), art.tags);
  }
  return art;
}

std::vector<TestArtifact> make_artifacts(const GrammarSpec& spec, const Domain& domain,
                                         const GenConfig& cfg, bool* exhausted) {
  GenResult gen = generate(spec, cfg);
  if (exhausted) *exhausted = gen.exhausted;
  std::vector<TestArtifact> out;
  out.reserve(gen.trees.size());
  for (std::size_t i = 0; i < gen.trees.size(); ++i)
    out.push_back(make_artifact(std::move(gen.trees[i]), domain,
                                SeedInfo{cfg.seed, static_cast<uint32_t>(i)}));
  return out;
}

// --- arithmetic domain ------------------------------------------------------

namespace {

int64_t want_int(const char* op, const SemValue& v) {
  if (v.kind != SemValue::Kind::Int)
    throw EvalError(op, std::string("expected Int, got ") + kind_name(v.kind));
  return v.i;
}

}  // namespace

Domain builtin_domain_arith() {
  Domain d;
  d.name = "int";
  d.add("intAdd", 2, [](std::span<const SemValue> a) {
    int64_t x = want_int("intAdd", a[0]), y = want_int("intAdd", a[1]), r;
    if (__builtin_add_overflow(x, y, &r)) throw EvalError("intAdd", "overflow");
    return SemValue::make_int(r);
  });
  d.add("intSub", 2, [](std::span<const SemValue> a) {
    int64_t x = want_int("intSub", a[0]), y = want_int("intSub", a[1]), r;
    if (__builtin_sub_overflow(x, y, &r)) throw EvalError("intSub", "overflow");
    return SemValue::make_int(r);
  });
  d.add("intMul", 2, [](std::span<const SemValue> a) {
    int64_t x = want_int("intMul", a[0]), y = want_int("intMul", a[1]), r;
    if (__builtin_mul_overflow(x, y, &r)) throw EvalError("intMul", "overflow");
    return SemValue::make_int(r);
  });
  d.add("intDiv", 2, [](std::span<const SemValue> a) {
    int64_t x = want_int("intDiv", a[0]), y = want_int("intDiv", a[1]);
    if (y == 0) throw EvalError("intDiv", "divide by zero");
    if (x == INT64_MIN && y == -1) throw EvalError("intDiv", "overflow");
    return SemValue::make_int(x / y);  // truncates toward zero
  });
  return d;
}

// --- parking domain ---------------------------------------------------------

namespace {

bool leap_year(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int table[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && leap_year(y)) return 29;
  return table[m - 1];
}

// Days since 1970-01-01, proleptic Gregorian (Howard Hinnant's civil days).
int64_t days_from_civil(int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

const int64_t kEpochDays2014 = days_from_civil(2014, 1, 1);

struct Hm {
  int h = 0, m = 0;
};

Hm parse_time_text(const char* op, const std::string& s) {
  Hm out;
  int sec = 0;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%d/%d/%d%c", &out.h, &out.m, &sec, &extra) != 3)
    throw EvalError(op, "malformed time '" + s + "'");
  return out;
}

std::string want_text(const char* op, const SemValue& v) {
  if (v.kind != SemValue::Kind::Text)
    throw EvalError(op, std::string("expected Text, got ") + kind_name(v.kind));
  return v.s;
}

int64_t want_wide(const char* op, const SemValue& v) {
  if (v.kind != SemValue::Kind::Wide)
    throw EvalError(op, std::string("expected Wide, got ") + kind_name(v.kind));
  return v.i;
}

}  // namespace

int64_t parking_epoch_ms(int year, int month, int day, int hour24, int minute) {
  if (month < 1 || month > 12) throw EvalError("date", "month out of range");
  if (day < 1 || day > days_in_month(year, month)) throw EvalError("date", "day out of range");
  if (hour24 < 0 || hour24 > 23) throw EvalError("time", "hour out of range");
  if (minute < 0 || minute > 59) throw EvalError("time", "minute out of range");
  int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) -
                 kEpochDays2014;
  return (((days * 24 + hour24) * 60) + minute) * 60000;
}

double parking_price(const RateTable::Rates& rates, int64_t duration_ms) {
  if (duration_ms <= 0) return 0.0;
  int64_t ticks = (duration_ms + 1800000 - 1) / 1800000;  // ceil to half hours
  int64_t total = 0;
  while (ticks > 0) {
    int64_t week_ticks = std::min<int64_t>(ticks, 336);
    int64_t week = 0;
    int64_t wt = week_ticks;
    while (wt > 0) {
      int64_t day_ticks = std::min<int64_t>(wt, 48);
      int64_t day = (day_ticks / 2) * rates.hour + (day_ticks % 2) * rates.halfhour;
      week += std::min(day, rates.daymax);
      wt -= day_ticks;
    }
    total += std::min(week, rates.weekmax);
    ticks -= week_ticks;
  }
  return static_cast<double>(total) / 100.0;
}

const RateTable::Rates& RateTable::at(const std::string& lot) const {
  auto it = lots.find(lot);
  if (it == lots.end()) throw EvalError("price", "unknown lot type '" + lot + "'");
  return it->second;
}

RateTable RateTable::defaults() {
  RateTable t;
  t.lots["short"] = {200, 400, 2400, 12000};
  t.lots["economy"] = {100, 200, 1000, 5500};
  t.lots["surface"] = {125, 250, 1300, 7000};
  t.lots["garage"] = {150, 300, 1600, 8500};
  t.lots["valet"] = {300, 600, 3000, 16000};
  return t;
}

namespace {

int64_t parse_cents(const std::string& s, int line) {
  auto bad = [&] {
    return std::runtime_error("rates line " + std::to_string(line) + ": bad amount '" + s + "'");
  };
  std::size_t dot = s.find('.');
  std::string whole = dot == std::string::npos ? s : s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (whole.empty() || frac.size() > 2) throw bad();
  for (char c : whole)
    if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
  for (char c : frac)
    if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
  while (frac.size() < 2) frac += '0';
  return std::stoll(whole) * 100 + (frac.empty() ? 0 : std::stoll(frac));
}

}  // namespace

RateTable RateTable::parse(std::string_view text) {
  RateTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = line;
    std::size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    // accept "key = value" and "key value"
    for (char& c : s)
      if (c == '=') c = ' ';
    std::istringstream ls(s);
    std::string key, value;
    if (!(ls >> key)) continue;
    if (!(ls >> value))
      throw std::runtime_error("rates line " + std::to_string(lineno) + ": missing amount");
    std::size_t dot = key.find('.');
    if (dot == std::string::npos)
      throw std::runtime_error("rates line " + std::to_string(lineno) + ": key must be lot.field");
    std::string lot = key.substr(0, dot);
    std::string field = key.substr(dot + 1);
    int64_t cents = parse_cents(value, lineno);
    Rates& r = t.lots[lot];
    if (field == "halfhour")
      r.halfhour = cents;
    else if (field == "hour")
      r.hour = cents;
    else if (field == "daymax")
      r.daymax = cents;
    else if (field == "weekmax")
      r.weekmax = cents;
    else
      throw std::runtime_error("rates line " + std::to_string(lineno) + ": unknown field '" +
                               field + "'");
  }
  for (const auto& [lot, r] : t.lots) {
    if (r.hour < r.halfhour)
      throw std::runtime_error("rates for '" + lot + "': hourly rate below half-hour rate");
    if (r.halfhour < 0 || r.daymax < 0 || r.weekmax < 0)
      throw std::runtime_error("rates for '" + lot + "': negative amount");
  }
  return t;
}

RateTable RateTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rate table '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Domain builtin_domain_parking(const RateTable& rates) {
  Domain d;
  d.name = "parking";
  d.add("time", 2, [](std::span<const SemValue> a) {
    int64_t h = want_int("time", a[0]), m = want_int("time", a[1]);
    if (h < 1 || h > 12) throw EvalError("time", "hour out of range");
    if (m < 0 || m > 59) throw EvalError("time", "minute out of range");
    return SemValue::make_text(std::to_string(h) + "/" + std::to_string(m) + "/00");
  });
  d.add("time24Fmt", 2, [](std::span<const SemValue> a) {
    if (a[0].kind != SemValue::Kind::Bool)
      throw EvalError("time24Fmt", std::string("expected Bool, got ") + kind_name(a[0].kind));
    bool pm = a[0].b;
    Hm t = parse_time_text("time24Fmt", want_text("time24Fmt", a[1]));
    if (t.h < 1 || t.h > 12) throw EvalError("time24Fmt", "hour out of range");
    int h24 = t.h % 12 + (pm ? 12 : 0);
    return SemValue::make_text(std::to_string(h24) + "/" + std::to_string(t.m) + "/00");
  });
  d.add("date", 3, [](std::span<const SemValue> a) {
    int64_t mo = want_int("date", a[0]), day = want_int("date", a[1]), y = want_int("date", a[2]);
    if (mo < 1 || mo > 12) throw EvalError("date", "month out of range");
    if (y < 1 || y > 9999) throw EvalError("date", "year out of range");
    if (day < 1 || day > days_in_month(static_cast<int>(y), static_cast<int>(mo)))
      throw EvalError("date", "day out of range");
    return SemValue::make_text(std::to_string(mo) + "/" + std::to_string(day) + "/" +
                               std::to_string(y));
  });
  d.add("simpleFmt", 2, [](std::span<const SemValue> a) {
    Hm t = parse_time_text("simpleFmt", want_text("simpleFmt", a[0]));
    std::string ds = want_text("simpleFmt", a[1]);
    int mo = 0, day = 0, y = 0;
    char extra = 0;
    if (std::sscanf(ds.c_str(), "%d/%d/%d%c", &mo, &day, &y, &extra) != 3)
      throw EvalError("simpleFmt", "malformed date '" + ds + "'");
    return SemValue::make_wide(parking_epoch_ms(y, mo, day, t.h, t.m));
  });
  d.add("sfSub", 2, [](std::span<const SemValue> a) {
    return SemValue::make_wide(want_wide("sfSub", a[0]) - want_wide("sfSub", a[1]));
  });
  d.add("price", 2, [rates](std::span<const SemValue> a) {
    std::string lot = want_text("price", a[0]);
    int64_t dur = want_wide("price", a[1]);
    return SemValue::make_real(parking_price(rates.at(lot), dur));
  });
  return d;
}

DomainRegistry builtin_registry(const RateTable& rates) {
  DomainRegistry reg;
  reg.add(builtin_domain_arith());
  reg.add(builtin_domain_parking(rates));
  return reg;
}

}  // namespace gramtao
