// gramtao: generate grammar-derived tests with computed oracles, run them
// against an external SUT, and shrink the failures grammar-directed.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "gramtao/gdd.hpp"
#include "gramtao/harness.hpp"
#include "gramtao/semantics.hpp"

using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailures = 1;
constexpr int kExitError = 2;

struct Options {
  std::string spec_path;
  std::string sut;
  std::string strategies;
  std::string report_path;
  std::string input_mode = "stdin";
  uint64_t seed = 1;
  std::size_t count = 100;
  int depth = 12;
  int timeout_ms = 5000;
  unsigned jobs = 1;
  bool currency = false;
  bool serial = false;
  bool jsonl = false;
};

struct Record {
  std::size_t id = 0;
  uint64_t seed = 0;
  uint32_t index = 0;
  std::string text;
  std::string oracle;
  std::string oracle_error;
  std::string verdict;
  std::string actual;
  std::string reduced_text;
  std::string reduced_oracle;
  int steps = -1;
  double ratio = -1.0;
};

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '\\')
      out += "\\\\";
    else if (c == '\n')
      out += "\\n";
    else
      out += c;
  }
  return out;
}

void write_text_block(std::ostream& os, const Record& r) {
  os << "id: " << r.id << "\n";
  os << "seed: " << r.seed << "\n";
  os << "index: " << r.index << "\n";
  os << "text: " << escape(r.text) << "\n";
  if (!r.oracle_error.empty())
    os << "oracle_error: " << escape(r.oracle_error) << "\n";
  else
    os << "oracle: " << r.oracle << "\n";
  if (!r.verdict.empty()) {
    os << "verdict: " << r.verdict << "\n";
    os << "actual: " << escape(r.actual) << "\n";
  }
  if (!r.reduced_text.empty() || r.steps >= 0) {
    os << "reduced_text: " << escape(r.reduced_text) << "\n";
    os << "reduced_oracle: " << r.reduced_oracle << "\n";
    os << "steps: " << r.steps << "\n";
    os << "ratio: " << r.ratio << "\n";
  }
  os << "\n";
}

void write_jsonl(std::ostream& os, const Record& r) {
  ordered_json j;
  j["id"] = r.id;
  j["seed"] = r.seed;
  j["index"] = r.index;
  j["text"] = r.text;
  if (!r.oracle_error.empty())
    j["oracle_error"] = r.oracle_error;
  else
    j["oracle"] = r.oracle;
  if (!r.verdict.empty()) {
    j["verdict"] = r.verdict;
    j["actual"] = r.actual;
  }
  if (!r.reduced_text.empty() || r.steps >= 0) {
    j["reduced_text"] = r.reduced_text;
    j["reduced_oracle"] = r.reduced_oracle;
    j["steps"] = r.steps;
    j["ratio"] = r.ratio;
  }
  os << j.dump() << "\n";
}

struct ReportSink {
  std::ofstream file;
  std::ostream* os = nullptr;
  bool jsonl = false;

  ReportSink(const std::string& path, bool jsonl_mode) : jsonl(jsonl_mode) {
    if (path.empty() || path == "-") {
      os = &std::cout;
    } else {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open report file '" + path + "'");
      os = &file;
    }
  }

  void write(const Record& r) {
    if (jsonl)
      write_jsonl(*os, r);
    else
      write_text_block(*os, r);
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

gramtao::RateTable rates_from_env() {
  if (const char* path = std::getenv("GRAMTAO_RATES"); path && *path)
    return gramtao::RateTable::load_file(path);
  return gramtao::RateTable::defaults();
}

std::vector<std::string> split_command(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

gramtao::SutSpec sut_from_options(const Options& opt) {
  gramtao::SutSpec sut;
  sut.command = split_command(opt.sut);
  if (sut.command.empty()) throw std::runtime_error("--sut is required");
  sut.timeout_ms = opt.timeout_ms;
  sut.serial = opt.serial;
  sut.input_mode = opt.input_mode == "file" ? gramtao::SutSpec::InputMode::FileArg
                                            : gramtao::SutSpec::InputMode::Stdin;
  return sut;
}

struct LoadedSpec {
  gramtao::GrammarSpec spec;
  const gramtao::Domain* domain = nullptr;
};

LoadedSpec load_spec(const std::string& path, const gramtao::DomainRegistry& registry) {
  LoadedSpec out{gramtao::parse_spec(read_file(path), registry), nullptr};
  out.domain = registry.find(out.spec.domain_name);
  return out;
}

Record base_record(std::size_t id, const gramtao::TestArtifact& art) {
  Record r;
  r.id = id;
  r.seed = art.origin.seed;
  r.index = art.origin.index;
  r.text = art.text;
  if (art.has_oracle())
    r.oracle = art.oracle->to_text();
  else
    r.oracle_error = art.oracle_error;
  return r;
}

int cmd_check(const Options& opt, const gramtao::DomainRegistry& registry) {
  LoadedSpec loaded = load_spec(opt.spec_path, registry);
  gramtao::ValidationReport report = gramtao::validate_properness(loaded.spec);
  std::cout << report.to_text();
  return report.ok() ? kExitOk : kExitFailures;
}

int cmd_gen(const Options& opt, const gramtao::DomainRegistry& registry) {
  LoadedSpec loaded = load_spec(opt.spec_path, registry);
  gramtao::GenConfig cfg{opt.seed, opt.count, opt.depth, 1000};
  bool exhausted = false;
  std::vector<gramtao::TestArtifact> artifacts =
      gramtao::make_artifacts(loaded.spec, *loaded.domain, cfg, &exhausted);

  ReportSink sink(opt.report_path, opt.jsonl);
  for (std::size_t i = 0; i < artifacts.size(); ++i) sink.write(base_record(i, artifacts[i]));

  std::cerr << "generated: " << artifacts.size() << "\n";
  if (exhausted)
    std::cerr << "exhausted: structure space ran out before --count was reached\n";
  return kExitOk;
}

struct RunResults {
  std::vector<gramtao::TestArtifact> artifacts;
  std::vector<std::optional<gramtao::Verdict>> verdicts;  // nullopt = no oracle
  std::size_t failures = 0;
  std::size_t executed = 0;
};

RunResults run_all(const Options& opt, const LoadedSpec& loaded, const gramtao::SutSpec& sut) {
  RunResults rr;
  gramtao::GenConfig cfg{opt.seed, opt.count, opt.depth, 1000};
  rr.artifacts = gramtao::make_artifacts(loaded.spec, *loaded.domain, cfg, nullptr);
  rr.verdicts.resize(rr.artifacts.size());

  unsigned jobs = sut.serial ? 1 : opt.jobs;
  gramtao::parallel_for(rr.artifacts.size(), jobs, [&](std::size_t i) {
    if (!rr.artifacts[i].has_oracle()) return;
    rr.verdicts[i] = gramtao::run_one(sut, rr.artifacts[i], opt.currency);
  });

  for (const auto& v : rr.verdicts) {
    if (!v) continue;
    ++rr.executed;
    if (v->kind != gramtao::Verdict::Kind::Pass) ++rr.failures;
  }
  return rr;
}

void fill_verdict(Record& r, const gramtao::Verdict& v) {
  r.verdict = gramtao::verdict_name(v.kind);
  r.actual = v.actual;
}

int cmd_run(const Options& opt, const gramtao::DomainRegistry& registry) {
  LoadedSpec loaded = load_spec(opt.spec_path, registry);
  gramtao::SutSpec sut = sut_from_options(opt);
  RunResults rr = run_all(opt, loaded, sut);

  ReportSink sink(opt.report_path, opt.jsonl);
  for (std::size_t i = 0; i < rr.artifacts.size(); ++i) {
    Record r = base_record(i, rr.artifacts[i]);
    if (rr.verdicts[i]) fill_verdict(r, *rr.verdicts[i]);
    sink.write(r);
  }

  double ratio = rr.executed ? static_cast<double>(rr.failures) / rr.executed : 0.0;
  std::cerr << "generated: " << rr.artifacts.size() << "\n"
            << "executed: " << rr.executed << "\n"
            << "failures: " << rr.failures << "\n"
            << "failure_ratio: " << ratio << "\n";
  return rr.failures ? kExitFailures : kExitOk;
}

int cmd_reduce(const Options& opt, const gramtao::DomainRegistry& registry) {
  LoadedSpec loaded = load_spec(opt.spec_path, registry);
  gramtao::SutSpec sut = sut_from_options(opt);
  RunResults rr = run_all(opt, loaded, sut);

  gramtao::GddOptions gdd_opts;
  if (!opt.strategies.empty())
    gdd_opts.strategies = gramtao::parse_strategy_list(opt.strategies);

  std::vector<std::size_t> failing;
  for (std::size_t i = 0; i < rr.artifacts.size(); ++i)
    if (rr.verdicts[i] && rr.verdicts[i]->kind != gramtao::Verdict::Kind::Pass)
      failing.push_back(i);

  std::vector<std::optional<gramtao::ReductionReport>> reductions(rr.artifacts.size());
  gramtao::FailureChecker checker = gramtao::make_sut_checker(sut, opt.currency);
  unsigned jobs = sut.serial ? 1 : opt.jobs;
  gramtao::parallel_for(failing.size(), jobs, [&](std::size_t k) {
    std::size_t i = failing[k];
    reductions[i] = gramtao::gdd(loaded.spec, *loaded.domain, rr.artifacts[i], checker, gdd_opts);
  });

  ReportSink sink(opt.report_path, opt.jsonl);
  double ratio_sum = 0.0;
  for (std::size_t i = 0; i < rr.artifacts.size(); ++i) {
    Record r = base_record(i, rr.artifacts[i]);
    if (rr.verdicts[i]) fill_verdict(r, *rr.verdicts[i]);
    if (reductions[i]) {
      const gramtao::ReductionReport& red = *reductions[i];
      r.reduced_text = red.reduced.text;
      r.reduced_oracle = red.reduced.oracle ? red.reduced.oracle->to_text() : "";
      r.steps = red.kept_steps();
      r.ratio = red.ratio;
      ratio_sum += red.ratio;
    }
    sink.write(r);
  }

  double ratio = rr.executed ? static_cast<double>(rr.failures) / rr.executed : 0.0;
  std::cerr << "generated: " << rr.artifacts.size() << "\n"
            << "executed: " << rr.executed << "\n"
            << "failures: " << rr.failures << "\n"
            << "failure_ratio: " << ratio << "\n";
  if (!failing.empty())
    std::cerr << "mean_reduction_ratio: " << ratio_sum / static_cast<double>(failing.size())
              << "\n";
  return rr.failures ? kExitFailures : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grammar-driven test generation, oracles, and reduction"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd, bool needs_sut) {
    cmd->add_option("--spec", opt.spec_path, "grammar file")->required()->envname("GRAMTAO_SPEC");
    cmd->add_option("--count", opt.count, "number of tests")->envname("GRAMTAO_COUNT");
    cmd->add_option("--seed", opt.seed, "generation seed")->envname("GRAMTAO_SEED");
    cmd->add_option("--depth", opt.depth, "depth budget")->envname("GRAMTAO_DEPTH");
    cmd->add_option("--report", opt.report_path, "report path ('-' = stdout)")
        ->envname("GRAMTAO_REPORT");
    cmd->add_flag("--jsonl", opt.jsonl, "line-delimited machine-readable report");
    if (needs_sut) {
      cmd->add_option("--sut", opt.sut, "SUT command line")->required()->envname("GRAMTAO_SUT");
      cmd->add_option("--timeout-ms", opt.timeout_ms, "per-run SUT timeout")
          ->envname("GRAMTAO_TIMEOUT_MS");
      cmd->add_option("--jobs", opt.jobs, "parallel SUT invocations")->envname("GRAMTAO_JOBS");
      cmd->add_option("--input-mode", opt.input_mode, "stdin|file")
          ->check(CLI::IsMember({"stdin", "file"}));
      cmd->add_flag("--currency", opt.currency, "compare reals to the cent, allow leading '$'");
      cmd->add_flag("--serial", opt.serial, "never run the SUT concurrently");
    }
  };

  CLI::App* check = app.add_subcommand("check", "parse and validate a grammar");
  check->add_option("--spec", opt.spec_path, "grammar file")->required()->envname("GRAMTAO_SPEC");

  add_common(app.add_subcommand("gen", "generate tests and oracles"), false);
  add_common(app.add_subcommand("run", "generate and execute against a SUT"), true);
  CLI::App* reduce = app.add_subcommand("reduce", "run, then shrink every failing test");
  add_common(reduce, true);
  reduce->add_option("--strategies", opt.strategies,
                     "override the grammar's TAO-reduction directive")
      ->envname("GRAMTAO_STRATEGIES");

  CLI11_PARSE(app, argc, argv);

  try {
    gramtao::DomainRegistry registry = gramtao::builtin_registry(rates_from_env());
    if (app.got_subcommand("check")) return cmd_check(opt, registry);
    if (app.got_subcommand("gen")) return cmd_gen(opt, registry);
    if (app.got_subcommand("run")) return cmd_run(opt, registry);
    if (app.got_subcommand("reduce")) return cmd_reduce(opt, registry);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
